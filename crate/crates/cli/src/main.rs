use std::fs;
use std::process;

use clap::{Parser, Subcommand};

use fullgroup_cli::{run, CliError, Command, Options};

/// Exact calculator for the topological full group of an odometer.
///
/// Expressions compose by juxtaposition with the rightmost factor applied
/// first: `g_[1]^2 g^-1` applies `g^-1`, then `g_[1]` twice. Any EXPR or SET
/// argument of the form `@path` is read from a file.
#[derive(Parser)]
#[command(name = "fullgroup", version)]
struct Cli {
    /// Odometer bases, e.g. `per=[2]` or `pre=[2] per=[3]`.
    #[arg(long, global = true)]
    bases: Option<String>,

    /// Maximum number of refinement levels.
    #[arg(long, global = true, default_value_t = fullgroup::DEFAULT_DEPTH_CAP)]
    depth_cap: usize,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<String>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cycle graph, sign partition, components, orbit numbers and index (JSON).
    Analyze { expr: String },
    /// The induced-generator normal form.
    NormalForm { expr: String },
    /// Rewrites a word in g, g^-1 and g_A to its reduced form.
    ReduceWord { expr: String },
    /// The strongly positive form of a positive element.
    PositiveForm { expr: String },
    /// The canonical conjugator of a positive element onto its positive form.
    Conjugator { expr: String },
    /// Decomposition of the periodic part into pure cycles (JSON).
    PureCycles { expr: String },
    /// The first return of EXPR to SET.
    Induce { expr: String, set: String },
    /// The index of an element.
    Index { expr: String },
    /// Orbit statistics on the integer line (JSON).
    Simulate {
        expr: String,
        #[arg(long, default_value_t = 1000)]
        window: i64,
    },
    /// Welds the odometers described in FILE and analyzes the given map (JSON).
    Weld { file: String },
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Analyze { expr } => Command::Analyze { expr },
            Cmd::NormalForm { expr } => Command::NormalForm { expr },
            Cmd::ReduceWord { expr } => Command::ReduceWord { expr },
            Cmd::PositiveForm { expr } => Command::PositiveForm { expr },
            Cmd::Conjugator { expr } => Command::Conjugator { expr },
            Cmd::PureCycles { expr } => Command::PureCycles { expr },
            Cmd::Induce { expr, set } => Command::Induce { expr, set },
            Cmd::Index { expr } => Command::Index { expr },
            Cmd::Simulate { expr, window } => Command::Simulate { expr, window },
            Cmd::Weld { file } => Command::Weld { file },
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let opts = Options {
        bases: cli.bases,
        depth_cap: cli.depth_cap,
    };
    let result = run(&cli.command.into(), &opts).and_then(|report| match &cli.out {
        Some(path) => fs::write(path, format!("{report}\n")).map_err(|e| CliError::Io {
            path: path.clone(),
            message: e.to_string(),
        }),
        None => {
            println!("{report}");
            Ok(())
        }
    });
    if let Err(e) = result {
        eprintln!("error: {e}");
        process::exit(e.exit_code());
    }
}
