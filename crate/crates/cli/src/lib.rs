//! Command implementations for the `fullgroup` calculator.
//!
//! Every command returns its report as a string; structured reports are JSON
//! and single values (elements, words, integers) are plain text.

pub mod expr;
pub mod weld_file;

use std::fs;

use serde::Serialize;
use thiserror::Error;

use fullgroup::kakutani::WeldAnalysis;
use fullgroup::oracle::LineLabel;
use fullgroup::{
    analyze, canonical_conjugator, canonical_equivalence, index, is_positive, normal_form, positive_form,
    pure_cycle_decomposition, reduce_word, simulate_line, weld, Element, Error, OdometerSystem, WeldedSystem,
    DEFAULT_DEPTH_CAP,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),

    #[error("line {line}: {source}")]
    Line { line: usize, source: Error },

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 3 for internal invariant failures, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) | CliError::Line { source: e, .. } if e.is_internal() => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Analyze { expr: String },
    NormalForm { expr: String },
    ReduceWord { expr: String },
    PositiveForm { expr: String },
    Conjugator { expr: String },
    PureCycles { expr: String },
    Induce { expr: String, set: String },
    Index { expr: String },
    Simulate { expr: String, window: i64 },
    Weld { file: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Options {
    /// `--bases`; when absent, the system of the first element literal or
    /// the dyadic odometer.
    pub bases: Option<String>,
    pub depth_cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            bases: None,
            depth_cap: DEFAULT_DEPTH_CAP,
        }
    }
}

/// An argument of the form `@path` is replaced by the file's contents.
pub fn read_argument(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => read_file(path),
        None => Ok(arg.to_string()),
    }
}

fn read_file(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(|e| CliError::Core(Error::Invariant(e.to_string())))
}

struct Input {
    system: OdometerSystem,
    expr: expr::Expr,
}

fn input(text: &str, opts: &Options) -> Result<Input> {
    let text = read_argument(text)?;
    let e = expr::parse(text.trim())?;
    let system = match &opts.bases {
        Some(b) => b.parse()?,
        None => e.literal_system().cloned().unwrap_or_else(OdometerSystem::dyadic),
    };
    Ok(Input { system, expr: e })
}

fn element(text: &str, opts: &Options) -> Result<Element> {
    let i = input(text, opts)?;
    Ok(i.expr.eval(&i.system)?)
}

fn positive(text: &str, opts: &Options) -> Result<Element> {
    let h = element(text, opts)?;
    if !is_positive(&h) {
        return Err(Error::NotPositive.into());
    }
    Ok(h)
}

#[derive(Serialize)]
struct PureCycleReport {
    base: String,
    length: usize,
    signature: Vec<i64>,
    translates: Vec<String>,
}

#[derive(Serialize)]
struct LabelCounts {
    positive: usize,
    negative: usize,
    periodic: usize,
}

#[derive(Serialize)]
struct BlockReport {
    start: i64,
    positive: u64,
    negative: u64,
}

#[derive(Serialize)]
struct SimulationReport {
    element: String,
    window: i64,
    margin: i64,
    segments: usize,
    mean_exponent: String,
    labels: LabelCounts,
    blocks: Vec<BlockReport>,
}

#[derive(Serialize)]
struct WeldReport {
    components: Vec<String>,
    kappa: Option<String>,
    quotient_cycle: Vec<String>,
    odometer: String,
    table: String,
    element: String,
    o_plus: u64,
    o_minus: u64,
    m: usize,
    index: i64,
}

pub fn run(command: &Command, opts: &Options) -> Result<String> {
    match command {
        Command::Analyze { expr } => json(&analyze(&element(expr, opts)?, opts.depth_cap)?),
        Command::NormalForm { expr } => Ok(normal_form(&element(expr, opts)?)?.to_string()),
        Command::ReduceWord { expr } => {
            let i = input(expr, opts)?;
            let w = i.expr.word(&i.system)?;
            Ok(reduce_word(&w)?.to_string())
        }
        Command::PositiveForm { expr } => Ok(positive_form(&positive(expr, opts)?).to_string()),
        Command::Conjugator { expr } => Ok(canonical_conjugator(&positive(expr, opts)?)?.to_string()),
        Command::PureCycles { expr } => {
            let cycles = pure_cycle_decomposition(&element(expr, opts)?)?;
            let report: Vec<PureCycleReport> = cycles
                .iter()
                .map(|c| PureCycleReport {
                    base: c.base.to_string(),
                    length: c.length(),
                    signature: c.signature.clone(),
                    translates: c.translates().iter().map(ToString::to_string).collect(),
                })
                .collect();
            json(&report)
        }
        Command::Induce { expr, set } => {
            let i = input(expr, opts)?;
            let h = i.expr.eval(&i.system)?;
            let a = expr::parse_set(read_argument(set)?.trim())?.eval(&i.system)?;
            if a.is_empty() {
                return Err(Error::EmptySet.into());
            }
            Ok(h.induced_element(&a)?.to_string())
        }
        Command::Index { expr } => Ok(index(&element(expr, opts)?)?.to_string()),
        Command::Simulate { expr, window } => {
            if *window < 0 {
                return Err(CliError::Usage("window must be nonnegative".into()));
            }
            let h = element(expr, opts)?;
            let stats = simulate_line(&h, *window);
            let count = |f: fn(&LineLabel) -> bool| stats.labels().iter().filter(|l| f(l)).count();
            json(&SimulationReport {
                element: h.to_string(),
                window: stats.window,
                margin: stats.margin,
                segments: stats.segments,
                mean_exponent: stats.mean_exponent.to_string(),
                labels: LabelCounts {
                    positive: count(|l| *l == LineLabel::Positive),
                    negative: count(|l| *l == LineLabel::Negative),
                    periodic: count(|l| matches!(l, LineLabel::Periodic(_))),
                },
                blocks: stats
                    .blocks
                    .iter()
                    .map(|b| BlockReport {
                        start: b.start,
                        positive: b.positive,
                        negative: b.negative,
                    })
                    .collect(),
            })
        }
        Command::Weld { file } => {
            let text = match file.strip_prefix('@') {
                Some(path) => read_file(path)?,
                None => read_file(file)?,
            };
            run_weld(&text, opts)
        }
    }
}

/// Runs a weld description given as text.
pub fn run_weld(text: &str, opts: &Options) -> Result<String> {
    let wf = weld_file::parse(text)?;
    let w = match wf.kappa {
        None => WeldedSystem::single(&wf.components[0]),
        Some((y1, y2)) => {
            let (s1, s2) = (&wf.components[0], &wf.components[1]);
            let k = canonical_equivalence(s1, y1, s2, y2)?;
            weld(s1, s2, &k, opts.depth_cap)?
        }
    };
    for i in 1..=w.components().len() {
        w.induced_on_component(i)?;
    }
    let a: WeldAnalysis = w.weld_element(&wf.specs, opts.depth_cap)?;
    json(&WeldReport {
        components: w.components().iter().map(ToString::to_string).collect(),
        kappa: w.kappa().map(ToString::to_string),
        quotient_cycle: w.quotient_cycle().iter().map(|&t| w.render_tagged(t)).collect(),
        odometer: w.odometer()?.to_string(),
        table: a.render_table(),
        element: a.element.to_string(),
        o_plus: a.o_plus,
        o_minus: a.o_minus,
        m: a.m,
        index: a.index,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_default(c: Command) -> Result<String> {
        run(&c, &Options::default())
    }

    #[test]
    fn plain_outputs() {
        let out = run_default(Command::ReduceWord {
            expr: "g^-1 g_[1]".into(),
        })
        .unwrap();
        assert_eq!(out, "g_[0] g^-1");
        assert_eq!(run_default(Command::Index { expr: "g".into() }).unwrap(), "1");
        let nf = run_default(Command::NormalForm {
            expr: "D2@1{0:3,1:-1}".into(),
        })
        .unwrap();
        assert_eq!(nf, "g_[1]^2 g^-1");
    }

    #[test]
    fn exit_codes() {
        let e = run_default(Command::Index { expr: "g_[".into() }).unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(e.to_string(), "parse error at column 3: unterminated cylinder literal");
        let e = run_default(Command::Conjugator {
            expr: "g^-1".into(),
        })
        .unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert_eq!(CliError::Core(Error::Invariant("x".into())).exit_code(), 3);
    }

    #[test]
    fn explicit_bases_override_the_default() {
        let opts = Options {
            bases: Some("pre=[2] per=[3]".into()),
            ..Options::default()
        };
        let out = run(&Command::Induce { expr: "g".into(), set: "[1]".into() }, &opts).unwrap();
        assert_eq!(out, "D(2;3)@1{0:0,1:2}");
    }
}
