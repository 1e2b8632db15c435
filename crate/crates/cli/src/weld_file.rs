//! Weld descriptions.
//!
//! ```text
//! # two dyadic odometers glued along [0]
//! component 1 bases per=[2]
//! component 2 bases per=[2]
//! kappa 1:[0] 2:[0]
//! spec 1 g
//! spec 2 g^-1
//! ```
//!
//! `kappa` is omitted when there is a single component. Each `spec` line is
//! an expression over that component's odometer.

use fullgroup::clopen::parse_cylinder_prefix;
use fullgroup::{Cylinder, Element, Error, OdometerSystem};

use crate::expr;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeldFile {
    pub components: Vec<OdometerSystem>,
    pub kappa: Option<(Cylinder, Cylinder)>,
    pub specs: Vec<Element>,
}

fn at(line: usize, column: usize, source: Error) -> CliError {
    let source = match source {
        Error::Parse { column: c, message } => Error::Parse {
            column: column + c - 1,
            message,
        },
        other => other,
    };
    CliError::Line { line, source }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> CliError {
    at(
        line,
        1,
        Error::Parse {
            column,
            message: message.into(),
        },
    )
}

/// Splits off the first whitespace-delimited word, returning it, its column
/// and the rest with the rest's column.
fn word(text: &str, column: usize) -> Option<(&str, usize, &str, usize)> {
    let lead = text.len() - text.trim_start().len();
    let t = &text[lead..];
    if t.is_empty() {
        return None;
    }
    let end = t.find(char::is_whitespace).unwrap_or(t.len());
    Some((&t[..end], column + lead, &t[end..], column + lead + end))
}

fn component_index(line: usize, text: &str, column: usize, count: usize) -> Result<usize, CliError> {
    match text.parse::<usize>() {
        Ok(i) if (1..=count.max(1)).contains(&i) => Ok(i),
        _ => Err(syntax(line, column, format!("expected a component number, found '{text}'"))),
    }
}

pub fn parse(text: &str) -> Result<WeldFile, CliError> {
    let mut components: Vec<Option<OdometerSystem>> = vec![None, None];
    let mut kappa_line = None;
    let mut spec_lines = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap();
        let Some((key, key_col, rest, rest_col)) = word(content, 1) else {
            continue;
        };
        match key {
            "component" => {
                let (idx, idx_col, sys, sys_col) =
                    word(rest, rest_col).ok_or_else(|| syntax(line, rest_col, "expected a component number"))?;
                let i = component_index(line, idx, idx_col, 2)?;
                if components[i - 1].is_some() {
                    return Err(syntax(line, idx_col, format!("component {i} declared twice")));
                }
                let system: OdometerSystem = sys.parse().map_err(|e| at(line, sys_col, e))?;
                components[i - 1] = Some(system);
            }
            "kappa" => {
                if kappa_line.is_some() {
                    return Err(syntax(line, key_col, "kappa given twice"));
                }
                kappa_line = Some((line, rest.to_string(), rest_col));
            }
            "spec" => {
                let (idx, idx_col, e, e_col) =
                    word(rest, rest_col).ok_or_else(|| syntax(line, rest_col, "expected a component number"))?;
                let i = component_index(line, idx, idx_col, 2)?;
                spec_lines.push((line, i, idx_col, e.to_string(), e_col));
            }
            _ => return Err(syntax(line, key_col, format!("unknown directive '{key}'"))),
        }
    }

    let components: Vec<OdometerSystem> = match components.as_slice() {
        [Some(a), Some(b)] => vec![a.clone(), b.clone()],
        [Some(a), None] => vec![a.clone()],
        _ => return Err(CliError::Usage("weld file must declare component 1 (and optionally 2)".into())),
    };

    let kappa = match (components.len(), kappa_line) {
        (1, None) => None,
        (1, Some((line, _, col))) => return Err(syntax(line, col, "kappa needs two components")),
        (_, None) => return Err(CliError::Usage("weld file has no kappa line".into())),
        (_, Some((line, text, col))) => Some(parse_kappa(line, &text, col, &components)?),
    };

    let mut specs: Vec<Option<Element>> = vec![None; components.len()];
    for (line, i, idx_col, text, col) in spec_lines {
        if i > components.len() {
            return Err(syntax(line, idx_col, format!("no component {i}")));
        }
        if specs[i - 1].is_some() {
            return Err(syntax(line, idx_col, format!("spec {i} given twice")));
        }
        let e = expr::parse(&text)
            .and_then(|e| e.eval(&components[i - 1]))
            .map_err(|e| at(line, col, e))?;
        specs[i - 1] = Some(e);
    }
    let specs = specs
        .into_iter()
        .enumerate()
        .map(|(i, s)| s.ok_or_else(|| CliError::Usage(format!("no spec for component {}", i + 1))))
        .collect::<Result<_, _>>()?;
    Ok(WeldFile {
        components,
        kappa,
        specs,
    })
}

fn parse_kappa(
    line: usize,
    text: &str,
    column: usize,
    components: &[OdometerSystem],
) -> Result<(Cylinder, Cylinder), CliError> {
    let mut out = Vec::new();
    let mut rest = (text, column);
    for expected in 1..=2 {
        let (tok, col, r, rcol) =
            word(rest.0, rest.1).ok_or_else(|| syntax(line, rest.1, "expected a tagged cylinder such as 1:[0]"))?;
        let (tag, cyl) = tok
            .split_once(':')
            .ok_or_else(|| syntax(line, col, "expected a tagged cylinder such as 1:[0]"))?;
        if tag != expected.to_string() {
            return Err(syntax(line, col, format!("expected component {expected}")));
        }
        let cyl_col = col + tag.len() + 1;
        let (c, used) =
            parse_cylinder_prefix(&components[expected - 1], cyl, cyl_col).map_err(|e| at(line, 1, e))?;
        if used != cyl.len() {
            return Err(syntax(line, cyl_col + used, "trailing characters after cylinder"));
        }
        out.push(c);
        rest = (r, rcol);
    }
    if let Some((_, col, _, _)) = word(rest.0, rest.1) {
        return Err(syntax(line, col, "unexpected text after kappa"));
    }
    Ok((out[0], out[1]))
}
