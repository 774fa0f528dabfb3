//! Suite files: blocks of
//!
//! ```text
//! world <path>
//! train <n>
//! eval <n>
//! require <value> | require ratio <g>:<b>
//! seed <n>
//! ```
//!
//! Each `world` line opens a block. `train` and `seed` default to 0; `eval`
//! and `require` are mandatory.

use super::Requirement;
use crate::diag::{tokens, DiagCode, Diagnostic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteEntry {
    /// World file path as written, relative to the suite file.
    pub world: String,
    pub train: u64,
    pub eval: u64,
    pub require: Requirement,
    pub seed: u64,
}

struct Partial {
    line: usize,
    world: String,
    train: Option<u64>,
    eval: Option<u64>,
    require: Option<Requirement>,
    seed: Option<u64>,
    /// A line of this block already failed to parse.
    broken: bool,
}

fn parse_requirement(args: &[(usize, &str)]) -> Option<Requirement> {
    match args {
        [(_, v)] => v.parse().ok().map(Requirement::MinValue),
        [(_, "ratio"), (_, r)] => {
            let (g, b) = r.split_once(':')?;
            let (good, bad) = (g.parse().ok()?, b.parse().ok()?);
            (good + bad > 0).then_some(Requirement::Ratio { good, bad })
        }
        _ => None,
    }
}

pub fn parse_suite(text: &str) -> Result<Vec<SuiteEntry>> {
    let mut diags = Vec::new();
    let mut blocks: Vec<Partial> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokens(raw);
        let Some(&(col, key)) = toks.first() else { continue };
        let args = &toks[1..];
        if key == "world" {
            match args {
                [(_, path)] => blocks.push(Partial {
                    line,
                    world: path.to_string(),
                    train: None,
                    eval: None,
                    require: None,
                    seed: None,
                    broken: false,
                }),
                _ => diags.push(Diagnostic::new(line, col, DiagCode::Syntax, "expected `world <path>`")),
            }
            continue;
        }
        let Some(block) = blocks.last_mut() else {
            diags.push(Diagnostic::new(line, col, DiagCode::Syntax, format!("`{key}` before any `world` line")));
            continue;
        };
        let number = |diags: &mut Vec<Diagnostic>| {
            let parsed = match args {
                [(_, v)] => v.parse::<u64>().ok(),
                _ => None,
            };
            if parsed.is_none() {
                diags.push(Diagnostic::new(line, col, DiagCode::Syntax, format!("`{key}` needs one non-negative integer")));
            }
            parsed
        };
        let slot_taken = match key {
            "train" => block.train.replace(0).is_some(),
            "eval" => block.eval.replace(0).is_some(),
            "seed" => block.seed.replace(0).is_some(),
            "require" => block.require.replace(Requirement::MinValue(0)).is_some(),
            other => {
                diags.push(Diagnostic::new(line, col, DiagCode::Syntax, format!("unknown keyword `{other}`")));
                continue;
            }
        };
        if slot_taken {
            diags.push(Diagnostic::new(line, col, DiagCode::DuplicateDeclaration, format!("`{key}` repeated in block")));
            continue;
        }
        let before = diags.len();
        match key {
            "train" => block.train = number(&mut diags),
            "eval" => block.eval = number(&mut diags),
            "seed" => block.seed = number(&mut diags),
            _ => {
                block.require = parse_requirement(args);
                if block.require.is_none() {
                    diags.push(Diagnostic::new(
                        line,
                        col,
                        DiagCode::Syntax,
                        "expected `require <value>` or `require ratio <g>:<b>`",
                    ));
                }
            }
        }
        block.broken |= diags.len() > before;
    }

    let mut entries = Vec::with_capacity(blocks.len());
    for b in blocks {
        match (b.eval, b.require) {
            (Some(eval), Some(require)) if eval > 0 => entries.push(SuiteEntry {
                world: b.world,
                train: b.train.unwrap_or(0),
                eval,
                require,
                seed: b.seed.unwrap_or(0),
            }),
            _ if b.broken => {}
            (Some(0), _) => diags.push(Diagnostic::new(b.line, 1, DiagCode::OutOfRange, "eval must be at least 1")),
            _ => diags.push(Diagnostic::new(
                b.line,
                1,
                DiagCode::MissingDeclaration,
                format!("block for {:?} needs `eval` and `require`", b.world),
            )),
        }
    }
    if entries.is_empty() && diags.is_empty() {
        diags.push(Diagnostic::new(1, 1, DiagCode::MissingDeclaration, "suite has no `world` blocks"));
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(Error::Parse(diags));
    }
    Ok(entries)
}
