//! Policy text format: blocks of
//!
//! ```text
//! states=<n> start=<i>
//! <state> <in-letter> -> <out-letter> <next-state>
//! ```
//!
//! with one transition line per `(state, in-letter)` pair. Blocks are
//! separated by blank lines; `#` starts a comment.

use std::fmt::Write;
use std::sync::Arc;

use super::TransducerPolicy;
use crate::alphabet::{Alphabet, Letter};
use crate::diag::{tokens, DiagCode, Diagnostic};
use crate::error::{Error, Result};

pub fn print_policy(policy: &TransducerPolicy) -> String {
    let sigma = policy.sigma_arc();
    let omega = policy.omega_arc();
    let mut out = format!("states={} start={}\n", policy.state_count(), policy.start());
    for q in 0..policy.state_count() {
        for i in sigma.letters() {
            let _ = writeln!(
                out,
                "{q} {} -> {} {}",
                sigma.name(i),
                omega.name(policy.output(q, i)),
                policy.next_state(q, i)
            );
        }
    }
    out
}

struct Block {
    line: usize,
    states: usize,
    start: usize,
    cells: Vec<Option<(Letter, usize)>>,
    broken: bool,
}

pub fn parse_policies(text: &str, sigma: Arc<Alphabet>, omega: Arc<Alphabet>) -> Result<Vec<TransducerPolicy>> {
    let m = sigma.len();
    let mut diags = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokens(raw);
        let Some(&(col, first)) = toks.first() else { continue };

        if first.starts_with("states=") {
            let mut states = None;
            let mut start = None;
            for &(c, t) in &toks {
                let parsed = match t.split_once('=') {
                    Some(("states", v)) => v.parse().map(|v| states = Some(v)),
                    Some(("start", v)) => v.parse().map(|v| start = Some(v)),
                    _ => {
                        diags.push(Diagnostic::new(line, c, DiagCode::Syntax, format!("unexpected {t:?}")));
                        Ok(())
                    }
                };
                if parsed.is_err() {
                    diags.push(Diagnostic::new(line, c, DiagCode::Syntax, format!("bad number in {t:?}")));
                }
            }
            match (states, start) {
                (Some(n), Some(s)) if n >= 1 && s < n => {
                    blocks.push(Block { line, states: n, start: s, cells: vec![None; n * m], broken: false })
                }
                (Some(n), Some(s)) => diags.push(Diagnostic::new(
                    line,
                    col,
                    DiagCode::OutOfRange,
                    format!("start {s} with {n} states"),
                )),
                _ => diags.push(Diagnostic::new(line, col, DiagCode::Syntax, "header needs states= and start=")),
            }
            continue;
        }

        let Some(block) = blocks.last_mut() else {
            diags.push(Diagnostic::new(line, col, DiagCode::Syntax, "transition before states= header"));
            continue;
        };
        let [(_, q), (ic, input), (ac, arrow), (oc, output), (nc, next)] = toks[..] else {
            diags.push(Diagnostic::new(
                line,
                col,
                DiagCode::Syntax,
                "expected `<state> <in-letter> -> <out-letter> <next-state>`",
            ));
            block.broken = true;
            continue;
        };
        if arrow != "->" {
            diags.push(Diagnostic::new(line, ac, DiagCode::Syntax, "expected `->`"));
            block.broken = true;
            continue;
        }
        let state = match q.parse::<usize>() {
            Ok(q) if q < block.states => Some(q),
            _ => {
                diags.push(Diagnostic::new(line, col, DiagCode::UnknownState, format!("state {q:?}")));
                None
            }
        };
        let next = match next.parse::<usize>() {
            Ok(n) if n < block.states => Some(n),
            _ => {
                diags.push(Diagnostic::new(line, nc, DiagCode::UnknownState, format!("state {next:?}")));
                None
            }
        };
        let input = sigma.lookup(input).or_else(|| {
            diags.push(Diagnostic::new(line, ic, DiagCode::UnknownLetter, format!("{input:?} not in sigma")));
            None
        });
        let output = omega.lookup(output).or_else(|| {
            diags.push(Diagnostic::new(line, oc, DiagCode::UnknownLetter, format!("{output:?} not in omega")));
            None
        });
        if let (Some(q), Some(i), Some(o), Some(n)) = (state, input, output, next) {
            let cell = &mut block.cells[q * m + i.0];
            if cell.is_some() {
                diags.push(Diagnostic::new(line, col, DiagCode::DuplicateTransition, "transition given twice"));
            }
            *cell = Some((o, n));
        } else {
            block.broken = true;
        }
    }

    let mut policies = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut out = Vec::with_capacity(block.cells.len());
        let mut next = Vec::with_capacity(block.cells.len());
        for (cell, entry) in block.cells.iter().enumerate() {
            match entry {
                Some((o, n)) => {
                    out.push(*o);
                    next.push(*n);
                }
                None if block.broken => {}
                None => diags.push(Diagnostic::new(
                    block.line,
                    1,
                    DiagCode::MissingTransition,
                    format!("no transition for state {} on {:?}", cell / m, sigma.name(Letter(cell % m))),
                )),
            }
        }
        if out.len() == block.cells.len() {
            policies.push(TransducerPolicy::new(
                sigma.clone(),
                omega.clone(),
                block.states,
                block.start,
                out,
                next,
            )?);
        }
    }
    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(Error::Parse(diags));
    }
    if policies.is_empty() {
        return Err(Error::Parse(vec![Diagnostic::new(1, 1, DiagCode::MissingDeclaration, "no policy found")]));
    }
    Ok(policies)
}
