//! The line-oriented world format.
//!
//! ```text
//! # comment
//! sigma <letters...>
//! omega <letters...>
//! good <letters...>
//! bad <letters...>
//! start <state>
//! state <name> view <letter>
//! on <state> <omega-letter> -> <state> [p=<rational>]
//! ```
//!
//! A `(state, action)` pair with one `on` line is deterministic (`p=` may be
//! omitted or `1`). Several lines for one pair form a distribution; each
//! needs `p=n/d` (or an integer) and they must sum to exactly 1. States are
//! numbered in the order of their `state` lines.

use std::collections::HashMap;
use std::fmt::Write;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Letter, Role};
use crate::diag::{tokens, DiagCode, Diagnostic};
use crate::error::{Error, Result};
use crate::meaning::MeaningOfLife;
use crate::world::{Outcome, Prob, State, WorldDef};

/// A parsed world together with its meaning of life.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldFile {
    pub world: WorldDef,
    pub meaning: MeaningOfLife,
}

type Tok<'a> = (usize, &'a str);

struct OnLine<'a> {
    line: usize,
    from: Tok<'a>,
    action: Tok<'a>,
    to: Tok<'a>,
    prob: Option<Tok<'a>>,
}

#[derive(Default)]
struct Raw<'a> {
    sigma: Option<(usize, Vec<Tok<'a>>)>,
    omega: Option<(usize, Vec<Tok<'a>>)>,
    good: Option<(usize, Vec<Tok<'a>>)>,
    bad: Option<(usize, Vec<Tok<'a>>)>,
    start: Option<(usize, Tok<'a>)>,
    states: Vec<(usize, Tok<'a>, Tok<'a>)>,
    ons: Vec<OnLine<'a>>,
    /// Source states of malformed `on` lines.
    broken_ons: Vec<&'a str>,
}

fn parse_prob(text: &str) -> Option<Prob> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.parse().ok()?, d.parse().ok()?),
        None => (text.parse().ok()?, 1u64),
    };
    (d != 0).then(|| Prob::new(n, d))
}

fn collect<'a>(text: &'a str, diags: &mut Vec<Diagnostic>) -> Raw<'a> {
    let mut raw = Raw::default();
    for (lineno, line_text) in text.lines().enumerate() {
        let line = lineno + 1;
        let toks = tokens(line_text);
        let Some(&(col, keyword)) = toks.first() else { continue };
        let args = &toks[1..];
        let once = |slot: &Option<(usize, Vec<Tok<'a>>)>, diags: &mut Vec<Diagnostic>| {
            if let Some((prev, _)) = slot {
                diags.push(Diagnostic::new(
                    line,
                    col,
                    DiagCode::DuplicateDeclaration,
                    format!("`{keyword}` already declared on line {prev}"),
                ));
                false
            } else {
                true
            }
        };
        match keyword {
            "sigma" | "omega" if args.is_empty() => diags.push(Diagnostic::new(
                line,
                col,
                DiagCode::Syntax,
                format!("`{keyword}` needs at least one letter"),
            )),
            "sigma" => {
                if once(&raw.sigma, diags) {
                    raw.sigma = Some((line, args.to_vec()));
                }
            }
            "omega" => {
                if once(&raw.omega, diags) {
                    raw.omega = Some((line, args.to_vec()));
                }
            }
            "good" => {
                if once(&raw.good, diags) {
                    raw.good = Some((line, args.to_vec()));
                }
            }
            "bad" => {
                if once(&raw.bad, diags) {
                    raw.bad = Some((line, args.to_vec()));
                }
            }
            "start" => match args {
                [s] => match raw.start {
                    Some((prev, _)) => diags.push(Diagnostic::new(
                        line,
                        col,
                        DiagCode::DuplicateDeclaration,
                        format!("`start` already declared on line {prev}"),
                    )),
                    None => raw.start = Some((line, *s)),
                },
                _ => diags.push(Diagnostic::new(line, col, DiagCode::Syntax, "expected `start <state>`")),
            },
            "state" => match args {
                [name, (_, "view"), letter] => raw.states.push((line, *name, *letter)),
                _ => diags.push(Diagnostic::new(
                    line,
                    col,
                    DiagCode::Syntax,
                    "expected `state <name> view <letter>`",
                )),
            },
            "on" => match args {
                [from, action, (_, "->"), to] => raw.ons.push(OnLine { line, from: *from, action: *action, to: *to, prob: None }),
                [from, action, (_, "->"), to, (pc, p)] if p.starts_with("p=") => raw.ons.push(OnLine {
                    line,
                    from: *from,
                    action: *action,
                    to: *to,
                    prob: Some((*pc, &p[2..])),
                }),
                _ => {
                    diags.push(Diagnostic::new(
                        line,
                        col,
                        DiagCode::Syntax,
                        "expected `on <state> <action> -> <state> [p=<rational>]`",
                    ));
                    if let Some((_, from)) = args.first() {
                        raw.broken_ons.push(from);
                    }
                }
            },
            other => diags.push(Diagnostic::new(line, col, DiagCode::Syntax, format!("unknown keyword `{other}`"))),
        }
    }
    raw
}

fn alphabet(
    role: Role,
    decl: Option<(usize, Vec<Tok<'_>>)>,
    diags: &mut Vec<Diagnostic>,
) -> Option<Arc<Alphabet>> {
    let Some((line, letters)) = decl else {
        diags.push(Diagnostic::new(1, 1, DiagCode::MissingDeclaration, format!("no `{role}` declaration")));
        return None;
    };
    for (i, (col, l)) in letters.iter().enumerate() {
        if letters[..i].iter().any(|(_, p)| p == l) {
            diags.push(Diagnostic::new(line, *col, DiagCode::DuplicateDeclaration, format!("letter {l:?} listed twice")));
            return None;
        }
    }
    Alphabet::new(role, letters.iter().map(|(_, l)| *l)).ok().map(Arc::new)
}

/// Parses and fully validates a world file. All problems found are
/// reported together.
pub fn parse_world(text: &str) -> Result<WorldFile> {
    let mut diags = Vec::new();
    let raw = collect(text, &mut diags);
    let sigma = alphabet(Role::Input, raw.sigma, &mut diags);
    let omega = alphabet(Role::Output, raw.omega, &mut diags);
    let (Some(sigma), Some(omega)) = (sigma, omega) else {
        return Err(Error::Parse(diags));
    };

    let letter_of = |alpha: &Alphabet, (col, name): Tok<'_>, line: usize, diags: &mut Vec<Diagnostic>| {
        let found = alpha.lookup(name);
        if found.is_none() {
            diags.push(Diagnostic::new(
                line,
                col,
                DiagCode::UnknownLetter,
                format!("{name:?} is not a {} letter", alpha.role()),
            ));
        }
        found
    };

    let subset = |decl: Option<(usize, Vec<Tok<'_>>)>, diags: &mut Vec<Diagnostic>| -> Vec<Letter> {
        decl.map(|(line, letters)| {
            letters.into_iter().filter_map(|t| letter_of(&sigma, t, line, diags)).collect()
        })
        .unwrap_or_default()
    };
    let good = subset(raw.good, &mut diags);
    let bad = subset(raw.bad, &mut diags);

    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut views = Vec::new();
    for &(line, (col, name), letter) in &raw.states {
        if index.contains_key(name) {
            diags.push(Diagnostic::new(line, col, DiagCode::DuplicateState, format!("state {name:?} declared twice")));
            continue;
        }
        index.insert(name, names.len());
        names.push(name.to_string());
        views.push(letter_of(&sigma, letter, line, &mut diags).unwrap_or(Letter(0)));
    }
    if names.is_empty() {
        diags.push(Diagnostic::new(1, 1, DiagCode::MissingDeclaration, "no `state` declarations"));
    }
    let state_of = |(col, name): Tok<'_>, line: usize, diags: &mut Vec<Diagnostic>| {
        let found = index.get(name).copied();
        if found.is_none() {
            diags.push(Diagnostic::new(line, col, DiagCode::UnknownState, format!("state {name:?} is not declared")));
        }
        found
    };
    let start = match raw.start {
        Some((line, tok)) => state_of(tok, line, &mut diags),
        None => {
            diags.push(Diagnostic::new(1, 1, DiagCode::MissingDeclaration, "no `start` declaration"));
            None
        }
    };

    let k = omega.len();
    let mut cells: Vec<Vec<(usize, Outcome, Option<Prob>)>> = vec![Vec::new(); names.len() * k];
    // states with a broken `on` line; their missing pairs are not reported again
    let mut tainted = vec![false; names.len()];
    for from in &raw.broken_ons {
        if let Some(f) = names.iter().position(|n| n == from) {
            tainted[f] = true;
        }
    }
    for on in &raw.ons {
        let from = state_of(on.from, on.line, &mut diags);
        let action = letter_of(&omega, on.action, on.line, &mut diags);
        let to = state_of(on.to, on.line, &mut diags);
        let prob = match on.prob {
            None => None,
            Some((col, text)) => match parse_prob(text) {
                Some(p) if *p.numer() > 0 && p <= Prob::from_integer(1) => Some(p),
                _ => {
                    diags.push(Diagnostic::new(on.line, col, DiagCode::BadProbability, format!("bad probability {text:?}")));
                    if let Some(f) = from {
                        tainted[f] = true;
                    }
                    continue;
                }
            },
        };
        match (from, action, to) {
            (Some(f), Some(a), Some(t)) => {
                let outcome = Outcome { target: State(t), prob: prob.unwrap_or(Prob::from_integer(1)) };
                cells[f * k + a.0].push((on.line, outcome, prob));
            }
            (Some(f), _, _) => tainted[f] = true,
            _ => {}
        }
    }

    let mut transitions: Vec<Vec<Vec<Outcome>>> = vec![Vec::with_capacity(k); names.len()];
    for (cell, entries) in cells.into_iter().enumerate() {
        let (s, a) = (cell / k, cell % k);
        let pair = || format!("({}, {})", names[s], omega.name(Letter(a)));
        match entries.as_slice() {
            [] if tainted[s] => {}
            [] => diags.push(Diagnostic::new(
                raw.states[s].0,
                raw.states[s].1 .0,
                DiagCode::MissingTransition,
                format!("no transition for {}", pair()),
            )),
            [(line, _, Some(p))] if *p != Prob::from_integer(1) => diags.push(Diagnostic::new(
                *line,
                1,
                DiagCode::BadProbability,
                format!("probabilities for {} sum to {p}, not 1", pair()),
            )),
            [_] => {}
            many => {
                if let Some((line, _, _)) = many.iter().find(|(_, _, p)| p.is_none()) {
                    diags.push(Diagnostic::new(
                        *line,
                        1,
                        DiagCode::DuplicateTransition,
                        format!("{} has several lines; each needs p=", pair()),
                    ));
                } else {
                    let total: Prob = many.iter().map(|(_, o, _)| o.prob).sum();
                    if total != Prob::from_integer(1) {
                        diags.push(Diagnostic::new(
                            many[0].0,
                            1,
                            DiagCode::BadProbability,
                            format!("probabilities for {} sum to {total}, not 1", pair()),
                        ));
                    }
                }
            }
        }
        transitions[s].push(entries.into_iter().map(|(_, o, _)| o).collect());
    }

    if !diags.is_empty() {
        diags.sort_by_key(|d| (d.line, d.column));
        return Err(Error::Parse(diags));
    }
    let world = WorldDef::new(sigma.clone(), omega, names, State(start.expect("checked")), transitions, views)?;
    let meaning = MeaningOfLife::new(sigma, good, bad)?;
    Ok(WorldFile { world, meaning })
}

/// Canonical text for a world: declarations in grammar order, states in
/// index order, transitions by state then action.
pub fn print_world(world: &WorldDef, meaning: &MeaningOfLife) -> String {
    let sigma = world.sigma();
    let omega = world.omega();
    let letters = |set: &std::collections::BTreeSet<Letter>| {
        set.iter().map(|l| format!(" {}", sigma.name(*l))).collect::<String>()
    };
    let mut out = String::new();
    let _ = writeln!(out, "sigma {sigma}");
    let _ = writeln!(out, "omega {omega}");
    if !meaning.good().is_empty() {
        let _ = writeln!(out, "good{}", letters(meaning.good()));
    }
    if !meaning.bad().is_empty() {
        let _ = writeln!(out, "bad{}", letters(meaning.bad()));
    }
    let _ = writeln!(out, "start {}", world.state_name(world.start()));
    for s in world.states() {
        let _ = writeln!(out, "state {} view {}", world.state_name(s), sigma.name(world.view(s)));
    }
    for s in world.states() {
        for a in omega.letters() {
            let outcomes = world.outcomes(s, a);
            for o in outcomes {
                let _ = write!(out, "on {} {} -> {}", world.state_name(s), omega.name(a), world.state_name(o.target));
                if outcomes.len() > 1 {
                    let _ = write!(out, " p={}", o.prob);
                }
                out.push('\n');
            }
        }
    }
    out
}
