//! The shipped corpus of small artificial worlds. All of them are original
//! designs for this harness.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Letter, Role};
use crate::meaning::MeaningOfLife;
use crate::world::{Outcome, Prob, State, WorldDef};

use super::WorldFile;

pub const BUILTIN_NAMES: &[&str] = &[
    "echo-reward",
    "period-2",
    "period-3",
    "period-5",
    "two-door-bandit",
    "gated-maze",
    "gated-maze-safe",
    "flip",
];

struct Builder {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    names: Vec<String>,
    views: Vec<Letter>,
    rows: Vec<Vec<Vec<Outcome>>>,
}

impl Builder {
    fn new(sigma: &[&str], omega: &[&str]) -> Self {
        Builder {
            sigma: Arc::new(Alphabet::new(Role::Input, sigma.iter().copied()).expect("valid sigma")),
            omega: Arc::new(Alphabet::new(Role::Output, omega.iter().copied()).expect("valid omega")),
            names: Vec::new(),
            views: Vec::new(),
            rows: Vec::new(),
        }
    }

    fn state(&mut self, name: impl Into<String>, view: &str) {
        self.names.push(name.into());
        self.views.push(self.sigma.lookup(view).expect("view letter"));
        self.rows.push(vec![Vec::new(); self.omega.len()]);
    }

    fn idx(&self, name: &str) -> usize {
        self.names.iter().position(|n| n == name).expect("declared state")
    }

    fn on(&mut self, from: &str, action: &str, to: &str) {
        self.on_p(from, action, to, Prob::from_integer(1));
    }

    fn on_p(&mut self, from: &str, action: &str, to: &str, prob: Prob) {
        let (f, t) = (self.idx(from), self.idx(to));
        let a = self.omega.lookup(action).expect("action letter");
        self.rows[f][a.0].push(Outcome { target: State(t), prob });
    }

    fn finish(self, start: &str, good: &[&str], bad: &[&str]) -> WorldFile {
        let start = State(self.idx(start));
        let meaning = MeaningOfLife::from_names(self.sigma.clone(), good, bad).expect("meaning");
        let world = WorldDef::new(self.sigma, self.omega, self.names, start, self.rows, self.views)
            .expect("builtin world is well formed");
        WorldFile { world, meaning }
    }
}

/// Good iff the action repeats the view it answers. The view is itself the
/// verdict on the previous action, so echoing keeps the world on "1".
fn echo_reward() -> WorldFile {
    let mut b = Builder::new(&["0", "1"], &["0", "1"]);
    b.state("hit", "1");
    b.state("miss", "0");
    b.on("hit", "0", "miss");
    b.on("hit", "1", "hit");
    b.on("miss", "0", "hit");
    b.on("miss", "1", "miss");
    b.finish("hit", &["1"], &["0"])
}

/// A cyclic bit pattern; each step the agent predicts the next bit. The view
/// shows the current bit prefixed by `h` if the last prediction hit, `m` if
/// it missed.
fn period(pattern: &str) -> WorldFile {
    let bits: Vec<char> = pattern.chars().collect();
    let p = bits.len();
    let mut b = Builder::new(&["h0", "h1", "m0", "m1"], &["0", "1"]);
    for (i, bit) in bits.iter().enumerate() {
        for flag in ['h', 'm'] {
            b.state(format!("{flag}{i}"), &format!("{flag}{bit}"));
        }
    }
    for i in 0..p {
        let j = (i + 1) % p;
        for flag in ['h', 'm'] {
            for guess in ['0', '1'] {
                let hit = if guess == bits[j] { 'h' } else { 'm' };
                b.on(&format!("{flag}{i}"), &guess.to_string(), &format!("{hit}{j}"));
            }
        }
    }
    b.finish("h0", &["h0", "h1"], &["m0", "m1"])
}

/// Two doors with stochastic payoffs; the left door wins four times in five.
fn two_door_bandit() -> WorldFile {
    let mut b = Builder::new(&["n", "g", "b"], &["left", "right"]);
    b.state("idle", "n");
    b.state("win", "g");
    b.state("lose", "b");
    for from in ["idle", "win", "lose"] {
        b.on_p(from, "left", "win", Prob::new(4, 5));
        b.on_p(from, "left", "lose", Prob::new(1, 5));
        b.on_p(from, "right", "win", Prob::new(1, 5));
        b.on_p(from, "right", "lose", Prob::new(4, 5));
    }
    b.finish("idle", &["g"], &["b"])
}

/// A corridor `start - hall - gate - goal` with a pit below the hall.
/// Reaching the goal pays once and returns the agent to the start. In the
/// plain maze the pit is absorbing; in the safe variant `w` climbs back out.
fn gated_maze(safe: bool) -> WorldFile {
    let mut b = Builder::new(&["n", "g", "b"], &["w", "e", "s"]);
    b.state("start", "n");
    b.state("hall", "n");
    b.state("gate", "n");
    b.state("goal", "g");
    b.state("pit", "b");
    for (from, w, e, s) in [
        ("start", "start", "hall", "start"),
        ("hall", "start", "gate", "pit"),
        ("gate", "hall", "goal", "gate"),
        ("goal", "start", "start", "start"),
        ("pit", if safe { "hall" } else { "pit" }, "pit", "pit"),
    ] {
        b.on(from, "w", w);
        b.on(from, "e", e);
        b.on(from, "s", s);
    }
    b.finish("start", &["g"], &["b"])
}

/// Every action flips between two states.
fn flip() -> WorldFile {
    let mut b = Builder::new(&["n", "g"], &["a", "b"]);
    b.state("s0", "n");
    b.state("s1", "g");
    for a in ["a", "b"] {
        b.on("s0", a, "s1");
        b.on("s1", a, "s0");
    }
    b.finish("s0", &["g"], &[])
}

pub fn builtin_world(name: &str) -> Option<WorldFile> {
    Some(match name {
        "echo-reward" => echo_reward(),
        "period-2" => period("01"),
        "period-3" => period("001"),
        "period-5" => period("00101"),
        "two-door-bandit" => two_door_bandit(),
        "gated-maze" => gated_maze(false),
        "gated-maze-safe" => gated_maze(true),
        "flip" => flip(),
        _ => return None,
    })
}

pub fn builtin_worlds() -> Vec<(&'static str, WorldFile)> {
    BUILTIN_NAMES
        .iter()
        .map(|&n| (n, builtin_world(n).expect("listed builtin")))
        .collect()
}
