//! Finite worlds: a state set, a start state, a transition function driven
//! by the agent's action, and a view function telling the agent what it sees.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use rand::{Rng, RngCore};

use crate::alphabet::{Alphabet, Letter, Role};
use crate::error::{Error, Result};

/// Exact probability of a stochastic transition outcome.
pub type Prob = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct State(pub usize);

impl State {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One possible successor of a `(state, action)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub target: State,
    pub prob: Prob,
}

impl Outcome {
    pub fn certain(target: State) -> Self {
        Outcome { target, prob: Prob::from_integer(1) }
    }
}

/// A finite world. Immutable once built; transitions are total over
/// `states x omega`, and every state carries exactly one view letter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorldDef {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    state_names: Vec<String>,
    start: State,
    // indexed by state * |omega| + action
    transitions: Vec<Vec<Outcome>>,
    views: Vec<Letter>,
}

impl WorldDef {
    /// Builds a world from per-state, per-action outcome lists.
    ///
    /// `transitions[s][a]` lists the successors of state `s` under action
    /// `Ω[a]`; a single entry with probability 1 is a deterministic edge.
    /// Probabilities must be positive and sum to exactly 1.
    pub fn new(
        sigma: Arc<Alphabet>,
        omega: Arc<Alphabet>,
        state_names: Vec<String>,
        start: State,
        transitions: Vec<Vec<Vec<Outcome>>>,
        views: Vec<Letter>,
    ) -> Result<Self> {
        if sigma.role() != Role::Input || omega.role() != Role::Output {
            return Err(Error::InvalidConfig("alphabet roles must be (sigma, omega)".into()));
        }
        let n = state_names.len();
        if n == 0 {
            return Err(Error::InvalidConfig("world has no states".into()));
        }
        for (i, name) in state_names.iter().enumerate() {
            if state_names[..i].contains(name) {
                return Err(Error::InvalidConfig(format!("duplicate state {name:?}")));
            }
        }
        if start.0 >= n {
            return Err(Error::OutOfRange(format!("start state {start} of {n}")));
        }
        if transitions.len() != n || views.len() != n {
            return Err(Error::InvalidConfig(format!(
                "expected {n} transition rows and views, got {} and {}",
                transitions.len(),
                views.len()
            )));
        }
        if let Some(v) = views.iter().find(|v| !sigma.contains(**v)) {
            return Err(Error::OutOfRange(format!("view letter {} not in sigma", v.0)));
        }
        let k = omega.len();
        let mut flat = Vec::with_capacity(n * k);
        for (s, row) in transitions.into_iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidConfig(format!(
                    "state {:?} has {} action rows, expected {k}",
                    state_names[s],
                    row.len()
                )));
            }
            for (a, outcomes) in row.into_iter().enumerate() {
                let pair = || format!("({}, {})", state_names[s], omega.name(Letter(a)));
                if outcomes.is_empty() {
                    return Err(Error::InvalidConfig(format!("no transition for {}", pair())));
                }
                let mut total = Prob::from_integer(0);
                for o in &outcomes {
                    if o.target.0 >= n {
                        return Err(Error::OutOfRange(format!(
                            "transition {} targets state {} of {n}",
                            pair(),
                            o.target
                        )));
                    }
                    if *o.prob.numer() == 0 {
                        return Err(Error::InvalidConfig(format!("zero probability in {}", pair())));
                    }
                    total += o.prob;
                }
                if total != Prob::from_integer(1) {
                    return Err(Error::InvalidConfig(format!(
                        "probabilities for {} sum to {total}, not 1",
                        pair()
                    )));
                }
                flat.push(outcomes);
            }
        }
        Ok(WorldDef { sigma, omega, state_names, start, transitions: flat, views })
    }

    /// Builds a deterministic world from a `table[state][action] = next` table.
    pub fn deterministic(
        sigma: Arc<Alphabet>,
        omega: Arc<Alphabet>,
        state_names: Vec<String>,
        start: State,
        table: Vec<Vec<State>>,
        views: Vec<Letter>,
    ) -> Result<Self> {
        let transitions = table
            .into_iter()
            .map(|row| row.into_iter().map(|t| vec![Outcome::certain(t)]).collect())
            .collect();
        WorldDef::new(sigma, omega, state_names, start, transitions, views)
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn omega(&self) -> &Arc<Alphabet> {
        &self.omega
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = State> {
        (0..self.state_count()).map(State)
    }

    pub fn start(&self) -> State {
        self.start
    }

    pub fn state_name(&self, s: State) -> &str {
        &self.state_names[s.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn state_by_name(&self, name: &str) -> Option<State> {
        self.state_names.iter().position(|n| n == name).map(State)
    }

    pub fn view(&self, s: State) -> Letter {
        assert!(s.0 < self.state_count(), "state {s} out of range");
        self.views[s.0]
    }

    pub fn outcomes(&self, s: State, action: Letter) -> &[Outcome] {
        assert!(s.0 < self.state_count(), "state {s} out of range");
        assert!(self.omega.contains(action), "action {} not in omega", action.0);
        &self.transitions[s.0 * self.omega.len() + action.0]
    }

    pub fn is_deterministic(&self) -> bool {
        self.transitions.iter().all(|o| o.len() == 1)
    }

    /// Successor under a deterministic edge; `None` if the pair is stochastic.
    pub fn successor(&self, s: State, action: Letter) -> Option<State> {
        match self.outcomes(s, action) {
            [only] => Some(only.target),
            _ => None,
        }
    }

    /// Errors unless every transition is deterministic.
    pub fn require_deterministic(&self, analysis: &str) -> Result<()> {
        if self.is_deterministic() {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("{analysis} requires a deterministic world")))
        }
    }

    /// The same world started from a different state.
    pub fn with_start(&self, start: State) -> WorldDef {
        assert!(start.0 < self.state_count(), "state {start} out of range");
        WorldDef { start, ..self.clone() }
    }

    /// Relabels states: old state `s` becomes `perm[s]`. Names move with
    /// their states, so the result is the same world under a different
    /// internal numbering.
    pub fn permuted(&self, perm: &[usize]) -> WorldDef {
        let n = self.state_count();
        assert_eq!(perm.len(), n, "permutation length");
        let k = self.omega.len();
        let mut names = vec![String::new(); n];
        let mut views = vec![Letter(0); n];
        let mut transitions = vec![Vec::new(); n * k];
        for old in 0..n {
            let new = perm[old];
            names[new] = self.state_names[old].clone();
            views[new] = self.views[old];
            for a in 0..k {
                transitions[new * k + a] = self.transitions[old * k + a]
                    .iter()
                    .map(|o| Outcome { target: State(perm[o.target.0]), prob: o.prob })
                    .collect();
            }
        }
        WorldDef {
            sigma: self.sigma.clone(),
            omega: self.omega.clone(),
            state_names: names,
            start: State(perm[self.start.0]),
            transitions,
            views,
        }
    }

    /// Advances the world by one step. Stochastic pairs draw one integer from
    /// `rng`; deterministic pairs leave `rng` untouched.
    pub fn step<R: RngCore + ?Sized>(&self, s: State, action: Letter, rng: &mut R) -> State {
        match self.outcomes(s, action) {
            [only] => only.target,
            many => sample(many, rng),
        }
    }
}

fn sample<R: RngCore + ?Sized>(outcomes: &[Outcome], rng: &mut R) -> State {
    let common = outcomes
        .iter()
        .fold(1u64, |acc, o| num_integer_lcm(acc, *o.prob.denom()));
    let mut draw = rng.gen_range(0..common);
    for o in outcomes {
        let weight = o.prob.numer() * (common / o.prob.denom());
        if draw < weight {
            return o.target;
        }
        draw -= weight;
    }
    unreachable!("probabilities sum to one")
}

fn num_integer_lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

/// `World(s, d)`: the state reached from `state` under `action`.
///
/// Panics on an out-of-range state or an action outside Ω.
pub fn step_world<R: RngCore + ?Sized>(
    world: &WorldDef,
    state: State,
    action: Letter,
    rng: &mut R,
) -> State {
    world.step(state, action, rng)
}

/// `View(s)`: the letter the agent sees in `state`.
pub fn view_of(world: &WorldDef, state: State) -> Letter {
    world.view(state)
}
