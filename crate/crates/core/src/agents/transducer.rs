use std::fmt;
use std::sync::Arc;

use super::Agent;
use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// A deterministic finite-state transducer (Mealy machine) from views to
/// actions. Equality compares the machine, not its current state.
#[derive(Clone)]
pub struct TransducerPolicy {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    start: usize,
    // both indexed by state * |sigma| + input
    out: Vec<Letter>,
    next: Vec<usize>,
    current: usize,
}

impl TransducerPolicy {
    /// `out` and `next` are row-major over `(state, input letter)`.
    pub fn new(
        sigma: Arc<Alphabet>,
        omega: Arc<Alphabet>,
        state_count: usize,
        start: usize,
        out: Vec<Letter>,
        next: Vec<usize>,
    ) -> Result<Self> {
        if state_count == 0 {
            return Err(Error::InvalidConfig("policy needs at least one state".into()));
        }
        let cells = state_count * sigma.len();
        if out.len() != cells || next.len() != cells {
            return Err(Error::InvalidConfig(format!(
                "policy tables must have {cells} entries, got {} and {}",
                out.len(),
                next.len()
            )));
        }
        if start >= state_count {
            return Err(Error::OutOfRange(format!("policy start {start} of {state_count}")));
        }
        if let Some(o) = out.iter().find(|o| !omega.contains(**o)) {
            return Err(Error::OutOfRange(format!("policy output {} not in omega", o.0)));
        }
        if let Some(n) = next.iter().find(|n| **n >= state_count) {
            return Err(Error::OutOfRange(format!("policy next state {n} of {state_count}")));
        }
        Ok(TransducerPolicy { sigma, omega, start, out, next, current: start })
    }

    /// One-state policy emitting `letter` whatever it sees.
    pub fn constant(sigma: Arc<Alphabet>, omega: Arc<Alphabet>, letter: Letter) -> Result<Self> {
        let m = sigma.len();
        TransducerPolicy::new(sigma, omega, 1, 0, vec![letter; m], vec![0; m])
    }

    /// One-state policy emitting the action whose name equals the view's name.
    pub fn echo(sigma: Arc<Alphabet>, omega: Arc<Alphabet>) -> Result<Self> {
        let out = sigma
            .names()
            .iter()
            .map(|name| {
                omega.lookup(name).ok_or_else(|| {
                    Error::AlphabetMismatch(format!("echo needs omega letter {name:?}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let m = sigma.len();
        TransducerPolicy::new(sigma, omega, 1, 0, out, vec![0; m])
    }

    pub fn state_count(&self) -> usize {
        self.out.len() / self.sigma.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn output(&self, state: usize, input: Letter) -> Letter {
        self.out[state * self.sigma.len() + input.0]
    }

    pub fn next_state(&self, state: usize, input: Letter) -> usize {
        self.next[state * self.sigma.len() + input.0]
    }

    pub fn sigma_arc(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn omega_arc(&self) -> &Arc<Alphabet> {
        &self.omega
    }

    pub(crate) fn outputs(&self) -> &[Letter] {
        &self.out
    }

    pub(crate) fn nexts(&self) -> &[usize] {
        &self.next
    }

    /// Swaps state 0 and the start state so the policy starts in state 0.
    /// Behaviour is unchanged.
    pub fn normalized_start(&self) -> TransducerPolicy {
        if self.start == 0 {
            return self.clone();
        }
        let m = self.sigma.len();
        let s = self.start;
        let relabel = |q: usize| match q {
            0 => s,
            q if q == s => 0,
            q => q,
        };
        let n = self.state_count();
        let mut out = Vec::with_capacity(self.out.len());
        let mut next = Vec::with_capacity(self.next.len());
        for q in 0..n {
            let old = relabel(q);
            for i in 0..m {
                out.push(self.out[old * m + i]);
                next.push(relabel(self.next[old * m + i]));
            }
        }
        TransducerPolicy {
            sigma: self.sigma.clone(),
            omega: self.omega.clone(),
            start: 0,
            out,
            next,
            current: 0,
        }
    }
}

impl PartialEq for TransducerPolicy {
    fn eq(&self, other: &Self) -> bool {
        self.sigma == other.sigma
            && self.omega == other.omega
            && self.start == other.start
            && self.out == other.out
            && self.next == other.next
    }
}

impl Eq for TransducerPolicy {}

impl fmt::Debug for TransducerPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransducerPolicy")
            .field("states", &self.state_count())
            .field("start", &self.start)
            .field("out", &self.out.iter().map(|l| l.0).collect::<Vec<_>>())
            .field("next", &self.next)
            .finish()
    }
}

impl Agent for TransducerPolicy {
    fn sigma(&self) -> &Alphabet {
        &self.sigma
    }

    fn omega(&self) -> &Alphabet {
        &self.omega
    }

    fn step(&mut self, view: Letter) -> Letter {
        let cell = self.current * self.sigma.len() + view.0;
        self.current = self.next[cell];
        self.out[cell]
    }

    fn reset(&mut self) {
        self.current = self.start;
    }
}
