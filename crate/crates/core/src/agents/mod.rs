//! Step devices: the agent contract, finite-state transducer policies (the
//! enumerable program class), and baseline agents.

mod baseline;
mod code;
mod text;
mod transducer;

pub use baseline::{
    make_baseline, BaselineKind, ConstantAgent, HistoryLearner, LearnerParams, RandomAgent,
};
pub use code::{bit_length, enumerate_policies, policy_count, PolicyCode, PolicyStream};
pub use text::{parse_policies, print_policy};
pub use transducer::TransducerPolicy;

use crate::alphabet::{Alphabet, Letter};

/// A step device: consumes one Σ-letter per step and emits one Ω-letter.
pub trait Agent {
    fn sigma(&self) -> &Alphabet;
    fn omega(&self) -> &Alphabet;
    /// Takes the current view, returns the action for this step.
    fn step(&mut self, view: Letter) -> Letter;
    /// Returns the agent to its birth state, including any seeded randomness.
    fn reset(&mut self);
}

impl<A: Agent + ?Sized> Agent for &mut A {
    fn sigma(&self) -> &Alphabet {
        (**self).sigma()
    }
    fn omega(&self) -> &Alphabet {
        (**self).omega()
    }
    fn step(&mut self, view: Letter) -> Letter {
        (**self).step(view)
    }
    fn reset(&mut self) {
        (**self).reset()
    }
}

impl<A: Agent + ?Sized> Agent for Box<A> {
    fn sigma(&self) -> &Alphabet {
        (**self).sigma()
    }
    fn omega(&self) -> &Alphabet {
        (**self).omega()
    }
    fn step(&mut self, view: Letter) -> Letter {
        (**self).step(view)
    }
    fn reset(&mut self) {
        (**self).reset()
    }
}

/// Feeds one view to `agent` and returns its action.
///
/// Panics if `input` is not a Σ-letter.
pub fn agent_step<A: Agent + ?Sized>(agent: &mut A, input: Letter) -> Letter {
    assert!(agent.sigma().contains(input), "input {} not in sigma", input.0);
    let out = agent.step(input);
    debug_assert!(agent.omega().contains(out));
    out
}
