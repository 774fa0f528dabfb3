//! Step-device agents living in finite worlds.
//!
//! A world is a finite state machine with a start state, a transition
//! function driven by the agent's action and a view function that decides
//! what the agent sees. An agent is a step device: each step it reads one
//! view letter and emits one action letter. A life is scored by counting
//! good views minus bad views.
//!
//! On top of that the crate provides trees of obtainable states and trees
//! of life, world indistinguishability, fatal-error analysis, and a
//! shortest-first search over finite-state transducer policies that tries
//! each candidate against a suite of test worlds.

pub mod agents;
pub mod alphabet;
pub mod cli;
mod diag;
pub mod error;
pub mod life;
pub mod meaning;
pub mod search;
pub mod tree;
pub mod world;
pub mod worlds;

pub use agents::{agent_step, Agent, PolicyCode, TransducerPolicy};
pub use alphabet::{Alphabet, Letter, Role};
pub use error::{Error, Result};
pub use life::{run_life, LifeRecord};
pub use meaning::{compare_lives, life_value, MeaningOfLife};
pub use search::{
    crammer_demo, dovetail_search, evaluate_candidate, search_ai, Requirement, SearchReport, TestSuite,
    TestWorldSpec,
};
pub use tree::{expand_life_tree, expand_state_tree, life_path, worlds_indistinguishable, LifeTree, StateTree};
pub use world::{step_world, view_of, State, WorldDef};
pub use worlds::{analyze_good_world, builtin_world, builtin_worlds, complexity_proxy, parse_world, print_world};
