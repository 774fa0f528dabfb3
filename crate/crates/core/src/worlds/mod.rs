//! World files, the built-in corpus, and the good-world analyses.

mod analysis;
mod builtin;
mod minimize;
mod parse;

pub use analysis::{analyze_good_world, max_mean_cycle_rates, GoodWorldReport, Rate, Verdict};
pub use builtin::{builtin_world, builtin_worlds, BUILTIN_NAMES};
pub use minimize::{complexity_proxy, minimize, ComplexityReport};
pub use parse::{parse_world, print_world, WorldFile};

pub use crate::diag::{DiagCode, Diagnostic};
