//! Search reports and their text form.
//!
//! The summary is a block of `# key: value` lines. The candidate table is
//! comma-separated with the columns
//!
//! ```text
//! index,length,states,<spec>_value,<spec>_outcome,...,passed
//! ```
//!
//! one `_value`/`_outcome` pair per spec in suite order. `_value` is the
//! evaluation-window life value (empty if the spec did not finish) and
//! `_outcome` is one of `pass`, `fail`, `budget` or `skip`.

use std::fmt::Write;
use std::time::Duration;

use crate::agents::PolicyCode;

use super::TestSuite;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpecOutcome {
    Pass(i64),
    Fail(i64),
    /// The candidate ran out of step budget inside this spec.
    BudgetExhausted,
    /// Skipped because an earlier spec failed.
    NotRun,
}

impl SpecOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, SpecOutcome::Pass(_))
    }

    pub fn value(&self) -> Option<i64> {
        match *self {
            SpecOutcome::Pass(v) | SpecOutcome::Fail(v) => Some(v),
            _ => None,
        }
    }

    fn label(&self) -> &'static str {
        match self {
            SpecOutcome::Pass(_) => "pass",
            SpecOutcome::Fail(_) => "fail",
            SpecOutcome::BudgetExhausted => "budget",
            SpecOutcome::NotRun => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateResult {
    pub code: PolicyCode,
    pub outcomes: Vec<SpecOutcome>,
}

impl CandidateResult {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(SpecOutcome::passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Sequential,
    Dovetail { slice: u64 },
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub mode: SearchMode,
    pub max_states: usize,
    pub spec_names: Vec<String>,
    pub policy_cap: u64,
    pub step_budget: u64,
    pub winner: Option<PolicyCode>,
    /// Resolved candidates in index order, up to and including the winner.
    pub candidates: Vec<CandidateResult>,
    /// Candidates whose evaluation was begun, including any abandoned once
    /// a lower index was crowned.
    pub started: u64,
    /// World steps simulated across all candidates.
    pub total_steps: u64,
    /// Wall-clock time; kept out of the rendered report.
    pub elapsed: Duration,
}

impl SearchReport {
    pub(crate) fn new(mode: SearchMode, max_states: usize, suite: &TestSuite) -> Self {
        SearchReport {
            mode,
            max_states,
            spec_names: suite.specs.iter().map(|s| s.name.clone()).collect(),
            policy_cap: suite.policy_cap,
            step_budget: suite.step_budget,
            winner: None,
            candidates: Vec::new(),
            started: 0,
            total_steps: 0,
            elapsed: Duration::ZERO,
        }
    }

    pub fn examined(&self) -> u64 {
        self.candidates.len() as u64
    }

    pub fn render_summary(&self) -> String {
        let mut out = String::new();
        let mode = match self.mode {
            SearchMode::Sequential => "sequential".to_string(),
            SearchMode::Dovetail { slice } => format!("dovetail slice={slice}"),
        };
        let _ = writeln!(out, "# mode: {mode}");
        let _ = writeln!(out, "# max_states: {}", self.max_states);
        let _ = writeln!(out, "# policy_cap: {}", self.policy_cap);
        let _ = writeln!(out, "# step_budget: {}", self.step_budget);
        match self.winner {
            Some(w) => {
                let _ = writeln!(out, "# winner: index={} length={} states={}", w.index, w.length, w.state_count);
            }
            None => {
                let _ = writeln!(out, "# winner: none");
            }
        }
        let _ = writeln!(out, "# examined: {}", self.examined());
        let _ = writeln!(out, "# started: {}", self.started);
        let _ = writeln!(out, "# total_steps: {}", self.total_steps);
        out
    }

    pub fn render_table(&self) -> String {
        let mut out = String::from("index,length,states");
        for name in &self.spec_names {
            let _ = write!(out, ",{name}_value,{name}_outcome");
        }
        out.push_str(",passed\n");
        for c in &self.candidates {
            let _ = write!(out, "{},{},{}", c.code.index, c.code.length, c.code.state_count);
            for o in &c.outcomes {
                let value = o.value().map(|v| v.to_string()).unwrap_or_default();
                let _ = write!(out, ",{value},{}", o.label());
            }
            let _ = writeln!(out, ",{}", c.passed());
        }
        out
    }
}
