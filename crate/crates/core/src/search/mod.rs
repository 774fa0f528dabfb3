//! Length-ordered search for the shortest policy that passes every world of
//! a test suite.
//!
//! Each test world gives a candidate one continuous life: `train_steps` of
//! unjudged education, then an `eval_steps` window whose life value is
//! checked against the requirement. Candidates are tried in canonical
//! [`PolicyCode`] order, so the first to pass everything is the shortest.

mod dovetail;
mod report;
mod suite_file;

pub use dovetail::dovetail_search;
pub use report::{CandidateResult, SearchMode, SearchReport, SpecOutcome};
pub use suite_file::{parse_suite, SuiteEntry};

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use crate::agents::{enumerate_policies, PolicyCode, TransducerPolicy};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::life::Life;
use crate::meaning::MeaningOfLife;
use crate::world::WorldDef;

/// What the evaluation window must achieve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Requirement {
    /// Life value over the window is at least this.
    MinValue(i64),
    /// Good views outnumber bad ones at least `good : bad`, i.e.
    /// `#good · (good + bad) >= good · (#good + #bad)`.
    Ratio { good: u64, bad: u64 },
}

impl Requirement {
    pub fn is_met(&self, value: i64, good: u64, bad: u64) -> bool {
        match *self {
            Requirement::MinValue(min) => value >= min,
            Requirement::Ratio { good: g, bad: b } => {
                u128::from(good) * u128::from(g + b) >= u128::from(g) * u128::from(good + bad)
            }
        }
    }

    /// The equivalent life-value threshold for a window of `window` steps in
    /// which every view is either good or bad.
    pub fn value_threshold(&self, window: u64) -> i64 {
        match *self {
            Requirement::MinValue(min) => min,
            Requirement::Ratio { good: g, bad: b } => {
                let need = (u128::from(g) * u128::from(window)).div_ceil(u128::from(g + b)) as i64;
                2 * need - window as i64
            }
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::MinValue(v) => write!(f, "{v}"),
            Requirement::Ratio { good, bad } => write!(f, "ratio {good}:{bad}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TestWorldSpec {
    pub name: String,
    pub world: Arc<WorldDef>,
    pub meaning: MeaningOfLife,
    pub train_steps: u64,
    pub eval_steps: u64,
    pub requirement: Requirement,
    pub seed: u64,
}

impl TestWorldSpec {
    pub fn new(
        name: impl Into<String>,
        world: Arc<WorldDef>,
        meaning: MeaningOfLife,
        train_steps: u64,
        eval_steps: u64,
        requirement: Requirement,
        seed: u64,
    ) -> Result<Self> {
        if eval_steps == 0 {
            return Err(Error::InvalidConfig("eval_steps must be at least 1".into()));
        }
        if let Requirement::Ratio { good, bad } = requirement {
            if good + bad == 0 {
                return Err(Error::InvalidConfig("ratio 0:0 is meaningless".into()));
            }
        }
        if !meaning.sigma().same_letters(world.sigma()) {
            return Err(Error::AlphabetMismatch("meaning and world sigma differ".into()));
        }
        Ok(TestWorldSpec { name: name.into(), world, meaning, train_steps, eval_steps, requirement, seed })
    }

    pub fn total_steps(&self) -> u64 {
        self.train_steps + self.eval_steps
    }
}

#[derive(Debug, Clone)]
pub struct TestSuite {
    pub specs: Vec<TestWorldSpec>,
    /// Most steps one candidate may spend across all specs.
    pub step_budget: u64,
    /// Most candidates to examine.
    pub policy_cap: u64,
}

impl TestSuite {
    pub fn new(specs: Vec<TestWorldSpec>, step_budget: u64, policy_cap: u64) -> Result<Self> {
        let Some(first) = specs.first() else {
            return Err(Error::InvalidConfig("suite has no worlds".into()));
        };
        for s in &specs[1..] {
            if !s.world.sigma().same_letters(first.world.sigma()) || !s.world.omega().same_letters(first.world.omega()) {
                return Err(Error::AlphabetMismatch(format!(
                    "suite world {:?} uses different alphabets from {:?}",
                    s.name, first.name
                )));
            }
        }
        if step_budget == 0 || policy_cap == 0 {
            return Err(Error::InvalidConfig("step budget and policy cap must be positive".into()));
        }
        Ok(TestSuite { specs, step_budget, policy_cap })
    }

    /// A suite whose step budget is exactly what one full evaluation needs.
    pub fn unbudgeted(specs: Vec<TestWorldSpec>, policy_cap: u64) -> Result<Self> {
        let budget = specs.iter().map(TestWorldSpec::total_steps).sum::<u64>().max(1);
        TestSuite::new(specs, budget, policy_cap)
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        self.specs[0].world.sigma()
    }

    pub fn omega(&self) -> &Arc<Alphabet> {
        self.specs[0].world.omega()
    }
}

/// Result of one candidate in one test world.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Evaluation {
    pub pass: bool,
    /// Life value over the evaluation window.
    pub value: i64,
    pub good: u64,
    pub bad: u64,
}

/// A test-world life that can be advanced in slices.
pub(crate) struct SpecRun<'a> {
    spec: &'a TestWorldSpec,
    life: Life<'a, TransducerPolicy>,
    value: i64,
    good: u64,
    bad: u64,
}

impl<'a> SpecRun<'a> {
    pub(crate) fn begin(spec: &'a TestWorldSpec, policy: TransducerPolicy) -> Result<Self> {
        let life = Life::begin(&spec.world, policy, spec.seed)?;
        Ok(SpecRun { spec, life, value: 0, good: 0, bad: 0 })
    }

    pub(crate) fn remaining(&self) -> u64 {
        self.spec.total_steps() - self.life.age()
    }

    /// Runs up to `max` more steps; returns the evaluation once the window
    /// is complete.
    pub(crate) fn advance(&mut self, max: u64) -> Option<Evaluation> {
        let n = max.min(self.remaining());
        for _ in 0..n {
            let judged = self.life.age() >= self.spec.train_steps;
            let step = self.life.step();
            if judged {
                let v = self.spec.meaning.letter_value(step.view);
                self.value += v;
                self.good += (v > 0) as u64;
                self.bad += (v < 0) as u64;
            }
        }
        (self.remaining() == 0).then(|| Evaluation {
            pass: self.spec.requirement.is_met(self.value, self.good, self.bad),
            value: self.value,
            good: self.good,
            bad: self.bad,
        })
    }
}

/// Lives one continuous life of `train_steps + eval_steps` and judges the
/// final `eval_steps` views.
pub fn evaluate_candidate(policy: &TransducerPolicy, spec: &TestWorldSpec) -> Result<Evaluation> {
    let mut run = SpecRun::begin(spec, policy.clone())?;
    Ok(run.advance(u64::MAX).expect("ran to completion"))
}

/// Runs every spec in order under the suite's step budget, stopping at the
/// first failure.
pub(crate) fn run_candidate(suite: &TestSuite, policy: &TransducerPolicy) -> Result<(Vec<SpecOutcome>, u64)> {
    let mut outcomes = vec![SpecOutcome::NotRun; suite.specs.len()];
    let mut spent = 0u64;
    for (i, spec) in suite.specs.iter().enumerate() {
        let mut run = SpecRun::begin(spec, policy.clone())?;
        let allowed = suite.step_budget - spent;
        let before = run.remaining();
        let result = run.advance(allowed);
        spent += before - run.remaining();
        match result {
            Some(e) if e.pass => outcomes[i] = SpecOutcome::Pass(e.value),
            Some(e) => {
                outcomes[i] = SpecOutcome::Fail(e.value);
                break;
            }
            None => {
                outcomes[i] = SpecOutcome::BudgetExhausted;
                break;
            }
        }
    }
    Ok((outcomes, spent))
}

/// Tries candidates one by one in canonical order and crowns the first that
/// passes every spec.
pub fn search_ai(suite: &TestSuite, max_states: usize) -> Result<SearchReport> {
    let clock = Instant::now();
    let stream = enumerate_policies(suite.sigma().clone(), suite.omega().clone(), max_states)?;
    let mut report = SearchReport::new(SearchMode::Sequential, max_states, suite);
    for (code, policy) in stream.take(suite.policy_cap as usize) {
        let (outcomes, spent) = run_candidate(suite, &policy)?;
        report.started += 1;
        report.total_steps += spent;
        let result = CandidateResult { code, outcomes };
        let passed = result.passed();
        report.candidates.push(result);
        if passed {
            report.winner = Some(code);
            break;
        }
    }
    report.elapsed = clock.elapsed();
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct CrammerReport {
    /// First policy, in canonical order, that passes the suite but fails
    /// the held-out world.
    pub crammer: Option<(PolicyCode, TransducerPolicy)>,
    /// The crammer's held-out evaluation.
    pub held_out: Option<Evaluation>,
    /// Candidates that passed the whole suite before the search stopped.
    pub suite_passers: u64,
    pub examined: u64,
}

/// Looks for a policy that copes in every suite world yet fails
/// `held_out`: a program tuned to the test rather than to worlds in general.
pub fn crammer_demo(suite: &TestSuite, held_out: &TestWorldSpec, max_states: usize) -> Result<CrammerReport> {
    let stream = enumerate_policies(suite.sigma().clone(), suite.omega().clone(), max_states)?;
    let mut report = CrammerReport { crammer: None, held_out: None, suite_passers: 0, examined: 0 };
    for (code, policy) in stream.take(suite.policy_cap as usize) {
        report.examined += 1;
        let (outcomes, _) = run_candidate(suite, &policy)?;
        if !outcomes.iter().all(SpecOutcome::passed) {
            continue;
        }
        report.suite_passers += 1;
        let eval = evaluate_candidate(&policy, held_out)?;
        if !eval.pass {
            report.crammer = Some((code, policy));
            report.held_out = Some(eval);
            break;
        }
    }
    Ok(report)
}
