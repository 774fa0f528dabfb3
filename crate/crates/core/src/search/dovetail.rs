//! Interleaved search for program classes whose runs may not terminate.
//!
//! Each round admits the next candidate and then gives every live candidate
//! `slice` more steps. A candidate retires as soon as a spec fails or its
//! budget runs out. A passing candidate is crowned only once every
//! lower-indexed candidate has retired, so the winner is the same one the
//! sequential search finds.

use std::collections::{BTreeMap, VecDeque};
use std::time::Instant;

use super::{CandidateResult, SearchMode, SearchReport, SpecOutcome, SpecRun, TestSuite};
use crate::agents::{enumerate_policies, PolicyCode, TransducerPolicy};
use crate::error::{Error, Result};

struct Live<'a> {
    code: PolicyCode,
    policy: TransducerPolicy,
    outcomes: Vec<SpecOutcome>,
    spec: usize,
    run: Option<SpecRun<'a>>,
    spent: u64,
}

impl<'a> Live<'a> {
    /// Advances by up to `slice` steps; returns true once resolved.
    fn advance(&mut self, suite: &'a TestSuite, slice: u64) -> Result<(bool, u64)> {
        let mut left = slice;
        let mut used = 0;
        while left > 0 {
            if self.run.is_none() {
                self.run = Some(SpecRun::begin(&suite.specs[self.spec], self.policy.clone())?);
            }
            let run = self.run.as_mut().expect("started");
            let budget_left = suite.step_budget - self.spent;
            let chunk = left.min(budget_left);
            let before = run.remaining();
            let result = run.advance(chunk);
            let steps = before - run.remaining();
            self.spent += steps;
            used += steps;
            left -= steps;
            match result {
                Some(e) if e.pass => {
                    self.outcomes[self.spec] = SpecOutcome::Pass(e.value);
                    self.run = None;
                    self.spec += 1;
                    if self.spec == suite.specs.len() {
                        return Ok((true, used));
                    }
                }
                Some(e) => {
                    self.outcomes[self.spec] = SpecOutcome::Fail(e.value);
                    return Ok((true, used));
                }
                None if self.spent == suite.step_budget => {
                    self.outcomes[self.spec] = SpecOutcome::BudgetExhausted;
                    return Ok((true, used));
                }
                None => {}
            }
        }
        Ok((false, used))
    }
}

pub fn dovetail_search(suite: &TestSuite, max_states: usize, slice: u64) -> Result<SearchReport> {
    if slice == 0 {
        return Err(Error::InvalidConfig("slice must be at least 1".into()));
    }
    let clock = Instant::now();
    let mut stream = enumerate_policies(suite.sigma().clone(), suite.omega().clone(), max_states)?
        .take(suite.policy_cap as usize);
    let mut report = SearchReport::new(SearchMode::Dovetail { slice }, max_states, suite);
    let mut live: VecDeque<Live<'_>> = VecDeque::new();
    let mut resolved: BTreeMap<u64, CandidateResult> = BTreeMap::new();
    let mut next_to_crown = 0u64;
    let mut exhausted = false;

    loop {
        if !exhausted {
            match stream.next() {
                Some((code, policy)) => {
                    report.started += 1;
                    live.push_back(Live {
                        code,
                        policy,
                        outcomes: vec![SpecOutcome::NotRun; suite.specs.len()],
                        spec: 0,
                        run: None,
                        spent: 0,
                    });
                }
                None => exhausted = true,
            }
        }
        if live.is_empty() && exhausted {
            break;
        }

        let mut still = VecDeque::with_capacity(live.len());
        for mut cand in live.drain(..) {
            let (done, used) = cand.advance(suite, slice)?;
            report.total_steps += used;
            if done {
                resolved.insert(cand.code.index, CandidateResult { code: cand.code, outcomes: cand.outcomes });
            } else {
                still.push_back(cand);
            }
        }
        live = still;

        while let Some(result) = resolved.remove(&next_to_crown) {
            next_to_crown += 1;
            let passed = result.passed();
            let code = result.code;
            report.candidates.push(result);
            if passed {
                report.winner = Some(code);
                report.elapsed = clock.elapsed();
                return Ok(report);
            }
        }
    }
    report.elapsed = clock.elapsed();
    Ok(report)
}
