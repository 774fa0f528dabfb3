//! Reference agents used as thresholds in place of a human comparator.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Agent;
use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::meaning::MeaningOfLife;

/// Uniformly random actions from a seeded generator.
#[derive(Debug, Clone)]
pub struct RandomAgent {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomAgent {
    pub fn new(sigma: Arc<Alphabet>, omega: Arc<Alphabet>, seed: u64) -> Self {
        RandomAgent { sigma, omega, seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Agent for RandomAgent {
    fn sigma(&self) -> &Alphabet {
        &self.sigma
    }
    fn omega(&self) -> &Alphabet {
        &self.omega
    }
    fn step(&mut self, _view: Letter) -> Letter {
        Letter(self.rng.gen_range(0..self.omega.len()))
    }
    fn reset(&mut self) {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }
}

#[derive(Debug, Clone)]
pub struct ConstantAgent {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    letter: Letter,
}

impl ConstantAgent {
    pub fn new(sigma: Arc<Alphabet>, omega: Arc<Alphabet>, letter: Letter) -> Result<Self> {
        if !omega.contains(letter) {
            return Err(Error::InvalidConfig(format!("constant letter {} not in omega", letter.0)));
        }
        Ok(ConstantAgent { sigma, omega, letter })
    }
}

impl Agent for ConstantAgent {
    fn sigma(&self) -> &Alphabet {
        &self.sigma
    }
    fn omega(&self) -> &Alphabet {
        &self.omega
    }
    fn step(&mut self, _view: Letter) -> Letter {
        self.letter
    }
    fn reset(&mut self) {}
}

#[derive(Debug, Clone)]
pub struct LearnerParams {
    /// Number of most recent views forming the table key.
    pub history: usize,
    /// Initial exploration rate.
    pub epsilon: f64,
    pub alpha: f64,
    pub gamma: f64,
    /// Steps over which exploration decays linearly to zero; `None` keeps
    /// `epsilon` fixed.
    pub decay_steps: Option<u64>,
    /// Source of the per-step reward: +1 good, -1 bad, 0 otherwise.
    pub meaning: MeaningOfLife,
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(format!("history_learner: {what}")));
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon must lie in [0, 1]");
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return bad("alpha must lie in (0, 1]");
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return bad("gamma must lie in [0, 1)");
        }
        if self.decay_steps == Some(0) {
            return bad("decay_steps must be positive");
        }
        Ok(())
    }
}

/// Tabular Q-learning over the last `history` views, rewarded by the meaning
/// of life of each view it receives.
#[derive(Debug, Clone)]
pub struct HistoryLearner {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    params: LearnerParams,
    seed: u64,
    rng: ChaCha8Rng,
    table: BTreeMap<Vec<Letter>, Vec<f64>>,
    recent: VecDeque<Letter>,
    pending: Option<(Vec<Letter>, Letter)>,
    steps: u64,
}

impl HistoryLearner {
    pub fn new(sigma: Arc<Alphabet>, omega: Arc<Alphabet>, params: LearnerParams, seed: u64) -> Result<Self> {
        params.validate()?;
        if !params.meaning.sigma().same_letters(&sigma) {
            return Err(Error::AlphabetMismatch("learner meaning is over a different sigma".into()));
        }
        Ok(HistoryLearner {
            sigma,
            omega,
            params,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            table: BTreeMap::new(),
            recent: VecDeque::new(),
            pending: None,
            steps: 0,
        })
    }

    fn exploration(&self) -> f64 {
        match self.params.decay_steps {
            Some(n) => self.params.epsilon * (1.0 - self.steps as f64 / n as f64).max(0.0),
            None => self.params.epsilon,
        }
    }

    fn values(&mut self, key: &[Letter]) -> &mut Vec<f64> {
        let k = self.omega.len();
        self.table.entry(key.to_vec()).or_insert_with(|| vec![0.0; k])
    }

    /// Current action values for a history key, if it has been visited.
    pub fn action_values(&self, key: &[Letter]) -> Option<&[f64]> {
        self.table.get(key).map(Vec::as_slice)
    }
}

fn argmax(values: &[f64]) -> usize {
    // first maximum wins so ties are deterministic
    values
        .iter()
        .enumerate()
        .fold(0, |best, (i, v)| if *v > values[best] { i } else { best })
}

impl Agent for HistoryLearner {
    fn sigma(&self) -> &Alphabet {
        &self.sigma
    }
    fn omega(&self) -> &Alphabet {
        &self.omega
    }

    fn step(&mut self, view: Letter) -> Letter {
        if self.params.history > 0 {
            if self.recent.len() == self.params.history {
                self.recent.pop_front();
            }
            self.recent.push_back(view);
        }
        let key: Vec<Letter> = self.recent.iter().copied().collect();

        // the view just received is the outcome of the previous action
        if let Some((prev_key, prev_action)) = self.pending.take() {
            let reward = self.params.meaning.letter_value(view) as f64;
            let best_next = self.values(&key).iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let (alpha, gamma) = (self.params.alpha, self.params.gamma);
            let q = &mut self.values(&prev_key)[prev_action.0];
            *q += alpha * (reward + gamma * best_next - *q);
        }

        let epsilon = self.exploration();
        let action = if epsilon > 0.0 && self.rng.gen::<f64>() < epsilon {
            Letter(self.rng.gen_range(0..self.omega.len()))
        } else {
            Letter(argmax(self.values(&key)))
        };
        self.pending = Some((key, action));
        self.steps += 1;
        action
    }

    fn reset(&mut self) {
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.table.clear();
        self.recent.clear();
        self.pending = None;
        self.steps = 0;
    }
}

#[derive(Debug, Clone)]
pub enum BaselineKind {
    Random,
    Constant(Letter),
    HistoryLearner(LearnerParams),
}

/// Builds a baseline agent. `seed` drives all of its randomness.
pub fn make_baseline(
    kind: BaselineKind,
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    seed: u64,
) -> Result<Box<dyn Agent + Send>> {
    Ok(match kind {
        BaselineKind::Random => Box::new(RandomAgent::new(sigma, omega, seed)),
        BaselineKind::Constant(letter) => Box::new(ConstantAgent::new(sigma, omega, letter)?),
        BaselineKind::HistoryLearner(params) => Box::new(HistoryLearner::new(sigma, omega, params, seed)?),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::agent_step;
    use crate::alphabet::Role;

    fn ab() -> (Arc<Alphabet>, Arc<Alphabet>) {
        (
            Arc::new(Alphabet::new(Role::Input, ["0", "1"]).unwrap()),
            Arc::new(Alphabet::new(Role::Output, ["0", "1"]).unwrap()),
        )
    }

    fn params(sigma: &Arc<Alphabet>) -> LearnerParams {
        LearnerParams {
            history: 1,
            epsilon: 0.2,
            alpha: 0.5,
            gamma: 0.5,
            decay_steps: Some(100),
            meaning: MeaningOfLife::from_names(sigma.clone(), &["1"], &["0"]).unwrap(),
        }
    }

    #[test]
    fn constant_forever() {
        let (s, o) = ab();
        let mut a = make_baseline(BaselineKind::Constant(Letter(1)), s, o, 0).unwrap();
        assert!((0..50).all(|i| agent_step(&mut a, Letter(i % 2)) == Letter(1)));
    }

    #[test]
    fn random_frequencies_are_balanced() {
        let (s, o) = ab();
        let mut a = make_baseline(BaselineKind::Random, s, o, 11).unwrap();
        let ones = (0..10_000).filter(|_| agent_step(&mut a, Letter(0)) == Letter(1)).count();
        let freq = ones as f64 / 10_000.0;
        assert!((freq - 0.5).abs() <= 0.05, "{freq}");
    }

    #[test]
    fn reset_replays_randomness() {
        let (s, o) = ab();
        for kind in [BaselineKind::Random, BaselineKind::HistoryLearner(params(&s))] {
            let mut a = make_baseline(kind, s.clone(), o.clone(), 3).unwrap();
            let first: Vec<_> = (0..200).map(|i| a.step(Letter(i % 2))).collect();
            a.reset();
            let second: Vec<_> = (0..200).map(|i| a.step(Letter(i % 2))).collect();
            assert_eq!(first, second);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let (s, o) = ab();
        let mut p = params(&s);
        p.alpha = 0.0;
        assert!(make_baseline(BaselineKind::HistoryLearner(p.clone()), s.clone(), o.clone(), 0).is_err());
        p.alpha = 0.5;
        p.gamma = 1.0;
        assert!(make_baseline(BaselineKind::HistoryLearner(p.clone()), s.clone(), o.clone(), 0).is_err());
        p.gamma = 0.0;
        p.epsilon = 1.5;
        assert!(make_baseline(BaselineKind::HistoryLearner(p), s.clone(), o.clone(), 0).is_err());
        assert!(make_baseline(BaselineKind::Constant(Letter(7)), s, o, 0).is_err());
    }

    #[test]
    fn learner_credits_the_previous_action() {
        let (s, o) = ab();
        let mut p = params(&s);
        p.epsilon = 0.0;
        p.decay_steps = None;
        p.gamma = 0.0;
        let mut l = HistoryLearner::new(s, o, p, 0).unwrap();
        // sees "0", greedy on an empty row picks action 0
        assert_eq!(l.step(Letter(0)), Letter(0));
        // the next view "1" is good: Q([0], 0) moves halfway to +1
        l.step(Letter(1));
        assert_eq!(l.action_values(&[Letter(0)]).unwrap(), &[0.5, 0.0]);
    }
}
