//! The meaning of life: good and bad view letters, and the count-difference
//! value it induces on lives.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};
use crate::life::LifeRecord;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeaningOfLife {
    sigma: Arc<Alphabet>,
    good: BTreeSet<Letter>,
    bad: BTreeSet<Letter>,
    // +1 effective-good, -1 effective-bad, 0 otherwise; indexed by letter
    weights: Vec<i8>,
}

impl MeaningOfLife {
    pub fn new(
        sigma: Arc<Alphabet>,
        good: impl IntoIterator<Item = Letter>,
        bad: impl IntoIterator<Item = Letter>,
    ) -> Result<Self> {
        let good: BTreeSet<Letter> = good.into_iter().collect();
        let bad: BTreeSet<Letter> = bad.into_iter().collect();
        if let Some(l) = good.iter().chain(&bad).find(|l| !sigma.contains(**l)) {
            return Err(Error::OutOfRange(format!("good/bad letter {} not in sigma", l.0)));
        }
        let weights = sigma
            .letters()
            .map(|l| match (good.contains(&l), bad.contains(&l)) {
                (true, false) => 1,
                (false, true) => -1,
                _ => 0,
            })
            .collect();
        Ok(MeaningOfLife { sigma, good, bad, weights })
    }

    /// Looks letters up by name.
    pub fn from_names(sigma: Arc<Alphabet>, good: &[&str], bad: &[&str]) -> Result<Self> {
        let find = |name: &&str| {
            sigma
                .lookup(name)
                .ok_or_else(|| Error::OutOfRange(format!("letter {name:?} not in sigma")))
        };
        let good = good.iter().map(find).collect::<Result<Vec<_>>>()?;
        let bad = bad.iter().map(find).collect::<Result<Vec<_>>>()?;
        MeaningOfLife::new(sigma, good, bad)
    }

    pub fn sigma(&self) -> &Arc<Alphabet> {
        &self.sigma
    }

    pub fn good(&self) -> &BTreeSet<Letter> {
        &self.good
    }

    pub fn bad(&self) -> &BTreeSet<Letter> {
        &self.bad
    }

    /// +1, -1 or 0. A letter in both subsets counts as neither.
    pub fn letter_value(&self, letter: Letter) -> i64 {
        self.weights[letter.0] as i64
    }

    pub fn is_effective_good(&self, letter: Letter) -> bool {
        self.weights[letter.0] > 0
    }

    pub fn is_effective_bad(&self, letter: Letter) -> bool {
        self.weights[letter.0] < 0
    }

    pub fn value_of(&self, views: &[Letter]) -> i64 {
        views.iter().map(|&v| self.letter_value(v)).sum()
    }
}

/// Good views minus bad views over the whole life.
pub fn life_value(life: &LifeRecord, meaning: &MeaningOfLife) -> i64 {
    meaning.value_of(&life.views)
}

/// Orders two lives by value. Actions and states play no part.
pub fn compare_lives(a: &LifeRecord, b: &LifeRecord, meaning: &MeaningOfLife) -> Ordering {
    life_value(a, meaning).cmp(&life_value(b, meaning))
}
