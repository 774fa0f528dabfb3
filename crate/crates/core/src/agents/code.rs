//! Canonical numbering and bit encoding of transducer policies.
//!
//! A policy with `s` states over `|Σ| = m`, `|Ω| = k` is encoded MSB-first as
//!
//! ```text
//! 1^(s-1) 0                                  state count in unary
//! for state q in 0..s, for input i in 0..m:
//!     out(q, i)   in ceil(log2 k) bits
//!     next(q, i)  in ceil(log2 s) bits
//! ```
//!
//! so every `s`-state policy has bit length `s + s·m·(⌈log2 k⌉ + ⌈log2 s⌉)`.
//! The start state is always 0. Indices count policies by ascending state
//! count, then by the table read as a mixed-radix number with the same
//! digit order as the bit encoding, so index order is length order with a
//! lexicographic tie-break.

use std::sync::Arc;

use super::TransducerPolicy;
use crate::alphabet::{Alphabet, Letter};
use crate::error::{Error, Result};

/// Position of a policy in the canonical order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolicyCode {
    pub index: u64,
    pub state_count: usize,
    /// Bit length of the canonical encoding.
    pub length: usize,
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Bit length of every `states`-state policy over alphabets of size `m`, `k`.
pub fn bit_length(m: usize, k: usize, states: usize) -> usize {
    states + states * m * (ceil_log2(k) + ceil_log2(states))
}

/// Number of distinct `states`-state tables: `k^(s·m) · s^(s·m)`.
pub fn policy_count(m: usize, k: usize, states: usize) -> Option<u64> {
    let cells = u32::try_from(states.checked_mul(m)?).ok()?;
    (k as u64).checked_pow(cells)?.checked_mul((states as u64).checked_pow(cells)?)
}

fn overflow() -> Error {
    Error::ResourceLimit { what: "policy index", needed: u128::from(u64::MAX) + 1, cap: u64::MAX.into() }
}

/// Index of the first policy with `states` states.
fn offset(m: usize, k: usize, states: usize) -> Result<u64> {
    (1..states).try_fold(0u64, |acc, s| {
        policy_count(m, k, s).and_then(|c| acc.checked_add(c)).ok_or_else(overflow)
    })
}

impl PolicyCode {
    /// Canonical code of a policy. The policy must start in state 0; see
    /// [`TransducerPolicy::normalized_start`].
    pub fn encode(policy: &TransducerPolicy) -> Result<PolicyCode> {
        if policy.start() != 0 {
            return Err(Error::InvalidConfig(format!(
                "canonical encoding needs start state 0, policy starts in {}",
                policy.start()
            )));
        }
        let m = policy.sigma_arc().len();
        let k = policy.omega_arc().len();
        let s = policy.state_count();
        let mut local: u64 = 0;
        for (o, n) in policy.outputs().iter().zip(policy.nexts()) {
            local = local
                .checked_mul(k as u64)
                .and_then(|x| x.checked_add(o.0 as u64))
                .and_then(|x| x.checked_mul(s as u64))
                .and_then(|x| x.checked_add(*n as u64))
                .ok_or_else(overflow)?;
        }
        let index = offset(m, k, s)?.checked_add(local).ok_or_else(overflow)?;
        Ok(PolicyCode { index, state_count: s, length: bit_length(m, k, s) })
    }

    /// Code for a bare index; finds the state count it falls in.
    pub fn from_index(index: u64, m: usize, k: usize) -> Result<PolicyCode> {
        let mut base = 0u64;
        for s in 1.. {
            let count = policy_count(m, k, s).ok_or_else(overflow)?;
            if index - base < count {
                return Ok(PolicyCode { index, state_count: s, length: bit_length(m, k, s) });
            }
            base = base.checked_add(count).ok_or_else(overflow)?;
        }
        unreachable!()
    }

    /// The policy at `index` in the canonical order.
    pub fn decode(index: u64, sigma: Arc<Alphabet>, omega: Arc<Alphabet>) -> Result<TransducerPolicy> {
        let (m, k) = (sigma.len(), omega.len());
        let code = PolicyCode::from_index(index, m, k)?;
        let s = code.state_count;
        let mut local = index - offset(m, k, s)?;
        let cells = s * m;
        let mut out = vec![Letter(0); cells];
        let mut next = vec![0; cells];
        for cell in (0..cells).rev() {
            next[cell] = (local % s as u64) as usize;
            local /= s as u64;
            out[cell] = Letter((local % k as u64) as usize);
            local /= k as u64;
        }
        TransducerPolicy::new(sigma, omega, s, 0, out, next)
    }

    /// The canonical bit string, as `'0'`/`'1'` characters.
    pub fn bits(policy: &TransducerPolicy) -> Result<String> {
        if policy.start() != 0 {
            return Err(Error::InvalidConfig("canonical encoding needs start state 0".into()));
        }
        let k = policy.omega_arc().len();
        let s = policy.state_count();
        let (ob, nb) = (ceil_log2(k), ceil_log2(s));
        let mut bits = String::with_capacity(bit_length(policy.sigma_arc().len(), k, s));
        bits.extend(std::iter::repeat_n('1', s - 1));
        bits.push('0');
        let mut push = |value: usize, width: usize| {
            for b in (0..width).rev() {
                bits.push(if value >> b & 1 == 1 { '1' } else { '0' });
            }
        };
        for (o, n) in policy.outputs().iter().zip(policy.nexts()) {
            push(o.0, ob);
            push(*n, nb);
        }
        Ok(bits)
    }

    /// Parses a canonical bit string back into a policy.
    pub fn from_bits(bits: &str, sigma: Arc<Alphabet>, omega: Arc<Alphabet>) -> Result<TransducerPolicy> {
        let bad = |why: &str| Error::InvalidConfig(format!("bad policy bit string: {why}"));
        if bits.chars().any(|c| c != '0' && c != '1') {
            return Err(bad("only 0 and 1 allowed"));
        }
        let header = bits.find('0').ok_or_else(|| bad("unterminated state count"))?;
        let s = header + 1;
        let (m, k) = (sigma.len(), omega.len());
        if bits.len() != bit_length(m, k, s) {
            return Err(bad("wrong length for its state count"));
        }
        let (ob, nb) = (ceil_log2(k), ceil_log2(s));
        let mut rest = &bits[s..];
        let mut take = |width: usize| {
            let (head, tail) = rest.split_at(width);
            rest = tail;
            head.chars().fold(0usize, |acc, c| acc << 1 | (c == '1') as usize)
        };
        let mut out = Vec::with_capacity(s * m);
        let mut next = Vec::with_capacity(s * m);
        for _ in 0..s * m {
            out.push(Letter(take(ob)));
            next.push(take(nb));
        }
        TransducerPolicy::new(sigma, omega, s, 0, out, next)
    }
}

/// Every policy with at most `max_states` states, in canonical order.
pub struct PolicyStream {
    sigma: Arc<Alphabet>,
    omega: Arc<Alphabet>,
    next_index: u64,
    end: u64,
}

impl PolicyStream {
    /// Total number of policies the stream yields.
    pub fn total(&self) -> u64 {
        self.end
    }
}

impl Iterator for PolicyStream {
    type Item = (PolicyCode, TransducerPolicy);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next_index >= self.end {
            return None;
        }
        let index = self.next_index;
        self.next_index += 1;
        let policy = PolicyCode::decode(index, self.sigma.clone(), self.omega.clone())
            .expect("index below stream end decodes");
        let code = PolicyCode {
            index,
            state_count: policy.state_count(),
            length: bit_length(self.sigma.len(), self.omega.len(), policy.state_count()),
        };
        Some((code, policy))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = usize::try_from(self.end - self.next_index).ok();
        (left.unwrap_or(usize::MAX), left)
    }
}

/// Streams all policies with `1..=max_states` states.
pub fn enumerate_policies(sigma: Arc<Alphabet>, omega: Arc<Alphabet>, max_states: usize) -> Result<PolicyStream> {
    if max_states == 0 {
        return Err(Error::InvalidConfig("max_states must be at least 1".into()));
    }
    let end = offset(sigma.len(), omega.len(), max_states + 1)?;
    Ok(PolicyStream { sigma, omega, next_index: 0, end })
}
