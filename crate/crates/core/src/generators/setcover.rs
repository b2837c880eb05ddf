use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Set cover source instance. Sets are stored as sorted element indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetCoverInstance {
    universe: Vec<String>,
    family: Vec<Vec<usize>>,
}

/// Largest family searched exhaustively for a minimum cover.
pub const MAX_EXACT_FAMILY: usize = 24;

impl SetCoverInstance {
    pub fn new(universe: Vec<String>, family: Vec<Vec<String>>) -> Result<Self> {
        let mut sets = Vec::with_capacity(family.len());
        for s in family {
            let idx = s
                .iter()
                .map(|e| {
                    universe
                        .iter()
                        .position(|u| u == e)
                        .ok_or_else(|| Error::InvalidInstance(format!("`{e}` is not in the universe")))
                })
                .collect::<Result<Vec<_>>>()?;
            sets.push(idx);
        }
        SetCoverInstance::from_indices(universe, sets)
    }

    /// Elements `u1..un` with sets given by zero-based indices.
    pub fn numbered(n: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        SetCoverInstance::from_indices((1..=n).map(|i| format!("u{i}")).collect(), family)
    }

    fn from_indices(universe: Vec<String>, family: Vec<Vec<usize>>) -> Result<Self> {
        if universe.iter().collect::<BTreeSet<_>>().len() != universe.len() {
            return Err(Error::InvalidInstance("repeated universe element".into()));
        }
        let mut sets = Vec::with_capacity(family.len());
        for s in family {
            let set: BTreeSet<usize> = s.into_iter().collect();
            if set.is_empty() {
                return Err(Error::InvalidInstance("empty set in family".into()));
            }
            if set.iter().any(|&e| e >= universe.len()) {
                return Err(Error::InvalidInstance("set element out of range".into()));
            }
            sets.push(set.into_iter().collect());
        }
        let covered: BTreeSet<usize> = sets.iter().flatten().copied().collect();
        if covered.len() != universe.len() {
            return Err(Error::UncoverableUniverse);
        }
        Ok(SetCoverInstance { universe, family: sets })
    }

    /// `n` elements, `m` random nonempty sets, patched so every element is
    /// covered.
    pub fn random(n: usize, m: usize, rng: &mut impl Rng) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidInstance("universe and family must be nonempty".into()));
        }
        let mut family: Vec<BTreeSet<usize>> = (0..m)
            .map(|_| {
                let mut s: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
                if s.is_empty() {
                    s.insert(rng.gen_range(0..n));
                }
                s
            })
            .collect();
        for e in 0..n {
            if !family.iter().any(|s| s.contains(&e)) {
                let j = rng.gen_range(0..m);
                family[j].insert(e);
            }
        }
        SetCoverInstance::numbered(n, family.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    /// Minimum cover size by exhaustive search, or `None` when the instance
    /// is too large to search.
    pub fn min_cover(&self) -> Option<usize> {
        let m = self.family.len();
        if m > MAX_EXACT_FAMILY || self.universe.len() > 64 {
            return None;
        }
        let full: u64 = if self.universe.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.universe.len()) - 1
        };
        let masks: Vec<u64> = self
            .family
            .iter()
            .map(|s| s.iter().fold(0, |acc, &e| acc | 1 << e))
            .collect();
        (0u32..(1 << m))
            .filter(|pick| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| pick >> j & 1 == 1)
                    .fold(0, |acc, (_, s)| acc | s)
                    == full
            })
            .map(|pick| pick.count_ones() as usize)
            .min()
    }
}
