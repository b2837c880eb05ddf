use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Label cover on a complete bipartite graph `U × V`, `|U| = |V| = n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelCoverInstance {
    n: usize,
    alphabet: usize,
    /// `(u, v) → allowed label pairs (x, y)`.
    constraints: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>>,
}

impl LabelCoverInstance {
    pub fn new(
        n: usize,
        alphabet: usize,
        constraints: BTreeMap<(usize, usize), BTreeSet<(usize, usize)>>,
    ) -> Result<Self> {
        if alphabet <= n {
            return Err(Error::AlphabetTooSmall { alphabet, n });
        }
        for u in 0..n {
            for v in 0..n {
                let c = constraints
                    .get(&(u, v))
                    .ok_or_else(|| Error::InvalidInstance(format!("no constraint for edge ({u}, {v})")))?;
                if c.is_empty() {
                    return Err(Error::InvalidInstance(format!("edge ({u}, {v}) cannot be satisfied")));
                }
                if c.iter().any(|&(x, y)| x >= alphabet || y >= alphabet) {
                    return Err(Error::InvalidInstance("label outside the alphabet".into()));
                }
            }
        }
        if constraints.keys().any(|&(u, v)| u >= n || v >= n) {
            return Err(Error::InvalidInstance("constraint on a missing vertex".into()));
        }
        Ok(LabelCoverInstance {
            n,
            alphabet,
            constraints,
        })
    }

    /// Each edge allows between 1 and `max_pairs` random label pairs.
    pub fn random(n: usize, alphabet: usize, max_pairs: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut constraints = BTreeMap::new();
        for u in 0..n {
            for v in 0..n {
                let k = rng.gen_range(1..=max_pairs.max(1));
                let set: BTreeSet<(usize, usize)> = (0..k)
                    .map(|_| (rng.gen_range(0..alphabet.max(1)), rng.gen_range(0..alphabet.max(1))))
                    .collect();
                constraints.insert((u, v), set);
            }
        }
        LabelCoverInstance::new(n, alphabet, constraints)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn constraints(&self) -> &BTreeMap<(usize, usize), BTreeSet<(usize, usize)>> {
        &self.constraints
    }

    /// Minimum `Σ|M_U(u)| + Σ|M_V(v)|` by exhaustive search over label
    /// subsets, or `None` beyond 20 vertex-label bits.
    pub fn min_cost(&self) -> Option<usize> {
        let bits = 2 * self.n * self.alphabet;
        if bits > 20 {
            return None;
        }
        let a = self.alphabet;
        let label_mask = (1u32 << a) - 1;
        let labels = |assign: u32, vertex: usize| (assign >> (vertex * a)) & label_mask;
        (0u32..(1 << bits))
            .filter(|&assign| {
                self.constraints.iter().all(|(&(u, v), pairs)| {
                    let mu = labels(assign, u);
                    let mv = labels(assign, self.n + v);
                    pairs.iter().any(|&(x, y)| mu >> x & 1 == 1 && mv >> y & 1 == 1)
                })
            })
            .map(|assign| assign.count_ones() as usize)
            .min()
    }
}
