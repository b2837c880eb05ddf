//! Exact smallest witnesses by branch and bound.
//!
//! Only tuples occurring in some full join result can matter, so the search
//! runs over those. Each result is *supported* by the tuple sets of its full
//! join rows; a witness is a tuple set containing one support per result. The
//! search repeatedly branches over the supports of the uncovered result with
//! the fewest of them, pruned by two lower bounds: the number of distinct
//! `head(R_i)`-projections still missing per relation, and the cheapest
//! completion of any single uncovered result.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::database::{Database, Tuple, Value};
use crate::error::{Error, Result};
use crate::eval::{evaluate, full_join, positions, project};
use crate::query::Query;
use crate::solvers::{RatioBound, SolveReport};
use crate::witness::Witness;

pub const DEFAULT_ORACLE_CAP: usize = 30;
/// Tuple sets are 128-bit masks.
pub const HARD_LIMIT: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Refuse instances with more non-dangling tuples than this.
    pub cap: usize,
    /// Give up when no witness of at most this size exists.
    pub budget: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            cap: DEFAULT_ORACLE_CAP,
            budget: None,
        }
    }
}

struct Prepared {
    tuples: Vec<(usize, Tuple)>,
    tuple_key: Vec<u128>,
    supports: Vec<Vec<u128>>,
    result_keys: Vec<u128>,
}

fn prepare(query: &Query, db: &Database, cap: usize) -> Result<Prepared> {
    let rows = full_join(query, db)?;
    let attrs = query.attrs();
    let rel_idx: Vec<Vec<usize>> = query.relations().iter().map(|r| positions(&attrs, &r.attrs)).collect();
    let head_idx = positions(&attrs, query.head());

    let mut ids: BTreeMap<(usize, Tuple), usize> = BTreeMap::new();
    for row in &rows {
        for (i, idx) in rel_idx.iter().enumerate() {
            let next = ids.len();
            ids.entry((i, project(row, idx))).or_insert(next);
        }
    }
    let limit = cap.min(HARD_LIMIT);
    if ids.len() > limit {
        return Err(Error::InstanceTooLarge { size: ids.len(), cap: limit });
    }
    // renumber in sorted order so results are deterministic
    let tuples: Vec<(usize, Tuple)> = ids.keys().cloned().collect();
    let id_of: HashMap<&(usize, Tuple), usize> = tuples.iter().enumerate().map(|(k, t)| (t, k)).collect();

    let mut key_ids: HashMap<(usize, Vec<Value>), usize> = HashMap::new();
    let mut tuple_key = Vec::with_capacity(tuples.len());
    for (i, t) in &tuples {
        let schema = &query.relations()[*i];
        let h = project(t, &positions(&schema.attrs, &query.head_of(schema)));
        let next = key_ids.len();
        let k = *key_ids.entry((*i, h)).or_insert(next);
        tuple_key.push(1u128 << k);
    }

    let mut grouped: BTreeMap<Vec<Value>, (Vec<u128>, u128)> = BTreeMap::new();
    for row in &rows {
        let mut mask = 0u128;
        let mut keys = 0u128;
        for (i, idx) in rel_idx.iter().enumerate() {
            let id = id_of[&(i, project(row, idx))];
            mask |= 1 << id;
            keys |= tuple_key[id];
        }
        let entry = grouped.entry(project(row, &head_idx)).or_default();
        entry.0.push(mask);
        entry.1 = keys;
    }
    let mut supports = Vec::new();
    let mut result_keys = Vec::new();
    for (_, (mut s, k)) in grouped {
        s.sort_unstable();
        s.dedup();
        supports.push(s);
        result_keys.push(k);
    }
    Ok(Prepared {
        tuples,
        tuple_key,
        supports,
        result_keys,
    })
}

enum Mode {
    /// Find one witness smaller than `bound`.
    Minimum,
    /// Collect every witness of exactly `bound` tuples, up to a limit.
    All { limit: usize },
}

struct Search<'a> {
    p: &'a Prepared,
    bound: u32,
    best: Option<u128>,
    found: Vec<u128>,
    mode: Mode,
    seen: HashSet<u128>,
}

impl Search<'_> {
    fn keys_of(&self, set: u128) -> u128 {
        let mut keys = 0;
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            keys |= self.p.tuple_key[i];
            rest &= rest - 1;
        }
        keys
    }

    fn run(&mut self, chosen: u128) {
        if !self.seen.insert(chosen) {
            return;
        }
        if let Mode::All { limit } = self.mode {
            if self.found.len() >= limit {
                return;
            }
        }
        let size = chosen.count_ones();
        let open: Vec<usize> = (0..self.p.supports.len())
            .filter(|&r| !self.p.supports[r].iter().any(|s| s & !chosen == 0))
            .collect();
        if open.is_empty() {
            match self.mode {
                Mode::Minimum if size < self.bound => {
                    self.bound = size;
                    self.best = Some(chosen);
                }
                Mode::Minimum => {}
                Mode::All { .. } => self.found.push(chosen),
            }
            return;
        }
        let needed = open.iter().fold(0u128, |k, &r| k | self.p.result_keys[r]);
        let by_keys = (needed & !self.keys_of(chosen)).count_ones();
        let mut branch = open[0];
        let mut branch_key = (usize::MAX, u32::MAX);
        let mut by_result = 0;
        for &r in &open {
            let cheapest = self.p.supports[r].iter().map(|s| (s & !chosen).count_ones()).min().unwrap_or(0);
            by_result = by_result.max(cheapest);
            let key = (self.p.supports[r].len(), cheapest);
            if key < branch_key {
                branch_key = key;
                branch = r;
            }
        }
        let lower = size + by_keys.max(by_result);
        let pruned = match self.mode {
            Mode::Minimum => lower >= self.bound,
            Mode::All { .. } => lower > self.bound,
        };
        if pruned {
            return;
        }
        let mut options: Vec<u128> = self.p.supports[branch].clone();
        options.sort_by_key(|s| ((s & !chosen).count_ones(), *s));
        for s in options {
            self.run(chosen | s);
        }
    }
}

fn to_witness(query: &Query, p: &Prepared, set: u128) -> Result<Witness> {
    let mut w = Witness::empty("oracle", query);
    for (k, (i, t)) in p.tuples.iter().enumerate() {
        if set >> k & 1 == 1 {
            w.db.insert(&query.relations()[*i].name, t.clone())?;
        }
    }
    Ok(w)
}

/// A minimum-cardinality witness.
pub fn brute_force_swp(query: &Query, db: &Database, config: OracleConfig) -> Result<Witness> {
    let p = prepare(query, db, config.cap)?;
    // incumbent: first support of every result
    let greedy = p.supports.iter().fold(0u128, |m, s| m | s[0]);
    let greedy_size = greedy.count_ones();
    let budget = config.budget.map(|b| b as u32);
    let (bound, best) = match budget {
        Some(b) if b < greedy_size => (b + 1, None),
        _ => (greedy_size, Some(greedy)),
    };
    let mut search = Search {
        p: &p,
        bound,
        best,
        found: Vec::new(),
        mode: Mode::Minimum,
        seen: HashSet::new(),
    };
    if !p.supports.is_empty() {
        search.run(0);
    }
    match search.best {
        Some(set) => to_witness(query, &p, set),
        None if p.supports.is_empty() => Ok(Witness::empty("oracle", query)),
        None => Err(Error::BudgetExhausted {
            budget: config.budget.unwrap_or(0),
        }),
    }
}

/// [`brute_force_swp`] wrapped in a report.
pub fn solve_oracle(query: &Query, db: &Database, config: OracleConfig) -> Result<SolveReport> {
    let w = brute_force_swp(query, db, config)?;
    let n = evaluate(query, db)?.len();
    Ok(SolveReport::new(db, w, n).with_bound(RatioBound::Constant { factor: 1 }))
}

/// Every minimum witness, up to `limit` of them.
pub fn all_minimum_witnesses(query: &Query, db: &Database, config: OracleConfig, limit: usize) -> Result<Vec<Witness>> {
    let opt = brute_force_swp(query, db, config)?.size() as u32;
    let p = prepare(query, db, config.cap)?;
    if p.supports.is_empty() {
        return Ok(vec![Witness::empty("oracle", query)]);
    }
    let mut search = Search {
        p: &p,
        bound: opt,
        best: None,
        found: Vec::new(),
        mode: Mode::All { limit },
        seen: HashSet::new(),
    };
    search.run(0);
    let mut sets = search.found;
    sets.retain(|s| s.count_ones() == opt);
    sets.sort_unstable();
    sets.dedup();
    sets.into_iter().map(|s| to_witness(query, &p, s)).collect()
}
