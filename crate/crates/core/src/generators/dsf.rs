//! Line queries as directed Steiner forest instances.
//!
//! A line query `Q(A_1, A_{m+1}) :- R_1(A_1,A_2), …, R_m(A_m,A_{m+1})` maps to
//! a layered digraph with one node per (attribute, value) and one unit-weight
//! arc per tuple, directed from `A_i` to `A_{i+1}`. Demands are the query
//! results. Witnesses and feasible arc sets correspond one to one.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::database::{Database, Tuple, Value};
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::query::{Attribute, Query};
use crate::witness::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsfEdge {
    pub from: String,
    pub to: String,
    pub weight: u32,
    pub relation: String,
    /// Index of the tuple in its relation's sorted tuple set.
    pub tuple_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DsfInstance {
    pub nodes: Vec<String>,
    pub edges: Vec<DsfEdge>,
    pub demands: Vec<(String, String)>,
    #[serde(skip)]
    tuples: Vec<Tuple>,
}

fn node(attr: &str, v: &Value) -> String {
    format!("{attr}={v}")
}

/// Relation index and whether its first column is the earlier attribute.
type Step = (usize, bool);

/// Attributes and relations in chain order.
fn chain(query: &Query) -> Result<(Vec<Attribute>, Vec<Step>)> {
    let bad = |why: &str| Error::NotALineQuery(format!("{query}: {why}"));
    let [start, end] = query.head() else {
        return Err(bad("the head must hold exactly two attributes"));
    };
    if query.relations().iter().any(|r| r.attrs.len() != 2) {
        return Err(bad("every atom must be binary"));
    }
    let mut attrs = vec![start.clone()];
    let mut order = Vec::new();
    let mut used = vec![false; query.relations().len()];
    while attrs.last() != Some(end) || order.len() < query.relations().len() {
        let cur = attrs.last().expect("nonempty").clone();
        let next: Vec<usize> = (0..used.len())
            .filter(|&i| !used[i] && query.relations()[i].contains(&cur))
            .collect();
        let [i] = next.as_slice() else {
            return Err(bad("atoms do not form a single path between the head attributes"));
        };
        used[*i] = true;
        let r = &query.relations()[*i];
        let forward = r.attrs[0] == cur;
        let other = if forward { &r.attrs[1] } else { &r.attrs[0] };
        if attrs.contains(other) {
            return Err(bad("atoms form a cycle"));
        }
        attrs.push(other.clone());
        order.push((*i, forward));
        if other == end && order.len() < query.relations().len() {
            return Err(bad("atoms left over after reaching the last head attribute"));
        }
    }
    Ok((attrs, order))
}

pub fn line_to_dsf(query: &Query, db: &Database) -> Result<DsfInstance> {
    let (attrs, order) = chain(query)?;
    db.check_conforms(query)?;
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    let mut tuples = Vec::new();
    for (pos, &(ri, forward)) in order.iter().enumerate() {
        let schema = &query.relations()[ri];
        for (tid, t) in db.get(&schema.name)?.tuples().iter().enumerate() {
            let (a, b) = if forward { (&t[0], &t[1]) } else { (&t[1], &t[0]) };
            let (from, to) = (node(&attrs[pos], a), node(&attrs[pos + 1], b));
            nodes.insert(from.clone());
            nodes.insert(to.clone());
            edges.push(DsfEdge {
                from,
                to,
                weight: 1,
                relation: schema.name.clone(),
                tuple_id: tid,
            });
            tuples.push(t.clone());
        }
    }
    let demands = evaluate(query, db)?
        .into_iter()
        .map(|r| (node(&query.head()[0], &r[0]), node(&query.head()[1], &r[1])))
        .collect();
    Ok(DsfInstance {
        nodes: nodes.into_iter().collect(),
        edges,
        demands,
        tuples,
    })
}

impl DsfInstance {
    /// The witness made of the tuples behind `edges`.
    pub fn pull_back(&self, query: &Query, edges: &BTreeSet<usize>) -> Result<Witness> {
        let mut w = Witness::empty("dsf", query);
        for &e in edges {
            let edge = self
                .edges
                .get(e)
                .ok_or_else(|| Error::InvalidInstance(format!("no edge {e}")))?;
            w.db.insert(&edge.relation, self.tuples[e].clone())?;
        }
        Ok(w)
    }

    /// The arcs of the tuples in `witness`.
    pub fn push_forward(&self, witness: &Witness) -> BTreeSet<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                witness
                    .db
                    .relation(&self.edges[e].relation)
                    .is_some_and(|r| r.contains(&self.tuples[e]))
            })
            .collect()
    }

    fn adjacency(&self, edges: impl Iterator<Item = usize>) -> HashMap<&str, Vec<(&str, usize)>> {
        let mut adj: HashMap<&str, Vec<(&str, usize)>> = HashMap::new();
        for e in edges {
            let edge = &self.edges[e];
            adj.entry(edge.from.as_str()).or_default().push((edge.to.as_str(), e));
        }
        adj
    }

    /// Whether every demand is connected using only `edges`.
    pub fn is_feasible(&self, edges: &BTreeSet<usize>) -> bool {
        let adj = self.adjacency(edges.iter().copied());
        self.demands.iter().all(|(s, t)| {
            let mut seen = BTreeSet::from([s.as_str()]);
            let mut queue = VecDeque::from([s.as_str()]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    return true;
                }
                for &(v, _) in adj.get(u).into_iter().flatten() {
                    if seen.insert(v) {
                        queue.push_back(v);
                    }
                }
            }
            false
        })
    }
}

/// Union over demands of the path whose node sequence is lexicographically
/// smallest by value (all paths of a demand have the same length).
pub fn dsf_per_pair_paths(inst: &DsfInstance) -> Result<BTreeSet<usize>> {
    let adj = inst.adjacency(0..inst.edges.len());
    let mut radj: HashMap<&str, Vec<&str>> = HashMap::new();
    for e in &inst.edges {
        radj.entry(e.to.as_str()).or_default().push(e.from.as_str());
    }
    let value_of = |n: &str| n.split_once('=').map_or(n.to_string(), |(_, v)| v.to_string());
    let mut chosen = BTreeSet::new();
    for (s, t) in &inst.demands {
        let mut reach: BTreeSet<&str> = BTreeSet::from([t.as_str()]);
        let mut queue = VecDeque::from([t.as_str()]);
        while let Some(v) = queue.pop_front() {
            for &u in radj.get(v).into_iter().flatten() {
                if reach.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        if !reach.contains(s.as_str()) {
            return Err(Error::UnreachableDemand {
                source_node: s.clone(),
                target: t.clone(),
            });
        }
        let mut cur = s.as_str();
        while cur != t {
            let (next, e) = adj[cur]
                .iter()
                .filter(|(v, _)| reach.contains(v))
                .min_by_key(|(v, e)| (value_of(v), *e))
                .copied()
                .expect("reachability guarantees a successor");
            chosen.insert(e);
            cur = next;
        }
    }
    Ok(chosen)
}

/// Distinct values per chain position, for sanity checks on node counts.
pub fn layer_sizes(query: &Query, db: &Database) -> Result<BTreeMap<Attribute, usize>> {
    let (attrs, order) = chain(query)?;
    let mut values: BTreeMap<Attribute, BTreeSet<Value>> = BTreeMap::new();
    for (pos, &(ri, forward)) in order.iter().enumerate() {
        for t in db.get(&query.relations()[ri].name)?.tuples() {
            let (a, b) = if forward { (&t[0], &t[1]) } else { (&t[1], &t[0]) };
            values.entry(attrs[pos].clone()).or_default().insert(a.clone());
            values.entry(attrs[pos + 1].clone()).or_default().insert(b.clone());
        }
    }
    Ok(values.into_iter().map(|(k, v)| (k, v.len())).collect())
}
