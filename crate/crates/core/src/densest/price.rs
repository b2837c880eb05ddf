//! Minimum-price candidates for queries with a single non-output attribute.
//!
//! Fix the non-output attribute `B` and let `A_E` be the output attributes of
//! the relations containing `B`. Elements to cover are `π_{A_E} Q(D)`. At a
//! value `b`, element `u` is obtainable through exactly one tuple per such
//! relation, so the candidates at `b` form a hypergraph whose vertices are the
//! tuples with `B = b` and whose edges are the uncovered elements.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::Rational64;

use crate::database::{Database, Tuple, Value};
use crate::densest::{densest_hypergraph, HypergraphDensityInstance};
use crate::error::{Error, Result};
use crate::eval::{self, positions, project, ResultSet};
use crate::query::{Attribute, Query};

/// Tuples chosen at one `b` together with what they newly cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PricedCandidate {
    pub b: Value,
    /// `(relation, tuple)` pairs, sorted.
    pub tuples: Vec<(String, Tuple)>,
    /// Indices into [`GreedyContext::elements`].
    pub elements: Vec<usize>,
    pub new_count: usize,
    pub price: Rational64,
}

#[derive(Debug, Clone)]
struct Hyperedge {
    element: usize,
    /// One tuple per relation containing `B`, in query order.
    tuples: Vec<Tuple>,
}

#[derive(Debug, Clone)]
pub struct GreedyContext {
    b_attr: Attribute,
    b_relations: Vec<String>,
    element_attrs: Vec<Attribute>,
    elements: Vec<Vec<Value>>,
    by_b: BTreeMap<Value, Vec<Hyperedge>>,
}

impl GreedyContext {
    /// Requires exactly one non-output attribute.
    pub fn new(query: &Query, db: &Database) -> Result<Self> {
        let nonout = query.non_output_attrs();
        let [b_attr] = nonout.as_slice() else {
            return Err(Error::PreconditionViolated("single non-output attribute"));
        };
        let results = eval::evaluate(query, db)?;
        let b_relations: Vec<String> = query
            .relations()
            .iter()
            .filter(|r| r.contains(b_attr))
            .map(|r| r.name.clone())
            .collect();
        let names: Vec<&str> = b_relations.iter().map(String::as_str).collect();
        let sub = query.subquery(&names)?;
        let element_attrs = sub.head().to_vec();
        let head_idx = positions(query.head(), &element_attrs);
        let elements: Vec<Vec<Value>> = results
            .iter()
            .map(|r| project(r, &head_idx))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let element_index: HashMap<&[Value], usize> =
            elements.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();

        let sub_attrs = sub.attrs();
        let b_pos = positions(&sub_attrs, std::slice::from_ref(b_attr))[0];
        let elem_pos = positions(&sub_attrs, &element_attrs);
        let rel_pos: Vec<Vec<usize>> = sub.relations().iter().map(|r| positions(&sub_attrs, &r.attrs)).collect();
        let mut by_b: BTreeMap<Value, Vec<Hyperedge>> = BTreeMap::new();
        for row in eval::full_join_of(&sub, db)? {
            if let Some(&element) = element_index.get(project(&row, &elem_pos).as_slice()) {
                by_b.entry(row[b_pos].clone()).or_default().push(Hyperedge {
                    element,
                    tuples: rel_pos.iter().map(|p| project(&row, p)).collect(),
                });
            }
        }
        Ok(GreedyContext {
            b_attr: b_attr.clone(),
            b_relations,
            element_attrs,
            elements,
            by_b,
        })
    }

    pub fn b_attribute(&self) -> &str {
        &self.b_attr
    }

    /// Relations containing the non-output attribute, in query order.
    pub fn b_relations(&self) -> &[String] {
        &self.b_relations
    }

    pub fn element_attributes(&self) -> &[Attribute] {
        &self.element_attrs
    }

    /// `π_{A_E} Q(D)`, sorted.
    pub fn elements(&self) -> &[Vec<Value>] {
        &self.elements
    }

    pub fn b_values(&self) -> impl Iterator<Item = &Value> {
        self.by_b.keys()
    }

    /// Element indices obtainable at `b`.
    pub fn elements_at(&self, b: &Value) -> Vec<usize> {
        self.by_b
            .get(b)
            .map(|hs| hs.iter().map(|h| h.element).collect())
            .unwrap_or_default()
    }

    /// Element flags: `true` when every result projecting to it is in `covered`.
    pub fn covered_flags(&self, query: &Query, db: &Database, covered: &ResultSet) -> Result<Vec<bool>> {
        let head_idx = positions(query.head(), &self.element_attrs);
        let mut open: BTreeSet<Vec<Value>> = BTreeSet::new();
        for r in eval::evaluate(query, db)? {
            if !covered.contains(&r) {
                open.insert(project(&r, &head_idx));
            }
        }
        Ok(self.elements.iter().map(|e| !open.contains(e)).collect())
    }

    /// Densest choice of tuples at `b` against the uncovered elements, or
    /// `None` when `b` offers nothing new.
    pub fn candidate(&self, b: &Value, covered: &[bool]) -> Result<Option<PricedCandidate>> {
        let Some(hs) = self.by_b.get(b) else {
            return Ok(None);
        };
        let open: Vec<&Hyperedge> = hs.iter().filter(|h| !covered[h.element]).collect();
        if open.is_empty() {
            return Ok(None);
        }
        let mut vertices: Vec<(usize, &Tuple)> = Vec::new();
        let mut vertex_id: HashMap<(usize, &Tuple), usize> = HashMap::new();
        let mut edges = Vec::with_capacity(open.len());
        for h in &open {
            let mut e = Vec::with_capacity(h.tuples.len());
            for (ri, t) in h.tuples.iter().enumerate() {
                let id = *vertex_id.entry((ri, t)).or_insert_with(|| {
                    vertices.push((ri, t));
                    vertices.len() - 1
                });
                e.push(id);
            }
            edges.push(e);
        }
        let best = densest_hypergraph(&HypergraphDensityInstance {
            num_vertices: vertices.len(),
            edges: edges.clone(),
        })?;
        let chosen: BTreeSet<usize> = best.vertices.iter().copied().collect();
        let mut elements: Vec<usize> = open
            .iter()
            .zip(&edges)
            .filter(|(_, e)| e.iter().all(|v| chosen.contains(v)))
            .map(|(h, _)| h.element)
            .collect();
        elements.sort_unstable();
        let mut tuples: Vec<(String, Tuple)> = best
            .vertices
            .iter()
            .map(|&v| (self.b_relations[vertices[v].0].clone(), vertices[v].1.clone()))
            .collect();
        tuples.sort();
        let new_count = elements.len();
        Ok(Some(PricedCandidate {
            b: b.clone(),
            price: Rational64::new(tuples.len() as i64, new_count as i64),
            tuples,
            elements,
            new_count,
        }))
    }

    /// Uncovered elements obtainable from `tuples` (pairs of relation and
    /// tuple over relations containing `B`).
    pub fn newly_covered(&self, tuples: &BTreeSet<(String, Tuple)>, covered: &[bool]) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for hs in self.by_b.values() {
            for h in hs {
                if !covered[h.element]
                    && h
                        .tuples
                        .iter()
                        .zip(&self.b_relations)
                        .all(|(t, r)| tuples.contains(&(r.clone(), t.clone())))
                {
                    out.insert(h.element);
                }
            }
        }
        out
    }

    /// `|tuples| / |newly covered|`, or `None` when nothing new is covered.
    pub fn price(&self, tuples: &BTreeSet<(String, Tuple)>, covered: &[bool]) -> Option<Rational64> {
        let new = self.newly_covered(tuples, covered).len();
        (new > 0).then(|| Rational64::new(tuples.len() as i64, new as i64))
    }
}

/// Minimum-price candidate at `b` with `covered` given as query results.
pub fn min_price_candidate(
    query: &Query,
    db: &Database,
    b: &Value,
    covered: &ResultSet,
) -> Result<Option<PricedCandidate>> {
    let ctx = GreedyContext::new(query, db)?;
    let flags = ctx.covered_flags(query, db, covered)?;
    ctx.candidate(b, &flags)
}
