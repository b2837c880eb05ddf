//! Greedy weighted cover for queries with exactly one non-output attribute.

use std::collections::BTreeMap;

use crate::database::{Database, Value};
use crate::densest::{GreedyContext, PricedCandidate};
use crate::error::{Error, Result};
use crate::eval::{evaluate, positions, project};
use crate::query::Query;
use crate::solvers::{RatioBound, SolveReport};
use crate::witness::Witness;

/// Repeatedly takes the cheapest candidate over all values of the non-output
/// attribute (ties to the smallest value) until every element is covered.
pub fn solve_greedy_single_nonoutput(query: &Query, db: &Database) -> Result<SolveReport> {
    let ctx = GreedyContext::new(query, db)?;
    let results = evaluate(query, db)?;
    let mut w = Witness::empty("greedy", query);
    for rel in query.relations().iter().filter(|r| query.is_head_only(r)) {
        let idx = positions(query.head(), &rel.attrs);
        for r in &results {
            w.db.insert(&rel.name, project(r, &idx))?;
        }
    }

    let mut covered = vec![false; ctx.elements().len()];
    let mut remaining = covered.len();
    let mut cache: BTreeMap<Value, Option<PricedCandidate>> = BTreeMap::new();
    for b in ctx.b_values() {
        cache.insert(b.clone(), ctx.candidate(b, &covered)?);
    }
    while remaining > 0 {
        let best = cache
            .values()
            .flatten()
            .min_by(|x, y| x.price.cmp(&y.price).then_with(|| x.b.cmp(&y.b)))
            .cloned()
            .ok_or_else(|| Error::InternalInconsistency("uncovered elements but no candidate".into()))?;
        for (name, t) in &best.tuples {
            w.db.insert(name, t.clone())?;
        }
        for &e in &best.elements {
            covered[e] = true;
            remaining -= 1;
        }
        // every b that could reach a newly covered element has a changed hypergraph
        let touched: Vec<Value> = ctx
            .b_values()
            .filter(|b| ctx.elements_at(b).iter().any(|e| best.elements.contains(e)))
            .cloned()
            .collect();
        for b in touched {
            let c = ctx.candidate(&b, &covered)?;
            cache.insert(b, c);
        }
    }
    let rep = SolveReport::new(db, w, results.len()).with_bound(RatioBound::Harmonic {
        elements: results.len(),
    });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::witness::is_witness;

    #[test]
    fn unique_witness_is_returned_whole() {
        let q = fixtures::q_matrix();
        let db = Database::from_rows(
            &q,
            [
                ("R1", vec![vec!["a1", "b1"], vec!["a2", "b2"]]),
                ("R2", vec![vec!["b1", "c1"], vec!["b2", "c2"]]),
            ],
        )
        .unwrap();
        let rep = solve_greedy_single_nonoutput(&q, &db).unwrap();
        assert_eq!(rep.witness.db, db);
    }

    #[test]
    fn head_only_relations_are_mandatory() {
        let q = Query::parse("Q(A,C) :- R1(A,B), R2(B,C), R3(A,C)").unwrap();
        let db = Database::from_rows(
            &q,
            [
                ("R1", vec![vec!["a1", "b1"], vec!["a1", "b2"]]),
                ("R2", vec![vec!["b1", "c1"], vec!["b2", "c1"]]),
                ("R3", vec![vec!["a1", "c1"], vec!["a9", "c9"]]),
            ],
        )
        .unwrap();
        let rep = solve_greedy_single_nonoutput(&q, &db).unwrap();
        assert_eq!(rep.witness_size, 3);
        assert!(is_witness(&q, &db, &rep.witness).unwrap());
    }

    #[test]
    fn empty_and_precondition() {
        let q = fixtures::q_matrix();
        let rep = solve_greedy_single_nonoutput(&q, &Database::empty_for(&q)).unwrap();
        assert_eq!(rep.witness_size, 0);
        let (fq, fdb) = fixtures::example_instance();
        assert!(matches!(
            solve_greedy_single_nonoutput(&fq, &fdb),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
