//! Component-wise witness construction.
//!
//! Relations holding only output attributes receive `π_{attr(R)} Q(D)`. Every
//! existential component `E_i` with output attributes `A_i` receives, for each
//! `t ∈ π_{A_i} Q(D)`, a single-result witness of `t` in the subquery over
//! `E_i`. Optimal under head-cluster, within `2·|rels(Q)|` under
//! head-domination.

use std::collections::BTreeSet;

use crate::database::Database;
use crate::error::{Error, Result};
use crate::eval::{evaluate, positions, project};
use crate::query::Query;
use crate::solvers::dangling::semijoin_reduce;
use crate::solvers::single::{smallest_rows, split_row};
use crate::solvers::{RatioBound, SolveReport};
use crate::structure::{existential_components, has_head_cluster, join_tree};
use crate::witness::Witness;

fn component_witness(query: &Query, db: &Database, algorithm: &str) -> Result<(Witness, usize)> {
    db.check_conforms(query)?;
    let results = evaluate(query, db)?;
    let mut w = Witness::empty(algorithm, query);
    if results.is_empty() {
        return Ok((w, 0));
    }
    if query.is_full() {
        if let Some(tree) = join_tree(query) {
            w.db = semijoin_reduce(query, db, &tree)?;
            return Ok((w, results.len()));
        }
    }
    for rel in query.relations().iter().filter(|r| query.is_head_only(r)) {
        let idx = positions(query.head(), &rel.attrs);
        for r in &results {
            w.db.insert(&rel.name, project(r, &idx))?;
        }
    }
    for comp in existential_components(query) {
        let names: Vec<&str> = comp.relations.iter().map(String::as_str).collect();
        let sub = query.subquery(&names)?;
        let idx = positions(query.head(), sub.head());
        let wanted: BTreeSet<_> = results.iter().map(|r| project(r, &idx)).collect();
        let rows = smallest_rows(&sub, db)?;
        for t in &wanted {
            let row = rows.get(t).ok_or_else(|| {
                Error::InternalInconsistency(format!("projected result {t:?} has no row in its component"))
            })?;
            for (name, tup) in split_row(&sub, row) {
                w.db.insert(&name, tup)?;
            }
        }
    }
    Ok((w, results.len()))
}

/// Minimum witness for head-cluster queries.
pub fn solve_exact_head_cluster(query: &Query, db: &Database) -> Result<SolveReport> {
    if !has_head_cluster(query) {
        return Err(Error::PreconditionViolated("head-cluster"));
    }
    let (w, n) = component_witness(query, db, "exact")?;
    Ok(SolveReport::new(db, w, n).with_bound(RatioBound::Constant { factor: 1 }))
}

/// `2·|rels(Q)|`-approximate witness for head-domination queries.
pub fn solve_approx_head_domination(query: &Query, db: &Database) -> Result<SolveReport> {
    if !existential_components(query).iter().all(|c| c.dominant.is_some()) {
        return Err(Error::PreconditionViolated("head-domination"));
    }
    let (w, n) = component_witness(query, db, "approx")?;
    let factor = 2 * query.relations().len() as u64;
    Ok(SolveReport::new(db, w, n).with_bound(RatioBound::Constant { factor }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::witness::is_witness;

    #[test]
    fn shared_head_cluster_doubles_projection() {
        let q = Query::parse("Q(A1) :- R1(A1,B1), R2(A1,B1)").unwrap();
        let db = Database::from_rows(
            &q,
            [
                ("R1", vec![vec!["a1", "b1"], vec!["a1", "b2"], vec!["a2", "b1"], vec!["a3", "b3"]]),
                ("R2", vec![vec!["a1", "b1"], vec!["a1", "b2"], vec!["a2", "b1"], vec!["a3", "b4"]]),
            ],
        )
        .unwrap();
        let rep = solve_exact_head_cluster(&q, &db).unwrap();
        assert_eq!(rep.result_count, 2);
        assert_eq!(rep.witness_size, 4);
        assert!(is_witness(&q, &db, &rep.witness).unwrap());
    }

    #[test]
    fn full_acyclic_keeps_non_dangling() {
        let (q, db) = fixtures::example_instance();
        let full = q.with_head(q.attrs()).unwrap();
        let rep = solve_exact_head_cluster(&full, &db).unwrap();
        assert_eq!(rep.witness_size, 10);
    }

    #[test]
    fn full_cyclic_uses_projection() {
        let q = fixtures::triangle();
        let db = Database::from_rows(
            &q,
            [
                ("R1", vec![vec!["a", "b"], vec!["a", "x"]]),
                ("R2", vec![vec!["b", "c"]]),
                ("R3", vec![vec!["a", "c"], vec!["y", "c"]]),
            ],
        )
        .unwrap();
        let rep = solve_exact_head_cluster(&q, &db).unwrap();
        assert_eq!(rep.witness_size, 3);
    }

    #[test]
    fn empty_results_give_empty_witness() {
        let (q, db) = fixtures::example_instance();
        let cover = fixtures::q_cover();
        let rep = solve_approx_head_domination(&cover, &Database::empty_for(&cover)).unwrap();
        assert_eq!(rep.witness_size, 0);
        assert!(solve_exact_head_cluster(&q, &db).is_err());
    }

    #[test]
    fn preconditions() {
        let (q, db) = fixtures::example_instance();
        assert!(matches!(
            solve_approx_head_domination(&q, &db),
            Err(Error::PreconditionViolated(_))
        ));
        let cover = fixtures::q_cover();
        assert!(matches!(
            solve_exact_head_cluster(&cover, &Database::empty_for(&cover)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn head_cluster_query_same_output_both_ways() {
        let q = fixtures::non_full_head_cluster();
        let db = Database::from_rows(
            &q,
            [
                ("R1", vec![vec!["1", "2"], vec!["1", "3"]]),
                ("R2", vec![vec!["2", "4"], vec!["3", "4"]]),
                ("R3", vec![vec!["1", "4"]]),
                ("R4", vec![vec!["1", "x"], vec!["1", "y"]]),
            ],
        )
        .unwrap();
        let a = solve_exact_head_cluster(&q, &db).unwrap();
        let b = solve_approx_head_domination(&q, &db).unwrap();
        assert_eq!(a.witness.db, b.witness.db);
        assert_eq!(a.witness_size, 2 + 2 + 1 + 1);
    }
}
