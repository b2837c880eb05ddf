//! Fractional edge cover number ρ*, solved exactly.
//!
//! The cover LP `min Σ w_R  s.t.  Σ_{R ∋ A} w_R ≥ 1` is solved through its
//! packing dual `max Σ y_A  s.t.  Σ_{A ∈ R} y_A ≤ 1`, whose slack basis is
//! feasible from the start. Bland's rule guarantees termination; the cover
//! weights are read off the final reduced costs.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::query::{Attribute, Query};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FractionalCover {
    #[serde(serialize_with = "super::ser_big_ratio")]
    pub value: BigRational,
    #[serde(skip)]
    pub weights: BTreeMap<String, BigRational>,
    #[serde(skip)]
    pub packing: BTreeMap<Attribute, BigRational>,
}

pub fn fractional_edge_cover(query: &Query) -> BigRational {
    fractional_edge_cover_certificate(query).value
}

pub fn fractional_edge_cover_certificate(query: &Query) -> FractionalCover {
    let attrs = query.attrs();
    let rels = query.relations();
    let (n, m) = (attrs.len(), rels.len());
    let width = n + m;
    let zero = BigRational::zero();
    let one = BigRational::one();

    let mut rows: Vec<Vec<BigRational>> = rels
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = vec![zero.clone(); width];
            for (j, a) in attrs.iter().enumerate() {
                if r.contains(a) {
                    row[j] = one.clone();
                }
            }
            row[n + i] = one.clone();
            row
        })
        .collect();
    let mut rhs = vec![one.clone(); m];
    let mut basis: Vec<usize> = (n..width).collect();
    let mut reduced: Vec<BigRational> = (0..width).map(|j| if j < n { one.clone() } else { zero.clone() }).collect();
    let mut value = zero.clone();

    while let Some(enter) = (0..width).find(|&j| reduced[j].is_positive()) {
        let leave = (0..m)
            .filter(|&i| rows[i][enter].is_positive())
            .min_by(|&a, &b| {
                let ra = &rhs[a] / &rows[a][enter];
                let rb = &rhs[b] / &rows[b][enter];
                ra.cmp(&rb).then(basis[a].cmp(&basis[b]))
            })
            .expect("every attribute occurs in some relation, so the packing LP is bounded");
        let pivot = rows[leave][enter].clone();
        for x in rows[leave].iter_mut() {
            *x = &*x / &pivot;
        }
        rhs[leave] = &rhs[leave] / &pivot;
        for i in 0..m {
            if i != leave && !rows[i][enter].is_zero() {
                let f = rows[i][enter].clone();
                let pivot_row = rows[leave].clone();
                for (x, p) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
                let d = &f * &rhs[leave];
                rhs[i] -= d;
            }
        }
        let f = reduced[enter].clone();
        for j in 0..width {
            let d = &f * &rows[leave][j];
            reduced[j] -= d;
        }
        value += &f * &rhs[leave];
        basis[leave] = enter;
    }

    let mut packing: BTreeMap<Attribute, BigRational> = attrs.iter().map(|a| (a.clone(), zero.clone())).collect();
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            packing.insert(attrs[b].clone(), rhs[i].clone());
        }
    }
    let weights = rels
        .iter()
        .enumerate()
        .map(|(i, r)| (r.name.clone(), -reduced[n + i].clone()))
        .collect();
    FractionalCover { value, weights, packing }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    /// Feasible cover and packing with equal objective certify optimality.
    fn check_certificate(q: &Query, c: &FractionalCover) {
        let total: BigRational = c.weights.values().cloned().sum();
        let packed: BigRational = c.packing.values().cloned().sum();
        assert_eq!(total, c.value);
        assert_eq!(packed, c.value);
        for w in c.weights.values().chain(c.packing.values()) {
            assert!(!w.is_negative());
        }
        for a in q.attrs() {
            let s: BigRational = q
                .relations()
                .iter()
                .filter(|r| r.contains(&a))
                .map(|r| c.weights[&r.name].clone())
                .sum();
            assert!(s >= BigRational::one(), "attribute {a} under-covered");
        }
        for r in q.relations() {
            let s: BigRational = r.attrs.iter().map(|a| c.packing[a].clone()).sum();
            assert!(s <= BigRational::one());
        }
    }

    #[test]
    fn known_values() {
        assert_eq!(fractional_edge_cover(&fixtures::triangle()), ratio(3, 2));
        assert_eq!(fractional_edge_cover(&fixtures::q_line3()), ratio(2, 1));
        assert_eq!(fractional_edge_cover(&Query::parse("Q(A) :- R(A,B)").unwrap()), ratio(1, 1));
        let line4 = Query::parse("Q(A1,A5) :- R1(A1,A2), R2(A2,A3), R3(A3,A4), R4(A4,A5)").unwrap();
        assert_eq!(fractional_edge_cover(&line4), ratio(3, 1));
        assert_eq!(fractional_edge_cover(&fixtures::q_pyramid()), ratio(2, 1));
    }

    #[test]
    fn certificates_on_fixtures() {
        for q in [
            fixtures::triangle(),
            fixtures::q_line3(),
            fixtures::q_pyramid(),
            fixtures::mixed_query(),
            fixtures::split_query(),
        ] {
            check_certificate(&q, &fractional_edge_cover_certificate(&q));
        }
    }

    proptest! {
        #[test]
        fn random_queries_have_certified_optimum(seed in 0u64..10_000) {
            let q = crate::generators::random_query::random_query(seed, 6, 7);
            check_certificate(&q, &fractional_edge_cover_certificate(&q));
        }
    }
}
