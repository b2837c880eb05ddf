//! Named example queries and the worked example database used throughout the
//! test suites.

use crate::database::{tuple, Database};
use crate::query::Query;
use crate::witness::Witness;

fn q(text: &str) -> Query {
    Query::parse(text).expect("fixture query parses")
}

/// `Q(A,C,F) :- R1(A,B), R2(B,C), R3(C,F), R4(C,H)`.
pub fn example_query() -> Query {
    q("Q(A,C,F) :- R1(A,B), R2(B,C), R3(C,F), R4(C,H)")
}

/// The worked example: four binary relations, 14 tuples, three results.
pub fn example_instance() -> (Query, Database) {
    let query = example_query();
    let db = Database::from_rows(
        &query,
        [
            ("R1", vec![vec!["a1", "b1"], vec!["a2", "b2"], vec!["a3", "b2"]]),
            (
                "R2",
                vec![vec!["b1", "c1"], vec!["b2", "c3"], vec!["b3", "c2"], vec!["b3", "c3"]],
            ),
            ("R3", vec![vec!["c1", "f1"], vec!["c2", "f3"], vec!["c3", "f3"]]),
            (
                "R4",
                vec![vec!["c1", "h1"], vec!["c2", "h1"], vec!["c3", "h1"], vec!["c3", "h2"]],
            ),
        ],
    )
    .expect("fixture rows conform");
    (query, db)
}

/// The nine-tuple smallest witness of the worked example.
pub fn example_optimal_witness(query: &Query) -> Witness {
    let db = Database::from_rows(
        query,
        [
            ("R1", vec![vec!["a1", "b1"], vec!["a2", "b2"], vec!["a3", "b2"]]),
            ("R2", vec![vec!["b1", "c1"], vec!["b2", "c3"]]),
            ("R3", vec![vec!["c1", "f1"], vec!["c3", "f3"]]),
            ("R4", vec![vec!["c1", "h1"], vec!["c3", "h2"]]),
        ],
    )
    .expect("fixture rows conform");
    Witness::new("reference", db)
}

/// The single-result witness of `(a1, c1, f1)`.
pub fn example_single_result_witness(query: &Query) -> Witness {
    let mut db = Database::empty_for(query);
    for (r, t) in [("R1", ["a1", "b1"]), ("R2", ["b1", "c1"]), ("R3", ["c1", "f1"]), ("R4", ["c1", "h1"])] {
        db.insert(r, tuple(t)).expect("conforms");
    }
    Witness::new("reference", db)
}

/// `Q(A) :- R1(A,B), R2(B)`.
pub fn q_cover() -> Query {
    q("Q(A) :- R1(A,B), R2(B)")
}

/// `Q(A,C) :- R1(A,B), R2(B,C)`.
pub fn q_matrix() -> Query {
    q("Q(A,C) :- R1(A,B), R2(B,C)")
}

pub fn q_pyramid() -> Query {
    q("Q(A,B,C) :- R1(A,B), R2(A,C), R3(B,C), R4(A,F), R5(B,F), R6(C,F)")
}

pub fn q_line3() -> Query {
    q("Q(A1,A4) :- R1(A1,A2), R2(A2,A3), R3(A3,A4)")
}

pub fn triangle() -> Query {
    q("Q(A,B,C) :- R1(A,B), R2(B,C), R3(A,C)")
}

/// A nine-relation free-connex query with head `{A1,A2,A3,A7}` whose
/// existential components are `{R3,R9}`, `{R4,R5,R6}`, `{R7,R8}` with
/// dominants `R3`, `R4`, `R7`; `R1`, `R2` hold output attributes only.
pub fn mixed_query() -> Query {
    q("Q(A1,A2,A3,A7) :- R1(A1,A2), R2(A2,A3), R3(A1,A2,B1), R4(A2,A3,B3), R5(A3,B3,B4), \
       R6(B4,B5), R7(A3,A7,B6), R8(B6,B7), R9(B1,B2)")
}

/// The eight-relation query with three connected subqueries.
pub fn split_query() -> Query {
    q("Q(A1,A2,A3,A4,A5) :- R1(A1,B1), R2(B1,B2), R3(A2,B2,B3), R4(A2,A3,B4), R5(A1,A2), \
       R6(A4,B5), R7(B5,A5), R8(B6,B7)")
}

pub fn split_part1() -> Query {
    q("Q1(A1,A2,A3) :- R1(A1,B1), R2(B1,B2), R3(A2,B2,B3), R4(A2,A3,B4), R5(A1,A2)")
}

pub fn split_part2() -> Query {
    q("Q2(A4,A5) :- R6(A4,B5), R7(B5,A5)")
}

pub fn split_part3() -> Query {
    q("Q3() :- R8(B6,B7)")
}

/// `Q(A1,A2,A3) :- R1(A1,A2), R2(A2,A3), R3(A1,A3), R4(A1,B1)`: non-full yet
/// exactly solvable.
pub fn non_full_head_cluster() -> Query {
    q("Q(A1,A2,A3) :- R1(A1,A2), R2(A2,A3), R3(A1,A3), R4(A1,B1)")
}
