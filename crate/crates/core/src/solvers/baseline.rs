use num_traits::One;

use crate::database::Database;
use crate::error::Result;
use crate::query::Query;
use crate::solvers::edge_cover::fractional_edge_cover;
use crate::solvers::single::{smallest_rows, split_row};
use crate::solvers::{RatioBound, SolveReport};
use crate::witness::Witness;

/// Union of single-result witnesses over all of `Q(D)`; works for every query.
pub fn solve_baseline_union(query: &Query, db: &Database) -> Result<SolveReport> {
    db.check_conforms(query)?;
    let rows = smallest_rows(query, db)?;
    let mut w = Witness::empty("baseline", query);
    for row in rows.values() {
        for (name, tup) in split_row(query, row) {
            w.db.insert(&name, tup)?;
        }
    }
    let rho = fractional_edge_cover(query);
    let exponent = num_rational::BigRational::one() - rho.recip();
    let mut rep = SolveReport::new(db, w, rows.len()).with_bound(RatioBound::PowerOfInput {
        n: db.size(),
        exponent,
    });
    rep.rho_star = Some(rho);
    Ok(rep)
}
