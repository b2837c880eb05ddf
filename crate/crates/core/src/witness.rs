use serde::Serialize;

use crate::database::Database;
use crate::error::Result;
use crate::eval::evaluate;
use crate::query::Query;

/// A sub-database proposed as a witness, tagged with the algorithm that
/// produced it. Validity is checked by [`is_witness`], never assumed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub algorithm: String,
    #[serde(rename = "tuples")]
    pub db: Database,
}

impl Witness {
    pub fn new(algorithm: impl Into<String>, db: Database) -> Self {
        Witness {
            algorithm: algorithm.into(),
            db,
        }
    }

    pub fn empty(algorithm: impl Into<String>, query: &Query) -> Self {
        Witness::new(algorithm, Database::empty_for(query))
    }

    pub fn size(&self) -> usize {
        self.db.size()
    }
}

/// True iff `cand ⊆ db` reproduces exactly `Q(db)`.
///
/// A candidate holding a tuple outside `db` is an error, not a `false`.
pub fn is_witness(query: &Query, db: &Database, cand: &Witness) -> Result<bool> {
    cand.db.check_subset_of(db)?;
    cand.db.check_conforms(query)?;
    Ok(evaluate(query, &cand.db)? == evaluate(query, db)?)
}
