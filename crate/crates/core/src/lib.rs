//! Smallest witnesses for self-join-free conjunctive queries: parsing,
//! evaluation, structural classification, exact and approximate solvers, and
//! hard-instance generators.

pub mod database;
pub mod densest;
pub mod error;
pub mod eval;
pub mod fixtures;
pub mod generators;
pub mod query;
pub mod solvers;
pub mod structure;
pub mod witness;

pub use database::{Database, Relation, Tuple, Value};
pub use error::{Error, ErrorCategory, Result};
pub use eval::{evaluate, ResultSet};
pub use query::{Attribute, Query, RelationSchema};
pub use structure::{classify, Classification, Label};
pub use witness::{is_witness, Witness};
