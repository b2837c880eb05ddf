//! Witness computation: the single-result primitive, the component-wise
//! algorithm for head-domination queries, greedy for one non-output
//! attribute, the union baseline and a brute-force oracle.

pub mod algorithm1;
pub mod baseline;
pub mod dangling;
pub mod edge_cover;
pub mod greedy;
pub mod oracle;
pub mod single;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::database::Database;
use crate::witness::Witness;

pub use algorithm1::{solve_approx_head_domination, solve_exact_head_cluster};
pub use baseline::solve_baseline_union;
pub use dangling::remove_dangling;
pub use edge_cover::{fractional_edge_cover, fractional_edge_cover_certificate, FractionalCover};
pub use greedy::solve_greedy_single_nonoutput;
pub use oracle::{brute_force_swp, solve_oracle, OracleConfig, DEFAULT_ORACLE_CAP};
pub use single::witness_for_result;

pub(crate) fn ser_big_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_big_ratio<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => ser_big_ratio(r, s),
        None => s.serialize_none(),
    }
}

/// Guaranteed approximation factor of a solver run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RatioBound {
    /// A fixed factor.
    Constant { factor: u64 },
    /// `n^exponent`.
    PowerOfInput {
        n: usize,
        #[serde(serialize_with = "ser_big_ratio")]
        exponent: BigRational,
    },
    /// `1 + ln max(1, elements)`.
    Harmonic { elements: usize },
}

impl RatioBound {
    pub fn value(&self) -> f64 {
        match self {
            RatioBound::Constant { factor } => *factor as f64,
            RatioBound::PowerOfInput { n, exponent } => {
                (*n as f64).powf(exponent.to_f64().unwrap_or(1.0))
            }
            RatioBound::Harmonic { elements } => 1.0 + (*elements.max(&1) as f64).ln(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub witness_size: usize,
    pub db_size: usize,
    pub result_count: usize,
    pub claimed_ratio_bound: Option<RatioBound>,
    #[serde(serialize_with = "ser_opt_big_ratio")]
    pub rho_star: Option<BigRational>,
    pub witness: Witness,
}

impl SolveReport {
    pub(crate) fn new(db: &Database, witness: Witness, result_count: usize) -> Self {
        SolveReport {
            algorithm: witness.algorithm.clone(),
            witness_size: witness.size(),
            db_size: db.size(),
            result_count,
            claimed_ratio_bound: None,
            rho_star: None,
            witness,
        }
    }

    pub(crate) fn with_bound(mut self, bound: RatioBound) -> Self {
        self.claimed_ratio_bound = Some(bound);
        self
    }
}
