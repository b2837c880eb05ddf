use std::time::Duration;

use serde::Serialize;

use witness_lab::generators::Metadata;
use witness_lab::solvers::SolveReport;
use witness_lab::{Classification, Query};

/// Witness size against the input size and the output size.
#[derive(Debug, Serialize)]
pub struct Comparison {
    pub db_size: usize,
    pub result_count: usize,
    pub witness_size: usize,
    pub witness_over_db: Option<f64>,
    pub witness_over_results: Option<f64>,
}

/// Present when the data directory was produced by `generate` with a known
/// optimum.
#[derive(Debug, Serialize)]
pub struct Prediction {
    pub family: String,
    pub predicted_optimum: usize,
    pub ratio: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub spec: &'static str,
    pub query: String,
    pub classification: Classification,
    pub algorithm: String,
    pub timing_ms: f64,
    pub comparison: Comparison,
    pub prediction: Option<Prediction>,
    pub report: SolveReport,
}

fn ratio(a: usize, b: usize) -> Option<f64> {
    (b > 0).then(|| a as f64 / b as f64)
}

impl RunReport {
    pub fn new(
        query: &Query,
        classification: Classification,
        report: SolveReport,
        elapsed: Duration,
        metadata: Option<&Metadata>,
    ) -> Self {
        let comparison = Comparison {
            db_size: report.db_size,
            result_count: report.result_count,
            witness_size: report.witness_size,
            witness_over_db: ratio(report.witness_size, report.db_size),
            witness_over_results: ratio(report.witness_size, report.result_count),
        };
        let prediction = metadata.and_then(|m| {
            m.predicted_optimum.map(|p| Prediction {
                family: m.family.clone(),
                predicted_optimum: p,
                ratio: ratio(report.witness_size, p),
            })
        });
        RunReport {
            spec: "1",
            query: query.to_string(),
            classification,
            algorithm: report.algorithm.clone(),
            timing_ms: elapsed.as_secs_f64() * 1000.0,
            comparison,
            prediction,
            report,
        }
    }
}
