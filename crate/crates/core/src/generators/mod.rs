//! Hard-instance constructions, random instances and the line-query export.

pub mod dsf;
pub mod embed;
pub mod labelcover;
pub mod random;
pub mod random_query;
pub mod reductions;
pub mod setcover;

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::database::Database;
use crate::error::{Error, Result};
use crate::query::Query;

pub use dsf::{dsf_per_pair_paths, line_to_dsf, DsfInstance};
pub use labelcover::LabelCoverInstance;
pub use random::gen_random_db;
pub use random_query::random_query;
pub use reductions::{gen_cover_db, gen_line3_db, gen_matrix_db, gen_pyramid_db};
pub use setcover::SetCoverInstance;

pub const QUERY_FILE: &str = "query.cq";
pub const METADATA_FILE: &str = "metadata.json";

/// A generated query and database, with the optimum predicted by the
/// construction when the source optimum was computed.
#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub family: String,
    pub query: Query,
    pub db: Database,
    pub predicted_optimum: Option<usize>,
    pub parameters: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub spec: String,
    pub family: String,
    pub query: String,
    pub db_size: usize,
    pub predicted_optimum: Option<usize>,
    pub parameters: serde_json::Value,
}

impl GeneratedInstance {
    pub fn metadata(&self) -> Metadata {
        Metadata {
            spec: "1".into(),
            family: self.family.clone(),
            query: self.query.to_string(),
            db_size: self.db.size(),
            predicted_optimum: self.predicted_optimum,
            parameters: self.parameters.clone(),
        }
    }

    /// Writes `query.cq`, one CSV per relation and `metadata.json`.
    pub fn write_to(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let qpath = dir.join(QUERY_FILE);
        fs::write(&qpath, format!("{}\n", self.query)).map_err(|e| Error::io(&qpath, e))?;
        self.db.write_csv_dir(dir)?;
        let mpath = dir.join(METADATA_FILE);
        let text = serde_json::to_string_pretty(&self.metadata()).expect("metadata serializes");
        fs::write(&mpath, text + "\n").map_err(|e| Error::io(&mpath, e))
    }
}

/// Reads `metadata.json` from a generated directory, if there is one.
pub fn read_metadata(dir: &Path) -> Result<Option<Metadata>> {
    let path = dir.join(METADATA_FILE);
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    serde_json::from_str(&text)
        .map(Some)
        .map_err(|e| Error::InvalidInstance(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn write_and_read_back() {
        let sc = SetCoverInstance::numbered(2, vec![vec![0, 1]]).unwrap();
        let inst = gen_cover_db(&sc).unwrap();
        let dir = tempfile::tempdir().unwrap();
        inst.write_to(dir.path()).unwrap();
        let text = fs::read_to_string(dir.path().join(QUERY_FILE)).unwrap();
        let q = Query::parse(&text).unwrap();
        assert_eq!(q, inst.query);
        assert_eq!(Database::load(&q, dir.path()).unwrap(), inst.db);
        let meta = read_metadata(dir.path()).unwrap().unwrap();
        assert_eq!(meta.predicted_optimum, Some(3));
        assert_eq!(meta.spec, "1");
    }
}
