use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse grouping used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed query text, data files or generator parameters.
    Input,
    /// An algorithm was asked to run on a query outside its class.
    Precondition,
    /// A size cap or search budget was hit.
    ResourceCap,
    /// A broken internal invariant.
    Internal,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("relation `{0}` occurs more than once (self-joins are not supported)")]
    SelfJoin(String),
    #[error("head attribute `{0}` does not occur in any body atom")]
    UnboundHeadAttribute(String),
    #[error("attribute `{attribute}` is repeated in atom `{relation}`")]
    DuplicateAttributeInAtom { relation: String, attribute: String },
    #[error("no data file for relation `{0}`")]
    MissingRelationFile(String),
    #[error("header of `{relation}` is {found:?}, expected the attributes {expected:?}")]
    HeaderMismatch {
        relation: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("{}:{line}: row has the wrong number of fields", file.display())]
    RaggedRow { file: PathBuf, line: u64 },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {message}", path.display())]
    Csv { path: PathBuf, message: String },
    #[error("database does not match the query: {0}")]
    SchemaMismatch(String),
    #[error("candidate tuple {tuple:?} of `{relation}` is not in the database")]
    NotASubDatabase { relation: String, tuple: Vec<String> },
    #[error("{0:?} is not a query result")]
    ResultNotFound(Vec<String>),
    #[error("precondition violated: query lacks the {0} property")]
    PreconditionViolated(&'static str),
    #[error("instance has {size} tuples, above the cap of {cap}")]
    InstanceTooLarge { size: usize, cap: usize },
    #[error("no witness with at most {budget} tuples exists")]
    BudgetExhausted { budget: usize },
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("density instance has no edges")]
    EmptyEdgeSet,
    #[error("the family does not cover the universe")]
    UncoverableUniverse,
    #[error("alphabet of size {alphabet} must exceed the side size {n}")]
    AlphabetTooSmall { alphabet: usize, n: usize },
    #[error("query is not a line query: {0}")]
    NotALineQuery(String),
    #[error("demand ({source_node}, {target}) is unreachable")]
    UnreachableDemand { source_node: String, target: String },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            Syntax { .. }
            | SelfJoin(_)
            | UnboundHeadAttribute(_)
            | DuplicateAttributeInAtom { .. }
            | MissingRelationFile(_)
            | HeaderMismatch { .. }
            | RaggedRow { .. }
            | Io { .. }
            | Csv { .. }
            | SchemaMismatch(_)
            | NotASubDatabase { .. }
            | ResultNotFound(_)
            | UncoverableUniverse
            | AlphabetTooSmall { .. }
            | InvalidInstance(_) => ErrorCategory::Input,
            PreconditionViolated(_) | NotALineQuery(_) | UnreachableDemand { .. } | EmptyEdgeSet => {
                ErrorCategory::Precondition
            }
            InstanceTooLarge { .. } | BudgetExhausted { .. } => ErrorCategory::ResourceCap,
            InternalInconsistency(_) => ErrorCategory::Internal,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
