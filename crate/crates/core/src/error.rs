use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree sequence is not a first-passage path (violation at index {index})")]
    NotAFirstPassagePath { index: usize },
    #[error("the root has no trunk")]
    RootHasNoTrunk,
    #[error("tree exceeds the vertex cap of {cap}")]
    TreeTooLarge { cap: u64 },
    #[error("no tree of size {n} is feasible for this law")]
    InfeasibleSize { n: u64 },
    #[error("gave up after {attempts} attempts")]
    BudgetExhausted { attempts: u64 },
    #[error("n = {n} is too large to enumerate (max {max})")]
    TooLargeToEnumerate { n: u64, max: u64 },
    #[error("value cap too small: truncation bound {bound:e}")]
    CapTooSmall { bound: f64 },
    #[error("tail table for P(zeta >= j) is missing")]
    TailTableMissing,
    #[error("law is not critical (mean {mean})")]
    NotCritical { mean: f64 },
    #[error("metric space too large: {size} points (max {max})")]
    TooLarge { size: usize, max: usize },
    #[error("no vertex at height {height}")]
    NoVertexAtHeight { height: u64 },
    #[error("invalid offspring law: {0}")]
    InvalidLaw(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
