//! Compiler and verification toolkit for monotone bounded-depth arithmetic
//! circuits computing homomorphism and colorful-subgraph polynomials of a
//! fixed pattern graph.
//!
//! The pipeline: [`graph`] models the pattern graph H, [`widths`] computes
//! exact depth-bounded tree/path decompositions with certificates, [`decomp`]
//! validates decompositions and attaches pendant bags, [`synth`] compiles a
//! certificate into a circuit or ABP, [`oracle`] provides brute-force ground
//! truth, and [`analysis`] runs the parse-tree extraction, gate-support
//! census, Hom/ColSub reductions and scaling experiments.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod decomp;
pub mod graph;
pub mod oracle;
pub mod synth;
pub mod widths;

/// Errors shared across the crate.
///
/// `Format`, `InvalidInput` and `Support` map to CLI exit code 2,
/// `Capacity` to exit code 3.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("evaluation: {0}")]
    Evaluation(String),
    #[error("monomial support: {0}")]
    Support(String),
    #[error("consistency: {0}")]
    Consistency(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }
}
