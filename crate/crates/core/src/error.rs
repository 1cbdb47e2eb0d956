use thiserror::Error;

use crate::tournament::Vertex;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid vertex {vertex} for a tournament on {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },

    #[error("orientation of the pair ({0}, {0}) is undefined")]
    SelfLoop(Vertex),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid ordering: {0}")]
    InvalidOrdering(String),

    #[error("operation requires explicit storage; materialize the implicit tournament first")]
    UnsupportedStorage,

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{what} limited to n <= {cap}, got n = {n}")]
    Capacity { what: &'static str, n: usize, cap: usize },

    #[error("rotation at position {position} needs edge {from} -> {to}")]
    RotationPrecondition { position: usize, from: Vertex, to: Vertex },

    #[error("ordering is not locally optimal: {0}")]
    NotLocallyOptimal(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("no {k}-subset of A has {threshold} common outneighbours in B")]
    NotFound { k: usize, threshold: usize },

    #[error("greedy transitive extraction found {found} vertices, {needed} needed")]
    InsufficientTransitive { found: usize, needed: usize },

    #[error("embedding step {step} failed: {source}")]
    StepFailed {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("internal contract violated: {0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
