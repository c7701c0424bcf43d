//! Strong-majority bootstrap percolation on augmented toroidal lattices.
//!
//! The crate builds the lattices `L(n,k)` and their augmentation `L*(n,k,r)`
//! by `r` admissible perfect matchings, runs the `j`-neighbour and
//! `r`-majority processes to their final state, checks the deterministic
//! growth and stable-collection properties of those processes exactly, and
//! estimates dissemination thresholds by Monte Carlo.
//!
//! Module map:
//!
//! - [`lattice`]: torus geometry, graph families, tessellations
//! - [`graph`]: the [`Graph`] trait and explicit test graphs
//! - [`matchings`]: admissible matching tuples and `L*(n,k,r)`
//! - [`engine`]: the processes, fixpoints and the k-core characterization
//! - [`growth`]: growth shapes, good vertices/cells, seeds and the growth checks
//! - [`ubiquity`]: cell components, ubiquity diagnostics, stable collections
//! - [`theory`]: critical probabilities and parameter windows
//! - [`harness`]: reproducible trials, scans and their output formats

pub mod engine;
pub mod graph;
pub mod growth;
pub mod harness;
pub mod lattice;
pub mod matchings;
pub mod theory;
pub mod ubiquity;

pub use engine::{ActivationState, FinalState, Rule};
pub use graph::{ExplicitGraph, Graph};
pub use lattice::{Cell, Lattice, Metric, Tessellation, TorusPoint};
pub use matchings::{AugmentedGraph, MatchingTuple};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("neighbourhood wraps around the torus: 2k+1 = {} > n = {n}", 2 * .k + 1)]
    WrappedNeighbourhood { n: u32, k: u32 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not regular")]
    NotRegular,
    #[error("matching construction: {0}")]
    MatchingConstruction(String),
    #[error("matching sampler did not converge after {attempts} switch attempts")]
    SamplingFailed { attempts: u64 },
    #[error("matching tuple is not admissible: {0}")]
    Inadmissible(String),
    #[error("shape overlaps itself on the torus: {0}")]
    ShapeOverlap(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
