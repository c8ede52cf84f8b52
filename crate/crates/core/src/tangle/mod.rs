//! Tangle analytics on skeleton multigraphs.
//!
//! A multigraph stands for the tangle obtained by gluing one copy of `[0,1]`
//! per edge. Removing a vertex set leaves open edges behind, so an edge whose
//! endpoints are both removed still counts as a component.

mod cutset;
mod degree;
mod generalized;
pub mod named;
mod negative;

use thiserror::Error;

use crate::fairness::FairnessError;
use crate::graph::GraphError;

pub use cutset::{gap, gap_threshold, gap_threshold_exhaustive, Component, CutsetPart, CutsetWitness, Threshold};
pub use degree::{classify_stringable, DegreeCase, DegreeSequence, Stringability, StringableKind};
pub use generalized::{generalized_gap_threshold, GeneralizedOptions};
pub use negative::{gap_valuation, negative_instance, GapValuation, NegativeInstance, Verification};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TangleError {
    #[error("a single point is not a tangle")]
    Trivial,
    #[error("degree sequence {0} has an odd degree sum (parity blocked)")]
    ParityBlocked(String),
    #[error("degree sequence {0} cannot belong to a connected tangle")]
    Disconnected(String),
    #[error("invalid cutset: {0}")]
    InvalidCutset(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{what} is {actual}, above the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fairness(#[from] FairnessError),
}
