//! Discrete moving-knife procedures.
//!
//! Positions in enumerations are 1-based throughout this module, so `r`
//! names the vertex `v_r` and `ℓ` counts the enumeration vertices already in
//! the left bundle.

mod discrete;
mod drivers;
mod lumpy;

use thiserror::Error;

use crate::fairness::FairnessError;
use crate::graph::GraphError;
use crate::valuation::{check_monotone, ValuationProfile};

pub use discrete::{a_discrete, Form, KnifeOutcome, KnifeState, Step, Termination, TraceLine, TraceStep};
pub use drivers::{lips_ef1_three, traceable_ef1_three, two_agent_ef1, LipsRun};
pub use lumpy::{
    is_median_lumpy_tie, lumpy_allocation, lumpy_ties, median_lumpy_tie, LumpyAnalysis, Role,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KnifeError {
    #[error("expected {expected} agents, got {actual}")]
    AgentCount { expected: usize, actual: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("valuation of agent {agent} is not monotone: {detail}")]
    NonMonotone { agent: usize, detail: String },
    #[error("invariant violated: {message}; state: {state}")]
    Invariant { message: String, state: String },
    #[error("graph is not in the lips class")]
    NotLips,
    #[error("output failed certification: {0}")]
    Certification(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fairness(#[from] FairnessError),
}

/// What to do when a sampled monotonicity check fails for an oracle
/// valuation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MonotonePolicy {
    #[default]
    Reject,
    Allow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KnifeOptions {
    /// Evaluate the proof obligations of each step and fail on violation.
    pub verify: bool,
    /// Record one trace line per state transition.
    pub trace: bool,
    /// Return a paused state when `ℓ` reaches this value without termination.
    pub stop_at: Option<usize>,
    pub monotone: MonotonePolicy,
}

impl Default for KnifeOptions {
    fn default() -> Self {
        Self {
            verify: true,
            trace: false,
            stop_at: None,
            monotone: MonotonePolicy::Reject,
        }
    }
}

impl KnifeOptions {
    pub fn fast() -> Self {
        Self {
            verify: false,
            ..Self::default()
        }
    }
}

pub(crate) fn ensure_agents(p: &ValuationProfile, expected: usize) -> Result<(), KnifeError> {
    if p.len() != expected {
        return Err(KnifeError::AgentCount {
            expected,
            actual: p.len(),
        });
    }
    Ok(())
}

pub(crate) fn screen_monotone(p: &ValuationProfile, policy: MonotonePolicy) -> Result<(), KnifeError> {
    if policy == MonotonePolicy::Allow {
        return Ok(());
    }
    for (agent, v) in p.agents().iter().enumerate() {
        if v.as_additive().is_some() {
            continue;
        }
        let report = check_monotone(v, 200, 0);
        if let Some(first) = report.violations.first() {
            return Err(KnifeError::NonMonotone {
                agent,
                detail: first.detail.clone(),
            });
        }
    }
    Ok(())
}
