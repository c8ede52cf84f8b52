//! Allocations, contiguity, and envy checks.

mod oracle;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Multigraph, VertexId, VertexSet};
use crate::valuation::{Value, ValuationProfile};

pub use oracle::{
    enumerate_contiguous_allocations, exists_efk_outer, for_each_contiguous_allocation, OracleCaps,
    OracleOutcome,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FairnessError {
    #[error("bundles do not partition the {0} vertices")]
    NotPartition(usize),
    #[error("bundle of agent {0} is not contiguous")]
    NotContiguous(usize),
    #[error("allocation has {bundles} bundles but the profile has {agents} agents")]
    AgentMismatch { bundles: usize, agents: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{what} is {actual}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        actual: usize,
    },
}

/// An ordered partition of the vertex set into one bundle per agent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Allocation {
    bundles: Vec<VertexSet>,
}

impl Allocation {
    /// Checks that `bundles` partition `0..universe`.
    pub fn new(bundles: Vec<VertexSet>, universe: usize) -> Result<Self, FairnessError> {
        let mut seen = vec![false; universe];
        for b in &bundles {
            for &v in b {
                if v >= universe || std::mem::replace(&mut seen[v], true) {
                    return Err(FairnessError::NotPartition(universe));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(FairnessError::NotPartition(universe));
        }
        Ok(Self { bundles })
    }

    pub fn bundles(&self) -> &[VertexSet] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> &VertexSet {
        &self.bundles[agent]
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn owner(&self, v: VertexId) -> Option<usize> {
        self.bundles.iter().position(|b| b.contains(&v))
    }

    pub fn has_empty_bundle(&self) -> bool {
        self.bundles.iter().any(VertexSet::is_empty)
    }
}

pub fn is_contiguous(g: &Multigraph, set: &VertexSet) -> bool {
    g.is_connected_subset(set)
}

fn check_agents(a: &Allocation, p: &ValuationProfile) -> Result<(), FairnessError> {
    if a.agents() != p.len() {
        return Err(FairnessError::AgentMismatch {
            bundles: a.agents(),
            agents: p.len(),
        });
    }
    Ok(())
}

/// Every agent weakly prefers their own bundle to every other bundle.
pub fn is_ef(a: &Allocation, p: &ValuationProfile) -> Result<bool, FairnessError> {
    is_ef_up_to_set(a, p, &VertexSet::new())
}

/// Every agent weakly prefers their bundle to any other bundle with `hidden`
/// removed.
pub fn is_ef_up_to_set(
    a: &Allocation,
    p: &ValuationProfile,
    hidden: &VertexSet,
) -> Result<bool, FairnessError> {
    check_agents(a, p)?;
    for i in 0..a.agents() {
        let own = p.agent(i).eval(a.bundle(i));
        for j in (0..a.agents()).filter(|&j| j != i) {
            let other: VertexSet = a.bundle(j).difference(hidden).copied().collect();
            if own < p.agent(i).eval(&other) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairEnvy {
    pub envier: usize,
    pub envied: usize,
    /// `ν_i(A_j) − ν_i(A_i)`; positive means envy.
    pub amount: Value,
    /// Smallest removal set that clears the envy while keeping `A_j`
    /// contiguous, if one of size at most `k` exists.
    pub witness: Option<VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvyReport {
    pub k: usize,
    pub pairs: Vec<PairEnvy>,
}

impl EnvyReport {
    pub fn is_efk_outer(&self) -> bool {
        self.pairs.iter().all(|p| p.witness.is_some())
    }

    pub fn pair(&self, i: usize, j: usize) -> &PairEnvy {
        self.pairs
            .iter()
            .find(|p| p.envier == i && p.envied == j)
            .expect("pair present")
    }
}

/// Subsets of `items` of size exactly `size`, in lexicographic order, until
/// `f` returns true.
pub(crate) fn any_subset_of_size(items: &[VertexId], size: usize, f: &mut impl FnMut(&[VertexId]) -> bool) -> bool {
    fn go(items: &[VertexId], start: usize, size: usize, acc: &mut Vec<VertexId>, f: &mut impl FnMut(&[VertexId]) -> bool) -> bool {
        if acc.len() == size {
            return f(acc);
        }
        let need = size - acc.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            acc.push(items[i]);
            if go(items, i + 1, size, acc, f) {
                return true;
            }
            acc.pop();
        }
        false
    }
    go(items, 0, size, &mut Vec::with_capacity(size), f)
}

/// Per-pair envy and minimal `k`-outer witnesses. Fails when a bundle is not
/// contiguous.
pub fn envy_report(
    g: &Multigraph,
    a: &Allocation,
    p: &ValuationProfile,
    k: usize,
) -> Result<EnvyReport, FairnessError> {
    check_agents(a, p)?;
    if let Some(i) = (0..a.agents()).find(|&i| !is_contiguous(g, a.bundle(i))) {
        return Err(FairnessError::NotContiguous(i));
    }
    let mut pairs = Vec::new();
    for i in 0..a.agents() {
        let own = p.agent(i).eval(a.bundle(i));
        for j in 0..a.agents() {
            let target = a.bundle(j);
            let theirs = p.agent(i).eval(target);
            let amount = theirs - own;
            let witness = if theirs <= own {
                Some(VertexSet::new())
            } else {
                let items: Vec<VertexId> = target.iter().copied().collect();
                let mut found = None;
                for size in 1..=k.min(items.len()) {
                    let hit = any_subset_of_size(&items, size, &mut |s| {
                        let rest: VertexSet = target.iter().copied().filter(|v| !s.contains(v)).collect();
                        if is_contiguous(g, &rest) && p.agent(i).eval(&rest) <= own {
                            found = Some(s.iter().copied().collect());
                            true
                        } else {
                            false
                        }
                    });
                    if hit {
                        break;
                    }
                }
                found
            };
            pairs.push(PairEnvy {
                envier: i,
                envied: j,
                amount,
                witness,
            });
        }
    }
    Ok(EnvyReport { k, pairs })
}

/// Envy-free up to `k` outer goods.
pub fn is_efk_outer(
    g: &Multigraph,
    a: &Allocation,
    p: &ValuationProfile,
    k: usize,
) -> Result<bool, FairnessError> {
    Ok(envy_report(g, a, p, k)?.is_efk_outer())
}
