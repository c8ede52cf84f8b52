use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::cutset::CutsetWitness;
use super::TangleError;
use crate::fairness::{exists_efk_outer, Allocation, FairnessError, OracleCaps, OracleOutcome};
use crate::graph::{subdivide_in_place, EdgeId, Multigraph, VertexId};
use crate::valuation::{frac, int, AdditiveValuation, Value, ValuationProfile};

/// A common valuation on a subdivision that realizes a gap ≥ 2 cutset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapValuation {
    pub graph: Multigraph,
    pub valuation: AdditiveValuation,
    /// Total value of each component, in witness order.
    pub component_values: Vec<Value>,
    /// Value carried by each edge of the original graph.
    pub edge_values: BTreeMap<EdgeId, Value>,
    /// Fresh vertices placed on each original edge, in order from its `u` end.
    pub fresh: BTreeMap<EdgeId, Vec<VertexId>>,
}

fn check_witness(witness: &CutsetWitness, n: usize) -> Result<(usize, usize), TangleError> {
    if !witness.is_gap_two() {
        return Err(TangleError::Precondition(format!(
            "cutset has gap {} with {} condition failures",
            witness.gap,
            witness.violations.len()
        )));
    }
    let t = witness.cardinality();
    if n < t + 1 {
        return Err(TangleError::Precondition(format!("need at least {} agents, got {n}", t + 1)));
    }
    if let Some(c) = witness.components.iter().find(|c| c.edges.is_empty()) {
        return Err(TangleError::Precondition(format!(
            "component at vertex {:?} has no edge to carry value",
            c.vertices.first()
        )));
    }
    Ok((t, witness.gap as usize))
}

/// Component totals `(t+1)/(t+k−1)` for all but the last component, which
/// gets `n − t`.
fn component_values(t: usize, k: usize, n: usize) -> Vec<Value> {
    let small = frac((t + 1) as i128, (t + k - 1) as i128);
    let mut out = vec![small; t + k - 1];
    out.push(int((n - t) as i128));
    out
}

/// Value of each original edge: a component's total split evenly over its
/// edges, zero on edges kept inside parts.
fn edge_values(g: &Multigraph, witness: &CutsetWitness, totals: &[Value]) -> BTreeMap<EdgeId, Value> {
    let mut out: BTreeMap<EdgeId, Value> = g.edges().iter().map(|e| (e.id, Value::zero())).collect();
    for (c, total) in witness.components.iter().zip(totals) {
        let share = total / int(c.edges.len() as i128);
        for e in &c.edges {
            out.insert(*e, share);
        }
    }
    out
}

fn subdivide_all(
    g: &Multigraph,
    counts: &BTreeMap<EdgeId, usize>,
) -> Result<(Multigraph, BTreeMap<EdgeId, Vec<VertexId>>), TangleError> {
    let mut h = g.clone();
    let mut fresh = BTreeMap::new();
    for (&id, &count) in counts {
        fresh.insert(id, subdivide_in_place(&mut h, id, count)?);
    }
    Ok((h, fresh))
}

/// Builds the common valuation behind a gap ≥ 2 cutset for `n` agents,
/// placing `per_edge` fresh vertices on every edge and spreading each
/// component's value evenly over the fresh vertices of its edges. Every
/// other vertex is worth 0 and the total is `n + 1`.
pub fn gap_valuation(
    g: &Multigraph,
    witness: &CutsetWitness,
    n: usize,
    per_edge: usize,
) -> Result<GapValuation, TangleError> {
    let (t, k) = check_witness(witness, n)?;
    if per_edge == 0 {
        return Err(TangleError::Precondition("need at least one fresh vertex per edge".into()));
    }
    let totals = component_values(t, k, n);
    let edge_values = edge_values(g, witness, &totals);
    let counts = g.edges().iter().map(|e| (e.id, per_edge)).collect();
    let (graph, fresh) = subdivide_all(g, &counts)?;
    let mut values = vec![Value::zero(); graph.vertex_count()];
    for (id, vs) in &fresh {
        for &v in vs {
            values[v] = edge_values[id] / int(per_edge as i128);
        }
    }
    Ok(GapValuation {
        graph,
        valuation: AdditiveValuation::new(values).expect("non-negative"),
        component_values: totals,
        edge_values,
        fresh,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verification {
    Pending,
    /// The oracle checked every contiguous allocation and none passed.
    CertifiedAbsent { allocations_checked: u128, partitions_checked: u128 },
    /// The oracle found a passing allocation, so the instance is not a
    /// counterexample.
    Refuted(Allocation),
    /// Beyond the oracle caps; only the per-vertex bound was checked.
    Unverified { reason: String },
}

impl Verification {
    pub fn label(&self) -> &'static str {
        match self {
            Verification::Pending => "pending",
            Verification::CertifiedAbsent { .. } => "certified absent",
            Verification::Refuted(_) => "refuted",
            Verification::Unverified { .. } => "unverified at desk scale",
        }
    }
}

/// A subdivision of a skeleton with a common valuation under which no
/// contiguous EF`k` outer allocation should exist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeInstance {
    pub base: Multigraph,
    pub witness: CutsetWitness,
    pub n: usize,
    pub k: usize,
    /// Lower bound on envy in the tangle, `1/(n−1)`.
    pub b: Value,
    /// `μ(e_r)` per skeleton edge.
    pub mu: BTreeMap<EdgeId, Value>,
    /// `J_r`, the fresh vertices placed on each skeleton edge.
    pub j: BTreeMap<EdgeId, usize>,
    pub graph: Multigraph,
    pub valuation: AdditiveValuation,
    pub fresh: BTreeMap<EdgeId, Vec<VertexId>>,
    pub verification: Verification,
}

impl NegativeInstance {
    pub fn profile(&self) -> ValuationProfile {
        ValuationProfile::common(self.valuation.clone(), self.n).expect("one universe")
    }

    /// Least common denominator of the vertex values.
    pub fn scale(&self) -> i128 {
        self.valuation
            .values()
            .iter()
            .fold(1i128, |acc, v| acc.lcm(v.denom()))
    }

    /// Vertex values multiplied by [`Self::scale`].
    pub fn integer_values(&self) -> Vec<i128> {
        let s = int(self.scale());
        self.valuation
            .values()
            .iter()
            .map(|v| (v * s).to_integer())
            .collect()
    }

    /// Every vertex is worth strictly less than `b/k`.
    pub fn vertex_bound_holds(&self) -> bool {
        let limit = self.b / int(self.k as i128);
        self.valuation.values().iter().all(|v| *v < limit)
    }

    /// Runs the oracle and records the outcome. Cap overruns leave the
    /// instance marked unverified.
    pub fn certify(&mut self, caps: OracleCaps) -> Result<&Verification, TangleError> {
        self.verification = match exists_efk_outer(&self.graph, &self.profile(), self.k, caps) {
            Ok(OracleOutcome::Absent {
                allocations_checked,
                partitions_checked,
                ..
            }) => Verification::CertifiedAbsent {
                allocations_checked,
                partitions_checked,
            },
            Ok(OracleOutcome::Found(a)) => Verification::Refuted(a),
            Err(FairnessError::CapExceeded { what, cap, actual }) => Verification::Unverified {
                reason: format!("{what} {actual} exceeds the oracle cap {cap}"),
            },
            Err(e) => return Err(e.into()),
        };
        Ok(&self.verification)
    }
}

/// Subdivides `skeleton` so that no `k` fresh vertices together carry `b`,
/// using the component valuation of `witness`.
pub fn negative_instance(
    skeleton: &Multigraph,
    witness: &CutsetWitness,
    n: usize,
    k: usize,
) -> Result<NegativeInstance, TangleError> {
    let (t, gap) = check_witness(witness, n)?;
    if k == 0 {
        return Err(TangleError::Precondition("k must be at least 1".into()));
    }
    if n < 2 {
        return Err(TangleError::Precondition("need at least two agents".into()));
    }
    let totals = component_values(t, gap, n);
    let mu = edge_values(skeleton, witness, &totals);
    let b = frac(1, (n - 1) as i128);
    let j: BTreeMap<EdgeId, usize> = mu
        .iter()
        .map(|(&id, m)| {
            let scaled = (m * int((k * (n - 1)) as i128)).floor().to_integer();
            let needed = scaled.to_usize().expect("non-negative") + 1;
            (id, needed.max(k + 1))
        })
        .collect();
    let (graph, fresh) = subdivide_all(skeleton, &j)?;
    let mut values = vec![Value::zero(); graph.vertex_count()];
    for (id, vs) in &fresh {
        for &v in vs {
            values[v] = mu[id] / int(j[id] as i128);
        }
    }
    Ok(NegativeInstance {
        base: skeleton.clone(),
        witness: witness.clone(),
        n,
        k,
        b,
        mu,
        j,
        graph,
        valuation: AdditiveValuation::new(values).expect("non-negative"),
        fresh,
        verification: Verification::Pending,
    })
}
