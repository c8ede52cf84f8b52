//! Whole-graph procedures built on the moving knife.

use serde::{Deserialize, Serialize};

use super::discrete::{a_discrete, KnifeOutcome, KnifeState};
use super::lumpy::{lumpy_ties, median_lumpy_tie};
use super::{ensure_agents, screen_monotone, KnifeError, KnifeOptions};
use crate::fairness::{envy_report, Allocation, FairnessError};
use crate::graph::{
    bipolar_numbering, hamiltonian_path, lips_labeling, lips_stage_plan, Enumeration, LipsLabeling, LipsStagePlan,
    Multigraph, VertexId, VertexSet,
};
use crate::valuation::ValuationProfile;

/// Result of the three-stage lips procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipsRun {
    pub allocation: Allocation,
    /// Final state of each stage that ran, in order.
    pub stages: Vec<KnifeState>,
    pub labeling: LipsLabeling,
    pub plan: LipsStagePlan,
}

impl LipsRun {
    /// 1-based number of the stage that produced the allocation.
    pub fn final_stage(&self) -> usize {
        self.stages.len()
    }
}

fn certify(g: &Multigraph, a: &Allocation, p: &ValuationProfile) -> Result<(), KnifeError> {
    match envy_report(g, a, p, 1) {
        Ok(report) if report.is_efk_outer() => Ok(()),
        Ok(report) => {
            let bad = report
                .pairs
                .iter()
                .find(|e| e.witness.is_none())
                .map(|e| format!("agent {} envies agent {} beyond one outer good", e.envier + 1, e.envied + 1))
                .unwrap_or_default();
            Err(KnifeError::Certification(bad))
        }
        Err(FairnessError::NotContiguous(i)) => {
            Err(KnifeError::Certification(format!("bundle of agent {} is not connected", i + 1)))
        }
        Err(e) => Err(e.into()),
    }
}

fn position_in(order: &[VertexId], v: VertexId) -> Result<usize, KnifeError> {
    order
        .iter()
        .position(|&x| x == v)
        .map(|i| i + 1)
        .ok_or_else(|| KnifeError::Invariant {
            message: format!("knife vertex {v} is missing from the next stage"),
            state: format!("{order:?}"),
        })
}

fn concat(a: &[VertexId], b: &[VertexId]) -> Result<Enumeration, KnifeError> {
    Ok(Enumeration::new(a.iter().chain(b).copied().collect())?)
}

fn knife_vertex(state: &KnifeState) -> VertexId {
    state.order.at(state.r)
}

/// Contiguous EF1 allocation for three agents on a graph whose skeleton is
/// the lips.
pub fn lips_ef1_three(g: &Multigraph, p: &ValuationProfile, opts: KnifeOptions) -> Result<LipsRun, KnifeError> {
    ensure_agents(p, 3)?;
    if p.universe() != g.vertex_count() {
        return Err(KnifeError::Precondition("profile universe does not match the graph".into()));
    }
    let labeling = lips_labeling(g)?.ok_or(KnifeError::NotLips)?;
    let plan = lips_stage_plan(&labeling);
    if opts.verify {
        plan.verify(g).map_err(|m| KnifeError::Invariant {
            message: m,
            state: "stage plan".into(),
        })?;
    }
    let mut stages = Vec::new();
    let done = |a: Allocation, s: KnifeState, mut stages: Vec<KnifeState>| -> Result<LipsRun, KnifeError> {
        certify(g, &a, p)?;
        stages.push(s);
        Ok(LipsRun {
            allocation: a,
            stages,
            labeling: labeling.clone(),
            plan: plan.clone(),
        })
    };

    // Stage one.
    let order = concat(&plan.x1, &plan.y1)?;
    let r0 = median_lumpy_tie(&order, p)?.r;
    let stop = KnifeOptions {
        stop_at: Some(plan.x1.len()),
        ..opts
    };
    let paused = match a_discrete(&VertexSet::new(), &order, r0, p, stop)? {
        KnifeOutcome::Allocated(a, s) => return done(a, s, stages),
        KnifeOutcome::Paused(s) => s,
    };
    let v = knife_vertex(&paused);
    stages.push(paused);

    // Stage two.
    let mut endowment: VertexSet = plan.x1.iter().copied().collect();
    let order = concat(&plan.x2, &plan.y2)?;
    let r = position_in(order.as_slice(), v)?;
    let stop = KnifeOptions {
        stop_at: Some(plan.x2.len()),
        ..opts
    };
    let paused = match a_discrete(&endowment, &order, r, p, stop)? {
        KnifeOutcome::Allocated(a, s) => return done(a, s, stages),
        KnifeOutcome::Paused(s) => s,
    };
    let v = knife_vertex(&paused);
    stages.push(paused);

    // Stage three.
    endowment.extend(&plan.x2);
    let after_c1 = position_in(&plan.y2, v)? > position_in(&plan.y2, labeling.c1)?;
    let walk = if after_c1 { &plan.x3 } else { &plan.x3_alt };
    let order = Enumeration::new(walk.clone())?;
    let r = position_in(walk, v)?;
    let last = KnifeOptions { stop_at: None, ..opts };
    match a_discrete(&endowment, &order, r, p, last)? {
        KnifeOutcome::Allocated(a, s) => done(a, s, stages),
        KnifeOutcome::Paused(s) => Err(KnifeError::Invariant {
            message: "final stage paused".into(),
            state: format!("l={} r={}", s.ell, s.r),
        }),
    }
}

/// Cut and choose along a bipolar numbering. `None` when the graph has no
/// bipolar numbering.
pub fn two_agent_ef1(g: &Multigraph, p: &ValuationProfile) -> Result<Option<Allocation>, KnifeError> {
    ensure_agents(p, 2)?;
    if p.universe() != g.vertex_count() {
        return Err(KnifeError::Precondition("profile universe does not match the graph".into()));
    }
    screen_monotone(p, Default::default())?;
    let Some(order) = bipolar_numbering(g)? else {
        return Ok(None);
    };
    let ties = lumpy_ties(p.agent(0), &order);
    let &r = ties.first().ok_or_else(|| KnifeError::NonMonotone {
        agent: 0,
        detail: "no lumpy tie".into(),
    })?;
    let m = order.len();
    let left = order.segment_set(1, r - 1);
    let right = order.segment_set(r + 1, m);
    let chooser = p.agent(1);
    let (mut first, second) = if chooser.eval(&left) >= chooser.eval(&right) {
        (right, left)
    } else {
        (left, right)
    };
    first.insert(order.at(r));
    let a = Allocation::new(vec![first, second], g.vertex_count())?;
    certify(g, &a, p)?;
    Ok(Some(a))
}

/// Runs the moving knife along a Hamiltonian path. `None` when the graph has
/// no Hamiltonian path.
pub fn traceable_ef1_three(
    g: &Multigraph,
    p: &ValuationProfile,
    opts: KnifeOptions,
) -> Result<Option<(Allocation, KnifeState)>, KnifeError> {
    ensure_agents(p, 3)?;
    if p.universe() != g.vertex_count() {
        return Err(KnifeError::Precondition("profile universe does not match the graph".into()));
    }
    let Some(path) = hamiltonian_path(g)? else {
        return Ok(None);
    };
    let order = Enumeration::new(path)?;
    let r0 = median_lumpy_tie(&order, p)?.r;
    let opts = KnifeOptions { stop_at: None, ..opts };
    match a_discrete(&VertexSet::new(), &order, r0, p, opts)? {
        KnifeOutcome::Allocated(a, s) => {
            certify(g, &a, p)?;
            Ok(Some((a, s)))
        }
        KnifeOutcome::Paused(_) => unreachable!("no stop requested"),
    }
}
