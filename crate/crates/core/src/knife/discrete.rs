//! The three-agent discrete moving-knife state machine.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::lumpy::{check_ties, is_median_lumpy_tie, role_of, split_pair, Role, View};
use super::{ensure_agents, screen_monotone, KnifeError, KnifeOptions};
use crate::fairness::{is_ef_up_to_set, Allocation};
use crate::graph::{Enumeration, VertexSet};
use crate::valuation::ValuationProfile;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Step1,
    Step2,
    Step3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceStep {
    One,
    TwoA,
    TwoB,
    TwoC,
    Three,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceStep::One => "1",
            TraceStep::TwoA => "2a",
            TraceStep::TwoB => "2b",
            TraceStep::TwoC => "2c",
            TraceStep::Three => "3",
        })
    }
}

/// Shape of the returned partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Form {
    /// Returned just after `ℓ` grew; EF up to `{v_ℓ, v_r}`.
    AfterIncrement,
    /// Returned from Step 1 or Step 2(a); EF up to `{v_{ℓ+1}, v_r}`.
    Cut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLine {
    pub step: TraceStep,
    pub ell: usize,
    pub r: usize,
    /// 0-based agent indices.
    pub shouters: Vec<usize>,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let who: Vec<String> = self.shouters.iter().map(|a| (a + 1).to_string()).collect();
        write!(f, "step={} l={} r={} shouters={{{}}}", self.step, self.ell, self.r, who.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Termination {
    pub step: TraceStep,
    pub form: Form,
    /// The two vertices whose removal clears all envy.
    pub hiding: VertexSet,
}

/// Snapshot of the machine. `left`, `middle` and `right` are `L`, `M`
/// and `R`; the vertices under the knives belong to none of them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnifeState {
    pub endowment: VertexSet,
    pub order: Enumeration,
    pub ell: usize,
    pub r: usize,
    pub step: Step,
    pub left: VertexSet,
    pub middle: VertexSet,
    pub right: VertexSet,
    pub termination: Option<Termination>,
    pub trace: Vec<TraceLine>,
}

impl KnifeState {
    /// Vertices of `I ∪ P` outside `L ∪ M ∪ R`.
    pub fn knives(&self) -> VertexSet {
        let mut out: VertexSet = self.endowment.iter().chain(self.order.as_slice()).copied().collect();
        for v in self.left.iter().chain(&self.middle).chain(&self.right) {
            out.remove(v);
        }
        out
    }

    fn dump(&self) -> String {
        format!(
            "l={} r={} m={} step={:?} last={:?}",
            self.ell,
            self.r,
            self.order.len(),
            self.step,
            self.trace.last().map(ToString::to_string)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KnifeOutcome {
    Allocated(Allocation, KnifeState),
    /// `ℓ` reached the requested stop without termination.
    Paused(KnifeState),
}

struct Machine<'a> {
    views: Vec<View<'a>>,
    profile: &'a ValuationProfile,
    opts: KnifeOptions,
    state: KnifeState,
    m: usize,
    prev: Vec<usize>,
}

impl Machine<'_> {
    fn fail(&self, message: impl Into<String>) -> KnifeError {
        KnifeError::Invariant {
            message: message.into(),
            state: self.state.dump(),
        }
    }

    fn sync_bundles(&mut self, middle_from: usize) {
        let (ell, r) = (self.state.ell, self.state.r);
        let order = &self.state.order;
        let mut left = self.state.endowment.clone();
        left.extend(order.segment(1, ell));
        self.state.left = left;
        self.state.middle = order.segment_set(middle_from, r - 1);
        self.state.right = order.segment_set(r + 1, self.m);
    }

    /// Agents weakly preferring `L` to both `P(v_from, v_{r−1})` and `R`.
    fn shouters(&self, middle_from: usize) -> Vec<usize> {
        let (ell, r) = (self.state.ell, self.state.r);
        (0..3)
            .filter(|&i| {
                let v = &self.views[i];
                let l = v.left(ell);
                l >= v.seg(middle_from, r - 1) && l >= v.seg(r + 1, self.m)
            })
            .collect()
    }

    fn log(&mut self, step: TraceStep, shouters: &[usize]) {
        if self.opts.trace {
            self.state.trace.push(TraceLine {
                step,
                ell: self.state.ell,
                r: self.state.r,
                shouters: shouters.to_vec(),
            });
        }
    }

    fn ties(&self, s: usize) -> Result<Vec<Vec<usize>>, KnifeError> {
        let ties: Vec<Vec<usize>> = self.views.iter().map(|v| v.ties(s, self.m)).collect();
        check_ties(&ties).map_err(|e| match e {
            KnifeError::NonMonotone { agent, detail } => KnifeError::NonMonotone {
                agent,
                detail: format!("{detail}; state: {}", self.state.dump()),
            },
            other => other,
        })?;
        Ok(ties)
    }

    fn median_at(&self, s: usize) -> Result<bool, KnifeError> {
        let r = self.state.r;
        if r < s || s > self.m {
            return Ok(false);
        }
        Ok(is_median_lumpy_tie(&self.ties(s)?, r))
    }

    /// Bundles `L`, `P(v_{ℓ+1}, v_{r−1})`, `P(v_r, v_m)` after agent `c`
    /// picks one of the last two, ties going to the former.
    fn cut(&mut self, s_left: usize, s: usize, step: TraceStep) -> Result<KnifeOutcome, KnifeError> {
        let (ell, r, m) = (self.state.ell, self.state.r, self.m);
        let c = 3 - s_left - s;
        let view = &self.views[c];
        let former = (ell + 1, r - 1);
        let latter = (r, m);
        let (for_c, for_s) = if view.seg(former.0, former.1) >= view.seg(latter.0, latter.1) {
            (former, latter)
        } else {
            (latter, former)
        };
        let mut bundles = vec![VertexSet::new(); 3];
        bundles[s_left] = self.state.left.clone();
        bundles[c] = self.state.order.segment_set(for_c.0, for_c.1);
        bundles[s] = self.state.order.segment_set(for_s.0, for_s.1);
        let hiding = VertexSet::from([self.state.order.at(ell + 1), self.state.order.at(r)]);
        self.finish(bundles, step, Form::Cut, hiding)
    }

    fn finish(
        &mut self,
        bundles: Vec<VertexSet>,
        step: TraceStep,
        form: Form,
        hiding: VertexSet,
    ) -> Result<KnifeOutcome, KnifeError> {
        let allocation = Allocation::new(bundles, self.profile.universe())?;
        if self.opts.verify && !is_ef_up_to_set(&allocation, self.profile, &hiding)? {
            return Err(self.fail(format!("output is not EF up to the hiding pair ({form:?})")));
        }
        self.state.termination = Some(Termination { step, form, hiding });
        Ok(KnifeOutcome::Allocated(allocation, self.state.clone()))
    }

    fn step_one(&mut self) -> Result<Option<KnifeOutcome>, KnifeError> {
        let (ell, r, m) = (self.state.ell, self.state.r, self.m);
        if ell >= m || r <= ell {
            return Err(self.fail("left bundle reached the knife"));
        }
        self.state.step = Step::Step1;
        self.sync_bundles(ell + 2);
        let shouters = self.shouters(ell + 2);
        self.log(TraceStep::One, &shouters);
        if shouters.len() < 2 {
            self.prev = shouters;
            return Ok(None);
        }
        let ties = self.ties(ell + 1)?;
        let s = shouters
            .iter()
            .copied()
            .find(|&i| role_of(&ties[i], r) == Some(Role::Middle))
            .ok_or_else(|| self.fail("two shouters but no middle shouter"))?;
        // At ℓ = 0 no Step 3 has run, so only the weak precondition holds.
        if self.opts.verify && ell > 0 {
            let v = &self.views[s];
            let l = v.left(ell);
            let with_next = v.seg(ell + 1, r - 1);
            let with_r = v.seg(r, m);
            let ok = with_next > l && l >= v.seg(ell + 2, r - 1) && with_r >= with_next && with_next > v.seg(r + 1, m);
            if !ok {
                return Err(self.fail(format!("middle shouter {s} fails the Step 1 inequalities")));
            }
        }
        let s_left = shouters.iter().copied().find(|&i| i != s).expect("two shouters");
        self.cut(s_left, s, TraceStep::One).map(Some)
    }

    fn step_two(&mut self) -> Result<Option<KnifeOutcome>, KnifeError> {
        self.state.step = Step::Step2;
        loop {
            let ell = self.state.ell;
            if !self.median_at(ell + 2)? {
                if self.state.r + 1 > self.m {
                    return Err(self.fail("knife ran past the last vertex"));
                }
                self.state.r += 1;
            }
            let r = self.state.r;
            self.sync_bundles(ell + 2);
            let shouters = self.shouters(ell + 2);
            if shouters.len() >= 2 {
                self.log(TraceStep::TwoA, &shouters);
                let fresh: Vec<usize> = shouters.iter().copied().filter(|i| !self.prev.contains(i)).collect();
                let &s = fresh.first().ok_or_else(|| self.fail("two shouters but none is new"))?;
                if self.opts.verify {
                    for &i in &fresh {
                        let v = &self.views[i];
                        let l = v.left(ell);
                        if !(v.seg(r, self.m) > l && l >= v.seg(ell + 2, r - 1)) {
                            return Err(self.fail(format!("new shouter {i} fails the Step 2(a) inequalities")));
                        }
                    }
                }
                let s_left = shouters
                    .iter()
                    .copied()
                    .find(|&i| i != s && self.prev.contains(&i))
                    .or_else(|| shouters.iter().copied().find(|&i| i != s))
                    .expect("two shouters");
                return self.cut(s_left, s, TraceStep::TwoA).map(Some);
            }
            let median = self.median_at(ell + 2)?;
            self.log(if median { TraceStep::TwoB } else { TraceStep::TwoC }, &shouters);
            self.prev = shouters;
            if median {
                return Ok(None);
            }
        }
    }

    fn step_three(&mut self) -> Result<Option<KnifeOutcome>, KnifeError> {
        self.state.step = Step::Step3;
        self.state.ell += 1;
        let (ell, r, m) = (self.state.ell, self.state.r, self.m);
        self.sync_bundles(ell + 1);
        let ties = self.ties(ell + 1)?;
        if self.opts.verify && !is_median_lumpy_tie(&ties, r) {
            return Err(self.fail("v_r is not a median lumpy tie after the increment"));
        }
        let shouters = self.shouters(ell + 1);
        self.log(TraceStep::Three, &shouters);
        if shouters.is_empty() {
            self.prev = shouters;
            return Ok(None);
        }
        let s_left = shouters
            .iter()
            .copied()
            .find(|i| self.prev.contains(i))
            .unwrap_or(shouters[0]);
        let pair: Vec<usize> = (0..3).filter(|&i| i != s_left).collect();
        let split = split_pair(&self.views, [pair[0], pair[1]], r, ell + 1, m, &ties)?;
        let mut bundles = vec![VertexSet::new(); 3];
        bundles[s_left] = self.state.left.clone();
        for (agent, (s, t)) in pair.iter().zip(split) {
            bundles[*agent] = self.state.order.segment_set(s, t);
        }
        let hiding = VertexSet::from([self.state.order.at(ell), self.state.order.at(r)]);
        self.finish(bundles, TraceStep::Three, Form::AfterIncrement, hiding).map(Some)
    }
}

/// Runs the moving-knife state machine for three agents on endowment `I`
/// and enumeration `P`, starting with the knife at `v_{r0}`. The endowment
/// and the enumeration must together cover the profile's universe.
pub fn a_discrete(
    endowment: &VertexSet,
    order: &Enumeration,
    r0: usize,
    profile: &ValuationProfile,
    opts: KnifeOptions,
) -> Result<KnifeOutcome, KnifeError> {
    ensure_agents(profile, 3)?;
    screen_monotone(profile, opts.monotone)?;
    let m = order.len();
    if m == 0 || r0 == 0 || r0 > m {
        return Err(KnifeError::Precondition(format!("knife position {r0} outside 1..={m}")));
    }
    if order.as_slice().iter().any(|v| endowment.contains(v))
        || endowment.len() + m != profile.universe()
        || order.as_slice().iter().chain(endowment).any(|&v| v >= profile.universe())
    {
        return Err(KnifeError::Precondition(
            "endowment and enumeration must partition the universe".into(),
        ));
    }
    let views = View::views(profile, order, endowment);
    let ties: Vec<Vec<usize>> = views.iter().map(|v| v.ties(1, m)).collect();
    check_ties(&ties)?;
    if !is_median_lumpy_tie(&ties, r0) {
        return Err(KnifeError::Precondition(format!("{r0} is not a median lumpy tie")));
    }
    for (i, v) in views.iter().enumerate() {
        let own = v.endowment_value();
        if own > v.seg(1, r0 - 1) && own > v.seg(r0 + 1, m) {
            return Err(KnifeError::Precondition(format!(
                "agent {} strictly prefers the endowment to both sides",
                i + 1
            )));
        }
    }

    let mut machine = Machine {
        views,
        profile,
        opts,
        state: KnifeState {
            endowment: endowment.clone(),
            order: order.clone(),
            ell: 0,
            r: r0,
            step: Step::Step1,
            left: VertexSet::new(),
            middle: VertexSet::new(),
            right: VertexSet::new(),
            termination: None,
            trace: Vec::new(),
        },
        m,
        prev: Vec::new(),
    };
    loop {
        if Some(machine.state.ell) == opts.stop_at {
            machine.sync_bundles(machine.state.ell + 1);
            return Ok(KnifeOutcome::Paused(machine.state));
        }
        if let Some(out) = machine.step_one()? {
            return Ok(out);
        }
        if let Some(out) = machine.step_two()? {
            return Ok(out);
        }
        if let Some(out) = machine.step_three()? {
            return Ok(out);
        }
    }
}
