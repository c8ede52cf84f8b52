//! Exact valuations over vertex sets.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Enumeration, VertexId, VertexSet};

/// Exact rational value. Signed so that faulty oracles can be reported.
pub type Value = Ratio<i128>;

pub fn int(v: i128) -> Value {
    Value::from_integer(v)
}

pub fn frac(n: i128, d: i128) -> Value {
    Value::new(n, d)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValuationError {
    #[error("vertex {vertex} outside a universe of {universe}")]
    OutsideUniverse { vertex: VertexId, universe: usize },
    #[error("negative value {0} for vertex {1}")]
    Negative(String, VertexId),
    #[error("cannot parse value {0:?}")]
    Parse(String),
    #[error("profile needs at least one agent")]
    NoAgents,
    #[error("agents disagree on the universe size")]
    UniverseMismatch,
}

/// Parses an integer, an exact decimal such as `2.375`, or a ratio `a/b`.
pub fn parse_value(text: &str) -> Result<Value, ValuationError> {
    let err = || ValuationError::Parse(text.to_string());
    let t = text.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: i128 = n.trim().parse().map_err(|_| err())?;
        let d: i128 = d.trim().parse().map_err(|_| err())?;
        if d == 0 {
            return Err(err());
        }
        return Ok(Value::new(n, d));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    let (whole, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if whole.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    let digits = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits(whole) || !digits(frac_part) || frac_part.len() > 30 {
        return Err(err());
    }
    let w: i128 = if whole.is_empty() { 0 } else { whole.parse().map_err(|_| err())? };
    let scale = 10i128.checked_pow(frac_part.len() as u32).ok_or_else(err)?;
    let f: i128 = if frac_part.is_empty() { 0 } else { frac_part.parse().map_err(|_| err())? };
    let num = w.checked_mul(scale).and_then(|x| x.checked_add(f)).ok_or_else(err)?;
    let v = Value::new(num, scale);
    Ok(if neg { -v } else { v })
}

/// Additive valuation: one non-negative value per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveValuation {
    values: Vec<Value>,
}

impl AdditiveValuation {
    pub fn new(values: Vec<Value>) -> Result<Self, ValuationError> {
        if let Some((v, x)) = values.iter().enumerate().find(|(_, x)| x.is_negative()) {
            return Err(ValuationError::Negative(x.to_string(), v));
        }
        Ok(Self { values })
    }

    pub fn from_integers(values: &[i128]) -> Result<Self, ValuationError> {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(universe: usize) -> Self {
        Self {
            values: vec![Value::zero(); universe],
        }
    }

    pub fn universe(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn of(&self, v: VertexId) -> Value {
        self.values[v]
    }

    pub fn sum<'a>(&self, vertices: impl IntoIterator<Item = &'a VertexId>) -> Value {
        vertices.into_iter().map(|&v| self.values[v]).sum()
    }

    pub fn total(&self) -> Value {
        self.values.iter().sum()
    }
}

type SetFn = dyn Fn(&VertexSet) -> Value + Send + Sync;

/// A set function given by a closure.
#[derive(Clone)]
pub struct ValuationOracle {
    universe: usize,
    evaluator: Arc<SetFn>,
    declared_monotone: bool,
}

impl ValuationOracle {
    pub fn new(
        universe: usize,
        declared_monotone: bool,
        evaluator: impl Fn(&VertexSet) -> Value + Send + Sync + 'static,
    ) -> Self {
        Self {
            universe,
            evaluator: Arc::new(evaluator),
            declared_monotone,
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn declared_monotone(&self) -> bool {
        self.declared_monotone
    }
}

impl fmt::Debug for ValuationOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ValuationOracle")
            .field("universe", &self.universe)
            .field("declared_monotone", &self.declared_monotone)
            .finish_non_exhaustive()
    }
}

/// One agent's valuation.
#[derive(Clone, Debug)]
pub enum Valuation {
    Additive(AdditiveValuation),
    Oracle(ValuationOracle),
}

impl From<AdditiveValuation> for Valuation {
    fn from(v: AdditiveValuation) -> Self {
        Valuation::Additive(v)
    }
}

impl From<ValuationOracle> for Valuation {
    fn from(v: ValuationOracle) -> Self {
        Valuation::Oracle(v)
    }
}

impl Valuation {
    pub fn universe(&self) -> usize {
        match self {
            Valuation::Additive(a) => a.universe(),
            Valuation::Oracle(o) => o.universe,
        }
    }

    pub fn as_additive(&self) -> Option<&AdditiveValuation> {
        match self {
            Valuation::Additive(a) => Some(a),
            Valuation::Oracle(_) => None,
        }
    }

    /// Value of `set`, rejecting vertices outside the universe.
    pub fn value(&self, set: &VertexSet) -> Result<Value, ValuationError> {
        if let Some(&v) = set.last() {
            if v >= self.universe() {
                return Err(ValuationError::OutsideUniverse {
                    vertex: v,
                    universe: self.universe(),
                });
            }
        }
        Ok(self.eval(set))
    }

    /// Value of `set` without the universe check.
    pub fn eval(&self, set: &VertexSet) -> Value {
        match self {
            Valuation::Additive(a) => a.sum(set),
            Valuation::Oracle(o) => (o.evaluator)(set),
        }
    }

    pub fn eval_slice(&self, vertices: &[VertexId]) -> Value {
        match self {
            Valuation::Additive(a) => a.sum(vertices),
            Valuation::Oracle(o) => (o.evaluator)(&vertices.iter().copied().collect()),
        }
    }

    /// Value of the set whose members are the bits of `mask`.
    pub fn eval_mask(&self, mask: u64) -> Value {
        match self {
            Valuation::Additive(a) => {
                let mut total = Value::zero();
                let mut m = mask;
                while m != 0 {
                    total += a.values[m.trailing_zeros() as usize];
                    m &= m - 1;
                }
                total
            }
            Valuation::Oracle(o) => (o.evaluator)(&mask_to_set(mask)),
        }
    }
}

pub(crate) fn mask_to_set(mask: u64) -> VertexSet {
    let mut set = VertexSet::new();
    let mut m = mask;
    while m != 0 {
        set.insert(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    set
}

/// Prefix sums of an additive valuation along an enumeration.
#[derive(Clone, Debug)]
pub struct PrefixSums {
    sums: Vec<Value>,
}

impl PrefixSums {
    pub fn new(v: &AdditiveValuation, order: &Enumeration) -> Self {
        let mut sums = Vec::with_capacity(order.len() + 1);
        let mut acc = Value::zero();
        sums.push(acc);
        for &x in order.as_slice() {
            acc += v.of(x);
            sums.push(acc);
        }
        Self { sums }
    }

    /// Value of `P(v_s, v_t)` with 1-based inclusive bounds; zero when `s > t`.
    pub fn segment(&self, s: usize, t: usize) -> Value {
        if s > t {
            Value::zero()
        } else {
            self.sums[t] - self.sums[s - 1]
        }
    }
}

/// Valuations of `n` agents over one vertex universe.
#[derive(Clone, Debug)]
pub struct ValuationProfile {
    agents: Vec<Valuation>,
}

impl ValuationProfile {
    pub fn new(agents: Vec<Valuation>) -> Result<Self, ValuationError> {
        let first = agents.first().ok_or(ValuationError::NoAgents)?;
        if agents.iter().any(|a| a.universe() != first.universe()) {
            return Err(ValuationError::UniverseMismatch);
        }
        Ok(Self { agents })
    }

    /// `n` agents sharing one valuation.
    pub fn common(v: impl Into<Valuation>, n: usize) -> Result<Self, ValuationError> {
        let v = v.into();
        Self::new(vec![v; n])
    }

    pub fn additive(values: Vec<AdditiveValuation>) -> Result<Self, ValuationError> {
        Self::new(values.into_iter().map(Valuation::Additive).collect())
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn universe(&self) -> usize {
        self.agents[0].universe()
    }

    pub fn agent(&self, i: usize) -> &Valuation {
        &self.agents[i]
    }

    pub fn agents(&self) -> &[Valuation] {
        &self.agents
    }

    /// The shared valuation when every agent is additive with the same values.
    pub fn common_additive(&self) -> Option<&AdditiveValuation> {
        let first = self.agents[0].as_additive()?;
        self.agents
            .iter()
            .all(|a| a.as_additive() == Some(first))
            .then_some(first)
    }

    /// Restricts the profile to the given agents, in order.
    pub fn subset(&self, agents: &[usize]) -> Self {
        Self {
            agents: agents.iter().map(|&i| self.agents[i].clone()).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ViolationKind {
    NonzeroEmpty,
    Negative,
    Decreasing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneViolation {
    pub kind: ViolationKind,
    pub smaller: VertexSet,
    pub larger: VertexSet,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub exhaustive: bool,
    pub pairs_checked: usize,
    pub violations: Vec<MonotoneViolation>,
}

impl MonotoneReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Universes up to this size are checked exhaustively by [`check_monotone`].
pub const EXHAUSTIVE_MONOTONE_LIMIT: usize = 12;

/// Looks for sets `X ⊆ Y` with `ν(X) > ν(Y)`, negative values, or a nonzero
/// value on `∅`. Small universes are checked over every single-vertex
/// extension; larger ones by `trials` random chains drawn from `seed`.
pub fn check_monotone(v: &Valuation, trials: usize, seed: u64) -> MonotoneReport {
    let n = v.universe();
    let mut report = MonotoneReport::default();
    let empty = VertexSet::new();
    let at_empty = v.eval(&empty);
    if !at_empty.is_zero() {
        report.violations.push(MonotoneViolation {
            kind: ViolationKind::NonzeroEmpty,
            smaller: empty.clone(),
            larger: empty.clone(),
            detail: format!("value of the empty set is {at_empty}"),
        });
    }
    let record = |report: &mut MonotoneReport, x: &VertexSet, y: &VertexSet, vx: Value, vy: Value| {
        report.pairs_checked += 1;
        for (set, val) in [(x, vx), (y, vy)] {
            if val.is_negative() && !report.violations.iter().any(|w| w.kind == ViolationKind::Negative && &w.larger == set) {
                report.violations.push(MonotoneViolation {
                    kind: ViolationKind::Negative,
                    smaller: set.clone(),
                    larger: set.clone(),
                    detail: format!("negative value {val}"),
                });
            }
        }
        if vx > vy {
            report.violations.push(MonotoneViolation {
                kind: ViolationKind::Decreasing,
                smaller: x.clone(),
                larger: y.clone(),
                detail: format!("{vx} > {vy}"),
            });
        }
    };

    if n <= EXHAUSTIVE_MONOTONE_LIMIT {
        report.exhaustive = true;
        let values: Vec<Value> = (0..1u64 << n).map(|m| v.eval_mask(m)).collect();
        for mask in 0..1u64 << n {
            for bit in 0..n {
                if mask & (1 << bit) == 0 {
                    let larger = mask | 1 << bit;
                    let (vx, vy) = (values[mask as usize], values[larger as usize]);
                    if vx > vy || vx.is_negative() || vy.is_negative() {
                        record(&mut report, &mask_to_set(mask), &mask_to_set(larger), vx, vy);
                    } else {
                        report.pairs_checked += 1;
                    }
                }
            }
        }
        return report;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let larger: VertexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        let smaller: VertexSet = larger.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let (vx, vy) = (v.eval(&smaller), v.eval(&larger));
        record(&mut report, &smaller, &larger, vx, vy);
    }
    report
}
