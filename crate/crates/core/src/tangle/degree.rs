use std::fmt;

use serde::{Deserialize, Serialize};

use super::TangleError;
use crate::graph::{smooth, Multigraph};

/// `⟨d₁, d₂, …, d_r⟩` where `d_i` counts singular points of degree `i`.
/// Trailing zeros are trimmed, so the circle has the empty sequence.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(mut counts: Vec<usize>) -> Self {
        while counts.last() == Some(&0) {
            counts.pop();
        }
        Self(counts)
    }

    /// Degree sequence of the tangle drawn by `g`.
    pub fn of(g: &Multigraph) -> Result<Self, TangleError> {
        g.ensure_connected()?;
        if g.edge_count() == 0 {
            return Err(TangleError::Trivial);
        }
        let sk = smooth(g);
        if sk.vertex_count() == 1 && sk.edge_count() == 1 {
            return Ok(Self::default());
        }
        let mut counts = Vec::new();
        for d in sk.degrees() {
            if counts.len() < d {
                counts.resize(d, 0);
            }
            counts[d - 1] += 1;
        }
        Ok(Self::new(counts))
    }

    pub fn counts(&self) -> &[usize] {
        &self.0
    }

    /// `d_i`, zero past the end.
    pub fn d(&self, i: usize) -> usize {
        if i == 0 {
            return 0;
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn degree_sum(&self) -> usize {
        self.0.iter().enumerate().map(|(i, &c)| (i + 1) * c).sum()
    }

    /// Number of edges. The circle has one edge and no singular points.
    pub fn epsilon(&self) -> usize {
        if self.0.is_empty() {
            1
        } else {
            self.degree_sum() / 2
        }
    }

    /// Number of singular points of degree 3 or more.
    pub fn sigma3(&self) -> usize {
        self.0.iter().skip(2).sum()
    }

    pub fn excess(&self) -> i64 {
        self.epsilon() as i64 - self.sigma3() as i64
    }

    pub fn is_parity_blocked(&self) -> bool {
        self.degree_sum() % 2 == 1
    }

    /// Places the sequence in the nine-case analysis.
    pub fn case(&self) -> Result<DegreeCase, TangleError> {
        if self.is_parity_blocked() {
            return Err(TangleError::ParityBlocked(self.to_string()));
        }
        if self.d(2) != 0 {
            return Err(TangleError::Precondition(format!("{self} lists degree-2 singular points")));
        }
        let top = self.0.len();
        let (t, q) = (self.d(1), self.d(3));
        if top == 0 {
            return Ok(DegreeCase::Circle);
        }
        if top == 1 {
            return match t {
                2 => Ok(DegreeCase::Interval),
                _ => Err(TangleError::Disconnected(self.to_string())),
            };
        }
        if top >= 5 {
            let r = self.sigma3() - 1;
            return Ok(DegreeCase::HighDegree { r });
        }
        if top == 4 {
            let s = self.d(4);
            if (t, q, s) == (0, 0, 1) {
                return Ok(DegreeCase::FigureEight);
            }
            return Ok(DegreeCase::Quartic { t, r: q, s });
        }
        match (t, q) {
            (1, 1) => Ok(DegreeCase::Lollipop),
            (0, 2) => Ok(DegreeCase::ThetaOrHandcuffs),
            (_, 1) => Ok(DegreeCase::Star { t }),
            (0, _) => Ok(DegreeCase::Cubic { r: q / 2 }),
            _ => Ok(DegreeCase::Mixed { t, q }),
        }
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "⟨{}⟩", parts.join(","))
    }
}

/// The cases of the degree-sequence analysis. Each non-basic case carries a
/// lower bound on `ε − σ₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeCase {
    /// `⟨⟩`
    Circle,
    /// `⟨2⟩`
    Interval,
    /// `⟨1,0,1⟩`
    Lollipop,
    /// `⟨0,0,2⟩`
    ThetaOrHandcuffs,
    /// `⟨t,0,1⟩`, `t ≥ 3`
    Star { t: usize },
    /// `⟨0,0,2r⟩`, `r ≥ 2`
    Cubic { r: usize },
    /// `⟨t,0,q⟩`, `t ≥ 1`, `q ≥ 2`
    Mixed { t: usize, q: usize },
    /// `⟨0,0,0,1⟩`
    FigureEight,
    /// `⟨t,0,r,s⟩`, `s ≥ 1`, `t+r+s ≥ 2`
    Quartic { t: usize, r: usize, s: usize },
    /// Some point of degree at least 5, with `r + 1` points of degree 3 or
    /// more.
    HighDegree { r: usize },
}

impl DegreeCase {
    /// Case number, 1 through 9.
    pub fn number(&self) -> u8 {
        match self {
            DegreeCase::Circle => 1,
            DegreeCase::Interval => 2,
            DegreeCase::Lollipop | DegreeCase::ThetaOrHandcuffs => 3,
            DegreeCase::Star { .. } => 4,
            DegreeCase::Cubic { .. } => 5,
            DegreeCase::Mixed { .. } => 6,
            DegreeCase::FigureEight => 7,
            DegreeCase::Quartic { .. } => 8,
            DegreeCase::HighDegree { .. } => 9,
        }
    }

    pub fn is_basic(&self) -> bool {
        self.lower_bound().is_none()
    }

    /// Lower bound on `ε − σ₃`, or `None` for the basic sequences.
    pub fn lower_bound(&self) -> Option<i64> {
        let ceil_half = |x: i64| (x + 1).div_euclid(2);
        match *self {
            DegreeCase::Star { t } => Some((t as i64 + 3) / 2 - 1),
            DegreeCase::Cubic { r } => Some(r as i64),
            DegreeCase::Mixed { t, q } => {
                let (t, q) = (t as i64, q as i64);
                Some(ceil_half(3 * q + t) - q)
            }
            DegreeCase::Quartic { t, r, s } => Some(ceil_half((t + r + s + 1) as i64)),
            DegreeCase::HighDegree { r } => Some(ceil_half(3 + r as i64)),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StringableKind {
    Interval,
    Circle,
    Lollipop,
    Figure8,
    Handcuffs,
    Theta,
}

impl fmt::Display for StringableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StringableKind::Interval => "interval",
            StringableKind::Circle => "circle",
            StringableKind::Lollipop => "lollipop",
            StringableKind::Figure8 => "figure8",
            StringableKind::Handcuffs => "handcuffs",
            StringableKind::Theta => "theta",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stringability {
    Stringable(StringableKind),
    /// `excess` is `ε − σ₃`, at least the case bound and at least 2.
    NonStringable {
        sequence: DegreeSequence,
        case: DegreeCase,
        excess: i64,
    },
}

impl Stringability {
    pub fn is_stringable(&self) -> bool {
        matches!(self, Stringability::Stringable(_))
    }
}

/// Classifies the tangle drawn by a connected multigraph.
pub fn classify_stringable(g: &Multigraph) -> Result<Stringability, TangleError> {
    let sequence = DegreeSequence::of(g)?;
    let case = sequence.case()?;
    let kind = match case {
        DegreeCase::Circle => StringableKind::Circle,
        DegreeCase::Interval => StringableKind::Interval,
        DegreeCase::Lollipop => StringableKind::Lollipop,
        DegreeCase::FigureEight => StringableKind::Figure8,
        DegreeCase::ThetaOrHandcuffs => {
            let sk = smooth(g);
            let (u, v) = (0, 1);
            match sk.multiplicity(u, v) {
                3 => StringableKind::Theta,
                1 if sk.has_loops() => StringableKind::Handcuffs,
                m => {
                    return Err(TangleError::Precondition(format!(
                        "⟨0,0,2⟩ skeleton with {m} edges between its branch points"
                    )))
                }
            }
        }
        _ => {
            let excess = sequence.excess();
            let bound = case.lower_bound().expect("non-basic case");
            if excess < bound || excess < 2 {
                return Err(TangleError::Precondition(format!(
                    "{sequence} has ε − σ₃ = {excess}, below the case bound {bound}"
                )));
            }
            return Ok(Stringability::NonStringable { sequence, case, excess });
        }
    };
    Ok(Stringability::Stringable(kind))
}
