use serde::{Deserialize, Serialize};

use super::KnifeError;
use crate::graph::{Enumeration, VertexId, VertexSet};
use crate::valuation::{PrefixSums, Valuation, ValuationProfile, Value};

/// One agent's view of an enumeration with a fixed endowment `I`.
pub(crate) struct View<'a> {
    val: &'a Valuation,
    order: &'a Enumeration,
    prefix: Option<PrefixSums>,
    endowment: &'a VertexSet,
    endowment_value: Value,
}

impl<'a> View<'a> {
    pub(crate) fn new(val: &'a Valuation, order: &'a Enumeration, endowment: &'a VertexSet) -> Self {
        Self {
            val,
            order,
            prefix: val.as_additive().map(|a| PrefixSums::new(a, order)),
            endowment,
            endowment_value: val.eval(endowment),
        }
    }

    pub(crate) fn views(p: &'a ValuationProfile, order: &'a Enumeration, endowment: &'a VertexSet) -> Vec<Self> {
        p.agents().iter().map(|v| Self::new(v, order, endowment)).collect()
    }

    /// `ν(P(v_s, v_t))`.
    pub(crate) fn seg(&self, s: usize, t: usize) -> Value {
        match &self.prefix {
            Some(p) => p.segment(s, t),
            None => self.val.eval_slice(self.order.segment(s, t)),
        }
    }

    /// `ν(I ∪ P(v_1, v_ℓ))`.
    pub(crate) fn left(&self, ell: usize) -> Value {
        match &self.prefix {
            Some(p) => self.endowment_value + p.segment(1, ell),
            None => {
                let mut set = self.endowment.clone();
                set.extend(self.order.segment(1, ell));
                self.val.eval(&set)
            }
        }
    }

    pub(crate) fn endowment_value(&self) -> Value {
        self.endowment_value
    }

    /// Lumpy ties over `P(v_s, v_t)`, as absolute positions.
    pub(crate) fn ties(&self, s: usize, t: usize) -> Vec<usize> {
        (s..=t)
            .filter(|&q| self.seg(s, q) >= self.seg(q + 1, t) && self.seg(q, t) >= self.seg(s, q - 1))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Left,
    Middle,
    Right,
}

/// Per-agent lumpy ties over a segment, the median position and the roles
/// relative to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LumpyAnalysis {
    pub ties: Vec<Vec<usize>>,
    pub leftmost: Vec<usize>,
    pub r: usize,
    pub roles: Vec<Role>,
}

pub(crate) fn role_of(ties: &[usize], r: usize) -> Option<Role> {
    if ties.contains(&r) {
        Some(Role::Middle)
    } else if ties.iter().all(|&q| q < r) {
        Some(Role::Left)
    } else if ties.iter().all(|&q| q > r) {
        Some(Role::Right)
    } else {
        None
    }
}

fn consecutive(ties: &[usize]) -> bool {
    !ties.is_empty() && ties.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Checks the monotone-valuation shape of lumpy tie sets.
pub(crate) fn check_ties(ties: &[Vec<usize>]) -> Result<(), KnifeError> {
    for (agent, t) in ties.iter().enumerate() {
        if !consecutive(t) {
            return Err(KnifeError::NonMonotone {
                agent,
                detail: format!("lumpy ties {t:?} are empty or not consecutive"),
            });
        }
    }
    Ok(())
}

/// Whether `r` is the median of some choice of one lumpy tie per agent.
pub fn is_median_lumpy_tie(ties: &[Vec<usize>], r: usize) -> bool {
    if ties.len() != 3 {
        return false;
    }
    (0..3).any(|i| {
        if !ties[i].contains(&r) {
            return false;
        }
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let le = |x: usize| ties[x].iter().any(|&q| q <= r);
        let ge = |x: usize| ties[x].iter().any(|&q| q >= r);
        (le(j) && ge(k)) || (le(k) && ge(j))
    })
}

/// Lumpy ties of one valuation over the whole enumeration.
pub fn lumpy_ties(v: &Valuation, p: &Enumeration) -> Vec<usize> {
    let empty = VertexSet::new();
    View::new(v, p, &empty).ties(1, p.len())
}

pub(crate) fn analyse(views: &[View<'_>], s: usize, t: usize) -> Result<LumpyAnalysis, KnifeError> {
    let ties: Vec<Vec<usize>> = views.iter().map(|v| v.ties(s, t)).collect();
    check_ties(&ties)?;
    let leftmost: Vec<usize> = ties.iter().map(|t| t[0]).collect();
    let mut sorted = leftmost.clone();
    sorted.sort_unstable();
    let r = sorted[sorted.len() / 2];
    let roles = roles_at(&ties, r)?;
    let count = |role| roles.iter().filter(|&&x| x == role).count();
    if count(Role::Left) > 1 || count(Role::Right) > 1 || count(Role::Middle) == 0 {
        return Err(KnifeError::Invariant {
            message: format!("role facts fail at median {r}"),
            state: format!("{ties:?}"),
        });
    }
    Ok(LumpyAnalysis {
        ties,
        leftmost,
        r,
        roles,
    })
}

pub(crate) fn roles_at(ties: &[Vec<usize>], r: usize) -> Result<Vec<Role>, KnifeError> {
    ties.iter()
        .enumerate()
        .map(|(agent, t)| {
            role_of(t, r).ok_or_else(|| KnifeError::NonMonotone {
                agent,
                detail: format!("lumpy ties {t:?} straddle {r}"),
            })
        })
        .collect()
}

/// The median of the three agents' leftmost lumpy ties over `p`.
pub fn median_lumpy_tie(p: &Enumeration, profile: &ValuationProfile) -> Result<LumpyAnalysis, KnifeError> {
    super::ensure_agents(profile, 3)?;
    if p.is_empty() {
        return Err(KnifeError::Precondition("empty enumeration".into()));
    }
    let empty = VertexSet::new();
    let views = View::views(profile, p, &empty);
    analyse(&views, 1, p.len())
}

/// Splits `P(v_s, v_t)` between two agents around `v_r`. Returns the bundle
/// of each agent in the order given.
pub(crate) fn split_pair(
    views: &[View<'_>],
    pair: [usize; 2],
    r: usize,
    s: usize,
    t: usize,
    ties: &[Vec<usize>],
) -> Result<[(usize, usize); 2], KnifeError> {
    let [mut i, mut k] = pair;
    if (ties[k][0], k) < (ties[i][0], i) {
        std::mem::swap(&mut i, &mut k);
    }
    let left = (s, r - 1);
    let with_r_right = (r, t);
    let with_r_left = (s, r);
    let right = (r + 1, t);
    let (bi, bk) = match role_of(&ties[i], r) {
        Some(Role::Left) => (left, with_r_right),
        Some(Role::Middle) => {
            if views[k].seg(left.0, left.1) >= views[k].seg(right.0, right.1) {
                (with_r_right, left)
            } else {
                (with_r_left, right)
            }
        }
        _ => {
            return Err(KnifeError::Invariant {
                message: format!("agent {i} is neither left nor middle at {r}"),
                state: format!("{ties:?}"),
            })
        }
    };
    Ok(if i == pair[0] { [bi, bk] } else { [bk, bi] })
}

/// Two-agent split of `P` around a median lumpy tie `v_r` of the
/// three-agent profile. `pair` names the two agents; bundles come back in
/// that order.
pub fn lumpy_allocation(
    pair: [usize; 2],
    r: usize,
    p: &Enumeration,
    profile: &ValuationProfile,
) -> Result<[Vec<VertexId>; 2], KnifeError> {
    super::ensure_agents(profile, 3)?;
    let empty = VertexSet::new();
    let views = View::views(profile, p, &empty);
    let ties: Vec<Vec<usize>> = views.iter().map(|v| v.ties(1, p.len())).collect();
    check_ties(&ties)?;
    if !is_median_lumpy_tie(&ties, r) {
        return Err(KnifeError::Precondition(format!("{r} is not a median lumpy tie")));
    }
    let [a, b] = split_pair(&views, pair, r, 1, p.len(), &ties)?;
    Ok([p.segment(a.0, a.1).to_vec(), p.segment(b.0, b.1).to_vec()])
}
