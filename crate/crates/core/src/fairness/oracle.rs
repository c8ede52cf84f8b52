//! Exhaustive search over contiguous allocations of small graphs.

use std::ops::ControlFlow;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Allocation, FairnessError};
use crate::graph::Multigraph;
use crate::valuation::{mask_to_set, Value, ValuationProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCaps {
    pub max_vertices: usize,
    pub max_agents: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self {
            max_vertices: 24,
            max_agents: 6,
        }
    }
}

impl OracleCaps {
    fn check(&self, g: &Multigraph, n: usize) -> Result<(), FairnessError> {
        let limit = self.max_vertices.min(64);
        if g.vertex_count() > limit {
            return Err(FairnessError::CapExceeded {
                what: "vertex count",
                cap: limit,
                actual: g.vertex_count(),
            });
        }
        if n > self.max_agents {
            return Err(FairnessError::CapExceeded {
                what: "agent count",
                cap: self.max_agents,
                actual: n,
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleOutcome {
    Found(Allocation),
    /// No allocation passed. `allocations_checked` counts agent-labeled
    /// allocations; when `symmetry_reduced` is set each unlabeled partition
    /// was checked once and its labelings were counted without evaluation.
    Absent {
        allocations_checked: u128,
        partitions_checked: u128,
        symmetry_reduced: bool,
    },
}

impl OracleOutcome {
    pub fn allocation(&self) -> Option<&Allocation> {
        match self {
            OracleOutcome::Found(a) => Some(a),
            OracleOutcome::Absent { .. } => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, OracleOutcome::Absent { .. })
    }
}

struct Masks {
    adj: Vec<u64>,
}

impl Masks {
    fn neighbors(&self, set: u64) -> u64 {
        let mut out = 0;
        let mut m = set;
        while m != 0 {
            out |= self.adj[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        out
    }

    /// Part of `within` reachable from the lowest bit of `seed`.
    fn reach(&self, seed: u64, within: u64) -> u64 {
        let mut seen = seed & seed.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let next = self.neighbors(frontier) & within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    fn connected(&self, set: u64) -> bool {
        set == 0 || self.reach(set, set) == set
    }

    fn components(&self, set: u64) -> usize {
        let mut left = set;
        let mut count = 0;
        while left != 0 {
            left &= !self.reach(left, left);
            count += 1;
        }
        count
    }

    /// Calls `visit` with every connected subset of `within` containing the
    /// lowest bit of `within`.
    fn connected_sets(&self, within: u64, visit: &mut impl FnMut(u64) -> ControlFlow<()>) -> ControlFlow<()> {
        let root = within & within.wrapping_neg();
        self.grow(root, self.adj[root.trailing_zeros() as usize], within, 0, visit)
    }

    fn grow(
        &self,
        set: u64,
        nbrs: u64,
        within: u64,
        excluded: u64,
        visit: &mut impl FnMut(u64) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let frontier = nbrs & within & !set & !excluded;
        if frontier == 0 {
            return visit(set);
        }
        let w = frontier & frontier.wrapping_neg();
        let wi = w.trailing_zeros() as usize;
        self.grow(set | w, nbrs | self.adj[wi], within, excluded, visit)?;
        self.grow(set, nbrs, within, excluded | w, visit)
    }

    /// Every unordered partition of `remaining` into at most `slots`
    /// connected blocks, blocks listed by lowest vertex.
    fn partitions(
        &self,
        remaining: u64,
        slots: usize,
        blocks: &mut Vec<u64>,
        visit: &mut impl FnMut(&[u64]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if remaining == 0 {
            return visit(blocks);
        }
        if slots == 0 {
            return ControlFlow::Continue(());
        }
        if slots == 1 {
            if self.connected(remaining) {
                blocks.push(remaining);
                let flow = visit(blocks);
                blocks.pop();
                return flow;
            }
            return ControlFlow::Continue(());
        }
        self.connected_sets(remaining, &mut |block| {
            let rest = remaining & !block;
            if self.components(rest) > slots - 1 {
                return ControlFlow::Continue(());
            }
            blocks.push(block);
            let flow = self.partitions(rest, slots - 1, blocks, visit);
            blocks.pop();
            flow
        })
    }

    /// Whether removing at most `k` vertices from `bundle` can leave a
    /// contiguous remainder accepted by `accept`.
    fn removable(&self, bundle: u64, k: usize, accept: &mut impl FnMut(u64) -> bool) -> bool {
        fn go(m: &Masks, bundle: u64, removed: u64, from: u32, left: usize, accept: &mut impl FnMut(u64) -> bool) -> bool {
            let rest = bundle & !removed;
            if m.connected(rest) && accept(rest) {
                return true;
            }
            if left == 0 {
                return false;
            }
            let mut cand = bundle & !removed & (u64::MAX.checked_shl(from).unwrap_or(0));
            while cand != 0 {
                let b = cand.trailing_zeros();
                cand &= cand - 1;
                if go(m, bundle, removed | 1 << b, b + 1, left - 1, accept) {
                    return true;
                }
            }
            false
        }
        go(self, bundle, 0, 0, k, accept)
    }
}

fn labelings(n: usize, q: usize) -> u128 {
    ((n - q + 1)..=n).map(|x| x as u128).product()
}

/// Injective maps of `q` blocks into `n` agents, lexicographic.
fn for_each_injection(n: usize, q: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
    fn go(n: usize, q: usize, used: &mut Vec<bool>, acc: &mut Vec<usize>, visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>) -> ControlFlow<()> {
        if acc.len() == q {
            return visit(acc);
        }
        for a in 0..n {
            if !used[a] {
                used[a] = true;
                acc.push(a);
                let flow = go(n, q, used, acc, visit);
                acc.pop();
                used[a] = false;
                flow?;
            }
        }
        ControlFlow::Continue(())
    }
    go(n, q, &mut vec![false; n], &mut Vec::with_capacity(q), visit)
}

fn to_allocation(bundles: &[u64]) -> Allocation {
    Allocation {
        bundles: bundles.iter().map(|&m| mask_to_set(m)).collect(),
    }
}

/// Calls `visit` with every agent-labeled contiguous allocation of `g` to `n`
/// agents, empty bundles allowed, each exactly once.
pub fn for_each_contiguous_allocation(
    g: &Multigraph,
    n: usize,
    caps: OracleCaps,
    mut visit: impl FnMut(&Allocation) -> ControlFlow<()>,
) -> Result<(), FairnessError> {
    caps.check(g, n)?;
    g.ensure_connected().map_err(|_| FairnessError::Disconnected)?;
    let masks = Masks {
        adj: g.adjacency_masks().expect("within 64 vertices"),
    };
    let all = full_mask(g.vertex_count());
    let mut blocks = Vec::new();
    if all == 0 {
        let _ = visit(&Allocation {
            bundles: vec![Default::default(); n],
        });
        return Ok(());
    }
    let _ = masks.partitions(all, n, &mut blocks, &mut |parts| {
        for_each_injection(n, parts.len(), &mut |agents| {
            let mut bundles = vec![0u64; n];
            for (b, &a) in parts.iter().zip(agents) {
                bundles[a] = *b;
            }
            visit(&to_allocation(&bundles))
        })
    });
    Ok(())
}

pub fn enumerate_contiguous_allocations(
    g: &Multigraph,
    n: usize,
    caps: OracleCaps,
) -> Result<Vec<Allocation>, FairnessError> {
    let mut out = Vec::new();
    for_each_contiguous_allocation(g, n, caps, |a| {
        out.push(a.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

struct Checker<'a> {
    masks: &'a Masks,
    profile: &'a ValuationProfile,
    common: bool,
    k: usize,
    n: usize,
}

impl Checker<'_> {
    /// Whether an unlabeled partition passes under a common valuation, with
    /// missing slots filled by empty bundles.
    fn common_ok(&self, parts: &[u64]) -> bool {
        let v = self.profile.agent(0);
        let mut vals: Vec<Value> = parts.iter().map(|&b| v.eval_mask(b)).collect();
        vals.resize(self.n, Value::from_integer(0));
        let mut sorted = vals.clone();
        sorted.sort();
        for (j, &b) in parts.iter().enumerate() {
            // Poorest other bundle.
            let floor = if sorted[0] == vals[j] { sorted.get(1).copied().unwrap_or(vals[j]) } else { sorted[0] };
            if floor >= vals[j] {
                continue;
            }
            if !self.masks.removable(b, self.k, &mut |rest| v.eval_mask(rest) <= floor) {
                return false;
            }
        }
        true
    }

    fn labeled_ok(&self, bundles: &[u64]) -> bool {
        for i in 0..self.n {
            let vi = self.profile.agent(i);
            let own = vi.eval_mask(bundles[i]);
            for (j, &b) in bundles.iter().enumerate() {
                if j == i || b == 0 || vi.eval_mask(b) <= own {
                    continue;
                }
                if !self.masks.removable(b, self.k, &mut |rest| vi.eval_mask(rest) <= own) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Default)]
struct Tally {
    found: Option<Vec<u64>>,
    allocations: u128,
    partitions: u128,
}

/// The first contiguous allocation that is EF`k` outer, or a certificate that
/// none exists. Branches on the block holding vertex 0 run in parallel; the
/// result is the one the sequential order would return.
pub fn exists_efk_outer(
    g: &Multigraph,
    profile: &ValuationProfile,
    k: usize,
    caps: OracleCaps,
) -> Result<OracleOutcome, FairnessError> {
    let n = profile.len();
    caps.check(g, n)?;
    g.ensure_connected().map_err(|_| FairnessError::Disconnected)?;
    let masks = Masks {
        adj: g.adjacency_masks().expect("within 64 vertices"),
    };
    let all = full_mask(g.vertex_count());
    let common = profile.common_additive().is_some();
    let checker = Checker {
        masks: &masks,
        profile,
        common,
        k,
        n,
    };
    if all == 0 {
        return Ok(OracleOutcome::Found(to_allocation(&vec![0; n])));
    }

    let run = |parts: &[u64], tally: &mut Tally| -> ControlFlow<()> {
        tally.partitions += 1;
        if checker.common {
            if checker.common_ok(parts) {
                let mut bundles = parts.to_vec();
                bundles.resize(n, 0);
                tally.found = Some(bundles);
                return ControlFlow::Break(());
            }
            tally.allocations += labelings(n, parts.len());
            return ControlFlow::Continue(());
        }
        for_each_injection(n, parts.len(), &mut |agents| {
            let mut bundles = vec![0u64; n];
            for (b, &a) in parts.iter().zip(agents) {
                bundles[a] = *b;
            }
            tally.allocations += 1;
            if checker.labeled_ok(&bundles) {
                tally.found = Some(bundles);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        })
    };

    let mut firsts = Vec::new();
    if n == 1 {
        firsts.push(all);
    } else {
        let _ = masks.connected_sets(all, &mut |block| {
            if masks.components(all & !block) <= n - 1 {
                firsts.push(block);
            }
            ControlFlow::Continue(())
        });
    }
    let tallies: Vec<Tally> = firsts
        .par_iter()
        .map(|&first| {
            let mut tally = Tally::default();
            let mut blocks = vec![first];
            let _ = masks.partitions(all & !first, n - 1, &mut blocks, &mut |parts| run(parts, &mut tally));
            tally
        })
        .collect();

    if let Some(t) = tallies.iter().find(|t| t.found.is_some()) {
        return Ok(OracleOutcome::Found(to_allocation(t.found.as_ref().expect("checked"))));
    }
    Ok(OracleOutcome::Absent {
        allocations_checked: tallies.iter().map(|t| t.allocations).sum(),
        partitions_checked: tallies.iter().map(|t| t.partitions).sum(),
        symmetry_reduced: common,
    })
}
