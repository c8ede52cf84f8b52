#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tanglefair::fairness::Allocation;
use tanglefair::valuation::{AdditiveValuation, Value};
use tanglefair::{Multigraph, ValuationProfile, VertexSet};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(items: &[usize]) -> VertexSet {
    items.iter().copied().collect()
}

pub fn names(g: &Multigraph, s: &VertexSet) -> Vec<String> {
    s.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

pub fn id(g: &Multigraph, name: &str) -> usize {
    g.vertex_by_name(name).unwrap_or_else(|| panic!("no vertex {name}"))
}

/// Random connected multigraph: a random tree on `n` vertices plus `extra`
/// random edges, which may be parallel edges or (when `loops`) loops.
pub fn random_connected(r: &mut impl Rng, n: usize, extra: usize, loops: bool) -> Multigraph {
    let mut g = Multigraph::named(format!("rand{n}"));
    for i in 0..n {
        g.ensure_vertex(&format!("n{i}"));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    for i in 1..n {
        let parent = order[r.gen_range(0..i)];
        g.add_edge(parent, order[i]);
    }
    let mut added = 0;
    while added < extra && (loops || n > 1) {
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u == v && !loops {
            continue;
        }
        g.add_edge(u, v);
        added += 1;
    }
    g
}

/// Random simple connected graph on `n` vertices with about `extra` chords.
pub fn random_simple(r: &mut impl Rng, n: usize, extra: usize) -> Multigraph {
    let mut g = random_connected(r, n, 0, false);
    for _ in 0..extra * 4 {
        if g.edge_count() >= n - 1 + extra {
            break;
        }
        let u = r.gen_range(0..n);
        let v = r.gen_range(0..n);
        if u != v && !g.is_adjacent(u, v) {
            g.add_edge(u, v);
        }
    }
    g
}

/// A chain of blocks glued at cut vertices: each block is an edge, a cycle
/// or a cycle with a chord.
pub fn random_block_path(r: &mut impl Rng, max_vertices: usize) -> Multigraph {
    let mut g = Multigraph::named("blockpath");
    let mut tail = g.ensure_vertex("b0");
    let mut next = 1;
    let mut fresh = |g: &mut Multigraph| {
        let v = g.ensure_vertex(&format!("b{next}"));
        next += 1;
        v
    };
    loop {
        let room = max_vertices - g.vertex_count();
        if room == 0 {
            break;
        }
        let kind = r.gen_range(0..3);
        if kind == 0 || room < 2 {
            let v = fresh(&mut g);
            g.add_edge(tail, v);
            tail = v;
        } else {
            let len = r.gen_range(2..=room.min(4));
            let mut ring = vec![tail];
            for _ in 0..len {
                ring.push(fresh(&mut g));
            }
            for w in ring.windows(2) {
                g.add_edge(w[0], w[1]);
            }
            g.add_edge(*ring.last().unwrap(), tail);
            if kind == 2 && len >= 3 {
                g.add_edge(ring[1], ring[len]);
            }
            tail = ring[r.gen_range(1..ring.len())];
        }
        if r.gen_bool(0.25) {
            break;
        }
    }
    g
}

pub fn random_lips(r: &mut impl Rng, max_interior: usize) -> Multigraph {
    let dims = [(); 5].map(|_| r.gen_range(0..=max_interior));
    tanglefair::tangle::named::lips_graph(dims)
}

pub fn random_values(r: &mut impl Rng, n: usize, lo: i128, hi: i128) -> Vec<i128> {
    (0..n).map(|_| r.gen_range(lo..=hi)).collect()
}

pub fn random_profile(r: &mut impl Rng, agents: usize, n: usize, lo: i128, hi: i128) -> ValuationProfile {
    ValuationProfile::additive(
        (0..agents)
            .map(|_| AdditiveValuation::from_integers(&random_values(r, n, lo, hi)).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn uniform(agents: usize, n: usize) -> ValuationProfile {
    ValuationProfile::common(AdditiveValuation::from_integers(&vec![1; n]).unwrap(), agents).unwrap()
}

// Independent brute-force oracle: plain BFS contiguity, n^|V| labelings and
// bitmask removal sets. Shares no code with the library's search.

pub fn connected(g: &Multigraph, s: &BTreeSet<usize>) -> bool {
    let Some(&start) = s.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for e in g.edges() {
            let y = if e.u == x {
                e.v
            } else if e.v == x {
                e.u
            } else {
                continue;
            };
            if s.contains(&y) && seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == s.len()
}

pub fn brute_allocations(g: &Multigraph, agents: usize) -> Vec<Vec<BTreeSet<usize>>> {
    let n = g.vertex_count();
    let total = agents.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut bundles = vec![BTreeSet::new(); agents];
        for v in 0..n {
            bundles[c % agents].insert(v);
            c /= agents;
        }
        if bundles.iter().all(|b| connected(g, b)) {
            out.push(bundles);
        }
    }
    out
}

fn value(values: &[Vec<i128>], agent: usize, s: &BTreeSet<usize>) -> i128 {
    s.iter().map(|&v| values[agent][v]).sum()
}

pub fn brute_efk(g: &Multigraph, bundles: &[BTreeSet<usize>], values: &[Vec<i128>], k: usize) -> bool {
    for i in 0..bundles.len() {
        let own = value(values, i, &bundles[i]);
        for (j, b) in bundles.iter().enumerate() {
            if i == j || value(values, i, b) <= own {
                continue;
            }
            let items: Vec<usize> = b.iter().copied().collect();
            let cleared = (0u32..1 << items.len()).any(|mask| {
                if mask.count_ones() as usize > k {
                    return false;
                }
                let rest: BTreeSet<usize> = items
                    .iter()
                    .enumerate()
                    .filter(|(q, _)| mask >> q & 1 == 0)
                    .map(|(_, &v)| v)
                    .collect();
                connected(g, &rest) && value(values, i, &rest) <= own
            });
            if !cleared {
                return false;
            }
        }
    }
    true
}

pub fn brute_exists_efk(g: &Multigraph, values: &[Vec<i128>], k: usize) -> bool {
    brute_allocations(g, values.len())
        .iter()
        .any(|a| brute_efk(g, a, values, k))
}

pub fn integer_rows(p: &ValuationProfile) -> Vec<Vec<i128>> {
    p.agents()
        .iter()
        .map(|v| {
            v.as_additive()
                .unwrap()
                .values()
                .iter()
                .map(|x: &Value| {
                    assert!(x.is_integer());
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

pub fn allocation_sets(a: &Allocation) -> Vec<BTreeSet<usize>> {
    a.bundles().to_vec()
}
