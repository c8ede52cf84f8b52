use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::cutset::{components, first_subset, gap, gap_threshold, CutsetPart, Threshold};
use super::TangleError;
use crate::graph::{EdgeId, Multigraph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralizedOptions {
    /// Accept type II parts that are not connected, including bare vertex
    /// sets.
    pub relax_connectivity: bool,
    /// Largest skeleton whose vertex subsets are enumerated.
    pub max_vertices: usize,
    /// Largest number of in-part edge subsets tried per vertex subset, as a
    /// power of two.
    pub max_inner_edges: usize,
    /// Cap on the number of part families examined.
    pub max_families: u64,
}

impl Default for GeneralizedOptions {
    fn default() -> Self {
        Self {
            relax_connectivity: false,
            max_vertices: 12,
            max_inner_edges: 16,
            max_families: 20_000_000,
        }
    }
}

struct Candidate {
    part: CutsetPart,
    vertices: VertexSet,
}

fn spans(vertices: &VertexSet, edges: &[(VertexId, VertexId)]) -> bool {
    let start = *vertices.first().expect("nonempty");
    let mut seen = VertexSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &(u, v) in edges {
            for (a, b) in [(u, v), (v, u)] {
                if a == x && seen.insert(b) {
                    stack.push(b);
                }
            }
        }
    }
    seen.len() == vertices.len()
}

fn type_two_candidates(g: &Multigraph, opts: &GeneralizedOptions) -> Result<Vec<Candidate>, TangleError> {
    let n = g.vertex_count();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let vertices: VertexSet = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let inner: Vec<&crate::graph::Edge> = g
            .edges()
            .iter()
            .filter(|e| vertices.contains(&e.u) && vertices.contains(&e.v))
            .collect();
        if inner.len() > opts.max_inner_edges {
            return Err(TangleError::CapExceeded {
                what: "edges inside a candidate part",
                cap: opts.max_inner_edges,
                actual: inner.len(),
            });
        }
        for sub in 0u64..(1u64 << inner.len()) {
            let kept: Vec<&crate::graph::Edge> = (0..inner.len()).filter(|i| sub >> i & 1 == 1).map(|i| inner[i]).collect();
            if kept.is_empty() && vertices.len() < 2 {
                continue;
            }
            // A chord left outside the part is an open component touching it twice.
            if inner.iter().any(|e| !e.is_loop() && !kept.iter().any(|k| k.id == e.id)) {
                continue;
            }
            if !opts.relax_connectivity {
                let pairs: Vec<(VertexId, VertexId)> = kept.iter().map(|e| (e.u, e.v)).collect();
                if kept.is_empty() || !spans(&vertices, &pairs) {
                    continue;
                }
            }
            let kept_ids: BTreeSet<EdgeId> = kept.iter().map(|e| e.id).collect();
            let boundary: VertexSet = g
                .edges()
                .iter()
                .filter(|e| !kept_ids.contains(&e.id))
                .flat_map(|e| [e.u, e.v])
                .filter(|v| vertices.contains(v))
                .collect();
            if boundary.len() < 3 {
                continue;
            }
            out.push(Candidate {
                part: CutsetPart::Subgraph {
                    vertices: vertices.clone(),
                    edges: kept_ids,
                },
                vertices: vertices.clone(),
            });
        }
    }
    out.sort_by(|a, b| {
        (a.vertices.len(), a.part.edges().len(), &a.part).cmp(&(b.vertices.len(), b.part.edges().len(), &b.part))
    });
    Ok(out)
}

/// Smallest generalized gap ≥ 2 cutset mixing single points of degree at
/// least 3 with closed subgraph parts.
pub fn generalized_gap_threshold(g: &Multigraph, opts: GeneralizedOptions) -> Result<Threshold, TangleError> {
    g.ensure_connected()?;
    if g.vertex_count() > opts.max_vertices.min(63) {
        return Err(TangleError::CapExceeded {
            what: "skeleton vertex count",
            cap: opts.max_vertices.min(63),
            actual: g.vertex_count(),
        });
    }
    let plain = gap_threshold(g)?;
    let degrees = g.degrees();
    let mut candidates: Vec<Candidate> = g
        .vertices()
        .filter(|&v| degrees[v] >= 3)
        .map(|v| Candidate {
            part: CutsetPart::Vertex(v),
            vertices: VertexSet::from([v]),
        })
        .collect();
    candidates.extend(type_two_candidates(g, &opts)?);

    let max_t = plain.value().unwrap_or(g.vertex_count());
    let index: Vec<usize> = (0..candidates.len()).collect();
    let mut families = 0u64;
    for t in 1..=max_t {
        let mut found = None;
        let mut over = false;
        first_subset(&index, t, &mut |pick| {
            families += 1;
            if families > opts.max_families {
                over = true;
                return true;
            }
            let mut removed = VertexSet::new();
            for &i in pick {
                for &v in &candidates[i].vertices {
                    if !removed.insert(v) {
                        return false;
                    }
                }
            }
            let cut: BTreeSet<EdgeId> = pick.iter().flat_map(|&i| candidates[i].part.edges()).collect();
            if (components(g, &removed, &cut).len() as i64) - (t as i64) < 2 {
                return false;
            }
            let parts: Vec<CutsetPart> = pick.iter().map(|&i| candidates[i].part.clone()).collect();
            match gap(g, &parts) {
                Ok(w) if w.is_gap_two() => {
                    found = Some(w);
                    true
                }
                _ => false,
            }
        });
        if over {
            return Err(TangleError::CapExceeded {
                what: "part families examined",
                cap: opts.max_families as usize,
                actual: families as usize,
            });
        }
        if let Some(witness) = found {
            return Ok(Threshold::Finite { t, witness });
        }
    }
    Ok(plain)
}
