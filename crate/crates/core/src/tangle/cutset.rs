use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::TangleError;
use crate::graph::{EdgeId, Multigraph, VertexId, VertexSet};

/// Largest candidate set the plain threshold search accepts.
pub const CUTSET_SEARCH_LIMIT: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CutsetPart {
    /// A single point.
    Vertex(VertexId),
    /// A closed subtangle: its vertices together with the edges it keeps.
    Subgraph { vertices: VertexSet, edges: BTreeSet<EdgeId> },
}

impl CutsetPart {
    pub fn vertices(&self) -> VertexSet {
        match self {
            CutsetPart::Vertex(v) => VertexSet::from([*v]),
            CutsetPart::Subgraph { vertices, .. } => vertices.clone(),
        }
    }

    pub fn edges(&self) -> BTreeSet<EdgeId> {
        match self {
            CutsetPart::Vertex(_) => BTreeSet::new(),
            CutsetPart::Subgraph { edges, .. } => edges.clone(),
        }
    }

    pub fn is_type_one(&self) -> bool {
        matches!(self, CutsetPart::Vertex(_))
    }
}

/// A connected piece left after deleting the cutset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: VertexSet,
    pub edges: BTreeSet<EdgeId>,
    /// Deleted vertices in the closure of the component.
    pub contacts: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutsetWitness {
    pub parts: Vec<CutsetPart>,
    /// Ordered by smallest edge id, then smallest vertex.
    pub components: Vec<Component>,
    pub gap: i64,
    /// Failures of the contact conditions, empty when all hold.
    pub violations: Vec<String>,
}

impl CutsetWitness {
    pub fn cardinality(&self) -> usize {
        self.parts.len()
    }

    pub fn removed_vertices(&self) -> VertexSet {
        self.parts.iter().flat_map(|p| p.vertices()).collect()
    }

    pub fn removed_edges(&self) -> BTreeSet<EdgeId> {
        self.parts.iter().flat_map(|p| p.edges()).collect()
    }

    /// Gap at least 2 with every contact condition met.
    pub fn is_gap_two(&self) -> bool {
        self.gap >= 2 && self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Threshold {
    Finite { t: usize, witness: CutsetWitness },
    Infinite,
}

impl Threshold {
    pub fn value(&self) -> Option<usize> {
        match self {
            Threshold::Finite { t, .. } => Some(*t),
            Threshold::Infinite => None,
        }
    }

    pub fn witness(&self) -> Option<&CutsetWitness> {
        match self {
            Threshold::Finite { witness, .. } => Some(witness),
            Threshold::Infinite => None,
        }
    }
}

impl std::fmt::Display for Threshold {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Threshold::Finite { t, .. } => write!(f, "{t}"),
            Threshold::Infinite => f.write_str("infinite"),
        }
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a != b {
            self.0[a.max(b)] = a.min(b);
        }
    }
}

/// Components of the tangle after deleting `removed` and the edges in
/// `cut_edges`. Nodes `0..n` are vertices, `n + i` is the `i`-th edge of
/// `g.edges()`.
pub(crate) fn components(g: &Multigraph, removed: &VertexSet, cut_edges: &BTreeSet<EdgeId>) -> Vec<Component> {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut uf = UnionFind::new(n + edges.len());
    for (i, e) in edges.iter().enumerate() {
        if cut_edges.contains(&e.id) {
            continue;
        }
        for end in [e.u, e.v] {
            if !removed.contains(&end) {
                uf.union(n + i, end);
            }
        }
    }
    let mut by_root: std::collections::BTreeMap<usize, Component> = Default::default();
    for v in (0..n).filter(|v| !removed.contains(v)) {
        let root = uf.find(v);
        by_root.entry(root).or_insert_with(empty_component).vertices.insert(v);
    }
    for (i, e) in edges.iter().enumerate() {
        if cut_edges.contains(&e.id) {
            continue;
        }
        let root = uf.find(n + i);
        let c = by_root.entry(root).or_insert_with(empty_component);
        c.edges.insert(e.id);
        for end in [e.u, e.v] {
            if removed.contains(&end) {
                c.contacts.insert(end);
            }
        }
    }
    let mut out: Vec<Component> = by_root.into_values().collect();
    out.sort_by_key(|c| (c.edges.first().copied(), c.vertices.first().copied()));
    out
}

fn empty_component() -> Component {
    Component {
        vertices: VertexSet::new(),
        edges: BTreeSet::new(),
        contacts: VertexSet::new(),
    }
}

fn validate(g: &Multigraph, parts: &[CutsetPart]) -> Result<(), TangleError> {
    if parts.is_empty() {
        return Err(TangleError::InvalidCutset("no parts".into()));
    }
    let mut seen = VertexSet::new();
    for part in parts {
        let vs = part.vertices();
        if vs.is_empty() {
            return Err(TangleError::InvalidCutset("empty part".into()));
        }
        for &v in &vs {
            if v >= g.vertex_count() {
                return Err(TangleError::InvalidCutset(format!("unknown vertex {v}")));
            }
            if !seen.insert(v) {
                return Err(TangleError::InvalidCutset(format!(
                    "vertex {} lies in two parts",
                    g.vertex_name(v)
                )));
            }
        }
        for id in part.edges() {
            let e = g
                .edge(id)
                .ok_or_else(|| TangleError::InvalidCutset(format!("unknown edge {id}")))?;
            if !vs.contains(&e.u) || !vs.contains(&e.v) {
                return Err(TangleError::InvalidCutset(format!("edge {id} leaves its part")));
            }
        }
        if let CutsetPart::Subgraph { vertices, edges } = part {
            if vertices.len() < 2 && edges.is_empty() {
                return Err(TangleError::InvalidCutset(
                    "a subgraph part needs two vertices or an edge".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Contact-condition failures for `parts` against `components`.
fn violations(parts: &[CutsetPart], components: &[Component]) -> Vec<String> {
    let mut out = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        let vs = part.vertices();
        let mut touching = Vec::new();
        for (j, c) in components.iter().enumerate() {
            let contact: Vec<VertexId> = c.contacts.intersection(&vs).copied().collect();
            if contact.len() > 1 {
                out.push(format!(
                    "part {} meets the closure of component {} in {} points",
                    i + 1,
                    j + 1,
                    contact.len()
                ));
            }
            if let Some(&s) = contact.first() {
                touching.push(s);
            }
        }
        if !part.is_type_one() {
            let distinct: VertexSet = touching.iter().copied().collect();
            if touching.len() != 3 || distinct.len() != 3 {
                out.push(format!(
                    "part {} touches {} components at {} distinct points, not 3 and 3",
                    i + 1,
                    touching.len(),
                    distinct.len()
                ));
            }
        }
    }
    out
}

/// Deletes the parts and measures the gap from an explicit component count.
pub fn gap(g: &Multigraph, parts: &[CutsetPart]) -> Result<CutsetWitness, TangleError> {
    g.ensure_connected()?;
    validate(g, parts)?;
    let removed: VertexSet = parts.iter().flat_map(|p| p.vertices()).collect();
    let cut: BTreeSet<EdgeId> = parts.iter().flat_map(|p| p.edges()).collect();
    let components = components(g, &removed, &cut);
    let violations = violations(parts, &components);
    Ok(CutsetWitness {
        gap: components.len() as i64 - parts.len() as i64,
        parts: parts.to_vec(),
        components,
        violations,
    })
}

/// Calls `f` on every `t`-subset of `items` in lexicographic order until it
/// returns `true`.
pub(crate) fn first_subset<T: Copy>(items: &[T], t: usize, f: &mut impl FnMut(&[T]) -> bool) -> bool {
    fn go<T: Copy>(items: &[T], t: usize, start: usize, acc: &mut Vec<T>, f: &mut impl FnMut(&[T]) -> bool) -> bool {
        if acc.len() == t {
            return f(acc);
        }
        for i in start..items.len() {
            if items.len() - i < t - acc.len() {
                break;
            }
            acc.push(items[i]);
            if go(items, t, i + 1, acc, f) {
                return true;
            }
            acc.pop();
        }
        false
    }
    go(items, t, 0, &mut Vec::with_capacity(t), f)
}

fn search(g: &Multigraph, candidates: &[VertexId], max_t: usize) -> Result<Option<CutsetWitness>, TangleError> {
    if candidates.len() > CUTSET_SEARCH_LIMIT {
        return Err(TangleError::CapExceeded {
            what: "cutset candidate count",
            cap: CUTSET_SEARCH_LIMIT,
            actual: candidates.len(),
        });
    }
    let none = BTreeSet::new();
    for t in 1..=max_t.min(candidates.len()) {
        let mut found = None;
        first_subset(candidates, t, &mut |set| {
            let removed: VertexSet = set.iter().copied().collect();
            let count = components(g, &removed, &none).len();
            if count as i64 - t as i64 >= 2 {
                found = Some(set.to_vec());
                true
            } else {
                false
            }
        });
        if let Some(set) = found {
            let parts: Vec<CutsetPart> = set.into_iter().map(CutsetPart::Vertex).collect();
            return Ok(Some(gap(g, &parts)?));
        }
    }
    Ok(None)
}

/// Smallest gap ≥ 2 cutset, searching the points of degree at least 3.
pub fn gap_threshold(g: &Multigraph) -> Result<Threshold, TangleError> {
    g.ensure_connected()?;
    let degrees = g.degrees();
    let candidates: Vec<VertexId> = g.vertices().filter(|&v| degrees[v] >= 3).collect();
    Ok(match search(g, &candidates, candidates.len())? {
        Some(witness) => Threshold::Finite {
            t: witness.cardinality(),
            witness,
        },
        None => Threshold::Infinite,
    })
}

/// Searches every vertex of the graph with each edge subdivided once, up to
/// cardinality `max_t`. Returns the subdivided graph and the smallest
/// witness found on it.
pub fn gap_threshold_exhaustive(
    g: &Multigraph,
    max_t: usize,
) -> Result<(Multigraph, Option<CutsetWitness>), TangleError> {
    g.ensure_connected()?;
    let mut h = g.clone();
    let ids: Vec<EdgeId> = h.edges().iter().map(|e| e.id).collect();
    for id in ids {
        crate::graph::subdivide_in_place(&mut h, id, 1)?;
    }
    let candidates: Vec<VertexId> = h.vertices().collect();
    let found = search(&h, &candidates, max_t)?;
    Ok((h, found))
}
