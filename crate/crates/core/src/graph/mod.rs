//! Multigraphs with stable edge ids and the structural algorithms on them.

mod bipolar;
mod blocks;
mod hamilton;
mod iso;
mod lips;
mod smooth;
mod trident;

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bipolar::{bipolar_numbering, is_bipolar_numbering};
pub use blocks::{block_tree, is_block_path, Block, BlockTree};
pub use hamilton::{hamiltonian_path, is_hamiltonian, HAMILTONIAN_LIMIT};
pub use iso::{is_subdivision_of, skeleton_isomorphic, ISO_LIMIT};
pub use lips::{
    lips_labeling, lips_stage_plan, HandleDecomposition, LipsLabeling, LipsStagePlan,
};
pub use smooth::{smooth, smooth_with_paths, subdivide, Skeleton};
pub(crate) use smooth::subdivide_in_place;
pub use trident::{find_trident, Trident, TridentKind};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("unknown edge id {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{what} has {actual} elements, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        actual: usize,
    },
    #[error("invalid structure: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    pub fn other(&self, x: VertexId) -> VertexId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// An undirected multigraph. Vertices are dense indices with string names;
/// edges keep their id for the lifetime of the graph and through subdivision
/// of other edges.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Multigraph {
    name: String,
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, VertexId>,
    edges: Vec<Edge>,
    next_edge_id: EdgeId,
}

impl PartialEq for Multigraph {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.edges == other.edges
    }
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn named(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    /// Builds a graph from name pairs, declaring vertices in order of first
    /// appearance.
    pub fn from_edges<S: AsRef<str>>(pairs: &[(S, S)]) -> Self {
        let mut g = Self::new();
        for (a, b) in pairs {
            let u = g.ensure_vertex(a.as_ref());
            let v = g.ensure_vertex(b.as_ref());
            g.add_edge(u, v);
        }
        g
    }

    /// A path on `m` vertices named `v1..vm`.
    pub fn path(m: usize) -> Self {
        let mut g = Self::named(format!("path{m}"));
        for i in 1..=m {
            g.ensure_vertex(&format!("v{i}"));
        }
        for i in 1..m {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// A cycle on `m ≥ 1` vertices named `v1..vm` (a loop when `m = 1`).
    pub fn cycle(m: usize) -> Self {
        let mut g = Self::path(m);
        g.name = format!("cycle{m}");
        if m >= 1 {
            g.add_edge(m - 1, 0);
        }
        g
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId, GraphError> {
        if self.index_map().contains_key(name) {
            return Err(GraphError::DuplicateVertex(name.to_string()));
        }
        Ok(self.push_vertex(name.to_string()))
    }

    pub fn ensure_vertex(&mut self, name: &str) -> VertexId {
        match self.index_map().get(name) {
            Some(&v) => v,
            None => self.push_vertex(name.to_string()),
        }
    }

    /// Adds a vertex whose name does not clash with any existing one.
    pub fn add_fresh_vertex(&mut self, stem: &str) -> VertexId {
        self.rebuild_index_if_needed();
        let mut candidate = stem.to_string();
        let mut bump = 0usize;
        while self.index.contains_key(&candidate) {
            bump += 1;
            candidate = format!("{stem}.{bump}");
        }
        self.push_vertex(candidate)
    }

    fn push_vertex(&mut self, name: String) -> VertexId {
        let id = self.names.len();
        self.index.insert(name.clone(), id);
        self.names.push(name);
        id
    }

    fn rebuild_index_if_needed(&mut self) {
        if self.index.len() != self.names.len() {
            self.index = self
                .names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), i))
                .collect();
        }
    }

    fn index_map(&mut self) -> &HashMap<String, VertexId> {
        self.rebuild_index_if_needed();
        &self.index
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> EdgeId {
        assert!(u < self.names.len() && v < self.names.len(), "edge endpoint out of range");
        let id = self.next_edge_id;
        self.next_edge_id += 1;
        self.edges.push(Edge { id, u, v });
        id
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<Edge, GraphError> {
        let pos = self.edge_position(id).ok_or(GraphError::UnknownEdge(id))?;
        Ok(self.edges.remove(pos))
    }

    fn edge_position(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.edge_position(id).map(|p| &self.edges[p])
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        if self.index.len() == self.names.len() {
            self.index.get(name).copied()
        } else {
            self.names.iter().position(|n| n == name)
        }
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.names.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.u == v) + usize::from(e.v == v))
            .sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for e in &self.edges {
            d[e.u] += 1;
            d[e.v] += 1;
        }
        d
    }

    /// Per-vertex incidence lists of `(edge id, other endpoint)`. A loop is
    /// listed twice at its vertex.
    pub fn incidence(&self) -> Vec<Vec<(EdgeId, VertexId)>> {
        let mut inc = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            inc[e.u].push((e.id, e.v));
            inc[e.v].push((e.id, e.u));
        }
        inc
    }

    /// Sorted neighbor lists of the underlying simple graph (loops dropped,
    /// parallel edges merged).
    pub fn simple_adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for e in &self.edges {
            if !e.is_loop() {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    pub fn is_adjacent(&self, u: VertexId, v: VertexId) -> bool {
        self.edges
            .iter()
            .any(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges
            .iter()
            .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .count()
    }

    pub fn is_simple(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.edges
            .iter()
            .all(|e| !e.is_loop() && seen.insert((e.u.min(e.v), e.u.max(e.v))))
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// Adjacency bitmasks of the underlying simple graph. Requires at most 64
    /// vertices.
    pub fn adjacency_masks(&self) -> Result<Vec<u64>, GraphError> {
        if self.vertex_count() > 64 {
            return Err(GraphError::SizeLimit {
                what: "vertex set",
                limit: 64,
                actual: self.vertex_count(),
            });
        }
        let mut masks = vec![0u64; self.vertex_count()];
        for e in &self.edges {
            if !e.is_loop() {
                masks[e.u] |= 1 << e.v;
                masks[e.v] |= 1 << e.u;
            }
        }
        Ok(masks)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() == 0 {
            return true;
        }
        self.component_of(0, &self.vertex_set()).len() == self.vertex_count()
    }

    /// Vertices reachable from `start` inside `within` (which must contain it).
    pub fn component_of(&self, start: VertexId, within: &VertexSet) -> VertexSet {
        let adj = self.simple_adjacency();
        bfs(&adj, start, |v| within.contains(&v))
    }

    /// Whether the subgraph induced by `set` is connected. Empty sets count as
    /// connected.
    pub fn is_connected_subset(&self, set: &VertexSet) -> bool {
        match set.first() {
            None => true,
            Some(&s) => self.component_of(s, set).len() == set.len(),
        }
    }

    /// Connected components of the subgraph induced by `set`, each sorted,
    /// listed by smallest member.
    pub fn components_within(&self, set: &VertexSet) -> Vec<VertexSet> {
        let adj = self.simple_adjacency();
        let mut left = set.clone();
        let mut out = Vec::new();
        while let Some(&s) = left.first() {
            let comp = bfs(&adj, s, |v| set.contains(&v));
            for v in &comp {
                left.remove(v);
            }
            out.push(comp);
        }
        out
    }

    pub fn ensure_connected(&self) -> Result<(), GraphError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(GraphError::Disconnected)
        }
    }

    /// The subgraph induced by `set`, with vertices renumbered in increasing
    /// order of their old ids. Returns the graph and the old id of each new
    /// vertex.
    pub fn induced(&self, set: &VertexSet) -> (Multigraph, Vec<VertexId>) {
        let old: Vec<VertexId> = set.iter().copied().collect();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        let mut h = Multigraph::named(self.name.clone());
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
            h.push_vertex(self.names[v].clone());
        }
        for e in &self.edges {
            if set.contains(&e.u) && set.contains(&e.v) {
                h.add_edge(new_id[e.u], new_id[e.v]);
            }
        }
        (h, old)
    }

    /// The underlying simple graph on the same vertex ids.
    pub fn simplified(&self) -> Multigraph {
        let mut h = Multigraph::named(self.name.clone());
        for n in &self.names {
            h.push_vertex(n.clone());
        }
        for (u, list) in self.simple_adjacency().iter().enumerate() {
            for &v in list {
                if u < v {
                    h.add_edge(u, v);
                }
            }
        }
        h
    }

    pub fn set_of_names(&self, set: &VertexSet) -> Vec<&str> {
        set.iter().map(|&v| self.vertex_name(v)).collect()
    }
}

pub(crate) fn bfs(
    adj: &[Vec<VertexId>],
    start: VertexId,
    allowed: impl Fn(VertexId) -> bool,
) -> VertexSet {
    let mut seen = VertexSet::new();
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if allowed(y) && seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// An ordered list of distinct vertices `v_1..v_m`. Positions in the public
/// accessors are 1-based to match the usual `P(v_s, v_t)` notation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    order: Vec<VertexId>,
}

impl Enumeration {
    pub fn new(order: Vec<VertexId>) -> Result<Self, GraphError> {
        let distinct: BTreeSet<_> = order.iter().collect();
        if distinct.len() != order.len() {
            return Err(GraphError::Invalid("enumeration repeats a vertex".into()));
        }
        Ok(Self { order })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.order
    }

    /// `v_i` for `1 ≤ i ≤ m`.
    pub fn at(&self, i: usize) -> VertexId {
        self.order[i - 1]
    }

    /// 1-based position of `v`, if present.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.order.iter().position(|&x| x == v).map(|p| p + 1)
    }

    /// `P(v_s, v_t)`; empty when `s > t`.
    pub fn segment(&self, s: usize, t: usize) -> &[VertexId] {
        if s > t || s == 0 {
            &[]
        } else {
            &self.order[s - 1..t.min(self.order.len())]
        }
    }

    pub fn segment_set(&self, s: usize, t: usize) -> VertexSet {
        self.segment(s, t).iter().copied().collect()
    }

    /// `L(v_r)`: the vertices strictly before position `r`.
    pub fn left_of(&self, r: usize) -> &[VertexId] {
        self.segment(1, r.saturating_sub(1))
    }

    /// `R(v_r)`: the vertices strictly after position `r`.
    pub fn right_of(&self, r: usize) -> &[VertexId] {
        self.segment(r + 1, self.len())
    }

    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self { order }
    }

    pub fn concat(&self, other: &Self) -> Result<Self, GraphError> {
        let mut order = self.order.clone();
        order.extend_from_slice(&other.order);
        Self::new(order)
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.order
    }
}
