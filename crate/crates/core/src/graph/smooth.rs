use super::{EdgeId, GraphError, Multigraph, VertexId};

/// The result of suppressing every degree-2 vertex.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub graph: Multigraph,
    /// Original id of each skeleton vertex.
    pub branch: Vec<VertexId>,
    /// For each skeleton edge (indexed by its id), the original interior
    /// vertices in order from its `u` end to its `v` end.
    pub paths: Vec<Vec<VertexId>>,
}

impl Skeleton {
    pub fn path_of(&self, edge: EdgeId) -> &[VertexId] {
        &self.paths[edge]
    }
}

/// Suppresses every degree-2 vertex. A component made only of degree-2
/// vertices keeps its smallest vertex, which ends up with a loop.
pub fn smooth(g: &Multigraph) -> Multigraph {
    smooth_with_paths(g).graph
}

pub fn smooth_with_paths(g: &Multigraph) -> Skeleton {
    let deg = g.degrees();
    let inc = g.incidence();
    let mut is_branch: Vec<bool> = deg.iter().map(|&d| d != 2).collect();
    let mut seen = vec![false; g.vertex_count()];
    for start in g.vertices() {
        if seen[start] {
            continue;
        }
        let comp = g.component_of(start, &g.vertex_set());
        for &v in &comp {
            seen[v] = true;
        }
        if comp.iter().all(|&v| !is_branch[v]) {
            is_branch[start] = true;
        }
    }

    let mut sk = Multigraph::named(g.name().to_string());
    let mut sk_id = vec![usize::MAX; g.vertex_count()];
    let mut branch = Vec::new();
    for v in g.vertices().filter(|&v| is_branch[v]) {
        sk_id[v] = sk.ensure_vertex(g.vertex_name(v));
        branch.push(v);
    }

    let mut used = std::collections::HashSet::new();
    let mut paths = Vec::new();
    for &b in &branch {
        for &(eid, w) in &inc[b] {
            if !used.insert(eid) {
                continue;
            }
            let mut interior = Vec::new();
            let mut prev = eid;
            let mut cur = w;
            while !is_branch[cur] {
                interior.push(cur);
                let &(next_edge, next) = inc[cur]
                    .iter()
                    .find(|&&(e, _)| e != prev)
                    .expect("degree-2 vertex has a second edge");
                used.insert(next_edge);
                prev = next_edge;
                cur = next;
            }
            sk.add_edge(sk_id[b], sk_id[cur]);
            paths.push(interior);
        }
    }
    Skeleton {
        graph: sk,
        branch,
        paths,
    }
}

/// Replaces edge `edge` by a path through `count` fresh degree-2 vertices.
pub fn subdivide(g: &Multigraph, edge: EdgeId, count: usize) -> Result<Multigraph, GraphError> {
    let mut h = g.clone();
    subdivide_in_place(&mut h, edge, count)?;
    Ok(h)
}

/// Subdivides in place and returns the fresh vertices in order from the
/// edge's `u` end.
pub(crate) fn subdivide_in_place(
    g: &mut Multigraph,
    edge: EdgeId,
    count: usize,
) -> Result<Vec<VertexId>, GraphError> {
    let e = *g.edge(edge).ok_or(GraphError::UnknownEdge(edge))?;
    if count == 0 {
        return Ok(Vec::new());
    }
    g.remove_edge(edge)?;
    let mut fresh = Vec::with_capacity(count);
    let mut prev = e.u;
    for i in 1..=count {
        let w = g.add_fresh_vertex(&format!("s{edge}_{i}"));
        g.add_edge(prev, w);
        fresh.push(w);
        prev = w;
    }
    g.add_edge(prev, e.v);
    Ok(fresh)
}
