use serde::{Deserialize, Serialize};

use super::{EdgeId, GraphError, Multigraph, VertexId, VertexSet};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub vertices: VertexSet,
    pub edges: Vec<EdgeId>,
}

/// Blocks, separating vertices, and the bipartite tree between them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockTree {
    pub blocks: Vec<Block>,
    pub separating: Vec<VertexId>,
    /// `(block index, separating vertex)` incidences.
    pub links: Vec<(usize, VertexId)>,
}

impl BlockTree {
    pub fn blocks_at(&self, v: VertexId) -> Vec<usize> {
        self.links.iter().filter(|l| l.1 == v).map(|l| l.0).collect()
    }

    pub fn separating_in(&self, block: usize) -> Vec<VertexId> {
        self.links.iter().filter(|l| l.0 == block).map(|l| l.1).collect()
    }

    pub fn is_path(&self) -> bool {
        self.separating.iter().all(|&v| self.blocks_at(v).len() <= 2)
            && (0..self.blocks.len()).all(|b| self.separating_in(b).len() <= 2)
    }

    /// Blocks in path order together with the separating vertex shared by
    /// each consecutive pair, when the tree is a path.
    pub fn path_order(&self) -> Option<(Vec<usize>, Vec<VertexId>)> {
        if !self.is_path() {
            return None;
        }
        if self.blocks.len() <= 1 {
            return Some(((0..self.blocks.len()).collect(), Vec::new()));
        }
        let start = (0..self.blocks.len()).find(|&b| self.separating_in(b).len() == 1)?;
        let mut order = vec![start];
        let mut cuts = Vec::new();
        let mut prev_cut = None;
        let mut cur = start;
        loop {
            let next_cut = self
                .separating_in(cur)
                .into_iter()
                .find(|&v| Some(v) != prev_cut);
            let Some(cut) = next_cut else { break };
            let next = self.blocks_at(cut).into_iter().find(|&b| b != cur)?;
            cuts.push(cut);
            order.push(next);
            prev_cut = Some(cut);
            cur = next;
        }
        Some((order, cuts))
    }
}

/// Block decomposition of a connected multigraph. Loops are blocks of their
/// own; parallel edges share a block.
pub fn block_tree(g: &Multigraph) -> Result<BlockTree, GraphError> {
    g.ensure_connected()?;
    let n = g.vertex_count();
    let mut blocks = Vec::new();
    for e in g.edges().iter().filter(|e| e.is_loop()) {
        blocks.push(Block {
            vertices: VertexSet::from([e.u]),
            edges: vec![e.id],
        });
    }
    if n == 0 {
        return Ok(BlockTree {
            blocks,
            separating: Vec::new(),
            links: Vec::new(),
        });
    }
    if n == 1 {
        if blocks.is_empty() {
            blocks.push(Block {
                vertices: VertexSet::from([0]),
                edges: Vec::new(),
            });
        }
        return Ok(finish(blocks));
    }

    let inc = g.incidence();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut edge_stack: Vec<EdgeId> = Vec::new();
    let mut time = 1;
    disc[0] = 0;
    let mut stack: Vec<(VertexId, Option<EdgeId>, usize)> = vec![(0, None, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, parent_edge, i) = *top;
        if i < inc[v].len() {
            top.2 += 1;
            let (eid, w) = inc[v][i];
            if w == v || Some(eid) == parent_edge {
                continue;
            }
            if disc[w] == usize::MAX {
                edge_stack.push(eid);
                disc[w] = time;
                low[w] = time;
                time += 1;
                stack.push((w, Some(eid), 0));
            } else if disc[w] < disc[v] {
                edge_stack.push(eid);
                low[v] = low[v].min(disc[w]);
            }
            continue;
        }
        stack.pop();
        let Some(pe) = parent_edge else { continue };
        let p = stack.last().expect("non-root has a parent").0;
        low[p] = low[p].min(low[v]);
        if low[v] >= disc[p] {
            let mut edges = Vec::new();
            while let Some(e) = edge_stack.pop() {
                edges.push(e);
                if e == pe {
                    break;
                }
            }
            edges.sort_unstable();
            let vertices = edges
                .iter()
                .flat_map(|&e| {
                    let e = g.edge(e).expect("edge exists");
                    [e.u, e.v]
                })
                .collect();
            blocks.push(Block { vertices, edges });
        }
    }
    Ok(finish(blocks))
}

fn finish(mut blocks: Vec<Block>) -> BlockTree {
    blocks.sort_by(|a, b| a.edges.cmp(&b.edges).then(a.vertices.cmp(&b.vertices)));
    let mut count = std::collections::BTreeMap::<VertexId, usize>::new();
    for b in &blocks {
        for &v in &b.vertices {
            *count.entry(v).or_default() += 1;
        }
    }
    let separating: Vec<VertexId> = count
        .iter()
        .filter(|&(_, &c)| c >= 2)
        .map(|(&v, _)| v)
        .collect();
    let mut links = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &v in &separating {
            if b.vertices.contains(&v) {
                links.push((i, v));
            }
        }
    }
    BlockTree {
        blocks,
        separating,
        links,
    }
}

/// Whether the block tree of `g` is a path.
pub fn is_block_path(g: &Multigraph) -> Result<bool, GraphError> {
    Ok(block_tree(g)?.is_path())
}
