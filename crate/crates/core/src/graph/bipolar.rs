use super::{block_tree, Enumeration, GraphError, Multigraph, VertexId, VertexSet};

/// Whether `order` lists every vertex of `g` once, with each vertex but the
/// first adjacent to an earlier one and each but the last adjacent to a later
/// one.
pub fn is_bipolar_numbering(g: &Multigraph, order: &[VertexId]) -> bool {
    let n = g.vertex_count();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = i;
    }
    let adj = g.simple_adjacency();
    order.iter().enumerate().all(|(i, &v)| {
        let earlier = i == 0 || adj[v].iter().any(|&w| pos[w] < i);
        let later = i + 1 == n || adj[v].iter().any(|&w| pos[w] > i);
        earlier && later
    })
}

/// A bipolar numbering of `g`, or `None` when the block tree of its
/// underlying simple graph is not a path.
pub fn bipolar_numbering(g: &Multigraph) -> Result<Option<Enumeration>, GraphError> {
    let s = g.simplified();
    let tree = block_tree(&s)?;
    let Some((order, cuts)) = tree.path_order() else {
        return Ok(None);
    };
    if g.vertex_count() <= 1 {
        return Ok(Some(Enumeration::new(g.vertices().collect())?));
    }
    let adj = s.simple_adjacency();
    let mut out: Vec<VertexId> = Vec::with_capacity(g.vertex_count());
    let last = order.len() - 1;
    for (i, &b) in order.iter().enumerate() {
        let block = &tree.blocks[b].vertices;
        let src = if i == 0 {
            let avoid = cuts.first().copied();
            *block.iter().find(|&&v| Some(v) != avoid).expect("block has two vertices")
        } else {
            cuts[i - 1]
        };
        let dst = if i == last {
            *block.iter().rev().find(|&&v| v != src).expect("block has two vertices")
        } else {
            cuts[i]
        };
        let numbering = st_numbering(&adj, block, src, dst);
        let skip = usize::from(i > 0);
        out.extend(numbering.into_iter().skip(skip));
    }
    if !is_bipolar_numbering(g, &out) {
        return Err(GraphError::Invalid("constructed numbering is not bipolar".into()));
    }
    Ok(Some(Enumeration::new(out)?))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Minus,
    Plus,
}

/// st-numbering of a non-separable block from `s` to `t`, treating `s t` as
/// an edge whether or not it is present.
fn st_numbering(adj: &[Vec<VertexId>], block: &VertexSet, s: VertexId, t: VertexId) -> Vec<VertexId> {
    if block.len() == 2 {
        return vec![s, t];
    }
    let n = adj.len();
    let neighbors = |v: VertexId| -> Vec<VertexId> {
        let mut list: Vec<VertexId> = adj[v].iter().copied().filter(|w| block.contains(w)).collect();
        if v == s {
            list.retain(|&w| w != t);
            list.insert(0, t);
        } else if v == t && !list.contains(&s) {
            list.push(s);
        }
        list
    };

    let mut pre = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut preorder = Vec::with_capacity(block.len());
    let mut stack: Vec<(VertexId, Vec<VertexId>, usize)> = Vec::new();
    pre[s] = 0;
    low[s] = s;
    preorder.push(s);
    stack.push((s, neighbors(s), 0));
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if top.2 < top.1.len() {
            let w = top.1[top.2];
            top.2 += 1;
            if pre[w] == usize::MAX {
                pre[w] = preorder.len();
                parent[w] = v;
                low[w] = w;
                preorder.push(w);
                let nb = neighbors(w);
                stack.push((w, nb, 0));
            } else if w != parent[v] && pre[w] < pre[low[v]] {
                low[v] = w;
            }
            continue;
        }
        stack.pop();
        if let Some(top) = stack.last() {
            let p = top.0;
            if pre[low[v]] < pre[low[p]] {
                low[p] = low[v];
            }
        }
    }

    let mut next = vec![usize::MAX; n];
    let mut prev = vec![usize::MAX; n];
    let mut sign = vec![Sign::Minus; n];
    next[s] = t;
    prev[t] = s;
    for &v in &preorder[2..] {
        let p = parent[v];
        if sign[low[v]] == Sign::Minus {
            let before = prev[p];
            prev[v] = before;
            next[v] = p;
            prev[p] = v;
            if before != usize::MAX {
                next[before] = v;
            }
            sign[p] = Sign::Plus;
        } else {
            let after = next[p];
            next[v] = after;
            prev[v] = p;
            next[p] = v;
            if after != usize::MAX {
                prev[after] = v;
            }
            sign[p] = Sign::Minus;
        }
    }
    let mut out = Vec::with_capacity(block.len());
    let mut cur = s;
    while cur != usize::MAX {
        out.push(cur);
        cur = next[cur];
    }
    out
}
