use super::{GraphError, Multigraph};

/// Largest graph accepted by [`is_hamiltonian`].
pub const HAMILTONIAN_LIMIT: usize = 20;

/// Whether `g` has a Hamiltonian path.
pub fn is_hamiltonian(g: &Multigraph) -> Result<bool, GraphError> {
    let n = g.vertex_count();
    if n > HAMILTONIAN_LIMIT {
        return Err(GraphError::SizeLimit {
            what: "vertex set",
            limit: HAMILTONIAN_LIMIT,
            actual: n,
        });
    }
    if n <= 1 {
        return Ok(true);
    }
    let adj = g.adjacency_masks()?;
    let full = (1usize << n) - 1;
    // ends[mask]: vertices at which some path covering exactly `mask` ends.
    let mut ends = vec![0u32; full + 1];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..=full {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut out = adj[v] as usize & !mask;
            while out != 0 {
                let w = out.trailing_zeros() as usize;
                out &= out - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    Ok(ends[full] != 0)
}

/// Some Hamiltonian path of `g`. Graphs of maximum degree two are walked
/// directly at any size; others go through the exact search.
pub fn hamiltonian_path(g: &Multigraph) -> Result<Option<Vec<usize>>, GraphError> {
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }
    let adj = g.simple_adjacency();
    if g.is_connected() && adj.iter().all(|a| a.len() <= 2) {
        let start = (0..n).find(|&v| adj[v].len() <= 1).unwrap_or(0);
        let mut order = vec![start];
        let mut seen = vec![false; n];
        seen[start] = true;
        while let Some(&next) = adj[*order.last().expect("nonempty")].iter().find(|&&w| !seen[w]) {
            seen[next] = true;
            order.push(next);
        }
        return Ok((order.len() == n).then_some(order));
    }
    if n > HAMILTONIAN_LIMIT {
        return Err(GraphError::SizeLimit {
            what: "vertex set",
            limit: HAMILTONIAN_LIMIT,
            actual: n,
        });
    }
    let masks = g.adjacency_masks()?;
    let full = (1usize << n) - 1;
    let mut ends = vec![0u32; full + 1];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..=full {
        let mut e = ends[mask];
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut out = masks[v] as usize & !mask;
            while out != 0 {
                let w = out.trailing_zeros() as usize;
                out &= out - 1;
                ends[mask | 1 << w] |= 1 << w;
            }
        }
    }
    if ends[full] == 0 {
        return Ok(None);
    }
    let mut mask = full;
    let mut v = ends[full].trailing_zeros() as usize;
    let mut rev_order = vec![v];
    while mask.count_ones() > 1 {
        let prev_mask = mask & !(1 << v);
        let cand = ends[prev_mask] & masks[v] as u32;
        let u = cand.trailing_zeros() as usize;
        rev_order.push(u);
        mask = prev_mask;
        v = u;
    }
    rev_order.reverse();
    Ok(Some(rev_order))
}
