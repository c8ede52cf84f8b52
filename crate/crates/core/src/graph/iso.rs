use std::ops::ControlFlow;

use super::{smooth_with_paths, GraphError, Multigraph, VertexId};

/// Largest skeleton handled by the exact isomorphism search.
pub const ISO_LIMIT: usize = 12;

fn multiplicity_matrix(g: &Multigraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0; n]; n];
    for e in g.edges() {
        m[e.u][e.v] += 1;
        if !e.is_loop() {
            m[e.v][e.u] += 1;
        }
    }
    m
}

fn check_limit(g: &Multigraph) -> Result<(), GraphError> {
    if g.vertex_count() > ISO_LIMIT {
        Err(GraphError::SizeLimit {
            what: "skeleton",
            limit: ISO_LIMIT,
            actual: g.vertex_count(),
        })
    } else {
        Ok(())
    }
}

/// Calls `visit` with every isomorphism `a → b` (as a vertex map) until it
/// breaks. Returns whether the visitor broke.
fn for_each_isomorphism(
    a: &Multigraph,
    b: &Multigraph,
    mut visit: impl FnMut(&[VertexId]) -> ControlFlow<()>,
) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let ma = multiplicity_matrix(a);
    let mb = multiplicity_matrix(b);
    let da = a.degrees();
    let db = b.degrees();
    let mut sa: Vec<_> = da.iter().zip(0..).map(|(&d, v)| (d, ma[v][v])).collect();
    let mut sb: Vec<_> = db.iter().zip(0..).map(|(&d, v)| (d, mb[v][v])).collect();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    // Most constrained vertices first.
    let mut order: Vec<VertexId> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(da[v]));

    struct Search<'s, F> {
        ma: &'s [Vec<usize>],
        mb: &'s [Vec<usize>],
        da: &'s [usize],
        db: &'s [usize],
        order: &'s [VertexId],
        map: Vec<VertexId>,
        used: Vec<bool>,
        visit: F,
    }
    impl<F: FnMut(&[VertexId]) -> ControlFlow<()>> Search<'_, F> {
        fn go(&mut self, depth: usize) -> ControlFlow<()> {
            if depth == self.order.len() {
                return (self.visit)(&self.map);
            }
            let x = self.order[depth];
            for y in 0..self.used.len() {
                if self.used[y] || self.da[x] != self.db[y] || self.ma[x][x] != self.mb[y][y] {
                    continue;
                }
                let consistent = self.order[..depth]
                    .iter()
                    .all(|&p| self.ma[x][p] == self.mb[y][self.map[p]]);
                if !consistent {
                    continue;
                }
                self.map[x] = y;
                self.used[y] = true;
                let flow = self.go(depth + 1);
                self.used[y] = false;
                flow?;
            }
            ControlFlow::Continue(())
        }
    }
    let mut search = Search {
        ma: &ma,
        mb: &mb,
        da: &da,
        db: &db,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        visit: &mut visit,
    };
    search.go(0).is_break()
}

/// Whether the skeletons of `a` and `b` are isomorphic.
pub fn skeleton_isomorphic(a: &Multigraph, b: &Multigraph) -> Result<bool, GraphError> {
    let sa = smooth_with_paths(a).graph;
    let sb = smooth_with_paths(b).graph;
    check_limit(&sa)?;
    check_limit(&sb)?;
    Ok(for_each_isomorphism(&sa, &sb, |_| ControlFlow::Break(())))
}

/// Whether `h` is isomorphic to some subdivision of `g`.
pub fn is_subdivision_of(h: &Multigraph, g: &Multigraph) -> Result<bool, GraphError> {
    h.ensure_connected()?;
    g.ensure_connected()?;
    let sh = smooth_with_paths(h);
    let sg = smooth_with_paths(g);
    check_limit(&sh.graph)?;
    check_limit(&sg.graph)?;

    let counts = |sk: &super::Skeleton| {
        let n = sk.graph.vertex_count();
        let mut c = vec![vec![Vec::new(); n]; n];
        for e in sk.graph.edges() {
            let len = sk.paths[e.id].len();
            c[e.u][e.v].push(len);
            if !e.is_loop() {
                c[e.v][e.u].push(len);
            }
        }
        for row in &mut c {
            for cell in row {
                cell.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        c
    };
    let ch = counts(&sh);
    let cg = counts(&sg);
    let n = sg.graph.vertex_count();
    Ok(for_each_isomorphism(&sg.graph, &sh.graph, |map| {
        let dominated = (0..n).all(|u| {
            (u..n).all(|v| {
                cg[u][v]
                    .iter()
                    .zip(&ch[map[u]][map[v]])
                    .all(|(need, have)| have >= need)
            })
        });
        if dominated {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    }))
}
