use serde::{Deserialize, Serialize};

use super::{is_bipolar_numbering, smooth_with_paths, Enumeration, GraphError, Multigraph, VertexId, VertexSet};

/// Branch vertices, markers and the five paths of a lips-class graph. Each
/// path lists interior vertices only; `top_left`, `middle_left` and `bottom`
/// run away from `a`, `top_right` and `middle_right` run away from `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipsLabeling {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub a1: VertexId,
    pub b1: VertexId,
    pub b2: VertexId,
    pub c1: VertexId,
    pub top_left: Vec<VertexId>,
    pub middle_left: Vec<VertexId>,
    pub top_right: Vec<VertexId>,
    pub middle_right: Vec<VertexId>,
    pub bottom: Vec<VertexId>,
}

/// A path `x` glued to a remainder whose bipolar numbering is `y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HandleDecomposition {
    pub x: Vec<VertexId>,
    pub rest: VertexSet,
    pub y: Enumeration,
}

impl HandleDecomposition {
    /// Checks the decomposition against the subgraph of `g` induced by
    /// `x ∪ rest`.
    pub fn verify(&self, g: &Multigraph) -> Result<(), String> {
        if self.x.iter().any(|v| self.rest.contains(v)) {
            return Err("handle meets the remainder".into());
        }
        if !self.x.windows(2).all(|w| g.is_adjacent(w[0], w[1])) {
            return Err("handle is not a path".into());
        }
        if let (Some(&last), Some(&first)) = (self.x.last(), self.y.as_slice().first()) {
            if !g.is_adjacent(last, first) {
                return Err("handle end is not adjacent to the start of the numbering".into());
            }
        }
        let (sub, old) = g.induced(&self.rest);
        let mut local = vec![usize::MAX; g.vertex_count()];
        for (i, &v) in old.iter().enumerate() {
            local[v] = i;
        }
        let y: Vec<VertexId> = self.y.as_slice().iter().map(|&v| local[v]).collect();
        if y.contains(&usize::MAX) || !is_bipolar_numbering(&sub, &y) {
            return Err("numbering is not bipolar on the remainder".into());
        }
        Ok(())
    }
}

/// The vertex orders used by the three stages of the lips procedure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LipsStagePlan {
    pub x1: Vec<VertexId>,
    pub y1: Vec<VertexId>,
    pub x2: Vec<VertexId>,
    pub y2: Vec<VertexId>,
    pub x3: Vec<VertexId>,
    pub x3_alt: Vec<VertexId>,
}

impl LipsStagePlan {
    /// `(X₁, V(Y₁), Y₁)` over the whole graph.
    pub fn stage_one(&self) -> HandleDecomposition {
        HandleDecomposition {
            x: self.x1.clone(),
            rest: self.y1.iter().copied().collect(),
            y: Enumeration::new(self.y1.clone()).expect("distinct"),
        }
    }

    /// `(X₂, V(Y₂), Y₂)` over the graph left after removing `X₁`.
    pub fn stage_two(&self) -> HandleDecomposition {
        HandleDecomposition {
            x: self.x2.clone(),
            rest: self.y2.iter().copied().collect(),
            y: Enumeration::new(self.y2.clone()).expect("distinct"),
        }
    }

    /// The vertices of the top-right cycle.
    pub fn top_right_cycle(&self) -> VertexSet {
        self.y2.iter().copied().collect()
    }

    pub fn verify(&self, g: &Multigraph) -> Result<(), String> {
        self.stage_one().verify(g)?;
        let g2: VertexSet = self.y1.iter().copied().collect();
        let (sub, old) = g.induced(&g2);
        let to_local = |list: &[VertexId]| -> Vec<VertexId> {
            list.iter().map(|v| old.binary_search(v).expect("in remainder")).collect()
        };
        HandleDecomposition {
            x: to_local(&self.x2),
            rest: to_local(&self.y2).into_iter().collect(),
            y: Enumeration::new(to_local(&self.y2)).map_err(|e| e.to_string())?,
        }
        .verify(&sub)?;
        let cycle = self.top_right_cycle();
        for walk in [&self.x3, &self.x3_alt] {
            let set: VertexSet = walk.iter().copied().collect();
            if set != cycle || set.len() != walk.len() {
                return Err("stage-three walk does not cover the top-right cycle".into());
            }
            if !walk.windows(2).all(|w| g.is_adjacent(w[0], w[1])) {
                return Err("stage-three walk is not a path".into());
            }
        }
        Ok(())
    }
}

/// Labels `g` as a member of the lips class, or returns `None` when its
/// skeleton is not the lips skeleton.
pub fn lips_labeling(g: &Multigraph) -> Result<Option<LipsLabeling>, GraphError> {
    g.ensure_connected()?;
    let sk = smooth_with_paths(g);
    let s = &sk.graph;
    if s.vertex_count() != 3 || s.edge_count() != 5 || s.has_loops() {
        return Ok(None);
    }
    let deg = s.degrees();
    let Some(sb) = (0..3).find(|&v| deg[v] == 4) else {
        return Ok(None);
    };
    let mut ends: Vec<usize> = (0..3).filter(|&v| v != sb).collect();
    if ends.iter().any(|&v| deg[v] != 3) {
        return Ok(None);
    }
    ends.sort_by(|&x, &y| s.vertex_name(x).cmp(s.vertex_name(y)));
    let (sa, sc) = (ends[0], ends[1]);
    if s.multiplicity(sa, sb) != 2 || s.multiplicity(sb, sc) != 2 || s.multiplicity(sa, sc) != 1 {
        return Ok(None);
    }

    let oriented = |edge: &super::Edge, from: usize| -> Vec<VertexId> {
        let mut p = sk.paths[edge.id].clone();
        if edge.u != from {
            p.reverse();
        }
        p
    };
    let between = |x: usize, y: usize| -> Vec<&super::Edge> {
        s.edges()
            .iter()
            .filter(|e| (e.u == x && e.v == y) || (e.u == y && e.v == x))
            .collect()
    };
    let split_top = |x: usize, y: usize| -> (Vec<VertexId>, Vec<VertexId>) {
        let pair = between(x, y);
        let p = oriented(pair[0], x);
        let q = oriented(pair[1], x);
        let min_name = |path: &[VertexId]| path.iter().map(|&v| g.vertex_name(v)).min();
        let q_is_top = match (min_name(&p), min_name(&q)) {
            (None, Some(_)) => true,
            (Some(mp), Some(mq)) => mq < mp,
            _ => false,
        };
        if q_is_top {
            (q, p)
        } else {
            (p, q)
        }
    };

    let (top_left, middle_left) = split_top(sa, sb);
    let (top_right, middle_right) = split_top(sb, sc);
    let bottom = oriented(between(sa, sc)[0], sa);
    let (a, b, c) = (sk.branch[sa], sk.branch[sb], sk.branch[sc]);
    Ok(Some(LipsLabeling {
        a,
        b,
        c,
        a1: middle_left.first().copied().unwrap_or(b),
        b1: top_left.last().copied().unwrap_or(a),
        b2: top_right.first().copied().unwrap_or(c),
        c1: middle_right.last().copied().unwrap_or(b),
        top_left,
        middle_left,
        top_right,
        middle_right,
        bottom,
    }))
}

fn rev(p: &[VertexId]) -> impl Iterator<Item = VertexId> + '_ {
    p.iter().rev().copied()
}

/// Builds the stage orders from a labeling.
pub fn lips_stage_plan(lab: &LipsLabeling) -> LipsStagePlan {
    let mut x1: Vec<VertexId> = rev(&lab.top_left).collect();
    x1.push(lab.a);
    x1.extend(&lab.bottom);

    let mut y1 = vec![lab.c];
    y1.extend(rev(&lab.top_right));
    y1.extend(rev(&lab.middle_right));
    y1.push(lab.b);
    y1.extend(rev(&lab.middle_left));

    let x2 = lab.middle_left.clone();

    let mut y2 = vec![lab.b];
    y2.extend(&lab.middle_right);
    y2.extend(&lab.top_right);
    y2.push(lab.c);

    let mut x3 = vec![lab.c];
    x3.extend(rev(&lab.top_right));
    x3.push(lab.b);
    x3.extend(&lab.middle_right);

    let mut x3_alt = vec![lab.b];
    x3_alt.extend(&lab.middle_right);
    x3_alt.push(lab.c);
    x3_alt.extend(rev(&lab.top_right));

    LipsStagePlan {
        x1,
        y1,
        x2,
        y2,
        x3,
        x3_alt,
    }
}
