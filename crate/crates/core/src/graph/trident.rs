use serde::{Deserialize, Serialize};

use super::{bfs, block_tree, GraphError, Multigraph, VertexId, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TridentKind {
    /// The core is a single vertex shared by all three arms.
    TypeI,
    /// The three contact vertices are distinct.
    TypeII,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trident {
    pub kind: TridentKind,
    pub core: VertexSet,
    pub arms: [VertexSet; 3],
    pub contacts: [VertexId; 3],
}

impl Trident {
    /// Checks every defining condition against `g`.
    pub fn verify(&self, g: &Multigraph) -> Result<(), String> {
        if !g.is_connected_subset(&self.core) || self.core.is_empty() {
            return Err("core is not a nonempty connected subgraph".into());
        }
        for (arm, &s) in self.arms.iter().zip(&self.contacts) {
            if arm.len() < 2 || !g.is_connected_subset(arm) {
                return Err("arm is not a connected subgraph on two or more vertices".into());
            }
            let shared: VertexSet = arm.intersection(&self.core).copied().collect();
            if shared != VertexSet::from([s]) {
                return Err("arm does not meet the core in exactly its contact vertex".into());
            }
        }
        match self.kind {
            TridentKind::TypeI if self.core.len() != 1 => {
                return Err("type I core has more than one vertex".into())
            }
            TridentKind::TypeII => {
                let [a, b, c] = self.contacts;
                if a == b || b == c || a == c {
                    return Err("type II contacts are not distinct".into());
                }
            }
            _ => {}
        }
        let adj = g.simple_adjacency();
        for i in 0..3 {
            let s = self.contacts[i];
            let inner: Vec<VertexId> = self.arms[i].iter().copied().filter(|&v| v != s).collect();
            let mut reach = VertexSet::new();
            for &x in &inner {
                if !reach.contains(&x) {
                    reach.extend(bfs(&adj, x, |v| v != s));
                }
            }
            for j in (0..3).filter(|&j| j != i) {
                if self.arms[j].iter().any(|v| reach.contains(v)) {
                    return Err(format!("arm {i} reaches arm {j} avoiding contact {s}"));
                }
            }
        }
        Ok(())
    }
}

/// A trident in the underlying simple graph of `g`, or `None` when its
/// block tree is a path.
pub fn find_trident(g: &Multigraph) -> Result<Option<Trident>, GraphError> {
    let s = g.simplified();
    let tree = block_tree(&s)?;
    let adj = s.simple_adjacency();
    let all = s.vertex_set();

    let component_avoiding = |cut: VertexId, seed: VertexId| -> VertexSet {
        bfs(&adj, seed, |v| v != cut && all.contains(&v))
    };

    let trident = if let Some(&v) = tree.separating.iter().find(|&&v| tree.blocks_at(v).len() >= 3) {
        let blocks = tree.blocks_at(v);
        let arms: Vec<VertexSet> = blocks[..3]
            .iter()
            .map(|&b| {
                let seed = *tree.blocks[b].vertices.iter().find(|&&x| x != v).expect("block has two vertices");
                let mut arm = component_avoiding(v, seed);
                arm.insert(v);
                arm
            })
            .collect();
        Trident {
            kind: TridentKind::TypeI,
            core: VertexSet::from([v]),
            arms: [arms[0].clone(), arms[1].clone(), arms[2].clone()],
            contacts: [v, v, v],
        }
    } else if let Some(b) = (0..tree.blocks.len()).find(|&b| tree.separating_in(b).len() >= 3) {
        let core = tree.blocks[b].vertices.clone();
        let cuts = tree.separating_in(b);
        let arms: Vec<VertexSet> = cuts[..3]
            .iter()
            .map(|&c| {
                let mut arm = VertexSet::from([c]);
                for &nb in &adj[c] {
                    if core.contains(&nb) || arm.contains(&nb) {
                        continue;
                    }
                    let comp = component_avoiding(c, nb);
                    if comp.iter().all(|x| !core.contains(x)) {
                        arm.extend(comp);
                    }
                }
                arm
            })
            .collect();
        Trident {
            kind: TridentKind::TypeII,
            core,
            arms: [arms[0].clone(), arms[1].clone(), arms[2].clone()],
            contacts: [cuts[0], cuts[1], cuts[2]],
        }
    } else {
        return Ok(None);
    };
    trident
        .verify(&s)
        .map_err(|e| GraphError::Invalid(format!("constructed trident fails: {e}")))?;
    Ok(Some(trident))
}
