mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use tanglefair::fairness::*;
use tanglefair::graph::*;
use tanglefair::knife::*;
use tanglefair::tangle::named::lips_graph;
use tanglefair::valuation::AdditiveValuation;
use tanglefair::{Multigraph, VertexSet};

fn graph_from(seed: u64, n: usize, extra: usize, loops: bool) -> Multigraph {
    random_connected(&mut rng(seed), n, extra, loops)
}

fn prefix_suffix_connected(g: &Multigraph, order: &[usize]) -> bool {
    (1..=order.len()).all(|i| {
        let pre: BTreeSet<usize> = order[..i].iter().copied().collect();
        let suf: BTreeSet<usize> = order[order.len() - i..].iter().copied().collect();
        connected(g, &pre) && connected(g, &suf)
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn smoothing_is_idempotent(seed in any::<u64>(), n in 1usize..9, extra in 0usize..5) {
        let g = graph_from(seed, n, extra, true);
        prop_assume!(g.edge_count() > 0);
        let s = smooth(&g);
        prop_assert!(skeleton_isomorphic(&smooth(&s), &s).unwrap());
        prop_assert_eq!(smooth(&s).vertex_count(), s.vertex_count());
    }

    #[test]
    fn subdivision_keeps_block_paths_and_skeletons(
        seed in any::<u64>(), n in 2usize..9, extra in 0usize..4, pick in any::<prop::sample::Index>(), count in 1usize..4,
    ) {
        let g = graph_from(seed, n, extra, true);
        let e = g.edges()[pick.index(g.edge_count())].id;
        let h = subdivide(&g, e, count).unwrap();
        prop_assert_eq!(h.vertex_count(), g.vertex_count() + count);
        if is_block_path(&g).unwrap() {
            prop_assert!(is_block_path(&h).unwrap());
        }
        prop_assert!(skeleton_isomorphic(&smooth(&h), &smooth(&g)).unwrap());
        prop_assert!(is_subdivision_of(&h, &g).unwrap());
    }

    #[test]
    fn two_agent_structures_agree(seed in any::<u64>(), n in 1usize..10, extra in 0usize..4, loops in any::<bool>()) {
        let g = graph_from(seed, n, extra, loops);
        let block_path = is_block_path(&g.simplified()).unwrap();
        if !g.has_loops() {
            prop_assert_eq!(is_block_path(&g).unwrap(), block_path);
        }
        let numbering = bipolar_numbering(&g).unwrap();
        let trident = find_trident(&g).unwrap();
        prop_assert_eq!(numbering.is_some(), block_path);
        prop_assert_eq!(trident.is_none(), block_path);
        if let Some(order) = numbering {
            prop_assert!(prefix_suffix_connected(&g, order.as_slice()));
            prop_assert!(is_bipolar_numbering(&g, order.as_slice()));
        }
        if let Some(t) = trident {
            prop_assert!(t.verify(&g).is_ok());
        }
    }

    #[test]
    fn block_trees_are_trees(seed in any::<u64>(), n in 1usize..10, extra in 0usize..5) {
        let g = graph_from(seed, n, extra, true);
        let t = block_tree(&g).unwrap();
        let edges: usize = t.blocks.iter().map(|b| b.edges.len()).sum();
        prop_assert_eq!(edges, g.edge_count());
        for (i, a) in t.blocks.iter().enumerate() {
            for b in &t.blocks[i + 1..] {
                prop_assert!(a.vertices.intersection(&b.vertices).count() <= 1);
            }
        }
        if g.edge_count() > 0 {
            prop_assert_eq!(t.links.len(), t.blocks.len() + t.separating.len() - 1);
        }
    }

    #[test]
    fn stage_plans_cover_the_graph(dims in prop::array::uniform5(0usize..4)) {
        let g = lips_graph(dims);
        let plan = lips_stage_plan(&lips_labeling(&g).unwrap().unwrap());
        prop_assert!(plan.verify(&g).is_ok());
        let cover: BTreeSet<usize> = plan.x1.iter().chain(&plan.y1).copied().collect();
        prop_assert_eq!(cover.len(), g.vertex_count());
        prop_assert_eq!(plan.x1.len() + plan.y1.len(), g.vertex_count());
    }

    #[test]
    fn additive_values_add(values in prop::collection::vec(0i128..50, 1..12), mask in any::<u32>()) {
        let v = AdditiveValuation::from_integers(&values).unwrap();
        let n = values.len();
        let a: VertexSet = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let b: VertexSet = (0..n).filter(|i| mask >> i & 1 == 0).collect();
        prop_assert_eq!(v.sum(&a) + v.sum(&b), v.total());
    }

    #[test]
    fn envy_notions_are_monotone(seed in any::<u64>(), n in 2usize..7) {
        let mut r = rng(seed);
        let g = random_connected(&mut r, n, 1, false);
        let p = random_profile(&mut r, 3, n, 0, 5);
        let all = enumerate_contiguous_allocations(&g, 3, OracleCaps::default()).unwrap();
        let a = &all[seed as usize % all.len()];
        let hidden: VertexSet = (0..n).filter(|_| rand::Rng::gen_bool(&mut r, 0.3)).collect();
        if is_ef(a, &p).unwrap() {
            prop_assert!(is_ef_up_to_set(a, &p, &hidden).unwrap());
        }
        for k in 0..n {
            if is_efk_outer(&g, a, &p, k).unwrap() {
                prop_assert!(is_efk_outer(&g, a, &p, k + 1).unwrap());
            }
        }
        prop_assert!(is_efk_outer(&g, a, &p, n).unwrap());
    }

    #[test]
    fn knife_outputs_are_enumerated(seed in any::<u64>(), dims in prop::array::uniform5(0usize..2)) {
        let g = lips_graph(dims);
        let mut r = rng(seed);
        let p = random_profile(&mut r, 3, g.vertex_count(), 0, 9);
        let run = lips_ef1_three(&g, &p, KnifeOptions::default()).unwrap();
        let all = enumerate_contiguous_allocations(&g, 3, OracleCaps::default()).unwrap();
        prop_assert!(all.contains(&run.allocation));
        prop_assert!(brute_efk(&g, run.allocation.bundles(), &integer_rows(&p), 1));
    }

    #[test]
    fn knife_state_is_consistent(seed in any::<u64>(), m in 1usize..14) {
        let mut r = rng(seed);
        let p = random_profile(&mut r, 3, m, 0, 9);
        let order = tanglefair::Enumeration::new((0..m).collect()).unwrap();
        let r0 = median_lumpy_tie(&order, &p).unwrap().r;
        let opts = KnifeOptions { trace: true, ..KnifeOptions::default() };
        let KnifeOutcome::Allocated(a, s) = a_discrete(&VertexSet::new(), &order, r0, &p, opts).unwrap() else {
            unreachable!()
        };
        let knives = s.knives();
        let parts = [&s.left, &s.middle, &s.right, &knives];
        let mut seen = VertexSet::new();
        for part in parts {
            for &v in part {
                prop_assert!(seen.insert(v));
            }
        }
        prop_assert_eq!(seen.len(), m);
        for part in [&s.middle, &s.right] {
            if let (Some(&lo), Some(&hi)) = (part.first(), part.last()) {
                prop_assert_eq!(hi - lo + 1, part.len());
            }
        }
        prop_assert!(s.ell <= s.r && s.r <= m);
        prop_assert!(is_ef_up_to_set(&a, &p, &s.termination.unwrap().hiding).unwrap());
    }
}
