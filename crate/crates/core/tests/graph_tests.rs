mod common;

use common::*;
use tanglefair::graph::*;
use tanglefair::tangle::named::{lips, lips_graph, y_star};
use tanglefair::Multigraph;

fn star() -> Multigraph {
    Multigraph::from_edges(&[("o", "x"), ("o", "y"), ("o", "z")])
}

/// Triangle `abc` with one pendant vertex at each corner.
fn net() -> Multigraph {
    Multigraph::from_edges(&[("a", "b"), ("b", "c"), ("c", "a"), ("a", "x"), ("b", "y"), ("c", "z")])
}

#[test]
fn smooth_path_is_an_edge() {
    let s = smooth(&Multigraph::path(5));
    assert_eq!((s.vertex_count(), s.edge_count()), (2, 1));
}

#[test]
fn smooth_lips_class_gives_three_branch_vertices() {
    let s = smooth(&lips_graph([1, 2, 0, 3, 1]));
    assert_eq!((s.vertex_count(), s.edge_count()), (3, 5));
    let mut deg = s.degrees();
    deg.sort_unstable();
    assert_eq!(deg, vec![3, 3, 4]);
    assert!(skeleton_isomorphic(&s, &lips()).unwrap());
}

#[test]
fn smooth_cycle_keeps_one_vertex_with_a_loop() {
    let s = smooth(&Multigraph::cycle(4));
    assert_eq!(s.vertex_count(), 1);
    assert_eq!(s.edge_count(), 1);
    assert!(s.edges()[0].is_loop());
    assert_eq!(s.vertex_name(0), "v1");
}

#[test]
fn smooth_paths_record_interiors() {
    let g = Multigraph::path(4);
    let sk = smooth_with_paths(&g);
    assert_eq!(sk.branch.len(), 2);
    let path: Vec<&str> = sk.path_of(0).iter().map(|&v| g.vertex_name(v)).collect();
    assert_eq!(path, ["v2", "v3"]);
}

#[test]
fn subdivide_loop_twice_gives_triangle() {
    let g = Multigraph::from_edges(&[("o", "o")]);
    let h = subdivide(&g, 0, 2).unwrap();
    assert_eq!((h.vertex_count(), h.edge_count()), (3, 3));
    assert!(h.is_simple());
    assert!(h.degrees().iter().all(|&d| d == 2));
}

#[test]
fn subdivide_every_lips_edge_once() {
    let mut h = lips();
    for e in 0..5 {
        h = subdivide(&h, e, 1).unwrap();
    }
    assert_eq!(h.vertex_count(), 8);
    assert!(is_subdivision_of(&h, &lips()).unwrap());
}

#[test]
fn subdivide_unknown_edge_fails() {
    assert_eq!(subdivide(&Multigraph::path(2), 7, 1), Err(GraphError::UnknownEdge(7)));
    assert_eq!(subdivide(&Multigraph::path(2), 0, 0).unwrap().vertex_count(), 2);
}

#[test]
fn subdivision_relation() {
    assert!(is_subdivision_of(&Multigraph::path(5), &Multigraph::path(2)).unwrap());
    assert!(!is_subdivision_of(&star(), &lips()).unwrap());
    assert!(!is_subdivision_of(&Multigraph::path(2), &star()).unwrap());
    // Interior counts must dominate edge by edge.
    assert!(is_subdivision_of(&lips_graph([2, 1, 1, 1, 1]), &lips_graph([1, 1, 1, 1, 1])).unwrap());
    assert!(!is_subdivision_of(&lips_graph([0, 0, 0, 0, 1]), &lips_graph([1, 1, 1, 1, 1])).unwrap());
}

#[test]
fn block_tree_of_path() {
    let t = block_tree(&Multigraph::path(4)).unwrap();
    assert_eq!(t.blocks.len(), 3);
    assert_eq!(t.separating, vec![1, 2]);
    assert!(t.is_path());
    let (order, cuts) = t.path_order().unwrap();
    assert_eq!(order.len(), 3);
    assert_eq!(cuts.len(), 2);
}

#[test]
fn block_tree_of_star_is_not_a_path() {
    let t = block_tree(&star()).unwrap();
    assert_eq!(t.blocks.len(), 3);
    assert!(!t.is_path());
    assert!(t.path_order().is_none());
    assert!(!is_block_path(&star()).unwrap());
}

#[test]
fn lips_class_is_one_block() {
    let t = block_tree(&lips_graph([1, 1, 1, 1, 1])).unwrap();
    assert_eq!(t.blocks.len(), 1);
    assert!(t.separating.is_empty());
}

#[test]
fn loops_and_parallel_edges_in_blocks() {
    let g = Multigraph::from_edges(&[("u", "v"), ("u", "v"), ("v", "v"), ("v", "w")]);
    let t = block_tree(&g).unwrap();
    assert_eq!(t.blocks.len(), 3);
    let sizes: Vec<usize> = t.blocks.iter().map(|b| b.edges.len()).collect();
    assert!(sizes.contains(&2));
    assert_eq!(t.separating, vec![1]);
    assert!(!t.is_path());
}

#[test]
fn block_tree_rejects_disconnected() {
    let g = Multigraph::from_edges(&[("a", "b"), ("c", "d")]);
    assert_eq!(block_tree(&g), Err(GraphError::Disconnected));
}

#[test]
fn bipolar_numbering_examples() {
    assert!(bipolar_numbering(&star()).unwrap().is_none());
    let p = bipolar_numbering(&Multigraph::path(5)).unwrap().unwrap();
    assert_eq!(p.len(), 5);
    let c = Multigraph::cycle(6);
    let q = bipolar_numbering(&c).unwrap().unwrap();
    assert!(is_bipolar_numbering(&c, q.as_slice()));
}

#[test]
fn bipolar_predicate_rejects_bad_orders() {
    let g = Multigraph::path(3);
    assert!(is_bipolar_numbering(&g, &[0, 1, 2]));
    assert!(!is_bipolar_numbering(&g, &[0, 2, 1]));
    assert!(!is_bipolar_numbering(&g, &[0, 1]));
}

#[test]
fn trident_examples() {
    assert!(find_trident(&Multigraph::path(6)).unwrap().is_none());
    let t = find_trident(&star()).unwrap().unwrap();
    assert_eq!(t.kind, TridentKind::TypeI);
    assert_eq!(t.core, set(&[0]));
    t.verify(&star()).unwrap();

    let g = net();
    let t = find_trident(&g).unwrap().unwrap();
    assert_eq!(t.kind, TridentKind::TypeII);
    t.verify(&g).unwrap();
    let contacts: std::collections::BTreeSet<_> = t.contacts.iter().copied().collect();
    assert_eq!(contacts.len(), 3);
}

#[test]
fn trident_absent_on_blocks_in_a_row() {
    let g = Multigraph::from_edges(&[("a", "b"), ("b", "c"), ("c", "a"), ("c", "d"), ("d", "e"), ("e", "c")]);
    assert!(is_block_path(&g).unwrap());
    assert!(find_trident(&g).unwrap().is_none());
    assert!(bipolar_numbering(&g).unwrap().is_some());
}

#[test]
fn lips_labeling_once_subdivided() {
    let g = lips_graph([1, 1, 1, 1, 1]);
    let lab = lips_labeling(&g).unwrap().unwrap();
    assert_eq!(g.vertex_name(lab.a), "a");
    assert_eq!(g.vertex_name(lab.b), "b");
    assert_eq!(g.vertex_name(lab.c), "c");
    for path in [&lab.top_left, &lab.middle_left, &lab.top_right, &lab.middle_right, &lab.bottom] {
        assert_eq!(path.len(), 1);
    }
    // The path holding the smaller interior name is the top one.
    assert_eq!(g.vertex_name(lab.top_left[0]), "p1");
    assert_eq!(g.vertex_name(lab.middle_left[0]), "q1");
    assert_eq!(g.vertex_name(lab.top_right[0]), "s1");
    assert_eq!(lab.a1, lab.middle_left[0]);
    assert_eq!(lab.b1, lab.top_left[0]);
    assert_eq!(lab.b2, lab.top_right[0]);
    assert_eq!(lab.c1, lab.middle_right[0]);
}

#[test]
fn lips_labeling_absent_off_class() {
    assert!(lips_labeling(&Multigraph::path(4)).unwrap().is_none());
    assert!(lips_labeling(&y_star()).unwrap().is_none());
    assert!(lips_labeling(&Multigraph::cycle(5)).unwrap().is_none());
}

#[test]
fn lips_labeling_degenerate_markers() {
    let g = lips_graph([0, 0, 0, 0, 1]);
    let lab = lips_labeling(&g).unwrap().unwrap();
    assert_eq!(lab.b1, lab.a);
    assert_eq!(lab.a1, lab.b);
    assert_eq!(lab.b2, lab.c);
    assert_eq!(lab.c1, lab.b);
    assert_eq!(lab.bottom.len(), 1);
    lips_stage_plan(&lab).verify(&g).unwrap();
}

#[test]
fn lips_stage_plan_on_eight_vertices() {
    let g = lips_graph([1, 1, 1, 1, 1]);
    let plan = lips_stage_plan(&lips_labeling(&g).unwrap().unwrap());
    assert_eq!(plan.x1.len(), 3);
    assert_eq!(plan.y1.len(), 5);
    let n = |v: &Vec<usize>| v.iter().map(|&x| g.vertex_name(x).to_string()).collect::<Vec<_>>();
    assert_eq!(n(&plan.x1), ["p1", "a", "w1"]);
    assert_eq!(n(&plan.y1), ["c", "s1", "t1", "b", "q1"]);
    assert_eq!(n(&plan.x2), ["q1"]);
    assert_eq!(n(&plan.y2), ["b", "t1", "s1", "c"]);
    let whole: Vec<usize> = plan.x1.iter().chain(&plan.y1).copied().collect();
    assert!(is_bipolar_numbering(&g, &whole));
    plan.verify(&g).unwrap();
    assert_eq!(plan.x3.last(), plan.y2.iter().find(|&&v| g.vertex_name(v) == "t1"));
    assert_eq!(g.vertex_name(*plan.x3_alt.last().unwrap()), "s1");
}

#[test]
fn lips_stage_plans_verify_on_many_shapes() {
    for code in 0..243usize {
        let mut dims = [0usize; 5];
        let mut c = code;
        for d in &mut dims {
            *d = c % 3;
            c /= 3;
        }
        let g = lips_graph(dims);
        let plan = lips_stage_plan(&lips_labeling(&g).unwrap().unwrap());
        plan.verify(&g).unwrap_or_else(|e| panic!("{dims:?}: {e}"));
        assert_eq!(plan.x1.len() + plan.y1.len(), g.vertex_count());
    }
}

#[test]
fn hamiltonian_examples() {
    assert!(is_hamiltonian(&Multigraph::path(7)).unwrap());
    assert!(is_hamiltonian(&lips_graph([1, 0, 1, 0, 1])).unwrap());
    assert!(is_hamiltonian(&lips_graph([3, 0, 0, 2, 4])).unwrap());
    assert!(!is_hamiltonian(&lips_graph([1, 1, 1, 1, 1])).unwrap());
    assert!(!is_hamiltonian(&star()).unwrap());
    let path = hamiltonian_path(&lips_graph([1, 0, 1, 0, 1])).unwrap().unwrap();
    assert_eq!(path.len(), 6);
}

#[test]
fn hamiltonian_size_limit() {
    let g = Multigraph::path(HAMILTONIAN_LIMIT + 1);
    assert!(matches!(is_hamiltonian(&g), Err(GraphError::SizeLimit { .. })));
}

#[test]
fn enumeration_segments() {
    let e = Enumeration::new(vec![4, 2, 7, 1]).unwrap();
    assert_eq!(e.at(1), 4);
    assert_eq!(e.segment(2, 3), &[2, 7]);
    assert!(e.segment(3, 2).is_empty());
    assert_eq!(e.left_of(3), &[4, 2]);
    assert_eq!(e.right_of(3), &[1]);
    assert_eq!(e.position(7), Some(3));
    assert!(Enumeration::new(vec![1, 1]).is_err());
    assert_eq!(e.reversed().as_slice(), &[1, 7, 2, 4]);
}

#[test]
fn random_block_paths_have_bipolar_numberings() {
    let mut r = rng(11);
    for _ in 0..200 {
        let g = random_block_path(&mut r, 12);
        assert!(is_block_path(&g).unwrap());
        let p = bipolar_numbering(&g).unwrap().expect("block path");
        assert!(is_bipolar_numbering(&g, p.as_slice()));
        assert!(find_trident(&g).unwrap().is_none());
    }
}
