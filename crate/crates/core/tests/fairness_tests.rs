mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use common::*;
use num_traits::Zero;
use tanglefair::fairness::*;
use tanglefair::tangle::named::{lips_graph, y_star};
use tanglefair::valuation::*;
use tanglefair::{Enumeration, Multigraph, Valuation, ValuationProfile, VertexSet};

fn alloc(bundles: &[&[usize]], n: usize) -> Allocation {
    Allocation::new(bundles.iter().map(|b| set(b)).collect(), n).unwrap()
}

#[test]
fn additive_values() {
    let v = AdditiveValuation::from_integers(&[1, 2]).unwrap();
    assert_eq!(v.sum(&set(&[0, 1])), int(3));
    assert_eq!(Valuation::from(v.clone()).eval(&VertexSet::new()), int(0));
    assert!(AdditiveValuation::from_integers(&[1, -1]).is_err());
    let out = Valuation::from(v).value(&set(&[5]));
    assert!(matches!(out, Err(ValuationError::OutsideUniverse { vertex: 5, .. })));
}

#[test]
fn parse_values_exactly() {
    assert_eq!(parse_value("7").unwrap(), int(7));
    assert_eq!(parse_value("0.25").unwrap(), frac(1, 4));
    assert_eq!(parse_value("2/6").unwrap(), frac(1, 3));
    assert_eq!(parse_value("-1.5").unwrap(), frac(-3, 2));
    assert!(parse_value("1/0").is_err());
    assert!(parse_value("abc").is_err());
    assert_eq!(parse_value("0.1").unwrap() + parse_value("0.2").unwrap(), parse_value("0.3").unwrap());
}

#[test]
fn prefix_sums_match_naive_sums() {
    let mut r = rng(3);
    for _ in 0..50 {
        let n = 1 + (rand::Rng::gen_range(&mut r, 0..9usize));
        let vals = random_values(&mut r, n, 0, 20);
        let v = AdditiveValuation::from_integers(&vals).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut order[..], &mut r);
        let e = Enumeration::new(order.clone()).unwrap();
        let p = PrefixSums::new(&v, &e);
        for s in 1..=n {
            for t in s..=n {
                let naive: i128 = order[s - 1..t].iter().map(|&x| vals[x]).sum();
                assert_eq!(p.segment(s, t), int(naive));
            }
            assert!(p.segment(s, s - 1).is_zero());
        }
    }
}

#[test]
fn monotone_checks() {
    let add = Valuation::from(AdditiveValuation::from_integers(&[3, 0, 5, 1]).unwrap());
    assert!(check_monotone(&add, 100, 1).is_clean());

    let square = Valuation::from(ValuationOracle::new(20, true, |s| int((s.len() * s.len()) as i128)));
    let report = check_monotone(&square, 500, 9);
    assert!(report.is_clean());
    assert!(!report.exhaustive);
    assert_eq!(report, check_monotone(&square, 500, 9));

    let negative = Valuation::from(ValuationOracle::new(6, false, |s| int(0) - int(s.len() as i128)));
    let report = check_monotone(&negative, 10, 0);
    assert!(report.exhaustive);
    assert!(report.violations.iter().any(|v| v.kind == ViolationKind::Negative));
    assert!(report.violations.iter().any(|v| v.kind == ViolationKind::Decreasing));
}

#[test]
fn contiguity() {
    let g = Multigraph::path(3);
    assert!(!is_contiguous(&g, &set(&[0, 2])));
    assert!(is_contiguous(&g, &set(&[])));
    assert!(is_contiguous(&g, &set(&[2])));
    let l = lips_graph([2, 1, 1, 1, 1]);
    let path = set(&[id(&l, "a"), id(&l, "p1"), id(&l, "p2"), id(&l, "b")]);
    assert!(is_contiguous(&l, &path));
}

#[test]
fn allocation_must_partition() {
    assert!(Allocation::new(vec![set(&[0]), set(&[0, 1])], 2).is_err());
    assert!(Allocation::new(vec![set(&[0])], 2).is_err());
    let a = alloc(&[&[1], &[], &[0]], 2);
    assert!(a.has_empty_bundle());
    assert_eq!(a.owner(0), Some(2));
}

#[test]
fn envy_freeness_up_to_a_set() {
    let p = ValuationProfile::common(AdditiveValuation::from_integers(&[2, 1]).unwrap(), 2).unwrap();
    let a = alloc(&[&[0], &[1]], 2);
    let b = alloc(&[&[1], &[0]], 2);
    assert!(!is_ef(&b, &p).unwrap());
    assert!(is_ef_up_to_set(&b, &p, &set(&[0])).unwrap());
    assert!(!is_ef(&a, &p).unwrap());
    let even = ValuationProfile::common(AdditiveValuation::from_integers(&[1, 1]).unwrap(), 2).unwrap();
    assert!(is_ef(&a, &even).unwrap());
}

#[test]
fn outer_envy_examples() {
    let g = Multigraph::path(3);
    let p = uniform(2, 3);
    let a = alloc(&[&[0, 1], &[2]], 3);
    let report = envy_report(&g, &a, &p, 1).unwrap();
    assert!(report.is_efk_outer());
    let pair = report.pair(1, 0);
    assert_eq!(pair.amount, int(1));
    assert_eq!(pair.witness.as_ref().unwrap().len(), 1);
    assert!(is_efk_outer(&g, &a, &p, 3).unwrap());

    // The middle vertex is not outer: hiding it splits the bundle.
    let long = Multigraph::path(5);
    let vals = AdditiveValuation::from_integers(&[1, 1, 5, 1, 1]).unwrap();
    let q = ValuationProfile::common(vals, 2).unwrap();
    let a = alloc(&[&[0, 1, 2, 3], &[4]], 5);
    assert!(!is_efk_outer(&long, &a, &q, 1).unwrap());
    assert!(is_efk_outer(&long, &a, &q, 3).unwrap());

    let split = alloc(&[&[0, 2], &[1]], 3);
    assert!(matches!(envy_report(&g, &split, &p, 1), Err(FairnessError::NotContiguous(0))));
}

#[test]
fn enumeration_counts() {
    let caps = OracleCaps::default();
    let two = enumerate_contiguous_allocations(&Multigraph::path(2), 2, caps).unwrap();
    assert_eq!(two.len(), 4);
    assert_eq!(enumerate_contiguous_allocations(&y_star(), 1, caps).unwrap().len(), 1);
    let tri = enumerate_contiguous_allocations(&Multigraph::cycle(3), 2, caps).unwrap();
    assert_eq!(tri.iter().filter(|a| !a.has_empty_bundle()).count(), 6);
    for m in 2..=9 {
        let all = enumerate_contiguous_allocations(&Multigraph::path(m), 2, caps).unwrap();
        assert_eq!(all.iter().filter(|a| !a.has_empty_bundle()).count(), 2 * (m - 1));
    }
}

#[test]
fn enumeration_matches_brute_force() {
    let mut r = rng(5);
    for trial in 0..60 {
        let n = 1 + trial % 7;
        let g = random_connected(&mut r, n, trial % 3, trial % 4 == 0);
        for agents in 1..=3 {
            let mut ours = BTreeSet::new();
            for_each_contiguous_allocation(&g, agents, OracleCaps::default(), |a| {
                assert!(ours.insert(allocation_sets(a)), "duplicate allocation");
                ControlFlow::Continue(())
            })
            .unwrap();
            let brute: BTreeSet<_> = brute_allocations(&g, agents).into_iter().collect();
            assert_eq!(ours, brute);
        }
    }
}

#[test]
fn envy_checker_matches_brute_force() {
    let mut r = rng(6);
    for trial in 0..40 {
        let g = random_connected(&mut r, 2 + trial % 5, trial % 3, false);
        let p = random_profile(&mut r, 3, g.vertex_count(), 0, 6);
        let rows = integer_rows(&p);
        for a in enumerate_contiguous_allocations(&g, 3, OracleCaps::default()).unwrap() {
            for k in 0..=2 {
                assert_eq!(
                    is_efk_outer(&g, &a, &p, k).unwrap(),
                    brute_efk(&g, a.bundles(), &rows, k)
                );
            }
        }
    }
}

#[test]
fn oracle_matches_brute_force() {
    let mut r = rng(7);
    for trial in 0..80 {
        let g = random_connected(&mut r, 2 + trial % 6, trial % 2, false);
        let agents = 2 + trial % 2;
        let p = if trial % 3 == 0 {
            let v = AdditiveValuation::from_integers(&random_values(&mut r, g.vertex_count(), 0, 4)).unwrap();
            ValuationProfile::common(v, agents).unwrap()
        } else {
            random_profile(&mut r, agents, g.vertex_count(), 0, 4)
        };
        let rows = integer_rows(&p);
        let found = exists_efk_outer(&g, &p, 1, OracleCaps::default()).unwrap();
        assert_eq!(!found.is_absent(), brute_exists_efk(&g, &rows, 1), "trial {trial}");
        if let Some(a) = found.allocation() {
            assert!(brute_efk(&g, a.bundles(), &rows, 1));
        }
    }
}

#[test]
fn oracle_examples() {
    let caps = OracleCaps::default();
    let mut r = rng(8);
    for m in 1..=7 {
        let p = random_profile(&mut r, 3, m, 0, 9);
        assert!(!exists_efk_outer(&Multigraph::path(m), &p, 1, caps).unwrap().is_absent());
    }
    let one = ValuationProfile::additive(vec![AdditiveValuation::from_integers(&[4, 1, 1, 1]).unwrap()]).unwrap();
    let out = exists_efk_outer(&y_star(), &one, 1, caps).unwrap();
    assert_eq!(out.allocation().unwrap().bundle(0).len(), 4);
}

#[test]
fn y_star_instance_has_no_outer_ef1_allocation() {
    // Two valued vertices on each leg of a subdivided star.
    let g = Multigraph::from_edges(&[
        ("o", "x1"), ("x1", "x2"), ("x2", "x"),
        ("o", "y1"), ("y1", "y2"), ("y2", "y"),
        ("o", "z1"), ("z1", "z2"), ("z2", "z"),
    ]);
    let vals: Vec<i128> = (0..g.vertex_count())
        .map(|v| i128::from(g.vertex_name(v).len() == 2))
        .collect();
    let p = ValuationProfile::common(AdditiveValuation::from_integers(&vals).unwrap(), 2).unwrap();
    let out = exists_efk_outer(&g, &p, 1, OracleCaps::default()).unwrap();
    assert!(out.is_absent());
    assert!(!brute_exists_efk(&g, &integer_rows(&p), 1));
    for a in enumerate_contiguous_allocations(&g, 2, OracleCaps::default()).unwrap() {
        assert!(!is_efk_outer(&g, &a, &p, 1).unwrap());
    }
}

#[test]
fn oracle_caps() {
    let caps = OracleCaps { max_vertices: 4, max_agents: 2 };
    let p = uniform(2, 5);
    assert!(matches!(
        exists_efk_outer(&Multigraph::path(5), &p, 1, caps),
        Err(FairnessError::CapExceeded { .. })
    ));
    let p = uniform(3, 3);
    assert!(matches!(
        exists_efk_outer(&Multigraph::path(3), &p, 1, caps),
        Err(FairnessError::CapExceeded { .. })
    ));
}
