mod common;

use common::*;
use tanglefair::fairness::envy_report;
use tanglefair::io::*;
use tanglefair::tangle::named::lips_graph;
use tanglefair::valuation::{frac, int};
use tanglefair::Multigraph;

#[test]
fn graph_round_trip() {
    let text = "graph demo\n# a comment\na b\nb c # trailing\nc c\nlonely\n";
    let g = parse_graph(text).unwrap();
    assert_eq!(g.name(), "demo");
    assert_eq!((g.vertex_count(), g.edge_count()), (4, 3));
    assert!(g.has_loops());
    let back = parse_graph(&write_graph(&g)).unwrap();
    assert_eq!(back.name(), "demo");
    let sorted = |g: &Multigraph| {
        let mut v = g.names().to_vec();
        v.sort();
        v
    };
    assert_eq!(sorted(&back), sorted(&g));
    assert_eq!(back.edge_count(), 3);
}

#[test]
fn graph_header_only_on_first_line() {
    let g = parse_graph("a b\ngraph x\n").unwrap();
    assert_eq!(g.name(), "");
    assert!(g.vertex_by_name("graph").is_some());
}

#[test]
fn graph_syntax_errors() {
    assert_eq!(
        parse_graph("a b c\n"),
        Err(IoError::Syntax { line: 1, message: "expected one or two vertex names, found 3".into() })
    );
}

#[test]
fn valuation_round_trip() {
    let g = Multigraph::path(3);
    let text = "agents 2\n1 v1 3\n2 v2 0.5\n* v3 1/3\n";
    let p = parse_valuations(text, &g, None).unwrap();
    assert_eq!(p.len(), 2);
    let a = p.agent(0).as_additive().unwrap();
    let b = p.agent(1).as_additive().unwrap();
    assert_eq!(a.values(), &[int(3), int(0), frac(1, 3)]);
    assert_eq!(b.values(), &[int(0), frac(1, 2), frac(1, 3)]);
    let again = parse_valuations(&write_valuations(&g, &[a, b]), &g, None).unwrap();
    assert_eq!(again.agent(0).as_additive(), Some(a));
    assert_eq!(again.agent(1).as_additive(), Some(b));
}

#[test]
fn common_valuations_use_star_lines() {
    let g = Multigraph::path(2);
    let p = parse_valuations("* v1 2\n", &g, Some(3)).unwrap();
    assert_eq!(p.len(), 3);
    let a = p.agent(0).as_additive().unwrap();
    let text = write_valuations(&g, &[a, a, a]);
    assert!(text.contains("* v1 2"));
    assert!(!text.contains("v2"));
}

#[test]
fn valuation_errors() {
    let g = Multigraph::path(2);
    assert!(matches!(parse_valuations("1 zz 1\n", &g, None), Err(IoError::UnknownVertex { line: 1, .. })));
    assert!(matches!(parse_valuations("1 v1 -2\n", &g, None), Err(IoError::Syntax { .. })));
    assert!(matches!(parse_valuations("agents 1\n2 v1 1\n", &g, None), Err(IoError::Syntax { line: 2, .. })));
    assert!(matches!(parse_valuations("0 v1 1\n", &g, None), Err(IoError::Syntax { .. })));
    assert!(matches!(parse_valuations("1 v1 x\n", &g, None), Err(IoError::Syntax { .. })));
}

#[test]
fn allocation_round_trip_with_envy() {
    let g = lips_graph([1, 0, 0, 0, 0]);
    let text = "1 a p1\n2 b\n3 c\n";
    let a = parse_allocation(text, &g).unwrap();
    assert_eq!(a.bundle(0), &set(&[id(&g, "a"), id(&g, "p1")]));
    let p = uniform(3, g.vertex_count());
    let report = envy_report(&g, &a, &p, 1).unwrap();
    let out = write_allocation(&g, &a, Some(&report));
    assert!(out.starts_with("1 a p1\n2 b\n3 c\n"));
    assert!(out.contains("# envy (k = 1)"));
    assert!(out.contains("# 2 -> 1: 1 cleared by hiding"));
    assert_eq!(parse_allocation(&out, &g).unwrap(), a);
}

#[test]
fn allocation_errors() {
    let g = Multigraph::path(2);
    assert!(parse_allocation("1 v1\n1 v2\n", &g).is_err());
    assert!(parse_allocation("1 v1\n", &g).is_err());
    assert!(parse_allocation("1 v1 v2\n3\n", &g).is_ok());
    assert!(matches!(parse_allocation("x v1\n", &g), Err(IoError::Syntax { .. })));
}

#[test]
fn empty_bundles_are_flagged() {
    let g = Multigraph::path(2);
    let a = parse_allocation("1 v1 v2\n2\n", &g).unwrap();
    let out = write_allocation(&g, &a, None);
    assert_eq!(out, "1 v1 v2\n2\n# agent 2 receives an empty bundle\n");
    assert_eq!(parse_allocation(&out, &g).unwrap(), a);
}
