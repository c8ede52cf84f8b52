//! Skeletons of the tangles that recur in the analysis, plus a builder for
//! subdivided lips graphs.

use crate::graph::Multigraph;

use super::StringableKind;

fn build(name: &str, edges: &[(&str, &str)]) -> Multigraph {
    let mut g = Multigraph::from_edges(edges);
    g.set_name(name);
    g
}

pub fn interval() -> Multigraph {
    build("interval", &[("u", "v")])
}

pub fn circle() -> Multigraph {
    build("circle", &[("o", "o")])
}

pub fn lollipop() -> Multigraph {
    build("lollipop", &[("u", "v"), ("v", "v")])
}

pub fn figure_eight() -> Multigraph {
    build("figure8", &[("o", "o"), ("o", "o")])
}

pub fn handcuffs() -> Multigraph {
    build("handcuffs", &[("u", "u"), ("u", "v"), ("v", "v")])
}

pub fn theta() -> Multigraph {
    build("theta", &[("u", "v"), ("u", "v"), ("u", "v")])
}

/// The six basic stringable skeletons.
pub fn basic_stringables() -> Vec<(StringableKind, Multigraph)> {
    vec![
        (StringableKind::Interval, interval()),
        (StringableKind::Circle, circle()),
        (StringableKind::Lollipop, lollipop()),
        (StringableKind::Figure8, figure_eight()),
        (StringableKind::Handcuffs, handcuffs()),
        (StringableKind::Theta, theta()),
    ]
}

/// Three legs on a common center.
pub fn y_star() -> Multigraph {
    build("y", &[("o", "x"), ("o", "y"), ("o", "z")])
}

/// A lens between `a` and `d` with a stem hanging off each of them.
pub fn friendly_diamond() -> Multigraph {
    build("friendly-diamond", &[("a", "d"), ("a", "d"), ("a", "x"), ("d", "y")])
}

/// Triangle `abc` with `d` joined to `a` and `b`, and stems at `c` and `d`.
pub fn delta_diamond() -> Multigraph {
    build(
        "delta-diamond",
        &[("a", "b"), ("b", "c"), ("a", "c"), ("a", "d"), ("b", "d"), ("c", "x"), ("d", "y")],
    )
}

/// Two lenses `a`–`b` and `b`–`c` plus the lower lip `a`–`c`.
pub fn lips() -> Multigraph {
    build("lips", &[("a", "b"), ("a", "b"), ("b", "c"), ("b", "c"), ("a", "c")])
}

/// Subdivided lips. `interior` gives the number of interior vertices on the
/// two `a`–`b` paths, the two `b`–`c` paths and the `a`–`c` path, in that
/// order.
pub fn lips_graph(interior: [usize; 5]) -> Multigraph {
    let mut g = Multigraph::named(format!("lips-{}", interior.map(|c| c.to_string()).join("-")));
    let ends = [("a", "b", "p"), ("a", "b", "q"), ("b", "c", "s"), ("b", "c", "t"), ("a", "c", "w")];
    let (a, b, c) = (g.ensure_vertex("a"), g.ensure_vertex("b"), g.ensure_vertex("c"));
    let id = |name: &str| match name {
        "a" => a,
        "b" => b,
        _ => c,
    };
    for ((from, to, stem), &count) in ends.iter().zip(&interior) {
        let mut prev = id(from);
        for i in 1..=count {
            let v = g.ensure_vertex(&format!("{stem}{i}"));
            g.add_edge(prev, v);
            prev = v;
        }
        g.add_edge(prev, id(to));
    }
    g
}
