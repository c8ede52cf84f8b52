//! Plain-text formats for graphs, valuations and allocations.
//!
//! All formats are line based. `#` starts a comment. Vertices are referred to
//! by name and agents by 1-based index.
//!
//! * Graph: an optional `graph NAME` header as the first line, then `u v`
//!   adds an edge (a loop when `u = v`) and a lone `u` declares a vertex.
//! * Valuation: an optional `agents N` header, then `AGENT VERTEX VALUE`
//!   lines where `AGENT` is an index or `*` for every agent. Values are
//!   integers, decimals or ratios `a/b`. Unlisted vertices are worth 0.
//! * Allocation: `AGENT v1 v2 …`, one line per agent.

use std::fmt::Write as _;

use thiserror::Error;

use crate::fairness::{Allocation, EnvyReport, FairnessError};
use crate::graph::{Multigraph, VertexSet};
use crate::valuation::{parse_value, AdditiveValuation, Value, ValuationError, ValuationProfile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown vertex {name:?}")]
    UnknownVertex { line: usize, name: String },
    #[error("{0}")]
    Valuation(#[from] ValuationError),
    #[error("{0}")]
    Fairness(#[from] FairnessError),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((i + 1, tokens))
    })
}

pub fn parse_graph(text: &str) -> Result<Multigraph, IoError> {
    let mut g = Multigraph::new();
    for (i, (line, tokens)) in content_lines(text).enumerate() {
        match tokens.as_slice() {
            ["graph", name] if i == 0 => g.set_name(*name),
            [v] => {
                g.ensure_vertex(v);
            }
            [u, v] => {
                let (u, v) = (g.ensure_vertex(u), g.ensure_vertex(v));
                g.add_edge(u, v);
            }
            _ => {
                return Err(IoError::Syntax {
                    line,
                    message: format!("expected one or two vertex names, found {}", tokens.len()),
                })
            }
        }
    }
    Ok(g)
}

/// Isolated vertices first, then edges in id order.
pub fn write_graph(g: &Multigraph) -> String {
    let mut out = String::new();
    if !g.name().is_empty() {
        let _ = writeln!(out, "graph {}", g.name().replace(char::is_whitespace, "_"));
    }
    for v in g.vertices().filter(|&v| g.degree(v) == 0) {
        let _ = writeln!(out, "{}", g.vertex_name(v));
    }
    for e in g.edges() {
        let _ = writeln!(out, "{} {}", g.vertex_name(e.u), g.vertex_name(e.v));
    }
    out
}

/// Parses an additive profile over the vertices of `g`. `agents` overrides
/// the header; without either the count is the largest index mentioned.
pub fn parse_valuations(text: &str, g: &Multigraph, agents: Option<usize>) -> Result<ValuationProfile, IoError> {
    enum Who {
        All,
        One(usize),
    }
    let mut declared = None;
    let mut entries = Vec::new();
    for (line, tokens) in content_lines(text) {
        match tokens.as_slice() {
            ["agents", n] => {
                let n: usize = n.parse().ok().filter(|&n| n > 0).ok_or_else(|| IoError::Syntax {
                    line,
                    message: format!("bad agent count {n:?}"),
                })?;
                declared = Some(n);
            }
            [who, vertex, value] => {
                let who = if *who == "*" {
                    Who::All
                } else {
                    let i: usize = who.parse().ok().filter(|&i| i > 0).ok_or_else(|| IoError::Syntax {
                        line,
                        message: format!("bad agent {who:?}"),
                    })?;
                    Who::One(i - 1)
                };
                let v = g.vertex_by_name(vertex).ok_or_else(|| IoError::UnknownVertex {
                    line,
                    name: vertex.to_string(),
                })?;
                let value = parse_value(value).map_err(|e| IoError::Syntax {
                    line,
                    message: e.to_string(),
                })?;
                if value < Value::from_integer(0) {
                    return Err(IoError::Syntax {
                        line,
                        message: format!("negative value {value}"),
                    });
                }
                entries.push((line, who, v, value));
            }
            _ => {
                return Err(IoError::Syntax {
                    line,
                    message: "expected `AGENT VERTEX VALUE` or `agents N`".into(),
                })
            }
        }
    }
    let largest = entries
        .iter()
        .filter_map(|(_, w, _, _)| match w {
            Who::One(i) => Some(i + 1),
            Who::All => None,
        })
        .max();
    let n = agents.or(declared).or(largest).unwrap_or(1);
    let mut values = vec![vec![Value::from_integer(0); g.vertex_count()]; n];
    for (line, who, v, value) in entries {
        match who {
            Who::All => values.iter_mut().for_each(|row| row[v] = value),
            Who::One(i) if i < n => values[i][v] = value,
            Who::One(i) => {
                return Err(IoError::Syntax {
                    line,
                    message: format!("agent {} beyond the {n} agents declared", i + 1),
                })
            }
        }
    }
    let agents = values
        .into_iter()
        .map(AdditiveValuation::new)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ValuationProfile::additive(agents)?)
}

/// Writes an additive profile, using `*` lines when all agents agree.
pub fn write_valuations(g: &Multigraph, values: &[&AdditiveValuation]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "agents {}", values.len());
    let common = values.windows(2).all(|w| w[0] == w[1]);
    for v in g.vertices() {
        if common {
            let x = values.first().map(|a| a.of(v)).unwrap_or_default();
            if x != Value::from_integer(0) {
                let _ = writeln!(out, "* {} {}", g.vertex_name(v), x);
            }
            continue;
        }
        for (i, a) in values.iter().enumerate() {
            if a.of(v) != Value::from_integer(0) {
                let _ = writeln!(out, "{} {} {}", i + 1, g.vertex_name(v), a.of(v));
            }
        }
    }
    out
}

pub fn parse_allocation(text: &str, g: &Multigraph) -> Result<Allocation, IoError> {
    let mut bundles: Vec<Option<VertexSet>> = Vec::new();
    for (line, tokens) in content_lines(text) {
        let agent: usize = tokens[0].parse().ok().filter(|&i| i > 0).ok_or_else(|| IoError::Syntax {
            line,
            message: format!("bad agent {:?}", tokens[0]),
        })?;
        if bundles.len() < agent {
            bundles.resize(agent, None);
        }
        if bundles[agent - 1].is_some() {
            return Err(IoError::Syntax {
                line,
                message: format!("agent {agent} listed twice"),
            });
        }
        let mut set = VertexSet::new();
        for name in &tokens[1..] {
            let v = g.vertex_by_name(name).ok_or_else(|| IoError::UnknownVertex {
                line,
                name: name.to_string(),
            })?;
            set.insert(v);
        }
        bundles[agent - 1] = Some(set);
    }
    let bundles = bundles.into_iter().map(Option::unwrap_or_default).collect();
    Ok(Allocation::new(bundles, g.vertex_count())?)
}

/// One line per agent, vertices in id order, followed by an optional
/// commented envy summary.
pub fn write_allocation(g: &Multigraph, a: &Allocation, envy: Option<&EnvyReport>) -> String {
    let mut out = String::new();
    for (i, bundle) in a.bundles().iter().enumerate() {
        let names: Vec<&str> = bundle.iter().map(|&v| g.vertex_name(v)).collect();
        if names.is_empty() {
            let _ = writeln!(out, "{}", i + 1);
        } else {
            let _ = writeln!(out, "{} {}", i + 1, names.join(" "));
        }
    }
    for (i, _) in a.bundles().iter().enumerate().filter(|(_, b)| b.is_empty()) {
        let _ = writeln!(out, "# agent {} receives an empty bundle", i + 1);
    }
    if let Some(report) = envy {
        let _ = writeln!(out, "# envy (k = {})", report.k);
        for p in report.pairs.iter().filter(|p| p.envier != p.envied && p.amount > Value::from_integer(0)) {
            let witness = match &p.witness {
                Some(w) => {
                    let names: Vec<&str> = w.iter().map(|&v| g.vertex_name(v)).collect();
                    format!("cleared by hiding {{{}}}", names.join(","))
                }
                None => "not cleared".into(),
            };
            let _ = writeln!(out, "# {} -> {}: {} {}", p.envier + 1, p.envied + 1, p.amount, witness);
        }
    }
    out
}
