//! Contiguous fair division on graphs.
//!
//! The crate covers four layers that build on each other:
//!
//! * [`graph`]: multigraphs, smoothing and subdivision, block trees, bipolar
//!   numberings, tridents and the lips labeling.
//! * [`valuation`] and [`fairness`]: exact valuations, envy checks and a
//!   brute-force oracle over contiguous allocations.
//! * [`knife`]: the discrete moving-knife procedures for three agents on
//!   path-like and lips-class graphs, plus two-agent cut-and-choose.
//! * [`tangle`]: stringability, gap cutsets and thresholds, and generators
//!   for counterexample instances.
//!
//! All arithmetic is exact; values are [`Value`] rationals.

pub mod fairness;
pub mod graph;
pub mod io;
pub mod knife;
pub mod tangle;
pub mod valuation;

pub use graph::{Edge, EdgeId, Enumeration, Multigraph, VertexId, VertexSet};
pub use valuation::{Value, Valuation, ValuationProfile};
