//! Exact small-subgraph census for (4,6)-fullerene graphs.
//!
//! A (4,6)-fullerene is a cubic plane graph whose faces are 6 squares and
//! `h` hexagons. This crate builds such graphs from rotation systems,
//! classifies their structure, counts matchings and small forests by
//! enumeration, and checks the counts against closed forms in `h`.
//!
//! ```
//! use fullerene46::census::count_matchings;
//! use fullerene46::formulas::matching_formula;
//! use fullerene46::generators::{generate, GraphKind};
//!
//! let tube = generate(GraphKind::Tube(2));
//! assert_eq!(count_matchings(&tube, 3), matching_formula(3, 6).unwrap());
//! ```

pub mod census;
pub mod formulas;
pub mod generators;
pub mod plane_graph;
pub mod structure;
pub mod verify;

pub use generators::{generate, GraphKind};
pub use plane_graph::EmbeddedGraph;
