//! Toolkit for longest-path intersection questions in connected graphs.
//!
//! The crate computes the path-distance function of a set of longest paths,
//! checks the known bounds on it instance by instance with exact rational
//! arithmetic, replays the path surgery behind those bounds, builds the
//! pendant/subdivision blow-up of a path system and scans corpora of small
//! graphs for counterexamples.

pub mod bitset;
pub mod bounds;
pub mod canon;
pub mod construct;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod longest;
pub mod path_system;
pub mod rational;
pub mod report;
pub mod scan;
pub mod surgery;

pub use bitset::VertexSet;
pub use error::{Error, Result};
pub use graph::{DistanceVector, Graph};
pub use longest::{LongestPathSet, Path};
pub use path_system::PathSystem;
pub use rational::Rational;

/// Schema tag carried by every JSON report.
pub const REPORT_SCHEMA: &str = "lplab-report/1";
