//! Delta invariants of minimal generic curves on normal surface singularities
//! with rational homology sphere links, computed from the resolution graph.

pub mod cyclic;
pub mod error;
pub mod gen;
pub mod graph;
pub mod lattice;
pub mod laufer;
pub mod linalg;
pub mod orchestrator;
pub mod series;
pub mod star;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{parse_graph, DualGraph};
pub use lattice::{Class, Cycle, DiscriminantGroup, Lattice};
pub use laufer::TieBreak;
pub use orchestrator::{DeltaReport, DeltaRow, ReportOptions, VerifyLevel};
pub use star::SeifertData;

/// Default cap on enumerated lattice points for series computations.
pub const DEFAULT_BUDGET: u64 = 10_000_000;
