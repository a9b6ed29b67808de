//! Exact metric testbeds: the Cayley tree of `F_n` and small finite graphs,
//! with piecewise geodesic paths and the fellow-travel hypotheses under which
//! such a path is a `(2, 0)`-quasigeodesic.

mod fuzz;
mod input;
mod path;
mod space;

pub use fuzz::{fuzz_suite, fuzz_tree_path, FuzzBucket, FuzzCase, FuzzSummary};
pub use input::{analyze, PathAnalysis, PathSpec, PointSpec, SpaceSpec};
pub use path::{
    audit_geodesic_inequality, check_hypotheses, check_quasigeodesic, fellow_travel_length, is_quasigeodesic,
    terminal_fellow_travel, AuditReport, Condition, HypothesisReport, InequalityRow, PiecewisePath, QuasiReport,
    Subpath, TerminalRow,
};
pub use space::{DeltaReport, DeltaWitness, FiniteGraphSpace, MetricSpace, TreeSpace};
