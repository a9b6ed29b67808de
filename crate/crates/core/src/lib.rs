//! Computational tools for subgroups of free groups and the small-cancellation
//! and hyperbolic-geometry facts built on them.
//!
//! * [`freegroup`]: reduced words, endomorphisms, enumeration and sampling.
//! * [`stallings`]: folded core graphs, membership, intersections, malnormality.
//! * [`smallcancel`]: pieces, the C'(1/6) condition and Dehn's algorithm.
//! * [`hypgeom`]: exact metric testbeds for piecewise-geodesic quasigeodesic checks.
//! * [`genericity`]: census and Monte Carlo estimates of generic subgroup properties.
//! * [`distortion`]: the HNN extension that exponentially distorts `F_2`.

pub mod distortion;
pub mod error;
pub mod freegroup;
pub mod genericity;
pub mod hypgeom;
pub mod smallcancel;
pub mod stallings;

pub use error::{Error, Result};
pub use freegroup::{Alphabet, Endomorphism, Letter, Word};
pub use smallcancel::Presentation;
pub use stallings::CoreGraph;


