//! Stallings core graphs of finitely generated subgroups of free groups.
//!
//! Conjugation convention: `H^g = g H g^-1`, so a witness `(g, e)` for
//! `H ∩ H^g ≠ 1` has `e ∈ H` and `g^-1 e g ∈ H`.

mod graph;
mod product;
mod readable;

pub use graph::{CoreGraph, GraphSummary};
pub use product::{
    conjugates_avoid, intersect, is_malnormal, product_components, AvoidWitness, MalnormalityCertificate,
    ProductComponent,
};
pub use readable::{longest_readable, longest_readable_fraction, ReadableSubword};
