//! Pieces, the metric small-cancellation condition C'(1/6), and Dehn's
//! algorithm for the word problem of such presentations.

mod dehn;
mod pieces;
mod presentation;

pub use dehn::{dehn_reduce, greendlinger_witness, DehnOutcome, DehnReducer, GreendlingerWitness};
pub use pieces::{check_c16, symmetrize, PieceReport, PieceWitness, SymmetrizedWord};
pub use presentation::Presentation;
