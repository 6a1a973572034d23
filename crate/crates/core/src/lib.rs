#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Lattice construction and decoding toolkit.
//!
//! Builds single parity-check and k-ing lattices (Barnes-Wall, Leech, the
//! 72-dimensional Nebe lattice, 3-parity-Leech), decodes them with bounded
//! distance, list and recursive decoders, predicts their error rates, and
//! simulates them over the Gaussian channel.

pub mod analysis;
pub mod constructions;
pub mod decoders;
pub mod enumerate;
pub mod exact;
pub mod family;
pub mod io;
pub mod lattice;
pub mod par;
pub mod ring;
pub mod sim;

pub use lattice::{CosetSystem, LatticeBasis, Provenance};
pub use ring::{ComplexBasis, RingTag, Theta};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),
    #[error("singular basis")]
    Singular,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("enumeration budget of {0} exceeded")]
    Budget(u64),
    #[error("lattices are not commensurable over Q(sqrt 7)")]
    NotCommensurable,
    #[error("not a sublattice")]
    NotSublattice,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("trial {trial} at grid point {grid}: {source}")]
    Trial { grid: usize, trial: u64, source: Box<Error> },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        match self {
            Error::Budget(_) => true,
            Error::Trial { source, .. } => source.is_budget(),
            _ => false,
        }
    }
}
