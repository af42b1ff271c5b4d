//! Finite lattices with left-modular chains, quasi-EL labelings, vertex
//! decompositions of order-complex skeleta, poset Morse bounds, and
//! subgroup lattices of permutation groups.
//!
//! Elements are `usize` indices into a [`Poset`]; the input order of the
//! elements fixes every enumeration order and every tie-break.

#![allow(clippy::result_large_err)]

pub mod complex;
pub mod construct;
pub mod families;
pub mod groups;
pub mod io;
pub mod labeling;
pub mod lattice;
pub mod morse;
pub mod poset;

pub use complex::{
    depth, find_shelling, is_cohen_macaulay, is_vd_bruteforce, order_complex, reduced_betti, shelling_from_vd, validate_certificate,
    vd_certificate_bruteforce, verify_shelling, BettiNumbers, CmFailure, ComplexError, ShellingOrder, SimplicialComplex, VdCertificate,
};
pub use construct::{constructive_vd_full, constructive_vd_skeleton, lex_greatest_single_descent_chain, ConstructError, SheddingCandidate};
pub use groups::{GroupError, GroupLattice, Perm, PermGroup};
pub use io::IoError;
pub use labeling::{
    left_modular_labeling, min_chain_complexity, verify_el, verify_quasi_cl, verify_quasi_el, ChainStats, EdgeLabeling, Label,
    LabelingError, QuasiElCertificate,
};
pub use lattice::{ChainKind, Lattice, LatticeError, ModularChain};
pub use morse::{morse_report, MorseError, MorseReport};
pub use poset::{Chain, Grading, Poset, PosetError};

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Labeling(#[from] LabelingError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Construct(#[from] ConstructError),
    #[error(transparent)]
    Morse(#[from] MorseError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Io(#[from] IoError),
}
