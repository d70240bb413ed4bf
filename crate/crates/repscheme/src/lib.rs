//! Derived representation schemes of k[x₁..x_n] through the cobar construction of ∧V,
//! and the matrix checks built on them.

pub mod bd;
pub mod cobar;
pub mod iterated;
pub mod koszul;
pub mod module;
pub mod nc;
pub mod scheme;
pub mod tangent;

pub use bd::{build_bd, cme_bd, maindim4, Bd, MainDim4};
pub use iterated::{iterated_crit_bd, IteratedCrit};
pub use cobar::{cobar, exterior_coalgebra, h0_hilbert_check, printed_example_check, CobarDga, ExteriorCoalgebra};
pub use nc::{Leibniz, Letter, NcAlgebra, NcElem, Word};
pub use koszul::{koszul_bimodule_resolution, koszul_check};
pub use module::{DgMap, DgModule};
pub use scheme::{matrixify, RepScheme};
pub use tangent::{beta_check, build_f, build_f_and_l, build_gamma, build_l, build_tangent, gamma_check, serre_pairing_check, twisting, Gamma, Twisting};

use complexes::ComplexError;
use darboux::DarbouxError;
use derham::FormError;
use gca_core::GcaError;
use lagrangian::LagError;

#[derive(Debug, thiserror::Error)]
pub enum RepError {
    #[error("bad input: {0}")]
    Input(String),
    #[error("out of range: {0}")]
    Range(String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
    #[error(transparent)]
    Lagrangian(#[from] LagError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

pub type Result<T> = std::result::Result<T, RepError>;
