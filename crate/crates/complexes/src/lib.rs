//! Bounded-window complexes of free modules over a degree-0 ring: the tangent complexes of the
//! Lagrangian-intersection maps, chain maps between them, and quasi-isomorphism certificates by
//! Gaussian cancellation of unit entries (with fibrewise rank probes as an independent check).

use darboux::DarbouxError;
use gca_core::GcaError;
use thiserror::Error;

mod cancel;
mod complex;
mod matrix;
mod probe;
pub mod semifree;
mod tq;

pub use cancel::{cancel_units, cancel_units_where, ContractionCertificate};
pub use complex::{ChainMap, ComplexFile, FreeModuleComplex};
pub use matrix::Matrix;
pub use probe::{point_homology_probe, random_points};
pub use tq::{
    build_cotangent, build_phi, build_psi, build_theta_delta, build_theta_nu, build_theta_nu_printed, build_tq, build_tq_prime,
    certify_psi, TqData,
};

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("bad window or shape: {0}")]
    Window(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
    #[error(transparent)]
    Algebra(#[from] GcaError),
    #[error(transparent)]
    Darboux(#[from] DarbouxError),
}

pub type Result<T> = std::result::Result<T, ComplexError>;
