//! Exact free graded-commutative algebras, graded derivations and semifree cdga presentations.

mod algebra;
mod coeff;
mod derivation;
mod error;
mod file;
pub mod linalg;
mod parse;
mod presentation;
mod report;

pub use algebra::{sum_in, Algebra, Elem, Generator, Gid, Mono, Terms};
pub use coeff::{Coeff, Field};
pub use derivation::{partial_by_name, partial_derivative, Derivation};
pub use error::{GcaError, Result};
pub use file::{GeneratorSpec, PresentationFile};
pub use parse::parse_elem;
pub use presentation::{Morphism, Presentation};
pub use report::{Entry, Report};
