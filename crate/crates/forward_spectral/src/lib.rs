//! Bound states of −ψ″ − ω²Q(x)ψ = −ξ²ψ on the half-line with ψ(0) = 0.
//!
//! Counting uses a scaled Prüfer phase; eigenvalues are bracketed by node
//! counts and then polished by matching a forward shot from 0 against a
//! decaying backward shot from the domain cut. The square well has a closed
//! form used as an oracle, and the Jost function is built by panel-wise
//! successive approximations.

mod error;
mod grid;
mod identity;
mod jost;
mod potential;
mod shoot;
mod solve;
mod spectrum;
mod square_well;

pub use error::SpectralError;
pub use identity::{characteristic_identity_check, IdentityReport, ModeResidual, SSource};
pub use jost::{jost_cut, jost_function, JostValue};
pub use num_complex::Complex64;
pub use potential::Potential;
pub use solve::{count_eigenvalues, solve_modes, solve_spectrum, Mode, NormQuadrature, ShootingConfig};
pub use spectrum::Spectrum;
pub use square_well::{square_well_spectrum, SquareWellSpectrum};
