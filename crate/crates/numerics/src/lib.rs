//! Small numerical kernels shared across the workspace.
//!
//! Nothing here is clever: a Gauss–Kronrod adaptive integrator, composite
//! Simpson, bracketed root finders, Gauss–Legendre nodes, and a log2
//! magnitude type for bounds that do not fit in an `f64`.

pub mod gauss;
pub mod logmag;
pub mod quad;
pub mod roots;

pub use logmag::{Log2, NeumaierSum};
pub use quad::{integrate, simpson, QuadError, QuadResult};
pub use roots::{bisect, brent, RootError};
