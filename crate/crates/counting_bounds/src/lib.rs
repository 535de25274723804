//! Sign-vector experiments with the Warren, Khovanskii and Descartes
//! counting bounds.

mod bounds;
mod error;
mod expsum;
mod poly;
mod signs;

pub use bounds::{
    exp_sum_distance_floor, khovanskii_cell_bound, khovanskii_complement_bound, khovanskii_floor,
    warren_component_bound, warren_thresholds,
};
pub use error::CountingError;
pub use expsum::{count_exp_sum_zeros, random_exp_sum, ExpSum, ExpTerm, ZeroCount};
pub use poly::{Poly1, PolyN, RootIsolation};
pub use signs::{
    enumerate_sign_vectors_1d, find_unattained_sequence, random_system, sample_sign_vectors, PolySystem,
    SignEnumeration,
};
