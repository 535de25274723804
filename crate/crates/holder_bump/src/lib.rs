//! The Hölder compact Λ_{l,s}, the bump g_{l,s}, the tiled witness f_ε,
//! and the closed-form constants attached to them.

mod class;
mod constants;
mod error;
mod fd;
mod membership;

pub use class::{eval_f_eps, eval_g, norm_constant_m, sup_norm_on_grid, BumpSpec, HolderClass};
pub use constants::{
    analytic_floor_constant, family_constants, lower_bound_constant, EntireFamilyParams, FamilyConstants,
    NormCase,
};
pub use error::HolderError;
pub use fd::central_weights;
pub use membership::{verify_holder_membership, MembershipReport};
