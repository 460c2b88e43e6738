//! Hyperbolic model geometry `H^n`.
//!
//! Points are stored in hyperboloid coordinates `z = (ρ, ρ^(1), …, ρ^(n))`, which
//! are simultaneously the values of the static potentials at the point. The
//! Poincaré disk ([`DiskPoint`]) and geodesic polar ([`PolarPoint`]) charts convert
//! into this representation; large-radius work goes through polar coordinates so
//! that nothing is computed from `1 - |x|²` near the disk boundary.
//!
//! Tensor components are taken in the orthonormal frame
//! `e_α = ((1 - |x|²)/2) ∂/∂x_α`.

mod lorentz;
mod points;
mod potential;
mod quadrature;

pub use lorentz::{
    classify_causal, isometry_action_on_potentials, lorentz_inner, rest_boost, CausalClass, Isometry,
    IsometryKind, LorentzVector,
};
pub use points::{half_space_map, DiskPoint, ModelPoint, PolarPoint, DISK_EDGE_TOL};
pub(crate) use potential::symmetrize;
pub use potential::{covariant_hessian_frame, potential_jets, AmbientJet, PotentialJet};
pub(crate) use quadrature::gauss_legendre_on;
pub use quadrature::{gauss_legendre, sphere_area, sphere_quadrature, SphereNode, SphereRule};

/// Dimensions `n` of `H^n` supported throughout the crate.
pub const SUPPORTED_DIMS: [usize; 3] = [2, 3, 4];

pub(crate) fn check_dim(n: usize) -> crate::Result<()> {
    if SUPPORTED_DIMS.contains(&n) {
        Ok(())
    } else {
        Err(crate::Error::UnsupportedDimension(n))
    }
}
