//! Mass functionals of asymptotically hyperbolic graphs.
//!
//! The boundary mass `m_Ψ(φ) = lim c_n ∫_{E_r} J(φ)_α ν^α dE_r` is evaluated on
//! coordinate spheres of the mass chart and extrapolated in `r`; the bulk mass
//! `c_n ∫_M Θ 𝔯 dM` and the horizon terms `c_n ∫_Γ (ρ/𝒲) S₁(Γ) dΓ` give an
//! independent route to the same number through the flux identity.

mod boundary;
mod bulk;
mod decay;
mod extrapolate;
mod horizon;
mod recipe;
mod vector;

use serde::{Deserialize, Serialize};

pub use boundary::{boundary_series, mass_functional_at_radius, mass_limit, BoundarySeries};
pub use bulk::{bulk_mass, BulkMass};
pub use decay::{decay_estimate, DecayReport};
pub use extrapolate::{extrapolate, Extrapolation, LimitEstimate};
pub use horizon::{horizon_term, penrose_report, HorizonTerm, PenroseFlags, PenroseReport};
pub use recipe::{potential_value, recipe_current, recipe_parts, recipe_residual};
pub use vector::{balanced_mass, mass_report, mass_vector, BalancedMass, MassReport};

use crate::model_space::sphere_area;
use crate::{Error, Result};

/// `c_n = 1 / (2(n-1) ω_{n-1})`.
pub fn c_n(n: usize) -> f64 {
    1.0 / (2.0 * (n as f64 - 1.0) * sphere_area(n - 1))
}

fn default_sphere_order() -> usize {
    8
}
fn default_panels() -> usize {
    24
}
fn default_degree() -> usize {
    16
}
fn default_r_values() -> Vec<f64> {
    vec![20.0, 40.0, 80.0, 160.0]
}
fn default_r_max() -> f64 {
    1000.0
}

/// Discretisation of all mass integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    #[serde(default = "default_sphere_order")]
    pub sphere_order: usize,
    /// Number of geometrically graded radial panels for bulk integrals.
    #[serde(default = "default_panels")]
    pub radial_panels: usize,
    /// Gauss–Legendre degree on each radial panel.
    #[serde(default = "default_degree")]
    pub radial_degree: usize,
    /// Inner truncation radius of bulk integrals (`0` = the family's own boundary).
    #[serde(default)]
    pub r_min: f64,
    /// Outer radius of the bulk quadrature; the tail beyond it is fitted.
    #[serde(default = "default_r_max")]
    pub r_max: f64,
    /// Radii at which the boundary functional is evaluated.
    #[serde(default = "default_r_values")]
    pub r_values: Vec<f64>,
    #[serde(default)]
    pub extrapolation: Extrapolation,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            sphere_order: default_sphere_order(),
            radial_panels: default_panels(),
            radial_degree: default_degree(),
            r_min: 0.0,
            r_max: default_r_max(),
            r_values: default_r_values(),
            extrapolation: Extrapolation::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.sphere_order < 2 {
            return Err(Error::BadParams("sphere_order must be at least 2".into()));
        }
        if self.radial_panels == 0 || self.radial_degree == 0 {
            return Err(Error::BadParams("radial rule needs panels and degree ≥ 1".into()));
        }
        if !(self.r_min >= 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::BadParams(format!(
                "need 0 ≤ r_min < r_max (r_min = {}, r_max = {})",
                self.r_min, self.r_max
            )));
        }
        if self.r_values.is_empty() || self.r_values.iter().any(|r| !(r.is_finite() && *r > 0.0)) {
            return Err(Error::BadParams("r_values must be positive and finite".into()));
        }
        if self.r_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::BadParams("r_values must be strictly increasing".into()));
        }
        if self.extrapolation != Extrapolation::None && self.r_values.len() < 2 {
            return Err(Error::BadParams("extrapolation needs at least 2 radii".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn normalisation_constants() {
        assert!((c_n(3) - 1.0 / (16.0 * PI)).abs() < 1e-17);
        assert!((c_n(2) - 1.0 / (4.0 * PI)).abs() < 1e-17);
        assert!((c_n(4) - 1.0 / (12.0 * PI * PI)).abs() < 1e-17);
    }

    #[test]
    fn spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        let bad = QuadratureSpec { r_values: vec![2.0, 1.0], ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
