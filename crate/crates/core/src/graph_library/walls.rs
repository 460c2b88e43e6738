use serde::{Deserialize, Serialize};

use super::profiles::{ConstantProfile, InverseProfile, LogProfile, RadialProfile};
use crate::graph_geometry::GraphJet;
use crate::model_space::{AmbientJet, ModelPoint};

/// Hypersurfaces of `H^{n+1}` along which a graph may have its inner boundary.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WallSpec {
    /// `t = d + sign · log ρ`, `sign = ±1`.
    Horosphere { d: f64, sign: f64 },
    /// The totally geodesic slice `t = t0`.
    GeodesicSlice { t0: f64 },
    /// `t = c/ρ`.
    SigmaC { c: f64 },
}

impl WallSpec {
    pub fn name(&self) -> &'static str {
        match self {
            WallSpec::Horosphere { .. } => "horosphere",
            WallSpec::GeodesicSlice { .. } => "geodesic_slice",
            WallSpec::SigmaC { .. } => "sigma_c",
        }
    }

    fn profile(&self) -> Box<dyn RadialProfile> {
        match *self {
            WallSpec::Horosphere { d, sign } => Box::new(LogProfile { d, sign: sign.signum() }),
            WallSpec::GeodesicSlice { t0 } => Box::new(ConstantProfile(t0)),
            WallSpec::SigmaC { c } => Box::new(InverseProfile { c }),
        }
    }

    /// The wall as a graph, with its jet at `p`.
    pub fn jet(&self, p: &ModelPoint) -> GraphJet {
        let prof = self.profile();
        let rho = p.rho();
        // wall profiles are defined for every ρ ≥ 1
        let f = prof.value(rho).unwrap_or(f64::NAN);
        let (d1, d2) = prof.derivs(rho).unwrap_or((f64::NAN, f64::NAN));
        GraphJet::from_ambient(p, &AmbientJet::radial(p.dim(), f, d1, d2))
    }

    /// `ψ_c(ρ) = ρ/√(1 + c²(1 - ρ⁻²))`, the weight of a `Σ_c` wall.
    pub fn psi(c: f64, rho: f64) -> f64 {
        rho / (1.0 + c * c * (1.0 - 1.0 / (rho * rho))).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        match *self {
            WallSpec::Horosphere { d, sign } => d.is_finite() && (sign == 1.0 || sign == -1.0),
            WallSpec::GeodesicSlice { t0 } => t0.is_finite(),
            WallSpec::SigmaC { c } => c.is_finite(),
        }
    }
}
