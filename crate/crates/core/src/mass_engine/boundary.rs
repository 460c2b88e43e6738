use nalgebra::DVector;
use rayon::prelude::*;

use super::extrapolate::{extrapolate, LimitEstimate};
use super::recipe::recipe_parts;
use super::{c_n, QuadratureSpec};
use crate::graph_library::GraphFamily;
use crate::model_space::{sphere_quadrature, ModelPoint, SphereRule};
use crate::summation::pairwise_sum;
use crate::{Error, Result};

/// Boundary functionals `m_r(ρ^(i))`, `i = 0..=n`, at each radius of the spec.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundarySeries {
    pub r: Vec<f64>,
    pub values: Vec<DVector<f64>>,
}

impl BoundarySeries {
    /// Series of `m_r(φ)` for `φ = Σ c_i ρ^(i)`.
    pub fn functional(&self, coeffs: &DVector<f64>) -> Vec<f64> {
        self.values.iter().map(|v| v.dot(coeffs)).collect()
    }
}

/// All `n + 1` basis functionals on `E_r` at once.
pub(crate) fn basis_functionals(family: &GraphFamily, r: f64, rule: &SphereRule) -> Result<DVector<f64>> {
    if family.chart_is_identity() && r <= family.asymptotic_radius {
        return Err(Error::RadiusInsideCore { r, core: family.asymptotic_radius });
    }
    let n = family.n;
    let area = r.powi(n as i32 - 1) * c_n(n);
    let terms: Vec<DVector<f64>> = rule
        .nodes
        .par_iter()
        .map(|node| {
            let p = ModelPoint::from_polar(r, &node.theta);
            let jet = family.chart_jet(&p)?;
            let (a, b) = recipe_parts(&jet);
            // J(ρ^(i)) · ν = z_i (A · θ) + (Eᵀ B θ)_i
            let normal = a.dot(&node.theta);
            let v = p.z() * normal + p.frame().transpose() * (b * &node.theta);
            Ok(v * (node.weight * area))
        })
        .collect::<Result<_>>()?;
    Ok(DVector::from_fn(n + 1, |i, _| {
        let column: Vec<f64> = terms.iter().map(|t| t[i]).collect();
        pairwise_sum(&column)
    }))
}

/// `c_n ∫_{E_r} J(φ)_α ν^α r^{n-1} dω` for `φ = Σ c_i ρ^(i)`.
pub fn mass_functional_at_radius(
    family: &GraphFamily,
    phi_coeffs: &DVector<f64>,
    r: f64,
    q: &QuadratureSpec,
) -> Result<f64> {
    check_coeffs(family, phi_coeffs)?;
    let rule = sphere_quadrature(family.n - 1, q.sphere_order)?;
    Ok(basis_functionals(family, r, &rule)?.dot(phi_coeffs))
}

pub fn boundary_series(family: &GraphFamily, q: &QuadratureSpec) -> Result<BoundarySeries> {
    q.validate()?;
    let rule = sphere_quadrature(family.n - 1, q.sphere_order)?;
    let values =
        q.r_values.iter().map(|&r| basis_functionals(family, r, &rule)).collect::<Result<Vec<_>>>()?;
    Ok(BoundarySeries { r: q.r_values.clone(), values })
}

/// Extrapolated `m_Ψ(φ)`.
pub fn mass_limit(
    family: &GraphFamily,
    phi_coeffs: &DVector<f64>,
    q: &QuadratureSpec,
) -> Result<LimitEstimate> {
    check_coeffs(family, phi_coeffs)?;
    let series = boundary_series(family, q)?;
    extrapolate(&series.r, &series.functional(phi_coeffs), q.extrapolation)
}

fn check_coeffs(family: &GraphFamily, c: &DVector<f64>) -> Result<()> {
    if c.len() != family.n + 1 {
        return Err(Error::DimensionMismatch { expected: family.n + 1, found: c.len() });
    }
    Ok(())
}
