use rayon::prelude::*;

use super::{c_n, QuadratureSpec};
use crate::graph_geometry::{extrinsic_data, ExtrinsicData, GraphJet};
use crate::graph_library::GraphFamily;
use crate::model_space::{gauss_legendre_on, sphere_quadrature, ModelPoint, SphereRule};
use crate::summation::pairwise_sum;
use crate::{Error, Result};

/// `c_n ∫_M Θ 𝔯 dM` over the exterior region, with sampled energy condition.
#[derive(Clone, Debug, PartialEq)]
pub struct BulkMass {
    pub value: f64,
    pub error: f64,
    /// Fitted contribution from `r > r_max`.
    pub tail: f64,
    /// Power `k` in the fitted radial density `~ r^k` (`-∞` if it vanishes).
    pub tail_exponent: f64,
    /// Minimum of `Θ 𝔯` over all samples, with round-off level values set to zero.
    pub energy_min: f64,
    pub r_inner: f64,
    pub r_outer: f64,
}

/// Radial nodes and weights on `[r_in, r_max]`, graded geometrically from `r_in`.
/// With `singular`, the first panel is mapped by `r = r_in + s²`.
pub(crate) fn radial_rule(
    r_in: f64,
    r_max: f64,
    panels: usize,
    degree: usize,
    singular: bool,
) -> Vec<(f64, f64)> {
    let s0 = 0.05 * r_in.max(1.0);
    let big = (r_max - r_in + s0) / s0;
    let edge = |k: usize| {
        if k == panels {
            r_max
        } else {
            r_in + s0 * (big.powf(k as f64 / panels as f64) - 1.0)
        }
    };
    let mut nodes = Vec::with_capacity(panels * degree);
    for k in 0..panels {
        let (a, b) = (edge(k), edge(k + 1));
        if k == 0 && singular {
            for (s, w) in gauss_legendre_on(degree, 0.0, (b - a).sqrt()) {
                nodes.push((a + s * s, 2.0 * s * w));
            }
        } else {
            nodes.extend(gauss_legendre_on(degree, a, b));
        }
    }
    nodes
}

struct Shell {
    density: f64,
    energy_min: f64,
    noise: f64,
}

/// Angular integral of `2S₂ r^{n-1}` at radius `r`, times `c_n`.
fn shell(family: &GraphFamily, r: f64, rule: &SphereRule) -> Result<Shell> {
    let n = family.n;
    let mut terms = Vec::with_capacity(rule.len());
    let mut energy_min = f64::INFINITY;
    let mut noise = 0.0_f64;
    for node in &rule.nodes {
        let p = ModelPoint::from_polar(r, &node.theta);
        let jet = family.derivative_jet(&p)?;
        let ext = extrinsic_data(&jet);
        let floor = curvature_noise(&jet, &ext);
        let excess = 2.0 * ext.s2;
        let clipped = if excess.abs() <= floor { 0.0 } else { excess };
        energy_min = energy_min.min(ext.theta * clipped);
        noise = noise.max(floor);
        terms.push(node.weight * excess);
    }
    let factor = c_n(n) * r.powi(n as i32 - 1);
    Ok(Shell {
        density: factor * pairwise_sum(&terms),
        energy_min,
        noise: factor * noise * crate::model_space::sphere_area(n - 1),
    })
}

pub fn bulk_mass(family: &GraphFamily, q: &QuadratureSpec) -> Result<BulkMass> {
    q.validate()?;
    let boundary_r = family.boundary.map_or(0.0, |b| b.radius);
    let r_in = q.r_min.max(boundary_r).max(family.asymptotic_radius);
    let singular = family.boundary.is_some_and(|b| b.singular) && r_in == boundary_r;
    if q.r_max <= r_in {
        return Err(Error::BadParams(format!("r_max = {} inside r_in = {r_in}", q.r_max)));
    }
    let rule = sphere_quadrature(family.n - 1, q.sphere_order)?;
    let radial = radial_rule(r_in, q.r_max, q.radial_panels, q.radial_degree, singular);
    let shells: Vec<Shell> =
        radial.par_iter().map(|&(r, _)| shell(family, r, &rule)).collect::<Result<_>>()?;
    let terms: Vec<f64> = shells.iter().zip(&radial).map(|(s, (_, w))| s.density * w).collect();
    let body = pairwise_sum(&terms);
    let energy_min = shells.iter().fold(f64::INFINITY, |m, s| m.min(s.energy_min));

    // tail from the outermost panel
    let last: Vec<(f64, &Shell)> =
        radial.iter().zip(&shells).skip(radial.len() - q.radial_degree).map(|((r, _), s)| (*r, s)).collect();
    let negligible = last.iter().all(|(_, s)| s.density.abs() <= s.noise);
    let (tail, tail_exponent) = if negligible {
        (0.0, f64::NEG_INFINITY)
    } else {
        let same_sign = last.iter().all(|(_, s)| s.density * last[0].1.density > 0.0);
        if !same_sign {
            (0.0, f64::NAN)
        } else {
            let (k, log_a) = log_log_fit(last.iter().map(|(r, s)| (*r, s.density.abs())));
            if k >= -1.0 {
                return Err(Error::NonIntegrableScalarCurvature { exponent: k });
            }
            let sign = last[0].1.density.signum();
            let density_at_max = sign * (log_a + k * q.r_max.ln()).exp();
            (density_at_max * q.r_max / (-k - 1.0), k)
        }
    };
    let abs_sum: f64 = terms.iter().map(|t| t.abs()).sum();
    let error = 0.1 * tail.abs() + 1e-13 * abs_sum;
    Ok(BulkMass {
        value: body + tail,
        error,
        tail,
        tail_exponent,
        energy_min,
        r_inner: r_in,
        r_outer: q.r_max,
    })
}

/// Size below which `2S₂` is indistinguishable from rounding in the terms of `B`.
pub(crate) fn curvature_noise(j: &GraphJet, ext: &ExtrinsicData) -> f64 {
    let rho = j.pot.rho;
    let a = j.u_alpha.norm();
    let p = j.pot.rho_alpha.norm();
    let s_mag = (rho * j.u_alphabeta.norm() + 2.0 * p * a + rho * rho * p * a * a * a) / ext.w;
    let b_mag = ext.g_inv.norm() * s_mag;
    1e-10 * (ext.s1 * ext.s1 + (&ext.b * &ext.b).trace().abs() + ext.b.norm() * b_mag)
}

/// Least-squares line through `(log x, log y)`; returns `(slope, intercept)`.
pub(crate) fn log_log_fit(points: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = points.map(|(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_rule_integrates_polynomials_and_square_root_singularities() {
        let rule = radial_rule(1.0, 50.0, 12, 12, false);
        let q: f64 = rule.iter().map(|(r, w)| w * r * r).sum();
        assert!((q - (50f64.powi(3) - 1.0) / 3.0).abs() < 1e-9);
        let rule = radial_rule(1.0, 10.0, 12, 12, true);
        let q: f64 = rule.iter().map(|(r, w)| w / (r - 1.0).sqrt()).sum();
        assert!((q - 2.0 * 3.0).abs() < 1e-12);
    }
}
