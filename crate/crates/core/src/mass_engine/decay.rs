use rayon::prelude::*;

use super::bulk::{curvature_noise, log_log_fit};
use super::QuadratureSpec;
use crate::graph_geometry::extrinsic_data;
use crate::graph_library::GraphFamily;
use crate::model_space::{sphere_quadrature, ModelPoint};
use crate::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayReport {
    /// Estimated `τ` with `ρ u_α, ρ_β u_α + ρ u_αβ = O(r^{-τ/2})`; `+∞` if both vanish.
    pub tau_hat: f64,
    /// Exponent `k` of the radial density `∫ |𝔯| Θ dM ~ r^k dr` (`-∞` if zero).
    pub scalar_tail_exponent: f64,
    pub admissible: bool,
    pub r_range: (f64, f64),
    /// `(r, max decay quantity, ∫|2S₂| r^{n-1} dω)` at each sampled radius.
    pub samples: Vec<(f64, f64, f64)>,
}

const SAMPLES: usize = 9;
const MARGIN: f64 = 0.05;

/// Log-log fit of the decay quantities over a decade of radii.
pub fn decay_estimate(family: &GraphFamily, q: &QuadratureSpec) -> Result<DecayReport> {
    let n = family.n;
    let rule = sphere_quadrature(n - 1, q.sphere_order)?;
    let r_lo = (10.0 * family.asymptotic_radius).max(100.0);
    let r_hi = 10.0 * r_lo;
    let radii: Vec<f64> =
        (0..SAMPLES).map(|k| r_lo * (r_hi / r_lo).powf(k as f64 / (SAMPLES - 1) as f64)).collect();
    let rows: Vec<(f64, f64, f64)> = radii
        .par_iter()
        .map(|&r| {
            let mut q_max = 0.0_f64;
            let mut density = 0.0;
            let mut noise = 0.0_f64;
            for node in &rule.nodes {
                let p = ModelPoint::from_polar(r, &node.theta);
                let j = family.derivative_jet(&p)?;
                let rho = j.pot.rho;
                let first: f64 = j.u_alpha.iter().map(|v| (rho * v).abs()).sum();
                let second: f64 = (&j.pot.rho_alpha * j.u_alpha.transpose() + &j.u_alphabeta * rho)
                    .iter()
                    .map(|v| v.abs())
                    .sum();
                q_max = q_max.max(first + second);
                let ext = extrinsic_data(&j);
                density += node.weight * (2.0 * ext.s2).abs();
                noise = noise.max(curvature_noise(&j, &ext));
            }
            let shell = r.powi(n as i32 - 1);
            let noise_total = noise * crate::model_space::sphere_area(n - 1);
            let density = if density <= noise_total { 0.0 } else { density * shell };
            Ok((r, q_max, density))
        })
        .collect::<Result<_>>()?;
    let tau_hat = if rows.iter().all(|row| row.1 == 0.0) {
        f64::INFINITY
    } else {
        -2.0 * log_log_fit(rows.iter().map(|row| (row.0, row.1))).0
    };
    let scalar_tail_exponent = if rows.iter().all(|row| row.2 == 0.0) {
        f64::NEG_INFINITY
    } else if rows.iter().any(|row| row.2 == 0.0) {
        f64::NAN
    } else {
        log_log_fit(rows.iter().map(|row| (row.0, row.2))).0
    };
    let integrable = scalar_tail_exponent < -1.0 - MARGIN;
    let admissible = tau_hat > n as f64 / 2.0 + MARGIN && integrable;
    Ok(DecayReport { tau_hat, scalar_tail_exponent, admissible, r_range: (r_lo, r_hi), samples: rows })
}
