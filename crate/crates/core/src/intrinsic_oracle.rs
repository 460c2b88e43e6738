//! Finite-difference checks of the graph identities.
//!
//! Everything here works in Poincaré disk coordinates `x` on the base and
//! differentiates the induced metric `g_ij = (2/(1-|x|²))² δ_ij + ρ² ∂_i u ∂_j u`
//! numerically. Only first derivatives of `u` enter, so the curvature computed
//! here does not share code with the second fundamental form.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::graph_geometry::{extrinsic_data, GraphJet};
use crate::graph_library::GraphFamily;
use crate::mass_engine::recipe_residual;
use crate::model_space::DiskPoint;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FdScheme {
    #[serde(rename = "central-2")]
    Central2,
    #[default]
    #[serde(rename = "central-4")]
    Central4,
}

impl FdScheme {
    pub fn order(self) -> u32 {
        match self {
            FdScheme::Central2 => 2,
            FdScheme::Central4 => 4,
        }
    }

    /// Offsets (in steps) and weights of the first-derivative stencil.
    fn first(self) -> &'static [(f64, f64)] {
        match self {
            FdScheme::Central2 => &[(-1.0, -0.5), (1.0, 0.5)],
            FdScheme::Central4 => {
                &[(-2.0, 1.0 / 12.0), (-1.0, -8.0 / 12.0), (1.0, 8.0 / 12.0), (2.0, -1.0 / 12.0)]
            }
        }
    }

    fn second(self) -> &'static [(f64, f64)] {
        match self {
            FdScheme::Central2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
            FdScheme::Central4 => &[
                (-2.0, -1.0 / 12.0),
                (-1.0, 16.0 / 12.0),
                (0.0, -30.0 / 12.0),
                (1.0, 16.0 / 12.0),
                (2.0, -1.0 / 12.0),
            ],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FdConfig {
    pub step: f64,
    pub scheme: FdScheme,
    /// Number of step halvings combined by Richardson extrapolation.
    pub richardson_levels: u32,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig { step: 1e-3, scheme: FdScheme::Central4, richardson_levels: 1 }
    }
}

impl FdConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1e-6..=1e-1).contains(&self.step) {
            return Err(Error::BadParams(format!("fd step {} outside [1e-6, 1e-1]", self.step)));
        }
        if self.richardson_levels > 4 {
            return Err(Error::BadParams("at most 4 Richardson levels".into()));
        }
        Ok(())
    }
}

/// `g_ij` at the disk point `x`.
pub fn coordinate_metric(family: &GraphFamily, x: &DiskPoint) -> Result<DMatrix<f64>> {
    let jet = family.derivative_jet(&x.to_model())?;
    Ok(metric_from_jet(&jet, x))
}

fn metric_from_jet(jet: &GraphJet, x: &DiskPoint) -> DMatrix<f64> {
    let n = x.dim();
    let conformal = 1.0 / x.frame_scale();
    // frame vectors are (1/conformal) ∂_i
    let du = &jet.u_alpha * conformal;
    let rho = jet.pot.rho;
    DMatrix::identity(n, n) * (conformal * conformal) + &du * du.transpose() * (rho * rho)
}

/// Disk radius of the hyperbolic radius `r`.
fn disk_radius(r: f64) -> f64 {
    r / (1.0 + r.hypot(1.0))
}

fn check_margin(family: &GraphFamily, x: &DiskPoint, cfg: &FdConfig) -> Result<()> {
    cfg.validate()?;
    if x.dim() != family.n {
        return Err(Error::DimensionMismatch { expected: family.n, found: x.dim() });
    }
    let norm = x.coords().norm();
    let mut distance = 1.0 - norm;
    if let Some(b) = family.boundary {
        distance = distance.min(norm - disk_radius(b.radius));
    }
    if distance < 4.0 * cfg.step {
        return Err(Error::StepTooLargeNearBoundary { step: cfg.step, distance });
    }
    Ok(())
}

fn shifted(x: &DiskPoint, moves: &[(usize, f64)]) -> Result<DiskPoint> {
    let mut y = x.coords().clone();
    for &(i, d) in moves {
        y[i] += d;
    }
    DiskPoint::new(y)
}

/// Flattened first and second derivatives of a vector-valued function at `x`.
struct Derivatives {
    value: DVector<f64>,
    first: Vec<DVector<f64>>,
    second: Vec<Vec<DVector<f64>>>,
}

#[allow(clippy::needless_range_loop)]
fn raw_derivatives<F>(f: &F, x: &DiskPoint, h: f64, scheme: FdScheme, mixed: bool) -> Result<Derivatives>
where
    F: Fn(&DiskPoint) -> Result<DVector<f64>>,
{
    let n = x.dim();
    let value = f(x)?;
    let zero = DVector::zeros(value.len());
    let mut first = vec![zero.clone(); n];
    let mut second = vec![vec![zero.clone(); n]; n];
    for i in 0..n {
        for &(o, w) in scheme.first() {
            first[i] += f(&shifted(x, &[(i, o * h)])?)? * (w / h);
        }
        if !mixed {
            continue;
        }
        for &(o, w) in scheme.second() {
            let v = if o == 0.0 { value.clone() } else { f(&shifted(x, &[(i, o * h)])?)? };
            second[i][i] += v * (w / (h * h));
        }
        for j in 0..i {
            let mut acc = zero.clone();
            for &(oi, wi) in scheme.first() {
                for &(oj, wj) in scheme.first() {
                    acc += f(&shifted(x, &[(i, oi * h), (j, oj * h)])?)? * (wi * wj);
                }
            }
            acc /= h * h;
            second[j][i] = acc.clone();
            second[i][j] = acc;
        }
    }
    Ok(Derivatives { value, first, second })
}

fn derivatives<F>(f: &F, x: &DiskPoint, cfg: &FdConfig, mixed: bool) -> Result<Derivatives>
where
    F: Fn(&DiskPoint) -> Result<DVector<f64>>,
{
    let mut table: Vec<Derivatives> = (0..=cfg.richardson_levels)
        .map(|l| raw_derivatives(f, x, cfg.step / 2f64.powi(l as i32), cfg.scheme, mixed))
        .collect::<Result<_>>()?;
    // errors expand in even powers of h
    let mut p = cfg.scheme.order() as i32;
    while table.len() > 1 {
        let factor = 2f64.powi(p);
        let combine = |fine: &DVector<f64>, coarse: &DVector<f64>| (fine * factor - coarse) / (factor - 1.0);
        table = table
            .windows(2)
            .map(|w| Derivatives {
                value: w[0].value.clone(),
                first: w[1].first.iter().zip(&w[0].first).map(|(a, b)| combine(a, b)).collect(),
                second: w[1]
                    .second
                    .iter()
                    .zip(&w[0].second)
                    .map(|(ra, rb)| ra.iter().zip(rb).map(|(a, b)| combine(a, b)).collect())
                    .collect(),
            })
            .collect();
        p += 2;
    }
    Ok(table.pop().expect("at least one level"))
}

fn flatten(m: &DMatrix<f64>) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}

fn unflatten(v: &DVector<f64>, n: usize) -> DMatrix<f64> {
    DMatrix::from_column_slice(n, n, v.as_slice())
}

/// Scalar curvature from Christoffel symbols of the coordinate metric.
pub fn scalar_curvature_fd(family: &GraphFamily, x: &DiskPoint, cfg: &FdConfig) -> Result<f64> {
    check_margin(family, x, cfg)?;
    let n = x.dim();
    let metric = |y: &DiskPoint| coordinate_metric(family, y).map(|g| flatten(&g));
    let d = derivatives(&metric, x, cfg, true)?;
    let g = unflatten(&d.value, n);
    let g_inv = g.clone().try_inverse().ok_or(Error::InvalidPoint(g.determinant()))?;
    let dg: Vec<DMatrix<f64>> = d.first.iter().map(|v| unflatten(v, n)).collect();
    let ddg: Vec<Vec<DMatrix<f64>>> =
        d.second.iter().map(|row| row.iter().map(|v| unflatten(v, n)).collect()).collect();

    // Γ_lij = ½(∂_i g_jl + ∂_j g_il - ∂_l g_ij) and its derivative in direction k
    let lower = |l: usize, i: usize, j: usize| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
    let d_lower = |k: usize, l: usize, i: usize, j: usize| {
        0.5 * (ddg[k][i][(j, l)] + ddg[k][j][(i, l)] - ddg[k][l][(i, j)])
    };
    let d_inv: Vec<DMatrix<f64>> = dg.iter().map(|dk| -(&g_inv * dk * &g_inv)).collect();
    let mut gamma = vec![DMatrix::zeros(n, n); n];
    let mut d_gamma = vec![vec![DMatrix::zeros(n, n); n]; n];
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += g_inv[(m, l)] * lower(l, i, j);
                }
                gamma[m][(i, j)] = acc;
                for k in 0..n {
                    let mut acc = 0.0;
                    for l in 0..n {
                        acc += d_inv[k][(m, l)] * lower(l, i, j) + g_inv[(m, l)] * d_lower(k, l, i, j);
                    }
                    d_gamma[k][m][(i, j)] = acc;
                }
            }
        }
    }
    // R_ij = ∂_k Γ^k_ij - ∂_j Γ^k_ik + Γ^k_kl Γ^l_ij - Γ^k_jl Γ^l_ik
    let mut scalar = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut ric = 0.0;
            for k in 0..n {
                ric += d_gamma[k][k][(i, j)] - d_gamma[j][k][(i, k)];
                for l in 0..n {
                    ric += gamma[k][(k, l)] * gamma[l][(i, j)] - gamma[k][(j, l)] * gamma[l][(i, k)];
                }
            }
            scalar += g_inv[(i, j)] * ric;
        }
    }
    Ok(scalar)
}

/// `div_g V` for a field given by its components in the orthonormal base frame.
pub fn divergence_fd<F>(family: &GraphFamily, field: F, x: &DiskPoint, cfg: &FdConfig) -> Result<f64>
where
    F: Fn(&GraphJet) -> DVector<f64>,
{
    check_margin(family, x, cfg)?;
    // (√det g) V^i in coordinates
    let flux = |y: &DiskPoint| -> Result<DVector<f64>> {
        let jet = family.derivative_jet(&y.to_model())?;
        let g = metric_from_jet(&jet, y);
        Ok(field(&jet) * (y.frame_scale() * g.determinant().sqrt()))
    };
    let d = derivatives(&flux, x, cfg, false)?;
    let g = coordinate_metric(family, x)?;
    let div: f64 = (0..x.dim()).map(|i| d.first[i][i]).sum();
    Ok(div / g.determinant().sqrt())
}

/// Absolute residuals of the flux, recipe and Gauss identities at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityResiduals {
    /// `|div_g(GXᵀ) - 2S₂Θ|`.
    pub flux: f64,
    /// `J(ρ) - W³ GXᵀ` componentwise.
    pub recipe: DVector<f64>,
    /// `|R_fd - (-n(n-1) + 2S₂)|`.
    pub gauss: f64,
    pub scalar_fd: f64,
    pub scalar_gauss: f64,
}

pub fn residual_suite(family: &GraphFamily, x: &DiskPoint, cfg: &FdConfig) -> Result<IdentityResiduals> {
    let jet = family.derivative_jet(&x.to_model())?;
    let ext = extrinsic_data(&jet);
    let div = divergence_fd(family, |j| extrinsic_data(j).gxt, x, cfg)?;
    let flux = (div - 2.0 * ext.s2 * ext.theta).abs();
    let scalar_fd = scalar_curvature_fd(family, x, cfg)?;
    let n = family.n as f64;
    let scalar_gauss = -n * (n - 1.0) + 2.0 * ext.s2;
    let (recipe, _) = recipe_residual(&jet);
    Ok(IdentityResiduals { flux, recipe, gauss: (scalar_fd - scalar_gauss).abs(), scalar_fd, scalar_gauss })
}

/// [`residual_suite`] at many points in parallel, in input order.
pub fn residual_suite_many(
    family: &GraphFamily,
    points: &[DiskPoint],
    cfg: &FdConfig,
) -> Result<Vec<IdentityResiduals>> {
    points.par_iter().map(|x| residual_suite(family, x, cfg)).collect()
}

/// Observed order `log₂(e(h)/e(h/2))` of the largest flux residual over `points`,
/// without Richardson extrapolation.
pub fn flux_convergence_order(
    family: &GraphFamily,
    points: &[DiskPoint],
    step: f64,
    scheme: FdScheme,
) -> Result<f64> {
    let worst = |h: f64| -> Result<f64> {
        let cfg = FdConfig { step: h, scheme, richardson_levels: 0 };
        let res: Vec<f64> = points
            .par_iter()
            .map(|x| {
                let ext = extrinsic_data(&family.derivative_jet(&x.to_model())?);
                let div = divergence_fd(family, |j| extrinsic_data(j).gxt, x, &cfg)?;
                Ok((div - 2.0 * ext.s2 * ext.theta).abs())
            })
            .collect::<Result<_>>()?;
        Ok(res.into_iter().fold(0.0, f64::max))
    };
    Ok((worst(step)? / worst(step / 2.0)?).log2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_library::{make_family, FamilySpec};

    fn zero(n: usize) -> GraphFamily {
        make_family(&FamilySpec::Zero { n, t0: 0.0 }).unwrap()
    }

    fn horosphere(n: usize) -> GraphFamily {
        make_family(&FamilySpec::Horosphere { n, d: 0.0, sign: 1.0 }).unwrap()
    }

    #[test]
    fn metric_at_origin_of_zero_slice() {
        let g = coordinate_metric(&zero(3), &DiskPoint::origin(3)).unwrap();
        assert!((g - DMatrix::identity(3, 3) * 4.0).amax() < 1e-15);
    }

    #[test]
    fn frame_and_coordinate_metrics_agree() {
        let fam = horosphere(3);
        let x = DiskPoint::from_slice(&[0.3, -0.2, 0.4]).unwrap();
        let jet = fam.derivative_jet(&x.to_model()).unwrap();
        let lam = x.frame_scale();
        let frame = coordinate_metric(&fam, &x).unwrap() * (lam * lam);
        let expected = extrinsic_data(&jet).g;
        assert!((frame - expected).amax() < 1e-12);
    }

    #[test]
    fn hyperbolic_and_flat_scalar_curvature() {
        let cfg = FdConfig::default();
        let x = DiskPoint::from_slice(&[0.1, 0.2, -0.3]).unwrap();
        let r = scalar_curvature_fd(&zero(3), &x, &cfg).unwrap();
        assert!((r + 6.0).abs() < 1e-6, "{r}");
        let r = scalar_curvature_fd(&horosphere(3), &x, &cfg).unwrap();
        assert!(r.abs() < 1e-5, "{r}");
    }

    #[test]
    fn laplacian_of_rho_on_the_slice() {
        let fam = zero(3);
        let x = DiskPoint::from_slice(&[0.4, 0.1, -0.2]).unwrap();
        let rho = x.to_model().rho();
        let div = divergence_fd(&fam, |j| j.pot.rho_alpha.clone(), &x, &FdConfig::default()).unwrap();
        assert!((div - 3.0 * rho).abs() < 1e-6, "{div} vs {}", 3.0 * rho);
        let div = divergence_fd(&fam, |j| DVector::zeros(j.dim()), &x, &FdConfig::default()).unwrap();
        assert_eq!(div, 0.0);
    }

    #[test]
    fn zero_slice_residuals_vanish() {
        let cfg = FdConfig { step: 2e-2, scheme: FdScheme::Central4, richardson_levels: 2 };
        let res = residual_suite(&zero(2), &DiskPoint::from_slice(&[0.2, 0.5]).unwrap(), &cfg).unwrap();
        assert!(res.flux <= 1e-10 && res.recipe.amax() <= 1e-10 && res.gauss <= 1e-10, "{res:?}");
    }

    #[test]
    fn steps_near_the_edge_are_rejected() {
        let x = DiskPoint::from_slice(&[0.999, 0.0]).unwrap();
        let err = scalar_curvature_fd(&zero(2), &x, &FdConfig::default()).unwrap_err();
        assert!(matches!(err, Error::StepTooLargeNearBoundary { .. }));
        let bad = FdConfig { step: 0.5, ..FdConfig::default() };
        assert!(bad.validate().is_err());
    }
}
