//! Extrinsic geometry of a vertical graph `t = u(x)` in `H^n ×_ρ R ≅ H^{n+1}`.
//!
//! Everything is expressed in the orthonormal frame `e_α` of the base, with
//! `u_αβ` the covariant Hessian of `u` for the hyperbolic metric `b`. The unit
//! normal is `N = (e_0 - ρ∇u)/W`, `W² = 1 + ρ²|∇u|²`, and `B = -∇̄N`.

use nalgebra::{DMatrix, DVector};

use crate::graph_library::WallSpec;
use crate::model_space::{AmbientJet, DiskPoint, ModelPoint, PotentialJet};
use crate::{Error, Result};

/// Second-order jet of a graph function together with the potential jet.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphJet {
    pub point: ModelPoint,
    /// Height of the graph; `NaN` when the family skipped evaluating it.
    pub u: f64,
    pub u_alpha: DVector<f64>,
    pub u_alphabeta: DMatrix<f64>,
    pub pot: PotentialJet,
}

impl GraphJet {
    /// Frame jet of an ambient function at `point`.
    pub fn from_ambient(point: &ModelPoint, jet: &AmbientJet) -> Self {
        Self {
            point: point.clone(),
            u: jet.value,
            u_alpha: jet.frame_gradient(point),
            u_alphabeta: jet.frame_hessian(point),
            pot: PotentialJet::at(point),
        }
    }

    pub fn zero(point: &ModelPoint) -> Self {
        let n = point.dim();
        Self {
            point: point.clone(),
            u: 0.0,
            u_alpha: DVector::zeros(n),
            u_alphabeta: DMatrix::zeros(n, n),
            pot: PotentialJet::at(point),
        }
    }

    pub fn dim(&self) -> usize {
        self.u_alpha.len()
    }

    pub fn disk_point(&self) -> Result<DiskPoint> {
        self.point.to_disk()
    }

    /// Covariant derivative `e_αβ,γ` of `e_αβ = ρ² u_α u_β`, indexed `[γ][(α, β)]`.
    pub fn perturbation_derivative(&self) -> Vec<DMatrix<f64>> {
        let n = self.dim();
        let rho = self.pot.rho;
        let a = &self.u_alpha;
        let h = &self.u_alphabeta;
        (0..n)
            .map(|c| {
                let hc = h.column(c);
                DMatrix::from_fn(n, n, |i, j| {
                    2.0 * rho * self.pot.rho_alpha[c] * a[i] * a[j]
                        + rho * rho * (hc[i] * a[j] + a[i] * hc[j])
                })
            })
            .collect()
    }

    /// `e_αβ = ρ² u_α u_β`.
    pub fn perturbation(&self) -> DMatrix<f64> {
        let rho = self.pot.rho;
        &self.u_alpha * self.u_alpha.transpose() * (rho * rho)
    }
}

/// Pointwise extrinsic invariants of the graph.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtrinsicData {
    pub w: f64,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    pub s: DMatrix<f64>,
    pub b: DMatrix<f64>,
    pub s1: f64,
    pub s2: f64,
    pub gxt: DVector<f64>,
    pub theta: f64,
    pub dm_density: f64,
}

/// `W = √(1 + ρ²|∇u|²)` without overflow.
pub fn graph_w(rho: f64, u_alpha: &DVector<f64>) -> f64 {
    (rho * u_alpha.norm()).hypot(1.0)
}

/// `g⁻¹ = (I - ââᵀ) + ââᵀ/W²`, avoiding cancellation when `ρ|∇u|` is large.
fn metric_inverse(a: &DVector<f64>, w: f64) -> DMatrix<f64> {
    let n = a.len();
    let norm = a.norm();
    let mut out = DMatrix::identity(n, n);
    if norm > 0.0 {
        let hat = a / norm;
        let proj = &hat * hat.transpose();
        out -= &proj;
        out += proj / (w * w);
    }
    out
}

/// Second fundamental form `S_βγ = (1/W)(ρu_βγ + ρ_βu_γ + ρ_γu_β + ρ²u_βu_γ⟨∇ρ,∇u⟩)`.
fn second_fundamental_form(j: &GraphJet, w: f64) -> DMatrix<f64> {
    let rho = j.pot.rho;
    let a = &j.u_alpha;
    let p = &j.pot.rho_alpha;
    let pa = p.dot(a);
    let mut s = &j.u_alphabeta * rho + p * a.transpose() + a * p.transpose();
    s += a * a.transpose() * (rho * rho * pa);
    s /= w;
    crate::model_space::symmetrize(&mut s);
    s
}

pub fn extrinsic_data(j: &GraphJet) -> ExtrinsicData {
    let n = j.dim();
    let rho = j.pot.rho;
    let w = graph_w(rho, &j.u_alpha);
    let g = DMatrix::identity(n, n) + j.perturbation();
    let g_inv = metric_inverse(&j.u_alpha, w);
    let s = second_fundamental_form(j, w);
    let b = &g_inv * &s;
    let s1 = b.trace();
    let s2 = 0.5 * (s1 * s1 - (&b * &b).trace());
    ExtrinsicData { w, g, g_inv, s, b, s1, s2, gxt: newton_killing(j), theta: rho / w, dm_density: w }
}

/// `(GXᵀ)_α = (ρ³/W³)(u_ββu_α - u_αβu_β) + (ρ²/W³)(ρ_βu_αu_β - ρ_αu_βu_β)`.
pub fn newton_killing(j: &GraphJet) -> DVector<f64> {
    let rho = j.pot.rho;
    let a = &j.u_alpha;
    let h = &j.u_alphabeta;
    let p = &j.pot.rho_alpha;
    let w = graph_w(rho, a);
    let w3 = w * w * w;
    let first = (a * h.trace() - h * a) * (rho * rho * rho / w3);
    let second = (a * p.dot(a) - p * a.norm_squared()) * (rho * rho / w3);
    first + second
}

/// `G Xᵀ` assembled from `B`, `G = S₁I - B` and `Xᵀ_α = (ρ²/W²)u_α`.
pub fn newton_killing_compositional(ext: &ExtrinsicData, j: &GraphJet) -> DVector<f64> {
    let rho = j.pot.rho;
    let xt = &j.u_alpha * (rho * rho / (ext.w * ext.w));
    &xt * ext.s1 - &ext.b * &xt
}

/// Scalar curvature of the graph from the Gauss equation, `R_g = -n(n-1) + 2S₂`,
/// and the excess `𝔯 = R_g + n(n-1)`.
pub fn scalar_curvature_gauss(j: &GraphJet) -> (f64, f64) {
    let n = j.dim() as f64;
    let s2 = extrinsic_data(j).s2;
    (-n * (n - 1.0) + 2.0 * s2, 2.0 * s2)
}

/// Mean curvature of the level set `{ρ = const}` inside the hypersurface with
/// metric `δ + e`, measured along the conormal pointing to larger `ρ`.
///
/// `e` and its covariant derivative come from [`GraphJet::perturbation`] and
/// [`GraphJet::perturbation_derivative`]; the level set's geometry follows from
/// `Hess_g ρ = ρδ - C^γ ρ_γ` with `C` the difference of Levi-Civita connections.
pub fn level_sphere_mean_curvature(j: &GraphJet) -> f64 {
    level_sphere_mean_curvature_with_bound(j).0
}

/// Mean curvature together with a running bound on its rounding error.
///
/// Near a vertical graph the summands reach `|u_αβ|`-sized magnitudes that cancel,
/// so the bound can exceed the value itself.
pub fn level_sphere_mean_curvature_with_bound(j: &GraphJet) -> (f64, f64) {
    let n = j.dim();
    let p = &j.pot.rho_alpha;
    let w = graph_w(j.pot.rho, &j.u_alpha);
    let g_inv = metric_inverse(&j.u_alpha, w);
    let de = j.perturbation_derivative();
    let gp = &g_inv * p;
    // C^γ_αβ p_γ = ½ (gp)^δ (e_βδ,α + e_αδ,β - e_αβ,δ)
    let mut cp = DMatrix::zeros(n, n);
    let mut cp_abs = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            let mut acc = 0.0;
            let mut mag = 0.0;
            for d in 0..n {
                acc += gp[d] * (de[a][(b, d)] + de[b][(a, d)] - de[d][(a, b)]);
                mag += gp[d].abs() * (de[a][(b, d)].abs() + de[b][(a, d)].abs() + de[d][(a, b)].abs());
            }
            cp[(a, b)] = 0.5 * acc;
            cp_abs[(a, b)] = 0.5 * mag + j.pot.rho;
        }
    }
    let hess = DMatrix::identity(n, n) * j.pot.rho - cp;
    let grad_norm = p.dot(&gp).sqrt();
    let nu = &gp / grad_norm;
    let laplacian = (&g_inv * &hess).trace();
    let value = (laplacian - nu.dot(&(&hess * &nu))) / grad_norm;
    let nu_abs = nu.abs();
    let mag = g_inv.abs().component_mul(&cp_abs).sum() + nu_abs.dot(&(&cp_abs * &nu_abs));
    (value, 4.0 * (n + 1) as f64 * f64::EPSILON * mag / grad_norm)
}

/// Data along the boundary `Γ = M ∩ wall` of a graph.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFrameData {
    /// Mean curvature of `Γ` inside the wall, for the inward unit normal.
    pub s1_gamma: f64,
    /// `ρ/𝒲` where `𝒲` is the wall's `W`.
    pub weight: f64,
    /// Mean curvature of `Γ` inside the graph `M`.
    pub mean_curv_in_m: f64,
    /// Rounding bound on `mean_curv_in_m`.
    pub mean_curv_error: f64,
    /// `|⟨N, ξ⟩|` between the unit normals of graph and wall.
    pub orthogonality_defect: f64,
}

/// Boundary data for a rotationally placed `Γ = {ρ = const}` on a wall.
///
/// `conormal_hint = +1` treats the region `{ρ > ρ(Γ)}` as the interior of the
/// hypersurfaces, so a round `Γ` has positive mean curvature; `-1` reverses it.
pub fn boundary_frame_data(j: &GraphJet, conormal_hint: f64, wall: &WallSpec) -> Result<BoundaryFrameData> {
    let wall_jet = wall.jet(&j.point);
    let distance = (j.u - wall_jet.u).abs();
    if !(distance <= 1e-8 * j.u.abs().max(1.0)) {
        return Err(Error::WallMismatch { distance });
    }
    Ok(boundary_frame_data_unchecked(j, &wall_jet, conormal_hint))
}

pub(crate) fn boundary_frame_data_unchecked(
    j: &GraphJet,
    wall_jet: &GraphJet,
    conormal_hint: f64,
) -> BoundaryFrameData {
    let sign = conormal_hint.signum();
    let rho = j.pot.rho;
    let w = graph_w(rho, &j.u_alpha);
    let ww = graph_w(rho, &wall_jet.u_alpha);
    let inner = 1.0 + rho * rho * j.u_alpha.dot(&wall_jet.u_alpha);
    let (h_m, h_err) = level_sphere_mean_curvature_with_bound(j);
    BoundaryFrameData {
        s1_gamma: sign * level_sphere_mean_curvature(wall_jet),
        weight: rho / ww,
        mean_curv_in_m: sign * h_m,
        mean_curv_error: h_err,
        orthogonality_defect: (inner / (w * ww)).abs(),
    }
}
