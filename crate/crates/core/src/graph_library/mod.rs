//! Built-in graph families.
//!
//! A family is a function `u` on `H^n` given through an extension to the ambient
//! `R^{n+1}` (so that jets come from Euclidean derivatives, see
//! [`AmbientJet`]), an optional inner boundary on a wall, and a chart isometry
//! used when the mass is evaluated in a transformed chart.

mod profiles;
mod spline;
mod walls;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub(crate) use profiles::radius_of;
pub use profiles::{
    horizon_radius, AsinhProfile, ConstantProfile, InverseProfile, LogProfile, MassFunction, MassProfile,
    RadialProfile,
};
pub use spline::{spline_profile, SplineProfile};
pub use walls::WallSpec;

use crate::graph_geometry::GraphJet;
use crate::model_space::{check_dim, AmbientJet, Isometry, ModelPoint, PotentialJet};
use crate::{Error, Result};

/// A graph function, given by an extension `F` to `R^{n+1}` whose restriction to
/// the hyperboloid is `u`.
pub trait GraphFunction: Send + Sync + fmt::Debug {
    fn value(&self, z: &DVector<f64>) -> Result<f64>;
    /// Euclidean gradient and Hessian of `F` at `z`.
    fn derivatives(&self, z: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)>;
}

/// `u = f(ρ) = f(z_0)`.
#[derive(Clone, Debug)]
pub struct RadialGraph {
    pub n: usize,
    pub profile: Arc<dyn RadialProfile>,
}

impl GraphFunction for RadialGraph {
    fn value(&self, z: &DVector<f64>) -> Result<f64> {
        self.profile.value(z[0])
    }

    fn derivatives(&self, z: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let (d1, d2) = self.profile.derivs(z[0])?;
        let jet = AmbientJet::radial(self.n, 0.0, d1, d2);
        Ok((jet.grad, jet.hess))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerturbationMode {
    /// `Y = z_1`.
    #[default]
    Dipole,
    /// `Y = z_1 z_2`.
    Quadrupole,
}

/// `u = ε Y(z) ρ^{-k}` with `k = τ/2 + deg Y + 1`, so that `ρ|∇u|` and
/// `|ρ_β u_α + ρ u_αβ|` decay like `r^{-τ/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayPerturbation {
    pub n: usize,
    pub epsilon: f64,
    pub tau: f64,
    pub mode: PerturbationMode,
}

impl DecayPerturbation {
    fn exponent(&self) -> f64 {
        let degree = match self.mode {
            PerturbationMode::Dipole => 1.0,
            PerturbationMode::Quadrupole => 2.0,
        };
        self.tau / 2.0 + degree + 1.0
    }

    /// `(Y, ∇Y, ∇²Y)`.
    fn harmonic(&self, z: &DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>) {
        let n1 = self.n + 1;
        let mut g = DVector::zeros(n1);
        let mut h = DMatrix::zeros(n1, n1);
        match self.mode {
            PerturbationMode::Dipole => {
                g[1] = 1.0;
                (z[1], g, h)
            }
            PerturbationMode::Quadrupole => {
                g[1] = z[2];
                g[2] = z[1];
                h[(1, 2)] = 1.0;
                h[(2, 1)] = 1.0;
                (z[1] * z[2], g, h)
            }
        }
    }
}

impl GraphFunction for DecayPerturbation {
    fn value(&self, z: &DVector<f64>) -> Result<f64> {
        let (y, _, _) = self.harmonic(z);
        Ok(self.epsilon * y * z[0].powf(-self.exponent()))
    }

    fn derivatives(&self, z: &DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
        let k = self.exponent();
        let (y, gy, hy) = self.harmonic(z);
        let h0 = z[0].powf(-k);
        let h1 = -k * h0 / z[0];
        let h2 = k * (k + 1.0) * h0 / (z[0] * z[0]);
        let mut e0 = DVector::zeros(self.n + 1);
        e0[0] = 1.0;
        let grad = (&gy * h0 + &e0 * (y * h1)) * self.epsilon;
        let hess =
            (hy * h0 + (&gy * e0.transpose() + &e0 * gy.transpose()) * h1 + &e0 * e0.transpose() * (y * h2))
                * self.epsilon;
        Ok((grad, hess))
    }
}

/// Inner boundary `Γ = {r = radius}` (in the graph chart) lying on a wall.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InnerBoundary {
    pub wall: WallSpec,
    pub radius: f64,
    /// The graph becomes vertical along `Γ`; jets are then sampled slightly
    /// outside it.
    pub singular: bool,
}

impl InnerBoundary {
    /// Relative offset of the sampling sphere for singular boundaries.
    pub const PROBE_OFFSET: f64 = 1e-12;

    pub fn probe_radius(&self) -> f64 {
        if self.singular {
            self.radius * (1.0 + Self::PROBE_OFFSET)
        } else {
            self.radius
        }
    }
}

/// A named graph family with everything needed by the geometry and mass code.
#[derive(Clone, Debug)]
pub struct GraphFamily {
    pub name: String,
    pub n: usize,
    pub params: BTreeMap<String, f64>,
    pub function: Arc<dyn GraphFunction>,
    /// Chart in which mass integrals are evaluated: the graph data is transported
    /// by this isometry (`u ∘ C⁻¹`, `ρ ∘ C⁻¹`).
    pub chart: Isometry,
    pub boundary: Option<InnerBoundary>,
    pub declared_tau: Option<f64>,
    /// Radius (graph chart) inside which the family is undefined or has its core.
    pub asymptotic_radius: f64,
    /// Jets are exact closed forms (or quadratures of closed forms).
    pub analytic: bool,
}

impl GraphFamily {
    fn check_point(&self, p: &ModelPoint) -> Result<()> {
        if p.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: p.dim() });
        }
        Ok(())
    }

    pub fn value(&self, p: &ModelPoint) -> Result<f64> {
        self.check_point(p)?;
        self.function.value(p.z())
    }

    /// Frame jet in the graph chart, including the height `u`.
    pub fn jet(&self, p: &ModelPoint) -> Result<GraphJet> {
        let mut jet = self.derivative_jet(p)?;
        jet.u = self.function.value(p.z())?;
        Ok(jet)
    }

    /// Frame jet without the height (`u` is `NaN`), for integrands.
    pub fn derivative_jet(&self, p: &ModelPoint) -> Result<GraphJet> {
        self.check_point(p)?;
        let (grad, hess) = self.function.derivatives(p.z())?;
        let jet = AmbientJet { value: f64::NAN, grad, hess };
        Ok(GraphJet::from_ambient(p, &jet))
    }

    /// Jet of the transported data `(u ∘ C⁻¹, σ = ρ ∘ C⁻¹)` at `p` in the mass
    /// chart. The potential slot of the returned jet holds `σ`.
    pub fn chart_jet(&self, p: &ModelPoint) -> Result<GraphJet> {
        self.check_point(p)?;
        if self.chart_is_identity() {
            return self.derivative_jet(p);
        }
        let inv = self.chart.inverse().matrix;
        let q = inv.clone() * p.z();
        let (grad, hess) = self.function.derivatives(&q)?;
        let pulled = AmbientJet { value: f64::NAN, grad, hess }.pull_back(&inv);
        let mut jet = GraphJet::from_ambient(p, &pulled);
        let c = inv.row(0).transpose();
        let sigma = c.dot(p.z());
        jet.pot = PotentialJet {
            rho: sigma,
            rho_alpha: p.frame() * c,
            hess_rho: DMatrix::identity(self.n, self.n) * sigma,
        };
        Ok(jet)
    }

    pub fn chart_is_identity(&self) -> bool {
        self.chart.matrix == DMatrix::identity(self.n + 1, self.n + 1)
    }

    pub fn with_chart(mut self, chart: Isometry) -> Result<Self> {
        if chart.dim() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: chart.dim() });
        }
        self.chart = chart;
        Ok(self)
    }

    /// Sampling point on `Γ` in direction `theta`.
    pub fn boundary_point(&self, theta: &DVector<f64>) -> Option<ModelPoint> {
        self.boundary.map(|b| ModelPoint::from_polar(b.probe_radius(), theta))
    }
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn cap_beta() -> f64 {
    0.3
}

fn three() -> usize {
    3
}

/// Config record describing a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    /// The slice `u ≡ t0`.
    #[serde(alias = "slice")]
    Zero {
        n: usize,
        #[serde(default)]
        t0: f64,
    },
    /// `u = d + sign · log ρ`.
    Horosphere {
        n: usize,
        #[serde(default)]
        d: f64,
        #[serde(default = "one")]
        sign: f64,
    },
    /// `u = c/ρ`.
    SigmaC {
        n: usize,
        c: f64,
    },
    /// `u = arcsinh(c/ρ)`.
    TrueEquidistant {
        n: usize,
        c: f64,
    },
    AdsSchwarzschild {
        n: usize,
        m: f64,
    },
    /// `u = f(ρ)` interpolated from a table.
    RadialSpline {
        n: usize,
        rho: Vec<f64>,
        f: Vec<f64>,
    },
    DecayPerturbation {
        n: usize,
        #[serde(default = "one")]
        epsilon: f64,
        tau: f64,
        #[serde(default)]
        mode: PerturbationMode,
    },
    /// Radial graph over `r ≥ r0` meeting the horosphere `t = d + log ρ`
    /// orthogonally, with mass function `m_∞ - β (r0/r)^p`.
    HorosphereCap {
        #[serde(default = "three")]
        n: usize,
        #[serde(default = "two")]
        r0: f64,
        #[serde(default = "cap_beta")]
        beta: f64,
        #[serde(default = "two")]
        p: f64,
        #[serde(default)]
        d: f64,
    },
}

impl FamilySpec {
    pub fn dim(&self) -> usize {
        match self {
            FamilySpec::Zero { n, .. }
            | FamilySpec::Horosphere { n, .. }
            | FamilySpec::SigmaC { n, .. }
            | FamilySpec::TrueEquidistant { n, .. }
            | FamilySpec::AdsSchwarzschild { n, .. }
            | FamilySpec::RadialSpline { n, .. }
            | FamilySpec::DecayPerturbation { n, .. }
            | FamilySpec::HorosphereCap { n, .. } => *n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    pub i: usize,
    pub j: usize,
    pub angle: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostSpec {
    pub axis: usize,
    pub rapidity: f64,
}

/// Chart isometry `C = B_k ⋯ B_1 R_m ⋯ R_1`: rotations act first, then boosts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartSpec {
    #[serde(default)]
    pub rotations: Vec<RotationSpec>,
    #[serde(default)]
    pub boosts: Vec<BoostSpec>,
}

impl ChartSpec {
    pub fn is_identity(&self) -> bool {
        self.rotations.is_empty() && self.boosts.is_empty()
    }

    pub fn isometry(&self, n: usize) -> Result<Isometry> {
        let mut iso = Isometry::identity(n);
        for r in &self.rotations {
            iso = Isometry::rotation(n, r.i, r.j, r.angle)?.compose(&iso);
        }
        for b in &self.boosts {
            iso = Isometry::boost(n, b.axis, b.rapidity)?.compose(&iso);
        }
        Ok(iso)
    }
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::BadParams(format!("{name} = {v} is not finite")))
    }
}

fn radial(
    name: &str,
    n: usize,
    profile: Arc<dyn RadialProfile>,
    params: BTreeMap<String, f64>,
) -> GraphFamily {
    GraphFamily {
        name: name.to_string(),
        n,
        params,
        function: Arc::new(RadialGraph { n, profile }),
        chart: Isometry::identity(n),
        boundary: None,
        declared_tau: None,
        asymptotic_radius: 0.0,
        analytic: true,
    }
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn make_family(spec: &FamilySpec) -> Result<GraphFamily> {
    let n = spec.dim();
    check_dim(n)?;
    let family = match spec {
        FamilySpec::Zero { t0, .. } => {
            let t0 = finite("t0", *t0)?;
            radial("zero", n, Arc::new(ConstantProfile(t0)), params(&[("t0", t0)]))
        }
        FamilySpec::Horosphere { d, sign, .. } => {
            let d = finite("d", *d)?;
            if *sign != 1.0 && *sign != -1.0 {
                return Err(Error::BadParams(format!("horosphere sign must be ±1, got {sign}")));
            }
            let prof = LogProfile { d, sign: *sign };
            radial("horosphere", n, Arc::new(prof), params(&[("d", d), ("sign", *sign)]))
        }
        FamilySpec::SigmaC { c, .. } => {
            let c = finite("c", *c)?;
            radial("sigma_c", n, Arc::new(InverseProfile { c }), params(&[("c", c)]))
        }
        FamilySpec::TrueEquidistant { c, .. } => {
            let c = finite("c", *c)?;
            radial("true_equidistant", n, Arc::new(AsinhProfile { c }), params(&[("c", c)]))
        }
        FamilySpec::AdsSchwarzschild { m, .. } => ads_schwarzschild(n, *m)?,
        FamilySpec::RadialSpline { rho, f, .. } => {
            if rho.len() != f.len() {
                return Err(Error::BadParams(format!(
                    "spline columns differ in length ({} vs {})",
                    rho.len(),
                    f.len()
                )));
            }
            let table: Vec<(f64, f64)> = rho.iter().copied().zip(f.iter().copied()).collect();
            let s = spline_profile(&table)?;
            let (lo, hi) = s.domain();
            if lo < 1.0 {
                return Err(Error::SplineDomain { query: lo, lo: 1.0, hi });
            }
            let mut fam =
                radial("radial_spline", n, Arc::new(s), params(&[("rho_min", lo), ("rho_max", hi)]));
            fam.analytic = false;
            fam.asymptotic_radius = radius_of(lo);
            fam
        }
        FamilySpec::DecayPerturbation { epsilon, tau, mode, .. } => {
            let epsilon = finite("epsilon", *epsilon)?;
            let tau = finite("tau", *tau)?;
            if tau <= 0.0 {
                return Err(Error::BadParams(format!("decay order tau = {tau} must be positive")));
            }
            if *mode == PerturbationMode::Quadrupole && n < 2 {
                return Err(Error::BadParams("quadrupole mode needs n ≥ 2".into()));
            }
            GraphFamily {
                name: "decay_perturbation".into(),
                n,
                params: params(&[("epsilon", epsilon), ("tau", tau)]),
                function: Arc::new(DecayPerturbation { n, epsilon, tau, mode: *mode }),
                chart: Isometry::identity(n),
                boundary: None,
                declared_tau: Some(tau),
                asymptotic_radius: 0.0,
                analytic: true,
            }
        }
        FamilySpec::HorosphereCap { r0, beta, p, d, .. } => horosphere_cap(n, *r0, *beta, *p, *d)?,
    };
    Ok(family)
}

/// Radial graph inducing the AdS-Schwarzschild slice `dr²/V + r²dω²`,
/// `V = 1 + r² - 2m r^{2-n}`, with `u = 0` on the horizon `V(r_h) = 0`.
pub fn ads_schwarzschild(n: usize, m: f64) -> Result<GraphFamily> {
    check_dim(n)?;
    let r_h = horizon_radius(n, m)?;
    let prof = MassProfile {
        n,
        mu: MassFunction::Constant(m),
        sign: 1.0,
        r_start: r_h,
        u_start: 0.0,
        singular: true,
    };
    let mut fam = radial("ads_schwarzschild", n, Arc::new(prof), params(&[("m", m), ("r_h", r_h)]));
    fam.boundary =
        Some(InnerBoundary { wall: WallSpec::GeodesicSlice { t0: 0.0 }, radius: r_h, singular: true });
    fam.asymptotic_radius = r_h;
    Ok(fam)
}

/// Orthogonality residual `1 + ρ₀² r₀ u'(r₀)` against the horosphere `d + log ρ`
/// for a mass-profile graph with `μ(r₀) = mu0`.
fn cap_mismatch(n: usize, r0: f64, mu0: f64) -> f64 {
    let rho2 = 1.0 + r0 * r0;
    let mass_term = 2.0 * mu0 * r0.powi(2 - n as i32);
    let slope = -mass_term.sqrt() / (rho2 * (rho2 - mass_term).sqrt());
    1.0 + rho2 * r0 * slope
}

/// Radial graph over `r ≥ r0` with mass function `μ = m_∞ - β(r0/r)^p`, shot so
/// that it meets the horosphere `t = d + log ρ` orthogonally along `r = r0`.
///
/// The shooting parameter is `μ(r0)`; it is found by bisection on the
/// orthogonality residual (closed form: `μ(r0) = r0^{n-2}/2`).
pub fn horosphere_cap(n: usize, r0: f64, beta: f64, p: f64, d: f64) -> Result<GraphFamily> {
    check_dim(n)?;
    for (k, v) in [("r0", r0), ("beta", beta), ("p", p), ("d", d)] {
        finite(k, v)?;
    }
    if r0 <= 0.0 || p <= 0.0 {
        return Err(Error::BadParams(format!("need r0 > 0 and p > 0 (r0 = {r0}, p = {p})")));
    }
    let upper = (1.0 + r0 * r0) * r0.powi(n as i32 - 2) / 2.0;
    let (mut lo, mut hi) = (0.0_f64, upper);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cap_mismatch(n, r0, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu0 = 0.5 * (lo + hi);
    if cap_mismatch(n, r0, mu0).abs() > 1e-10 {
        return Err(Error::BadParams("horosphere cap shooting did not converge".into()));
    }
    let m_inf = mu0 + beta;
    let mu = MassFunction::Decaying { m_inf, beta, r0, p };
    let rho0 = r0.hypot(1.0);
    let prof = MassProfile { n, mu, sign: -1.0, r_start: r0, u_start: d + rho0.ln(), singular: false };
    // the profile must stay a graph with positive mass function out to infinity
    let mut r = r0;
    while r < 1e6 * r0 {
        let (m_r, _) = mu.eval(r);
        if !(m_r > 0.0 && prof.lapse_sq(r) > 0.0) {
            return Err(Error::BadParams(format!(
                "horosphere cap degenerates at r = {r} (μ = {m_r}); reduce |beta|"
            )));
        }
        r *= 1.05;
    }
    let mut fam = radial(
        "horosphere_cap",
        n,
        Arc::new(prof),
        params(&[("r0", r0), ("beta", beta), ("p", p), ("d", d), ("mu0", mu0), ("m_inf", m_inf)]),
    );
    fam.boundary =
        Some(InnerBoundary { wall: WallSpec::Horosphere { d, sign: 1.0 }, radius: r0, singular: false });
    fam.asymptotic_radius = r0;
    Ok(fam)
}
