use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Points with `|x| >= 1 - DISK_EDGE_TOL` are rejected.
pub const DISK_EDGE_TOL: f64 = 1e-12;

/// A point of the Poincaré disk model `{x ∈ R^n : |x| < 1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiskPoint {
    x: DVector<f64>,
}

impl DiskPoint {
    pub fn new(x: DVector<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::UnsupportedDimension(0));
        }
        let norm = x.norm();
        if !norm.is_finite() || norm >= 1.0 - DISK_EDGE_TOL {
            return Err(Error::InvalidPoint(norm));
        }
        Ok(Self { x })
    }

    pub fn from_slice(x: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(x))
    }

    pub fn origin(n: usize) -> Self {
        Self { x: DVector::zeros(n) }
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// `1 - |x|²`, computed as `(1 - |x|)(1 + |x|)`.
    pub fn one_minus_norm_sq(&self) -> f64 {
        let s = self.x.norm();
        (1.0 - s) * (1.0 + s)
    }

    /// Scale `λ = (1 - |x|²)/2` of the orthonormal frame `e_α = λ ∂_α`.
    pub fn frame_scale(&self) -> f64 {
        0.5 * self.one_minus_norm_sq()
    }

    pub fn to_polar(&self) -> PolarPoint {
        let s = self.x.norm();
        let n = self.dim();
        let r = 2.0 * s / self.one_minus_norm_sq();
        let theta = if s > 0.0 {
            &self.x / s
        } else {
            let mut e = DVector::zeros(n);
            e[0] = 1.0;
            e
        };
        PolarPoint { r, theta }
    }

    pub fn to_model(&self) -> ModelPoint {
        ModelPoint::from_disk(self)
    }
}

/// Geodesic polar coordinates: `r = sinh(dist to origin)`, so `ρ = √(r² + 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolarPoint {
    r: f64,
    theta: DVector<f64>,
}

impl PolarPoint {
    /// `theta` is normalised; it must already be a unit vector to within `1e-8`.
    pub fn new(r: f64, theta: DVector<f64>) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::BadParams(format!("polar radius must be finite and >= 0, got {r}")));
        }
        let norm = theta.norm();
        if theta.is_empty() || (norm - 1.0).abs() > 1e-8 {
            return Err(Error::BadParams(format!("theta must be a unit vector (|theta| = {norm})")));
        }
        Ok(Self { r, theta: theta / norm })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> &DVector<f64> {
        &self.theta
    }

    pub fn rho(&self) -> f64 {
        self.r.hypot(1.0)
    }

    pub fn dim(&self) -> usize {
        self.theta.len()
    }

    pub fn to_disk(&self) -> Result<DiskPoint> {
        let s = self.r / (1.0 + self.rho());
        DiskPoint::new(&self.theta * s)
    }

    pub fn to_model(&self) -> ModelPoint {
        ModelPoint::from_polar(self.r, &self.theta)
    }
}

/// A point of `H^n` in hyperboloid coordinates `z ∈ L^{n+1}`, `(z, z) = 1`, `z_0 > 0`.
///
/// The coordinates coincide with the basis potentials: `z_0 = ρ`, `z_α = ρ^(α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelPoint {
    z: DVector<f64>,
}

impl ModelPoint {
    pub fn from_disk(p: &DiskPoint) -> Self {
        let x = p.coords();
        let n = x.len();
        let d = p.one_minus_norm_sq();
        let mut z = DVector::zeros(n + 1);
        z[0] = (1.0 + x.norm_squared()) / d;
        for a in 0..n {
            z[a + 1] = 2.0 * x[a] / d;
        }
        Self { z }
    }

    pub fn from_polar(r: f64, theta: &DVector<f64>) -> Self {
        let n = theta.len();
        let mut z = DVector::zeros(n + 1);
        z[0] = r.hypot(1.0);
        for a in 0..n {
            z[a + 1] = r * theta[a];
        }
        Self { z }
    }

    /// Wraps hyperboloid coordinates, re-deriving `z_0` from the spatial part.
    pub fn from_spatial(spatial: &[f64]) -> Self {
        let n = spatial.len();
        let mut z = DVector::zeros(n + 1);
        let mut r2 = 0.0;
        for a in 0..n {
            z[a + 1] = spatial[a];
            r2 += spatial[a] * spatial[a];
        }
        z[0] = (1.0 + r2).sqrt();
        Self { z }
    }

    /// Image of this point under a Lorentz transformation acting on `z`.
    pub fn transformed(&self, m: &DMatrix<f64>) -> Self {
        let w = m * &self.z;
        Self::from_spatial(&w.as_slice()[1..])
    }

    pub fn dim(&self) -> usize {
        self.z.len() - 1
    }

    pub fn z(&self) -> &DVector<f64> {
        &self.z
    }

    pub fn rho(&self) -> f64 {
        self.z[0]
    }

    /// Frame derivatives of `ρ`, which equal `ρ^(α)`.
    pub fn rho_alpha(&self) -> DVector<f64> {
        self.z.rows(1, self.dim()).into_owned()
    }

    /// Polar radius `r = |ρ^(α)|`.
    pub fn r(&self) -> f64 {
        self.z.rows(1, self.dim()).norm()
    }

    pub fn theta(&self) -> DVector<f64> {
        let r = self.r();
        if r > 0.0 {
            self.rho_alpha() / r
        } else {
            let mut e = DVector::zeros(self.dim());
            e[0] = 1.0;
            e
        }
    }

    pub fn to_disk(&self) -> Result<DiskPoint> {
        DiskPoint::new(self.rho_alpha() / (1.0 + self.rho()))
    }

    pub fn to_polar(&self) -> PolarPoint {
        PolarPoint { r: self.r(), theta: self.theta() }
    }

    /// The orthonormal frame `e_α` written as vectors of `L^{n+1}` tangent to the
    /// hyperboloid: row `α` holds `e_α(z_i)`, `i = 0..=n`.
    pub fn frame(&self) -> DMatrix<f64> {
        let n = self.dim();
        let rho = self.rho();
        let mut e = DMatrix::zeros(n, n + 1);
        for a in 0..n {
            let za = self.z[a + 1];
            e[(a, 0)] = za;
            for b in 0..n {
                let zb = self.z[b + 1];
                e[(a, b + 1)] = za * zb / (1.0 + rho) + if a == b { 1.0 } else { 0.0 };
            }
        }
        e
    }
}

/// The isometry `Υ(x, s) = e^s (2x/(1+|x|²), (1-|x|²)/(1+|x|²))` from the warped
/// model `H^n ×_ρ R` onto the upper half-space model of `H^{n+1}`.
pub fn half_space_map(p: &ModelPoint, s: f64) -> DVector<f64> {
    let n = p.dim();
    let rho = p.rho();
    let scale = s.exp() / rho;
    let mut y = DVector::zeros(n + 1);
    for a in 0..n {
        y[a] = scale * p.z()[a + 1];
    }
    y[n] = scale;
    y
}
