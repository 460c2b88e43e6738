use std::fmt;

use crate::model_space::gauss_legendre_on;
use crate::{Error, Result};

/// A function `f(ρ)` with its first two derivatives.
pub trait RadialProfile: Send + Sync + fmt::Debug {
    fn value(&self, rho: f64) -> Result<f64>;
    /// `(f'(ρ), f''(ρ))`.
    fn derivs(&self, rho: f64) -> Result<(f64, f64)>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConstantProfile(pub f64);

impl RadialProfile for ConstantProfile {
    fn value(&self, _rho: f64) -> Result<f64> {
        Ok(self.0)
    }
    fn derivs(&self, _rho: f64) -> Result<(f64, f64)> {
        Ok((0.0, 0.0))
    }
}

/// `d + sign · log ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProfile {
    pub d: f64,
    pub sign: f64,
}

impl RadialProfile for LogProfile {
    fn value(&self, rho: f64) -> Result<f64> {
        Ok(self.d + self.sign * rho.ln())
    }
    fn derivs(&self, rho: f64) -> Result<(f64, f64)> {
        Ok((self.sign / rho, -self.sign / (rho * rho)))
    }
}

/// `c / ρ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseProfile {
    pub c: f64,
}

impl RadialProfile for InverseProfile {
    fn value(&self, rho: f64) -> Result<f64> {
        Ok(self.c / rho)
    }
    fn derivs(&self, rho: f64) -> Result<(f64, f64)> {
        Ok((-self.c / (rho * rho), 2.0 * self.c / (rho * rho * rho)))
    }
}

/// `arcsinh(c / ρ)`, whose graph is the equidistant at distance `arcsinh c` from
/// the slice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsinhProfile {
    pub c: f64,
}

impl RadialProfile for AsinhProfile {
    fn value(&self, rho: f64) -> Result<f64> {
        Ok((self.c / rho).asinh())
    }
    fn derivs(&self, rho: f64) -> Result<(f64, f64)> {
        let c = self.c;
        let s = rho.hypot(c);
        let d1 = -c / (rho * s);
        let d2 = c * (2.0 * rho * rho + c * c) / (rho * rho * s * s * s);
        Ok((d1, d2))
    }
}

/// The mass function `μ(r)` of a static-slice type graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MassFunction {
    Constant(f64),
    /// `μ(r) = m_∞ - β (r₀/r)^p`.
    Decaying {
        m_inf: f64,
        beta: f64,
        r0: f64,
        p: f64,
    },
}

impl MassFunction {
    /// `(μ(r), μ'(r))`.
    pub fn eval(&self, r: f64) -> (f64, f64) {
        match *self {
            MassFunction::Constant(m) => (m, 0.0),
            MassFunction::Decaying { m_inf, beta, r0, p } => {
                let t = (r0 / r).powf(p);
                (m_inf - beta * t, beta * p * t / r)
            }
        }
    }

    pub fn limit(&self) -> f64 {
        match *self {
            MassFunction::Constant(m) => m,
            MassFunction::Decaying { m_inf, .. } => m_inf,
        }
    }
}

/// Radial graph whose induced metric is `dr²/V_μ(r) + r² dω²`,
/// `V_μ = 1 + r² - 2μ(r) r^{2-n}`.
///
/// Its slope is `du/dr = s √(2μ r^{2-n}) / (ρ² √V_μ)` and its scalar curvature
/// excess is `𝔯 = 2(n-1) μ'(r) r^{1-n}`. The graph starts at `r_start` with height
/// `u_start`; when `singular` is set, `V_μ(r_start) = 0` and the slope blows up like
/// `(r - r_start)^{-1/2}` there.
#[derive(Clone, Debug, PartialEq)]
pub struct MassProfile {
    pub n: usize,
    pub mu: MassFunction,
    pub sign: f64,
    pub r_start: f64,
    pub u_start: f64,
    pub singular: bool,
}

const PANEL_NODES: usize = 24;

impl MassProfile {
    pub fn lapse_sq(&self, r: f64) -> f64 {
        let (mu, _) = self.mu.eval(r);
        1.0 + r * r - 2.0 * mu * r.powi(2 - self.n as i32)
    }

    /// `(q, q')` with `q = du/dr`.
    pub fn slope(&self, r: f64) -> Result<(f64, f64)> {
        if !(r > self.r_start || (!self.singular && r == self.r_start)) {
            return Err(Error::RadiusInsideCore { r, core: self.r_start });
        }
        let n = self.n as i32;
        let (mu, dmu) = self.mu.eval(r);
        let rho2 = 1.0 + r * r;
        let mass_term = 2.0 * mu * r.powi(2 - n);
        let v = 1.0 + r * r - mass_term;
        if !(v > 0.0 && mu > 0.0) {
            return Err(Error::BadParams(format!("mass profile degenerate at r = {r} (μ = {mu}, V = {v})")));
        }
        let q = self.sign * mass_term.sqrt() / (rho2 * v.sqrt());
        let dv = 2.0 * r - 2.0 * dmu * r.powi(2 - n) - 2.0 * mu * (2 - n) as f64 * r.powi(1 - n);
        let log_deriv = dmu / (2.0 * mu) + (2 - n) as f64 / (2.0 * r) - 2.0 * r / rho2 - dv / (2.0 * v);
        Ok((q, q * log_deriv))
    }

    /// `u(r) = u_start + ∫ q`, by Gauss–Legendre on geometrically growing panels.
    pub fn height(&self, r: f64) -> Result<f64> {
        if r < self.r_start * (1.0 - 4.0 * f64::EPSILON) {
            return Err(Error::RadiusInsideCore { r, core: self.r_start });
        }
        // radii recomputed from hyperboloid coordinates can sit an ulp inside
        let total = r - self.r_start;
        if total <= 0.0 {
            return Ok(self.u_start);
        }
        if total <= 1e-12 * self.r_start {
            // quadrature nodes would round onto r_start; use the leading term,
            // q ~ (r - r_start)^{-1/2} when singular and q ~ const otherwise
            let factor = if self.singular { 2.0 } else { 1.0 };
            return Ok(self.u_start + factor * total * self.slope(r)?.0);
        }
        let mut terms = Vec::new();
        let mut width = total.min(0.25 * self.r_start.max(1.0));
        let mut a = self.r_start;
        let mut first = true;
        while a < r {
            let b = if r - (a + width) < 0.5 * width { r } else { a + width };
            if first && self.singular {
                // t = a + s², removing the inverse square root
                for (s, w) in gauss_legendre_on(PANEL_NODES, 0.0, (b - a).sqrt()) {
                    terms.push(w * 2.0 * s * self.slope(a + s * s)?.0);
                }
            } else {
                for (t, w) in gauss_legendre_on(PANEL_NODES, a, b) {
                    terms.push(w * self.slope(t)?.0);
                }
            }
            first = false;
            a = b;
            width *= 2.0;
        }
        Ok(self.u_start + crate::summation::pairwise_sum(&terms))
    }
}

impl RadialProfile for MassProfile {
    fn value(&self, rho: f64) -> Result<f64> {
        self.height(radius_of(rho))
    }

    /// `f' = qρ/r`, `f'' = ρ²q'/r² - q/r³`.
    fn derivs(&self, rho: f64) -> Result<(f64, f64)> {
        let r = radius_of(rho);
        let (q, dq) = self.slope(r)?;
        Ok((q * rho / r, rho * rho * dq / (r * r) - q / (r * r * r)))
    }
}

/// `r = √(ρ² - 1)` computed as `√((ρ-1)(ρ+1))`.
pub(crate) fn radius_of(rho: f64) -> f64 {
    ((rho - 1.0) * (rho + 1.0)).max(0.0).sqrt()
}

/// Root of `1 + r² - 2m r^{2-n}` (the horizon radius of AdS-Schwarzschild).
pub fn horizon_radius(n: usize, m: f64) -> Result<f64> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::BadParams(format!("mass m = {m} must be positive")));
    }
    let v = |r: f64| 1.0 + r * r - 2.0 * m * r.powi(2 - n as i32);
    if n == 2 {
        if m <= 0.5 {
            return Err(Error::BadParams(format!("n = 2 needs m > 1/2, got {m}")));
        }
        return Ok((2.0 * m - 1.0).sqrt());
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while v(hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if v(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(if v(lo).abs() < v(hi).abs() { lo } else { hi })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd_check(p: &dyn RadialProfile, rho: f64, h: f64, tol: f64) {
        let f = |x: f64| p.value(x).unwrap();
        let (d1, d2) = p.derivs(rho).unwrap();
        let fd1 = (f(rho + h) - f(rho - h)) / (2.0 * h);
        let fd2 = (f(rho + h) - 2.0 * f(rho) + f(rho - h)) / (h * h);
        assert!((d1 - fd1).abs() < tol * (1.0 + d1.abs()), "{p:?} f' {d1} vs {fd1}");
        assert!((d2 - fd2).abs() < tol * 1e2 * (1.0 + d2.abs()), "{p:?} f'' {d2} vs {fd2}");
        let fdd = (p.derivs(rho + h).unwrap().0 - p.derivs(rho - h).unwrap().0) / (2.0 * h);
        assert!((d2 - fdd).abs() < tol * (1.0 + d2.abs()), "{p:?} f'' {d2} vs {fdd}");
    }

    #[test]
    fn analytic_profiles_match_differences() {
        let profiles: Vec<Box<dyn RadialProfile>> = vec![
            Box::new(LogProfile { d: 0.3, sign: -1.0 }),
            Box::new(InverseProfile { c: 1.5 }),
            Box::new(AsinhProfile { c: 2.0 }),
        ];
        for p in &profiles {
            for rho in [1.2, 3.0, 40.0] {
                fd_check(p.as_ref(), rho, 1e-4 * rho, 1e-7);
            }
        }
    }

    #[test]
    fn horizon_radii() {
        assert!((horizon_radius(3, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((horizon_radius(4, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((horizon_radius(2, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let rh = horizon_radius(3, 2.5).unwrap();
        assert!((1.0 + rh * rh - 5.0 / rh).abs() < 1e-14);
        assert!(horizon_radius(2, 0.4).is_err());
    }

    #[test]
    fn mass_profile_slope_and_height_consistent() {
        let prof = MassProfile {
            n: 3,
            mu: MassFunction::Constant(1.0),
            sign: 1.0,
            r_start: 1.0,
            u_start: 0.0,
            singular: true,
        };
        // g_rr = 1/ρ² + ρ² q² = 1/V
        for r in [1.001, 2.0, 50.0] {
            let (q, _) = prof.slope(r).unwrap();
            let rho2 = 1.0 + r * r;
            let v = prof.lapse_sq(r);
            assert!((1.0 / rho2 + rho2 * q * q - 1.0 / v).abs() < 1e-12 / v);
        }
        let rho = 5f64.hypot(1.0);
        fd_check(&prof, rho, 1e-4, 1e-7);
        // height increments integrate the slope
        let (a, b) = (3.0, 3.5);
        let direct: f64 =
            gauss_legendre_on(30, a, b).into_iter().map(|(t, w)| w * prof.slope(t).unwrap().0).sum();
        let diff = prof.height(b).unwrap() - prof.height(a).unwrap();
        assert!((diff - direct).abs() < 1e-13);
        // near the start u ~ 2C√(r - r_h)
        assert!(prof.height(1.0).unwrap() == 0.0);
        assert!(prof.height(1.0 + 1e-10).unwrap() < 1e-4);
        assert!(prof.slope(1.0).is_err());
    }
}
