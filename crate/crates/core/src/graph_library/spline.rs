use super::profiles::RadialProfile;
use crate::{Error, Result};

/// Cubic spline through `(ρ_i, f_i)` with not-a-knot end conditions (the third
/// derivative is continuous at the second and penultimate knots), so cubic data
/// is reproduced exactly. Evaluation outside the table fails.
#[derive(Clone, Debug, PartialEq)]
pub struct SplineProfile {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

pub fn spline_profile(table: &[(f64, f64)]) -> Result<SplineProfile> {
    if table.len() < 4 {
        return Err(Error::BadParams(format!("spline table needs at least 4 rows, got {}", table.len())));
    }
    for (i, w) in table.windows(2).enumerate() {
        if !(w[1].0 > w[0].0) {
            return Err(Error::NonMonotone(i + 1));
        }
    }
    if table.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::BadParams("spline table contains non-finite values".into()));
    }
    let x: Vec<f64> = table.iter().map(|r| r.0).collect();
    let y: Vec<f64> = table.iter().map(|r| r.1).collect();
    let m = not_a_knot_curvatures(&x, &y);
    Ok(SplineProfile { x, y, m })
}

/// Knot second derivatives `M_i`. The end equations are eliminated into the first
/// and last interior rows, leaving a tridiagonal system.
fn not_a_knot_curvatures(x: &[f64], y: &[f64]) -> Vec<f64> {
    let k = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let rows = k - 2;
    let mut sub = vec![0.0; rows];
    let mut diag = vec![0.0; rows];
    let mut sup = vec![0.0; rows];
    let mut rhs = vec![0.0; rows];
    for r in 0..rows {
        let i = r + 1;
        sub[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        sup[r] = h[i];
        rhs[r] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
    }
    // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
    let (a, b) = (h[0], h[1]);
    diag[0] += a * (a + b) / b;
    sup[0] -= a * a / b;
    // M_{k-1} = ((a + b) M_{k-2} - b M_{k-3}) / a with a = h[k-3], b = h[k-2]
    let (a, b) = (h[k - 3], h[k - 2]);
    diag[rows - 1] += b * (a + b) / a;
    sub[rows - 1] -= b * b / a;
    let interior = solve_tridiagonal(&sub, &diag, &sup, &rhs);
    let mut m = vec![0.0; k];
    m[1..k - 1].copy_from_slice(&interior);
    m[0] = ((h[0] + h[1]) * m[1] - h[0] * m[2]) / h[1];
    m[k - 1] = ((h[k - 3] + h[k - 2]) * m[k - 2] - h[k - 2] * m[k - 3]) / h[k - 3];
    m
}

/// Thomas algorithm; `sub[0]` and `sup[last]` are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let k = diag.len();
    let mut c = vec![0.0; k];
    let mut d = vec![0.0; k];
    for i in 0..k {
        let lower = if i > 0 { sub[i] } else { 0.0 };
        let denom = diag[i] - if i > 0 { lower * c[i - 1] } else { 0.0 };
        c[i] = if i + 1 < k { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - if i > 0 { lower * d[i - 1] } else { 0.0 }) / denom;
    }
    let mut out = vec![0.0; k];
    for i in (0..k).rev() {
        out[i] = d[i] - if i + 1 < k { c[i] * out[i + 1] } else { 0.0 };
    }
    out
}

impl SplineProfile {
    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    /// `(f, f', f'')` at `t`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64, f64)> {
        let (lo, hi) = self.domain();
        if !(t >= lo && t <= hi) {
            return Err(Error::SplineDomain { query: t, lo, hi });
        }
        let i = self.x.partition_point(|&v| v <= t).clamp(1, self.x.len() - 1) - 1;
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (m0, m1) = (self.m[i], self.m[i + 1]);
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let f = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let df = (y1 - y0) / h - (3.0 * a * a - 1.0) * h * m0 / 6.0 + (3.0 * b * b - 1.0) * h * m1 / 6.0;
        let d2f = a * m0 + b * m1;
        Ok((f, df, d2f))
    }
}

impl RadialProfile for SplineProfile {
    fn value(&self, rho: f64) -> Result<f64> {
        Ok(self.eval(rho)?.0)
    }
    fn derivs(&self, rho: f64) -> Result<(f64, f64)> {
        let (_, d1, d2) = self.eval(rho)?;
        Ok((d1, d2))
    }
}
