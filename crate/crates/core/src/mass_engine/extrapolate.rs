use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extrapolation {
    None,
    Richardson,
    #[default]
    PowerLawFit,
}

/// Limit of a series `m(r)` as `r → ∞`.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate {
    pub value: f64,
    pub error: f64,
    /// Fitted decay exponent `σ` of the gap; `+∞` when the series is constant.
    pub exponent: f64,
    /// `|m(r) - m_∞|` per radius.
    pub gaps: Vec<f64>,
}

const SPREAD_TOL: f64 = 1e-13;

/// Extrapolates `(r_i, m_i)` with the declared method.
///
/// The power-law fit models `m(r) = m_∞ + a r^{-σ}`: for fixed `σ` the
/// coefficients follow by linear least squares, and `σ` minimises the residual
/// (grid scan, then golden-section refinement).
pub fn extrapolate(r: &[f64], m: &[f64], method: Extrapolation) -> Result<LimitEstimate> {
    if r.is_empty() || r.len() != m.len() {
        return Err(Error::BadParams("extrapolation needs matching non-empty series".into()));
    }
    let last = *m.last().unwrap();
    let spread = m.iter().fold(0.0_f64, |acc, v| acc.max((v - last).abs()));
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if spread <= SPREAD_TOL * scale.max(1.0) {
        return Ok(LimitEstimate {
            value: last,
            error: spread,
            exponent: f64::INFINITY,
            gaps: m.iter().map(|v| (v - last).abs()).collect(),
        });
    }
    let (value, exponent, error) = match method {
        Extrapolation::None => {
            let prev = m[m.len().saturating_sub(2)];
            (last, f64::NAN, (last - prev).abs())
        }
        Extrapolation::Richardson => richardson(r, m)?,
        Extrapolation::PowerLawFit => power_law(r, m)?,
    };
    if exponent <= 0.0 {
        return Err(Error::NonConvergentSeries { exponent });
    }
    Ok(LimitEstimate { value, error, exponent, gaps: m.iter().map(|v| (v - value).abs()).collect() })
}

/// Linear least squares for `(m_∞, a)` at fixed `σ`; returns `(m_∞, a, rss)`.
fn fit_at(r: &[f64], m: &[f64], sigma: f64) -> (f64, f64, f64) {
    let k = r.len() as f64;
    let x: Vec<f64> = r.iter().map(|&ri| ri.powf(-sigma)).collect();
    let sx: f64 = x.iter().sum();
    let sy: f64 = m.iter().sum();
    let sxx: f64 = x.iter().map(|v| v * v).sum();
    let sxy: f64 = x.iter().zip(m).map(|(a, b)| a * b).sum();
    let det = k * sxx - sx * sx;
    if det.abs() < 1e-300 {
        return (sy / k, 0.0, f64::INFINITY);
    }
    let a = (k * sxy - sx * sy) / det;
    let c = (sy - a * sx) / k;
    let rss = x.iter().zip(m).map(|(xi, yi)| (yi - c - a * xi).powi(2)).sum();
    (c, a, rss)
}

fn power_law(r: &[f64], m: &[f64]) -> Result<(f64, f64, f64)> {
    if r.len() < 3 {
        return Err(Error::BadParams("power-law extrapolation needs at least 3 radii".into()));
    }
    // σ ≤ 0 candidates let a growing series be recognised as such
    let grid: Vec<f64> = (0..=240).map(|i| -4.0 + 0.05 * i as f64).filter(|s| *s != 0.0).collect();
    let mut best = (grid[0], f64::INFINITY);
    for &s in &grid {
        let rss = fit_at(r, m, s).2;
        if rss < best.1 {
            best = (s, rss);
        }
    }
    let (mut lo, mut hi) = (best.0 - 0.05, best.0 + 0.05);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let a = hi - g * (hi - lo);
        let b = lo + g * (hi - lo);
        if fit_at(r, m, a).2 < fit_at(r, m, b).2 {
            hi = b;
        } else {
            lo = a;
        }
    }
    let sigma = 0.5 * (lo + hi);
    let (c, a, rss) = fit_at(r, m, sigma);
    let r_last = *r.last().unwrap();
    let tail = (a * r_last.powf(-sigma)).abs();
    let noise = (rss / r.len() as f64).sqrt();
    Ok((c, sigma, tail + noise))
}

/// Aitken-type extrapolation from the last three values on geometric radii:
/// `σ` from the ratio of consecutive differences, then one Richardson step.
fn richardson(r: &[f64], m: &[f64]) -> Result<(f64, f64, f64)> {
    let k = r.len();
    if k < 3 {
        return Err(Error::BadParams("Richardson extrapolation needs at least 3 radii".into()));
    }
    let (m0, m1, m2) = (m[k - 3], m[k - 2], m[k - 1]);
    let (d1, d2) = (m1 - m0, m2 - m1);
    let q = r[k - 1] / r[k - 2];
    if d1 == 0.0 || d2 / d1 <= 0.0 {
        return Ok((m2, f64::NAN, d2.abs()));
    }
    let ratio = d2 / d1;
    let sigma = -ratio.ln() / q.ln();
    if sigma <= 0.0 {
        return Err(Error::NonConvergentSeries { exponent: sigma });
    }
    let factor = q.powf(sigma);
    let value = (factor * m2 - m1) / (factor - 1.0);
    Ok((value, sigma, (value - m2).abs().max(f64::EPSILON * value.abs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law_limit() {
        let r = [20.0, 40.0, 80.0, 160.0];
        let m: Vec<f64> = r.iter().map(|x: &f64| 1.0 + 2.0 * x.powf(-2.5)).collect();
        let est = extrapolate(&r, &m, Extrapolation::PowerLawFit).unwrap();
        assert!((est.value - 1.0).abs() < 1e-9);
        assert!((est.exponent - 2.5).abs() < 1e-4);
        let rich = extrapolate(&r, &m, Extrapolation::Richardson).unwrap();
        assert!((rich.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_series_converges_immediately() {
        let est = extrapolate(&[1.0, 2.0], &[0.0, 0.0], Extrapolation::PowerLawFit).unwrap();
        assert_eq!(est.value, 0.0);
        assert_eq!(est.exponent, f64::INFINITY);
    }

    #[test]
    fn growing_series_is_rejected() {
        let r = [10.0, 20.0, 40.0, 80.0];
        let m: Vec<f64> = r.iter().map(|x: &f64| 0.3 * x * x).collect();
        assert!(matches!(
            extrapolate(&r, &m, Extrapolation::PowerLawFit),
            Err(Error::NonConvergentSeries { .. })
        ));
        assert!(matches!(
            extrapolate(&r, &m, Extrapolation::Richardson),
            Err(Error::NonConvergentSeries { .. })
        ));
    }
}
