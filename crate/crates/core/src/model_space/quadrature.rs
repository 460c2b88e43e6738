use std::f64::consts::PI;

use nalgebra::DVector;

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, exact for degree `2k - 1`.
pub fn gauss_legendre(k: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_k
        let mut x = (PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(k, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_k(x), P_k'(x))` by the three-term recurrence.
fn legendre(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub(crate) fn gauss_legendre_on(k: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(k);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter().zip(w.iter()).map(|(&xi, &wi)| (mid + half * xi, half * wi)).collect()
}

/// Area `ω_d` of the unit sphere `S^d`.
pub fn sphere_area(dim: usize) -> f64 {
    match dim {
        0 => 2.0,
        1 => 2.0 * PI,
        2 => 4.0 * PI,
        3 => 2.0 * PI * PI,
        _ => 2.0 * PI * sphere_area(dim - 2) / (dim as f64 - 1.0),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereNode {
    pub theta: DVector<f64>,
    pub weight: f64,
}

/// Product quadrature on `S^dim ⊂ R^{dim+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereRule {
    pub dim: usize,
    pub order: usize,
    /// Polynomials in `θ` up to this total degree are integrated exactly.
    pub exact_degree: usize,
    pub nodes: Vec<SphereNode>,
}

impl SphereRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(&DVector<f64>) -> f64) -> f64 {
        let terms: Vec<f64> = self.nodes.iter().map(|nd| nd.weight * f(&nd.theta)).collect();
        crate::summation::pairwise_sum(&terms)
    }
}

fn trapezoid(m: usize) -> impl Iterator<Item = (f64, f64, f64)> {
    let w = 2.0 * PI / m as f64;
    (0..m).map(move |j| {
        let (s, c) = (w * j as f64).sin_cos();
        (c, s, w)
    })
}

/// Quadrature on `S^dim`, `dim ∈ {1, 2, 3}`, exact to degree `2·order - 1`.
///
/// `S¹` uses the trapezoid rule with `2·order` nodes. `S²` uses Gauss–Legendre in
/// the height `t` times a trapezoid in azimuth. `S³` uses Hopf coordinates
/// `θ = (√(1-s) e^{iξ₁}, √s e^{iξ₂})`, with `dω = ½ ds dξ₁ dξ₂`.
pub fn sphere_quadrature(dim: usize, order: usize) -> Result<SphereRule> {
    if !(1..=3).contains(&dim) {
        return Err(Error::UnsupportedDimension(dim + 1));
    }
    if order < 2 {
        return Err(Error::BadParams(format!("sphere quadrature order {order} < 2")));
    }
    let m = 2 * order;
    let mut nodes = Vec::new();
    match dim {
        1 => {
            for (c, s, w) in trapezoid(m) {
                nodes.push(SphereNode { theta: DVector::from_vec(vec![c, s]), weight: w });
            }
        }
        2 => {
            for (t, wt) in gauss_legendre_on(order, -1.0, 1.0) {
                let st = (1.0 - t * t).sqrt();
                for (c, s, w) in trapezoid(m) {
                    nodes.push(SphereNode {
                        theta: DVector::from_vec(vec![st * c, st * s, t]),
                        weight: wt * w,
                    });
                }
            }
        }
        _ => {
            for (s, ws) in gauss_legendre_on(order, 0.0, 1.0) {
                let (a, b) = ((1.0 - s).sqrt(), s.sqrt());
                for (c1, s1, w1) in trapezoid(m) {
                    for (c2, s2, w2) in trapezoid(m) {
                        nodes.push(SphereNode {
                            theta: DVector::from_vec(vec![a * c1, a * s1, b * c2, b * s2]),
                            weight: 0.5 * ws * w1 * w2,
                        });
                    }
                }
            }
        }
    }
    Ok(SphereRule { dim, order, exact_degree: 2 * order - 1, nodes })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫_{S^{d}} θ^a dω` via the Gamma-function formula.
    fn monomial_integral(powers: &[u32]) -> f64 {
        if powers.iter().any(|p| p % 2 == 1) {
            return 0.0;
        }
        let betas: Vec<f64> = powers.iter().map(|&p| (p as f64 + 1.0) / 2.0).collect();
        let num: f64 = betas.iter().map(|&b| gamma(b)).product();
        2.0 * num / gamma(betas.iter().sum())
    }

    /// Gamma on positive half-integers and integers.
    fn gamma(x: f64) -> f64 {
        if (x - 0.5).abs() < 1e-12 {
            PI.sqrt()
        } else if (x - 1.0).abs() < 1e-12 {
            1.0
        } else {
            (x - 1.0) * gamma(x - 1.0)
        }
    }

    fn all_powers(len: usize, max_deg: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &out {
                let used: u32 = p.iter().sum();
                for k in 0..=(max_deg - used) {
                    let mut q = p.clone();
                    q.push(k);
                    next.push(q);
                }
            }
            out = next;
        }
        out
    }

    #[test]
    fn gauss_legendre_exactness() {
        for k in 1..12 {
            let (x, w) = gauss_legendre(k);
            for deg in 0..(2 * k) {
                let q: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-14, "k={k} deg={deg}");
            }
        }
        let (x, w) = gauss_legendre(200);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn total_weights() {
        for order in [2, 5, 17] {
            for (dim, area) in [(1, 2.0 * PI), (2, 4.0 * PI), (3, 2.0 * PI * PI)] {
                let rule = sphere_quadrature(dim, order).unwrap();
                let s = rule.integrate(|_| 1.0);
                assert!((s - area).abs() < 1e-12);
                assert!((sphere_area(dim) - area).abs() < 1e-15);
                assert!(rule.nodes.iter().all(|n| n.weight > 0.0));
                assert!(rule.nodes.iter().all(|n| (n.theta.norm() - 1.0).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn second_moment_on_s2() {
        let rule = sphere_quadrature(2, 3).unwrap();
        let v = rule.integrate(|t| t[0] * t[0]);
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn monomials_integrated_exactly() {
        for dim in 1..=3 {
            for order in [2, 4] {
                let rule = sphere_quadrature(dim, order).unwrap();
                for powers in all_powers(dim + 1, rule.exact_degree as u32) {
                    let q = rule.integrate(|t| {
                        powers.iter().enumerate().map(|(i, &p)| t[i].powi(p as i32)).product()
                    });
                    let exact = monomial_integral(&powers);
                    assert!((q - exact).abs() < 1e-11, "dim {dim} {powers:?}: {q} vs {exact}");
                }
            }
        }
    }

    #[test]
    fn rejects_unsupported() {
        assert!(matches!(sphere_quadrature(4, 3), Err(Error::UnsupportedDimension(_))));
        assert!(sphere_quadrature(2, 1).is_err());
    }
}
