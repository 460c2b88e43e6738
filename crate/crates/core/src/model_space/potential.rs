use nalgebra::{DMatrix, DVector};

use super::points::{DiskPoint, ModelPoint};

/// Jet of the static potential `ρ` at a point, in the orthonormal frame.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialJet {
    pub rho: f64,
    /// `ρ_α = e_α(ρ) = ρ^(α)`.
    pub rho_alpha: DVector<f64>,
    /// Covariant Hessian; `ρ · I` because `ρ` solves `Hess φ = φ b`.
    pub hess_rho: DMatrix<f64>,
}

impl PotentialJet {
    pub fn at(p: &ModelPoint) -> Self {
        let n = p.dim();
        let rho = p.rho();
        Self { rho, rho_alpha: p.rho_alpha(), hess_rho: DMatrix::identity(n, n) * rho }
    }

    /// `|∇ρ|²`, which equals `ρ² - 1`.
    pub fn grad_norm_sq(&self) -> f64 {
        self.rho_alpha.norm_squared()
    }
}

/// Potential jet evaluated from the disk formulas
/// `ρ = (1+|x|²)/(1-|x|²)`, `ρ^(α) = 2x_α/(1-|x|²)`.
pub fn potential_jets(p: &DiskPoint) -> PotentialJet {
    let x = p.coords();
    let n = x.len();
    let d = p.one_minus_norm_sq();
    let rho = (1.0 + x.norm_squared()) / d;
    PotentialJet { rho, rho_alpha: x * (2.0 / d), hess_rho: DMatrix::identity(n, n) * rho }
}

/// Value, Euclidean gradient and Euclidean Hessian of a function on `L^{n+1}`,
/// restricted to the hyperboloid.
///
/// Frame derivatives follow from the embedding: `e_α(F) = E_α · ∇F` and
/// `Hess F(e_α, e_β) = D²F(E_α, E_β) + (z · ∇F) δ_αβ`, the last term being the
/// second fundamental form of the hyperboloid.
#[derive(Clone, Debug, PartialEq)]
pub struct AmbientJet {
    pub value: f64,
    pub grad: DVector<f64>,
    pub hess: DMatrix<f64>,
}

impl AmbientJet {
    pub fn zero(n: usize) -> Self {
        Self { value: 0.0, grad: DVector::zeros(n + 1), hess: DMatrix::zeros(n + 1, n + 1) }
    }

    /// A function of `z_0 = ρ` alone: `F = f(ρ)`.
    pub fn radial(n: usize, f: f64, df: f64, d2f: f64) -> Self {
        let mut jet = Self::zero(n);
        jet.value = f;
        jet.grad[0] = df;
        jet.hess[(0, 0)] = d2f;
        jet
    }

    /// The linear function `z ↦ c · z` (a static potential).
    pub fn linear(coeffs: &DVector<f64>, z: &DVector<f64>) -> Self {
        let n = z.len() - 1;
        Self { value: coeffs.dot(z), grad: coeffs.clone(), hess: DMatrix::zeros(n + 1, n + 1) }
    }

    /// Jet of `F ∘ M` given the jet of `F` at `M z`.
    pub fn pull_back(&self, m: &DMatrix<f64>) -> Self {
        let mt = m.transpose();
        Self { value: self.value, grad: &mt * &self.grad, hess: &mt * &self.hess * m }
    }

    pub fn frame_gradient(&self, p: &ModelPoint) -> DVector<f64> {
        p.frame() * &self.grad
    }

    pub fn frame_hessian(&self, p: &ModelPoint) -> DMatrix<f64> {
        let e = p.frame();
        let n = p.dim();
        let mut h = &e * &self.hess * e.transpose();
        let normal = p.z().dot(&self.grad);
        for a in 0..n {
            h[(a, a)] += normal;
        }
        symmetrize(&mut h);
        h
    }
}

pub(crate) fn symmetrize(h: &mut DMatrix<f64>) {
    let n = h.nrows();
    for a in 0..n {
        for b in (a + 1)..n {
            let m = 0.5 * (h[(a, b)] + h[(b, a)]);
            h[(a, b)] = m;
            h[(b, a)] = m;
        }
    }
}

/// Orthonormal-frame covariant Hessian from disk-coordinate derivatives.
///
/// For `b = e^{2φ}|dx|²` with `φ = log(2/(1-|x|²))`,
/// `H_αβ = λ² (∂_α∂_β u - Γ^k_αβ ∂_k u)` where
/// `Γ^k_ij = δ_ik φ_j + δ_jk φ_i - δ_ij φ_k` and `λ = (1-|x|²)/2`.
pub fn covariant_hessian_frame(
    _coord_value: f64,
    coord_grad: &DVector<f64>,
    coord_hess: &DMatrix<f64>,
    p: &DiskPoint,
) -> DMatrix<f64> {
    let x = p.coords();
    let n = x.len();
    let d = p.one_minus_norm_sq();
    let lambda = 0.5 * d;
    let phi = x * (2.0 / d);
    let phi_dot_grad = phi.dot(coord_grad);
    let mut h = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let gamma_term =
                coord_grad[i] * phi[j] + phi[i] * coord_grad[j] - if i == j { phi_dot_grad } else { 0.0 };
            h[(i, j)] = lambda * lambda * (coord_hess[(i, j)] - gamma_term);
        }
    }
    symmetrize(&mut h);
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rho_coord_jets(x: &DVector<f64>) -> (f64, DVector<f64>, DMatrix<f64>) {
        let n = x.len();
        let s2 = x.norm_squared();
        let d = 1.0 - s2;
        let rho = (1.0 + s2) / d;
        let grad = x * (4.0 / (d * d));
        let mut hess = DMatrix::identity(n, n) * (4.0 / (d * d));
        hess += x * x.transpose() * (16.0 / (d * d * d));
        (rho, grad, hess)
    }

    /// Second derivative of `u` along the unit-speed geodesic through `p` with
    /// initial frame velocity `v`, by central differences.
    fn geodesic_second_derivative(
        u: impl Fn(&ModelPoint) -> f64,
        p: &ModelPoint,
        v: &DVector<f64>,
        h: f64,
    ) -> f64 {
        let tangent = p.frame().transpose() * v;
        let at = |t: f64| {
            let z = p.z() * t.cosh() + &tangent * t.sinh();
            ModelPoint::from_spatial(&z.as_slice()[1..])
        };
        (-u(&at(2.0 * h)) + 16.0 * u(&at(h)) - 30.0 * u(p) + 16.0 * u(&at(-h)) - u(&at(-2.0 * h)))
            / (12.0 * h * h)
    }

    fn geodesic_hessian(u: impl Fn(&ModelPoint) -> f64 + Copy, p: &ModelPoint) -> DMatrix<f64> {
        let n = p.dim();
        let h = 1e-3;
        let mut out = DMatrix::zeros(n, n);
        for a in 0..n {
            for b in 0..n {
                let mut plus = DVector::<f64>::zeros(n);
                plus[a] += 1.0;
                plus[b] += 1.0;
                let mut minus = DVector::<f64>::zeros(n);
                minus[a] += 1.0;
                minus[b] -= 1.0;
                let norm_p = plus.norm();
                let norm_m = minus.norm();
                let qp = if norm_p > 0.0 {
                    geodesic_second_derivative(u, p, &(&plus / norm_p), h) * norm_p * norm_p
                } else {
                    0.0
                };
                let qm = if norm_m > 0.0 {
                    geodesic_second_derivative(u, p, &(&minus / norm_m), h) * norm_m * norm_m
                } else {
                    0.0
                };
                out[(a, b)] = 0.25 * (qp - qm);
            }
        }
        out
    }

    #[test]
    fn potential_at_origin() {
        let jet = potential_jets(&DiskPoint::origin(3));
        assert_eq!(jet.rho, 1.0);
        assert_eq!(jet.rho_alpha.norm(), 0.0);
        assert_eq!(jet.hess_rho, DMatrix::identity(3, 3));
    }

    #[test]
    fn potential_at_one_over_root_three() {
        let x = 1.0 / 3f64.sqrt();
        let jet = potential_jets(&DiskPoint::from_slice(&[x, 0.0, 0.0]).unwrap());
        assert!((jet.rho - 2.0).abs() < 1e-14);
        assert!((jet.rho_alpha[0] - 3f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn disk_and_hyperboloid_jets_agree() {
        let p = DiskPoint::from_slice(&[0.2, -0.7, 0.1]).unwrap();
        let a = potential_jets(&p);
        let b = PotentialJet::at(&p.to_model());
        assert!((a.rho - b.rho).abs() < 1e-13);
        assert!((a.rho_alpha - b.rho_alpha).norm() < 1e-13);
    }

    #[test]
    fn covariant_hessian_of_rho_is_rho_identity() {
        let p = DiskPoint::from_slice(&[0.3, 0.0, 0.0]).unwrap();
        let (v, g, h) = rho_coord_jets(p.coords());
        let hess = covariant_hessian_frame(v, &g, &h, &p);
        let expect = DMatrix::identity(3, 3) * v;
        assert!((hess - expect).abs().max() < 1e-12);
    }

    #[test]
    fn covariant_hessian_of_constant_vanishes() {
        let p = DiskPoint::from_slice(&[0.3, 0.4]).unwrap();
        let h = covariant_hessian_frame(5.0, &DVector::zeros(2), &DMatrix::zeros(2, 2), &p);
        assert_eq!(h.abs().max(), 0.0);
    }

    #[test]
    fn covariant_hessian_of_log_rho_matches_geodesic_differences() {
        let p = DiskPoint::from_slice(&[0.35, -0.2, 0.4]).unwrap();
        let (rho, g, h) = rho_coord_jets(p.coords());
        let lg = &g / rho;
        let lh = &h / rho - &g * g.transpose() / (rho * rho);
        let hess = covariant_hessian_frame(rho.ln(), &lg, &lh, &p);
        let oracle = geodesic_hessian(|q: &ModelPoint| q.rho().ln(), &p.to_model());
        assert!((&hess - &oracle).abs().max() < 1e-8, "{hess} vs {oracle}");
        // closed form: δ - ρ_α ρ_β / ρ²
        let jet = potential_jets(&p);
        let closed = DMatrix::identity(3, 3) - &jet.rho_alpha * jet.rho_alpha.transpose() / (rho * rho);
        assert!((&hess - &closed).abs().max() < 1e-12);
    }

    #[test]
    fn ambient_frame_hessian_matches_disk_route() {
        // u = z_1 z_2 / z_0, an arbitrary smooth function on the hyperboloid
        let p = DiskPoint::from_slice(&[0.25, 0.5]).unwrap();
        let m = p.to_model();
        let z = m.z().clone();
        let mut jet = AmbientJet::zero(2);
        jet.value = z[1] * z[2] / z[0];
        jet.grad = DVector::from_vec(vec![-z[1] * z[2] / (z[0] * z[0]), z[2] / z[0], z[1] / z[0]]);
        jet.hess = DMatrix::from_row_slice(
            3,
            3,
            &[
                2.0 * z[1] * z[2] / z[0].powi(3),
                -z[2] / (z[0] * z[0]),
                -z[1] / (z[0] * z[0]),
                -z[2] / (z[0] * z[0]),
                0.0,
                1.0 / z[0],
                -z[1] / (z[0] * z[0]),
                1.0 / z[0],
                0.0,
            ],
        );
        let h = jet.frame_hessian(&m);
        let oracle = geodesic_hessian(|q: &ModelPoint| q.z()[1] * q.z()[2] / q.z()[0], &m);
        assert!((&h - &oracle).abs().max() < 1e-8, "{h} vs {oracle}");
    }
}
