use nalgebra::{DMatrix, DVector};

use crate::graph_geometry::{graph_w, newton_killing, GraphJet};
use crate::model_space::ModelPoint;

/// Value and frame gradient of the static potential `φ = c · z` at `p`.
pub fn potential_value(coeffs: &DVector<f64>, p: &ModelPoint) -> (f64, DVector<f64>) {
    (coeffs.dot(p.z()), p.frame() * coeffs)
}

/// The two pieces of `J(φ)_α = φ A_α + B_αβ φ_β`, built from `e` and `e_αβ,γ`:
/// `A_α = e_αβ,β - e_ββ,α` and `B = (tr e) I - e`.
pub fn recipe_parts(j: &GraphJet) -> (DVector<f64>, DMatrix<f64>) {
    let n = j.dim();
    let e = j.perturbation();
    let de = j.perturbation_derivative();
    let mut a = DVector::zeros(n);
    for alpha in 0..n {
        let mut div = 0.0;
        let mut grad_trace = 0.0;
        for beta in 0..n {
            div += de[beta][(alpha, beta)];
            grad_trace += de[alpha][(beta, beta)];
        }
        a[alpha] = div - grad_trace;
    }
    let b = DMatrix::identity(n, n) * e.trace() - e;
    (a, b)
}

/// `J(φ)_α = φ(e_αβ,β - e_ββ,α) - e_αβ φ_β + e_ββ φ_α`.
pub fn recipe_current(j: &GraphJet, phi: f64, dphi: &DVector<f64>) -> DVector<f64> {
    let (a, b) = recipe_parts(j);
    a * phi + b * dphi
}

/// Residual of `J(ρ) = W³ GXᵀ`, relative to the size of the terms in `J(ρ)`.
pub fn recipe_residual(j: &GraphJet) -> (DVector<f64>, f64) {
    let (a, b) = recipe_parts(j);
    let rho = j.pot.rho;
    let lhs = &a * rho + &b * &j.pot.rho_alpha;
    let w = graph_w(rho, &j.u_alpha);
    let rhs = newton_killing(j) * (w * w * w);
    let scale = (a.norm() * rho + b.norm() * j.pot.rho_alpha.norm()).max(f64::MIN_POSITIVE);
    let diff = lhs - rhs;
    let rel = diff.amax() / scale;
    (diff, rel)
}
