use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// A vector of `R^{n,1}` written in the basis `{ρ^(0) = ρ, ρ^(1), …, ρ^(n)}` of
/// static potentials.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzVector(pub DVector<f64>);

impl LorentzVector {
    pub fn new(components: DVector<f64>) -> Self {
        Self(components)
    }

    pub fn from_slice(c: &[f64]) -> Self {
        Self(DVector::from_column_slice(c))
    }

    /// Unit vector `ρ^(i)`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut c = DVector::zeros(n + 1);
        c[i] = 1.0;
        Self(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn components(&self) -> &DVector<f64> {
        &self.0
    }
}

/// `z_0 w_0 - Σ z_α w_α`.
pub fn lorentz_inner(z: &LorentzVector, w: &LorentzVector) -> Result<f64> {
    if z.0.len() != w.0.len() {
        return Err(Error::DimensionMismatch { expected: z.0.len(), found: w.0.len() });
    }
    Ok(minkowski(&z.0, &w.0))
}

pub(crate) fn minkowski(z: &DVector<f64>, w: &DVector<f64>) -> f64 {
    let spatial: f64 = z.iter().zip(w.iter()).skip(1).map(|(a, b)| a * b).sum();
    z[0] * w[0] - spatial
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CausalClass {
    TimelikeFuture,
    TimelikePast,
    NullFuture,
    NullPast,
    Spacelike,
    Zero,
}

impl CausalClass {
    pub fn as_str(self) -> &'static str {
        match self {
            CausalClass::TimelikeFuture => "timelike-future",
            CausalClass::TimelikePast => "timelike-past",
            CausalClass::NullFuture => "null-future",
            CausalClass::NullPast => "null-past",
            CausalClass::Spacelike => "spacelike",
            CausalClass::Zero => "zero",
        }
    }
}

/// Causal character of `p`; the null cone is thickened by `1e-10 |P|²`.
pub fn classify_causal(p: &LorentzVector) -> CausalClass {
    let norm2 = p.0.norm_squared();
    if norm2.sqrt() <= 1e-12 {
        return CausalClass::Zero;
    }
    let q = minkowski(&p.0, &p.0);
    let future = p.0[0] > 0.0;
    if q.abs() <= 1e-10 * norm2 {
        if future {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    } else if q > 0.0 {
        if future {
            CausalClass::TimelikeFuture
        } else {
            CausalClass::TimelikePast
        }
    } else {
        CausalClass::Spacelike
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsometryKind {
    Rotation,
    Boost,
    Composite,
}

impl IsometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IsometryKind::Rotation => "rotation",
            IsometryKind::Boost => "boost",
            IsometryKind::Composite => "composite",
        }
    }
}

/// An element of `O⁺(n,1)` acting on hyperboloid coordinates `z ↦ A z`.
///
/// Convention: [`Isometry::rotation`]`(i, j, θ)` sends `e_i` to `cos θ e_i + sin θ e_j`
/// in the spatial indices `1..=n`; [`Isometry::boost`]`(k, s)` sends `ρ^(0)` to
/// `cosh s ρ^(0) + sinh s ρ^(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Isometry {
    pub matrix: DMatrix<f64>,
    pub kind: IsometryKind,
}

impl Isometry {
    pub fn identity(n: usize) -> Self {
        Self { matrix: DMatrix::identity(n + 1, n + 1), kind: IsometryKind::Rotation }
    }

    /// Rotation in the plane of spatial axes `i`, `j` (1-based, as in `ρ^(i)`).
    pub fn rotation(n: usize, i: usize, j: usize, angle: f64) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n || i == j {
            return Err(Error::BadParams(format!("rotation plane ({i}, {j}) invalid for n = {n}")));
        }
        let mut m = DMatrix::identity(n + 1, n + 1);
        let (s, c) = angle.sin_cos();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(j, i)] = s;
        m[(i, j)] = -s;
        Ok(Self { matrix: m, kind: IsometryKind::Rotation })
    }

    /// Boost with rapidity `s` along spatial axis `k` (1-based).
    pub fn boost(n: usize, k: usize, rapidity: f64) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::BadParams(format!("boost axis {k} invalid for n = {n}")));
        }
        let mut m = DMatrix::identity(n + 1, n + 1);
        let (ch, sh) = (rapidity.cosh(), rapidity.sinh());
        m[(0, 0)] = ch;
        m[(k, k)] = ch;
        m[(0, k)] = sh;
        m[(k, 0)] = sh;
        Ok(Self { matrix: m, kind: IsometryKind::Boost })
    }

    /// Wraps a matrix after checking that it lies in `O⁺(n,1)` to `tol`.
    pub fn from_matrix(matrix: DMatrix<f64>, tol: f64) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() < 2 {
            return Err(Error::BadParams("isometry matrix must be square".into()));
        }
        let iso = Self { matrix, kind: IsometryKind::Composite };
        let defect = iso.lorentz_defect();
        if defect > tol || iso.matrix[(0, 0)] < 1.0 - tol {
            return Err(Error::BadParams(format!(
                "matrix is not an orthochronous Lorentz transformation (defect {defect:e})"
            )));
        }
        Ok(iso)
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows() - 1
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let kind = if self.kind == other.kind { self.kind } else { IsometryKind::Composite };
        Isometry { matrix: &self.matrix * &other.matrix, kind }
    }

    /// `A⁻¹ = η Aᵀ η`.
    pub fn inverse(&self) -> Isometry {
        let mut m = self.matrix.transpose();
        flip_signature(&mut m);
        Isometry { matrix: m, kind: self.kind }
    }

    /// `max |Aᵀ η A - η|`.
    pub fn lorentz_defect(&self) -> f64 {
        let n1 = self.matrix.nrows();
        let mut eta = DMatrix::identity(n1, n1);
        for i in 1..n1 {
            eta[(i, i)] = -1.0;
        }
        (self.matrix.transpose() * &eta * &self.matrix - eta).abs().max()
    }

    pub fn apply(&self, v: &LorentzVector) -> LorentzVector {
        LorentzVector(&self.matrix * &v.0)
    }
}

/// `η M η`: negates the mixed time/space blocks.
fn flip_signature(m: &mut DMatrix<f64>) {
    let n1 = m.nrows();
    for i in 1..n1 {
        m[(0, i)] = -m[(0, i)];
        m[(i, 0)] = -m[(i, 0)];
    }
}

/// The boost taking a future timelike `P` to `(√(P,P), 0, …, 0)`.
pub fn rest_boost(p: &LorentzVector) -> Result<Isometry> {
    let class = classify_causal(p);
    if class != CausalClass::TimelikeFuture {
        return Err(Error::NotTimelikeFuture(class.as_str().to_string()));
    }
    let n = p.dim();
    let c = &p.0;
    let m = minkowski(c, c).sqrt();
    let p0 = c[0];
    let mut a = DMatrix::identity(n + 1, n + 1);
    a[(0, 0)] = p0 / m;
    for j in 1..=n {
        a[(0, j)] = -c[j] / m;
        a[(j, 0)] = -c[j] / m;
        for k in 1..=n {
            a[(j, k)] += c[j] * c[k] / (m * (p0 + m));
        }
    }
    Ok(Isometry { matrix: a, kind: IsometryKind::Boost })
}

/// Coefficients of `φ ∘ A⁻¹` given those of `φ = Σ c_i ρ^(i)`: `c' = A⁻ᵀ c = η A η c`.
pub fn isometry_action_on_potentials(a: &Isometry, coeffs: &DVector<f64>) -> DVector<f64> {
    let mut m = a.matrix.clone();
    flip_signature(&mut m);
    m * coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model_space::{DiskPoint, ModelPoint};
    use proptest::prelude::*;

    fn lv(c: &[f64]) -> LorentzVector {
        LorentzVector::from_slice(c)
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(lorentz_inner(&lv(&[1.0, 0.0, 0.0]), &lv(&[1.0, 0.0, 0.0])).unwrap(), 1.0);
        assert_eq!(lorentz_inner(&lv(&[1.0, 1.0, 0.0]), &lv(&[1.0, 1.0, 0.0])).unwrap(), 0.0);
        let s: f64 = 0.7;
        let v = lv(&[s.cosh(), s.sinh(), 0.0]);
        assert!((lorentz_inner(&v, &v).unwrap() - 1.0).abs() < 1e-14);
        assert!(matches!(
            lorentz_inner(&lv(&[1.0, 0.0]), &lv(&[1.0, 0.0, 0.0])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_causal(&lv(&[2.0, 1.0, 0.0])), CausalClass::TimelikeFuture);
        assert_eq!(classify_causal(&lv(&[-1.0, 0.0, 0.0])), CausalClass::TimelikePast);
        assert_eq!(classify_causal(&lv(&[1.0, 1.0, 0.0])), CausalClass::NullFuture);
        assert_eq!(classify_causal(&lv(&[-1.0, 0.0, 1.0])), CausalClass::NullPast);
        assert_eq!(classify_causal(&lv(&[0.5, 1.0, 0.0])), CausalClass::Spacelike);
        assert_eq!(classify_causal(&lv(&[0.0, 1e-13, 0.0])), CausalClass::Zero);
    }

    #[test]
    fn rest_boost_examples() {
        let p = lv(&[3.0, 0.0, 0.0, 0.0]);
        let a = rest_boost(&p).unwrap();
        assert!((&a.matrix - DMatrix::identity(4, 4)).abs().max() < 1e-15);
        let s: f64 = 0.9;
        let p = lv(&[s.cosh(), s.sinh(), 0.0]);
        let a = rest_boost(&p).unwrap();
        let expect = Isometry::boost(2, 1, -s).unwrap();
        assert!((&a.matrix - &expect.matrix).abs().max() < 1e-14);
        let rest = a.apply(&p);
        assert!((rest.0[0] - 1.0).abs() < 1e-14 && rest.0[1].abs() < 1e-14);
        assert!(matches!(rest_boost(&lv(&[1.0, 2.0])), Err(Error::NotTimelikeFuture(_))));
    }

    #[test]
    fn rotation_action_on_potentials_matches_pointwise_evaluation() {
        let rot = Isometry::rotation(3, 1, 2, std::f64::consts::FRAC_PI_2).unwrap();
        let c = DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0]);
        let c2 = isometry_action_on_potentials(&rot, &c);
        // ρ^(1) ∘ A⁻¹ = ρ^(2) under this convention
        assert!((c2 - DVector::from_vec(vec![0.0, 0.0, 1.0, 0.0])).norm() < 1e-15);
        // pointwise: φ'(A z) = φ(z)
        let p = DiskPoint::from_slice(&[0.3, -0.1, 0.5]).unwrap().to_model();
        for iso in [rot.clone(), Isometry::boost(3, 2, 0.8).unwrap()] {
            let c = DVector::from_vec(vec![0.4, -1.0, 2.0, 0.3]);
            let c2 = isometry_action_on_potentials(&iso, &c);
            let q: ModelPoint = p.transformed(&iso.matrix);
            assert!((c2.dot(q.z()) - c.dot(p.z())).abs() < 1e-12);
        }
    }

    #[test]
    fn boost_inverse_is_identity() {
        let b = Isometry::boost(4, 3, 1.3).unwrap();
        let id = b.compose(&b.inverse());
        assert!((id.matrix - DMatrix::identity(5, 5)).abs().max() < 1e-12);
        assert!(Isometry::from_matrix(b.matrix.clone(), 1e-12).is_ok());
        assert!(Isometry::from_matrix(DMatrix::identity(3, 3) * 2.0, 1e-12).is_err());
    }

    proptest! {
        #[test]
        fn rest_boost_reaches_rest_frame(
            spatial in proptest::collection::vec(-5.0f64..5.0, 3),
            excess in 0.01f64..5.0,
        ) {
            let r = spatial.iter().map(|v| v * v).sum::<f64>().sqrt();
            let mut c = vec![r + excess];
            c.extend(spatial);
            let p = lv(&c);
            let a = rest_boost(&p).unwrap();
            let m = lorentz_inner(&p, &p).unwrap().sqrt();
            let rest = a.apply(&p);
            let scale = p.0.norm();
            prop_assert!((rest.0[0] - m).abs() <= 1e-12 * scale);
            for j in 1..4 {
                prop_assert!(rest.0[j].abs() <= 1e-12 * scale);
            }
            prop_assert!(a.lorentz_defect() < 1e-10 * (1.0 + scale * scale / (m * m)));
        }

        #[test]
        fn inner_product_is_invariant(
            angle in -3.0f64..3.0,
            rapidity in -2.0f64..2.0,
            z in proptest::collection::vec(-3.0f64..3.0, 4),
            w in proptest::collection::vec(-3.0f64..3.0, 4),
        ) {
            let iso = Isometry::rotation(3, 1, 3, angle).unwrap()
                .compose(&Isometry::boost(3, 2, rapidity).unwrap());
            let (z, w) = (lv(&z), lv(&w));
            let before = lorentz_inner(&z, &w).unwrap();
            let after = lorentz_inner(&iso.apply(&z), &iso.apply(&w)).unwrap();
            prop_assert!((before - after).abs() < 1e-12 * (1.0 + z.0.norm() * w.0.norm() * 16.0));
        }
    }
}
