use nalgebra::DVector;
use proptest::prelude::*;

use ahmass::graph_library::{make_family, FamilySpec, PerturbationMode};
use ahmass::mass_engine::{
    balanced_mass, decay_estimate, mass_functional_at_radius, mass_limit, mass_report, QuadratureSpec,
};
use ahmass::model_space::{lorentz_inner, rest_boost, Isometry, LorentzVector, ModelPoint};
use ahmass::{Error, Result};

fn ads(n: usize, m: f64) -> ahmass::graph_library::GraphFamily {
    make_family(&FamilySpec::AdsSchwarzschild { n, m }).unwrap()
}

fn fast() -> QuadratureSpec {
    QuadratureSpec { sphere_order: 6, ..QuadratureSpec::default() }
}

#[test]
fn ads_schwarzschild_induces_the_static_slice_metric() {
    for (n, m) in [(3, 1.0), (4, 0.7), (2, 1.5)] {
        let f = ads(n, m);
        let mut theta = DVector::zeros(n);
        theta[0] = 0.6;
        theta[1] = -0.8;
        for r in [1.8, 3.0, 10.0, 40.0] {
            let p = ModelPoint::from_polar(r, &theta);
            let j = f.derivative_jet(&p).unwrap();
            let rho2 = 1.0 + r * r;
            // unit radial frame vector is ρ ∂_r
            let ur = j.u_alpha.dot(&theta);
            let g_rr = (1.0 + rho2 * ur * ur) / rho2;
            let v = 1.0 + r * r - 2.0 * m * r.powi(2 - n as i32);
            assert!((g_rr * v - 1.0).abs() < 1e-12, "n = {n}, r = {r}: {}", g_rr * v);
        }
    }
}

#[test]
fn ads_schwarzschild_mass_vector_is_static() {
    let rep = mass_report(&ads(3, 1.0), &fast()).unwrap();
    let m = rep.p.0[0];
    assert!((m - 1.0).abs() < 1e-2);
    assert!(rep.p.0.rows(1, 3).amax() <= 1e-8 * m);
}

#[test]
fn translated_ads_schwarzschild_keeps_its_mass() {
    let base = mass_report(&ads(3, 1.0), &fast()).unwrap();
    let chart = Isometry::boost(3, 2, 0.8).unwrap();
    let moved = mass_report(&ads(3, 1.0).with_chart(chart.clone()).unwrap(), &fast()).unwrap();
    assert!((moved.m_squared - base.m_squared).abs() <= 1e-2 * base.m_squared);
    // P transforms as a Lorentz vector
    let expect = chart.apply(&base.p);
    assert!((&expect.0 - &moved.p.0).amax() <= 1e-2 * expect.0.amax());
    assert!(moved.p.0[2] > 0.5);
}

#[test]
fn horosphere_mass_does_not_converge() {
    let f = make_family(&FamilySpec::Horosphere { n: 3, d: 0.0, sign: 1.0 }).unwrap();
    let rho = DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]);
    assert!(matches!(mass_limit(&f, &rho, &fast()), Err(Error::NonConvergentSeries { .. })));
}

#[test]
fn zero_slice_decays_infinitely_fast() {
    let f = make_family(&FamilySpec::Zero { n: 3, t0: 0.0 }).unwrap();
    let d = decay_estimate(&f, &fast()).unwrap();
    assert!(d.tau_hat == f64::INFINITY && d.admissible);
}

#[test]
fn boosted_rest_vector_has_unit_mass() {
    let p = LorentzVector::from_slice(&[0.3f64.cosh(), 0.3f64.sinh(), 0.0, 0.0]);
    let b = balanced_mass(&p, 5).unwrap();
    assert!((b.value - 1.0).abs() < 1e-12);
    assert!(b.sampled_infimum >= b.value - 1e-9);
    let spacelike = LorentzVector::from_slice(&[0.1, 1.0, 0.0, 0.0]);
    assert!(matches!(balanced_mass(&spacelike, 5), Err(Error::NotTimelikeFuture(_))));
}

fn functional(f: &ahmass::graph_library::GraphFamily, c: &[f64], r: f64) -> Result<f64> {
    mass_functional_at_radius(f, &DVector::from_column_slice(c), r, &fast())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn mass_functional_is_linear(
        a in proptest::collection::vec(-2.0f64..2.0, 4),
        b in proptest::collection::vec(-2.0f64..2.0, 4),
        s in -3.0f64..3.0,
        r in 5.0f64..60.0,
    ) {
        let f = make_family(&FamilySpec::DecayPerturbation {
            n: 3, epsilon: 1.0, tau: 4.0, mode: PerturbationMode::Dipole,
        }).unwrap();
        let f = f.with_chart(Isometry::boost(3, 1, 0.3).unwrap()).unwrap();
        let mix: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + s * y).collect();
        let lhs = functional(&f, &mix, r).unwrap();
        let (fa, fb) = (functional(&f, &a, r).unwrap(), functional(&f, &b, r).unwrap());
        let scale = fa.abs() + s.abs() * fb.abs() + 1e-300;
        prop_assert!((lhs - (fa + s * fb)).abs() <= 1e-12 * scale);
    }

    #[test]
    fn mass_squared_is_invariant_under_balancing_and_rotation(
        m in 0.05f64..20.0,
        s in 0.0f64..4.0,
        dir in proptest::collection::vec(-1.0f64..1.0, 3),
        angle in 0.0f64..6.3,
    ) {
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let mut c = vec![m * s.cosh()];
        c.extend(dir.iter().map(|x| m * s.sinh() * x / norm));
        let p = LorentzVector::from_slice(&c);
        let m2 = lorentz_inner(&p, &p).unwrap();
        let scale = p.0.norm_squared();
        let rest = rest_boost(&p).unwrap().apply(&p);
        prop_assert!((lorentz_inner(&rest, &rest).unwrap() - m2).abs() <= 1e-12 * scale);
        let rot = Isometry::rotation(3, 1, 3, angle).unwrap().apply(&p);
        prop_assert!((lorentz_inner(&rot, &rot).unwrap() - m2).abs() <= 1e-12 * scale);
    }
}
