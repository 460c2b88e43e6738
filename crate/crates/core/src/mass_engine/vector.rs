use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::boundary::{boundary_series, BoundarySeries};
use super::bulk::{bulk_mass, BulkMass};
use super::extrapolate::{extrapolate, LimitEstimate};
use super::horizon::{horizon_term, HorizonTerm};
use super::QuadratureSpec;
use crate::graph_library::GraphFamily;
use crate::model_space::{classify_causal, lorentz_inner, rest_boost, CausalClass, LorentzVector};
use crate::{Error, Result};

/// Mass vector with its invariants and the bulk/horizon cross-check.
#[derive(Clone, Debug, PartialEq)]
pub struct MassReport {
    pub p: LorentzVector,
    /// Extrapolation details per component `P_i`.
    pub components: Vec<LimitEstimate>,
    pub m_squared: f64,
    pub balanced_mass: Option<f64>,
    pub causal_class: CausalClass,
    pub series: BoundarySeries,
    pub bulk: Option<BulkMass>,
    pub horizon: Option<HorizonTerm>,
    /// `|m_Ψ(ρ) - (bulk + horizon)|` with `m_Ψ(ρ)` taken in the graph chart.
    pub consistency_gap: Option<f64>,
}

/// `P_i = m_Ψ(ρ^(i))` from the extrapolated boundary series.
pub fn mass_vector(
    family: &GraphFamily,
    q: &QuadratureSpec,
) -> Result<(LorentzVector, Vec<LimitEstimate>, BoundarySeries)> {
    let series = boundary_series(family, q)?;
    let n = family.n;
    let mut comps = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let values: Vec<f64> = series.values.iter().map(|v| v[i]).collect();
        comps.push(extrapolate(&series.r, &values, q.extrapolation)?);
    }
    let p = LorentzVector::new(DVector::from_fn(n + 1, |i, _| comps[i].value));
    Ok((p, comps, series))
}

/// Mass vector, bulk mass, horizon term and their consistency.
pub fn mass_report(family: &GraphFamily, q: &QuadratureSpec) -> Result<MassReport> {
    let (p, components, series) = mass_vector(family, q)?;
    let m_squared = lorentz_inner(&p, &p)?.abs();
    let causal_class = classify_causal(&p);
    let balanced =
        if causal_class == CausalClass::TimelikeFuture { Some(lorentz_inner(&p, &p)?.sqrt()) } else { None };
    let bulk = bulk_mass(family, q)?;
    let horizon = match family.boundary {
        Some(_) => Some(horizon_term(family, q)?),
        None => None,
    };
    // P in the graph chart is C⁻¹ P
    let graph_p = family.chart.inverse().apply(&p);
    let predicted = bulk.value + horizon.as_ref().map_or(0.0, |h| h.value);
    let consistency_gap = Some((graph_p.0[0] - predicted).abs());
    Ok(MassReport {
        p,
        components,
        m_squared,
        balanced_mass: balanced,
        causal_class,
        series,
        bulk: Some(bulk),
        horizon,
        consistency_gap,
    })
}

/// `√(P,P)` together with the sampled infimum of `m_Ψ(φ)` over unit future
/// potentials `φ = Σ a_i ρ^(i)`, `(a, a) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BalancedMass {
    pub value: f64,
    pub sampled_infimum: f64,
    pub samples: usize,
}

pub const BALANCE_SAMPLES: usize = 100;

pub fn balanced_mass(p: &LorentzVector, seed: u64) -> Result<BalancedMass> {
    let class = classify_causal(p);
    if class != CausalClass::TimelikeFuture {
        return Err(Error::NotTimelikeFuture(class.as_str().to_string()));
    }
    let value = lorentz_inner(p, p)?.sqrt();
    // the rest frame really is a balanced chart
    let rest = rest_boost(p)?.apply(p);
    debug_assert!(rest.0.rows(1, p.dim()).amax() <= 1e-10 * p.0.amax());
    let n = p.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut inf = f64::INFINITY;
    for _ in 0..BALANCE_SAMPLES {
        let s: f64 = rng.random_range(0.0..3.0);
        let mut dir = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = dir.norm();
        if norm < 1e-12 {
            dir = DVector::zeros(n);
            dir[0] = 1.0;
        } else {
            dir /= norm;
        }
        let mut a = DVector::zeros(n + 1);
        a[0] = s.cosh();
        for k in 0..n {
            a[k + 1] = s.sinh() * dir[k];
        }
        inf = inf.min(a.dot(&p.0));
    }
    Ok(BalancedMass { value, sampled_infimum: inf, samples: BALANCE_SAMPLES })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_mass_examples() {
        let b = balanced_mass(&LorentzVector::from_slice(&[1.0, 0.0, 0.0, 0.0]), 1).unwrap();
        assert_eq!(b.value, 1.0);
        let s: f64 = 0.3;
        let p = LorentzVector::from_slice(&[s.cosh(), s.sinh(), 0.0, 0.0]);
        let b = balanced_mass(&p, 7).unwrap();
        assert!((b.value - 1.0).abs() < 1e-12);
        assert!(b.sampled_infimum >= b.value - 1e-9);
        assert!(balanced_mass(&LorentzVector::from_slice(&[0.0, 1.0]), 0).is_err());
    }
}
