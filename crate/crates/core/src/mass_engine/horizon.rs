use rayon::prelude::*;

use super::bulk::BulkMass;
use super::vector::{mass_report, MassReport};
use super::{c_n, QuadratureSpec};
use crate::graph_geometry::boundary_frame_data_unchecked;
use crate::graph_library::{GraphFamily, WallSpec};
use crate::model_space::{sphere_area, sphere_quadrature, CausalClass, ModelPoint};
use crate::summation::pairwise_sum;
use crate::{Error, Result};

/// Orthogonality defect above which the boundary formula is not trusted.
pub const ORTHOGONALITY_TOL: f64 = 1e-4;

/// `c_n ∫_Γ (ρ/𝒲) S₁(Γ) dΓ` and the geometry of `Γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct HorizonTerm {
    pub value: f64,
    /// Change of `value` against a rule of half the order.
    pub error: f64,
    pub wall: WallSpec,
    pub radius: f64,
    /// Area of `Γ` in the induced metric.
    pub area: f64,
    pub area_error: f64,
    /// `∫_Γ S₁(Γ) dΓ`.
    pub s1_integral: f64,
    pub min_s1: f64,
    pub max_orthogonality_defect: f64,
    /// Range of the mean curvature of `Γ` inside the graph.
    pub mean_curv_in_m: (f64, f64),
    /// Largest rounding bound on the mean curvature samples.
    pub mean_curv_error: f64,
    pub min_weight: f64,
    pub max_weight: f64,
}

pub fn horizon_term(family: &GraphFamily, q: &QuadratureSpec) -> Result<HorizonTerm> {
    let mut fine = boundary_integrals(family, q.sphere_order)?;
    let coarse = boundary_integrals(family, (q.sphere_order / 2).max(2))?;
    fine.error = (fine.value - coarse.value).abs();
    fine.area_error = (fine.area - coarse.area).abs();
    Ok(fine)
}

fn boundary_integrals(family: &GraphFamily, order: usize) -> Result<HorizonTerm> {
    let boundary = family
        .boundary
        .ok_or_else(|| Error::BadParams(format!("family {} has no inner boundary", family.name)))?;
    let n = family.n;
    let rule = sphere_quadrature(n - 1, order)?;
    let wall = boundary.wall;
    struct NodeData {
        weighted: f64,
        area: f64,
        s1: f64,
        s1_raw: f64,
        defect: f64,
        h_m: f64,
        h_err: f64,
        weight: f64,
    }
    let data: Vec<NodeData> = rule
        .nodes
        .par_iter()
        .map(|node| {
            // Γ itself must lie on the wall
            let on = ModelPoint::from_polar(boundary.radius, &node.theta);
            let wall_height = wall.jet(&on).u;
            let height = family.value(&on)?;
            let distance = (height - wall_height).abs();
            if !(distance <= 1e-8 * height.abs().max(1.0)) {
                return Err(Error::WallMismatch { distance });
            }
            let p = family.boundary_point(&node.theta).expect("boundary present");
            let mut jet = family.derivative_jet(&p)?;
            jet.u = wall_height;
            let wall_jet = wall.jet(&p);
            let b = boundary_frame_data_unchecked(&jet, &wall_jet, 1.0);
            let r = p.r();
            let radial = jet.u_alpha.dot(&node.theta);
            let tangential = (&jet.u_alpha - &node.theta * radial).norm();
            let d_gamma = r.powi(n as i32 - 1) * (jet.pot.rho * tangential).hypot(1.0);
            let w = node.weight * d_gamma;
            Ok(NodeData {
                weighted: w * b.weight * b.s1_gamma,
                area: w,
                s1: w * b.s1_gamma,
                s1_raw: b.s1_gamma,
                defect: b.orthogonality_defect,
                h_m: b.mean_curv_in_m,
                h_err: b.mean_curv_error,
                weight: b.weight,
            })
        })
        .collect::<Result<_>>()?;
    let sum = |f: &dyn Fn(&NodeData) -> f64| pairwise_sum(&data.iter().map(f).collect::<Vec<_>>());
    let fold =
        |f: &dyn Fn(&NodeData) -> f64, init: f64, op: fn(f64, f64) -> f64| data.iter().map(f).fold(init, op);
    Ok(HorizonTerm {
        value: c_n(n) * sum(&|d| d.weighted),
        error: 0.0,
        wall,
        radius: boundary.radius,
        area: sum(&|d| d.area),
        area_error: 0.0,
        s1_integral: sum(&|d| d.s1),
        min_s1: fold(&|d| d.s1_raw, f64::INFINITY, f64::min),
        max_orthogonality_defect: fold(&|d| d.defect, 0.0, f64::max),
        mean_curv_in_m: (
            fold(&|d| d.h_m, f64::INFINITY, f64::min),
            fold(&|d| d.h_m, f64::NEG_INFINITY, f64::max),
        ),
        mean_curv_error: fold(&|d| d.h_err, 0.0, f64::max),
        min_weight: fold(&|d| d.weight, f64::INFINITY, f64::min),
        max_weight: fold(&|d| d.weight, f64::NEG_INFINITY, f64::max),
    })
}

/// Hypothesis checks behind the Penrose-type inequalities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PenroseFlags {
    pub timelike_future: bool,
    /// `Θ 𝔯 ≥ 0` at every bulk sample.
    pub energy_condition: bool,
    /// The graph meets the wall orthogonally along `Γ`.
    pub orthogonal: bool,
    /// `S₁(Γ) ≥ 0` for the inward normal.
    pub mean_convex: bool,
    /// The wall is a horosphere, the setting of the proven inequality.
    pub horosphere_wall: bool,
}

impl PenroseFlags {
    /// Hypotheses that, when violated, make the run a hypothesis failure.
    pub fn hypotheses_met(&self) -> bool {
        self.timelike_future && self.energy_condition && self.orthogonal && self.mean_convex
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PenroseReport {
    pub mass: MassReport,
    /// Balanced mass if `P` is future timelike, else `P_0`.
    pub mass_value: f64,
    pub horizon: Option<HorizonTerm>,
    pub area: f64,
    /// `½ (A/ω_{n-1})^{(n-2)/(n-1)}`.
    pub rhs_horospherical: f64,
    /// `½ [(A/ω_{n-1})^{(n-2)/(n-1)} + (A/ω_{n-1})^{n/(n-1)}]`.
    pub rhs_hyperbolic: f64,
    pub margin_horospherical: f64,
    pub margin_hyperbolic: f64,
    /// `(n-1) ω_{n-1}^{1/(n-1)} A^{(n-2)/(n-1)}`, compared with `∫ S₁ dΓ`.
    pub af_bound: f64,
    pub af_margin: f64,
    pub flags: PenroseFlags,
    /// All hypotheses hold, so the horospherical inequality is claimed.
    pub inequality_asserted: bool,
}

pub fn penrose_report(family: &GraphFamily, q: &QuadratureSpec) -> Result<PenroseReport> {
    let mass = mass_report(family, q)?;
    let n = family.n as f64;
    let omega = sphere_area(family.n - 1);
    let mass_value = mass.balanced_mass.unwrap_or(mass.p.0[0]);
    let horizon = mass.horizon.clone();
    let area = horizon.as_ref().map_or(0.0, |h| h.area);
    let ratio = area / omega;
    let low = 0.5 * ratio.powf((n - 2.0) / (n - 1.0));
    let high = low + 0.5 * ratio.powf(n / (n - 1.0));
    let af_bound = (n - 1.0) * omega.powf(1.0 / (n - 1.0)) * area.powf((n - 2.0) / (n - 1.0));
    let af_margin = horizon.as_ref().map_or(0.0, |h| h.s1_integral - af_bound);
    let bulk: &BulkMass = mass.bulk.as_ref().expect("mass report computes the bulk term");
    let flags = PenroseFlags {
        timelike_future: mass.causal_class == CausalClass::TimelikeFuture,
        energy_condition: bulk.energy_min >= 0.0,
        orthogonal: horizon.as_ref().is_none_or(|h| h.max_orthogonality_defect <= ORTHOGONALITY_TOL),
        mean_convex: horizon.as_ref().is_none_or(|h| h.min_s1 >= 0.0),
        horosphere_wall: horizon
            .as_ref()
            .is_some_and(|h| matches!(h.wall, WallSpec::Horosphere { sign, .. } if sign > 0.0)),
    };
    let inequality_asserted = horizon.is_some() && flags.hypotheses_met() && flags.horosphere_wall;
    Ok(PenroseReport {
        mass_value,
        area,
        rhs_horospherical: low,
        rhs_hyperbolic: high,
        margin_horospherical: mass_value - low,
        margin_hyperbolic: mass_value - high,
        af_bound,
        af_margin,
        horizon,
        flags,
        inequality_asserted,
        mass,
    })
}
