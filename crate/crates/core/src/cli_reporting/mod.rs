//! Config-driven runs of the library and their deterministic reports.

mod config;
mod json;
mod report;
mod schema;

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use config::{Command, ConfigFile, Format, InspectSpec, MapSpec, OutputSpec, RunConfig, SamplingSpec};
pub use json::{format_g17, Node};
pub use report::{ReportDocument, Table, TOOL_VERSION};
pub use schema::{validate_report, REPORT_SCHEMA};

use crate::graph_geometry::{extrinsic_data, ExtrinsicData};
use crate::graph_library::{make_family, GraphFamily};
use crate::intrinsic_oracle::{flux_convergence_order, residual_suite_many};
use crate::mass_engine::{
    balanced_mass, decay_estimate, mass_report, penrose_report, recipe_residual, MassReport,
};
use crate::model_space::{half_space_map, CausalClass, DiskPoint, ModelPoint};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HYPOTHESES: i32 = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: ReportDocument,
    pub exit_code: i32,
}

/// Builds the family described by a config, in its mass chart.
pub fn family_from_config(file: &ConfigFile) -> Result<GraphFamily> {
    let family = make_family(&file.family)?;
    if file.chart.is_identity() {
        Ok(family)
    } else {
        let chart = file.chart.isometry(family.n)?;
        family.with_chart(chart)
    }
}

pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    let start = Instant::now();
    let file = &cfg.file;
    file.validate()?;
    let family = family_from_config(file)?;
    let mut echo = serde_json::to_value(file).map_err(|e| Error::Config(e.to_string()))?;
    if let Some(map) = echo.as_object_mut() {
        // where the report goes is not part of what it says
        map.remove("output");
        map.insert("command".into(), cfg.command.name().into());
    }
    let mut report = ReportDocument::new(Node::from_json(&echo));
    let ok = match cfg.command {
        Command::Inspect => inspect(&family, file, &mut report)?,
        Command::Verify => verify(&family, file, &mut report)?,
        Command::Mass => {
            let m = mass_report(&family, &file.quadrature)?;
            add_mass(&m, file.seed, &mut report)?
        }
        Command::Penrose => penrose(&family, file, &mut report)?,
        Command::Decay => decay(&family, file, &mut report)?,
        Command::Map => map(&family, file, &mut report)?,
    };
    if cfg.timings {
        report.timings.insert("total_seconds".into(), start.elapsed().as_secs_f64());
    }
    Ok(Outcome { report, exit_code: if ok { EXIT_OK } else { EXIT_HYPOTHESES } })
}

/// Rounding-level error for a pointwise analytic value.
fn rounding(v: f64) -> f64 {
    16.0 * f64::EPSILON * v.abs().max(1.0)
}

fn random_direction(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let norm = v.norm();
        if norm > 0.1 && norm <= 1.0 {
            return v / norm;
        }
    }
}

fn sample_points(
    family: &GraphFamily,
    s: &SamplingSpec,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<Vec<DiskPoint>> {
    if !(hi > lo) {
        return Err(Error::Config(format!("sampling range [{lo}, {hi}] is empty")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..s.points)
        .map(|_| {
            let r = rng.random_range(lo..hi);
            let theta = random_direction(&mut rng, family.n);
            ModelPoint::from_polar(r, &theta).to_disk()
        })
        .collect()
}

fn sampling_floor(family: &GraphFamily, s: &SamplingSpec) -> f64 {
    s.r_min.unwrap_or_else(|| family.boundary.map_or(0.1, |b| b.radius + 0.5))
}

fn coords_header(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}_{k}")).collect()
}

/// Principal curvatures: eigenvalues of `S` relative to `g`.
fn principal_curvatures(ext: &ExtrinsicData) -> Vec<f64> {
    let chol = ext.g.clone().cholesky().expect("induced metric is positive definite");
    let l_inv = chol.l().try_inverse().expect("triangular factor is invertible");
    let m: DMatrix<f64> = &l_inv * &ext.s * l_inv.transpose();
    let mut k: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    k.sort_by(f64::total_cmp);
    k
}

fn inspect(family: &GraphFamily, file: &ConfigFile, report: &mut ReportDocument) -> Result<bool> {
    let points: Vec<DiskPoint> = if file.inspect.points.is_empty() {
        let lo = sampling_floor(family, &file.sampling);
        sample_points(family, &file.sampling, lo, file.sampling.r_max, file.seed)?
    } else {
        file.inspect.points.iter().map(|x| DiskPoint::from_slice(x)).collect::<Result<_>>()?
    };
    let n = family.n;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for x in &points {
        let jet = family.jet(&x.to_model())?;
        let ext = extrinsic_data(&jet);
        let (_, recipe_rel) = recipe_residual(&jet);
        let k = principal_curvatures(&ext);
        let k_err = k.iter().fold(0.0_f64, |m, v| m.max(rounding(*v)));
        let gxt: Vec<f64> = ext.gxt.iter().copied().collect();
        let gxt_err = gxt.iter().fold(0.0_f64, |m, v| m.max(rounding(*v)));
        records.push(Node::obj([
            ("x", Node::measurement(Node::nums(x.coords().as_slice()), 0.0)),
            ("u", Node::scalar(jet.u, rounding(jet.u))),
            ("w", Node::scalar(ext.w, rounding(ext.w))),
            ("s1", Node::scalar(ext.s1, rounding(ext.s1))),
            ("s2", Node::scalar(ext.s2, rounding(ext.s2))),
            ("theta", Node::scalar(ext.theta, rounding(ext.theta))),
            ("principal_curvatures", Node::measurement(Node::nums(&k), k_err)),
            ("newton_killing", Node::measurement(Node::nums(&gxt), gxt_err)),
            ("recipe_relative_residual", Node::scalar(recipe_rel, 0.0)),
        ]));
        let mut row: Vec<f64> = x.coords().iter().copied().collect();
        row.extend([jet.u, ext.w, ext.s1, ext.s2, ext.theta]);
        rows.push(row);
    }
    report.insert("points", Node::Arr(records));
    let mut header = coords_header("x", n);
    header.extend(["u", "w", "s1", "s2", "theta"].map(String::from));
    report.table = Some(Table { header, rows });
    Ok(true)
}

fn verify(family: &GraphFamily, file: &ConfigFile, report: &mut ReportDocument) -> Result<bool> {
    let lo = sampling_floor(family, &file.sampling);
    let points = sample_points(family, &file.sampling, lo, file.sampling.r_max, file.seed)?;
    let res = residual_suite_many(family, &points, &file.fd)?;
    let recipe_rel: Vec<f64> = points
        .iter()
        .map(|x| family.derivative_jet(&x.to_model()).map(|j| recipe_residual(&j).1))
        .collect::<Result<_>>()?;
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0_f64, f64::max);
    let count = res.len() as f64;
    report.scalar("flux_max", max(&mut res.iter().map(|r| r.flux)), 0.0);
    report.scalar("flux_mean", res.iter().map(|r| r.flux).sum::<f64>() / count, 0.0);
    report.scalar("recipe_max", max(&mut res.iter().map(|r| r.recipe.amax())), 0.0);
    report.scalar("recipe_relative_max", max(&mut recipe_rel.iter().copied()), 0.0);
    report.scalar("gauss_max", max(&mut res.iter().map(|r| r.gauss)), 0.0);
    report.scalar(
        "gauss_relative_max",
        max(&mut res.iter().map(|r| r.gauss / (1.0 + r.scalar_fd.abs()))),
        0.0,
    );

    // observed order on a band near the inner radius, at a step large enough
    // to stay clear of rounding
    let order_step = (16.0 * file.fd.step).min(0.05);
    let band = SamplingSpec { points: file.sampling.points.min(20), ..file.sampling.clone() };
    let order = sample_points(family, &band, lo, lo + 2.0, file.seed.wrapping_add(1))
        .and_then(|pts| flux_convergence_order(family, &pts, order_step, file.fd.scheme))
        .unwrap_or(f64::NAN);
    report.scalar("flux_convergence_order", order, 0.0);
    report.scalar("scheme_order", file.fd.scheme.order() as f64, 0.0);

    let n = family.n;
    let mut header = coords_header("x", n);
    header.extend(["flux", "recipe", "gauss"].map(String::from));
    let rows = points
        .iter()
        .zip(&res)
        .map(|(x, r)| {
            let mut row: Vec<f64> = x.coords().iter().copied().collect();
            row.extend([r.flux, r.recipe.amax(), r.gauss]);
            row
        })
        .collect();
    report.table = Some(Table { header, rows });
    Ok(true)
}

/// Fills the mass section; returns whether the mass hypotheses hold.
fn add_mass(m: &MassReport, seed: u64, report: &mut ReportDocument) -> Result<bool> {
    let p = m.p.components();
    let errors: Vec<f64> = m.components.iter().map(|c| c.error).collect();
    for (i, (v, e)) in p.iter().zip(&errors).enumerate() {
        report.scalar(&format!("p_{i}"), *v, *e);
    }
    let msq_err: f64 = p.iter().zip(&errors).map(|(v, e)| 2.0 * v.abs() * e).sum();
    report.scalar("m_squared", m.m_squared, msq_err);
    report.scalar("boundary_decay_exponent", m.components[0].exponent, 0.0);
    report.insert("causal_class", Node::Str(m.causal_class.as_str().into()));
    let timelike = m.causal_class == CausalClass::TimelikeFuture;
    report.flag("timelike_future", timelike);
    if timelike {
        let b = balanced_mass(&m.p, seed)?;
        report.scalar("balanced_mass", b.value, msq_err / (2.0 * b.value));
        report.scalar("balanced_mass_sampled_infimum", b.sampled_infimum, 0.0);
        report.flag("sampled_infimum_bound", b.sampled_infimum >= b.value - 1e-9);
    }
    let mut energy = true;
    let mut predicted_err = 0.0;
    if let Some(b) = &m.bulk {
        report.scalar("bulk_mass", b.value, b.error);
        report.scalar("energy_condition_min", b.energy_min, 0.0);
        report.scalar("scalar_tail_exponent", b.tail_exponent, 0.0);
        energy = b.energy_min >= 0.0;
        predicted_err += b.error;
    }
    report.flag("energy_condition", energy);
    if let Some(h) = &m.horizon {
        report.scalar("horizon_term", h.value, h.error);
        predicted_err += h.error;
    }
    if let Some(gap) = m.consistency_gap {
        report.scalar("consistency_gap", gap, errors[0] + predicted_err);
    }
    let series: Vec<f64> = m.series.values.iter().map(|v| v[0]).collect();
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for (r, v) in m.series.r.iter().zip(&series) {
        let gap = (v - p[0]).abs();
        rows.push(vec![*r, *v, gap]);
        records.push(Node::obj([
            ("r", Node::scalar(*r, 0.0)),
            ("m_phi", Node::scalar(*v, 0.0)),
            ("gap_estimate", Node::scalar(gap, errors[0])),
        ]));
    }
    report.insert("boundary_series", Node::Arr(records));
    report.table = Some(Table { header: ["r", "m_phi", "gap_estimate"].map(String::from).to_vec(), rows });
    Ok(energy && (timelike || m.causal_class == CausalClass::Zero))
}

fn penrose(family: &GraphFamily, file: &ConfigFile, report: &mut ReportDocument) -> Result<bool> {
    let r = penrose_report(family, &file.quadrature)?;
    let mass_ok = add_mass(&r.mass, file.seed, report)?;
    let n = family.n as f64;
    let (area_err, h_err) = r.horizon.as_ref().map_or((0.0, 0.0), |h| (h.area_error, h.error));
    let mass_err = report.error_estimates.get("balanced_mass").copied().unwrap_or(0.0);
    // d/dA of A^k is k A^{k-1}
    let slope = |k: f64| if r.area > 0.0 { k * (r.area).powf(k - 1.0) } else { 0.0 };
    let omega_ratio = |k: f64| crate::model_space::sphere_area(family.n - 1).powf(-k);
    let low_err = 0.5 * omega_ratio((n - 2.0) / (n - 1.0)) * slope((n - 2.0) / (n - 1.0)) * area_err;
    let high_err = low_err + 0.5 * omega_ratio(n / (n - 1.0)) * slope(n / (n - 1.0)) * area_err;
    report.scalar("area", r.area, area_err);
    report.scalar("penrose_mass", r.mass_value, mass_err);
    report.scalar("rhs_horospherical", r.rhs_horospherical, low_err);
    report.scalar("rhs_hyperbolic", r.rhs_hyperbolic, high_err);
    report.scalar("margin_horospherical", r.margin_horospherical, mass_err + low_err);
    report.scalar("margin_hyperbolic", r.margin_hyperbolic, mass_err + high_err);
    report.scalar("af_bound", r.af_bound, 0.0);
    report.scalar("af_margin", r.af_margin, h_err);
    if let Some(h) = &r.horizon {
        report.scalar("af_lhs", h.s1_integral, h_err);
        report.scalar("orthogonality_defect_max", h.max_orthogonality_defect, 0.0);
        report.scalar("boundary_s1_min", h.min_s1, 0.0);
        report.scalar("boundary_mean_curvature_min", h.mean_curv_in_m.0, h.mean_curv_error);
        report.scalar("boundary_mean_curvature_max", h.mean_curv_in_m.1, h.mean_curv_error);
        report.insert("wall", Node::Str(h.wall.name().into()));
    }
    let f = &r.flags;
    report.flag("has_boundary", r.horizon.is_some());
    report.flag("orthogonal", f.orthogonal);
    report.flag("mean_convex", f.mean_convex);
    report.flag("horosphere_wall", f.horosphere_wall);
    report.flag("inequality_asserted", r.inequality_asserted);
    let claim = if r.inequality_asserted { "inequality asserted" } else { "inequality not asserted" };
    report.insert("claim", Node::Str(claim.into()));
    Ok(mass_ok && f.orthogonal && f.mean_convex)
}

fn decay(family: &GraphFamily, file: &ConfigFile, report: &mut ReportDocument) -> Result<bool> {
    let d = decay_estimate(family, &file.quadrature)?;
    report.scalar("tau_hat", d.tau_hat, 0.0);
    report.scalar("scalar_tail_exponent", d.scalar_tail_exponent, 0.0);
    report.scalar("r_lo", d.r_range.0, 0.0);
    report.scalar("r_hi", d.r_range.1, 0.0);
    report.flag("admissible", d.admissible);
    report.table = Some(Table {
        header: ["r", "decay_quantity", "scalar_density"].map(String::from).to_vec(),
        rows: d.samples.iter().map(|&(r, q, s)| vec![r, q, s]).collect(),
    });
    Ok(d.admissible)
}

fn map(family: &GraphFamily, file: &ConfigFile, report: &mut ReportDocument) -> Result<bool> {
    let lo = family.boundary.map_or(0.0, |b| b.radius);
    if !(file.map.r_max > lo) {
        return Err(Error::Config(format!("map.r_max must exceed {lo}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(file.seed);
    let mut rows = Vec::new();
    let mut records = Vec::new();
    for _ in 0..file.map.samples {
        let r = rng.random_range(lo..file.map.r_max);
        let theta = random_direction(&mut rng, family.n);
        let p = ModelPoint::from_polar(r, &theta);
        let u = family.value(&p)?;
        let y: Vec<f64> = half_space_map(&p, u).iter().copied().collect();
        let err = y.iter().fold(0.0_f64, |m, v| m.max(rounding(*v)));
        records.push(Node::obj([
            ("r", Node::scalar(r, 0.0)),
            ("u", Node::scalar(u, rounding(u))),
            ("y", Node::measurement(Node::nums(&y), err)),
        ]));
        let mut row = vec![r, u];
        row.extend(y);
        rows.push(row);
    }
    report.insert("points", Node::Arr(records));
    let mut header = vec!["r".to_string(), "u".to_string()];
    header.extend(coords_header("y", family.n + 1));
    report.table = Some(Table { header, rows });
    Ok(true)
}
