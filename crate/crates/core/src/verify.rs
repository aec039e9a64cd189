//! Self-checks over the whole pipeline for one geometry.

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::Serialize;

use crate::cluster::{ClusterGeometry, Geometry};
use crate::error::Result;
use crate::fastforward::{evolve_with, EvolveOptions, Schedule};
use crate::groundstate::ground_with_derivative;
use crate::model::ClusterModel;
use crate::operators::{build_reg, golden_reg_matrix, Operator, RegWeights};
use crate::regsolver::{assemble_model, closed_form, solve};

pub type GoldenFn = fn(&ClusterGeometry, &RegWeights) -> Result<Operator>;

pub const GOLDEN_TOLERANCE: f64 = 1e-15;
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-9;
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;
pub const FIDELITY_TOLERANCE: f64 = 1e-6;
/// Closed-form checks stay this far from both ends of the sweep.
pub const COUPLING_MARGIN: f64 = 0.05;

/// Effective rank of the core system away from the sweep ends.
pub fn expected_rank(geometry: Geometry) -> usize {
    match geometry {
        Geometry::Triangle => 1,
        Geometry::Chain3 | Geometry::Pyramid => 2,
        Geometry::Square | Geometry::Star => 3,
        Geometry::Chain4 => 5,
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub golden: GoldenFn,
    pub golden_samples: usize,
    pub r_points: usize,
    pub seed: u64,
    /// Evolution used by the fidelity check; `None` skips it.
    pub evolution: Option<EvolveOptions>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            golden: golden_reg_matrix,
            golden_samples: 100,
            r_points: 50,
            seed: 0x5eed,
            evolution: Some(EvolveOptions::default()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    /// Worst observed value (`null` when the check could not run).
    pub value: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    fn within(name: &'static str, value: f64, tolerance: f64) -> Self {
        Check {
            name,
            pass: value <= tolerance,
            value: Some(value),
            tolerance,
            detail: String::new(),
        }
    }

    fn failed(name: &'static str, tolerance: f64, err: impl std::fmt::Display) -> Self {
        Check {
            name,
            pass: false,
            value: None,
            tolerance,
            detail: err.to_string(),
        }
    }

    fn from_result(name: &'static str, tolerance: f64, r: Result<f64>) -> Self {
        match r {
            Ok(v) => Check::within(name, v, tolerance),
            Err(e) => Check::failed(name, tolerance, e),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub geometry: Geometry,
    pub pass: bool,
    pub checks: Vec<Check>,
}

/// Positions R with J = R and Bx = B₀ − R both above [`COUPLING_MARGIN`].
pub fn interior_points(schedule: &Schedule, n: usize) -> Vec<f64> {
    let lo = COUPLING_MARGIN;
    let hi = schedule.b0 - COUPLING_MARGIN;
    (0..n).map(|k| lo + (hi - lo) * (k as f64 + 0.5) / n as f64).collect()
}

/// Largest entrywise difference between `build_reg` and `golden` over
/// random strengths in [-1, 1].
pub fn golden_deviation(geometry: &ClusterGeometry, golden: GoldenFn, samples: usize, seed: u64) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let w: Vec<f64> = (0..geometry.w_classes.len())
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        let q = if geometry.q_included {
            rng.random_range(-1.0..=1.0)
        } else {
            0.0
        };
        let weights = RegWeights::new(w, q);
        let built = build_reg(geometry, &weights)?;
        worst = worst.max(built.max_abs_diff(&golden(geometry, &weights)?));
    }
    Ok(worst)
}

/// Largest relative difference between the closed forms and the SVD
/// solution over the given sweep positions.
pub fn closed_form_deviation(model: &ClusterModel, schedule: &Schedule, rs: &[f64]) -> Result<f64> {
    let (dj, dbx) = schedule.coupling_rates();
    let mut worst = 0.0f64;
    for &r in rs {
        let (j, bx) = schedule.couplings(r);
        let (gs, d) = ground_with_derivative(model, j, bx, dj, dbx)?;
        let svd = solve(&assemble_model(model, &gs, &d, true)?, &model.geometry)?;
        let cf = closed_form(&model.geometry, &gs, &d)?;
        let a = svd.weights.to_vec(&model.geometry);
        let b = cf.weights.to_vec(&model.geometry);
        let scale = a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (x, y) in a.iter().zip(&b) {
            worst = worst.max((x - y).abs() / scale);
        }
    }
    Ok(worst)
}

/// Worst of |‖C‖ − 1|, |C·∂C| and ‖(A C)ᵀC‖∞ (every column of the core
/// matrix is orthogonal to C).
pub fn normalization_defect(model: &ClusterModel, schedule: &Schedule, rs: &[f64]) -> Result<f64> {
    let (dj, dbx) = schedule.coupling_rates();
    let mut worst = 0.0f64;
    for &r in rs {
        let (j, bx) = schedule.couplings(r);
        let (gs, d) = ground_with_derivative(model, j, bx, dj, dbx)?;
        let system = assemble_model(model, &gs, &d, true)?;
        worst = worst
            .max((gs.components.norm() - 1.0).abs())
            .max(d.normalization_defect(&gs))
            .max((system.matrix.transpose() * &gs.components).amax());
    }
    Ok(worst)
}

pub fn rank_at(model: &ClusterModel, schedule: &Schedule, r: f64) -> Result<usize> {
    let (dj, dbx) = schedule.coupling_rates();
    let (j, bx) = schedule.couplings(r);
    let (gs, d) = ground_with_derivative(model, j, bx, dj, dbx)?;
    Ok(assemble_model(model, &gs, &d, true)?.effective_rank)
}

/// 1 − min fidelity of the driven evolution.
pub fn fidelity_loss(model: &ClusterModel, schedule: &Schedule, opts: &EvolveOptions) -> Result<f64> {
    let records = evolve_with(model, schedule, opts)?;
    Ok(1.0 - records.iter().map(|r| r.fidelity).fold(1.0, f64::min))
}

pub fn verify_geometry(geometry: Geometry, schedule: &Schedule, opts: &VerifyOptions) -> VerifyReport {
    let model = ClusterModel::new(geometry);
    let rs = interior_points(schedule, opts.r_points);
    let mut checks = Vec::new();

    if geometry != Geometry::Triangle {
        checks.push(Check::from_result(
            "golden",
            GOLDEN_TOLERANCE,
            golden_deviation(&model.geometry, opts.golden, opts.golden_samples, opts.seed),
        ));
    }
    checks.push(Check::from_result(
        "closed_form",
        CLOSED_FORM_TOLERANCE,
        closed_form_deviation(&model, schedule, &rs),
    ));

    let expected = expected_rank(geometry);
    let generic_r = 0.29 * schedule.b0;
    checks.push(match rank_at(&model, schedule, generic_r) {
        Ok(rank) => Check {
            name: "rank",
            pass: rank == expected,
            value: Some(rank as f64),
            tolerance: expected as f64,
            detail: format!("expected rank {expected} at R={generic_r}"),
        },
        Err(e) => Check::failed("rank", expected as f64, e),
    });

    checks.push(Check::from_result(
        "normalization",
        NORMALIZATION_TOLERANCE,
        normalization_defect(&model, schedule, &rs),
    ));

    if let Some(evo) = &opts.evolution {
        checks.push(Check::from_result(
            "fidelity",
            FIDELITY_TOLERANCE,
            fidelity_loss(&model, schedule, evo),
        ));
    }

    VerifyReport {
        geometry,
        pass: checks.iter().all(|c| c.pass),
        checks,
    }
}
