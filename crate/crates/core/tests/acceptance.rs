//! One PASS/FAIL line per acceptance criterion; exits non-zero on failure.

use std::process::ExitCode;
use std::time::Instant;

use ffspin::cluster::Geometry;
use ffspin::error::Error;
use ffspin::fastforward::{evolve_with, EvolutionRecord, EvolveOptions, Schedule};
use ffspin::groundstate::{ground_analytic, ground_state, ground_with_derivative};
use ffspin::model::ClusterModel;
use ffspin::operators::golden_reg_matrix;
use ffspin::regsolver::{assemble_model, least_squares, square_q_extra_c2};
use ffspin::verify::{
    closed_form_deviation, expected_rank, golden_deviation, interior_points, normalization_defect, rank_at,
};

const STEPS: usize = 100_000;
const STRIDE: usize = 100;
const GENERIC_R: [f64; 4] = [1.3, 2.9, 5.5, 8.1];

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: usize, name: &str, pass: bool, detail: String) {
        if !pass {
            self.failures += 1;
        }
        println!("{} criterion {n} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    }
}

fn geomspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

struct Run {
    geometry: Geometry,
    records: Vec<EvolutionRecord>,
    seconds: f64,
}

fn driven_runs(schedule: &Schedule) -> Vec<std::result::Result<Run, (Geometry, Error)>> {
    Geometry::ALL
        .iter()
        .map(|&g| {
            let model = ClusterModel::new(g);
            let start = Instant::now();
            let opts = EvolveOptions {
                steps: STEPS,
                stride: STRIDE,
                driving: true,
            };
            evolve_with(&model, schedule, &opts)
                .map(|records| Run {
                    geometry: g,
                    records,
                    seconds: start.elapsed().as_secs_f64(),
                })
                .map_err(|e| (g, e))
        })
        .collect()
}

fn criterion_1(rep: &mut Report, runs: &[std::result::Result<Run, (Geometry, Error)>]) {
    let mut pass = true;
    let mut parts = Vec::new();
    for run in runs {
        match run {
            Ok(r) => {
                let min_fid = r.records.iter().map(|x| x.fidelity).fold(1.0, f64::min);
                pass &= min_fid >= 1.0 - 1e-6 && r.seconds < 30.0;
                parts.push(format!("{} 1-F={:.1e} {:.1}s", r.geometry, 1.0 - min_fid, r.seconds));
            }
            Err((g, e)) => {
                pass = false;
                parts.push(format!("{g} error: {e}"));
            }
        }
    }
    rep.line(1, "fidelity", pass, parts.join(", "));
}

fn criterion_2(rep: &mut Report, schedule: &Schedule) {
    let start = Instant::now();
    let rs = interior_points(schedule, 50);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for g in Geometry::ALL {
        match closed_form_deviation(&ClusterModel::new(g), schedule, &rs) {
            Ok(d) => worst = worst.max(d),
            Err(e) => errors.push(format!("{g}: {e}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    rep.line(
        2,
        "closed forms",
        errors.is_empty() && worst <= 1e-9 && secs < 5.0,
        format!(
            "max relative deviation {worst:.1e} over 6x50 points in {secs:.2}s {}",
            errors.join("; ")
        ),
    );
}

fn criterion_3(rep: &mut Report, schedule: &Schedule) {
    let mut pass = true;
    let mut parts = Vec::new();
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        let ranks: Vec<String> = GENERIC_R
            .iter()
            .map(|&r| match rank_at(&m, schedule, r) {
                Ok(k) => {
                    pass &= k == expected_rank(g);
                    k.to_string()
                }
                Err(e) => {
                    pass = false;
                    e.to_string()
                }
            })
            .collect();
        parts.push(format!("{g}:{}", ranks.join("/")));
    }
    rep.line(3, "rank table", pass, parts.join(" "));
}

fn criterion_4(rep: &mut Report) {
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for g in Geometry::ALL.into_iter().filter(|&g| g != Geometry::Triangle) {
        match golden_deviation(&g.cluster(), golden_reg_matrix, 100, 2024) {
            Ok(d) => worst = worst.max(d),
            Err(e) => errors.push(format!("{g}: {e}")),
        }
    }
    rep.line(
        4,
        "tabulated matrices",
        errors.is_empty() && worst <= 1e-15,
        format!(
            "max entry difference {worst:e} over 5x100 weight vectors {}",
            errors.join("; ")
        ),
    );
}

fn criterion_5(rep: &mut Report) {
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    let js = geomspace(0.01, 20.0, 10);
    let bxs = geomspace(0.01, 20.0, 5);
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        for &j in &js {
            for &bx in &bxs {
                match (ground_analytic(&m.geometry, j, bx), ground_state(&m, j, bx)) {
                    (Ok(a), Ok(n)) => worst = worst.max((&a.components - &n.components).amax()),
                    (a, n) => errors.push(format!("{g} ({j},{bx}): {:?} {:?}", a.err(), n.err())),
                }
            }
        }
    }
    let mut singular_ok = true;
    for g in [Geometry::Star, Geometry::Chain4] {
        for j in [0.0, 1e-9] {
            singular_ok &= matches!(ground_analytic(&g.cluster(), j, 3.0), Err(Error::Domain(_)));
        }
    }
    rep.line(
        5,
        "ground states",
        errors.is_empty() && worst <= 1e-8 && singular_ok,
        format!(
            "max deviation {worst:.1e} on 6x50 (J,Bx) points; J->0 domain errors for star/chain4: {singular_ok} {}",
            errors.join("; ")
        ),
    );
}

fn criterion_6(rep: &mut Report, schedule: &Schedule) {
    let mut pass = true;
    let mut parts = Vec::new();
    let (dj, dbx) = schedule.coupling_rates();
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        let mut extreme = if m.geometry.n_sites == 3 { 0.0f64 } else { f64::INFINITY };
        let mut failed = false;
        for &r in &GENERIC_R {
            let (j, bx) = schedule.couplings(r);
            let res = ground_with_derivative(&m, j, bx, dj, dbx)
                .and_then(|(gs, d)| assemble_model(&m, &gs, &d, false))
                .and_then(|sys| least_squares(&sys, &m.geometry));
            match res {
                Ok(sol) if m.geometry.n_sites == 3 => extreme = extreme.max(sol.residual),
                Ok(sol) => extreme = extreme.min(sol.residual),
                Err(_) => failed = true,
            }
        }
        let ok = !failed
            && if m.geometry.n_sites == 3 {
                extreme < 1e-10
            } else {
                extreme > 1e-6
            };
        pass &= ok;
        parts.push(format!("{g} {extreme:.1e}"));
    }
    rep.line(
        6,
        "3-body necessity",
        pass,
        format!("residual without Q (N=3 max, N=4 min): {}", parts.join(", ")),
    );
}

fn criterion_7(rep: &mut Report, schedule: &Schedule, runs: &[std::result::Result<Run, (Geometry, Error)>]) {
    let mut drift = 0.0f64;
    let mut spread = 0.0f64;
    let mut ok_runs = true;
    for run in runs {
        match run {
            Ok(r) => {
                let m = r.geometry.cluster();
                for rec in &r.records {
                    drift = drift.max((rec.norm - 1.0).abs());
                    spread = spread.max(rec.class_spread(&m));
                }
            }
            Err(_) => ok_runs = false,
        }
    }
    let rs = interior_points(schedule, 50);
    let mut norm_id = 0.0f64;
    let mut norm_failed = false;
    for g in Geometry::ALL {
        match normalization_defect(&ClusterModel::new(g), schedule, &rs) {
            Ok(d) => norm_id = norm_id.max(d),
            Err(_) => norm_failed = true,
        }
    }
    let boundary = schedule.velocity(0.0).ok() == Some(0.0)
        && schedule.velocity(schedule.tff).ok() == Some(0.0)
        && schedule.advanced_r(0.0).ok() == Some(schedule.r0)
        && schedule.advanced_r(schedule.tff).ok() == Some(schedule.final_r());
    rep.line(
        7,
        "structural invariants",
        ok_runs && !norm_failed && drift <= 1e-9 && spread <= 1e-8 && norm_id <= 1e-10 && boundary,
        format!(
            "norm drift {drift:.1e}, class spread {spread:.1e}, normalization identities {norm_id:.1e}, exact endpoints {boundary}"
        ),
    );
}

fn criterion_8(rep: &mut Report, schedule: &Schedule) {
    let mut parts = Vec::new();
    let mut lowest = f64::INFINITY;
    for g in Geometry::ALL {
        let opts = EvolveOptions {
            steps: STEPS,
            stride: STEPS,
            driving: false,
        };
        match evolve_with(&ClusterModel::new(g), schedule, &opts) {
            Ok(rec) => {
                let f = rec.last().map_or(f64::NAN, |r| r.fidelity);
                lowest = lowest.min(f);
                parts.push(format!("{g} {f:.6}"));
            }
            Err(e) => parts.push(format!("{g} error: {e}")),
        }
    }
    rep.line(
        8,
        "undriven contrast",
        lowest < 0.9,
        format!("final fidelity without driving: {}", parts.join(", ")),
    );
}

/// The square Q̃ expression carrying the extra 1/C₂ factor, compared
/// with the solver: reported, not a criterion.
fn note_square_q(schedule: &Schedule) {
    let m = ClusterModel::new(Geometry::Square);
    let mut ratio_err = 0.0f64;
    let mut direct_err = 0.0f64;
    for &r in &GENERIC_R {
        let (j, bx) = schedule.couplings(r);
        let (gs, d) = ground_with_derivative(&m, j, bx, 1.0, -1.0).expect("square ground state");
        let q = least_squares(&assemble_model(&m, &gs, &d, true).expect("system"), &m.geometry)
            .expect("solve")
            .weights
            .q;
        let extra = square_q_extra_c2(&gs, &d).expect("finite");
        ratio_err = ratio_err.max((extra * gs.c(2) - q).abs() / q.abs());
        direct_err = direct_err.max((extra - q).abs() / q.abs());
    }
    println!(
        "note square Q with extra 1/C2: relative error {direct_err:.2e} as is, {ratio_err:.1e} after multiplying by C2"
    );
}

fn main() -> ExitCode {
    let schedule = Schedule::default();
    let mut rep = Report { failures: 0 };
    let start = Instant::now();
    let runs = driven_runs(&schedule);
    criterion_1(&mut rep, &runs);
    criterion_2(&mut rep, &schedule);
    criterion_3(&mut rep, &schedule);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep, &schedule);
    criterion_7(&mut rep, &schedule, &runs);
    criterion_8(&mut rep, &schedule);
    note_square_q(&schedule);
    println!(
        "acceptance: {} of 8 passed in {:.1}s",
        8 - rep.failures,
        start.elapsed().as_secs_f64()
    );
    if rep.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
