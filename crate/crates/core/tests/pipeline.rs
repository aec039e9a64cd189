use ffspin::cluster::Geometry;
use ffspin::error::Error;
use ffspin::fastforward::{build_hff, drive_sample, evolve_with, spectrum, EvolveOptions, Schedule};
use ffspin::groundstate::{ground_analytic, ground_state, ground_with_derivative};
use ffspin::model::ClusterModel;
use ffspin::regsolver::{assemble_model, closed_form, verify_core, RegularizationSolution};

fn opts(steps: usize, driving: bool) -> EvolveOptions {
    EvolveOptions {
        steps,
        stride: steps / 20,
        driving,
    }
}

#[test]
fn drive_strengths_solve_core_equation() {
    let s = Schedule::default();
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        for t in [0.013, 0.05, 0.071, 0.094] {
            let sample = drive_sample(&m, &s, t).unwrap();
            assert!(sample.driven());
            let (gs, d) = ground_with_derivative(&m, sample.j, sample.bx, 1.0, -1.0).unwrap();
            let sol = RegularizationSolution {
                weights: sample.weights.clone(),
                residual: sample.residual,
                rank: 0,
            };
            assert!(verify_core(&m.geometry, &sol, &gs, &d).unwrap() < 1e-10, "{g} t={t}");
        }
    }
}

#[test]
fn analytic_state_feeds_closed_form() {
    let s = Schedule::default();
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        let (j, bx) = s.couplings(4.4);
        let (numeric, d) = ground_with_derivative(&m, j, bx, 1.0, -1.0).unwrap();
        let analytic = ground_analytic(&m.geometry, j, bx).unwrap();
        let a = closed_form(&m.geometry, &analytic, &d).unwrap();
        let b = closed_form(&m.geometry, &numeric, &d).unwrap();
        for (x, y) in a.weights.to_vec(&m.geometry).iter().zip(b.weights.to_vec(&m.geometry)) {
            assert!((x - y).abs() < 1e-12, "{g}");
        }
        let system = assemble_model(&m, &analytic, &d, true).unwrap();
        assert_eq!(system.matrix.nrows(), m.dim());
    }
}

#[test]
fn hff_is_hermitian_along_sweep() {
    let s = Schedule::default();
    for g in Geometry::ALL {
        let m = ClusterModel::new(g);
        for k in 0..=10 {
            let h = build_hff(&m, &s, s.time(k, 10)).unwrap();
            assert!(h.hermiticity_error() < 1e-12, "{g} k={k}");
        }
    }
}

#[test]
fn stationary_without_sweep() {
    let s = Schedule::new(10.0, 3.0, 0.0, 0.1).unwrap();
    for g in [Geometry::Triangle, Geometry::Star] {
        let m = ClusterModel::new(g);
        let rec = evolve_with(&m, &s, &opts(2000, true)).unwrap();
        let p0 = rec[0].class_probabilities(&m.geometry);
        for r in &rec {
            for (a, b) in r.class_probabilities(&m.geometry).iter().zip(&p0) {
                assert!((a - b).abs() < 1e-10, "{g}");
            }
            assert!(r.fidelity > 1.0 - 1e-10);
        }
    }
}

#[test]
fn triangle_populations_move_to_frustrated_states() {
    let m = ClusterModel::new(Geometry::Triangle);
    let rec = evolve_with(&m, &Schedule::default(), &opts(10_000, true)).unwrap();
    let (first, last) = (&rec[0], rec.last().unwrap());
    assert!((first.probability(1) - 0.125).abs() < 1e-14);
    assert!((first.probability(2) - 0.125).abs() < 1e-14);
    assert!(last.probability(1) < 1e-6);
    assert!((last.probability(2) - 1.0 / 6.0).abs() < 1e-6);
    assert!(rec
        .iter()
        .all(|r| r.fidelity > 1.0 - 1e-6 && r.class_spread(&m.geometry) < 1e-8));
}

#[test]
fn chain4_lowest_levels_do_not_cross() {
    let s = Schedule::default();
    let m = ClusterModel::new(Geometry::Chain4);
    let n = 200;
    // The full-space splitting shrinks like Bx⁴/J³ near the end, so test
    // that the lowest level is always the symmetric ground state and that
    // it stays separated inside its own sector.
    for k in 0..n {
        let (r, e) = spectrum(&m, &s, s.time(k, n)).unwrap();
        assert_eq!(e.len(), 16);
        let (j, bx) = s.couplings(r);
        let gs = ground_state(&m, j, bx).unwrap();
        assert!((e[0] - gs.energy).abs() < 1e-9 * (1.0 + gs.energy.abs()), "k={k}");
        assert!(gs.gap.unwrap() > 1.0, "k={k}");
    }
}

#[test]
fn coarse_step_reports_step_size() {
    let s = Schedule::new(10.0, 0.0, 1.0, 100.0).unwrap();
    let m = ClusterModel::new(Geometry::Pyramid);
    let err = evolve_with(&m, &s, &opts(1000, true)).unwrap_err();
    assert!(matches!(err, Error::StepSize { .. }), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn bare_sweep_loses_ground_state() {
    let m = ClusterModel::new(Geometry::Chain4);
    let rec = evolve_with(&m, &Schedule::default(), &opts(10_000, false)).unwrap();
    assert!(rec.last().unwrap().fidelity < 0.9);
    assert!((rec.last().unwrap().norm - 1.0).abs() < 1e-9);
}
