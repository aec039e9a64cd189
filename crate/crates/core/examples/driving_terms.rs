//! Solves the core system for the driving strengths at one point of the
//! sweep and compares with the closed forms; also shows the rank of each
//! system and what happens without the 3-body term.
//!
//! cargo run --example driving_terms [R]

use ffspin::cluster::Geometry;
use ffspin::fastforward::Schedule;
use ffspin::groundstate::ground_with_derivative;
use ffspin::model::ClusterModel;
use ffspin::regsolver::{assemble_model, closed_form, least_squares, solve};

fn main() -> Result<(), ffspin::error::Error> {
    let r: f64 = std::env::args().nth(1).map_or(2.9, |s| s.parse().expect("R"));
    let schedule = Schedule::default();
    let (j, bx) = schedule.couplings(r);
    let (dj, dbx) = schedule.coupling_rates();
    println!("R={r} J={j} Bx={bx}");
    for g in Geometry::ALL {
        let model = ClusterModel::new(g);
        let (gs, d) = ground_with_derivative(&model, j, bx, dj, dbx)?;
        let system = assemble_model(&model, &gs, &d, true)?;
        let svd = solve(&system, &model.geometry)?;
        let cf = closed_form(&model.geometry, &gs, &d)?;
        let no_q = least_squares(&assemble_model(&model, &gs, &d, false)?, &model.geometry)?;
        println!(
            "{g}: rank {} of {} rows ({} distinct), residual {:.1e}, without Q {:.1e}",
            system.effective_rank,
            system.matrix.nrows(),
            system.distinct_equations(1e-13).len(),
            svd.residual,
            no_q.residual
        );
        let a = svd.weights.to_vec(&model.geometry);
        let b = cf.weights.to_vec(&model.geometry);
        for (k, (x, y)) in a.iter().zip(&b).enumerate() {
            let name = system.unknowns[k];
            println!("  {name:<3} svd {x:+.15e} closed form {y:+.15e}");
        }
    }
    Ok(())
}
