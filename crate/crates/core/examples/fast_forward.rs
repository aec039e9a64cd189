//! Drives every cluster through the sweep with and without the
//! regularization term and compares how well the ground state is tracked.
//!
//! cargo run --release --example fast_forward [steps]

use std::time::Instant;

use ffspin::cluster::Geometry;
use ffspin::fastforward::{evolve_with, EvolveOptions, Schedule};
use ffspin::model::ClusterModel;

fn main() -> Result<(), ffspin::error::Error> {
    let steps: usize = std::env::args().nth(1).map_or(100_000, |s| s.parse().expect("steps"));
    let schedule = Schedule::default();
    println!(
        "B0={} R0={} vbar={} Tff={} steps={steps}",
        schedule.b0, schedule.r0, schedule.vbar, schedule.tff
    );
    println!(
        "{:<9} {:>14} {:>12} {:>14} {:>8}",
        "geometry", "1-min fid", "norm drift", "bare final", "seconds"
    );
    for g in Geometry::ALL {
        let model = ClusterModel::new(g);
        let start = Instant::now();
        let driven = evolve_with(
            &model,
            &schedule,
            &EvolveOptions {
                steps,
                stride: steps / 100,
                driving: true,
            },
        )?;
        let secs = start.elapsed().as_secs_f64();
        let bare = evolve_with(
            &model,
            &schedule,
            &EvolveOptions {
                steps,
                stride: steps,
                driving: false,
            },
        )?;
        let min_fid = driven.iter().map(|r| r.fidelity).fold(1.0, f64::min);
        let drift = driven.iter().map(|r| (r.norm - 1.0).abs()).fold(0.0, f64::max);
        println!(
            "{:<9} {:>14.3e} {:>12.3e} {:>14.6} {:>8.2}",
            g.name(),
            1.0 - min_fid,
            drift,
            bare.last().unwrap().fidelity,
            secs
        );
    }
    Ok(())
}
