//! Compares the closed-form ground-state amplitudes with the numerical
//! eigenvector, per component class.
//!
//! cargo run --example ground_states [J] [Bx]

use ffspin::cluster::Geometry;
use ffspin::groundstate::{ground_analytic, ground_state};
use ffspin::model::ClusterModel;

fn main() -> Result<(), ffspin::error::Error> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<f64>().expect("number"));
    let j = args.next().unwrap_or(2.0);
    let bx = args.next().unwrap_or(3.0);
    println!("J={j} Bx={bx}");
    for g in Geometry::ALL {
        let model = ClusterModel::new(g);
        let numeric = ground_state(&model, j, bx)?;
        println!("{g}: E0={:.12} gap={:?}", numeric.energy, numeric.gap);
        match ground_analytic(&model.geometry, j, bx) {
            Ok(analytic) => {
                for k in model.geometry.class_representatives() {
                    println!(
                        "  C{k:<2} analytic {:+.15} numeric {:+.15} diff {:.1e}",
                        analytic.c(k),
                        numeric.c(k),
                        (analytic.c(k) - numeric.c(k)).abs()
                    );
                }
            }
            Err(e) => println!("  analytic: {e}"),
        }
    }
    Ok(())
}
