//! Runs the built-in consistency checks on every cluster and prints the
//! JSON reports.
//!
//! cargo run --release --example verify_all

use ffspin::cluster::Geometry;
use ffspin::fastforward::Schedule;
use ffspin::verify::{verify_geometry, VerifyOptions};

fn main() {
    let schedule = Schedule::default();
    let mut ok = true;
    for g in Geometry::ALL {
        let report = verify_geometry(g, &schedule, &VerifyOptions::default());
        ok &= report.pass;
        println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    }
    std::process::exit(if ok { 0 } else { 1 });
}
