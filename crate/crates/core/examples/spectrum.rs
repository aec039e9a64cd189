//! Writes the instantaneous spectrum of H0 along the sweep as CSV.
//!
//! cargo run --example spectrum [geometry] > spectrum.csv

use ffspin::cli::{cmd_spectrum, RunConfig};

fn main() -> Result<(), ffspin::error::Error> {
    let config = RunConfig {
        geometry: std::env::args().nth(1).as_deref().unwrap_or("triangle").parse()?,
        stride: 500,
        ..RunConfig::default()
    };
    cmd_spectrum(&config)?.write_csv(std::io::stdout().lock())
}
