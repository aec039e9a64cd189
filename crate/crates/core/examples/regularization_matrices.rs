//! Shows the regularization Hamiltonian of one cluster built from Pauli
//! products, entry by entry in terms of the strengths, and checks it
//! against the tabulated matrix.
//!
//! cargo run --example regularization_matrices [geometry]

use ffspin::cluster::Geometry;
use ffspin::operators::{build_reg, golden_reg_matrix, RegWeights};

fn main() -> Result<(), ffspin::error::Error> {
    let g: Geometry = std::env::args().nth(1).as_deref().unwrap_or("pyramid").parse()?;
    let c = g.cluster();
    let n = c.n_unknowns();
    let names: Vec<String> = (1..=c.w_classes.len())
        .map(|k| format!("W{k}"))
        .chain(c.q_included.then(|| "Q".to_string()))
        .collect();

    // Unit strengths one at a time give each entry as a linear form.
    let units: Vec<_> = (0..n)
        .map(|k| {
            let mut x = vec![0.0; n];
            x[k] = 1.0;
            build_reg(&c, &RegWeights::from_slice(&c, &x)?)
        })
        .collect::<Result<_, _>>()?;

    println!("H̃ for {g} (entries are i times the listed combination)");
    for row in 1..=c.dim() {
        let cells: Vec<String> = (1..=c.dim())
            .map(|col| {
                let terms: Vec<String> = units
                    .iter()
                    .zip(&names)
                    .filter_map(|(u, name)| {
                        let a = u.at(row, col).im;
                        (a != 0.0).then(|| match a {
                            1.0 => format!("+{name}"),
                            -1.0 => format!("-{name}"),
                            _ => format!("{a:+}{name}"),
                        })
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.concat()
                }
            })
            .collect();
        println!("{:>2} {}", row, cells.join(" "));
    }

    let weights = RegWeights::from_slice(&c, &(1..=n).map(|k| 0.1 * k as f64 - 0.27).collect::<Vec<_>>())?;
    match golden_reg_matrix(&c, &weights) {
        Ok(golden) => println!(
            "max |built - tabulated| = {:e}",
            build_reg(&c, &weights)?.max_abs_diff(&golden)
        ),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
