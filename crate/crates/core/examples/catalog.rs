//! Lists the six clusters: bonds, pair classes of the driving term and the
//! groups of basis states that share a ground-state amplitude.
//!
//! cargo run --example catalog

use ffspin::cluster::Geometry;

fn main() {
    for g in Geometry::ALL {
        let c = g.cluster();
        println!("{g} (N={}, dim={})", c.n_sites, c.dim());
        println!("  bonds: {:?}", c.h0_edges);
        for (k, class) in c.w_classes.iter().enumerate() {
            println!("  W{}: {:?}", k + 1, class);
        }
        println!("  3-body Q: {}", if c.q_included { "yes" } else { "no" });
        for class in &c.component_classes {
            let states: Vec<String> = class.iter().map(|&l| format!("{l}:{}", c.basis_order[l - 1])).collect();
            println!("  class {}", states.join(" "));
        }
        println!();
    }
}
