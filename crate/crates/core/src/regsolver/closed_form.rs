//! Per-geometry solution formulas written in class-representative
//! components C_k and their derivatives D_k = ∂_R C_k.

use super::{assemble, verify_core, RegularizationSolution};
use crate::cluster::{ClusterGeometry, Geometry};
use crate::error::{Error, Result};
use crate::groundstate::{GroundState, GroundStateDerivative};
use crate::operators::RegWeights;

const DENOMINATOR_FLOOR: f64 = 1e-12;

fn nonzero(x: f64, what: &'static str) -> Result<f64> {
    if x.abs() <= DENOMINATOR_FLOOR || !x.is_finite() {
        return Err(Error::VanishingDenominator(what));
    }
    Ok(x)
}

/// Strengths `[W̃…]` and Q̃ from the per-geometry formulas.
pub fn closed_form_weights(geometry: Geometry, gs: &GroundState, d: &GroundStateDerivative) -> Result<RegWeights> {
    let c = |k: usize| gs.c(k);
    let dd = |k: usize| d.d(k);
    Ok(match geometry {
        Geometry::Triangle => {
            let w = dd(2) / (2.0 * nonzero(c(1), "C1")?);
            RegWeights::new(vec![w], 0.0)
        }
        Geometry::Chain3 => {
            let den = nonzero(c(1) + 2.0 * c(2) + c(3), "C1+2C2+C3")?;
            let w1 = -0.5 * (dd(1) - dd(3)) / den;
            let w2 = -0.5 * (dd(1) - 2.0 * dd(2) + dd(3)) / den;
            RegWeights::new(vec![w1, w2], 0.0)
        }
        Geometry::Pyramid => {
            let den = nonzero(c(1) - c(6), "C1-C6")?;
            RegWeights::new(vec![dd(2) / (3.0 * den)], (dd(1) + 3.0 * dd(6)) / (24.0 * den))
        }
        Geometry::Square => {
            let den = nonzero(3.0 * c(1) - c(10) - 2.0 * c(6), "3C1-C10-2C6")?;
            let c2 = nonzero(c(2), "C2")?;
            let w1 = -(c(1) * dd(1) - 4.0 * c(2) * dd(2) + (c(1) + c(10)) * dd(6) - (c(1) - 2.0 * c(6)) * dd(10))
                / (8.0 * den * c2);
            let w2 = -(c(1) * dd(1) - (c(1) - 2.0 * c(6) - c(10)) * dd(6) + c(1) * dd(10)) / (4.0 * den * c2);
            let q = (dd(1) + 2.0 * dd(6) + dd(10)) / (8.0 * den);
            RegWeights::new(vec![w1, w2], q)
        }
        Geometry::Star => {
            let den = nonzero((c(1) - c(6)) * (c(1) + 3.0 * c(6)), "(C1-C6)(C1+3C6)")?;
            let c1 = nonzero(c(1), "C1")?;
            let w1 = (c(1) * dd(4) + 3.0 * c(6) * dd(2)) / (3.0 * den);
            let w2 = (3.0 * (c(1) + c(6)) * dd(2) - (c(1) - 3.0 * c(6)) * dd(4)) / (6.0 * den);
            let q = (3.0 * (c(1) * c(1) + 2.0 * c(1) * c(6) - 3.0 * c(6) * c(6)) * dd(6)
                - 3.0 * (3.0 * c(2) * c(6) + c(1) * c(4)) * dd(2)
                - (3.0 * c(1) * c(2) - 2.0 * c(1) * c(4) + 3.0 * c(4) * c(6)) * dd(4))
                / (24.0 * c1 * den);
            RegWeights::new(vec![w1, w2], q)
        }
        Geometry::Chain4 => {
            let s = nonzero(c(2) + c(3), "C2+C3")?;
            let t = nonzero(c(1) + c(6) + c(7) + c(10), "C1+C6+C7+C10")?;
            let den = nonzero(3.0 * c(1) - c(6) - c(7) - c(10), "3C1-C6-C7-C10")?;
            let kappa =
                (c(1) * dd(1) + (c(2) - c(3)) * (dd(2) - dd(3)) + c(1) * (dd(6) + dd(7) + dd(10))) / (-2.0 * s * den);
            let gamma1 = (dd(2) - dd(3)) / (2.0 * t);
            let gamma2 = (dd(6) + dd(10)) / (4.0 * s) + kappa;
            let w1 = (dd(7) + dd(10)) / (4.0 * s) + kappa;
            let w3 = (dd(6) + dd(7)) / (4.0 * s) + kappa;
            let q = (4.0 * (c(2) - c(3)) * (dd(2) - dd(3)) + t * (dd(1) + dd(6) + dd(7) + dd(10))) / (8.0 * den * t);
            RegWeights::new(vec![w1, -gamma1 + gamma2, w3, gamma1 + gamma2], q)
        }
    })
}

/// Closed-form solution with its residual in the full system.
pub fn closed_form(
    geometry: &ClusterGeometry,
    gs: &GroundState,
    d: &GroundStateDerivative,
) -> Result<RegularizationSolution> {
    let weights = closed_form_weights(geometry.name, gs, d)?;
    let mut sol = RegularizationSolution {
        weights,
        residual: 0.0,
        rank: assemble(geometry, gs, d)?.effective_rank,
    };
    sol.residual = verify_core(geometry, &sol, gs, d)?;
    Ok(sol)
}

/// Second form of the triangle strength, C₁∂C₂ − C₂∂C₁.
pub fn triangle_alternate(gs: &GroundState, d: &GroundStateDerivative) -> f64 {
    gs.c(1) * d.d(2) - gs.c(2) * d.d(1)
}

/// The square-cluster Q̃ expression with the additional factor C₂ in the
/// denominator; it differs from the solution of the system by exactly that
/// factor.
pub fn square_q_extra_c2(gs: &GroundState, d: &GroundStateDerivative) -> Result<f64> {
    let den = nonzero(3.0 * gs.c(1) - gs.c(10) - 2.0 * gs.c(6), "3C1-C10-2C6")?;
    let c2 = nonzero(gs.c(2), "C2")?;
    Ok((d.d(1) + 2.0 * d.d(6) + d.d(10)) / (8.0 * den * c2))
}
