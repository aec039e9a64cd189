//! The core linear system H̃C = i∂_R C in the unknown strengths.
//!
//! With H̃ = i Σ_j x_j A_j (A_j real antisymmetric) the system is real:
//! Σ_j x_j (A_j C)_k = (∂_R C)_k for every basis row k. All 2^N rows are
//! kept; the repeats caused by symmetry are left in place.

pub mod closed_form;

pub use closed_form::{closed_form, square_q_extra_c2};

use std::fmt;

use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::cluster::ClusterGeometry;
use crate::eigen::{jacobi_svd, Svd};
use crate::error::{Error, Result};
use crate::groundstate::{GroundState, GroundStateDerivative};
use crate::model::ClusterModel;
use crate::operators::{build_reg, RegWeights};

/// Singular values below this fraction of the largest are dropped.
pub const SVD_CUTOFF: f64 = 1e-10;
/// Largest residual [`solve`] accepts.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unknown {
    /// Pair strength of the w-class with this 0-based index.
    W(usize),
    Q,
}

impl fmt::Display for Unknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unknown::W(k) => write!(f, "W{}", k + 1),
            Unknown::Q => f.write_str("Q"),
        }
    }
}

/// Unknowns of the ansatz, optionally without the 3-body term.
pub fn unknowns(geometry: &ClusterGeometry, include_q: bool) -> Vec<Unknown> {
    let mut u: Vec<Unknown> = (0..geometry.w_classes.len()).map(Unknown::W).collect();
    if include_q && geometry.q_included {
        u.push(Unknown::Q);
    }
    u
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoreSystem {
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub unknowns: Vec<Unknown>,
    pub effective_rank: usize,
    svd: Svd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularizationSolution {
    pub weights: RegWeights,
    /// ‖A·x − b‖∞
    pub residual: f64,
    pub rank: usize,
}

impl CoreSystem {
    fn from_generators(
        generators: &[DMatrix<f64>],
        gs: &GroundState,
        d: &GroundStateDerivative,
        unknowns: Vec<Unknown>,
    ) -> Result<Self> {
        let dim = generators.first().map_or(0, |g| g.nrows());
        for len in [gs.components.len(), d.dc_dr.len()] {
            if len != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: len,
                });
            }
        }
        let mut matrix = DMatrix::zeros(dim, unknowns.len());
        for (col, u) in unknowns.iter().enumerate() {
            let idx = match *u {
                Unknown::W(k) => k,
                Unknown::Q => generators.len() - 1,
            };
            matrix.set_column(col, &(&generators[idx] * &gs.components));
        }
        let svd = jacobi_svd(&matrix)?;
        Ok(CoreSystem {
            effective_rank: svd.rank(SVD_CUTOFF),
            svd,
            matrix,
            rhs: d.dc_dr.clone(),
            unknowns,
        })
    }

    /// ‖A·x − b‖∞.
    pub fn residual(&self, x: &DVector<f64>) -> f64 {
        (&self.matrix * x - &self.rhs).amax()
    }

    /// Rows (with their right-hand sides) that differ by more than `tol`
    /// from every earlier row, in order of first appearance, as
    /// `(label, coefficients, rhs)`.
    pub fn distinct_equations(&self, tol: f64) -> Vec<(usize, Vec<f64>, f64)> {
        let mut out: Vec<(usize, Vec<f64>, f64)> = Vec::new();
        for k in 0..self.matrix.nrows() {
            let row: Vec<f64> = self.matrix.row(k).iter().copied().collect();
            let b = self.rhs[k];
            let seen = out
                .iter()
                .any(|(_, r, rb)| (rb - b).abs() <= tol && r.iter().zip(&row).all(|(x, y)| (x - y).abs() <= tol));
            if !seen {
                out.push((k + 1, row, b));
            }
        }
        out
    }
}

/// Builds the system with H̃ assembled from Pauli products.
pub fn assemble(geometry: &ClusterGeometry, gs: &GroundState, d: &GroundStateDerivative) -> Result<CoreSystem> {
    assemble_with(geometry, gs, d, true)
}

pub fn assemble_with(
    geometry: &ClusterGeometry,
    gs: &GroundState,
    d: &GroundStateDerivative,
    include_q: bool,
) -> Result<CoreSystem> {
    let generators: Vec<DMatrix<f64>> = (0..geometry.n_unknowns())
        .map(|j| {
            let mut x = vec![0.0; geometry.n_unknowns()];
            x[j] = 1.0;
            let w = RegWeights::from_slice(geometry, &x)?;
            Ok(build_reg(geometry, &w)?.imag_part())
        })
        .collect::<Result<_>>()?;
    CoreSystem::from_generators(&generators, gs, d, unknowns(geometry, include_q))
}

/// Same as [`assemble_with`] using the model's cached generators.
pub fn assemble_model(
    model: &ClusterModel,
    gs: &GroundState,
    d: &GroundStateDerivative,
    include_q: bool,
) -> Result<CoreSystem> {
    CoreSystem::from_generators(&model.generators, gs, d, unknowns(&model.geometry, include_q))
}

/// Minimum-norm least squares through the SVD; reports the residual
/// without judging it.
pub fn least_squares(system: &CoreSystem, geometry: &ClusterGeometry) -> Result<RegularizationSolution> {
    let x = system.svd.solve(&system.rhs, SVD_CUTOFF);
    let mut w = vec![0.0; geometry.w_classes.len()];
    let mut q = 0.0;
    for (u, &v) in system.unknowns.iter().zip(x.iter()) {
        match *u {
            Unknown::W(k) => w[k] = v,
            Unknown::Q => q = v,
        }
    }
    Ok(RegularizationSolution {
        weights: RegWeights::new(w, q),
        residual: system.residual(&x),
        rank: system.effective_rank,
    })
}

/// Least squares, rejecting systems the ansatz cannot satisfy.
pub fn solve(system: &CoreSystem, geometry: &ClusterGeometry) -> Result<RegularizationSolution> {
    let sol = least_squares(system, geometry)?;
    if sol.residual.is_nan() || sol.residual > RESIDUAL_TOLERANCE {
        return Err(Error::Inconsistent(sol.residual));
    }
    Ok(sol)
}

/// ‖H̃C − i∂_R C‖∞ for the given strengths.
pub fn verify_core(
    geometry: &ClusterGeometry,
    sol: &RegularizationSolution,
    gs: &GroundState,
    d: &GroundStateDerivative,
) -> Result<f64> {
    let h = build_reg(geometry, &sol.weights)?;
    let c = gs.components.map(|x| Complex::new(x, 0.0));
    let rhs = d.dc_dr.map(|x| Complex::new(0.0, x));
    Ok((h.apply(&c) - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::Geometry;
    use crate::fastforward::Schedule;
    use crate::groundstate::ground_with_derivative;

    fn system_at(
        g: Geometry,
        r: f64,
        include_q: bool,
    ) -> (ClusterModel, GroundState, GroundStateDerivative, CoreSystem) {
        let m = ClusterModel::new(g);
        let s = Schedule::default();
        let (j, bx) = s.couplings(r);
        let (gs, d) = ground_with_derivative(&m, j, bx, 1.0, -1.0).unwrap();
        let sys = assemble_with(&m.geometry, &gs, &d, include_q).unwrap();
        (m, gs, d, sys)
    }

    #[test]
    fn triangle_at_origin() {
        let (m, gs, d, sys) = system_at(Geometry::Triangle, 0.0, true);
        let sol = solve(&sys, &m.geometry).unwrap();
        assert!((sol.weights.w[0] - 0.025).abs() < 1e-14);
        assert_eq!(sol.rank, 1);
        assert!(verify_core(&m.geometry, &sol, &gs, &d).unwrap() < 1e-10);
    }

    #[test]
    fn triangle_rows() {
        let (_, gs, d, sys) = system_at(Geometry::Triangle, 3.7, true);
        let eqs = sys.distinct_equations(1e-13);
        assert_eq!(eqs.len(), 2);
        assert!((eqs[0].1[0] + 6.0 * gs.c(2)).abs() < 1e-15 && (eqs[0].2 - d.d(1)).abs() < 1e-15);
        assert!((eqs[1].1[0] - 2.0 * gs.c(1)).abs() < 1e-15 && (eqs[1].2 - d.d(2)).abs() < 1e-15);
    }

    #[test]
    fn ranks_and_row_counts() {
        let expect = [
            (Geometry::Triangle, 1, 2),
            (Geometry::Chain3, 2, 3),
            (Geometry::Pyramid, 2, 3),
            (Geometry::Square, 3, 4),
            (Geometry::Star, 3, 4),
            (Geometry::Chain4, 5, 6),
        ];
        for (g, rank, rows) in expect {
            let (_, _, _, sys) = system_at(g, 2.9, true);
            assert_eq!(sys.effective_rank, rank, "{g}");
            assert_eq!(sys.distinct_equations(1e-13).len(), rows, "{g}");
        }
    }

    #[test]
    fn normalization_redundancy() {
        for g in Geometry::ALL {
            let (_, gs, _, sys) = system_at(g, 6.1, true);
            assert!((sys.matrix.transpose() * &gs.components).amax() < 1e-15, "{g}");
            assert!(gs.components.dot(&sys.rhs).abs() < 1e-15, "{g}");
        }
    }

    #[test]
    fn three_body_necessity() {
        for g in Geometry::ALL {
            let (m, _, _, sys) = system_at(g, 4.2, false);
            let sol = least_squares(&sys, &m.geometry).unwrap();
            if m.geometry.n_sites == 3 {
                assert!(sol.residual < 1e-10, "{g}");
            } else {
                assert!(sol.residual > 1e-6, "{g}: {}", sol.residual);
                assert!(matches!(solve(&sys, &m.geometry), Err(Error::Inconsistent(_))));
            }
        }
    }

    #[test]
    fn wrong_strength_detected() {
        let (m, gs, d, _) = system_at(Geometry::Triangle, 5.0, true);
        let wrong = RegularizationSolution {
            weights: RegWeights::new(vec![1.0], 0.0),
            residual: f64::NAN,
            rank: 1,
        };
        assert!(verify_core(&m.geometry, &wrong, &gs, &d).unwrap() > 1e-3);
    }

    #[test]
    fn dimension_checked() {
        let (_, gs, d, _) = system_at(Geometry::Triangle, 1.0, true);
        let c4 = Geometry::Chain4.cluster();
        assert!(matches!(assemble(&c4, &gs, &d), Err(Error::DimensionMismatch { .. })));
    }
}
