//! Per-geometry operator cache shared by the solvers and the integrator.

use nalgebra::DMatrix;

use crate::cluster::{ClusterGeometry, Geometry};
use crate::groundstate::sector::Sector;
use crate::operators::{build_reg, ising_part, transverse_part, Operator, RegWeights};

/// H₀ pieces, the real generators of H̃ (one per unknown, H̃ = i Σ x_j A_j)
/// and the symmetric sector.
#[derive(Clone, Debug)]
pub struct ClusterModel {
    pub geometry: ClusterGeometry,
    pub ising: DMatrix<f64>,
    pub transverse: DMatrix<f64>,
    pub generators: Vec<DMatrix<f64>>,
    pub sector: Sector,
}

impl ClusterModel {
    pub fn new(name: Geometry) -> Self {
        let geometry = name.cluster();
        let ising = ising_part(&geometry);
        let transverse = transverse_part(&geometry);
        let generators = (0..geometry.n_unknowns())
            .map(|j| {
                let mut x = vec![0.0; geometry.n_unknowns()];
                x[j] = 1.0;
                let w = RegWeights::from_slice(&geometry, &x).expect("sized by n_unknowns");
                build_reg(&geometry, &w).expect("valid unit weights").imag_part()
            })
            .collect();
        let sector = Sector::new(&geometry, &ising, &transverse);
        ClusterModel {
            geometry,
            ising,
            transverse,
            generators,
            sector,
        }
    }

    pub fn name(&self) -> Geometry {
        self.geometry.name
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    pub fn h0_real(&self, j: f64, bx: f64) -> DMatrix<f64> {
        &self.ising * j + &self.transverse * bx
    }

    pub fn h0(&self, j: f64, bx: f64) -> Operator {
        Operator::from_real(&self.h0_real(j, bx))
    }

    /// ∂H₀/∂R for the given coupling rates.
    pub fn dh0_real(&self, dj: f64, dbx: f64) -> DMatrix<f64> {
        &self.ising * dj + &self.transverse * dbx
    }

    /// The real antisymmetric A with H̃ = i·A.
    pub fn reg_generator(&self, unknowns: &[f64]) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.dim(), self.dim());
        for (g, &x) in self.generators.iter().zip(unknowns) {
            a += g * x;
        }
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_h0;

    #[test]
    fn cached_pieces_match_builders() {
        for g in Geometry::ALL {
            let m = ClusterModel::new(g);
            assert_eq!(m.h0(1.25, 3.5), build_h0(&m.geometry, 1.25, 3.5));
            let x: Vec<f64> = (0..m.geometry.n_unknowns()).map(|k| 0.5 - 0.3 * k as f64).collect();
            let w = RegWeights::from_slice(&m.geometry, &x).unwrap();
            let h = build_reg(&m.geometry, &w).unwrap();
            assert!(Operator::from_imag(&m.reg_generator(&x)).max_abs_diff(&h) < 1e-15);
            for a in &m.generators {
                assert_eq!((a + a.transpose()).amax(), 0.0);
            }
        }
    }
}
