//! The span of the component-class indicator vectors.
//!
//! H₀ and ∂H₀/∂R map this subspace into itself, and the ground state lives
//! in it, so the ground state and its R-derivative are computed from the
//! projected matrices. Outside the sector the spectrum can become
//! degenerate with the ground level (the Ising limit Bx → 0) without
//! affecting anything that couples to the ground state.

use nalgebra::{DMatrix, DVector};

use crate::cluster::ClusterGeometry;

#[derive(Clone, Debug)]
pub struct Sector {
    /// Orthonormal columns, one per component class.
    pub basis: DMatrix<f64>,
    pub ising: DMatrix<f64>,
    pub transverse: DMatrix<f64>,
}

impl Sector {
    pub fn new(geometry: &ClusterGeometry, ising: &DMatrix<f64>, transverse: &DMatrix<f64>) -> Self {
        let classes = &geometry.component_classes;
        let mut basis = DMatrix::zeros(geometry.dim(), classes.len());
        for (c, labels) in classes.iter().enumerate() {
            let w = 1.0 / (labels.len() as f64).sqrt();
            for &l in labels {
                basis[(l - 1, c)] = w;
            }
        }
        let project = |m: &DMatrix<f64>| basis.transpose() * m * &basis;
        Sector {
            ising: project(ising),
            transverse: project(transverse),
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn h0(&self, j: f64, bx: f64) -> DMatrix<f64> {
        &self.ising * j + &self.transverse * bx
    }

    pub fn expand(&self, a: &DVector<f64>) -> DVector<f64> {
        &self.basis * a
    }

    /// Largest entry of (1 − UUᵀ)·M·U, zero when M leaves the sector invariant.
    pub fn leakage(&self, m: &DMatrix<f64>) -> f64 {
        let mu = m * &self.basis;
        (&mu - &self.basis * (self.basis.transpose() * &mu)).amax()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::Geometry;
    use crate::operators::{ising_part, transverse_part};

    #[test]
    fn sector_is_invariant() {
        for g in Geometry::ALL {
            let c = g.cluster();
            let (zz, x) = (ising_part(&c), transverse_part(&c));
            let s = Sector::new(&c, &zz, &x);
            assert!(s.leakage(&zz) < 1e-15, "{g}");
            assert!(s.leakage(&x) < 1e-15, "{g}");
            let gram = s.basis.transpose() * &s.basis;
            assert!((gram - DMatrix::identity(s.dim(), s.dim())).amax() < 1e-15);
        }
    }
}
