//! Instantaneous ground state of H₀ and its R-derivative.

mod analytic;
pub mod sector;

pub use analytic::{ground_analytic, J_EPSILON};

use nalgebra::{DMatrix, DVector};

use crate::cluster::ClusterGeometry;
use crate::eigen::jacobi_eigen;
use crate::error::{Error, Result};
use crate::fastforward::Schedule;
use crate::model::ClusterModel;
use crate::operators::Operator;

/// Gaps below this are treated as degenerate.
pub const GAP_THRESHOLD: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    /// Unit norm, positive sum.
    pub components: DVector<f64>,
    /// E₁ − E₀ among the states the solver resolved (full space for
    /// [`ground_numeric`], symmetric sector for [`ground_state`]); `None`
    /// for the closed-form evaluation.
    pub gap: Option<f64>,
}

impl GroundState {
    /// Component of a 1-based basis label.
    pub fn c(&self, label: usize) -> f64 {
        self.components[label - 1]
    }

    /// Max spread of the components inside any component class.
    pub fn class_spread(&self, geometry: &ClusterGeometry) -> f64 {
        geometry
            .component_classes
            .iter()
            .map(|class| {
                let vals = class.iter().map(|&l| self.c(l));
                let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
                hi - lo
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroundStateDerivative {
    pub dc_dr: DVector<f64>,
}

impl GroundStateDerivative {
    pub fn d(&self, label: usize) -> f64 {
        self.dc_dr[label - 1]
    }

    /// C·∂C, which vanishes by normalization.
    pub fn normalization_defect(&self, gs: &GroundState) -> f64 {
        gs.components.dot(&self.dc_dr)
    }
}

fn positive_convention(v: DVector<f64>) -> (DVector<f64>, f64) {
    if v.sum() < 0.0 {
        (-v, -1.0)
    } else {
        (v, 1.0)
    }
}

/// Lowest eigenpair of a real symmetric H₀ over the whole space.
pub fn ground_numeric(h0: &Operator) -> Result<GroundState> {
    let imag = h0.imag_part().amax();
    if imag > 0.0 {
        return Err(Error::NotSymmetric(imag));
    }
    let eig = jacobi_eigen(&h0.real_part())?;
    let (components, _) = positive_convention(eig.vectors.column(0).into_owned());
    Ok(GroundState {
        energy: eig.values[0],
        components,
        gap: eig.gap(),
    })
}

/// Ground state from the symmetric sector.
pub fn ground_state(model: &ClusterModel, j: f64, bx: f64) -> Result<GroundState> {
    let eig = jacobi_eigen(&model.sector.h0(j, bx))?;
    let (a0, _) = positive_convention(eig.vectors.column(0).into_owned());
    Ok(GroundState {
        energy: eig.values[0],
        components: model.sector.expand(&a0),
        gap: eig.gap(),
    })
}

/// Ground state and ∂C/∂R from first-order perturbation theory,
/// ∂C = Σ_{m>0} ⟨m|∂H₀|0⟩/(E₀ − E_m) |m⟩, with ∂H₀ = (dJ) ZZ + (dBx) X.
pub fn ground_with_derivative(
    model: &ClusterModel,
    j: f64,
    bx: f64,
    dj: f64,
    dbx: f64,
) -> Result<(GroundState, GroundStateDerivative)> {
    let sector = &model.sector;
    let eig = jacobi_eigen(&sector.h0(j, bx))?;
    let gap = eig.gap().unwrap_or(f64::INFINITY);
    if gap.is_nan() || gap < GAP_THRESHOLD {
        return Err(Error::Degenerate { gap, j, bx });
    }
    let dh: DMatrix<f64> = &sector.ising * dj + &sector.transverse * dbx;
    let v0 = eig.vectors.column(0);
    let dh_v0 = &dh * v0;
    let mut da = DVector::zeros(sector.dim());
    for m in 1..sector.dim() {
        let vm = eig.vectors.column(m);
        da += vm * (vm.dot(&dh_v0) / (eig.values[0] - eig.values[m]));
    }
    let (a0, sign) = positive_convention(v0.into_owned());
    let gs = GroundState {
        energy: eig.values[0],
        components: sector.expand(&a0),
        gap: Some(gap),
    };
    let d = GroundStateDerivative {
        dc_dr: sector.expand(&(da * sign)),
    };
    Ok((gs, d))
}

/// ∂C/∂R at sweep coordinate `r` of `schedule`.
pub fn derivative(model: &ClusterModel, schedule: &Schedule, r: f64) -> Result<GroundStateDerivative> {
    let (j, bx) = schedule.couplings(r);
    let (dj, dbx) = schedule.coupling_rates();
    ground_with_derivative(model, j, bx, dj, dbx).map(|(_, d)| d)
}
