//! Dense spin operators in the cluster basis.

mod golden;

pub use golden::golden_reg_matrix;

use std::ops::{Add, Mul, Sub};

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::cluster::{basis_order, ClusterGeometry, SitePair};
use crate::error::{Error, Result};

pub type C64 = Complex<f64>;

const I: C64 = Complex { re: 0.0, im: 1.0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Dense 2^N × 2^N complex matrix (ħ = 1).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(pub DMatrix<C64>);

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Operator(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Operator(m.map(|x| Complex::new(x, 0.0)))
    }

    /// `i · m` for a real matrix `m`.
    pub fn from_imag(m: &DMatrix<f64>) -> Self {
        Operator(m.map(|x| Complex::new(0.0, x)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    /// 1-based element access, matching the label convention.
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.0[(row - 1, col - 1)]
    }

    pub fn real_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.re)
    }

    pub fn imag_part(&self) -> DMatrix<f64> {
        self.0.map(|z| z.im)
    }

    pub fn adjoint(&self) -> Self {
        Operator(self.0.adjoint())
    }

    /// Largest |A − A†| entry.
    pub fn hermiticity_error(&self) -> f64 {
        max_abs(&(&self.0 - self.0.adjoint()))
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        max_abs(&(&self.0 - &other.0))
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn scale(&self, s: f64) -> Operator {
        Operator(&self.0 * Complex::new(s, 0.0))
    }

    pub fn apply(&self, v: &nalgebra::DVector<C64>) -> nalgebra::DVector<C64> {
        &self.0 * v
    }
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

/// σ^axis acting on `site` (1-based) of an N-spin register.
pub fn single_site(n_sites: usize, site: usize, axis: Axis) -> Result<Operator> {
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    let basis = basis_order(n_sites)?;
    let dim = basis.len();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (col, &s) in basis.iter().enumerate() {
        match axis {
            Axis::Z => m[(col, col)] = Complex::new(s.sz(site), 0.0),
            Axis::X | Axis::Y => {
                let flipped = s.flip(site);
                let row = basis.iter().position(|&b| b == flipped).expect("closed basis");
                m[(row, col)] = match axis {
                    Axis::X => Complex::new(1.0, 0.0),
                    // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = −i|↑⟩
                    _ if s.is_down(site) => -I,
                    _ => I,
                };
            }
        }
    }
    Ok(Operator(m))
}

fn site_ops(n_sites: usize, axis: Axis) -> Vec<Operator> {
    (1..=n_sites)
        .map(|s| single_site(n_sites, s, axis).expect("site in range"))
        .collect()
}

/// Σ σᶻσᶻ over the H₀ bonds (real, diagonal).
pub fn ising_part(geometry: &ClusterGeometry) -> DMatrix<f64> {
    let z = site_ops(geometry.n_sites, Axis::Z);
    let mut m = DMatrix::zeros(geometry.dim(), geometry.dim());
    for &(a, b) in &geometry.h0_edges {
        m += (&z[a - 1] * &z[b - 1]).real_part();
    }
    m
}

/// −½ Σ σˣ (real, symmetric).
pub fn transverse_part(geometry: &ClusterGeometry) -> DMatrix<f64> {
    let x = site_ops(geometry.n_sites, Axis::X);
    let mut m = DMatrix::zeros(geometry.dim(), geometry.dim());
    for op in &x {
        m -= op.real_part() * 0.5;
    }
    m
}

/// H₀ = J Σ_bonds σᶻσᶻ − (Bx/2) Σ σˣ.
pub fn build_h0(geometry: &ClusterGeometry, j: f64, bx: f64) -> Operator {
    Operator::from_real(&(ising_part(geometry) * j + transverse_part(geometry) * bx))
}

/// Strengths of the regularization ansatz: one W̃ per pair class and the
/// 3-body Q̃.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RegWeights {
    pub w: Vec<f64>,
    pub q: f64,
}

impl RegWeights {
    pub fn new(w: Vec<f64>, q: f64) -> Self {
        RegWeights { w, q }
    }

    pub fn zeros(geometry: &ClusterGeometry) -> Self {
        RegWeights::new(vec![0.0; geometry.w_classes.len()], 0.0)
    }

    /// Flattened `[W̃…, Q̃]` in unknown order; Q̃ only when the ansatz has it.
    pub fn to_vec(&self, geometry: &ClusterGeometry) -> Vec<f64> {
        let mut v = self.w.clone();
        if geometry.q_included {
            v.push(self.q);
        }
        v
    }

    /// Inverse of [`RegWeights::to_vec`].
    pub fn from_slice(geometry: &ClusterGeometry, x: &[f64]) -> Result<Self> {
        let p = geometry.w_classes.len();
        if x.len() != geometry.n_unknowns() {
            return Err(Error::WeightCount {
                expected: geometry.n_unknowns(),
                got: x.len(),
            });
        }
        let q = if geometry.q_included { x[p] } else { 0.0 };
        Ok(RegWeights::new(x[..p].to_vec(), q))
    }

    pub fn check(&self, geometry: &ClusterGeometry) -> Result<()> {
        if self.w.len() != geometry.w_classes.len() {
            return Err(Error::WeightCount {
                expected: geometry.w_classes.len(),
                got: self.w.len(),
            });
        }
        if !geometry.q_included && self.q != 0.0 {
            return Err(Error::ExcludedThreeBody(self.q));
        }
        Ok(())
    }
}

/// σʸᵢσᶻⱼ + σᶻᵢσʸⱼ.
pub fn pair_term(n_sites: usize, (i, j): SitePair) -> Result<Operator> {
    let yi = single_site(n_sites, i, Axis::Y)?;
    let zi = single_site(n_sites, i, Axis::Z)?;
    let yj = single_site(n_sites, j, Axis::Y)?;
    let zj = single_site(n_sites, j, Axis::Z)?;
    Ok(&(&yi * &zj) + &(&zi * &yj))
}

/// Σ over unordered triples and over the three choices of the σᶻ site k of
/// (σˣᵢσʸⱼ + σʸᵢσˣⱼ)σᶻₖ.
pub fn three_body_term(n_sites: usize) -> Operator {
    let x = site_ops(n_sites, Axis::X);
    let y = site_ops(n_sites, Axis::Y);
    let z = site_ops(n_sites, Axis::Z);
    let mut acc = Operator::zeros(1 << n_sites);
    for a in 0..n_sites {
        for b in a + 1..n_sites {
            for c in b + 1..n_sites {
                for (i, j, k) in [(a, b, c), (a, c, b), (b, c, a)] {
                    let xy = &(&x[i] * &y[j]) + &(&y[i] * &x[j]);
                    acc = &acc + &(&xy * &z[k]);
                }
            }
        }
    }
    acc
}

/// Regularization Hamiltonian H̃ for the given strengths.
pub fn build_reg(geometry: &ClusterGeometry, weights: &RegWeights) -> Result<Operator> {
    weights.check(geometry)?;
    let n = geometry.n_sites;
    let mut acc = Operator::zeros(geometry.dim());
    for (class, &w) in geometry.w_classes.iter().zip(&weights.w) {
        for &pair in class {
            acc = &acc + &pair_term(n, pair)?.scale(w);
        }
    }
    if geometry.q_included {
        acc = &acc + &three_body_term(n).scale(weights.q);
    }
    Ok(acc)
}

/// Permutation operator flipping every spin.
pub fn global_flip(n_sites: usize) -> Result<Operator> {
    let basis = basis_order(n_sites)?;
    let dim = basis.len();
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    for (col, &s) in basis.iter().enumerate() {
        let row = basis.iter().position(|&b| b == s.flip_all()).expect("closed basis");
        m[(row, col)] = Complex::new(1.0, 0.0);
    }
    Ok(Operator(m))
}
