//! Jacobi-type decompositions for small dense matrices: cyclic two-sided
//! Jacobi for symmetric eigenproblems and one-sided (Hestenes) Jacobi for
//! the thin SVD.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 64;

/// Eigenvalues ascending; column k of `vectors` belongs to `values[k]`.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymmetricEigen {
    pub fn gap(&self) -> Option<f64> {
        (self.values.len() > 1).then(|| self.values[1] - self.values[0])
    }
}

pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<SymmetricEigen> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: a.ncols(),
        });
    }
    let scale = a.amax().max(f64::MIN_POSITIVE);
    let asym = (a - a.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::NotSymmetric(asym));
    }

    let mut m = (a + a.transpose()) * 0.5;
    let mut v = DMatrix::<f64>::identity(n, n);
    let frob = m.norm();
    let mut converged = false;

    for sweep in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).map(move |q| (p, q)))
            .filter(|(p, q)| p != q)
            .map(|(p, q)| m[(p, q)] * m[(p, q)])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * f64::EPSILON * frob || off == 0.0 {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                // Once an element no longer changes either diagonal entry it
                // is dropped outright.
                let g = 100.0 * apq.abs();
                if sweep > 3 && m[(p, p)].abs() + g == m[(p, p)].abs() && m[(q, q)].abs() + g == m[(q, q)].abs() {
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = if theta == 0.0 {
                    1.0
                } else if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| m[(i, i)]));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SymmetricEigen { values, vectors })
}

/// Thin SVD A = U·diag(σ)·Vᵀ, singular values descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn max_singular_value(&self) -> f64 {
        self.singular_values.iter().copied().fold(0.0, f64::max)
    }

    /// Number of singular values above `rel_cutoff · σ_max`.
    pub fn rank(&self, rel_cutoff: f64) -> usize {
        let floor = rel_cutoff * self.max_singular_value();
        self.singular_values.iter().filter(|&&s| s > floor && s > 0.0).count()
    }

    /// Minimum-norm least-squares solution, discarding singular values at or
    /// below `rel_cutoff · σ_max`.
    pub fn solve(&self, b: &DVector<f64>, rel_cutoff: f64) -> DVector<f64> {
        let floor = rel_cutoff * self.max_singular_value();
        let mut x = DVector::zeros(self.v.nrows());
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s > floor && s > 0.0 {
                x += self.v.column(k) * (self.u.column(k).dot(b) / s);
            }
        }
        x
    }
}

/// One-sided Jacobi SVD of an m×n matrix with m ≥ n.
pub fn jacobi_svd(a: &DMatrix<f64>) -> Result<Svd> {
    let (m, n) = a.shape();
    if m < n {
        return Err(Error::DimensionMismatch { expected: n, got: m });
    }
    let mut u = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    // Dot products of length m carry rounding of order m·ε.
    let tol = m as f64 * f64::EPSILON;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = u.column(p).norm_squared();
                let beta = u.column(q).norm_squared();
                let gamma = u.column(p).dot(&u.column(q));
                if gamma == 0.0 || gamma.abs() <= tol * alpha.sqrt() * beta.sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta == 0.0 {
                    1.0
                } else if zeta.abs() > 1e150 {
                    0.5 / zeta
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for mat in [&mut u, &mut v] {
                    for k in 0..mat.nrows() {
                        let xp = mat[(k, p)];
                        let xq = mat[(k, q)];
                        mat[(k, p)] = c * xp - s * xq;
                        mat[(k, q)] = s * xp + c * xq;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let norms: Vec<f64> = (0..n).map(|k| u.column(k).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let singular_values = DVector::from_iterator(n, order.iter().map(|&k| norms[k]));
    let u = DMatrix::from_fn(m, n, |r, c| {
        let k = order[c];
        if norms[k] > 0.0 {
            u[(r, k)] / norms[k]
        } else {
            0.0
        }
    });
    let v = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Svd { u, singular_values, v })
}
