//! Tabulated regularization matrices.
//!
//! Each table stores `±k` for `±A_k`, the k-th linear combination of
//! pair strengths, and `0` for an empty entry. The operator is `i · M`.
//! For N=4 the 3-body entries are overlaid separately: `−4iQ̃` in rows 1 and
//! 16 at columns 6..=11, and the Hermitian mirror.

use nalgebra::DMatrix;

use super::{Operator, RegWeights};
use crate::cluster::{ClusterGeometry, Geometry};
use crate::error::{Error, Result};

#[rustfmt::skip]
const CHAIN3: [[i8; 8]; 8] = [
    [0, -1, -2, -1,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -3,  0, 0],
    [2,  0,  0,  0,  3,  0,  3, 0],
    [1,  0,  0,  0,  0, -3,  0, 0],
    [0,  0, -3,  0,  0,  0,  0, 1],
    [0,  3,  0,  3,  0,  0,  0, 2],
    [0,  0, -3,  0,  0,  0,  0, 1],
    [0,  0,  0,  0, -1, -2, -1, 0],
];

#[rustfmt::skip]
const PYRAMID: [[i8; 16]; 16] = [
    [0, -1, -1, -1, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -2,  0,  0, -2, -2,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -2, -2,  0,  0,  0, -2,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0, -2, -2,  0, -2,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0,  0, -2, -2,  0, -2,  0,  0,  0,  0, 0],
    [0,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2,  2, 0],
    [0,  0,  2,  2,  0,  0,  0,  0,  0,  0,  0,  2,  0,  0,  2, 0],
    [0,  0,  0,  2,  2,  0,  0,  0,  0,  0,  0,  2,  2,  0,  0, 0],
    [0,  2,  0,  0,  2,  0,  0,  0,  0,  0,  0,  0,  2,  2,  0, 0],
    [0,  2,  0,  2,  0,  0,  0,  0,  0,  0,  0,  0,  2,  0,  2, 0],
    [0,  0,  2,  0,  2,  0,  0,  0,  0,  0,  0,  2,  0,  2,  0, 0],
    [0,  0,  0,  0,  0,  0, -2, -2,  0,  0, -2,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0, -2, -2, -2,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0, -2,  0,  0, -2,  0, -2,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0, -2, -2,  0,  0, -2,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1, 0],
];

#[rustfmt::skip]
const SQUARE: [[i8; 16]; 16] = [
    [0, -1, -1, -1, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -2,  0,  0, -2, -3,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -2, -2,  0,  0,  0, -3,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0, -2, -2,  0, -3,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0,  0, -2, -2,  0, -3,  0,  0,  0,  0, 0],
    [0,  2,  2,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  2,  2, 0],
    [0,  0,  2,  2,  0,  0,  0,  0,  0,  0,  0,  2,  0,  0,  2, 0],
    [0,  0,  0,  2,  2,  0,  0,  0,  0,  0,  0,  2,  2,  0,  0, 0],
    [0,  2,  0,  0,  2,  0,  0,  0,  0,  0,  0,  0,  2,  2,  0, 0],
    [0,  3,  0,  3,  0,  0,  0,  0,  0,  0,  0,  0,  3,  0,  3, 0],
    [0,  0,  3,  0,  3,  0,  0,  0,  0,  0,  0,  3,  0,  3,  0, 0],
    [0,  0,  0,  0,  0,  0, -2, -2,  0,  0, -3,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0, -2, -2, -3,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0, -2,  0,  0, -2,  0, -3,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0, -2, -2,  0,  0, -3,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1, -1, -1, 0],
];

#[rustfmt::skip]
const STAR: [[i8; 16]; 16] = [
    [0, -1, -1, -2, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -3,  0,  0, -3, -3,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -3, -3,  0,  0,  0, -3,  0,  0,  0,  0, 0],
    [2,  0,  0,  0,  0,  0,  4,  4,  0,  4,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0,  0, -3, -3,  0, -3,  0,  0,  0,  0, 0],
    [0,  3,  3,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -4,  3, 0],
    [0,  0,  3, -4,  0,  0,  0,  0,  0,  0,  0,  3,  0,  0,  3, 0],
    [0,  0,  0, -4,  3,  0,  0,  0,  0,  0,  0,  3,  3,  0,  0, 0],
    [0,  3,  0,  0,  3,  0,  0,  0,  0,  0,  0,  0,  3, -4,  0, 0],
    [0,  3,  0, -4,  0,  0,  0,  0,  0,  0,  0,  0,  3,  0,  3, 0],
    [0,  0,  3,  0,  3,  0,  0,  0,  0,  0,  0,  3,  0, -4,  0, 0],
    [0,  0,  0,  0,  0,  0, -3, -3,  0,  0, -3,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0, -3, -3, -3,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  4,  0,  0,  4,  0,  4,  0,  0,  0,  0, 2],
    [0,  0,  0,  0,  0, -3, -3,  0,  0, -3,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -1, -2, -1, 0],
];

#[rustfmt::skip]
const CHAIN4: [[i8; 16]; 16] = [
    [0, -1, -2, -2, -1,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0, -3,  0,  0, -4, -5,  0,  0,  0,  0,  0, 0],
    [2,  0,  0,  0,  0, -6, -7,  0,  0,  0, -8,  0,  0,  0,  0, 0],
    [2,  0,  0,  0,  0,  0, -7, -6,  0, -8,  0,  0,  0,  0,  0, 0],
    [1,  0,  0,  0,  0,  0,  0, -3, -4,  0, -5,  0,  0,  0,  0, 0],
    [0,  3,  6,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  6,  3, 0],
    [0,  0,  7,  7,  0,  0,  0,  0,  0,  0,  0,  4,  0,  0,  4, 0],
    [0,  0,  0,  6,  3,  0,  0,  0,  0,  0,  0,  3,  6,  0,  0, 0],
    [0,  4,  0,  0,  4,  0,  0,  0,  0,  0,  0,  0,  7,  7,  0, 0],
    [0,  5,  0,  8,  0,  0,  0,  0,  0,  0,  0,  0,  8,  0,  5, 0],
    [0,  0,  8,  0,  5,  0,  0,  0,  0,  0,  0,  5,  0,  8,  0, 0],
    [0,  0,  0,  0,  0,  0, -4, -3,  0,  0, -5,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0, -6, -7, -8,  0,  0,  0,  0,  0, 2],
    [0,  0,  0,  0,  0, -6,  0,  0, -7,  0, -8,  0,  0,  0,  0, 2],
    [0,  0,  0,  0,  0, -3, -4,  0,  0, -5,  0,  0,  0,  0,  0, 1],
    [0,  0,  0,  0,  0,  0,  0,  0,  0,  0,  0, -1, -2, -2, -1, 0],
];

/// The combinations A₁, A₂, … of the pair strengths.
fn combinations(geometry: Geometry, w: &[f64]) -> Vec<f64> {
    match geometry {
        Geometry::Chain3 => vec![w[0] + w[1], 2.0 * w[0], w[0] - w[1]],
        Geometry::Pyramid => vec![3.0 * w[0], w[0]],
        Geometry::Square => vec![2.0 * w[0] + w[1], w[1], 2.0 * w[0] - w[1]],
        Geometry::Star => vec![2.0 * w[1] + w[0], 3.0 * w[0], w[0], w[0] - 2.0 * w[1]],
        Geometry::Chain4 => {
            let (w1, w2, w3, w4) = (w[0], w[1], w[2], w[3]);
            vec![
                w1 + w3 + w4,
                w1 + w2 + w3,
                w2 - w1 + w3,
                w1 - w4 + w3,
                w1 + w2 - w3,
                -w1 + w4 + w3,
                w1 - w2 + w3,
                w1 + w4 - w3,
            ]
        }
        Geometry::Triangle => unreachable!("no table"),
    }
}

fn table(geometry: Geometry) -> Option<Vec<&'static [i8]>> {
    Some(match geometry {
        Geometry::Chain3 => CHAIN3.iter().map(|r| &r[..]).collect(),
        Geometry::Pyramid => PYRAMID.iter().map(|r| &r[..]).collect(),
        Geometry::Square => SQUARE.iter().map(|r| &r[..]).collect(),
        Geometry::Star => STAR.iter().map(|r| &r[..]).collect(),
        Geometry::Chain4 => CHAIN4.iter().map(|r| &r[..]).collect(),
        Geometry::Triangle => return None,
    })
}

/// Builds H̃ from the tables instead of Pauli algebra.
pub fn golden_reg_matrix(geometry: &ClusterGeometry, weights: &RegWeights) -> Result<Operator> {
    let rows = table(geometry.name).ok_or_else(|| Error::UnsupportedGeometry {
        geometry: geometry.name.to_string(),
        what: "a tabulated regularization matrix",
    })?;
    weights.check(geometry)?;
    let a = combinations(geometry.name, &weights.w);
    let dim = rows.len();
    let mut m = DMatrix::<f64>::from_fn(dim, dim, |r, c| {
        let code = rows[r][c];
        match code {
            0 => 0.0,
            k if k > 0 => a[k as usize - 1],
            k => -a[(-k) as usize - 1],
        }
    });
    if geometry.q_included {
        let q = weights.q;
        for j in 5..=10 {
            m[(0, j)] -= 4.0 * q;
            m[(15, j)] -= 4.0 * q;
            m[(j, 0)] += 4.0 * q;
            m[(j, 15)] += 4.0 * q;
        }
    }
    Ok(Operator::from_imag(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::build_reg;
    use nalgebra::Complex;

    #[test]
    fn table_entries() {
        let (w1, w2) = (0.4, -1.3);
        let sq = Geometry::Square.cluster();
        let h = golden_reg_matrix(&sq, &RegWeights::new(vec![w1, w2], 0.0)).unwrap();
        assert_eq!(h.at(1, 2), Complex::new(0.0, -(2.0 * w1 + w2)));

        let star = Geometry::Star.cluster();
        let h = golden_reg_matrix(&star, &RegWeights::new(vec![w1, w2], 0.0)).unwrap();
        assert_eq!(h.at(1, 4), Complex::new(0.0, -3.0 * w1));

        let c3 = Geometry::Chain3.cluster();
        let h = golden_reg_matrix(&c3, &RegWeights::new(vec![w1, w2], 0.0)).unwrap();
        assert_eq!(h.at(1, 3), Complex::new(0.0, -2.0 * w1));
    }

    #[test]
    fn tables_are_antisymmetric() {
        for g in Geometry::ALL.into_iter().skip(1) {
            let rows = table(g).unwrap();
            for (r, row) in rows.iter().enumerate() {
                for (c, &code) in row.iter().enumerate() {
                    assert_eq!(code, -rows[c][r], "{g} ({}, {})", r + 1, c + 1);
                }
            }
        }
    }

    #[test]
    fn matches_pauli_build() {
        for g in Geometry::ALL.into_iter().skip(1) {
            let c = g.cluster();
            let w: Vec<f64> = (0..c.w_classes.len()).map(|k| 0.7 - 0.45 * k as f64).collect();
            let q = if c.q_included { 0.23 } else { 0.0 };
            let weights = RegWeights::new(w, q);
            let a = build_reg(&c, &weights).unwrap();
            let b = golden_reg_matrix(&c, &weights).unwrap();
            assert!(a.max_abs_diff(&b) <= 1e-15, "{g}");
        }
    }

    #[test]
    fn triangle_unsupported() {
        let tri = Geometry::Triangle.cluster();
        assert!(matches!(
            golden_reg_matrix(&tri, &RegWeights::new(vec![1.0], 0.0)),
            Err(Error::UnsupportedGeometry { .. })
        ));
    }
}
