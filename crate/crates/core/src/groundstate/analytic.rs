//! Closed-form ground states.
//!
//! The expressions contain large cancellations (terms of order b⁵ against
//! J⁵ divided by J⁴Bx, and so on), so they are evaluated in double-double
//! arithmetic and rounded to f64 at the end. Cube roots take the principal
//! branch, with β̄ the complex conjugate of β; with that choice every
//! such combination is real.

use nalgebra::{Complex, DVector};
use twofloat::TwoFloat;

use super::GroundState;
use crate::cluster::{ClusterGeometry, Geometry};
use crate::error::{Error, Result};

type DD = TwoFloat;

/// Smallest J accepted by the formulas that divide by powers of J.
pub const J_EPSILON: f64 = 1e-6;

fn dd(x: f64) -> DD {
    DD::from(x)
}

/// Principal cube root: f64 seed refined by Newton steps in double-double.
fn cbrt(re: DD, im: DD) -> (DD, DD) {
    let w = Complex::new(re, im);
    let seed = Complex::new(re.hi(), im.hi()).cbrt();
    let mut z = Complex::new(dd(seed.re), dd(seed.im));
    for _ in 0..2 {
        let z2 = z * z;
        z = z - (z2 * z - w) / (z2 * dd(3.0));
    }
    (z.re, z.im)
}

fn check_domain(geometry: Geometry, j: f64, bx: f64) -> Result<()> {
    if !j.is_finite() || !bx.is_finite() {
        return Err(Error::Domain(format!("{geometry}: non-finite coupling")));
    }
    if bx <= 0.0 {
        return Err(Error::Domain(format!("{geometry}: requires Bx > 0, got {bx}")));
    }
    if j < 0.0 {
        return Err(Error::Domain(format!("{geometry}: requires J >= 0, got {j}")));
    }
    let needs_j = matches!(
        geometry,
        Geometry::Chain3 | Geometry::Square | Geometry::Star | Geometry::Chain4
    );
    if needs_j && j <= J_EPSILON {
        return Err(Error::Domain(format!(
            "{geometry}: formula is singular as J -> 0 (J = {j}, need J > {J_EPSILON})"
        )));
    }
    Ok(())
}

/// Energy and one amplitude per component class (unnormalized).
fn class_amplitudes(geometry: Geometry, j: f64, bx: f64) -> (DD, Vec<DD>) {
    let one = dd(1.0);
    let s3 = dd(3.0).sqrt();
    let (j, b) = (dd(j), dd(bx));
    let (j2, b2) = (j * j, b * b);
    match geometry {
        Geometry::Triangle => {
            let s = (b2 + 2.0 * b * j + 4.0 * j2).sqrt();
            let e = -s - b / 2.0 + j;
            (e, vec![one, (2.0 * s + b + 4.0 * j) / (3.0 * b)])
        }
        Geometry::Chain3 => {
            let root = (48.0 * j2 * j2 + 39.0 * b2 * j2 + 24.0 * b2 * b2).sqrt();
            let (br, bi) = cbrt(18.0 * j2 * b - 8.0 * b2 * b, 6.0 * j * root);
            let e = -(b + 2.0 * br + 2.0 * s3 * bi) / 6.0;
            let v1 = (3.0 * b2 - 8.0 * j * b - 4.0 * b * e - 4.0 * e * e - 8.0 * e * j) / (4.0 * j * b);
            let v2 = -v1 / 2.0 - (2.0 * j + e) / b;
            (e, vec![v1, v2, one])
        }
        Geometry::Pyramid => {
            let j4 = j2 * j2;
            let root = (108.0 * j4 * j2 + 309.0 * b2 * j4 + 3.0 * b2 * b2 * j2 + 3.0 * b2 * b2 * b2).sqrt();
            let (br, bi) = cbrt(35.0 * j2 * j - 18.0 * b2 * j, 3.0 * root);
            let e = (-2.0 * br + 4.0 * j - 2.0 * s3 * bi) / 3.0;
            let v2 = (2.0 * br + 14.0 * j + 2.0 * s3 * bi) / (6.0 * b);
            let v6 = -(4.0 * (br * br - bi * bi)
                - 20.0 * j * br
                - 48.0 * j2
                - 15.0 * b2
                - s3 * (8.0 * br * bi + 20.0 * j * bi))
                / (27.0 * b2);
            (e, vec![one, v2, v6])
        }
        Geometry::Square => {
            let q2 = (16.0 * j2 * j2 + b2 * b2).sqrt();
            let q1 = (8.0 * j2 + 2.0 * b2 + 2.0 * q2).sqrt();
            let v1 = (q1 - 4.0 * j) * (4.0 * j2 - b2 + q2) / (8.0 * j2 * b);
            let v6 = (q1 * q1 - 4.0 * q2) * q1 / (16.0 * j2 * b);
            let v10 = (q1 + 4.0 * j) * (4.0 * j2 - b2 + q2) / (8.0 * j2 * b);
            (-q1, vec![v1, one, v6, v10])
        }
        Geometry::Star => {
            let s = (2.0 * b2 + 5.0 * j2 + 2.0 * (b2 * b2 + b2 * j2 + 4.0 * j2 * j2).sqrt()).sqrt();
            let v1 = (-j * (7.0 * b2 + 3.0 * j2) + s * (4.0 * b2 + 3.0 * s * j - s * s + j2)) / (5.0 * j * b2);
            let v2 =
                (-2.0 * j * (9.0 * j2 - 4.0 * b2) + s * (4.0 * b2 - 2.0 * s * j - s * s + 21.0 * j2)) / (30.0 * j2 * b);
            let v4 = (-2.0 * j * (j2 + 4.0 * b2) - s * (4.0 * b2 - 2.0 * s * j - s * s + j2)) / (10.0 * j2 * b);
            (-s, vec![v1, v2, v4, one])
        }
        Geometry::Chain4 => {
            let (j3, j4, b4) = (j2 * j, j2 * j2, b2 * b2);
            let j5 = j4 * j;
            let root = (128.0 * j4 * j2 + 93.0 * j4 * b2 + 51.0 * b4 * j2 + 25.0 * b4 * b2).sqrt();
            let (b1r, _) = cbrt(
                64.0 * j4 * j2 + 15.0 * j4 * b2 + 21.0 * b4 * j2 + 8.0 * b4 * b2,
                3.0 * s3 * j2 * b * root,
            );
            let p = (4.0 * b1r + 11.0 * j2 + 4.0 * b2).sqrt();
            let (p2, p3) = (p * p, p * p * p);
            let (p4, p5) = (p2 * p2, p2 * p3);
            let v2 = -(s3 * j2 * p * (180.0 * b2 + 144.0 * j2) - s3 * p3 * (12.0 * b2 + 33.0 * j2) + s3 * p5
                - 162.0 * j5)
                / (162.0 * j4 * b);
            let v3 =
                (s3 * j2 * p * (180.0 * b2 + 198.0 * j2) - s3 * p3 * (12.0 * b2 + 33.0 * j2) + s3 * p5 + 324.0 * j5)
                    / (162.0 * j4 * b);
            let v6 = (-s3 * j2 * p * (144.0 * b2 + 81.0 * j2) - j * p2 * (36.0 * b2 + 90.0 * j2)
                + s3 * p3 * (12.0 * b2 + 30.0 * j2)
                + 3.0 * j * p4
                - s3 * p5
                + 243.0 * j5
                + 648.0 * b2 * j3)
                / (216.0 * b2 * j3);
            let v7 = -(s3 * j2 * p * (144.0 * b2 + 81.0 * j2)
                - j * p2 * (36.0 * b2 + 90.0 * j2)
                - s3 * p3 * (12.0 * b2 + 30.0 * j2)
                + 3.0 * j * p4
                + s3 * p5
                + 243.0 * j5
                + 324.0 * j3 * b2)
                / (108.0 * b2 * j3);
            let v10 = -(s3 * j2 * p * (144.0 * b2 - 9.0 * j2)
                + j * p2 * (108.0 * b2 + 54.0 * j2)
                + 6.0 * s3 * p3 * (2.0 * b2 + j2)
                - 9.0 * j * p4
                - s3 * p5
                + 648.0 * b2 * j3
                - 81.0 * j5)
                / (648.0 * b2 * j3);
            (-p / s3, vec![one, v2, v3, v6, v7, v10])
        }
    }
}

/// Ground state from the closed-form eigenvector components.
///
/// Requires Bx > 0 and J ≥ 0; chain3, square, star and chain4 divide by
/// powers of J and additionally need J > [`J_EPSILON`].
pub fn ground_analytic(geometry: &ClusterGeometry, j: f64, bx: f64) -> Result<GroundState> {
    check_domain(geometry.name, j, bx)?;
    let (energy, amps) = class_amplitudes(geometry.name, j, bx);
    let norm2 = geometry
        .component_classes
        .iter()
        .zip(&amps)
        .fold(dd(0.0), |acc, (class, &v)| acc + v * v * class.len() as f64);
    let zeta = norm2.sqrt();
    let mut c = DVector::zeros(geometry.dim());
    for (class, &v) in geometry.component_classes.iter().zip(&amps) {
        let x = f64::from(v / zeta);
        for &l in class {
            c[l - 1] = x;
        }
    }
    if !c.iter().all(|x: &f64| x.is_finite()) || !energy.hi().is_finite() {
        return Err(Error::Domain(format!(
            "{}: non-finite result at J={j}, Bx={bx}",
            geometry.name
        )));
    }
    Ok(GroundState {
        energy: f64::from(energy),
        components: c,
        gap: None,
    })
}
