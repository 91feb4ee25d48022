//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (Higham, "The scaling and squaring method for the matrix exponential
//! revisited", 2005).

use super::factor::Lu;
use super::DenseMatrix;
use crate::error::{Error, Result};

const PADE3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const PADE5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const PADE7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const PADE9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

// 1-norm thresholds below which the degree-m approximant meets unit roundoff.
const THETA3: f64 = 1.495585217958292e-2;
const THETA5: f64 = 2.539398330063230e-1;
const THETA7: f64 = 9.504178996162932e-1;
const THETA9: f64 = 2.097847961257068e0;
const THETA13: f64 = 5.371920351148152e0;

/// `exp(s·A)` for square `A`.
pub fn mat_exp(a: &DenseMatrix, s: f64) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if s == 0.0 || n == 0 {
        return Ok(DenseMatrix::identity(n));
    }
    let a = a.scale(s);
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }

    let (u, v, squarings) = if norm < THETA3 {
        let (u, v) = pade_low(&a, &PADE3);
        (u, v, 0)
    } else if norm < THETA5 {
        let (u, v) = pade_low(&a, &PADE5);
        (u, v, 0)
    } else if norm < THETA7 {
        let (u, v) = pade_low(&a, &PADE7);
        (u, v, 0)
    } else if norm < THETA9 {
        let (u, v) = pade_low(&a, &PADE9);
        (u, v, 0)
    } else {
        let squarings = (norm / THETA13).log2().ceil().max(0.0) as i32;
        let scaled = a.scale(2f64.powi(-squarings));
        let (u, v) = pade13(&scaled);
        (u, v, squarings)
    };

    // r = (V - U)^{-1} (V + U)
    let p = &v + &u;
    let q = &v - &u;
    let mut r = Lu::new(&q)?.solve_matrix(&p);
    for _ in 0..squarings {
        r = &r * &r;
    }
    Ok(r)
}

/// Odd part `U` and even part `V` of the Padé numerator for degrees 3..9.
fn pade_low(a: &DenseMatrix, b: &[f64]) -> (DenseMatrix, DenseMatrix) {
    let n = a.rows();
    let ident = DenseMatrix::identity(n);
    let a2 = a * a;
    // even powers I, A², A⁴, ...
    let mut powers = vec![ident, a2.clone()];
    while powers.len() < b.len() / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut odd = DenseMatrix::zeros(n, n);
    let mut even = DenseMatrix::zeros(n, n);
    for (k, pw) in powers.iter().enumerate() {
        odd.axpy(b[2 * k + 1], pw);
        even.axpy(b[2 * k], pw);
    }
    (a * &odd, even)
}

fn pade13(a: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let b = &PADE13;
    let n = a.rows();
    let ident = DenseMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut inner_u = DenseMatrix::zeros(n, n);
    inner_u.axpy(b[13], &a6);
    inner_u.axpy(b[11], &a4);
    inner_u.axpy(b[9], &a2);
    let mut u = &a6 * &inner_u;
    u.axpy(b[7], &a6);
    u.axpy(b[5], &a4);
    u.axpy(b[3], &a2);
    u.axpy(b[1], &ident);
    let u = a * &u;

    let mut inner_v = DenseMatrix::zeros(n, n);
    inner_v.axpy(b[12], &a6);
    inner_v.axpy(b[10], &a4);
    inner_v.axpy(b[8], &a2);
    let mut v = &a6 * &inner_v;
    v.axpy(b[6], &a6);
    v.axpy(b[4], &a4);
    v.axpy(b[2], &a2);
    v.axpy(b[0], &ident);
    (u, v)
}
