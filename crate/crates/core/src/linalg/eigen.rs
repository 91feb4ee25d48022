use super::DenseMatrix;
use crate::error::{Error, Result};

/// Relative asymmetry tolerated by the symmetric routines.
pub const SYMMETRY_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 100;

fn check_symmetric(w: &DenseMatrix) -> Result<()> {
    if !w.is_square() {
        return Err(Error::NotSquare {
            rows: w.rows(),
            cols: w.cols(),
        });
    }
    let scale = w.max_abs();
    let asym = w.max_abs_diff(&w.transpose());
    if asym > SYMMETRY_TOL * scale {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
pub fn symmetric_eigenvalues(w: &DenseMatrix) -> Result<Vec<f64>> {
    check_symmetric(w)?;
    let n = w.rows();
    let mut a = w.symmetrized();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= (f64::EPSILON * f64::EPSILON) * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

/// Largest singular value, `sqrt(λ_max(AᵀA))`.
pub fn spectral_norm(a: &DenseMatrix) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    // work with the smaller Gram matrix
    let gram = if a.rows() < a.cols() {
        a * &a.transpose()
    } else {
        &a.transpose() * a
    };
    let eig = symmetric_eigenvalues(&gram.symmetrized()).expect("Gram matrix is symmetric");
    eig.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eig_sym(w: &DenseMatrix) -> Result<f64> {
    let eig = symmetric_eigenvalues(w)?;
    eig.first()
        .copied()
        .ok_or_else(|| Error::InvalidParameter("empty matrix has no eigenvalues".into()))
}
