use super::eigen::symmetric_eigenvalues;
use super::DenseMatrix;
use crate::error::{Error, Result};

/// Smallest admissible `λ_min / λ_max` for a matrix to count as positive definite.
pub const SPD_RATIO_GATE: f64 = 1e-10;

/// LU factorization with partial pivoting.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &DenseMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::NotSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (piv, max) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if max == 0.0 {
                return Err(Error::InvalidParameter("singular matrix in LU".into()));
            }
            if piv != k {
                perm.swap(piv, k);
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(piv, j)];
                    lu[(piv, j)] = tmp;
                }
            }
            let d = lu[(k, k)];
            for i in k + 1..n {
                let f = lu[(i, k)] / d;
                lu[(i, k)] = f;
                if f != 0.0 {
                    for j in k + 1..n {
                        lu[(i, j)] -= f * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let x = self.solve(&b.column(j));
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }
}

/// Cholesky factor of a symmetric positive-definite matrix, gated on the
/// eigenvalue ratio [`SPD_RATIO_GATE`].
#[derive(Debug, Clone)]
pub struct SpdFactor {
    matrix: DenseMatrix,
    lower: DenseMatrix,
    min_eig: f64,
    max_eig: f64,
}

impl SpdFactor {
    pub fn new(w: &DenseMatrix) -> Result<Self> {
        let eig = symmetric_eigenvalues(w)?;
        let n = w.rows();
        let (min_eig, max_eig) = match (eig.first(), eig.last()) {
            (Some(&lo), Some(&hi)) => (lo, hi),
            _ => (0.0, 0.0),
        };
        let not_pd = Error::NotPositiveDefinite { min_eig, max_eig };
        if n == 0 || !(max_eig > 0.0) || !(min_eig > SPD_RATIO_GATE * max_eig) {
            return Err(not_pd);
        }

        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let mut d = w[(j, j)];
            for k in 0..j {
                d -= l[(j, k)] * l[(j, k)];
            }
            if !(d > 0.0) {
                return Err(not_pd);
            }
            let d = d.sqrt();
            l[(j, j)] = d;
            for i in j + 1..n {
                let mut s = w[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                l[(i, j)] = s / d;
            }
        }
        Ok(Self {
            matrix: w.clone(),
            lower: l,
            min_eig,
            max_eig,
        })
    }

    pub fn min_eig(&self) -> f64 {
        self.min_eig
    }

    pub fn max_eig(&self) -> f64 {
        self.max_eig
    }

    fn solve_once(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lower.rows();
        let l = &self.lower;
        let mut y = b.to_vec();
        for i in 0..n {
            for k in 0..i {
                y[i] -= l[(i, k)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                y[i] -= l[(k, i)] * y[k];
            }
            y[i] /= l[(i, i)];
        }
        y
    }

    /// Solves `W x = b` with one step of iterative refinement.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if b.len() != self.matrix.rows() {
            return Err(Error::DimensionMismatch {
                what: "right-hand side".into(),
                expected: self.matrix.rows(),
                found: b.len(),
            });
        }
        let mut x = self.solve_once(b);
        let wx = self.matrix.matvec(&x);
        let residual: Vec<f64> = b.iter().zip(&wx).map(|(bi, wi)| bi - wi).collect();
        let correction = self.solve_once(&residual);
        for (xi, ci) in x.iter_mut().zip(correction) {
            *xi += ci;
        }
        Ok(x)
    }
}

/// Solves `W x = rhs` for symmetric positive-definite `W`.
pub fn solve_spd(w: &DenseMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    SpdFactor::new(w)?.solve(rhs)
}
