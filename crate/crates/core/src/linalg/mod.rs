//! Dense kernels used throughout the crate: the matrix carrier, the matrix
//! exponential, symmetric eigenvalues and operator norms, and SPD solves.

mod eigen;
mod expm;
mod factor;
mod matrix;
mod rank;

pub use eigen::{min_eig_sym, spectral_norm, symmetric_eigenvalues, SYMMETRY_TOL};
pub use expm::mat_exp;
pub use factor::{solve_spd, Lu, SpdFactor, SPD_RATIO_GATE};
pub use matrix::{norm2, sub_vec, DenseMatrix};
pub use rank::column_pivoted_rank;
