//! Linear controllability of a double integrator, checked three ways.

use netsteer::controllability::{
    compute_bounds, gramian, kalman_rank, quadrature_check, TimeHorizon,
};
use netsteer::linalg::{symmetric_eigenvalues, DenseMatrix};
use netsteer::network::NetworkedSystem;

fn main() -> netsteer::Result<()> {
    let a = DenseMatrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]])?;
    let psi = DenseMatrix::from_rows(&[[0.0], [1.0]])?;
    let sys = NetworkedSystem::from_matrices(a, psi)?;
    let horizon = TimeHorizon::new(0.0, 1.0, 200)?;

    println!("Kalman rank: {} of {}", kalman_rank(&sys), sys.n());

    let w = gramian(&sys, &horizon);
    let exact = DenseMatrix::from_rows(&[[1.0 / 3.0, 0.5], [0.5, 1.0]])?;
    println!("Gramian =\n{w}");
    println!("error vs closed form: {:e}", w.max_abs_diff(&exact));
    println!("eigenvalues: {:?}", symmetric_eigenvalues(&w)?);

    let bounds = compute_bounds(&sys, &horizon)?;
    println!(
        "alpha0 = {}, beta = {}, gamma = {}, delta = {}",
        bounds.alpha0, bounds.beta, bounds.gamma, bounds.delta
    );

    let check = quadrature_check(&sys, &horizon)?;
    println!("relative drift at 2K intervals: {:e}", check.relative_drift);
    Ok(())
}
