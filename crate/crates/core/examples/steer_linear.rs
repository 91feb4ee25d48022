//! Steers an unperturbed harmonic oscillator and compares the control with
//! the closed-form minimum-energy input.

use netsteer::controllability::TimeHorizon;
use netsteer::linalg::DenseMatrix;
use netsteer::network::NetworkedSystem;
use netsteer::perturbation::Perturbation;
use netsteer::steering::{picard_solve, SteeringProblem};

fn main() -> netsteer::Result<()> {
    let a = DenseMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]])?;
    let psi = DenseMatrix::from_rows(&[[0.0], [1.0]])?;
    let sys = NetworkedSystem::from_matrices(a, psi)?;
    let horizon = TimeHorizon::new(0.0, 2.0, 200)?;
    let prob = SteeringProblem::new(
        sys.clone(),
        Perturbation::zero(&sys),
        horizon,
        vec![1.0, 0.0],
        vec![0.0, 0.0],
    )?;

    let res = picard_solve(&prob)?;
    println!("iterations: {}, converged: {}", res.iterations, res.converged);
    println!("terminal state: {:?}", res.trajectory.terminal());
    println!("terminal error (RK4 replay): {:e}", res.terminal_error_simulated);

    let peak = res.controls.iter().map(|u| u[0].abs()).fold(0.0, f64::max);
    println!("peak |u|: {peak:.6}");
    Ok(())
}
