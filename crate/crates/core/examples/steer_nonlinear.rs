//! Steers a perturbed two-node network, then samples the contraction ratio of
//! the solution map.

use netsteer::controllability::{compute_bounds, TimeHorizon};
use netsteer::linalg::DenseMatrix;
use netsteer::network::{assemble, NetworkTopology, NodeDynamics};
use netsteer::perturbation::{check_boyd_wong, compute_m, NodeNonlinearity, Perturbation};
use netsteer::steering::{picard_solve, verify_contraction, SteeringProblem};

fn main() -> netsteer::Result<()> {
    let node = |i| {
        NodeDynamics::new(
            i,
            DenseMatrix::from_rows(&[[0.5, 1.0], [-1.0, 0.5]]).unwrap(),
            DenseMatrix::from_rows(&[[0.0], [1.0]]).unwrap(),
            DenseMatrix::from_rows(&[[1.0, 0.0]]).unwrap(),
            DenseMatrix::from_rows(&[[0.0], [1.0]]).unwrap(),
        )
    };
    let beta = DenseMatrix::from_rows(&[[0.0, 0.4], [0.6, 0.0]])?;
    let sys = assemble(&[node(1), node(2)], &NetworkTopology::new(beta, vec![1, 1], 1))?;
    let horizon = TimeHorizon::new(0.0, 1.0, 200)?;

    let alpha = 0.01;
    let families = vec![
        NodeNonlinearity::ScaledSine { gain: alpha },
        NodeNonlinearity::Saturation { gain: alpha, limit: 0.5 },
    ];
    let f = Perturbation::new(&sys, families, 1.0, alpha)?;

    let m = compute_m(&compute_bounds(&sys, &horizon)?, alpha, &horizon);
    let verdict = check_boyd_wong(m, 1.0)?;
    println!("M = {m:.4}, contraction condition holds: {}", verdict.satisfied_globally);

    let prob = SteeringProblem::new(sys, f, horizon, vec![0.0; 4], vec![0.2, 0.0, -0.1, 0.0])?;
    let res = picard_solve(&prob)?;
    for (k, d) in res.successive_deltas.iter().enumerate() {
        println!("iteration {:>2}: sup change {d:e}", k + 1);
    }
    println!(
        "terminal error: {:e} (fixed point), {:e} (RK4 replay)",
        res.terminal_error_fixed_point, res.terminal_error_simulated
    );

    let rep = verify_contraction(&prob, 200, 3, 0.5)?;
    println!(
        "largest sampled ratio {:.4e} against bound {:.4e}: {}",
        rep.max_ratio_sup, rep.bound, rep.within_bound
    );
    Ok(())
}
