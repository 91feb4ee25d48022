//! Sampled Hölder constants of scalar perturbations against their analytic
//! values. Sampling only ever finds a lower bound.

use std::f64::consts::PI;

use netsteer::linalg::DenseMatrix;
use netsteer::network::NetworkedSystem;
use netsteer::perturbation::{estimate_holder_constant, NodeNonlinearity, Perturbation, SampleBox};

fn main() -> netsteer::Result<()> {
    let sys = NetworkedSystem::from_matrices(DenseMatrix::zeros(1, 1), DenseMatrix::identity(1))?;
    let cases = [
        (NodeNonlinearity::ScaledSine { gain: 1.0 }, 1.0, (-PI, PI)),
        (NodeNonlinearity::Saturation { gain: 2.0, limit: 0.3 }, 1.0, (-1.0, 1.0)),
        (NodeNonlinearity::SqrtSublinear { gain: 1.0 }, 0.5, (0.0, 1.0)),
    ];
    for (family, rho, (lo, hi)) in cases {
        let f = Perturbation::new(&sys, vec![family.clone()], rho, 0.0)?;
        let region = SampleBox::uniform(1, lo, hi, (0.0, 1.0));
        let analytic = f.analytic_constant(rho).expect("closed form known");
        println!("{family:?} (rho = {rho}) on [{lo:.3}, {hi:.3}]: analytic {analytic:.6}");
        for samples in [100, 1_000, 10_000] {
            let est = estimate_holder_constant(&f, rho, &region, samples, 42)?;
            println!("  {samples:>6} samples: {est:.6} ({:.1}% of analytic)", 100.0 * est / analytic);
        }
    }
    Ok(())
}
