//! Builds a three-node chain and prints the assembled state and input matrices.

use netsteer::linalg::DenseMatrix;
use netsteer::network::{assemble, validate, NetworkTopology, NodeDynamics};

fn main() -> netsteer::Result<()> {
    let node = |i| {
        NodeDynamics::new(
            i,
            DenseMatrix::from_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap(),
            DenseMatrix::from_rows(&[[0.0], [1.0]]).unwrap(),
            DenseMatrix::from_rows(&[[1.0, 0.0]]).unwrap(),
            DenseMatrix::from_rows(&[[0.0], [1.0]]).unwrap(),
        )
    };
    let nodes = vec![node(1), node(2), node(3)];
    // node i listens to node i - 1; only the first node is actuated
    let beta = DenseMatrix::from_rows(&[[0.0, 0.0, 0.0], [0.5, 0.0, 0.0], [0.0, 0.5, 0.0]])?;
    let topology = NetworkTopology::new(beta, vec![1, 0, 0], 1);

    let diagnostics = validate(&nodes, &topology);
    assert!(diagnostics.is_empty(), "{diagnostics:?}");

    let sys = assemble(&nodes, &topology)?;
    println!("n = {}, p = {}", sys.n(), sys.p());
    println!("A =\n{}", sys.a());
    println!("Psi =\n{}", sys.psi());
    for b in sys.blocks() {
        println!("block: state offset {}, input offset {}, n = {}, p = {}", b.state, b.input, b.n, b.p);
    }

    // a mismatched node is reported, not assembled
    let mut broken = nodes.clone();
    broken[2].h = DenseMatrix::zeros(3, 1);
    for d in validate(&broken, &topology) {
        println!("diagnostic: {d}");
    }
    Ok(())
}
