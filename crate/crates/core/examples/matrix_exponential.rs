use netsteer::linalg::{mat_exp, DenseMatrix};

fn main() -> netsteer::Result<()> {
    let theta: f64 = 0.75;
    let rotation = DenseMatrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]])?;
    let e = mat_exp(&rotation, theta)?;
    let exact = DenseMatrix::from_rows(&[[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]])?;
    println!("exp(theta J) =\n{e}");
    println!("max error vs rotation: {:e}", e.max_abs_diff(&exact));

    let stiff = DenseMatrix::from_rows(&[[-50.0, 49.0, 0.0], [0.0, -1.0, 3.0], [0.0, 0.0, 2.0]])?;
    let forward = mat_exp(&stiff, 1.0)?;
    let backward = mat_exp(&stiff, -1.0)?;
    let residual = forward.matmul(&backward).max_abs_diff(&DenseMatrix::identity(3));
    println!("|exp(A) exp(-A) - I|_max = {residual:e}");
    Ok(())
}
