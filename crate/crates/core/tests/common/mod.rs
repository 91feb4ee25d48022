#![allow(dead_code)]

use netsteer::controllability::{GramianData, TimeHorizon};
use netsteer::linalg::{spectral_norm, DenseMatrix};
use netsteer::network::NetworkedSystem;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..=1.0))
}

pub fn uniform_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect()
}

/// Uniform random matrix rescaled to spectral norm `norm`.
pub fn with_norm(rng: &mut ChaCha8Rng, n: usize, norm: f64) -> DenseMatrix {
    let g = uniform(rng, n, n);
    let s = spectral_norm(&g);
    if s == 0.0 {
        g
    } else {
        g.scale(norm / s)
    }
}

pub fn system(a: DenseMatrix, psi: DenseMatrix) -> NetworkedSystem {
    NetworkedSystem::from_matrices(a, psi).expect("conformable")
}

/// Random `(𝒜, Ψ)` with `‖𝒜‖₂ ≤ max_norm`.
pub fn random_system(rng: &mut ChaCha8Rng, n: usize, p: usize, max_norm: f64) -> NetworkedSystem {
    let norm = rng.gen_range(0.1..=max_norm);
    let a = with_norm(rng, n, norm);
    let psi = uniform(rng, n, p);
    system(a, psi)
}

/// Spectral abscissa pushed below zero by a margin in `[0.1, 1]`.
pub fn random_stable(rng: &mut ChaCha8Rng, n: usize, p: usize) -> NetworkedSystem {
    let g = uniform(rng, n, n);
    let shift = spectral_norm(&g) + rng.gen_range(0.1..=1.0);
    let a = &g - &DenseMatrix::identity(n).scale(shift);
    system(a, uniform(rng, n, p))
}

/// Staircase form `[[A11, A12], [0, A22]]`, `Ψ = [B1; 0]`, rotated by a
/// random orthogonal change of coordinates. The last `n − r` directions are
/// unreachable.
pub fn constructed_uncontrollable(rng: &mut ChaCha8Rng, n: usize, r: usize, p: usize) -> NetworkedSystem {
    assert!(r < n);
    let mut a = uniform(rng, n, n);
    for i in r..n {
        for j in 0..r {
            a[(i, j)] = 0.0;
        }
    }
    let mut psi = uniform(rng, n, p);
    for i in r..n {
        for j in 0..p {
            psi[(i, j)] = 0.0;
        }
    }
    let t = random_orthogonal(rng, n);
    let a = t.matmul(&a).matmul(&t.transpose());
    system(a, t.matmul(&psi))
}

/// Gram–Schmidt on a random square matrix.
pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    loop {
        let g = uniform(rng, n, n);
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for _ in 0..2 {
                for u in &q {
                    let d: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= d * ui;
                    }
                }
            }
            let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if nv < 1e-3 {
                ok = false;
                break;
            }
            q.push(v.iter().map(|x| x / nv).collect());
        }
        if ok {
            return DenseMatrix::from_fn(n, n, |i, j| q[j][i]);
        }
    }
}

/// `λ_max / λ_min` of the Gramian, or `None` when it fails the PD gate.
pub fn gramian_condition(sys: &NetworkedSystem, horizon: &TimeHorizon) -> Option<f64> {
    GramianData::new(sys, horizon)
        .ok()
        .map(|g| g.factor.max_eig() / g.factor.min_eig())
}
