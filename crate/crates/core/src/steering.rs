//! Gramian-based steering control, the solution map `𝒦` and its Picard
//! iteration, plus an independent Runge–Kutta check of the result.
//!
//! For a trajectory `X` sampled on the horizon grid the control is
//!
//! ```text
//! ũ(X, t) = Ψᵀ Φᵀ(t₁, t) 𝕎⁻¹ [x₁ − Φ(t₁, t₀) x₀ − ∫ Φ(t₁, τ) F(τ, X(τ)) dτ]
//! ```
//!
//! and `(𝒦X)(t) = Φ(t, t₀) x₀ + ∫_{t₀}^{t} Φ(t, τ) [Ψ ũ(X, τ) + F(τ, X(τ))] dτ`.
//! Fixed points of `𝒦` are trajectories of the perturbed system that start at
//! `x₀` and end at `x₁`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::controllability::{GramianData, TimeHorizon};
use crate::error::{Error, Result};
use crate::linalg::{norm2, sub_vec, DenseMatrix};
use crate::network::NetworkedSystem;
use crate::perturbation::{compute_m, Perturbation};
use crate::quadrature::{node_weights, simpson_weights, CompensatedSum};

pub const DEFAULT_FP_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_MAX_ITERATIONS: usize = 100;
pub const DEFAULT_SIM_REFINEMENT: usize = 10;

/// Relative slack on `M` when checking sampled contraction ratios.
pub const CONTRACTION_SLACK: f64 = 0.05;

/// How the verifier reconstructs the control between grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ControlInterpolation {
    Linear,
    /// Local four-point Lagrange interpolation.
    #[default]
    Cubic,
}

/// Steering task `x(t₀) = x₀ → x(t₁) = x₁` for the perturbed system.
#[derive(Debug, Clone)]
pub struct SteeringProblem {
    pub sys: NetworkedSystem,
    pub perturbation: Perturbation,
    pub horizon: TimeHorizon,
    pub x0: Vec<f64>,
    pub x1: Vec<f64>,
    pub fp_tolerance: f64,
    pub max_iterations: usize,
    pub sim_refinement: usize,
    pub interpolation: ControlInterpolation,
}

impl SteeringProblem {
    pub fn new(
        sys: NetworkedSystem,
        perturbation: Perturbation,
        horizon: TimeHorizon,
        x0: Vec<f64>,
        x1: Vec<f64>,
    ) -> Result<Self> {
        let n = sys.n();
        for (name, v) in [("x0", &x0), ("x1", &x1)] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    what: name.into(),
                    expected: n,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} has a non-finite entry")));
            }
        }
        if perturbation.dim() != n {
            return Err(Error::DimensionMismatch {
                what: "perturbation dimension".into(),
                expected: n,
                found: perturbation.dim(),
            });
        }
        Ok(Self {
            sys,
            perturbation,
            horizon,
            x0,
            x1,
            fp_tolerance: DEFAULT_FP_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            sim_refinement: DEFAULT_SIM_REFINEMENT,
            interpolation: ControlInterpolation::default(),
        })
    }

    pub fn with_fp_tolerance(mut self, tol: f64) -> Self {
        self.fp_tolerance = tol;
        self
    }

    pub fn with_max_iterations(mut self, iterations: usize) -> Self {
        self.max_iterations = iterations;
        self
    }

    pub fn with_sim_refinement(mut self, refinement: usize) -> Self {
        self.sim_refinement = refinement;
        self
    }

    pub fn with_interpolation(mut self, interpolation: ControlInterpolation) -> Self {
        self.interpolation = interpolation;
        self
    }

    /// Straight line from `x₀` to `x₁` on the horizon grid.
    pub fn initial_trajectory(&self) -> Trajectory {
        let times = self.horizon.times();
        let len = self.horizon.length();
        let states = times
            .iter()
            .map(|&t| {
                let s = (t - self.horizon.t0()) / len;
                self.x0
                    .iter()
                    .zip(&self.x1)
                    .map(|(a, b)| a + s * (b - a))
                    .collect()
            })
            .collect();
        Trajectory { times, states }
    }
}

/// States sampled on the horizon grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn terminal(&self) -> &[f64] {
        self.states.last().expect("non-empty trajectory")
    }

    /// Largest pointwise Euclidean distance.
    pub fn sup_distance(&self, other: &Trajectory) -> f64 {
        self.states
            .iter()
            .zip(&other.states)
            .map(|(a, b)| norm2(&sub_vec(a, b)))
            .fold(0.0, f64::max)
    }

    /// Grid `L²` distance, Simpson-weighted.
    pub fn l2_distance(&self, other: &Trajectory) -> f64 {
        let k = self.states.len() - 1;
        let h = (self.times[k] - self.times[0]) / k as f64;
        let w = simpson_weights(k);
        let sq: f64 = self
            .states
            .iter()
            .zip(&other.states)
            .zip(&w)
            .map(|((a, b), wj)| {
                let d = norm2(&sub_vec(a, b));
                wj * h * d * d
            })
            .sum();
        sq.sqrt()
    }
}

/// The solution map with its Gramian factorization and quadrature weights
/// prepared once.
#[derive(Debug, Clone)]
pub struct SolutionMap<'a> {
    prob: &'a SteeringProblem,
    data: GramianData,
    simpson: Vec<f64>,
    partial: Vec<Vec<f64>>,
    /// `Φ(t₁, t₀ + h/2)`.
    final_from_mid: DenseMatrix,
}

impl<'a> SolutionMap<'a> {
    /// Fails with [`Error::NotControllable`] when the Gramian is not
    /// positive definite.
    pub fn new(prob: &'a SteeringProblem) -> Result<Self> {
        let data = GramianData::new(&prob.sys, &prob.horizon)?;
        let k = prob.horizon.intervals();
        let partial = (0..=k)
            .map(|j| if j >= 2 { node_weights(j) } else { Vec::new() })
            .collect();
        let final_from_mid = data.grid.power(k - 1) * data.grid.half_step();
        Ok(Self {
            prob,
            data,
            simpson: simpson_weights(k),
            partial,
            final_from_mid,
        })
    }

    pub fn gramian(&self) -> &GramianData {
        &self.data
    }

    fn perturbation_samples(&self, x: &Trajectory) -> Vec<Vec<f64>> {
        x.times
            .iter()
            .zip(&x.states)
            .map(|(&t, s)| {
                let mut out = vec![0.0; s.len()];
                self.prob.perturbation.evaluate_into(t, s, &mut out);
                out
            })
            .collect()
    }

    /// `𝕎⁻¹ [x₁ − Φ(t₁,t₀)x₀ − ∫ Φ(t₁,τ) F dτ]`; shared by every grid time.
    fn multiplier(&self, f_samples: &[Vec<f64>]) -> Vec<f64> {
        let grid = &self.data.grid;
        let h = self.prob.horizon.step();
        let mut integral = CompensatedSum::new(self.prob.sys.n());
        for (k, (w, f)) in self.simpson.iter().zip(f_samples).enumerate() {
            if !self.prob.perturbation.is_zero() {
                integral.add_scaled(w * h, &grid.to_final(k).matvec(f));
            }
        }
        let free = grid.to_final(0).matvec(&self.prob.x0);
        let rhs: Vec<f64> = self
            .prob
            .x1
            .iter()
            .zip(&free)
            .zip(integral.total())
            .map(|((x1, fr), int)| x1 - fr - int)
            .collect();
        self.data.factor.solve(&rhs).expect("rhs has system dimension")
    }

    fn control_from(&self, to_final: &DenseMatrix, lambda: &[f64]) -> Vec<f64> {
        self.prob.sys.psi().tr_matvec(&to_final.tr_matvec(lambda))
    }

    /// `ũ(X, t_k)` at every grid time.
    pub fn controls(&self, x: &Trajectory) -> Vec<Vec<f64>> {
        let lambda = self.multiplier(&self.perturbation_samples(x));
        (0..x.states.len())
            .map(|k| self.control_from(self.data.grid.to_final(k), &lambda))
            .collect()
    }

    /// `𝒦X` together with the control samples `ũ(X, ·)` that produced it.
    pub fn apply(&self, x: &Trajectory) -> (Trajectory, Vec<Vec<f64>>) {
        let prob = self.prob;
        let grid = &self.data.grid;
        let n = prob.sys.n();
        let h = prob.horizon.step();
        let f_samples = self.perturbation_samples(x);
        let lambda = self.multiplier(&f_samples);
        let controls: Vec<Vec<f64>> = (0..x.states.len())
            .map(|k| self.control_from(grid.to_final(k), &lambda))
            .collect();

        // forcing Ψũ + F at each node
        let forcing: Vec<Vec<f64>> = controls
            .iter()
            .zip(&f_samples)
            .map(|(u, f)| {
                let mut v = prob.sys.psi().matvec(u);
                v.iter_mut().zip(f).for_each(|(a, b)| *a += b);
                v
            })
            .collect();

        let mut states = Vec::with_capacity(x.states.len());
        states.push(prob.x0.clone());
        for k in 1..x.states.len() {
            let mut acc = CompensatedSum::new(n);
            acc.add_scaled(1.0, &grid.power(k).matvec(&prob.x0));
            if k == 1 {
                // one step: Simpson with a midpoint from the linear interpolant of X
                let t_mid = x.times[0] + 0.5 * h;
                let x_mid: Vec<f64> = x.states[0]
                    .iter()
                    .zip(&x.states[1])
                    .map(|(a, b)| 0.5 * (a + b))
                    .collect();
                let mut v_mid = prob.sys.psi().matvec(&self.control_from(&self.final_from_mid, &lambda));
                let mut f_mid = vec![0.0; n];
                prob.perturbation.evaluate_into(t_mid, &x_mid, &mut f_mid);
                v_mid.iter_mut().zip(&f_mid).for_each(|(a, b)| *a += b);
                acc.add_scaled(h / 6.0, &grid.power(1).matvec(&forcing[0]));
                acc.add_scaled(4.0 * h / 6.0, &grid.half_step().matvec(&v_mid));
                acc.add_scaled(h / 6.0, &forcing[1]);
            } else {
                for (j, w) in self.partial[k].iter().enumerate() {
                    acc.add_scaled(w * h, &grid.power(k - j).matvec(&forcing[j]));
                }
            }
            states.push(acc.total());
        }
        (
            Trajectory {
                times: x.times.clone(),
                states,
            },
            controls,
        )
    }
}

/// Control samples `ũ(X, t_k)` for a given trajectory.
pub fn synthesize_control(prob: &SteeringProblem, x: &Trajectory) -> Result<Vec<Vec<f64>>> {
    Ok(SolutionMap::new(prob)?.controls(x))
}

/// `(𝒦X)(t_k)` at every grid time.
pub fn apply_solution_map(prob: &SteeringProblem, x: &Trajectory) -> Result<Trajectory> {
    Ok(SolutionMap::new(prob)?.apply(x).0)
}

/// Outcome of the Picard iteration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SteeringResult {
    pub trajectory: Trajectory,
    /// `ũ` at each grid time, the control that generated `trajectory`.
    pub controls: Vec<Vec<f64>>,
    pub iterations: usize,
    /// Sup-norm gaps between successive iterates.
    pub successive_deltas: Vec<f64>,
    /// Grid-`L²` gaps between successive iterates.
    pub successive_deltas_l2: Vec<f64>,
    pub converged: bool,
    pub terminal_error_fixed_point: f64,
    pub terminal_error_simulated: f64,
}

/// Iterates `X ← 𝒦X` from the straight-line guess until the sup-norm gap
/// drops to `fp_tolerance` or the iteration budget is spent.
///
/// Running out of iterations is reported through `converged = false`, not as
/// an error.
pub fn picard_solve(prob: &SteeringProblem) -> Result<SteeringResult> {
    let map = SolutionMap::new(prob)?;
    let mut x = prob.initial_trajectory();
    let mut controls = map.controls(&x);
    let mut deltas = Vec::new();
    let mut deltas_l2 = Vec::new();
    let mut converged = false;
    for _ in 0..prob.max_iterations.max(1) {
        let (next, u) = map.apply(&x);
        let delta = next.sup_distance(&x);
        deltas.push(delta);
        deltas_l2.push(next.l2_distance(&x));
        x = next;
        controls = u;
        if delta <= prob.fp_tolerance {
            converged = true;
            break;
        }
    }
    let terminal_error_fixed_point = norm2(&sub_vec(x.terminal(), &prob.x1));
    let mut result = SteeringResult {
        trajectory: x,
        controls,
        iterations: deltas.len(),
        successive_deltas: deltas,
        successive_deltas_l2: deltas_l2,
        converged,
        terminal_error_fixed_point,
        terminal_error_simulated: f64::NAN,
    };
    result.terminal_error_simulated = simulate_verify(prob, &result);
    Ok(result)
}

/// Control reconstructed between grid samples.
struct ControlSignal<'a> {
    times: &'a [f64],
    samples: &'a [Vec<f64>],
    mode: ControlInterpolation,
}

impl ControlSignal<'_> {
    fn at(&self, t: f64, out: &mut [f64]) {
        let k = self.times.len() - 1;
        let (t0, t1) = (self.times[0], self.times[k]);
        let h = (t1 - t0) / k as f64;
        let pos = ((t - t0) / h).clamp(0.0, k as f64);
        let j = (pos.floor() as usize).min(k.saturating_sub(1));
        match self.mode {
            ControlInterpolation::Linear => {
                if k == 0 {
                    out.copy_from_slice(&self.samples[0]);
                    return;
                }
                let s = pos - j as f64;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (1.0 - s) * self.samples[j][i] + s * self.samples[j + 1][i];
                }
            }
            ControlInterpolation::Cubic => {
                let count = (k + 1).min(4);
                let start = j.saturating_sub(1).min(k + 1 - count);
                out.iter_mut().for_each(|o| *o = 0.0);
                for a in start..start + count {
                    let mut basis = 1.0;
                    for b in start..start + count {
                        if b != a {
                            basis *= (pos - b as f64) / (a as f64 - b as f64);
                        }
                    }
                    for (o, s) in out.iter_mut().zip(&self.samples[a]) {
                        *o += basis * s;
                    }
                }
            }
        }
    }
}

/// Integrates `ẋ = 𝒜x + Ψu(t) + F(t, x)` from `x₀` with classical RK4 on a
/// grid `sim_refinement` times finer than the horizon grid and returns
/// `‖x(t₁) − x₁‖₂`.
pub fn simulate_verify(prob: &SteeringProblem, result: &SteeringResult) -> f64 {
    let x_end = simulate(prob, &result.trajectory.times, &result.controls, prob.sim_refinement);
    norm2(&sub_vec(&x_end, &prob.x1))
}

/// Terminal state of the RK4 simulation under the sampled control.
pub fn simulate(prob: &SteeringProblem, times: &[f64], controls: &[Vec<f64>], refinement: usize) -> Vec<f64> {
    let sys = &prob.sys;
    let n = sys.n();
    let signal = ControlSignal {
        times,
        samples: controls,
        mode: prob.interpolation,
    };
    let steps = prob.horizon.intervals() * refinement.max(1);
    let dt = prob.horizon.length() / steps as f64;
    let mut u = vec![0.0; sys.p()];
    let mut fx = vec![0.0; n];
    let mut rhs = |t: f64, x: &[f64]| -> Vec<f64> {
        signal.at(t, &mut u);
        prob.perturbation.evaluate_into(t, x, &mut fx);
        let mut d = sys.a().matvec(x);
        let bu = sys.psi().matvec(&u);
        for i in 0..n {
            d[i] += bu[i] + fx[i];
        }
        d
    };
    let axpy = |x: &[f64], s: f64, k: &[f64]| -> Vec<f64> { x.iter().zip(k).map(|(a, b)| a + s * b).collect() };

    let mut x = prob.x0.clone();
    for step in 0..steps {
        let t = prob.horizon.t0() + step as f64 * dt;
        let k1 = rhs(t, &x);
        let k2 = rhs(t + 0.5 * dt, &axpy(&x, 0.5 * dt, &k1));
        let k3 = rhs(t + 0.5 * dt, &axpy(&x, 0.5 * dt, &k2));
        let k4 = rhs(t + dt, &axpy(&x, dt, &k3));
        for i in 0..n {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    x
}

/// Sampled check of `‖𝒦X − 𝒦Y‖ ≤ M ‖X − Y‖^ρ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    pub pairs: usize,
    pub seed: u64,
    pub amplitude: f64,
    pub m: f64,
    pub rho: f64,
    /// Largest ratio in the sup-over-grid norm, the norm used for the bound.
    pub max_ratio_sup: f64,
    /// Largest ratio in the grid `L²` norm.
    pub max_ratio_l2: f64,
    pub bound: f64,
    pub within_bound: bool,
}

/// Draws `pairs` trajectory pairs around the straight-line guess (uniform
/// perturbations of half-width `amplitude` at every grid node) and compares
/// the observed Hölder ratio of `𝒦` with `M` computed from the declared `α`.
pub fn verify_contraction(
    prob: &SteeringProblem,
    pairs: usize,
    seed: u64,
    amplitude: f64,
) -> Result<ContractionReport> {
    let map = SolutionMap::new(prob)?;
    let bounds = map.gramian().bounds(&prob.sys);
    let rho = prob.perturbation.rho();
    let m = compute_m(&bounds, prob.perturbation.alpha_declared(), &prob.horizon);
    let base = prob.initial_trajectory();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = |rng: &mut ChaCha8Rng| {
        let mut t = base.clone();
        for s in t.states.iter_mut() {
            for v in s.iter_mut() {
                *v += amplitude * rng.gen_range(-1.0..=1.0);
            }
        }
        t
    };

    let (mut max_sup, mut max_l2): (f64, f64) = (0.0, 0.0);
    for _ in 0..pairs {
        let x = jitter(&mut rng);
        let y = jitter(&mut rng);
        let (kx, _) = map.apply(&x);
        let (ky, _) = map.apply(&y);
        let d_sup = x.sup_distance(&y);
        let d_l2 = x.l2_distance(&y);
        if d_sup > 0.0 {
            max_sup = max_sup.max(kx.sup_distance(&ky) / d_sup.powf(rho));
        }
        if d_l2 > 0.0 {
            max_l2 = max_l2.max(kx.l2_distance(&ky) / d_l2.powf(rho));
        }
    }
    let bound = m * (1.0 + CONTRACTION_SLACK);
    Ok(ContractionReport {
        pairs,
        seed,
        amplitude,
        m,
        rho,
        max_ratio_sup: max_sup,
        max_ratio_l2: max_l2,
        bound,
        within_bound: max_sup <= bound,
    })
}
