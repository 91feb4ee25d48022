//! State transition matrices, the controllability Gramian, the Kalman rank
//! test and the norm bounds `α₀, β, γ, δ` feeding the contraction constant.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{column_pivoted_rank, mat_exp, spectral_norm, DenseMatrix, SpdFactor};
use crate::network::NetworkedSystem;
use crate::quadrature::simpson_weights;

/// Default number of quadrature intervals.
pub const DEFAULT_INTERVALS: usize = 200;

/// Relative column threshold for the Kalman rank.
pub const RANK_TOL: f64 = 1e-10;

/// Relative Gramian drift between `K` and `2K` intervals above which a
/// quadrature warning is raised.
pub const QUADRATURE_DRIFT_TOL: f64 = 1e-6;

/// Time interval `[t0, t1]` with an even number of uniform quadrature steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeHorizon {
    t0: f64,
    t1: f64,
    intervals: usize,
}

impl TimeHorizon {
    pub fn new(t0: f64, t1: f64, intervals: usize) -> Result<Self> {
        if !t0.is_finite() || !t1.is_finite() {
            return Err(Error::InvalidHorizon("endpoints must be finite".into()));
        }
        if t1 <= t0 {
            return Err(Error::InvalidHorizon(format!("t1 = {t1} must exceed t0 = {t0}")));
        }
        if intervals < 2 || intervals % 2 != 0 {
            return Err(Error::InvalidHorizon(format!(
                "interval count {intervals} must be even and at least 2"
            )));
        }
        Ok(Self { t0, t1, intervals })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn intervals(&self) -> usize {
        self.intervals
    }

    pub fn length(&self) -> f64 {
        self.t1 - self.t0
    }

    pub fn step(&self) -> f64 {
        self.length() / self.intervals as f64
    }

    /// Grid time `t_k`; the last point is exactly `t1`.
    pub fn time(&self, k: usize) -> f64 {
        if k == self.intervals {
            self.t1
        } else {
            self.t0 + k as f64 * self.step()
        }
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.intervals).map(|k| self.time(k)).collect()
    }

    /// Same interval with a different resolution.
    pub fn with_intervals(&self, intervals: usize) -> Result<Self> {
        Self::new(self.t0, self.t1, intervals)
    }
}

/// `Φ(t, τ) = exp(𝒜 (t − τ))`.
pub fn state_transition(sys: &NetworkedSystem, t: f64, tau: f64) -> DenseMatrix {
    mat_exp(sys.a(), t - tau).expect("system matrix is square")
}

/// Powers `exp(𝒜 j h)` for `j = 0..=K` on a uniform horizon, plus the half step.
///
/// Every transition matrix between grid points is one of these powers:
/// `Φ(t_k, t_j) = exp(𝒜 (k − j) h)`.
#[derive(Debug, Clone)]
pub struct TransitionGrid {
    horizon: TimeHorizon,
    powers: Vec<DenseMatrix>,
    half: DenseMatrix,
}

impl TransitionGrid {
    pub fn new(sys: &NetworkedSystem, horizon: &TimeHorizon) -> Self {
        let h = horizon.step();
        let a = sys.a();
        let step = mat_exp(a, h).expect("system matrix is square");
        let half = mat_exp(a, 0.5 * h).expect("system matrix is square");
        let mut powers = Vec::with_capacity(horizon.intervals() + 1);
        powers.push(DenseMatrix::identity(sys.n()));
        for j in 1..=horizon.intervals() {
            let next = &powers[j - 1] * &step;
            powers.push(next);
        }
        Self {
            horizon: *horizon,
            powers,
            half,
        }
    }

    pub fn horizon(&self) -> &TimeHorizon {
        &self.horizon
    }

    /// `exp(𝒜 · steps · h)`.
    pub fn power(&self, steps: usize) -> &DenseMatrix {
        &self.powers[steps]
    }

    /// `Φ(t₁, t_k)`.
    pub fn to_final(&self, k: usize) -> &DenseMatrix {
        &self.powers[self.horizon.intervals() - k]
    }

    /// `exp(𝒜 h / 2)`.
    pub fn half_step(&self) -> &DenseMatrix {
        &self.half
    }
}

/// Controllability Gramian `∫ Φ(t₁,τ) Ψ Ψᵀ Φᵀ(t₁,τ) dτ` by composite Simpson.
pub fn gramian(sys: &NetworkedSystem, horizon: &TimeHorizon) -> DenseMatrix {
    gramian_on_grid(sys, &TransitionGrid::new(sys, horizon))
}

pub fn gramian_on_grid(sys: &NetworkedSystem, grid: &TransitionGrid) -> DenseMatrix {
    let n = sys.n();
    let horizon = grid.horizon();
    let h = horizon.step();
    let psi = sys.psi();
    let weights = simpson_weights(horizon.intervals());

    // accumulate entrywise in ascending grid order
    let mut acc = crate::quadrature::CompensatedSum::new(n * n);
    for (k, w) in weights.iter().enumerate() {
        let phi_psi = grid.to_final(k) * psi;
        let term = &phi_psi * &phi_psi.transpose();
        acc.add_scaled(w * h, term.as_slice());
    }
    DenseMatrix::from_row_slice(n, n, &acc.total())
        .expect("n*n entries")
        .symmetrized()
}

/// `[Ψ, 𝒜Ψ, …, 𝒜^{n−1}Ψ]`.
pub fn kalman_matrix(sys: &NetworkedSystem) -> DenseMatrix {
    let (n, p) = (sys.n(), sys.p());
    let mut out = DenseMatrix::zeros(n, n * p);
    let mut block = sys.psi().clone();
    for k in 0..n {
        out.add_block(0, k * p, &block);
        block = sys.a() * &block;
    }
    out
}

/// Rank of the Kalman controllability matrix.
pub fn kalman_rank(sys: &NetworkedSystem) -> usize {
    column_pivoted_rank(&kalman_matrix(sys), RANK_TOL)
}

/// Grid estimates of the four norm bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsEstimate {
    /// `‖Φ(t₁, t₀)‖₂`.
    pub alpha0: f64,
    /// `‖ΨΨᵀ‖₂`.
    pub beta: f64,
    /// Max of `‖Φᵀ(t₁, t_k)‖₂` over the grid.
    pub gamma: f64,
    /// `1 / λ_min(𝕎)`.
    pub delta: f64,
    pub grid_used: usize,
}

/// Transition grid, Gramian and its factorization for one system and horizon.
#[derive(Debug, Clone)]
pub struct GramianData {
    pub grid: TransitionGrid,
    pub gramian: DenseMatrix,
    pub factor: SpdFactor,
}

impl GramianData {
    /// Fails with [`Error::NotControllable`] when the Gramian does not pass
    /// the positive-definiteness gate.
    pub fn new(sys: &NetworkedSystem, horizon: &TimeHorizon) -> Result<Self> {
        let grid = TransitionGrid::new(sys, horizon);
        let gramian = gramian_on_grid(sys, &grid);
        let factor = SpdFactor::new(&gramian).map_err(|e| match e {
            Error::NotPositiveDefinite { min_eig, max_eig } => {
                Error::NotControllable { min_eig, max_eig }
            }
            other => other,
        })?;
        Ok(Self {
            grid,
            gramian,
            factor,
        })
    }

    pub fn bounds(&self, sys: &NetworkedSystem) -> BoundsEstimate {
        let k = self.grid.horizon().intervals();
        let alpha0 = spectral_norm(self.grid.to_final(0));
        let beta = spectral_norm(&(sys.psi() * &sys.psi().transpose()));
        let gamma = (0..=k)
            .map(|j| spectral_norm(&self.grid.to_final(j).transpose()))
            .fold(0.0, f64::max);
        BoundsEstimate {
            alpha0,
            beta,
            gamma,
            delta: 1.0 / self.factor.min_eig(),
            grid_used: k,
        }
    }
}

/// The bounds `α₀, β, γ, δ` on the given horizon.
pub fn compute_bounds(sys: &NetworkedSystem, horizon: &TimeHorizon) -> Result<BoundsEstimate> {
    Ok(GramianData::new(sys, horizon)?.bounds(sys))
}

/// Relative change of the Gramian when the interval count is doubled.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureCheck {
    pub intervals: usize,
    pub relative_drift: f64,
    pub within_tolerance: bool,
}

/// Compares the Gramian on `K` and `2K` intervals, measured as the largest
/// entry difference over the largest entry magnitude.
pub fn quadrature_check(sys: &NetworkedSystem, horizon: &TimeHorizon) -> Result<QuadratureCheck> {
    let coarse = gramian(sys, horizon);
    let fine = gramian(sys, &horizon.with_intervals(2 * horizon.intervals())?);
    let scale = fine.max_abs();
    let relative_drift = if scale == 0.0 {
        0.0
    } else {
        coarse.max_abs_diff(&fine) / scale
    };
    Ok(QuadratureCheck {
        intervals: horizon.intervals(),
        relative_drift,
        within_tolerance: relative_drift <= QUADRATURE_DRIFT_TOL,
    })
}
