//! The stacked nonlinearity `F(t, X)`, its Hölder data and the contraction
//! condition `M t^ρ < t` on the solution map.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::controllability::{BoundsEstimate, TimeHorizon};
use crate::error::{Error, Result};
use crate::linalg::norm2;
use crate::network::NetworkedSystem;

/// Builtin node-level nonlinearity, applied componentwise to the node state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NodeNonlinearity {
    /// `f ≡ 0`.
    Zero,
    /// `gain · sin(x)`.
    ScaledSine { gain: f64 },
    /// `gain · clamp(x, −limit, limit)`.
    Saturation { gain: f64, limit: f64 },
    /// `gain · √|x|`, Hölder with exponent 1/2.
    SqrtSublinear { gain: f64 },
    /// `offset + amplitude · sin(frequency · t) + slope · tanh(x)`.
    AffineBounded {
        slope: f64,
        offset: f64,
        amplitude: f64,
        frequency: f64,
    },
}

impl NodeNonlinearity {
    #[inline]
    fn apply(&self, t: f64, x: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::ScaledSine { gain } => gain * x.sin(),
            Self::Saturation { gain, limit } => gain * x.clamp(-limit, limit),
            Self::SqrtSublinear { gain } => gain * x.abs().sqrt(),
            Self::AffineBounded {
                slope,
                offset,
                amplitude,
                frequency,
            } => offset + amplitude * (frequency * t).sin() + slope * x.tanh(),
        }
    }

    fn params_finite(&self) -> bool {
        match *self {
            Self::Zero => true,
            Self::ScaledSine { gain } | Self::SqrtSublinear { gain } => gain.is_finite(),
            Self::Saturation { gain, limit } => gain.is_finite() && limit.is_finite() && limit >= 0.0,
            Self::AffineBounded {
                slope,
                offset,
                amplitude,
                frequency,
            } => [slope, offset, amplitude, frequency].iter().all(|v| v.is_finite()),
        }
    }

    /// Known Hölder constant of the block map on `ℝ^dim` (Euclidean norm).
    pub fn holder_constant(&self, rho: f64, dim: usize) -> Option<f64> {
        match *self {
            Self::Zero => Some(0.0),
            Self::ScaledSine { gain } | Self::Saturation { gain, .. } if rho == 1.0 => Some(gain.abs()),
            Self::AffineBounded { slope, .. } if rho == 1.0 => Some(slope.abs()),
            // Σ(√|xᵢ|−√|yᵢ|)² ≤ Σ|xᵢ−yᵢ| ≤ √dim ‖x−y‖
            Self::SqrtSublinear { gain } if rho == 0.5 => Some(gain.abs() * (dim as f64).powf(0.25)),
            _ => None,
        }
    }
}

/// Stacked perturbation `F(t, X) = [f₁(t, x₁), …, f_N(t, x_N)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    nodes: Vec<NodeNonlinearity>,
    offsets: Vec<(usize, usize)>,
    rho: f64,
    alpha_declared: f64,
}

impl Perturbation {
    /// One nonlinearity per block of `sys`.
    pub fn new(
        sys: &NetworkedSystem,
        nodes: Vec<NodeNonlinearity>,
        rho: f64,
        alpha_declared: f64,
    ) -> Result<Self> {
        let blocks = sys.blocks();
        if nodes.len() != blocks.len() {
            return Err(Error::DimensionMismatch {
                what: "perturbation node count".into(),
                expected: blocks.len(),
                found: nodes.len(),
            });
        }
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::InvalidParameter(format!("Hölder exponent {rho} not in (0, 1]")));
        }
        if !(alpha_declared >= 0.0) || !alpha_declared.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "declared Hölder constant {alpha_declared} must be finite and non-negative"
            )));
        }
        if let Some(pos) = nodes.iter().position(|f| !f.params_finite()) {
            return Err(Error::InvalidParameter(format!(
                "node {} has non-finite or invalid perturbation parameters",
                pos + 1
            )));
        }
        Ok(Self {
            nodes,
            offsets: blocks.iter().map(|b| (b.state, b.n)).collect(),
            rho,
            alpha_declared,
        })
    }

    /// Zero perturbation for `sys` with `α = 0`, `ρ = 1`.
    pub fn zero(sys: &NetworkedSystem) -> Self {
        Self::new(sys, vec![NodeNonlinearity::Zero; sys.blocks().len()], 1.0, 0.0)
            .expect("zero perturbation is valid")
    }

    pub fn nodes(&self) -> &[NodeNonlinearity] {
        &self.nodes
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha_declared(&self) -> f64 {
        self.alpha_declared
    }

    pub fn dim(&self) -> usize {
        self.offsets.last().map_or(0, |(o, n)| o + n)
    }

    pub fn is_zero(&self) -> bool {
        self.nodes.iter().all(|f| *f == NodeNonlinearity::Zero)
    }

    /// `F(t, X)`.
    pub fn evaluate(&self, t: f64, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                what: "perturbation state".into(),
                expected: self.dim(),
                found: x.len(),
            });
        }
        let mut out = vec![0.0; x.len()];
        self.evaluate_into(t, x, &mut out);
        Ok(out)
    }

    pub(crate) fn evaluate_into(&self, t: f64, x: &[f64], out: &mut [f64]) {
        for (f, &(off, n)) in self.nodes.iter().zip(&self.offsets) {
            for k in off..off + n {
                out[k] = f.apply(t, x[k]);
            }
        }
    }

    /// Analytic Hölder constant of the stacked map for exponent `rho`, when
    /// every node's constant is known.
    ///
    /// For `ρ < 1` the node constants combine with a factor `N^{(1−ρ)/2}`.
    pub fn analytic_constant(&self, rho: f64) -> Option<f64> {
        let mut worst: f64 = 0.0;
        for (f, &(_, n)) in self.nodes.iter().zip(&self.offsets) {
            worst = worst.max(f.holder_constant(rho, n)?);
        }
        if worst == 0.0 || rho == 1.0 {
            Some(worst)
        } else {
            Some(worst * (self.nodes.len() as f64).powf(0.5 * (1.0 - rho)))
        }
    }
}

/// Sampling region for Hölder-constant estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBox {
    /// Per-component `[lo, hi]`.
    pub bounds: Vec<(f64, f64)>,
    /// Time range sampled alongside the state.
    pub time: (f64, f64),
}

impl SampleBox {
    pub fn uniform(n: usize, lo: f64, hi: f64, time: (f64, f64)) -> Self {
        Self {
            bounds: vec![(lo, hi); n],
            time,
        }
    }
}

fn sample(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Empirical lower bound on the Hölder constant: the largest ratio
/// `‖F(t,X) − F(t,Y)‖ / ‖X − Y‖^ρ` over `samples` random pairs in the box.
///
/// The sample stream depends only on `seed`, so more samples never lower the
/// estimate.
pub fn estimate_holder_constant(
    f: &Perturbation,
    rho: f64,
    region: &SampleBox,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least 2 samples".into()));
    }
    let n = f.dim();
    if region.bounds.len() != n {
        return Err(Error::DimensionMismatch {
            what: "sample box".into(),
            expected: n,
            found: region.bounds.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut fx = vec![0.0; n];
    let mut fy = vec![0.0; n];
    let mut best: f64 = 0.0;
    for _ in 0..samples {
        let t = sample(&mut rng, region.time);
        for (k, &b) in region.bounds.iter().enumerate() {
            x[k] = sample(&mut rng, b);
            y[k] = sample(&mut rng, b);
        }
        let dist = norm2(&crate::linalg::sub_vec(&x, &y));
        if dist == 0.0 {
            continue;
        }
        f.evaluate_into(t, &x, &mut fx);
        f.evaluate_into(t, &y, &mut fy);
        let ratio = norm2(&crate::linalg::sub_vec(&fx, &fy)) / dist.powf(rho);
        best = best.max(ratio);
    }
    Ok(best)
}

/// `M = α α₀² β γ δ (t₁ − t₀) + α α₀`.
pub fn compute_m(bounds: &BoundsEstimate, alpha: f64, horizon: &TimeHorizon) -> f64 {
    let b = bounds;
    alpha * b.alpha0 * b.alpha0 * b.beta * b.gamma * b.delta * horizon.length() + alpha * b.alpha0
}

/// Open interval `(low, high)`; `high = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub low: f64,
    pub high: Option<f64>,
}

/// Verdict on `χ(t) = M t^ρ < t` for all `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContractionData {
    pub m: f64,
    pub rho: f64,
    pub satisfied_globally: bool,
    /// Where `M t^ρ < t` holds; `None` when nowhere.
    pub valid_interval: Option<Interval>,
}

pub fn check_boyd_wong(m: f64, rho: f64) -> Result<ContractionData> {
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::InvalidParameter(format!("M = {m} must be finite and non-negative")));
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(Error::InvalidParameter(format!("Hölder exponent {rho} not in (0, 1]")));
    }
    let everywhere = Some(Interval { low: 0.0, high: None });
    let (satisfied_globally, valid_interval) = if m == 0.0 {
        (true, everywhere)
    } else if rho == 1.0 {
        if m < 1.0 {
            (true, everywhere)
        } else {
            (false, None)
        }
    } else {
        // M t^ρ < t  ⟺  t > M^{1/(1−ρ)}
        let low = m.powf(1.0 / (1.0 - rho));
        (false, Some(Interval { low, high: None }))
    };
    Ok(ContractionData {
        m,
        rho,
        satisfied_globally,
        valid_interval,
    })
}

/// Where the Hölder constant fed into `M` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaSource {
    Declared,
    Estimated,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaChoice {
    pub value: f64,
    pub source: AlphaSource,
    pub declared: Option<f64>,
    pub estimated: Option<f64>,
    #[serde(skip)]
    pub warning: Option<String>,
}

/// Relative excess of the sampled constant over the declared one that
/// triggers a warning.
pub const ALPHA_WARN_EXCESS: f64 = 0.01;

/// Declared `α` wins; the sampled estimate is used only when nothing was
/// declared. A declaration exceeded by the estimate by more than 1 % is
/// reported.
pub fn resolve_alpha(declared: Option<f64>, estimated: Option<f64>) -> Result<AlphaChoice> {
    let (value, source) = match (declared, estimated) {
        (Some(d), _) => (d, AlphaSource::Declared),
        (None, Some(e)) => (e, AlphaSource::Estimated),
        (None, None) => {
            return Err(Error::InvalidParameter(
                "no declared or estimated Hölder constant".into(),
            ))
        }
    };
    let warning = match (declared, estimated) {
        (Some(d), Some(e)) if e > d * (1.0 + ALPHA_WARN_EXCESS) => Some(format!(
            "sampled Hölder constant {e} exceeds declared alpha {d}; the contraction hypothesis may not hold"
        )),
        _ => None,
    };
    Ok(AlphaChoice {
        value,
        source,
        declared,
        estimated,
        warning,
    })
}
