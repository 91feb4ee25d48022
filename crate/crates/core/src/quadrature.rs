//! Quadrature weights on a uniform grid and compensated accumulation.

/// Composite Simpson weights for `intervals` (even) uniform steps, in units of
/// the step size.
pub fn simpson_weights(intervals: usize) -> Vec<f64> {
    assert!(intervals >= 2 && intervals % 2 == 0, "Simpson needs an even interval count");
    let mut w = vec![0.0; intervals + 1];
    for (j, wj) in w.iter_mut().enumerate() {
        *wj = if j == 0 || j == intervals {
            1.0 / 3.0
        } else if j % 2 == 1 {
            4.0 / 3.0
        } else {
            2.0 / 3.0
        };
    }
    w
}

/// Node weights (in units of the step) for `∫` over the first `k ≥ 2` steps:
/// composite Simpson when `k` is even, Simpson followed by a closing
/// three-eighths panel when `k` is odd.
pub fn node_weights(k: usize) -> Vec<f64> {
    assert!(k >= 2, "node rule needs at least two steps");
    if k % 2 == 0 {
        return simpson_weights(k);
    }
    let mut w = vec![0.0; k + 1];
    if k > 3 {
        for (j, s) in simpson_weights(k - 3).into_iter().enumerate() {
            w[j] += s;
        }
    }
    for (off, s) in [3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0].into_iter().enumerate() {
        w[k - 3 + off] += s;
    }
    w
}

/// Neumaier-compensated running sum of vectors.
#[derive(Debug, Clone)]
pub struct CompensatedSum {
    sum: Vec<f64>,
    comp: Vec<f64>,
}

impl CompensatedSum {
    pub fn new(len: usize) -> Self {
        Self {
            sum: vec![0.0; len],
            comp: vec![0.0; len],
        }
    }

    pub fn add_scaled(&mut self, s: f64, v: &[f64]) {
        for ((acc, c), &x) in self.sum.iter_mut().zip(self.comp.iter_mut()).zip(v) {
            let x = s * x;
            let t = *acc + x;
            if acc.abs() >= x.abs() {
                *c += (*acc - t) + x;
            } else {
                *c += (x - t) + *acc;
            }
            *acc = t;
        }
    }

    pub fn total(&self) -> Vec<f64> {
        self.sum.iter().zip(&self.comp).map(|(s, c)| s + c).collect()
    }
}
