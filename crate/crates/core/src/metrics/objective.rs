use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::Arch;
use crate::sim::Complexity;

/// Mean Meyer-Wallach entanglement of a Haar-random pure state,
/// `(N - 2)/(N + 1)` with `N = 2^n`; the entanglement threshold.
pub fn haar_mean_entanglement(num_qubits: usize) -> f64 {
    let dim = (1u128 << num_qubits) as f64;
    (dim - 2.0) / (dim + 1.0)
}

/// Threshold and cap set driving the search objective for one
/// architecture and qubit count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSet {
    pub expr_thr: f64,
    pub expr_max: f64,
    pub entgl_thr: f64,
    pub params_max: usize,
    pub depth_max: usize,
    pub gates_max: usize,
}

impl ThresholdSet {
    /// The published threshold set: caps scale as (q, 3q, 5q); the
    /// expressibility thresholds and worst cases are the values the
    /// evaluation tables were scored with.
    pub fn standard(arch: Arch, num_qubits: usize) -> Self {
        let (expr_thr, expr_max) = match arch {
            Arch::Hybrid => (0.016, 4.0_f64.ln()),
            Arch::Regular => match num_qubits {
                2 => (0.021, 12.95),
                3 => (0.02, 30.22),
                4 => (0.019, 69.08),
                _ => (0.013, 69.08),
            },
        };
        ThresholdSet {
            expr_thr,
            expr_max,
            entgl_thr: haar_mean_entanglement(num_qubits),
            params_max: num_qubits,
            depth_max: 3 * num_qubits,
            gates_max: 5 * num_qubits,
        }
    }

    pub fn complexity_within_caps(&self, c: &Complexity) -> bool {
        c.params <= self.params_max && c.depth <= self.depth_max && c.gates <= self.gates_max
    }
}

/// The composite objective. Expressibility or entanglement shortfalls
/// put the value at `1 + shortfalls`; once both thresholds pass, the
/// normalized complexity in [0, 1] takes over. Infinite expressibility
/// propagates.
pub fn objective_lpqc(expr: f64, entgl: f64, complexity: Complexity, thr: &ThresholdSet) -> f64 {
    if expr.is_infinite() {
        return f64::INFINITY;
    }
    let l_expr = ((expr - thr.expr_thr) / (thr.expr_max - thr.expr_thr)).max(0.0);
    let l_entgl = ((thr.entgl_thr - entgl) / thr.entgl_thr).max(0.0);
    if l_expr + l_entgl != 0.0 {
        1.0 + l_expr + l_entgl
    } else {
        (complexity.gates + complexity.params + complexity.depth) as f64
            / (thr.gates_max + thr.params_max + thr.depth_max) as f64
    }
}

/// How the perturbation in [`derive_expr_threshold`] scales per bin.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseScale {
    /// Noise of standard deviation `sigma` added to each bin mass;
    /// suits few-bin class targets.
    Absolute,
    /// Noise proportional to the bin mass; suits many-bin fidelity
    /// targets.
    Relative,
}

/// Expressibility threshold from noise calibration: average KL between
/// a Gaussian-perturbed copy of `target` (clamped at zero and
/// renormalized) and `target` itself.
pub fn derive_expr_threshold<R: Rng>(
    target: &[f64],
    sigma_std: f64,
    num_draws: usize,
    scale: NoiseScale,
    rng: &mut R,
) -> f64 {
    assert!(sigma_std > 0.0, "sigma must be positive");
    let normal = Normal::new(0.0, sigma_std).expect("valid sigma");
    let mut acc = 0.0;
    for _ in 0..num_draws {
        let mut noised: Vec<f64> = target
            .iter()
            .map(|&p| {
                let eps: f64 = normal.sample(rng);
                let shift = match scale {
                    NoiseScale::Absolute => eps,
                    NoiseScale::Relative => eps * p,
                };
                (p + shift).max(0.0)
            })
            .collect();
        let total: f64 = noised.iter().sum();
        for v in &mut noised {
            *v /= total;
        }
        acc += super::kl_divergence(&noised, target);
    }
    acc / num_draws as f64
}
