use serde::{Deserialize, Serialize};

/// Binning setup for the fidelity-based expressibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramConfig {
    pub num_bins: usize,
    pub epsilon_bin: f64,
}

impl HistogramConfig {
    /// 75 bins; the full distribution is kept below 9 qubits and the
    /// 9-qubit support is cut at 1e-30.
    pub fn standard(num_qubits: usize) -> Self {
        HistogramConfig {
            num_bins: 75,
            epsilon_bin: if num_qubits >= 9 { 1e-30 } else { 0.0 },
        }
    }
}

/// Discretized Haar pair-fidelity law `P(F) = (N-1)(1-F)^{N-2}` over
/// `num_bins` equal bins of [0, 1], truncated so that every retained bin
/// has probability at least `epsilon_bin` and renormalized.
///
/// Bin probabilities decrease with F (for more than one qubit), so the
/// cut removes a suffix of high-fidelity bins; a sampled fidelity beyond
/// the retained range is outside the support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FidelityHistogram {
    pub num_bins: usize,
    pub retained: usize,
    /// Renormalized probabilities of the retained bins.
    pub probs: Vec<f64>,
    pub epsilon_bin: f64,
    pub truncated: bool,
}

impl FidelityHistogram {
    /// Build the discretized Haar target for `num_qubits`.
    pub fn haar(num_qubits: usize, cfg: HistogramConfig) -> Self {
        assert!(cfg.num_bins >= 2, "need at least two bins");
        let b = cfg.num_bins;
        let dim_exp = (1u128 << num_qubits) - 1; // N - 1
        // bin k mass: (1 - k/B)^(N-1) - (1 - (k+1)/B)^(N-1)
        let upper = |k: usize| (1.0 - k as f64 / b as f64).powf(dim_exp as f64);
        let mut probs: Vec<f64> = (0..b).map(|k| upper(k) - upper(k + 1)).collect();

        let mut retained = b;
        while retained > 1 && probs[retained - 1] < cfg.epsilon_bin {
            retained -= 1;
        }
        let truncated = retained < b;
        probs.truncate(retained);
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        FidelityHistogram {
            num_bins: b,
            retained,
            probs,
            epsilon_bin: cfg.epsilon_bin,
            truncated,
        }
    }

    /// Bin index for a fidelity, or `None` when outside the truncated
    /// support. F = 1 belongs to the last bin.
    pub fn bin_of(&self, fidelity: f64) -> Option<usize> {
        let idx = ((fidelity * self.num_bins as f64) as usize).min(self.num_bins - 1);
        (idx < self.retained).then_some(idx)
    }

    /// KL divergence of a point mass in the least likely retained bin
    /// against this target; the worst finite expressibility value.
    pub fn worst_case_kl(&self) -> f64 {
        let min = self.probs.iter().cloned().fold(f64::INFINITY, f64::min);
        -min.ln()
    }
}

/// `D_KL(P || Q)` over matching supports. Empirical zeros contribute
/// nothing; empirical mass on a zero-probability target bin gives
/// infinity.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    let mut kl = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return f64::INFINITY;
        }
        kl += pi * (pi / qi).ln();
    }
    kl.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn one_qubit_is_uniform() {
        let h = FidelityHistogram::haar(
            1,
            HistogramConfig {
                num_bins: 75,
                epsilon_bin: 0.0,
            },
        );
        assert!(!h.truncated);
        for &p in &h.probs {
            assert_abs_diff_eq!(p, 1.0 / 75.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn nine_qubits_truncates() {
        let h = FidelityHistogram::haar(9, HistogramConfig::standard(9));
        assert!(h.truncated);
        assert!(h.retained < 75);
        assert_abs_diff_eq!(h.probs.iter().sum::<f64>(), 1.0, epsilon = 1e-9);
        // every retained bin respects the floor (before renormalizing,
        // the floor can only grow after renormalizing)
        for &p in &h.probs {
            assert!(p >= h.epsilon_bin);
        }
        // a fidelity in the cut range is out of support
        assert!(h.bin_of(0.9).is_none());
        assert!(h.bin_of(0.0).is_some());
    }

    #[test]
    fn worst_case_point_mass_values() {
        // delta in the top bin vs the 75-bin target
        let h2 = FidelityHistogram::haar(2, HistogramConfig::standard(2));
        let mut point = vec![0.0; h2.retained];
        point[h2.retained - 1] = 1.0;
        let kl2 = kl_divergence(&point, &h2.probs);
        assert_abs_diff_eq!(kl2, 12.95, epsilon = 0.01);
        assert_abs_diff_eq!(h2.worst_case_kl(), kl2, epsilon = 1e-9);

        let h3 = FidelityHistogram::haar(3, HistogramConfig::standard(3));
        let mut point = vec![0.0; h3.retained];
        point[h3.retained - 1] = 1.0;
        assert_abs_diff_eq!(kl_divergence(&point, &h3.probs), 30.22, epsilon = 0.01);
    }

    #[test]
    fn kl_properties() {
        let p = vec![0.25, 0.25, 0.25, 0.25];
        assert_abs_diff_eq!(kl_divergence(&p, &p), 0.0);
        let q = vec![0.4, 0.3, 0.2, 0.1];
        assert!(kl_divergence(&q, &p) > 0.0);
        let zero_target = vec![0.5, 0.5, 0.0, 0.0];
        assert!(kl_divergence(&p, &zero_target).is_infinite());
    }

    #[test]
    fn fidelity_one_lands_in_last_bin() {
        let h = FidelityHistogram::haar(2, HistogramConfig::standard(2));
        assert_eq!(h.bin_of(1.0), Some(74));
        assert_eq!(h.bin_of(0.0), Some(0));
    }
}
