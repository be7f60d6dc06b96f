use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::sim::SimError;

/// Bin-based single-output classification: the unit interval split into
/// `num_classes` equal bins, each class regressing toward its bin
/// center, with Gaussian label noise during training.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BsocSpec {
    pub num_classes: usize,
    pub label_noise: f64,
}

impl BsocSpec {
    pub fn new(num_classes: usize) -> Self {
        assert!(num_classes >= 2);
        BsocSpec {
            num_classes,
            label_noise: 0.02,
        }
    }

    /// Center of class `i`: (2i + 1) / (2n).
    pub fn center(&self, class_index: usize) -> f64 {
        (2 * class_index + 1) as f64 / (2 * self.num_classes) as f64
    }
}

/// Noised regression target for a class: its bin center plus
/// N(0, sigma), clamped into [0, 1].
pub fn label_to_target<R: Rng>(
    class_index: usize,
    spec: &BsocSpec,
    rng: &mut R,
) -> Result<f64, SimError> {
    if class_index >= spec.num_classes {
        return Err(SimError::Contract(format!(
            "class {class_index} out of {}",
            spec.num_classes
        )));
    }
    let center = spec.center(class_index);
    if spec.label_noise == 0.0 {
        return Ok(center);
    }
    let noise: f64 = Normal::new(0.0, spec.label_noise)
        .expect("valid sigma")
        .sample(rng);
    Ok((center + noise).clamp(0.0, 1.0))
}

/// Mean absolute error.
pub fn mae_loss(targets: &[f64], predictions: &[f64]) -> Result<f64, SimError> {
    if targets.is_empty() || targets.len() != predictions.len() {
        return Err(SimError::DimensionMismatch(format!(
            "MAE over {} targets and {} predictions",
            targets.len(),
            predictions.len()
        )));
    }
    Ok(targets
        .iter()
        .zip(predictions)
        .map(|(t, p)| (t - p).abs())
        .sum::<f64>()
        / targets.len() as f64)
}

/// Class of an output value: the bin containing it, boundaries assigned
/// upward, 1.0 to the last bin.
pub fn predict_class(output: f64, spec: &BsocSpec) -> Result<usize, SimError> {
    if !(0.0..=1.0).contains(&output) {
        return Err(SimError::Contract(format!("output {output} outside [0, 1]")));
    }
    Ok(((output * spec.num_classes as f64) as usize).min(spec.num_classes - 1))
}
