use std::path::PathBuf;

use anyhow::Context;
use qcnn_core::data::{load_idx, prepare, synthetic_zero_one, Pad, PreparedDataset, TaskSpec};

/// Where the dataset directory comes from.
pub const DATA_ENV: &str = "QCNN_FORGE_DATA";

/// Resolve a prepared dataset: IDX files from `$QCNN_FORGE_DATA` when
/// present, otherwise the deterministic synthetic 0-vs-1 set (only that
/// task has a synthetic source).
pub fn load_dataset(
    task: TaskSpec,
    pad: Pad,
    seed: u64,
    train_cap: usize,
    test_cap: usize,
    force_synthetic: bool,
) -> anyhow::Result<(PreparedDataset, &'static str)> {
    if !force_synthetic {
        if let Ok(dir) = std::env::var(DATA_ENV) {
            let dir = PathBuf::from(dir);
            let images = dir.join("train-images-idx3-ubyte");
            let labels = dir.join("train-labels-idx1-ubyte");
            if images.exists() && labels.exists() {
                let raw = load_idx(&images, &labels)
                    .with_context(|| format!("loading IDX files from {}", dir.display()))?;
                let prep = prepare(&raw, task, pad, seed, train_cap, test_cap)?;
                return Ok((prep, "idx"));
            }
            anyhow::bail!(
                "{DATA_ENV}={} does not contain train-images-idx3-ubyte / train-labels-idx1-ubyte",
                dir.display()
            );
        }
    }
    if task != TaskSpec::ZeroVsOne {
        anyhow::bail!(
            "task {:?} needs real IDX data; set {DATA_ENV} to the dataset directory",
            task
        );
    }
    // enough raw frames that the 80/20 split covers the caps
    let per_class = ((train_cap.max(1) + test_cap.max(1)) * 5 / 4 + 16).max(100);
    let raw = synthetic_zero_one(per_class, seed.wrapping_add(0x5e5e));
    let prep = prepare(&raw, task, pad, seed, train_cap, test_cap)?;
    Ok((prep, "synthetic"))
}
