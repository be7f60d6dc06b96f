//! MNIST-style ingestion: IDX parsing, preprocessing to angle-domain
//! images, dataset splits, and a deterministic synthetic digit source
//! for environments without the real files.

mod cache;
mod idx;
mod prepare;
mod synthetic;

pub use cache::{load_cache, save_cache, CacheSidecar};
pub use idx::{encode_idx, load_idx, load_idx_bytes, IdxError, RawDataset};
pub use prepare::{prepare, Pad, PreparedDataset, TaskSpec};
pub use synthetic::synthetic_zero_one;
