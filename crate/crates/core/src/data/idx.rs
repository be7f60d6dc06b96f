use std::io::Read;
use std::path::Path;

use byteorder::{BigEndian, ReadBytesExt};
use thiserror::Error;

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Error)]
pub enum IdxError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("wrong magic 0x{got:08x}, expected 0x{expected:08x}")]
    WrongMagic { got: u32, expected: u32 },
    #[error("truncated file: expected {expected} bytes of payload, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("count mismatch: {images} images vs {labels} labels")]
    CountMismatch { images: usize, labels: usize },
}

/// Raw byte-valued images with their digit labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDataset {
    pub rows: usize,
    pub cols: usize,
    pub images: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
}

fn parse_images(bytes: &[u8]) -> Result<(usize, usize, Vec<Vec<u8>>), IdxError> {
    let mut cur = std::io::Cursor::new(bytes);
    let magic = cur.read_u32::<BigEndian>()?;
    if magic != IMAGES_MAGIC {
        return Err(IdxError::WrongMagic {
            got: magic,
            expected: IMAGES_MAGIC,
        });
    }
    let count = cur.read_u32::<BigEndian>()? as usize;
    let rows = cur.read_u32::<BigEndian>()? as usize;
    let cols = cur.read_u32::<BigEndian>()? as usize;
    let payload = &bytes[16..];
    let expected = count * rows * cols;
    if payload.len() < expected {
        return Err(IdxError::Truncated {
            expected,
            got: payload.len(),
        });
    }
    let images = payload[..expected]
        .chunks(rows * cols)
        .map(|c| c.to_vec())
        .collect();
    Ok((rows, cols, images))
}

fn parse_labels(bytes: &[u8]) -> Result<Vec<u8>, IdxError> {
    let mut cur = std::io::Cursor::new(bytes);
    let magic = cur.read_u32::<BigEndian>()?;
    if magic != LABELS_MAGIC {
        return Err(IdxError::WrongMagic {
            got: magic,
            expected: LABELS_MAGIC,
        });
    }
    let count = cur.read_u32::<BigEndian>()? as usize;
    let payload = &bytes[8..];
    if payload.len() < count {
        return Err(IdxError::Truncated {
            expected: count,
            got: payload.len(),
        });
    }
    Ok(payload[..count].to_vec())
}

/// Parse a big-endian IDX image/label pair from raw bytes.
pub fn load_idx_bytes(images: &[u8], labels: &[u8]) -> Result<RawDataset, IdxError> {
    let (rows, cols, images) = parse_images(images)?;
    let labels = parse_labels(labels)?;
    if images.len() != labels.len() {
        return Err(IdxError::CountMismatch {
            images: images.len(),
            labels: labels.len(),
        });
    }
    Ok(RawDataset {
        rows,
        cols,
        images,
        labels,
    })
}

/// Load an IDX image/label file pair from disk.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<RawDataset, IdxError> {
    let mut images = Vec::new();
    std::fs::File::open(images_path)?.read_to_end(&mut images)?;
    let mut labels = Vec::new();
    std::fs::File::open(labels_path)?.read_to_end(&mut labels)?;
    load_idx_bytes(&images, &labels)
}

/// Encode a dataset back into IDX bytes (testing and caching).
pub fn encode_idx(data: &RawDataset) -> (Vec<u8>, Vec<u8>) {
    let mut images = Vec::with_capacity(16 + data.images.len() * data.rows * data.cols);
    images.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    images.extend_from_slice(&(data.images.len() as u32).to_be_bytes());
    images.extend_from_slice(&(data.rows as u32).to_be_bytes());
    images.extend_from_slice(&(data.cols as u32).to_be_bytes());
    for img in &data.images {
        images.extend_from_slice(img);
    }
    let mut labels = Vec::with_capacity(8 + data.labels.len());
    labels.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    labels.extend_from_slice(&(data.labels.len() as u32).to_be_bytes());
    labels.extend_from_slice(&data.labels);
    (images, labels)
}


#[cfg(test)]
mod disk_tests {
    use super::*;

    /// Checks the official test-split header when a dataset directory is
    /// configured; absent data, there is nothing to verify.
    #[test]
    fn t10k_files_have_ten_thousand_entries() {
        let Ok(dir) = std::env::var("QCNN_FORGE_DATA") else {
            return;
        };
        let dir = std::path::PathBuf::from(dir);
        let images = dir.join("t10k-images-idx3-ubyte");
        let labels = dir.join("t10k-labels-idx1-ubyte");
        if !images.exists() || !labels.exists() {
            return;
        }
        let data = load_idx(&images, &labels).unwrap();
        assert_eq!(data.images.len(), 10_000);
        assert_eq!((data.rows, data.cols), (28, 28));
    }
}
