use std::io::{Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use serde::{Deserialize, Serialize};

use super::prepare::{Pad, PreparedDataset, TaskSpec};
use crate::encodings::Image;
use crate::sim::SimError;

/// Sidecar describing the flat binary layout of a cached dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CacheSidecar {
    pub task: TaskSpec,
    pub pad: Pad,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    pub train_count: usize,
    pub test_count: usize,
    /// Angle scale of the stored values (pixels are angles in [0, pi)).
    pub scale: String,
}

const SCALE: &str = "radians[0,pi)";

fn write_split<W: Write>(out: &mut W, split: &[(Image, usize)]) -> std::io::Result<()> {
    for (image, label) in split {
        out.write_u32::<LittleEndian>(*label as u32)?;
        for &p in &image.pixels {
            out.write_f64::<LittleEndian>(p)?;
        }
    }
    Ok(())
}

fn read_split<R: Read>(
    input: &mut R,
    count: usize,
    rows: usize,
    cols: usize,
) -> std::io::Result<Vec<(Image, usize)>> {
    let mut split = Vec::with_capacity(count);
    for _ in 0..count {
        let label = input.read_u32::<LittleEndian>()? as usize;
        let mut pixels = vec![0.0; rows * cols];
        for p in &mut pixels {
            *p = input.read_f64::<LittleEndian>()?;
        }
        split.push((Image::new(rows, cols, pixels), label));
    }
    Ok(split)
}

/// Persist a prepared dataset as `<prefix>.bin` plus a `<prefix>.json`
/// sidecar.
pub fn save_cache(dataset: &PreparedDataset, prefix: &Path) -> Result<(), SimError> {
    let (rows, cols) = match dataset.train.first().or(dataset.test.first()) {
        Some((img, _)) => (img.rows, img.cols),
        None => return Err(SimError::Contract("empty dataset".into())),
    };
    let sidecar = CacheSidecar {
        task: dataset.task,
        pad: dataset.pad,
        seed: dataset.seed,
        rows,
        cols,
        train_count: dataset.train.len(),
        test_count: dataset.test.len(),
        scale: SCALE.to_string(),
    };
    let io = |e: std::io::Error| SimError::Contract(format!("cache io: {e}"));
    let mut bin = std::io::BufWriter::new(
        std::fs::File::create(prefix.with_extension("bin")).map_err(io)?,
    );
    write_split(&mut bin, &dataset.train).map_err(io)?;
    write_split(&mut bin, &dataset.test).map_err(io)?;
    bin.flush().map_err(io)?;
    std::fs::write(
        prefix.with_extension("json"),
        serde_json::to_string_pretty(&sidecar).expect("sidecar serializes"),
    )
    .map_err(io)?;
    Ok(())
}

/// Load a dataset cached by [`save_cache`].
pub fn load_cache(prefix: &Path) -> Result<PreparedDataset, SimError> {
    let io = |e: std::io::Error| SimError::Contract(format!("cache io: {e}"));
    let sidecar_text = std::fs::read_to_string(prefix.with_extension("json")).map_err(io)?;
    let sidecar: CacheSidecar = serde_json::from_str(&sidecar_text)
        .map_err(|e| SimError::Contract(format!("bad cache sidecar: {e}")))?;
    if sidecar.scale != SCALE {
        return Err(SimError::Contract(format!(
            "unsupported cache scale '{}'",
            sidecar.scale
        )));
    }
    let mut bin = std::io::BufReader::new(
        std::fs::File::open(prefix.with_extension("bin")).map_err(io)?,
    );
    let train = read_split(&mut bin, sidecar.train_count, sidecar.rows, sidecar.cols).map_err(io)?;
    let test = read_split(&mut bin, sidecar.test_count, sidecar.rows, sidecar.cols).map_err(io)?;
    Ok(PreparedDataset {
        task: sidecar.task,
        pad: sidecar.pad,
        seed: sidecar.seed,
        train,
        test,
    })
}
