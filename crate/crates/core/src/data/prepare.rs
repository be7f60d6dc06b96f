use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::idx::RawDataset;
use crate::encodings::Image;
use crate::sim::SimError;

/// Pixel-to-angle scale: 255 maps just under pi, keeping the half-open
/// encoding domain.
const ANGLE_DELTA: f64 = 1e-6;

/// The classification tasks: which digits are kept and how they map to
/// class bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskSpec {
    ZeroVsOne,
    SevenVsEight,
    GreaterThanFour,
    Digits0to3,
}

impl TaskSpec {
    pub fn parse(s: &str) -> Option<TaskSpec> {
        match s.to_ascii_lowercase().as_str() {
            "0v1" | "zero-vs-one" | "01" => Some(TaskSpec::ZeroVsOne),
            "7v8" | "seven-vs-eight" | "78" => Some(TaskSpec::SevenVsEight),
            "g4" | "gt4" | "greater-than-four" => Some(TaskSpec::GreaterThanFour),
            "0-3" | "0123" | "digits-0-3" => Some(TaskSpec::Digits0to3),
            _ => None,
        }
    }

    pub fn num_classes(self) -> usize {
        match self {
            TaskSpec::Digits0to3 => 4,
            _ => 2,
        }
    }

    /// Class index of a digit, `None` when the digit is dropped.
    pub fn class_of(self, digit: u8) -> Option<usize> {
        match self {
            TaskSpec::ZeroVsOne => match digit {
                0 => Some(0),
                1 => Some(1),
                _ => None,
            },
            TaskSpec::SevenVsEight => match digit {
                7 => Some(0),
                8 => Some(1),
                _ => None,
            },
            TaskSpec::GreaterThanFour => Some(usize::from(digit > 4)),
            TaskSpec::Digits0to3 => (digit <= 3).then_some(digit as usize),
        }
    }
}

/// Optional zero padding of the raw frames.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pad {
    None,
    /// Symmetric zero padding of 28x28 frames to 32x32.
    Pad32,
}

/// Angle-domain dataset with a deterministic train/test split.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PreparedDataset {
    pub task: TaskSpec,
    pub pad: Pad,
    pub seed: u64,
    pub train: Vec<(Image, usize)>,
    pub test: Vec<(Image, usize)>,
}

fn to_angles(raw: &[u8], rows: usize, cols: usize, pad: Pad) -> Image {
    let scale = (std::f64::consts::PI - ANGLE_DELTA) / 255.0;
    match pad {
        Pad::None => Image::new(rows, cols, raw.iter().map(|&p| p as f64 * scale).collect()),
        Pad::Pad32 => {
            assert_eq!((rows, cols), (28, 28), "padding targets 28x28 frames");
            let mut img = Image::zeros(32, 32);
            for r in 0..28 {
                for c in 0..28 {
                    img.pixels[(r + 2) * 32 + (c + 2)] = raw[r * 28 + c] as f64 * scale;
                }
            }
            img
        }
    }
}

/// Filter to the task's digits, map pixels onto [0, pi), pad, shuffle
/// deterministically and split 80/20. Per-class caps keep desk-scale
/// training tractable (0 = no cap).
pub fn prepare(
    raw: &RawDataset,
    task: TaskSpec,
    pad: Pad,
    seed: u64,
    train_cap_per_class: usize,
    test_cap_per_class: usize,
) -> Result<PreparedDataset, SimError> {
    let mut by_class: Vec<Vec<(Image, usize)>> = vec![Vec::new(); task.num_classes()];
    for (img, &label) in raw.images.iter().zip(&raw.labels) {
        if let Some(class) = task.class_of(label) {
            by_class[class].push((to_angles(img, raw.rows, raw.cols, pad), class));
        }
    }
    for (class, bucket) in by_class.iter().enumerate() {
        if bucket.is_empty() {
            return Err(SimError::Contract(format!(
                "no examples left for class {class} after filtering"
            )));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for mut bucket in by_class {
        bucket.shuffle(&mut rng);
        let split = (bucket.len() * 4) / 5;
        let (head, tail) = bucket.split_at(split);
        let train_take = if train_cap_per_class == 0 {
            head.len()
        } else {
            train_cap_per_class.min(head.len())
        };
        let test_take = if test_cap_per_class == 0 {
            tail.len()
        } else {
            test_cap_per_class.min(tail.len())
        };
        train.extend_from_slice(&head[..train_take]);
        test.extend_from_slice(&tail[..test_take]);
    }
    train.shuffle(&mut rng);
    test.shuffle(&mut rng);
    Ok(PreparedDataset {
        task,
        pad,
        seed,
        train,
        test,
    })
}
