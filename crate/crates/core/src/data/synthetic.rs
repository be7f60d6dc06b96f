use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::idx::RawDataset;

/// Deterministic stand-in for the handwritten 0-vs-1 task when the real
/// IDX files are absent: 28x28 grayscale frames of elliptical rings
/// (zeros) and slanted strokes (ones) with varied geometry, thickness
/// and intensity.
pub fn synthetic_zero_one(count_per_class: usize, seed: u64) -> RawDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = Vec::with_capacity(2 * count_per_class);
    let mut labels = Vec::with_capacity(2 * count_per_class);
    for i in 0..2 * count_per_class {
        let label = (i % 2) as u8;
        let img = if label == 0 {
            draw_zero(&mut rng)
        } else {
            draw_one(&mut rng)
        };
        images.push(img);
        labels.push(label);
    }
    RawDataset {
        rows: 28,
        cols: 28,
        images,
        labels,
    }
}

fn ink(dist: f64, thickness: f64, peak: f64) -> f64 {
    let t = (dist / thickness).abs();
    if t >= 1.5 {
        0.0
    } else {
        peak * (-(t * t)).exp()
    }
}

fn draw_zero(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let cx = rng.gen_range(13.2..14.8);
    let cy = rng.gen_range(13.2..14.8);
    let rx = rng.gen_range(6.5..8.0);
    let ry = rng.gen_range(8.5..10.0);
    let thickness = rng.gen_range(1.9..2.7);
    let peak = rng.gen_range(235.0..255.0);
    let tilt: f64 = rng.gen_range(-0.25..0.25);
    let mut img = vec![0u8; 28 * 28];
    for r in 0..28 {
        for c in 0..28 {
            let x0 = c as f64 - cx;
            let y0 = r as f64 - cy;
            let x = x0 * tilt.cos() - y0 * tilt.sin();
            let y = x0 * tilt.sin() + y0 * tilt.cos();
            // signed distance from the ellipse ring, scaled radially
            let radial = ((x / rx).powi(2) + (y / ry).powi(2)).sqrt();
            let dist = (radial - 1.0) * rx.min(ry);
            let v = ink(dist, thickness, peak) + rng.gen_range(0.0..8.0);
            img[r * 28 + c] = v.min(255.0) as u8;
        }
    }
    img
}

fn draw_one(rng: &mut ChaCha8Rng) -> Vec<u8> {
    let cx = rng.gen_range(13.2..14.8);
    let slant: f64 = rng.gen_range(-0.12..0.12);
    let top = rng.gen_range(4.0..5.5);
    let bottom = rng.gen_range(22.5..24.0);
    let thickness = rng.gen_range(1.7..2.4);
    let peak = rng.gen_range(235.0..255.0);
    let serif = rng.gen_bool(0.5);
    let mut img = vec![0u8; 28 * 28];
    for r in 0..28 {
        for c in 0..28 {
            let y = r as f64;
            if y < top - 1.5 || y > bottom + 1.5 {
                let noise = rng.gen_range(0.0..8.0);
                img[r * 28 + c] = noise as u8;
                continue;
            }
            let center = cx + slant * (y - 14.0);
            let mut dist = (c as f64 - center).abs();
            if serif && y < top + 3.0 {
                // short diagonal flag at the top
                let flag = cx - (top + 3.0 - y);
                dist = dist.min((c as f64 - flag).abs() + 0.5);
            }
            let v = ink(dist, thickness, peak) + rng.gen_range(0.0..8.0);
            img[r * 28 + c] = v.min(255.0) as u8;
        }
    }
    img
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_balanced() {
        let a = synthetic_zero_one(10, 5);
        let b = synthetic_zero_one(10, 5);
        assert_eq!(a, b);
        assert_eq!(a.images.len(), 20);
        assert_eq!(a.labels.iter().filter(|&&l| l == 0).count(), 10);
    }

    #[test]
    fn classes_differ_in_ink_distribution() {
        let data = synthetic_zero_one(20, 9);
        let mass = |img: &Vec<u8>| img.iter().map(|&v| v as f64).sum::<f64>();
        let zeros: f64 = data
            .images
            .iter()
            .zip(&data.labels)
            .filter(|(_, &l)| l == 0)
            .map(|(img, _)| mass(img))
            .sum();
        let ones: f64 = data
            .images
            .iter()
            .zip(&data.labels)
            .filter(|(_, &l)| l == 1)
            .map(|(img, _)| mass(img))
            .sum();
        // rings carry clearly more ink than strokes
        assert!(zeros > ones * 1.2);
    }
}
