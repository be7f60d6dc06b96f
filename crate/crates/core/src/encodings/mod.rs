//! Single-qubit feature embeddings and the fragment-encoding pipeline.
//!
//! The four encodings map inputs in `[0, pi)` onto single-qubit
//! unitaries (one, two or three values per qubit). The fragment encoding
//! compiles a convolutional receptive field into an alternating product
//! of trainable gates and encoded inputs, collapsed per output qubit
//! into one U3 gate.

mod collapse;
mod fragment;
mod memory;

pub use collapse::{collapse_u3, decompose_u3, CollapsedU3};
pub use fragment::{fragment_encode, fragment_gate_chains, FragmentLayer, FragmentSpec, Image};
pub use memory::{liveness_peak, memory_bound};

use num_complex::Complex64;

use crate::sim::{Mat2, SimError};
use crate::sim::{GateKind, GateMatrix};

/// Which single-qubit feature embedding a model uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingKind {
    /// One value per qubit, `Ry(x)`.
    Qe,
    /// Two values per qubit, `Rz(x2) Ry(x1)`.
    Dqe,
    /// Three values per qubit, `U3(x1, x2, x3)`.
    Ue,
    /// Three values per qubit with trainable weights,
    /// `U3(theta + w1 x1, theta + w2 x2, theta + w3 x3)`.
    Wue,
}

impl EncodingKind {
    /// Input values consumed per emitted unitary.
    pub fn values_per_unit(self) -> usize {
        match self {
            EncodingKind::Qe => 1,
            EncodingKind::Dqe => 2,
            EncodingKind::Ue | EncodingKind::Wue => 3,
        }
    }
}

fn check_domain(x: &[f64]) -> Result<(), SimError> {
    for &v in x {
        if !(0.0..std::f64::consts::PI).contains(&v) {
            return Err(SimError::Contract(format!(
                "encoding input {v} outside [0, pi)"
            )));
        }
    }
    Ok(())
}

fn ry(theta: f64) -> Mat2 {
    match crate::sim::gate_matrix(GateKind::Ry, &[theta]).unwrap() {
        GateMatrix::Single(m) => m,
        _ => unreachable!(),
    }
}

fn rz(theta: f64) -> Mat2 {
    match crate::sim::gate_matrix(GateKind::Rz, &[theta]).unwrap() {
        GateMatrix::Single(m) => m,
        _ => unreachable!(),
    }
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    match crate::sim::gate_matrix(GateKind::U3, &[theta, phi, lambda]).unwrap() {
        GateMatrix::Single(m) => m,
        _ => unreachable!(),
    }
}

pub(crate) fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

/// Qubit encoding: the j-th unitary is `Ry(x_j)`.
pub fn encode_qe(x: &[f64]) -> Result<Vec<Mat2>, SimError> {
    check_domain(x)?;
    Ok(x.iter().map(|&v| ry(v)).collect())
}

/// Dense qubit encoding: pairs of values become `Rz(x_{2j}) Ry(x_{2j-1})`;
/// an odd input is padded with one trailing zero.
pub fn encode_dqe(x: &[f64]) -> Result<Vec<Mat2>, SimError> {
    check_domain(x)?;
    Ok(x.chunks(2)
        .map(|pair| {
            let a = pair[0];
            let b = pair.get(1).copied().unwrap_or(0.0);
            mat2_mul(&rz(b), &ry(a))
        })
        .collect())
}

/// Universal encoding: groups of three become `U3(x1, x2, x3)`, zero
/// filled on the last group.
pub fn encode_ue(x: &[f64]) -> Result<Vec<Mat2>, SimError> {
    check_domain(x)?;
    Ok(x.chunks(3)
        .map(|g| {
            u3(
                g[0],
                g.get(1).copied().unwrap_or(0.0),
                g.get(2).copied().unwrap_or(0.0),
            )
        })
        .collect())
}

/// Weighted universal encoding: per group,
/// `U3(theta + w1 x1, theta + w2 x2, theta + w3 x3)`. `weights` holds
/// three values per group.
pub fn encode_wue(x: &[f64], theta: f64, weights: &[f64]) -> Result<Vec<Mat2>, SimError> {
    check_domain(x)?;
    let groups = x.len().div_ceil(3);
    if weights.len() != groups * 3 {
        return Err(SimError::Contract(format!(
            "WUE needs {} weights for {} groups, got {}",
            groups * 3,
            groups,
            weights.len()
        )));
    }
    Ok(x.chunks(3)
        .enumerate()
        .map(|(j, g)| {
            let w = &weights[3 * j..3 * j + 3];
            u3(
                theta + w[0] * g[0],
                theta + w[1] * g.get(1).copied().unwrap_or(0.0),
                theta + w[2] * g.get(2).copied().unwrap_or(0.0),
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn mat_close(a: &Mat2, b: &Mat2, eps: f64) -> bool {
        (0..2).all(|r| (0..2).all(|c| (a[r][c] - b[r][c]).norm() < eps))
    }

    #[test]
    fn qe_examples() {
        let id = encode_qe(&[0.0]).unwrap();
        assert!(mat_close(&id[0], &crate::sim::MAT2_ID, 1e-12));

        let half = encode_qe(&[std::f64::consts::FRAC_PI_2]).unwrap();
        // sends |0> to a prob-1/2 superposition
        let p = half[0][1][0].norm_sqr();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);

        let two = encode_qe(&[0.3, 0.7]).unwrap();
        assert!(mat_close(&two[0], &ry(0.3), 1e-12));
        assert!(mat_close(&two[1], &ry(0.7), 1e-12));
    }

    #[test]
    fn qe_rejects_out_of_domain() {
        assert!(encode_qe(&[std::f64::consts::PI]).is_err());
        assert!(encode_qe(&[-0.1]).is_err());
    }

    #[test]
    fn dqe_padding_rules() {
        let odd = encode_dqe(&[std::f64::consts::FRAC_PI_2]).unwrap();
        assert!(mat_close(&odd[0], &ry(std::f64::consts::FRAC_PI_2), 1e-12));

        let a = 0.8;
        let with_zero = encode_dqe(&[a, 0.0]).unwrap();
        assert!(mat_close(&with_zero[0], &ry(a), 1e-12));

        let three = encode_dqe(&[0.2, 0.4, 0.6]).unwrap();
        assert_eq!(three.len(), 2);
        assert!(mat_close(&three[1], &ry(0.6), 1e-12));
    }

    #[test]
    fn ue_zero_fill() {
        let id = encode_ue(&[0.0, 0.0, 0.0]).unwrap();
        assert!(mat_close(&id[0], &crate::sim::MAT2_ID, 1e-12));
        let partial = encode_ue(&[0.1, 0.2]).unwrap();
        assert!(mat_close(&partial[0], &u3(0.1, 0.2, 0.0), 1e-12));
    }

    #[test]
    fn wue_zero_weights_ignore_input() {
        let theta = 0.9;
        let a = encode_wue(&[0.3, 0.6, 0.2], theta, &[0.0; 3]).unwrap();
        let b = encode_wue(&[2.0, 1.0, 0.5], theta, &[0.0; 3]).unwrap();
        assert!(mat_close(&a[0], &b[0], 1e-12));
        assert!(mat_close(&a[0], &u3(theta, theta, theta), 1e-12));
    }

    #[test]
    fn wue_weight_shape_checked() {
        assert!(encode_wue(&[0.1, 0.2, 0.3, 0.4], 0.0, &[0.0; 3]).is_err());
    }

    #[test]
    fn qe_injectivity_spot_check() {
        // distinct inputs in (0, pi) give states with fidelity < 1
        let a = encode_qe(&[0.4]).unwrap();
        let b = encode_qe(&[1.9]).unwrap();
        let sa = crate::sim::StateVector::product_state(&[(a[0][0][0], a[0][1][0])]);
        let sb = crate::sim::StateVector::product_state(&[(b[0][0][0], b[0][1][0])]);
        assert!(crate::sim::fidelity(&sa, &sb).unwrap() < 1.0 - 1e-6);
    }
}
