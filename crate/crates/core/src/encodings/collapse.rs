use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::mat2_mul;
use crate::sim::{u3_mat, Mat2, SimError, MAT2_ID};

/// A product of single-qubit gates reduced to one universal gate:
/// `e^{i global_phase} U3(theta, phi, lambda)` reproduces the product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollapsedU3 {
    pub theta: f64,
    pub phi: f64,
    pub lambda: f64,
    pub global_phase: f64,
}

impl CollapsedU3 {
    pub const IDENTITY: CollapsedU3 = CollapsedU3 {
        theta: 0.0,
        phi: 0.0,
        lambda: 0.0,
        global_phase: 0.0,
    };

    /// The full matrix including the global phase.
    pub fn matrix(&self) -> Mat2 {
        let phase = Complex64::from_polar(1.0, self.global_phase);
        let mut m = u3_mat(self.theta, self.phi, self.lambda);
        for row in m.iter_mut() {
            for cell in row.iter_mut() {
                *cell *= phase;
            }
        }
        m
    }

    /// The matrix with the global phase dropped; this is what state
    /// preparation applies (the phase never affects probabilities).
    pub fn matrix_no_phase(&self) -> Mat2 {
        u3_mat(self.theta, self.phi, self.lambda)
    }

    /// The state this gate prepares from |0>, as (amp0, amp1).
    pub fn prepared_state(&self) -> (Complex64, Complex64) {
        let m = self.matrix_no_phase();
        (m[0][0], m[1][0])
    }
}

/// Decompose a single-qubit unitary as `e^{ig} U3(theta, phi, lambda)`.
pub fn decompose_u3(m: &Mat2) -> CollapsedU3 {
    let a = m[0][0].norm();
    let b = m[1][0].norm();
    let theta = 2.0 * b.atan2(a);
    if b < 1e-12 {
        // diagonal: only phi + lambda matters
        let g = m[0][0].arg();
        let phi = m[1][1].arg() - g;
        return CollapsedU3 {
            theta,
            phi,
            lambda: 0.0,
            global_phase: g,
        };
    }
    if a < 1e-12 {
        // anti-diagonal: only phi - (-lambda) offset matters; pick phi = 0
        let g = m[1][0].arg();
        let lambda = (-m[0][1]).arg() - g;
        return CollapsedU3 {
            theta,
            phi: 0.0,
            lambda,
            global_phase: g,
        };
    }
    let g = m[0][0].arg();
    let phi = m[1][0].arg() - g;
    let lambda = (-m[0][1]).arg() - g;
    CollapsedU3 {
        theta,
        phi,
        lambda,
        global_phase: g,
    }
}

/// Fold an ordered gate sequence (first element applied first, i.e. the
/// right-most matrix factor) into one U3 plus global phase.
pub fn collapse_u3(seq: &[Mat2]) -> Result<CollapsedU3, SimError> {
    if seq.is_empty() {
        return Err(SimError::Contract("cannot collapse an empty sequence".into()));
    }
    let mut product = MAT2_ID;
    for m in seq {
        // later gates multiply from the left
        product = mat2_mul(m, &product);
    }
    Ok(decompose_u3(&product))
}
