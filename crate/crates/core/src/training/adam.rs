use serde::{Deserialize, Serialize};

use crate::sim::SimError;

/// ADAM moment estimates with the conventional
/// (beta1, beta2, eps) = (0.9, 0.999, 1e-8).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
    pub step: usize,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_hat: f64,
}

impl AdamState {
    pub fn new(num_params: usize) -> Self {
        AdamState {
            m: vec![0.0; num_params],
            v: vec![0.0; num_params],
            step: 0,
            beta1: 0.9,
            beta2: 0.999,
            eps_hat: 1e-8,
        }
    }
}

/// One bias-corrected ADAM update, in place.
pub fn adam_step(
    state: &mut AdamState,
    params: &mut [f64],
    grads: &[f64],
    lr: f64,
) -> Result<(), SimError> {
    if params.len() != grads.len() || params.len() != state.m.len() {
        return Err(SimError::DimensionMismatch(format!(
            "adam over {} params, {} grads, {} moments",
            params.len(),
            grads.len(),
            state.m.len()
        )));
    }
    state.step += 1;
    let b1t = 1.0 - state.beta1.powi(state.step as i32);
    let b2t = 1.0 - state.beta2.powi(state.step as i32);
    for i in 0..params.len() {
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * grads[i];
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * grads[i] * grads[i];
        let m_hat = state.m[i] / b1t;
        let v_hat = state.v[i] / b2t;
        params[i] -= lr * m_hat / (v_hat.sqrt() + state.eps_hat);
    }
    Ok(())
}

/// Forward-difference gradient: `(L(p + eps e_j) - L(p)) / eps` per
/// coordinate. The loss closure must be pure.
pub fn finite_diff_gradient<F>(loss_at: F, params: &[f64], epsilon: f64) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    assert!(epsilon > 0.0, "epsilon must be positive");
    let base = loss_at(params);
    use rayon::prelude::*;
    (0..params.len())
        .into_par_iter()
        .map(|j| {
            let mut shifted = params.to_vec();
            shifted[j] += epsilon;
            (loss_at(&shifted) - base) / epsilon
        })
        .collect()
}
