//! BSOC label machinery, MAE loss, finite-difference ADAM, and the
//! train/evaluate loop shared by hybrid and regular models.

mod adam;
mod bsoc;
mod loop_;

pub use adam::{adam_step, finite_diff_gradient, AdamState};
pub use bsoc::{label_to_target, mae_loss, predict_class, BsocSpec};
pub use loop_::{evaluate, train, EvalPoint, TrainConfig, TrainRun, TrainableModel};
