use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, finite_diff_gradient, AdamState};
use super::bsoc::{label_to_target, mae_loss, predict_class, BsocSpec};
use crate::encodings::Image;
use crate::models::{HybridModel, HybridPlan, RegularModel, RegularPlan};
use crate::sim::SimError;

/// Training hyperparameters: MAE regression toward noised bin centers,
/// forward-difference gradients, ADAM updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub num_batches: usize,
    pub batch_size: usize,
    pub eval_every: usize,
    pub fd_epsilon: f64,
    pub runs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.01,
            num_batches: 200,
            batch_size: 25,
            eval_every: 20,
            fd_epsilon: 1e-1,
            runs: 5,
            seed: 0,
        }
    }
}

/// A model the training loop can drive: either architecture with its
/// resolved plan.
pub enum TrainableModel {
    Regular {
        model: RegularModel,
        plan: RegularPlan,
    },
    Hybrid {
        model: HybridModel,
        plan: HybridPlan,
    },
}

impl TrainableModel {
    pub fn regular(model: RegularModel) -> Result<Self, SimError> {
        let plan = model.plan()?;
        Ok(TrainableModel::Regular { model, plan })
    }

    pub fn hybrid(model: HybridModel) -> Result<Self, SimError> {
        let plan = model.plan()?;
        Ok(TrainableModel::Hybrid { model, plan })
    }

    pub fn name(&self) -> &str {
        match self {
            TrainableModel::Regular { model, .. } => &model.name,
            TrainableModel::Hybrid { model, .. } => &model.name,
        }
    }

    pub fn num_params(&self) -> usize {
        match self {
            TrainableModel::Regular { plan, .. } => plan.num_params(),
            TrainableModel::Hybrid { plan, .. } => plan.num_params(),
        }
    }

    pub fn forward(&self, image: &Image, params: &[f64]) -> Result<f64, SimError> {
        match self {
            TrainableModel::Regular { model, plan } => model.forward(image, params, plan),
            TrainableModel::Hybrid { model, plan } => model.forward(image, params, plan),
        }
    }
}

/// One recorded evaluation: batch index, test loss against noiseless bin
/// centers, test accuracy in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub batch: usize,
    pub test_loss: f64,
    pub test_accuracy: f64,
}

/// The outcome of one training run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrainRun {
    pub model_name: String,
    pub seed: u64,
    pub history: Vec<EvalPoint>,
    pub final_params: Vec<f64>,
}

impl TrainRun {
    pub fn final_accuracy(&self) -> f64 {
        self.history.last().map_or(0.0, |p| p.test_accuracy)
    }

    pub fn history_csv(&self) -> String {
        let mut out = String::from("batch,test_loss,test_accuracy\n");
        for p in &self.history {
            out.push_str(&format!(
                "{},{:.6},{:.4}\n",
                p.batch, p.test_loss, p.test_accuracy
            ));
        }
        out
    }
}

/// Exact evaluation on a labelled set: accuracy (percent) via the class
/// bins, MAE against the noiseless bin centers.
pub fn evaluate(
    model: &TrainableModel,
    params: &[f64],
    test_set: &[(Image, usize)],
    spec: &BsocSpec,
) -> Result<(f64, f64), SimError> {
    if test_set.is_empty() {
        return Err(SimError::Contract("empty evaluation set".into()));
    }
    let mut correct = 0usize;
    let mut targets = Vec::with_capacity(test_set.len());
    let mut outputs = Vec::with_capacity(test_set.len());
    use rayon::prelude::*;
    let preds: Vec<f64> = test_set
        .par_iter()
        .map(|(image, _)| model.forward(image, params))
        .collect::<Result<_, _>>()?;
    for ((_, label), &out) in test_set.iter().zip(&preds) {
        let clamped = out.clamp(0.0, 1.0);
        if predict_class(clamped, spec)? == *label {
            correct += 1;
        }
        targets.push(spec.center(*label));
        outputs.push(clamped);
    }
    let accuracy = 100.0 * correct as f64 / test_set.len() as f64;
    let loss = mae_loss(&targets, &outputs)?;
    Ok((accuracy, loss))
}

/// Train one run: batches sampled uniformly with replacement, MAE on
/// noised targets, forward-difference ADAM steps, an evaluation before
/// the first batch and after every `eval_every` batches.
pub fn train(
    model: &TrainableModel,
    train_set: &[(Image, usize)],
    test_set: &[(Image, usize)],
    spec: &BsocSpec,
    config: &TrainConfig,
) -> Result<TrainRun, SimError> {
    if train_set.is_empty() {
        return Err(SimError::Contract("empty training set".into()));
    }
    if config.num_batches > 0 && (config.batch_size == 0 || config.learning_rate <= 0.0) {
        return Err(SimError::Contract(
            "batch size and learning rate must be positive".into(),
        ));
    }
    if config.eval_every == 0 || config.fd_epsilon <= 0.0 {
        return Err(SimError::Contract(
            "evaluation cadence and epsilon must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params: Vec<f64> = (0..model.num_params())
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect();
    let mut adam = AdamState::new(params.len());
    let mut history = Vec::new();

    let (acc, loss) = evaluate(model, &params, test_set, spec)?;
    history.push(EvalPoint {
        batch: 0,
        test_loss: loss,
        test_accuracy: acc,
    });

    for batch in 1..=config.num_batches {
        let mut images = Vec::with_capacity(config.batch_size);
        let mut targets = Vec::with_capacity(config.batch_size);
        for _ in 0..config.batch_size {
            let idx = rng.gen_range(0..train_set.len());
            let (image, label) = &train_set[idx];
            images.push(image);
            targets.push(label_to_target(*label, spec, &mut rng)?);
        }
        let loss_at = |p: &[f64]| -> f64 {
            let preds: Vec<f64> = images
                .iter()
                .map(|img| model.forward(img, p).expect("forward evaluates"))
                .collect();
            mae_loss(&targets, &preds).expect("non-empty batch")
        };
        let grads = finite_diff_gradient(&loss_at, &params, config.fd_epsilon);
        adam_step(&mut adam, &mut params, &grads, config.learning_rate)?;

        if batch % config.eval_every == 0 {
            let (acc, loss) = evaluate(model, &params, test_set, spec)?;
            history.push(EvalPoint {
                batch,
                test_loss: loss,
                test_accuracy: acc,
            });
        }
    }

    Ok(TrainRun {
        model_name: model.name().to_string(),
        seed: config.seed,
        history,
        final_params: params,
    })
}
