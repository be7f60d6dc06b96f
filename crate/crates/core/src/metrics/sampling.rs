use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::histogram::{kl_divergence, FidelityHistogram, HistogramConfig};
use super::objective::{objective_lpqc, ThresholdSet};
use super::report::MetricReport;
use super::Arch;
use crate::sim::{fidelity, ry_mat, ParameterizedCircuit, StateVector};

/// Classes of the bin-based single-output classification target used by
/// the hybrid expressibility.
pub const HYBRID_CLASSES: usize = 4;

/// Sampling sizes for the metric estimators: |C| input configurations,
/// |S| parameter draws each. Identical seeds give bit-identical results
/// regardless of worker count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingBudget {
    pub num_inputs: usize,
    pub num_weight_samples: usize,
    pub rng_seed: u64,
}

impl SamplingBudget {
    pub fn desk(rng_seed: u64) -> Self {
        SamplingBudget {
            num_inputs: 10,
            num_weight_samples: 2_000,
            rng_seed,
        }
    }

    /// The evaluation scale the reference tables were produced at.
    pub fn publication(rng_seed: u64) -> Self {
        SamplingBudget {
            num_inputs: 100,
            num_weight_samples: 10_000,
            rng_seed,
        }
    }

    /// |C| >= 1 and |S| >= 2 (fidelity estimation needs pairs).
    pub fn validate(&self) {
        assert!(
            self.num_inputs >= 1 && self.num_weight_samples >= 2,
            "budget needs at least one input and two samples"
        );
    }

    /// Generator for one input configuration; stream-separated so
    /// per-input work parallelizes deterministically.
    fn input_rng(&self, input_index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(input_index as u64 + 1);
        rng
    }
}

/// How entanglement evaluation prepares its input states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initializer {
    /// Haar-random pure states.
    HaarStates,
    /// Qubit-encoded uniform random angle vectors (hybrid architecture).
    RandomQeInputs,
    /// The computational zero state (regular architecture; Haar inputs
    /// would make the metric circuit-independent by unitary invariance).
    ZeroState,
}

fn haar_state<R: Rng>(num_qubits: usize, rng: &mut R) -> StateVector {
    let dim = 1usize << num_qubits;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps).expect("normalized state")
}

fn qe_input_state<R: Rng>(num_qubits: usize, rng: &mut R) -> StateVector {
    let factors: Vec<(Complex64, Complex64)> = (0..num_qubits)
        .map(|_| {
            let angle = rng.gen_range(0.0..std::f64::consts::PI);
            let m = ry_mat(angle);
            (m[0][0], m[1][0])
        })
        .collect();
    StateVector::product_state(&factors)
}

fn sample_params<R: Rng>(num_params: usize, rng: &mut R) -> Vec<f64> {
    (0..num_params)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// Expressibility evaluation output: overall mean and std over the
/// per-input divergences (any of which may be infinite).
#[derive(Debug, Clone, PartialEq)]
pub struct ExprResult {
    pub mean: f64,
    pub std: f64,
    pub per_input: Vec<f64>,
}

fn summarize(per_input: Vec<f64>) -> ExprResult {
    let n = per_input.len() as f64;
    if per_input.iter().any(|v| v.is_infinite()) {
        return ExprResult {
            mean: f64::INFINITY,
            std: f64::INFINITY,
            per_input,
        };
    }
    let mean = per_input.iter().sum::<f64>() / n;
    let var = per_input.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    ExprResult {
        mean,
        std: var.sqrt(),
        per_input,
    }
}

/// Regular-architecture expressibility: per Haar-random input, sample
/// parameter vectors, pair the evolved states disjointly, histogram the
/// pair fidelities on the truncated support, and take the KL divergence
/// from the Haar target. A fidelity outside the support makes the input
/// (and the circuit) infinitely expressible in the divergence sense.
pub fn expressibility_regular(
    circuit: &ParameterizedCircuit,
    budget: &SamplingBudget,
    cfg: HistogramConfig,
) -> ExprResult {
    budget.validate();
    let target = FidelityHistogram::haar(circuit.num_qubits, cfg);
    let per_input: Vec<f64> = (0..budget.num_inputs)
        .into_par_iter()
        .map(|input_idx| {
            let mut rng = budget.input_rng(input_idx);
            let initial = haar_state(circuit.num_qubits, &mut rng);
            let mut counts = vec![0u64; target.retained];
            let mut total = 0u64;
            let mut out_of_support = false;
            let pairs = budget.num_weight_samples / 2;
            for _ in 0..pairs {
                let a = circuit
                    .run(&sample_params(circuit.num_params, &mut rng), &initial)
                    .expect("circuit evaluates");
                let b = circuit
                    .run(&sample_params(circuit.num_params, &mut rng), &initial)
                    .expect("circuit evaluates");
                let f = fidelity(&a, &b).expect("same size");
                match target.bin_of(f) {
                    Some(bin) => counts[bin] += 1,
                    None => {
                        out_of_support = true;
                        break;
                    }
                }
                total += 1;
            }
            if out_of_support {
                return f64::INFINITY;
            }
            let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
            kl_divergence(&empirical, &target.probs)
        })
        .collect();
    summarize(per_input)
}

/// Hybrid-architecture expressibility: per uniform-random qubit-encoded
/// input segment, sample parameters, read the last qubit's exact |1>
/// probability, bin it into the class bins and take the KL divergence
/// from the uniform class distribution.
pub fn expressibility_hybrid(
    circuit: &ParameterizedCircuit,
    num_classes: usize,
    budget: &SamplingBudget,
) -> ExprResult {
    assert!(num_classes >= 2);
    budget.validate();
    let uniform = vec![1.0 / num_classes as f64; num_classes];
    let last = circuit.num_qubits - 1;
    let per_input: Vec<f64> = (0..budget.num_inputs)
        .into_par_iter()
        .map(|input_idx| {
            let mut rng = budget.input_rng(input_idx);
            let initial = qe_input_state(circuit.num_qubits, &mut rng);
            let mut counts = vec![0u64; num_classes];
            for _ in 0..budget.num_weight_samples {
                let out = circuit
                    .run(&sample_params(circuit.num_params, &mut rng), &initial)
                    .expect("circuit evaluates");
                let p = out.prob_one(last).expect("valid qubit");
                let bin = ((p * num_classes as f64) as usize).min(num_classes - 1);
                counts[bin] += 1;
            }
            let empirical: Vec<f64> = counts
                .iter()
                .map(|&c| c as f64 / budget.num_weight_samples as f64)
                .collect();
            kl_divergence(&empirical, &uniform)
        })
        .collect();
    summarize(per_input)
}

/// Meyer-Wallach global entanglement, `2 (1 - mean_k Tr rho_k^2)`.
pub fn meyer_wallach_q(state: &StateVector) -> Result<f64, crate::sim::SimError> {
    let n = state.num_qubits();
    if n < 2 {
        return Err(crate::sim::SimError::Contract(
            "Meyer-Wallach needs at least 2 qubits".into(),
        ));
    }
    let mut purity_sum = 0.0;
    for q in 0..n {
        purity_sum += state.single_qubit_purity(q)?;
    }
    Ok(2.0 * (1.0 - purity_sum / n as f64))
}

/// Mean Meyer-Wallach entanglement over all sampled states, with the
/// standard deviation taken over the per-input means.
pub fn entanglement_metric(
    circuit: &ParameterizedCircuit,
    budget: &SamplingBudget,
    initializer: Initializer,
) -> (f64, f64) {
    if circuit.num_qubits < 2 {
        // a lone qubit cannot entangle
        return (0.0, 0.0);
    }
    let per_input: Vec<f64> = (0..budget.num_inputs)
        .into_par_iter()
        .map(|input_idx| {
            let mut rng = budget.input_rng(input_idx);
            let initial = match initializer {
                Initializer::HaarStates => haar_state(circuit.num_qubits, &mut rng),
                Initializer::RandomQeInputs => qe_input_state(circuit.num_qubits, &mut rng),
                Initializer::ZeroState => StateVector::zero(circuit.num_qubits),
            };
            let mut acc = 0.0;
            for _ in 0..budget.num_weight_samples {
                let out = circuit
                    .run(&sample_params(circuit.num_params, &mut rng), &initial)
                    .expect("circuit evaluates");
                acc += meyer_wallach_q(&out).expect("multi-qubit state");
            }
            acc / budget.num_weight_samples as f64
        })
        .collect();
    let n = per_input.len() as f64;
    let mean = per_input.iter().sum::<f64>() / n;
    let var = per_input.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Full evaluation of one circuit under one architecture: both metrics,
/// the complexity triple and the composite objective.
pub fn evaluate_circuit(
    label: &str,
    circuit: &ParameterizedCircuit,
    arch: Arch,
    budget: &SamplingBudget,
) -> MetricReport {
    let expr = match arch {
        Arch::Hybrid => expressibility_hybrid(circuit, HYBRID_CLASSES, budget),
        Arch::Regular => {
            expressibility_regular(circuit, budget, HistogramConfig::standard(circuit.num_qubits))
        }
    };
    let initializer = match arch {
        Arch::Hybrid => Initializer::RandomQeInputs,
        Arch::Regular => Initializer::ZeroState,
    };
    let (entgl_mean, entgl_std) = entanglement_metric(circuit, budget, initializer);
    let complexity = circuit.complexity();
    let thr = ThresholdSet::standard(arch, circuit.num_qubits);
    let l_pqc = objective_lpqc(expr.mean, entgl_mean, complexity, &thr);
    MetricReport {
        circuit_id: label.to_string(),
        qubits: circuit.num_qubits,
        arch,
        params: complexity.params,
        depth: complexity.depth,
        gates: complexity.gates,
        expr_mean: expr.mean,
        expr_std: expr.std,
        entgl_mean,
        entgl_std,
        l_pqc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{app, GateKind};
    use approx::assert_abs_diff_eq;

    fn bell_circuit() -> ParameterizedCircuit {
        ParameterizedCircuit::new(
            2,
            vec![app(GateKind::H, &[0], &[]), app(GateKind::Cx, &[0, 1], &[])],
        )
        .unwrap()
    }

    #[test]
    fn meyer_wallach_examples() {
        let product = StateVector::zero(3);
        assert_abs_diff_eq!(meyer_wallach_q(&product).unwrap(), 0.0, epsilon = 1e-12);

        let mut bell = StateVector::zero(2);
        bell_circuit().run_in_place(&[], &mut bell).unwrap();
        assert_abs_diff_eq!(meyer_wallach_q(&bell).unwrap(), 1.0, epsilon = 1e-12);

        // GHZ on 3 qubits: purities are all 1/2 under partial trace
        let mut ghz = StateVector::zero(3);
        ParameterizedCircuit::new(
            3,
            vec![
                app(GateKind::H, &[0], &[]),
                app(GateKind::Cx, &[0, 1], &[]),
                app(GateKind::Cx, &[1, 2], &[]),
            ],
        )
        .unwrap()
        .run_in_place(&[], &mut ghz)
        .unwrap();
        for q in 0..3 {
            assert_abs_diff_eq!(ghz.single_qubit_purity(q).unwrap(), 0.5, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(meyer_wallach_q(&ghz).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn identity_circuit_has_maximal_finite_expressibility() {
        let c = ParameterizedCircuit::empty(2);
        let budget = SamplingBudget {
            num_inputs: 3,
            num_weight_samples: 100,
            rng_seed: 5,
        };
        let res = expressibility_regular(&c, &budget, HistogramConfig::standard(2));
        // all fidelities are 1: a point mass in the top bin
        assert!(res.mean.is_finite());
        assert_abs_diff_eq!(res.mean, 12.95, epsilon = 0.01);
    }

    #[test]
    fn single_qubit_gates_only_give_zero_entanglement() {
        let c = ParameterizedCircuit::new(
            2,
            vec![app(GateKind::Ry, &[0], &[0]), app(GateKind::Rx, &[1], &[1])],
        )
        .unwrap();
        let budget = SamplingBudget {
            num_inputs: 4,
            num_weight_samples: 50,
            rng_seed: 2,
        };
        let (mean, _) = entanglement_metric(&c, &budget, Initializer::RandomQeInputs);
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn constant_output_hybrid_expressibility_is_ln_classes() {
        // zero-parameter circuit: every sample of one input lands in the
        // same class bin, a point mass against the uniform target
        let c = ParameterizedCircuit::empty(2);
        let budget = SamplingBudget {
            num_inputs: 5,
            num_weight_samples: 40,
            rng_seed: 3,
        };
        let res = expressibility_hybrid(&c, 4, &budget);
        assert_abs_diff_eq!(res.mean, 4.0_f64.ln(), epsilon = 1e-9);
        assert_abs_diff_eq!(res.std, 0.0, epsilon = 1e-9);

        // a perfectly uniform empirical distribution scores zero
        let uniform = vec![0.25; 4];
        assert_abs_diff_eq!(kl_divergence(&uniform, &uniform), 0.0);
    }

    #[test]
    fn regular_expressibility_invariant_under_appended_identity_layer() {
        // a trailing parameter-free layer that composes to the identity
        // leaves every sampled fidelity unchanged
        let base = bell_circuit();
        let mut extended = base.clone();
        extended.gates.push(app(GateKind::Z, &[1], &[]));
        extended.gates.push(app(GateKind::Z, &[1], &[]));
        let budget = SamplingBudget {
            num_inputs: 4,
            num_weight_samples: 80,
            rng_seed: 12,
        };
        let a = expressibility_regular(&base, &budget, HistogramConfig::standard(2));
        let b = expressibility_regular(&extended, &budget, HistogramConfig::standard(2));
        assert_eq!(a, b);
    }

    #[test]
    fn determinism_under_fixed_seed() {
        let c = bell_circuit();
        let budget = SamplingBudget {
            num_inputs: 4,
            num_weight_samples: 60,
            rng_seed: 77,
        };
        let a = evaluate_circuit("bell", &c, Arch::Regular, &budget);
        let b = evaluate_circuit("bell", &c, Arch::Regular, &budget);
        assert_eq!(a, b);
    }
}
