//! Sequential model-based search over gate genomes minimizing the
//! composite circuit objective under the complexity caps.

mod genome;
mod surrogate;

pub use genome::{Genome, GenomeSlot, ParamAssignment};
pub use surrogate::{Surrogate, SurrogateMode};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::metrics::{
    entanglement_metric, expressibility_hybrid, expressibility_regular, objective_lpqc, Arch,
    HistogramConfig, Initializer, SamplingBudget, ThresholdSet, HYBRID_CLASSES,
};
use crate::sim::SimError;

/// Search configuration. `budget` is the per-trial metric sampling used
/// while searching; final reporting rescoring is the caller's choice.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SearchConfig {
    pub num_qubits: usize,
    pub architecture: Arch,
    pub num_trials: usize,
    pub max_duplicates: usize,
    pub budget: SamplingBudget,
    pub seed: u64,
    /// Uniform-random proposals only; the surrogate stays off.
    pub random_mode: bool,
}

impl SearchConfig {
    pub fn desk(num_qubits: usize, architecture: Arch, seed: u64) -> Self {
        SearchConfig {
            num_qubits,
            architecture,
            num_trials: 2_000,
            max_duplicates: 10,
            budget: SamplingBudget {
                num_inputs: 4,
                num_weight_samples: 200,
                rng_seed: seed,
            },
            seed,
            random_mode: false,
        }
    }
}

/// One trial record. `wall_ms` is informational and excluded from the
/// deterministic content.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub genome_hash: String,
    pub skipped: bool,
    pub l_pqc: f64,
    pub expr: f64,
    pub entgl: f64,
    pub params: usize,
    pub depth: usize,
    pub gates: usize,
    pub wall_ms: u64,
}

impl TrialRecord {
    /// The seed-determined content, for determinism checks.
    pub fn deterministic_view(&self) -> (usize, &str, bool, u64, u64, usize, usize, usize) {
        (
            self.trial,
            &self.genome_hash,
            self.skipped,
            self.l_pqc.to_bits(),
            self.expr.to_bits(),
            self.params,
            self.depth,
            self.gates,
        )
    }
}

/// The full per-trial log; streamable as JSON lines.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct TrialLog {
    pub records: Vec<TrialRecord>,
}

impl TrialLog {
    pub fn to_json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.records
            .iter()
            .filter(|r| !r.skipped)
            .map(|r| {
                best = best.min(r.l_pqc);
                best
            })
            .collect()
    }
}

/// A genome with its evaluated scores.
#[derive(Debug, Clone)]
pub struct RankedGenome {
    pub genome: Genome,
    pub hash: u64,
    pub l_pqc: f64,
    pub expr: f64,
    pub entgl: f64,
    pub complexity: crate::sim::Complexity,
    pub first_seen: usize,
}

/// Run the search: propose genomes, evaluate the objective, keep a
/// ranked set of the best structures. Proposals are drawn serially from
/// the seeded generator (so the trial sequence is reproducible
/// regardless of worker count); evaluations run in parallel batches and
/// are committed in trial order.
pub fn run_search(config: &SearchConfig) -> Result<(Vec<RankedGenome>, TrialLog), SimError> {
    let caps = ThresholdSet::standard(config.architecture, config.num_qubits);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mode = if config.random_mode {
        SurrogateMode::Random
    } else {
        SurrogateMode::DensityRatio
    };
    let mut surrogate = Surrogate::new(config.num_qubits, mode);
    let mut log = TrialLog::default();
    let mut seen: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
    let mut ranked: std::collections::HashMap<u64, RankedGenome> = std::collections::HashMap::new();

    const BATCH: usize = 32;
    let mut trial = 0usize;
    while trial < config.num_trials {
        let batch_len = BATCH.min(config.num_trials - trial);
        // serial proposals against the frozen surrogate
        let mut batch = Vec::with_capacity(batch_len);
        for i in 0..batch_len {
            let genome = surrogate.propose(&caps, &mut rng);
            let hash = genome.structure_hash(&caps)?;
            let count = seen.entry(hash).or_insert(0);
            *count += 1;
            let skip = *count > config.max_duplicates;
            batch.push((trial + i, genome, hash, skip));
        }
        // parallel evaluation, committed in order
        type Scores = (f64, f64, f64, crate::sim::Complexity, u64);
        let evals: Vec<Option<Scores>> = batch
            .par_iter()
            .map(|(t, genome, _, skip)| {
                if *skip {
                    return None;
                }
                let start = std::time::Instant::now();
                let circuit = genome.decode(&caps).expect("proposals satisfy caps");
                let budget = SamplingBudget {
                    rng_seed: config
                        .budget
                        .rng_seed
                        .wrapping_mul(0x9e3779b97f4a7c15)
                        .wrapping_add(*t as u64),
                    ..config.budget
                };
                let expr = match config.architecture {
                    Arch::Hybrid => expressibility_hybrid(&circuit, HYBRID_CLASSES, &budget),
                    Arch::Regular => expressibility_regular(
                        &circuit,
                        &budget,
                        HistogramConfig::standard(circuit.num_qubits),
                    ),
                };
                let initializer = match config.architecture {
                    Arch::Hybrid => Initializer::RandomQeInputs,
                    Arch::Regular => Initializer::ZeroState,
                };
                let (entgl, _) = entanglement_metric(&circuit, &budget, initializer);
                let complexity = circuit.complexity();
                let l = objective_lpqc(expr.mean, entgl, complexity, &caps);
                Some((l, expr.mean, entgl, complexity, start.elapsed().as_millis() as u64))
            })
            .collect();

        for ((t, genome, hash, _), eval) in batch.into_iter().zip(evals) {
            let record = match eval {
                None => TrialRecord {
                    trial: t,
                    genome_hash: format!("{hash:016x}"),
                    skipped: true,
                    l_pqc: f64::NAN,
                    expr: f64::NAN,
                    entgl: f64::NAN,
                    params: 0,
                    depth: 0,
                    gates: 0,
                    wall_ms: 0,
                },
                Some((l, expr, entgl, c, wall_ms)) => {
                    surrogate.observe(&genome, l);
                    let entry = ranked.entry(hash).or_insert_with(|| RankedGenome {
                        genome: genome.clone(),
                        hash,
                        l_pqc: l,
                        expr,
                        entgl,
                        complexity: c,
                        first_seen: t,
                    });
                    if l < entry.l_pqc {
                        entry.l_pqc = l;
                        entry.expr = expr;
                        entry.entgl = entgl;
                    }
                    TrialRecord {
                        trial: t,
                        genome_hash: format!("{hash:016x}"),
                        skipped: false,
                        l_pqc: l,
                        expr,
                        entgl,
                        params: c.params,
                        depth: c.depth,
                        gates: c.gates,
                        wall_ms,
                    }
                }
            };
            log.records.push(record);
        }
        surrogate.refit();
        trial += batch_len;
    }

    let mut best: Vec<RankedGenome> = ranked.into_values().collect();
    best.sort_by(|a, b| {
        a.l_pqc
            .partial_cmp(&b.l_pqc)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.complexity.params.cmp(&b.complexity.params))
            .then(a.complexity.gates.cmp(&b.complexity.gates))
            .then(a.complexity.depth.cmp(&b.complexity.depth))
            .then(a.first_seen.cmp(&b.first_seen))
    });
    Ok((best, log))
}
