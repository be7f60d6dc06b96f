use rand::Rng;

use super::genome::{Genome, GenomeSlot, ParamAssignment};
use crate::metrics::ThresholdSet;
use crate::sim::GateKind;

/// Proposal policy: pure uniform sampling over the slot grammar, or the
/// density-ratio model over observed trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurrogateMode {
    Random,
    DensityRatio,
}

/// Trials to gather before the model starts steering proposals.
const STARTUP_TRIALS: usize = 64;
/// Candidates scored per guided proposal.
const CANDIDATES: usize = 16;
/// Quantile splitting good observations from the rest.
const GAMMA: f64 = 0.2;
/// Parameter-reuse probability of the uniform prior.
const PRIOR_REUSE: f64 = 0.3;

struct Observation {
    kinds: Vec<GateKind>,
    len: usize,
    l_pqc: f64,
}

struct Fitted {
    good_kind: Vec<f64>,
    good_kind_logp: Vec<f64>,
    bad_kind_logp: Vec<f64>,
    good_len: Vec<f64>,
    good_len_logp: Vec<f64>,
    bad_len_logp: Vec<f64>,
    good_reuse: f64,
}

/// Tree-structured density-ratio surrogate over the categorical genome
/// grammar: gate-kind and length distributions are fit separately to the
/// best quantile and the rest; proposals sample the good model and keep
/// the candidate with the highest likelihood ratio.
pub struct Surrogate {
    num_qubits: usize,
    mode: SurrogateMode,
    vocabulary: Vec<GateKind>,
    observations: Vec<Observation>,
    fitted: Option<Fitted>,
}

impl Surrogate {
    pub fn new(num_qubits: usize, mode: SurrogateMode) -> Self {
        let vocabulary: Vec<GateKind> = GateKind::ALL
            .into_iter()
            .filter(|k| k.arity() <= num_qubits)
            .collect();
        Surrogate {
            num_qubits,
            mode,
            vocabulary,
            observations: Vec::new(),
            fitted: None,
        }
    }

    pub fn observe(&mut self, genome: &Genome, l_pqc: f64) {
        self.observations.push(Observation {
            kinds: genome.slots.iter().map(|s| s.kind).collect(),
            len: genome.slots.len(),
            l_pqc,
        });
    }

    /// Refit the good/bad split; called between proposal batches so the
    /// model only ever updates under a single writer.
    pub fn refit(&mut self) {
        if self.mode == SurrogateMode::Random || self.observations.len() < STARTUP_TRIALS {
            return;
        }
        let mut order: Vec<usize> = (0..self.observations.len()).collect();
        order.sort_by(|&a, &b| {
            let la = self.observations[a].l_pqc;
            let lb = self.observations[b].l_pqc;
            la.partial_cmp(&lb).unwrap_or_else(|| {
                // NaN / inf sink to the bad side
                la.is_finite().cmp(&lb.is_finite()).reverse()
            })
        });
        let split = ((order.len() as f64 * GAMMA).ceil() as usize).max(1);
        let max_len = 5 * self.num_qubits;
        let vocab = self.vocabulary.len();

        let mut good_kind = vec![1.0f64; vocab]; // Laplace smoothing
        let mut bad_kind = vec![1.0f64; vocab];
        let mut good_len = vec![1.0f64; max_len + 1];
        let mut bad_len = vec![1.0f64; max_len + 1];
        let kind_index = |k: GateKind| self.vocabulary.iter().position(|&v| v == k).unwrap();
        for (rank, &idx) in order.iter().enumerate() {
            let obs = &self.observations[idx];
            let (kinds, lens) = if rank < split {
                (&mut good_kind, &mut good_len)
            } else {
                (&mut bad_kind, &mut bad_len)
            };
            for &k in &obs.kinds {
                kinds[kind_index(k)] += 1.0;
            }
            lens[obs.len.min(max_len)] += 1.0;
        }
        let normalize = |v: &mut Vec<f64>| {
            let total: f64 = v.iter().sum();
            for x in v.iter_mut() {
                *x /= total;
            }
        };
        normalize(&mut good_kind);
        normalize(&mut bad_kind);
        normalize(&mut good_len);
        normalize(&mut bad_len);
        self.fitted = Some(Fitted {
            good_kind_logp: good_kind.iter().map(|p| p.ln()).collect(),
            bad_kind_logp: bad_kind.iter().map(|p| p.ln()).collect(),
            good_len_logp: good_len.iter().map(|p| p.ln()).collect(),
            bad_len_logp: bad_len.iter().map(|p| p.ln()).collect(),
            good_kind,
            good_len,
            good_reuse: PRIOR_REUSE,
        });
    }

    /// Propose a cap-satisfying genome.
    pub fn propose<R: Rng>(&self, caps: &ThresholdSet, rng: &mut R) -> Genome {
        match (&self.fitted, self.mode) {
            (Some(f), SurrogateMode::DensityRatio) => {
                let mut best: Option<(f64, Genome)> = None;
                for _ in 0..CANDIDATES {
                    let g = self.sample_genome(caps, rng, Some(f));
                    let score = self.likelihood_ratio(&g, f);
                    if best.as_ref().is_none_or(|(s, _)| score > *s) {
                        best = Some((score, g));
                    }
                }
                best.expect("candidates generated").1
            }
            _ => self.sample_genome(caps, rng, None),
        }
    }

    fn likelihood_ratio(&self, genome: &Genome, f: &Fitted) -> f64 {
        let kind_index = |k: GateKind| self.vocabulary.iter().position(|&v| v == k).unwrap();
        let mut score = 0.0;
        for slot in &genome.slots {
            let i = kind_index(slot.kind);
            score += f.good_kind_logp[i] - f.bad_kind_logp[i];
        }
        let len = genome.slots.len().min(f.good_len_logp.len() - 1);
        score + f.good_len_logp[len] - f.bad_len_logp[len]
    }

    fn sample_kind<R: Rng>(&self, rng: &mut R, fitted: Option<&Fitted>) -> GateKind {
        match fitted {
            Some(f) => {
                let mut x: f64 = rng.gen_range(0.0..1.0);
                for (i, &p) in f.good_kind.iter().enumerate() {
                    x -= p;
                    if x <= 0.0 {
                        return self.vocabulary[i];
                    }
                }
                *self.vocabulary.last().unwrap()
            }
            None => self.vocabulary[rng.gen_range(0..self.vocabulary.len())],
        }
    }

    fn sample_len<R: Rng>(&self, caps: &ThresholdSet, rng: &mut R, fitted: Option<&Fitted>) -> usize {
        if let Some(f) = fitted {
            let mut x: f64 = rng.gen_range(0.0..1.0);
            for (len, &p) in f.good_len.iter().enumerate() {
                x -= p;
                if x <= 0.0 {
                    return len.clamp(1, caps.gates_max);
                }
            }
        }
        rng.gen_range(1..=caps.gates_max)
    }

    fn sample_genome<R: Rng>(&self, caps: &ThresholdSet, rng: &mut R, fitted: Option<&Fitted>) -> Genome {
        let target_len = self.sample_len(caps, rng, fitted);
        let reuse_prob = fitted.map_or(PRIOR_REUSE, |f| f.good_reuse);
        let mut slots: Vec<GenomeSlot> = Vec::with_capacity(target_len);
        let mut fresh = 0usize;
        let mut last_layer = vec![0usize; self.num_qubits];
        while slots.len() < target_len {
            let kind = self.sample_kind(rng, fitted);
            let qubits: Vec<usize> = sample_distinct(self.num_qubits, kind.arity(), rng);
            let mut params = Vec::with_capacity(kind.num_params());
            let mut ok = true;
            let mut fresh_here = 0usize;
            for _ in 0..kind.num_params() {
                let can_fresh = fresh + fresh_here < caps.params_max;
                let must_reuse = !can_fresh;
                let reuse = fresh + fresh_here > 0 && (must_reuse || rng.gen_bool(reuse_prob));
                if reuse {
                    params.push(ParamAssignment::Reuse(rng.gen_range(0..fresh + fresh_here)));
                } else if can_fresh {
                    params.push(ParamAssignment::Fresh);
                    fresh_here += 1;
                } else {
                    ok = false;
                    break;
                }
            }
            if !ok {
                break; // no parameter budget left for trainable gates
            }
            let layer = qubits.iter().map(|&q| last_layer[q]).max().unwrap() + 1;
            if layer > caps.depth_max {
                break;
            }
            for &q in &qubits {
                last_layer[q] = layer;
            }
            fresh += fresh_here;
            slots.push(GenomeSlot {
                kind,
                qubits,
                params,
            });
        }
        Genome {
            num_qubits: self.num_qubits,
            slots,
        }
    }
}

fn sample_distinct<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<usize> {
    let mut picked = Vec::with_capacity(count);
    while picked.len() < count {
        let q = rng.gen_range(0..n);
        if !picked.contains(&q) {
            picked.push(q);
        }
    }
    picked
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Arch;
    use rand::SeedableRng;

    fn caps(q: usize) -> ThresholdSet {
        ThresholdSet::standard(Arch::Regular, q)
    }

    #[test]
    fn proposals_always_decode_within_caps() {
        let caps2 = caps(2);
        let s = Surrogate::new(2, SurrogateMode::Random);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10_000 {
            let g = s.propose(&caps2, &mut rng);
            g.decode(&caps2).expect("within caps");
        }
    }

    #[test]
    fn one_qubit_vocabulary_has_no_two_qubit_gates() {
        let s = Surrogate::new(1, SurrogateMode::Random);
        assert!(s.vocabulary.iter().all(|k| k.arity() == 1));
    }

    #[test]
    fn surrogate_shifts_toward_gates_that_score_well() {
        // synthetic history: genomes with entangling gates get low
        // objective values, single-qubit-only genomes get high ones
        let caps2 = caps(2);
        let mut s = Surrogate::new(2, SurrogateMode::DensityRatio);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let random = Surrogate::new(2, SurrogateMode::Random);
        for _ in 0..200 {
            let g = random.propose(&caps2, &mut rng);
            let entangling = g.slots.iter().filter(|x| x.kind.arity() == 2).count();
            let l = if entangling * 2 >= g.slots.len().max(1) {
                0.5
            } else {
                1.5
            };
            s.observe(&g, l);
        }
        s.refit();

        let frequency = |s: &Surrogate, rng: &mut rand_chacha::ChaCha8Rng| {
            let mut entangling = 0usize;
            let mut total = 0usize;
            for _ in 0..1_000 {
                let g = s.propose(&caps2, rng);
                entangling += g.slots.iter().filter(|x| x.kind.arity() == 2).count();
                total += g.slots.len();
            }
            entangling as f64 / total.max(1) as f64
        };
        let guided = frequency(&s, &mut rng);
        let uniform = frequency(&random, &mut rng);
        assert!(
            guided > uniform,
            "guided {guided:.3} should exceed uniform {uniform:.3}"
        );
    }
}
