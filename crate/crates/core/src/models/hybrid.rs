use serde::{Deserialize, Serialize};

use super::pooling::pooling_unitary;
use super::regular::ConvRef;
use crate::encodings::Image;
use crate::metrics::Arch;
use crate::sim::{gate_matrix, ry_mat, GateMatrix, ParameterizedCircuit, SimError, StateVector};

/// How a hybrid layer's convolution circuit covers the receptive field:
/// Type I runs a k-qubit circuit per row and once over the measured
/// column, Type II runs a k^2-qubit circuit over the whole field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HybridVariant {
    TypeI,
    TypeII,
}

/// One hybrid layer: a kernel swept at `stride`, convolved by `conv`,
/// optionally folded by pooling before the measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridLayer {
    pub kernel: usize,
    pub stride: usize,
    pub conv: ConvRef,
    pub pooling: bool,
}

/// Hybrid QCNN: every kernel application measures the last qubit and the
/// probability is re-encoded classically into the next layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridModel {
    pub name: String,
    pub variant: HybridVariant,
    pub layers: Vec<HybridLayer>,
}

struct ResolvedLayer {
    kernel: usize,
    stride: usize,
    conv: ParameterizedCircuit,
    pooling: bool,
    offset: usize,
}

/// Parameter offsets and resolved circuits for a hybrid model.
pub struct HybridPlan {
    layers: Vec<ResolvedLayer>,
    total_params: usize,
}

impl HybridPlan {
    pub fn num_params(&self) -> usize {
        self.total_params
    }
}

impl HybridModel {
    pub fn plan(&self) -> Result<HybridPlan, SimError> {
        let mut offset = 0;
        let mut layers = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            if layer.kernel == 0 || layer.stride == 0 {
                return Err(SimError::Contract("zero kernel or stride".into()));
            }
            let circuit_qubits = match self.variant {
                HybridVariant::TypeI => layer.kernel,
                HybridVariant::TypeII => layer.kernel * layer.kernel,
            };
            let conv = layer.conv.resolve_for(circuit_qubits.max(1), Arch::Hybrid)?;
            let n = conv.num_params + if layer.pooling { 2 } else { 0 };
            layers.push(ResolvedLayer {
                kernel: layer.kernel,
                stride: layer.stride,
                conv,
                pooling: layer.pooling,
                offset,
            });
            offset += n;
        }
        Ok(HybridPlan {
            layers,
            total_params: offset,
        })
    }

    pub fn num_params(&self) -> Result<usize, SimError> {
        Ok(self.plan()?.num_params())
    }

    /// Forward pass: per layer, every receptive field is encoded, run
    /// through the convolution and measured exactly; the probability
    /// scaled by pi feeds the next layer. The cascade must end on a
    /// single cell, whose probability is the output.
    pub fn forward(&self, image: &Image, params: &[f64], plan: &HybridPlan) -> Result<f64, SimError> {
        if params.len() != plan.total_params {
            return Err(SimError::DimensionMismatch(format!(
                "model takes {} parameters, got {}",
                plan.total_params,
                params.len()
            )));
        }
        let mut current = image.clone();
        let mut last_prob: Option<f64> = None;
        for layer in &plan.layers {
            let (k, s) = (layer.kernel, layer.stride);
            if current.rows < k
                || current.cols < k
                || (current.rows - k) % s != 0
                || (current.cols - k) % s != 0
            {
                return Err(SimError::DimensionMismatch(format!(
                    "kernel {k}/stride {s} does not tile a {}x{} feature map",
                    current.rows, current.cols
                )));
            }
            let out_r = (current.rows - k) / s + 1;
            let out_c = (current.cols - k) / s + 1;
            let mut probs = Vec::with_capacity(out_r * out_c);
            for wr in 0..out_r {
                for wc in 0..out_c {
                    let mut window = Vec::with_capacity(k * k);
                    for r in 0..k {
                        for c in 0..k {
                            window.push(current.at(wr * s + r, wc * s + c));
                        }
                    }
                    probs.push(self.window_prob(&window, k, layer, params)?);
                }
            }
            last_prob = Some(*probs.last().unwrap());
            current = Image::new(
                out_r,
                out_c,
                probs.iter().map(|p| p * std::f64::consts::PI).collect(),
            );
        }
        match last_prob {
            Some(p) if current.rows == 1 && current.cols == 1 => Ok(p),
            _ => Err(SimError::Contract(format!(
                "layer cascade ends on a {}x{} map instead of a single cell",
                current.rows, current.cols
            ))),
        }
    }

    fn window_prob(
        &self,
        window: &[f64],
        k: usize,
        layer: &ResolvedLayer,
        params: &[f64],
    ) -> Result<f64, SimError> {
        let conv_params = &params[layer.offset..layer.offset + layer.conv.num_params];
        let pool_params = layer
            .pooling
            .then(|| &params[layer.offset + layer.conv.num_params..layer.offset + layer.conv.num_params + 2]);
        match self.variant {
            HybridVariant::TypeII => {
                measure_register(window, &layer.conv, conv_params, pool_params)
            }
            HybridVariant::TypeI => {
                if k == 1 {
                    return measure_register(window, &layer.conv, conv_params, pool_params);
                }
                // rows first, then the measured values form the column
                let mut row_probs = Vec::with_capacity(k);
                for row in window.chunks(k) {
                    row_probs.push(measure_register(row, &layer.conv, conv_params, None)?);
                }
                let column: Vec<f64> = row_probs
                    .iter()
                    .map(|p| p * std::f64::consts::PI)
                    .collect();
                measure_register(&column, &layer.conv, conv_params, pool_params)
            }
        }
    }
}

/// Qubit-encode `angles`, run the circuit, optionally fold with the
/// pooling tree, and read the last qubit's exact |1> probability.
fn measure_register(
    angles: &[f64],
    conv: &ParameterizedCircuit,
    conv_params: &[f64],
    pool_params: Option<&[f64]>,
) -> Result<f64, SimError> {
    let n = angles.len();
    if conv.num_qubits != n {
        return Err(SimError::DimensionMismatch(format!(
            "conv circuit on {} qubits, register has {n}",
            conv.num_qubits
        )));
    }
    let factors: Vec<_> = angles
        .iter()
        .map(|&a| {
            let m = ry_mat(a);
            (m[0][0], m[1][0])
        })
        .collect();
    let mut state = StateVector::product_state(&factors);
    for gate in &conv.gates {
        let bound = conv.gate_params(gate, conv_params);
        match gate_matrix(gate.kind, &bound)? {
            GateMatrix::Single(m) => state.apply_mat2(gate.qubits[0], &m)?,
            GateMatrix::Two(m) => state.apply_mat4(gate.qubits[0], gate.qubits[1], &m)?,
        }
    }
    if let Some(p) = pool_params {
        let u = pooling_unitary(p[0], p[1]);
        let mut active: Vec<usize> = (0..n).collect();
        while active.len() > 1 {
            let mut next = Vec::with_capacity(active.len() / 2 + 1);
            let mut i = 0;
            while i + 1 < active.len() {
                state.apply_mat4(active[i], active[i + 1], &u)?;
                next.push(active[i + 1]);
                i += 2;
            }
            if i < active.len() {
                next.push(active[i]);
            }
            active = next;
        }
    }
    state.prob_one(n - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::BaselineId;
    use crate::sim::ParameterizedCircuit;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn identity_conv(qubits: usize) -> ConvRef {
        ConvRef::Inline(ParameterizedCircuit::empty(qubits))
    }

    #[test]
    fn identity_conv_on_blank_input_measures_zero() {
        let model = HybridModel {
            name: "t2-identity".into(),
            variant: HybridVariant::TypeII,
            layers: vec![HybridLayer {
                kernel: 2,
                stride: 2,
                conv: identity_conv(4),
                pooling: false,
            }],
        };
        let plan = model.plan().unwrap();
        let out = model
            .forward(&Image::zeros(2, 2), &[], &plan)
            .unwrap();
        assert_abs_diff_eq!(out, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn types_agree_for_1x1_kernels() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let layer = |conv: ConvRef| HybridLayer {
            kernel: 1,
            stride: 1,
            conv,
            pooling: false,
        };
        let conv = ConvRef::Inline(
            ParameterizedCircuit::new(
                1,
                vec![
                    crate::sim::app(crate::sim::GateKind::Ry, &[0], &[0]),
                    crate::sim::app(crate::sim::GateKind::Rz, &[0], &[1]),
                ],
            )
            .unwrap(),
        );
        let type1 = HybridModel {
            name: "t1".into(),
            variant: HybridVariant::TypeI,
            layers: vec![layer(conv.clone())],
        };
        let type2 = HybridModel {
            name: "t2".into(),
            variant: HybridVariant::TypeII,
            layers: vec![layer(conv)],
        };
        let p1 = type1.plan().unwrap();
        let p2 = type2.plan().unwrap();
        for _ in 0..20 {
            let img = Image::new(1, 1, vec![rng.gen_range(0.0..std::f64::consts::PI)]);
            let params = [rng.gen_range(0.0..6.28), rng.gen_range(0.0..6.28)];
            assert_abs_diff_eq!(
                type1.forward(&img, &params, &p1).unwrap(),
                type2.forward(&img, &params, &p2).unwrap(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn c1_hybrid_marginal_at_zero_angles_matches_analytic_value() {
        // At zero Rx angles the C1 layer is (diagonal CZ chain) x H-wall
        // on the encoded input. Diagonal gates keep measurement
        // marginals, so the last qubit reads H Ry(x)|0>, giving
        // P(1) = (1 - sin x)/2 for the last window pixel.
        let model = HybridModel {
            name: "t2-c1".into(),
            variant: HybridVariant::TypeII,
            layers: vec![HybridLayer {
                kernel: 2,
                stride: 2,
                conv: ConvRef::Library(BaselineId::C1),
                pooling: false,
            }],
        };
        let plan = model.plan().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let pixels: Vec<f64> = (0..4)
                .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
                .collect();
            let expected = (1.0 - pixels[3].sin()) / 2.0;
            let img = Image::new(2, 2, pixels);
            let out = model.forward(&img, &[0.0; 4], &plan).unwrap();
            assert_abs_diff_eq!(out, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn outputs_stay_in_unit_interval() {
        let model = HybridModel {
            name: "t1-c2".into(),
            variant: HybridVariant::TypeI,
            layers: vec![
                HybridLayer {
                    kernel: 2,
                    stride: 2,
                    conv: ConvRef::Library(BaselineId::C2),
                    pooling: false,
                },
                HybridLayer {
                    kernel: 2,
                    stride: 2,
                    conv: ConvRef::Library(BaselineId::C2),
                    pooling: true,
                },
            ],
        };
        let plan = model.plan().unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        for _ in 0..50 {
            let img = Image::new(
                4,
                4,
                (0..16)
                    .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
                    .collect(),
            );
            let params: Vec<f64> = (0..plan.num_params())
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect();
            let out = model.forward(&img, &params, &plan).unwrap();
            assert!((0.0..=1.0).contains(&out), "out of range: {out}");
        }
    }
}
