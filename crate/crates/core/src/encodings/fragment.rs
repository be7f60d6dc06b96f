use serde::{Deserialize, Serialize};

use super::collapse::{decompose_u3, CollapsedU3};
use super::{encode_dqe, encode_qe, encode_ue, encode_wue, mat2_mul, EncodingKind};
use crate::sim::{gate_matrix, GateKind, GateMatrix, Mat2, SimError, MAT2_ID};

/// A 2D grid of real values (pixels in `[0, pi)` once prepared).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Image {
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<f64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        assert_eq!(pixels.len(), rows * cols);
        Image { rows, cols, pixels }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Image {
            rows,
            cols,
            pixels: vec![0.0; rows * cols],
        }
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.pixels[r * self.cols + c]
    }
}

/// One convolution-mimicking layer of the fragment encoding: a kernel
/// swept at `stride`, with one trainable gate kind applied per kernel
/// position (weights tied across windows).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentLayer {
    pub kernel: (usize, usize),
    pub stride: usize,
    pub gate: GateKind,
}

impl FragmentLayer {
    pub fn square(k: usize, stride: usize, gate: GateKind) -> Self {
        FragmentLayer {
            kernel: (k, k),
            stride,
            gate,
        }
    }
}

/// The full fragment-encoding cascade: a base single-qubit embedding
/// followed by the layer stack. The product of layer reductions maps the
/// image onto the output qubit grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentSpec {
    pub layers: Vec<FragmentLayer>,
    pub base_encoding: EncodingKind,
}

impl FragmentSpec {
    /// The standard cascade used in the grid search: square 2x2 kernels
    /// at stride 2, one trainable gate kind per layer.
    pub fn stride2(gates: &[GateKind], base: EncodingKind) -> Self {
        FragmentSpec {
            layers: gates
                .iter()
                .map(|&g| FragmentLayer::square(2, 2, g))
                .collect(),
            base_encoding: base,
        }
    }

    fn layer_grid(&self, mut rows: usize, mut cols: usize) -> Result<Vec<(usize, usize)>, SimError> {
        let mut dims = Vec::with_capacity(self.layers.len() + 1);
        dims.push((rows, cols));
        for (i, layer) in self.layers.iter().enumerate() {
            let (kr, kc) = layer.kernel;
            if kr == 0 || kc == 0 || layer.stride == 0 {
                return Err(SimError::Contract(format!("layer {i} has a zero extent")));
            }
            if rows < kr || cols < kc || (rows - kr) % layer.stride != 0 || (cols - kc) % layer.stride != 0
            {
                return Err(SimError::Contract(format!(
                    "layer {i} kernel {kr}x{kc}/stride {} does not tile a {rows}x{cols} grid",
                    layer.stride
                )));
            }
            rows = (rows - kr) / layer.stride + 1;
            cols = (cols - kc) / layer.stride + 1;
            dims.push((rows, cols));
        }
        Ok(dims)
    }

    /// Output qubit grid for an input of the given size.
    pub fn output_grid(&self, rows: usize, cols: usize) -> Result<(usize, usize), SimError> {
        Ok(*self.layer_grid(rows, cols)?.last().unwrap())
    }

    /// Trainable positions in one window of `layer` (kernel cells for
    /// inner layers; encoded units for layer 0).
    pub fn positions(&self, layer: usize) -> usize {
        let (kr, kc) = self.layers[layer].kernel;
        let cells = kr * kc;
        if layer == 0 {
            cells.div_ceil(self.base_encoding.values_per_unit())
        } else {
            cells
        }
    }

    /// Total trainable parameter count: WUE angle/weights (when used)
    /// plus one gate's parameters per layer position.
    pub fn num_params(&self) -> usize {
        let mut n = 0;
        if self.base_encoding == EncodingKind::Wue && !self.layers.is_empty() {
            n += 1 + 3 * self.positions(0);
        }
        for (l, layer) in self.layers.iter().enumerate() {
            n += self.positions(l) * layer.gate.num_params();
        }
        n
    }

    fn wue_params(&self) -> usize {
        if self.base_encoding == EncodingKind::Wue && !self.layers.is_empty() {
            1 + 3 * self.positions(0)
        } else {
            0
        }
    }

    /// Offset of `layer`'s gate parameters inside the weight vector.
    fn layer_offset(&self, layer: usize) -> usize {
        let mut off = self.wue_params();
        for l in 0..layer {
            off += self.positions(l) * self.layers[l].gate.num_params();
        }
        off
    }
}

fn trainable_matrix(gate: GateKind, params: &[f64]) -> Mat2 {
    match gate_matrix(gate, params).expect("single-qubit trainable gate") {
        GateMatrix::Single(m) => m,
        GateMatrix::Two(_) => unreachable!("fragment gates are single-qubit"),
    }
}

/// Per-qubit gate chain in application order (first applied first). Kept
/// alongside the folded product so collapse equivalence can be checked.
type CellChain = Vec<Mat2>;

fn encode_window(
    values: &[f64],
    spec: &FragmentSpec,
    weights: &[f64],
) -> Result<Vec<Mat2>, SimError> {
    match spec.base_encoding {
        EncodingKind::Qe => encode_qe(values),
        EncodingKind::Dqe => encode_dqe(values),
        EncodingKind::Ue => encode_ue(values),
        EncodingKind::Wue => {
            let groups = values.len().div_ceil(3);
            encode_wue(values, weights[0], &weights[1..1 + 3 * groups])
        }
    }
}

fn run_cascade(
    image: &Image,
    spec: &FragmentSpec,
    weights: &[f64],
    keep_chains: bool,
) -> Result<(Vec<Mat2>, Vec<CellChain>, (usize, usize)), SimError> {
    if spec.layers.is_empty() {
        return Err(SimError::Contract("fragment spec has no layers".into()));
    }
    if weights.len() != spec.num_params() {
        return Err(SimError::Contract(format!(
            "fragment spec takes {} weights, got {}",
            spec.num_params(),
            weights.len()
        )));
    }
    let dims = spec.layer_grid(image.rows, image.cols)?;

    // Layer 0: encode pixels window by window.
    let layer0 = &spec.layers[0];
    let (kr, kc) = layer0.kernel;
    let (g0r, g0c) = dims[1];
    let off0 = spec.layer_offset(0);
    let nparams0 = layer0.gate.num_params();
    let mut cells: Vec<Mat2> = Vec::with_capacity(g0r * g0c);
    let mut chains: Vec<CellChain> = Vec::new();
    for wr in 0..g0r {
        for wc in 0..g0c {
            let mut values = Vec::with_capacity(kr * kc);
            for r in 0..kr {
                for c in 0..kc {
                    values.push(image.at(wr * layer0.stride + r, wc * layer0.stride + c));
                }
            }
            let units = encode_window(&values, spec, weights)?;
            let mut product = MAT2_ID;
            let mut chain = CellChain::new();
            // left-most factor is position 0; applied last
            for (p, unit) in units.iter().enumerate() {
                let u = trainable_matrix(
                    layer0.gate,
                    &weights[off0 + p * nparams0..off0 + (p + 1) * nparams0],
                );
                product = mat2_mul(&product, &mat2_mul(&u, unit));
            }
            if keep_chains {
                for (p, unit) in units.iter().enumerate().rev() {
                    let u = trainable_matrix(
                        layer0.gate,
                        &weights[off0 + p * nparams0..off0 + (p + 1) * nparams0],
                    );
                    chain.push(*unit);
                    chain.push(u);
                }
                chains.push(chain);
            }
            cells.push(product);
        }
    }

    // Inner layers fold windows of previously built cells.
    let mut grid = dims[1];
    for (l, layer) in spec.layers.iter().enumerate().skip(1) {
        let (kr, kc) = layer.kernel;
        let (out_r, out_c) = dims[l + 1];
        let off = spec.layer_offset(l);
        let np = layer.gate.num_params();
        let mut next_cells = Vec::with_capacity(out_r * out_c);
        let mut next_chains = Vec::new();
        for wr in 0..out_r {
            for wc in 0..out_c {
                let mut product = MAT2_ID;
                let mut chain = CellChain::new();
                let mut pos = 0;
                for r in 0..kr {
                    for c in 0..kc {
                        let idx = (wr * layer.stride + r) * grid.1 + (wc * layer.stride + c);
                        let u = trainable_matrix(layer.gate, &weights[off + pos * np..off + (pos + 1) * np]);
                        product = mat2_mul(&product, &mat2_mul(&u, &cells[idx]));
                        pos += 1;
                    }
                }
                if keep_chains {
                    let mut pos = kr * kc;
                    for r in (0..kr).rev() {
                        for c in (0..kc).rev() {
                            pos -= 1;
                            let idx = (wr * layer.stride + r) * grid.1 + (wc * layer.stride + c);
                            let u = trainable_matrix(
                                layer.gate,
                                &weights[off + pos * np..off + (pos + 1) * np],
                            );
                            chain.extend_from_slice(&chains[idx]);
                            chain.push(u);
                        }
                    }
                    next_chains.push(chain);
                }
                next_cells.push(product);
            }
        }
        cells = next_cells;
        chains = next_chains;
        grid = (out_r, out_c);
    }
    Ok((cells, chains, grid))
}

/// Compile `image` into one collapsed U3 per output qubit (row-major
/// over the final fragment grid). Applying these to |0...0> prepares the
/// encoded input state.
pub fn fragment_encode(
    image: &Image,
    spec: &FragmentSpec,
    weights: &[f64],
) -> Result<Vec<CollapsedU3>, SimError> {
    let (cells, _, _) = run_cascade(image, spec, weights, false)?;
    Ok(cells.iter().map(decompose_u3).collect())
}

/// The uncollapsed per-qubit gate chains, first-applied first. Used to
/// check that collapsing preserves the prepared state.
pub fn fragment_gate_chains(
    image: &Image,
    spec: &FragmentSpec,
    weights: &[f64],
) -> Result<Vec<Vec<Mat2>>, SimError> {
    let (_, chains, _) = run_cascade(image, spec, weights, true)?;
    Ok(chains)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encodings::collapse_u3;
    use crate::sim::{ry_mat, rz_mat};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn mat_close(a: &Mat2, b: &Mat2, eps: f64) -> bool {
        (0..2).all(|r| (0..2).all(|c| (a[r][c] - b[r][c]).norm() < eps))
    }

    #[test]
    fn qe_zero_trainables_sum_ry() {
        // one 2x2 layer over a 2x2 image with Ry trainables at zero:
        // the product is Ry of the pixel sum
        let image = Image::new(2, 2, vec![0.3, 0.5, 0.7, 0.9]);
        let spec = FragmentSpec::stride2(&[GateKind::Ry], EncodingKind::Qe);
        assert_eq!(spec.num_params(), 4);
        let out = fragment_encode(&image, &spec, &[0.0; 4]).unwrap();
        assert_eq!(out.len(), 1);
        let expected = ry_mat(0.3 + 0.5 + 0.7 + 0.9);
        assert!(mat_close(&out[0].matrix(), &expected, 1e-12));
    }

    #[test]
    fn dqe_two_trainables_per_kernel() {
        // DQE packs 2 pixels per unit, so a 2x2 kernel carries two
        // trainable gates: (U1 Rz(x3) Ry(x2)) (U0 Rz(x1) Ry(x0)).
        let px = [0.2, 0.4, 0.6, 0.8];
        let image = Image::new(2, 2, px.to_vec());
        let spec = FragmentSpec::stride2(&[GateKind::Rz], EncodingKind::Dqe);
        assert_eq!(spec.positions(0), 2);
        assert_eq!(spec.num_params(), 2);
        let w = [0.15, 0.25];
        let out = fragment_encode(&image, &spec, &w).unwrap();

        let unit0 = mat2_mul(&rz_mat(px[1]), &ry_mat(px[0]));
        let unit1 = mat2_mul(&rz_mat(px[3]), &ry_mat(px[2]));
        let block0 = mat2_mul(&rz_mat(w[0]), &unit0);
        let block1 = mat2_mul(&rz_mat(w[1]), &unit1);
        let expected = mat2_mul(&block0, &block1);
        assert!(mat_close(&out[0].matrix(), &expected, 1e-12));
    }

    #[test]
    fn two_layer_nesting_matches_explicit_product() {
        // 4x4 image, two 2x2/stride-2 layers -> one qubit; the 16-factor
        // ordering follows the nested row-major traversal with the outer
        // layer's weight leading each block.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let pixels: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..3.0)).collect();
        let image = Image::new(4, 4, pixels.clone());
        let spec = FragmentSpec::stride2(&[GateKind::Ry, GateKind::Ry], EncodingKind::Qe);
        assert_eq!(spec.num_params(), 8);
        let w: Vec<f64> = (0..8).map(|_| rng.gen_range(0.0..1.0)).collect();
        let out = fragment_encode(&image, &spec, &w).unwrap();
        assert_eq!(out.len(), 1);

        // oracle: explicit matrix product in the nested order
        let at = |r: usize, c: usize| pixels[r * 4 + c];
        let inner = |br: usize, bc: usize| {
            // block of layer-0 at block row/col; kernel positions row-major
            let mut p = MAT2_ID;
            let mut pos = 0;
            for r in 0..2 {
                for c in 0..2 {
                    let u = ry_mat(w[pos]);
                    let e = ry_mat(at(2 * br + r, 2 * bc + c));
                    p = mat2_mul(&p, &mat2_mul(&u, &e));
                    pos += 1;
                }
            }
            p
        };
        let mut full = MAT2_ID;
        let mut pos = 0;
        for br in 0..2 {
            for bc in 0..2 {
                let u = ry_mat(w[4 + pos]);
                full = mat2_mul(&full, &mat2_mul(&u, &inner(br, bc)));
                pos += 1;
            }
        }
        assert!(mat_close(&out[0].matrix(), &full, 1e-10));
    }

    #[test]
    fn collapse_equivalence_on_prepared_state() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let pixels: Vec<f64> = (0..16).map(|_| rng.gen_range(0.0..3.0)).collect();
        let image = Image::new(4, 4, pixels);
        let spec = FragmentSpec::stride2(&[GateKind::U3, GateKind::Rx], EncodingKind::Qe);
        let w: Vec<f64> = (0..spec.num_params())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();

        let collapsed = fragment_encode(&image, &spec, &w).unwrap();
        let chains = fragment_gate_chains(&image, &spec, &w).unwrap();
        assert_eq!(collapsed.len(), chains.len());
        for (c, chain) in collapsed.iter().zip(&chains) {
            let via_chain = collapse_u3(chain).unwrap();
            // same state up to global phase
            let a = c.prepared_state();
            let b = via_chain.prepared_state();
            let overlap = (a.0.conj() * b.0 + a.1.conj() * b.1).norm_sqr();
            assert!(overlap > 1.0 - 1e-12, "fidelity {overlap}");
        }
    }

    #[test]
    fn shape_mismatch_rejected() {
        let image = Image::zeros(3, 3);
        let spec = FragmentSpec::stride2(&[GateKind::Ry], EncodingKind::Qe);
        assert!(fragment_encode(&image, &spec, &[0.0; 4]).is_err());
    }

    #[test]
    fn weight_count_mismatch_rejected() {
        let image = Image::zeros(2, 2);
        let spec = FragmentSpec::stride2(&[GateKind::Ry], EncodingKind::Qe);
        assert!(fragment_encode(&image, &spec, &[0.0; 3]).is_err());
    }

    #[test]
    fn grid_bookkeeping_through_cascade() {
        let spec = FragmentSpec::stride2(
            &[GateKind::Ry, GateKind::Ry, GateKind::Ry],
            EncodingKind::Qe,
        );
        assert_eq!(spec.output_grid(32, 32).unwrap(), (4, 4));
        assert_eq!(
            FragmentSpec::stride2(&[GateKind::Ry; 5], EncodingKind::Qe)
                .output_grid(32, 32)
                .unwrap(),
            (1, 1)
        );
    }

    #[test]
    fn wue_base_params_and_encode() {
        // 3x3 kernel with WUE: 3 units, so 1 + 9 weights + per-unit gate
        let spec = FragmentSpec {
            layers: vec![FragmentLayer::square(3, 3, GateKind::Rx)],
            base_encoding: EncodingKind::Wue,
        };
        assert_eq!(spec.positions(0), 3);
        assert_eq!(spec.num_params(), 1 + 9 + 3);
        let image = Image::zeros(3, 3);
        let w = vec![0.0; spec.num_params()];
        let out = fragment_encode(&image, &spec, &w).unwrap();
        assert_eq!(out.len(), 1);
        // zero weights and zero angles leave the identity
        assert_abs_diff_eq!(out[0].theta, 0.0, epsilon = 1e-12);
    }
}
