use serde::{Deserialize, Serialize};

use super::baselines::{baseline_circuit, BaselineId};
use super::grouped::GroupedState;
use super::pooling::{interpolation_arrows, pooling_block_arrows, pooling_unitary};
use crate::encodings::{fragment_encode, FragmentSpec, Image};
use crate::metrics::Arch;
use crate::sim::{gate_matrix, GateMatrix, Mat2, Mat4, ParameterizedCircuit, SimError, StateVector};

/// Convolution circuit reference inside a model config: a library id or
/// an inline circuit document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvRef {
    Library(BaselineId),
    Inline(ParameterizedCircuit),
}

impl ConvRef {
    pub(crate) fn resolve_for(
        &self,
        num_qubits: usize,
        arch: Arch,
    ) -> Result<ParameterizedCircuit, SimError> {
        match self {
            ConvRef::Library(id) => baseline_circuit(*id, num_qubits, arch),
            ConvRef::Inline(c) => {
                if c.num_qubits != num_qubits {
                    return Err(SimError::DimensionMismatch(format!(
                        "inline circuit on {} qubits where {num_qubits} are active",
                        c.num_qubits
                    )));
                }
                Ok(c.clone())
            }
        }
    }

    fn label(&self) -> String {
        match self {
            ConvRef::Library(id) => id.label().to_string(),
            ConvRef::Inline(_) => "inline".to_string(),
        }
    }
}

/// One layer of the regular QCNN stack after the fragment encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackLayer {
    /// 2x2-block pooling; halves both grid dimensions. Two shared
    /// angles.
    Pooling,
    /// Fold the last row and column inward; shrinks an s x s grid to
    /// (s-1) x (s-1). Two shared angles.
    Interpolation,
    /// A U3 on every active qubit with tied parameters (three angles).
    Conv1x1,
    /// A convolution circuit over all active qubits, row-major.
    Conv(ConvRef),
}

impl StackLayer {
    pub fn label(&self) -> String {
        match self {
            StackLayer::Pooling => "Pool".into(),
            StackLayer::Interpolation => "Interpol".into(),
            StackLayer::Conv1x1 => "U3".into(),
            StackLayer::Conv(c) => c.label(),
        }
    }
}

/// A regular (fully quantum) QCNN: fragment encoding into a qubit grid,
/// a stack of pooling/interpolation/convolution layers, one exact
/// readout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularModel {
    pub name: String,
    pub fragment: FragmentSpec,
    pub stack: Vec<StackLayer>,
    pub input_rows: usize,
    pub input_cols: usize,
}

enum PlannedLayer {
    Pool {
        arrows: Vec<(usize, usize)>,
        discards: Vec<usize>,
        offset: usize,
    },
    Conv1x1 {
        qubits: Vec<usize>,
        offset: usize,
    },
    Conv {
        circuit: ParameterizedCircuit,
        qubit_map: Vec<usize>,
        offset: usize,
    },
}

/// Resolved execution plan: grids walked, circuits resolved, parameter
/// offsets assigned.
pub struct RegularPlan {
    fragment_params: usize,
    layers: Vec<PlannedLayer>,
    total_params: usize,
    readout: usize,
    num_qubits: usize,
    active_after_stack: usize,
}

impl RegularPlan {
    pub fn num_params(&self) -> usize {
        self.total_params
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn readout_qubit(&self) -> usize {
        self.readout
    }

    /// Qubits still in the active set once the stack has run.
    pub fn active_count(&self) -> usize {
        self.active_after_stack
    }
}

impl RegularModel {
    /// Validate the layer bookkeeping against the input size and assign
    /// parameter offsets.
    pub fn plan(&self) -> Result<RegularPlan, SimError> {
        let (gr, gc) = self
            .fragment
            .output_grid(self.input_rows, self.input_cols)?;
        let num_qubits = gr * gc;
        let mut grid: Vec<Vec<usize>> = (0..gr)
            .map(|r| (0..gc).map(|c| r * gc + c).collect())
            .collect();
        let mut offset = self.fragment.num_params();
        let fragment_params = offset;
        let mut layers = Vec::with_capacity(self.stack.len());
        for layer in &self.stack {
            let rows = grid.len();
            let cols = grid[0].len();
            match layer {
                StackLayer::Pooling => {
                    if rows % 2 != 0 || cols % 2 != 0 {
                        return Err(SimError::Contract(format!(
                            "pooling needs even grid dimensions, got {rows}x{cols}"
                        )));
                    }
                    let arrows: Vec<(usize, usize)> = pooling_block_arrows(rows, cols)
                        .into_iter()
                        .map(|((cr, cc), (tr, tc))| (grid[cr][cc], grid[tr][tc]))
                        .collect();
                    let mut next = vec![vec![0; cols / 2]; rows / 2];
                    let mut discards = Vec::new();
                    for r in 0..rows {
                        for c in 0..cols {
                            if r % 2 == 0 && c % 2 == 0 {
                                next[r / 2][c / 2] = grid[r][c];
                            } else {
                                discards.push(grid[r][c]);
                            }
                        }
                    }
                    layers.push(PlannedLayer::Pool {
                        arrows,
                        discards,
                        offset,
                    });
                    offset += 2;
                    grid = next;
                }
                StackLayer::Interpolation => {
                    if rows < 2 || cols < 2 {
                        return Err(SimError::Contract(format!(
                            "interpolation needs at least a 2x2 grid, got {rows}x{cols}"
                        )));
                    }
                    let arrows: Vec<(usize, usize)> = interpolation_arrows(rows, cols)
                        .into_iter()
                        .map(|((cr, cc), (tr, tc))| (grid[cr][cc], grid[tr][tc]))
                        .collect();
                    let mut discards = Vec::new();
                    for r in 0..rows {
                        for c in 0..cols {
                            if r == rows - 1 || c == cols - 1 {
                                discards.push(grid[r][c]);
                            }
                        }
                    }
                    grid = grid[..rows - 1]
                        .iter()
                        .map(|row| row[..cols - 1].to_vec())
                        .collect();
                    layers.push(PlannedLayer::Pool {
                        arrows,
                        discards,
                        offset,
                    });
                    offset += 2;
                }
                StackLayer::Conv1x1 => {
                    let qubits: Vec<usize> = grid.iter().flatten().copied().collect();
                    layers.push(PlannedLayer::Conv1x1 { qubits, offset });
                    offset += 3;
                }
                StackLayer::Conv(conv) => {
                    let qubit_map: Vec<usize> = grid.iter().flatten().copied().collect();
                    let circuit = conv.resolve_for(qubit_map.len(), Arch::Regular)?;
                    let n = circuit.num_params;
                    layers.push(PlannedLayer::Conv {
                        circuit,
                        qubit_map,
                        offset,
                    });
                    offset += n;
                }
            }
        }
        let readout = *grid.iter().flatten().last().expect("nonempty grid");
        Ok(RegularPlan {
            fragment_params,
            layers,
            total_params: offset,
            readout,
            num_qubits,
            active_after_stack: grid.iter().map(|row| row.len()).sum(),
        })
    }

    pub fn num_params(&self) -> Result<usize, SimError> {
        Ok(self.plan()?.num_params())
    }

    /// Exact forward pass using the factorized evaluator; falls back to
    /// the full statevector when a merged subsystem would grow past the
    /// factorized limit.
    pub fn forward(&self, image: &Image, params: &[f64], plan: &RegularPlan) -> Result<f64, SimError> {
        match self.forward_grouped(image, params, plan) {
            Ok(p) => Ok(p),
            Err(SimError::Contract(msg)) if msg.contains("factorized limit") => {
                self.forward_statevector(image, params, plan)
            }
            Err(e) => Err(e),
        }
    }

    fn prepare_factors(
        &self,
        image: &Image,
        params: &[f64],
        plan: &RegularPlan,
    ) -> Result<Vec<(num_complex::Complex64, num_complex::Complex64)>, SimError> {
        if params.len() != plan.total_params {
            return Err(SimError::DimensionMismatch(format!(
                "model takes {} parameters, got {}",
                plan.total_params,
                params.len()
            )));
        }
        let collapsed = fragment_encode(image, &self.fragment, &params[..plan.fragment_params])?;
        if collapsed.len() != plan.num_qubits {
            return Err(SimError::DimensionMismatch(format!(
                "fragment emitted {} qubits, plan expects {}",
                collapsed.len(),
                plan.num_qubits
            )));
        }
        Ok(collapsed.iter().map(|c| c.prepared_state()).collect())
    }

    fn forward_grouped(
        &self,
        image: &Image,
        params: &[f64],
        plan: &RegularPlan,
    ) -> Result<f64, SimError> {
        let factors = self.prepare_factors(image, params, plan)?;
        let mut state = GroupedState::product(&factors);
        run_plan(&mut state, params, plan, true)?;
        state.prob_one(plan.readout)
    }

    /// Reference forward pass on the dense statevector; pooled qubits
    /// stay in the vector but are never touched again.
    pub fn forward_statevector(
        &self,
        image: &Image,
        params: &[f64],
        plan: &RegularPlan,
    ) -> Result<f64, SimError> {
        let factors = self.prepare_factors(image, params, plan)?;
        let mut state = StateVector::product_state(&factors);
        run_plan(&mut state, params, plan, false)?;
        state.prob_one(plan.readout)
    }
}

trait Evaluator {
    fn apply1(&mut self, q: usize, m: &Mat2) -> Result<(), SimError>;
    fn apply2(&mut self, first: usize, second: usize, m: &Mat4) -> Result<(), SimError>;
    fn discard(&mut self, q: usize) -> Result<(), SimError>;
}

impl Evaluator for StateVector {
    fn apply1(&mut self, q: usize, m: &Mat2) -> Result<(), SimError> {
        self.apply_mat2(q, m)
    }
    fn apply2(&mut self, first: usize, second: usize, m: &Mat4) -> Result<(), SimError> {
        self.apply_mat4(first, second, m)
    }
    fn discard(&mut self, _q: usize) -> Result<(), SimError> {
        Ok(())
    }
}

impl Evaluator for GroupedState {
    fn apply1(&mut self, q: usize, m: &Mat2) -> Result<(), SimError> {
        GroupedState::apply1(self, q, m)
    }
    fn apply2(&mut self, first: usize, second: usize, m: &Mat4) -> Result<(), SimError> {
        GroupedState::apply2(self, first, second, m)
    }
    fn discard(&mut self, q: usize) -> Result<(), SimError> {
        GroupedState::discard(self, q)
    }
}

fn run_plan<E: Evaluator>(
    state: &mut E,
    params: &[f64],
    plan: &RegularPlan,
    trace_discards: bool,
) -> Result<(), SimError> {
    for layer in &plan.layers {
        match layer {
            PlannedLayer::Pool {
                arrows,
                discards,
                offset,
            } => {
                let u = pooling_unitary(params[*offset], params[*offset + 1]);
                for &(ctrl, tgt) in arrows {
                    state.apply2(ctrl, tgt, &u)?;
                }
                if trace_discards {
                    for &q in discards {
                        state.discard(q)?;
                    }
                }
            }
            PlannedLayer::Conv1x1 { qubits, offset } => {
                let m = match gate_matrix(
                    crate::sim::GateKind::U3,
                    &params[*offset..*offset + 3],
                )? {
                    GateMatrix::Single(m) => m,
                    GateMatrix::Two(_) => unreachable!(),
                };
                for &q in qubits {
                    state.apply1(q, &m)?;
                }
            }
            PlannedLayer::Conv {
                circuit,
                qubit_map,
                offset,
            } => {
                let local = &params[*offset..*offset + circuit.num_params];
                for gate in &circuit.gates {
                    let bound = circuit.gate_params(gate, local);
                    let m = gate_matrix(gate.kind, &bound)?;
                    match m {
                        GateMatrix::Single(m2) => state.apply1(qubit_map[gate.qubits[0]], &m2)?,
                        GateMatrix::Two(m4) => state.apply2(
                            qubit_map[gate.qubits[0]],
                            qubit_map[gate.qubits[1]],
                            &m4,
                        )?,
                    }
                }
            }
        }
    }
    Ok(())
}

/// Interpolation as a standalone statevector operation: pooling
/// unitaries along the fold arrows of a `rows x cols` grid whose cell
/// (r, c) sits on qubit `r * cols + c`. The state keeps all qubits; the
/// active grid shrinks by one row and one column.
pub fn apply_interpolation(
    state: &mut StateVector,
    rows: usize,
    cols: usize,
    theta0: f64,
    theta1: f64,
) -> Result<(), SimError> {
    if rows < 2 || cols < 2 {
        return Err(SimError::Contract("interpolation needs a 2x2 grid".into()));
    }
    if state.num_qubits() != rows * cols {
        return Err(SimError::DimensionMismatch(format!(
            "grid {rows}x{cols} needs {} qubits, state has {}",
            rows * cols,
            state.num_qubits()
        )));
    }
    let u = pooling_unitary(theta0, theta1);
    for ((cr, cc), (tr, tc)) in interpolation_arrows(rows, cols) {
        state.apply_mat4(cr * cols + cc, tr * cols + tc, &u)?;
    }
    Ok(())
}
