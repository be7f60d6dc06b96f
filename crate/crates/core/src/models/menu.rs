use super::baselines::BaselineId;
use super::regular::{ConvRef, RegularModel, StackLayer};
use crate::encodings::{EncodingKind, FragmentSpec};
use crate::sim::{GateKind, SimError};

/// Padded input size the grid-search models run on.
pub const GRID_IMAGE_SIZE: usize = 32;

fn gate_label(g: GateKind) -> &'static str {
    match g {
        GateKind::Rx => "Rx",
        GateKind::Ry => "Ry",
        GateKind::Rz => "Rz",
        GateKind::U3 => "U3",
        _ => "?",
    }
}

fn pipelines(num_qubits: usize) -> Vec<Vec<GateKind>> {
    use GateKind::*;
    match num_qubits {
        1 => vec![
            vec![Rx, Ry, Rz, Rx, Ry],
            vec![Rx, U3, Ry, U3, Rz],
            vec![U3; 5],
        ],
        4 => vec![vec![Rx, Ry, Rz, Rx], vec![Rx, U3, Ry, U3], vec![U3; 4]],
        16 => vec![vec![Rx, Ry, Rz], vec![Rx, U3, Ry], vec![U3; 3]],
        _ => Vec::new(),
    }
}

fn conv_choices() -> Vec<BaselineId> {
    vec![
        BaselineId::C1,
        BaselineId::C2,
        BaselineId::C3,
        BaselineId::C4,
        BaselineId::C5,
        BaselineId::As,
    ]
}

fn stacks(num_qubits: usize) -> Vec<Vec<StackLayer>> {
    match num_qubits {
        1 => vec![vec![StackLayer::Conv1x1]],
        4 => {
            let mut out: Vec<Vec<StackLayer>> = conv_choices()
                .into_iter()
                .map(|id| vec![StackLayer::Conv(ConvRef::Library(id))])
                .collect();
            out.push(vec![StackLayer::Pooling, StackLayer::Conv1x1]);
            out
        }
        16 => {
            let mut out = Vec::new();
            for id in conv_choices() {
                out.push(vec![
                    StackLayer::Pooling,
                    StackLayer::Conv(ConvRef::Library(id)),
                ]);
            }
            for id in conv_choices() {
                out.push(vec![
                    StackLayer::Interpolation,
                    StackLayer::Conv(ConvRef::Library(id)),
                ]);
            }
            out.push(vec![
                StackLayer::Pooling,
                StackLayer::Conv1x1,
                StackLayer::Pooling,
                StackLayer::Conv1x1,
            ]);
            out
        }
        _ => Vec::new(),
    }
}

fn model_name(pipeline: &[GateKind], stack: &[StackLayer]) -> String {
    let frag: Vec<&str> = pipeline.iter().map(|&g| gate_label(g)).collect();
    let layers: Vec<String> = stack.iter().map(|l| l.label()).collect();
    format!("{}->{}", frag.join("-"), layers.join("-"))
}

fn build(pipeline: &[GateKind], stack: Vec<StackLayer>) -> RegularModel {
    RegularModel {
        name: model_name(pipeline, &stack),
        fragment: FragmentSpec::stride2(pipeline, EncodingKind::Qe),
        stack,
        input_rows: GRID_IMAGE_SIZE,
        input_cols: GRID_IMAGE_SIZE,
    }
}

/// The grid-search model menu for 1, 4 or 16 qubits: every fragment
/// pipeline crossed with every layer configuration.
pub fn grid_search_menu(num_qubits: usize) -> Result<Vec<RegularModel>, SimError> {
    let pipes = pipelines(num_qubits);
    if pipes.is_empty() {
        return Err(SimError::Contract(format!(
            "grid search is defined for 1, 4 and 16 qubits, not {num_qubits}"
        )));
    }
    let mut models = Vec::new();
    for pipe in &pipes {
        for stack in stacks(num_qubits) {
            models.push(build(pipe, stack));
        }
    }
    Ok(models)
}

/// The best grid-search model at each qubit count.
pub fn best_model(num_qubits: usize) -> Result<RegularModel, SimError> {
    use GateKind::*;
    let model = match num_qubits {
        1 => build(&[Rx, Ry, Rz, Rx, Ry], vec![StackLayer::Conv1x1]),
        4 => build(
            &[U3, U3, U3, U3],
            vec![StackLayer::Conv(ConvRef::Library(BaselineId::C5))],
        ),
        16 => build(
            &[U3, U3, U3],
            vec![
                StackLayer::Pooling,
                StackLayer::Conv(ConvRef::Library(BaselineId::C2)),
            ],
        ),
        _ => {
            return Err(SimError::Contract(format!(
                "no best model recorded for {num_qubits} qubits"
            )))
        }
    };
    Ok(model)
}

/// Find a menu model by its name, e.g. `U3-U3-U3->Pool-C2`.
pub fn menu_model(num_qubits: usize, name: &str) -> Result<RegularModel, SimError> {
    grid_search_menu(num_qubits)?
        .into_iter()
        .find(|m| m.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| SimError::Contract(format!("unknown model '{name}' at {num_qubits} qubits")))
}
