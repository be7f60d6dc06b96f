use serde::{Deserialize, Serialize};

use super::gates::{gate_matrix, GateKind};
use super::state::StateVector;
use super::SimError;

/// One gate placement: kind, qubit operands and parameter slots into the
/// circuit's shared parameter vector. Slots may repeat across
/// applications (parameter sharing).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GateApplication {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub param_slots: Vec<usize>,
}

impl GateApplication {
    pub fn new(kind: GateKind, qubits: Vec<usize>, param_slots: Vec<usize>) -> Self {
        GateApplication {
            kind,
            qubits,
            param_slots,
        }
    }

    fn validate(&self, num_qubits: usize, num_params: usize) -> Result<(), SimError> {
        if self.qubits.len() != self.kind.arity() {
            return Err(SimError::DimensionMismatch(format!(
                "{:?} takes {} qubits, got {}",
                self.kind,
                self.kind.arity(),
                self.qubits.len()
            )));
        }
        for (i, &q) in self.qubits.iter().enumerate() {
            if q >= num_qubits {
                return Err(SimError::QubitOutOfRange {
                    index: q,
                    num_qubits,
                });
            }
            if self.qubits[..i].contains(&q) {
                return Err(SimError::DuplicateQubit { index: q });
            }
        }
        if self.param_slots.len() != self.kind.num_params() {
            return Err(SimError::WrongParamCount {
                kind: self.kind,
                expected: self.kind.num_params(),
                got: self.param_slots.len(),
            });
        }
        for &s in &self.param_slots {
            if s >= num_params {
                return Err(SimError::ParamSlotOutOfRange {
                    slot: s,
                    len: num_params,
                });
            }
        }
        Ok(())
    }
}

/// Ordered gate applications with shared parameter slots. Binding a real
/// vector of length `num_params` yields a unitary on 2^num_qubits
/// dimensions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterizedCircuit {
    pub num_qubits: usize,
    pub num_params: usize,
    pub gates: Vec<GateApplication>,
}

/// (params, depth, gates) complexity triple of a circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Complexity {
    pub params: usize,
    pub depth: usize,
    pub gates: usize,
}

impl ParameterizedCircuit {
    pub fn new(num_qubits: usize, gates: Vec<GateApplication>) -> Result<Self, SimError> {
        let num_params = gates
            .iter()
            .flat_map(|g| g.param_slots.iter())
            .max()
            .map_or(0, |m| m + 1);
        let c = ParameterizedCircuit {
            num_qubits,
            num_params,
            gates,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn empty(num_qubits: usize) -> Self {
        ParameterizedCircuit {
            num_qubits,
            num_params: 0,
            gates: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for g in &self.gates {
            g.validate(self.num_qubits, self.num_params)?;
        }
        Ok(())
    }

    /// Resolve the bound parameters for one gate application.
    pub fn gate_params(&self, app: &GateApplication, params: &[f64]) -> Vec<f64> {
        app.param_slots.iter().map(|&s| params[s]).collect()
    }

    /// Apply the gates in list order to `initial`. Deterministic, exact.
    pub fn run(&self, params: &[f64], initial: &StateVector) -> Result<StateVector, SimError> {
        if params.len() != self.num_params {
            return Err(SimError::DimensionMismatch(format!(
                "circuit has {} parameters, got {}",
                self.num_params,
                params.len()
            )));
        }
        if initial.num_qubits() != self.num_qubits {
            return Err(SimError::DimensionMismatch(format!(
                "circuit on {} qubits, state has {}",
                self.num_qubits,
                initial.num_qubits()
            )));
        }
        let mut state = initial.clone();
        self.run_in_place(params, &mut state)?;
        Ok(state)
    }

    pub fn run_in_place(&self, params: &[f64], state: &mut StateVector) -> Result<(), SimError> {
        for app in &self.gates {
            let bound = self.gate_params(app, params);
            let m = gate_matrix(app.kind, &bound)?;
            state.apply(&m, &app.qubits)?;
        }
        Ok(())
    }

    /// Complexity triple: parameter count, ASAP depth (gates sharing a
    /// qubit cannot share a layer, every gate counts one), gate count.
    pub fn complexity(&self) -> Complexity {
        let mut last_layer = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for g in &self.gates {
            let layer = g.qubits.iter().map(|&q| last_layer[q]).max().unwrap_or(0) + 1;
            for &q in &g.qubits {
                last_layer[q] = layer;
            }
            depth = depth.max(layer);
        }
        Complexity {
            params: self.num_params,
            depth,
            gates: self.gates.len(),
        }
    }

    /// Lossless JSON form: {num_qubits, num_params, gates: [...]}.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, SimError> {
        let c: ParameterizedCircuit =
            serde_json::from_str(s).map_err(|e| SimError::Contract(format!("bad circuit JSON: {e}")))?;
        c.validate()?;
        Ok(c)
    }
}

/// Shorthand used across the crate for building circuits by hand.
pub fn app(kind: GateKind, qubits: &[usize], slots: &[usize]) -> GateApplication {
    GateApplication::new(kind, qubits.to_vec(), slots.to_vec())
}

#[cfg(test)]
mod tests {
    use super::super::state::fidelity;
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn empty_circuit_leaves_state() {
        let c = ParameterizedCircuit::empty(2);
        let s = StateVector::zero(2);
        let out = c.run(&[], &s).unwrap();
        assert_eq!(out, s);
        assert_eq!(
            c.complexity(),
            Complexity {
                params: 0,
                depth: 0,
                gates: 0
            }
        );
    }

    #[test]
    fn shared_slot_doubles_rotation() {
        // Ry(t0) twice equals a single Ry(2 t0).
        let c = ParameterizedCircuit::new(
            1,
            vec![app(GateKind::Ry, &[0], &[0]), app(GateKind::Ry, &[0], &[0])],
        )
        .unwrap();
        let theta = std::f64::consts::FRAC_PI_4;
        let via_shared = c.run(&[theta], &StateVector::zero(1)).unwrap();
        let single = ParameterizedCircuit::new(1, vec![app(GateKind::Ry, &[0], &[0])]).unwrap();
        let via_single = single.run(&[2.0 * theta], &StateVector::zero(1)).unwrap();
        assert_abs_diff_eq!(
            fidelity(&via_shared, &via_single).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn param_count_mismatch_rejected() {
        let c = ParameterizedCircuit::new(1, vec![app(GateKind::Ry, &[0], &[0])]).unwrap();
        assert!(c.run(&[], &StateVector::zero(1)).is_err());
    }

    #[test]
    fn qubit_out_of_range_rejected() {
        assert!(ParameterizedCircuit::new(1, vec![app(GateKind::X, &[1], &[])]).is_err());
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let c = ParameterizedCircuit::new(
            2,
            vec![
                app(GateKind::Z, &[0], &[]),
                app(GateKind::Ry, &[1], &[0]),
                app(GateKind::Cz, &[0, 1], &[]),
                app(GateKind::Crx, &[1, 0], &[0]),
                app(GateKind::Ry, &[1], &[1]),
            ],
        )
        .unwrap();
        let json = c.to_json();
        let back = ParameterizedCircuit::from_json(&json).unwrap();
        assert_eq!(c, back);
    }
}
