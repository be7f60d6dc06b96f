use serde::{Deserialize, Serialize};

use crate::metrics::ThresholdSet;
use crate::sim::{GateApplication, GateKind, ParameterizedCircuit, SimError};

/// How one rotation argument of a genome slot binds: a fresh trainable
/// parameter or a reuse of an earlier one (parameter sharing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ParamAssignment {
    Fresh,
    /// Index into the fresh parameters created so far.
    Reuse(usize),
}

/// One gate placement in a genome.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenomeSlot {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<ParamAssignment>,
}

/// A searchable circuit description. Decoding yields exactly one
/// circuit; the decoded complexity must respect the search caps
/// (params <= q, depth <= 3q, gates <= 5q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Genome {
    pub num_qubits: usize,
    pub slots: Vec<GenomeSlot>,
}

impl Genome {
    /// Decode into a circuit, enforcing the complexity caps.
    pub fn decode(&self, caps: &ThresholdSet) -> Result<ParameterizedCircuit, SimError> {
        let mut gates = Vec::with_capacity(self.slots.len());
        let mut fresh = 0usize;
        for slot in &self.slots {
            if slot.params.len() != slot.kind.num_params() {
                return Err(SimError::WrongParamCount {
                    kind: slot.kind,
                    expected: slot.kind.num_params(),
                    got: slot.params.len(),
                });
            }
            let mut slots_for_gate = Vec::with_capacity(slot.params.len());
            for p in &slot.params {
                match *p {
                    ParamAssignment::Fresh => {
                        slots_for_gate.push(fresh);
                        fresh += 1;
                    }
                    ParamAssignment::Reuse(idx) => {
                        if idx >= fresh {
                            return Err(SimError::ParamSlotOutOfRange {
                                slot: idx,
                                len: fresh,
                            });
                        }
                        slots_for_gate.push(idx);
                    }
                }
            }
            gates.push(GateApplication::new(
                slot.kind,
                slot.qubits.clone(),
                slots_for_gate,
            ));
        }
        let circuit = ParameterizedCircuit::new(self.num_qubits, gates)?;
        let c = circuit.complexity();
        if !caps.complexity_within_caps(&c) {
            return Err(SimError::Contract(format!(
                "genome decodes to ({}, {}, {}) outside caps ({}, {}, {})",
                c.params, c.depth, c.gates, caps.params_max, caps.depth_max, caps.gates_max
            )));
        }
        Ok(circuit)
    }

    /// Stable content hash of the decoded structure (gate kinds,
    /// operands, slot-reuse pattern); the duplicate key of the search.
    pub fn structure_hash(&self, caps: &ThresholdSet) -> Result<u64, SimError> {
        let circuit = self.decode(caps)?;
        Ok(fnv1a(circuit.to_json().as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Arch;

    fn caps(q: usize) -> ThresholdSet {
        ThresholdSet::standard(Arch::Regular, q)
    }

    #[test]
    fn empty_genome_decodes_to_empty_circuit() {
        let g = Genome {
            num_qubits: 2,
            slots: vec![],
        };
        let c = g.decode(&caps(2)).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (0, 0, 0));
    }

    #[test]
    fn fig_hybrid_2q_transcription_decodes_to_reported_triple() {
        use GateKind::*;
        use ParamAssignment::*;
        let g = Genome {
            num_qubits: 2,
            slots: vec![
                GenomeSlot {
                    kind: Z,
                    qubits: vec![0],
                    params: vec![],
                },
                GenomeSlot {
                    kind: Ry,
                    qubits: vec![1],
                    params: vec![Fresh],
                },
                GenomeSlot {
                    kind: Cz,
                    qubits: vec![0, 1],
                    params: vec![],
                },
                GenomeSlot {
                    kind: Crx,
                    qubits: vec![1, 0],
                    params: vec![Reuse(0)],
                },
                GenomeSlot {
                    kind: Ry,
                    qubits: vec![1],
                    params: vec![Fresh],
                },
            ],
        };
        let c = g.decode(&caps(2)).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (2, 4, 5));
    }

    #[test]
    fn cap_violation_is_an_error() {
        use ParamAssignment::*;
        let slots: Vec<GenomeSlot> = (0..11)
            .map(|q| GenomeSlot {
                kind: GateKind::Ry,
                qubits: vec![q % 2],
                params: vec![if q == 0 { Fresh } else { Reuse(0) }],
            })
            .collect();
        let g = Genome {
            num_qubits: 2,
            slots,
        };
        // 11 gates > 5q = 10
        assert!(g.decode(&caps(2)).is_err());
    }
}
