use serde::{Deserialize, Serialize};

use crate::metrics::Arch;
use crate::sim::{app, GateApplication, GateKind, ParameterizedCircuit, SimError};

/// Identifier of a convolution circuit from the built-in library: the
/// six designs adapted from earlier work plus the ansatz-search results.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaselineId {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    /// Ansatz-search circuit; differs between the hybrid and regular
    /// architectures.
    As,
}

impl BaselineId {
    pub const ALL: [BaselineId; 7] = [
        BaselineId::C1,
        BaselineId::C2,
        BaselineId::C3,
        BaselineId::C4,
        BaselineId::C5,
        BaselineId::C6,
        BaselineId::As,
    ];

    pub fn parse(s: &str) -> Option<BaselineId> {
        match s.to_ascii_uppercase().as_str() {
            "C1" | "1" => Some(BaselineId::C1),
            "C2" | "2" => Some(BaselineId::C2),
            "C3" | "3" => Some(BaselineId::C3),
            "C4" | "4" => Some(BaselineId::C4),
            "C5" | "5" => Some(BaselineId::C5),
            "C6" | "6" => Some(BaselineId::C6),
            "AS" => Some(BaselineId::As),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BaselineId::C1 => "C1",
            BaselineId::C2 => "C2",
            BaselineId::C3 => "C3",
            BaselineId::C4 => "C4",
            BaselineId::C5 => "C5",
            BaselineId::C6 => "C6",
            BaselineId::As => "AS",
        }
    }
}

fn circuit(num_qubits: usize, gates: Vec<GateApplication>) -> ParameterizedCircuit {
    ParameterizedCircuit::new(num_qubits, gates).expect("library circuit is well formed")
}

use GateKind::*;

fn c1(n: usize) -> ParameterizedCircuit {
    // H wall, descending CZ chain, Rx wall.
    let mut g: Vec<_> = (0..n).map(|q| app(H, &[q], &[])).collect();
    for q in (0..n - 1).rev() {
        g.push(app(Cz, &[q, q + 1], &[]));
    }
    for q in 0..n {
        g.push(app(Rx, &[q], &[q]));
    }
    circuit(n, g)
}

fn c2(n: usize) -> ParameterizedCircuit {
    // Ry wall, then CX merges toward the last qubit with an Ry after
    // each stage; 2 and 3 qubits chain, larger sizes pair up tree-wise.
    let mut g: Vec<_> = (0..n).map(|q| app(Ry, &[q], &[q])).collect();
    let mut slot = n;
    match n {
        2 => {
            g.push(app(Cx, &[0, 1], &[]));
            g.push(app(Ry, &[1], &[slot]));
        }
        3 => {
            g.push(app(Cx, &[0, 1], &[]));
            g.push(app(Cx, &[1, 2], &[]));
            g.push(app(Ry, &[2], &[slot]));
        }
        4 => {
            g.push(app(Cx, &[0, 1], &[]));
            g.push(app(Cx, &[2, 3], &[]));
            g.push(app(Ry, &[1], &[slot]));
            g.push(app(Ry, &[3], &[slot + 1]));
            g.push(app(Cx, &[1, 3], &[]));
            g.push(app(Ry, &[3], &[slot + 2]));
        }
        9 => {
            for q in [0usize, 2, 4, 6] {
                g.push(app(Cx, &[q, q + 1], &[]));
            }
            for q in [1usize, 3, 5, 7] {
                g.push(app(Ry, &[q], &[slot]));
                slot += 1;
            }
            g.push(app(Cx, &[1, 3], &[]));
            g.push(app(Cx, &[5, 7], &[]));
            g.push(app(Ry, &[3], &[slot]));
            g.push(app(Ry, &[7], &[slot + 1]));
            slot += 2;
            g.push(app(Cx, &[3, 7], &[]));
            g.push(app(Cx, &[7, 8], &[]));
            g.push(app(Ry, &[8], &[slot]));
        }
        _ => panic!("C2 not defined for {n} qubits"),
    }
    circuit(n, g)
}

fn c3(n: usize) -> ParameterizedCircuit {
    // Rx wall, Rz wall, descending CX chain.
    let mut g: Vec<_> = (0..n).map(|q| app(Rx, &[q], &[q])).collect();
    for q in 0..n {
        g.push(app(Rz, &[q], &[n + q]));
    }
    for q in (1..n).rev() {
        g.push(app(Cx, &[q, q - 1], &[]));
    }
    circuit(n, g)
}

fn c4(n: usize) -> ParameterizedCircuit {
    // Ry wall, descending CZ chain closed by CZ(0, n-1), Ry wall.
    let mut g: Vec<_> = (0..n).map(|q| app(Ry, &[q], &[q])).collect();
    for q in (0..n - 1).rev() {
        g.push(app(Cz, &[q, q + 1], &[]));
    }
    if n > 2 {
        g.push(app(Cz, &[0, n - 1], &[]));
    }
    for q in 0..n {
        g.push(app(Ry, &[q], &[n + q]));
    }
    circuit(n, g)
}

fn c5_ring(qubits: &[usize], slot0: usize, g: &mut Vec<GateApplication>) {
    // Ry wall, descending CX cycle, Ry wall, cycle shifted by one.
    let n = qubits.len();
    for (i, &q) in qubits.iter().enumerate() {
        g.push(app(Ry, &[q], &[slot0 + i]));
    }
    if n == 2 {
        g.push(app(Cx, &[qubits[1], qubits[0]], &[]));
        g.push(app(Ry, &[qubits[0]], &[slot0 + 2]));
        g.push(app(Ry, &[qubits[1]], &[slot0 + 3]));
        g.push(app(Cx, &[qubits[0], qubits[1]], &[]));
        return;
    }
    g.push(app(Cx, &[qubits[n - 1], qubits[0]], &[]));
    for i in (0..n - 1).rev() {
        g.push(app(Cx, &[qubits[i], qubits[i + 1]], &[]));
    }
    for (i, &q) in qubits.iter().enumerate() {
        g.push(app(Ry, &[q], &[slot0 + n + i]));
    }
    g.push(app(Cx, &[qubits[n - 1], qubits[n - 2]], &[]));
    g.push(app(Cx, &[qubits[0], qubits[n - 1]], &[]));
    for i in 1..n - 1 {
        g.push(app(Cx, &[qubits[i], qubits[i - 1]], &[]));
    }
}

fn c5(n: usize) -> ParameterizedCircuit {
    let mut g = Vec::new();
    match n {
        2 | 3 | 4 => {
            let qubits: Vec<usize> = (0..n).collect();
            c5_ring(&qubits, 0, &mut g);
        }
        9 => {
            // two rings covering the register
            c5_ring(&[0, 1, 2, 3, 4, 5], 0, &mut g);
            c5_ring(&[6, 7, 8], 12, &mut g);
        }
        _ => panic!("C5 not defined for {n} qubits"),
    }
    circuit(n, g)
}

fn c6(n: usize) -> ParameterizedCircuit {
    // Ry wall, CRZ cycle, Ry wall, shifted CRZ cycle (2 and 3 qubits
    // only).
    let mut g: Vec<_> = (0..n).map(|q| app(Ry, &[q], &[q])).collect();
    match n {
        2 => {
            g.push(app(Crz, &[1, 0], &[2]));
            g.push(app(Ry, &[0], &[3]));
            g.push(app(Ry, &[1], &[4]));
            g.push(app(Crz, &[0, 1], &[5]));
        }
        3 => {
            g.push(app(Crz, &[2, 0], &[3]));
            g.push(app(Crz, &[1, 2], &[4]));
            g.push(app(Crz, &[0, 1], &[5]));
            for q in 0..3 {
                g.push(app(Ry, &[q], &[6 + q]));
            }
            g.push(app(Crz, &[2, 1], &[9]));
            g.push(app(Crz, &[0, 2], &[10]));
            g.push(app(Crz, &[1, 0], &[11]));
        }
        _ => panic!("C6 only exists for 2 and 3 qubits"),
    }
    circuit(n, g)
}

fn as_hybrid(n: usize) -> ParameterizedCircuit {
    let g = match n {
        2 => vec![
            app(Z, &[0], &[]),
            app(Ry, &[1], &[0]),
            app(Cz, &[0, 1], &[]),
            app(Crx, &[1, 0], &[0]),
            app(Ry, &[1], &[1]),
        ],
        3 => vec![
            app(Sx, &[1], &[]),
            app(Cx, &[0, 2], &[]),
            app(Cy, &[1, 0], &[]),
            app(Ry, &[2], &[0]),
            app(U3, &[2], &[1, 0, 2]),
        ],
        4 => vec![
            app(Cry, &[0, 1], &[0]),
            app(U3, &[3], &[0, 0, 0]),
            app(Sx, &[0], &[]),
            app(Cry, &[1, 2], &[0]),
            app(Ry, &[3], &[1]),
            app(Cy, &[3, 1], &[]),
            app(Cy, &[0, 2], &[]),
        ],
        9 => vec![
            app(U3, &[0], &[3, 4, 5]),
            app(Ecr, &[5, 3], &[]),
            app(Z, &[7], &[]),
            app(X, &[8], &[]),
            app(X, &[4], &[]),
            app(U3, &[8], &[0, 1, 2]),
            app(Cy, &[5, 1], &[]),
            app(Rx, &[8], &[4]),
            app(Cy, &[1, 4], &[]),
            app(Rz, &[5], &[6]),
            app(Ecr, &[2, 4], &[]),
            app(U3, &[5], &[7, 8, 5]),
            app(Cy, &[2, 6], &[]),
            app(Ecr, &[2, 4], &[]),
            app(Cz, &[6, 8], &[]),
            app(Cx, &[6, 0], &[]),
            app(Crx, &[4, 6], &[5]),
            app(Cy, &[0, 7], &[]),
            app(Ecr, &[3, 0], &[]),
            app(Rz, &[4], &[6]),
        ],
        _ => panic!("no hybrid ansatz-search circuit for {n} qubits"),
    };
    circuit(n, g)
}

fn as_regular(n: usize) -> ParameterizedCircuit {
    let g = match n {
        2 => vec![
            app(Rz, &[0], &[0]),
            app(Y, &[1], &[]),
            app(Crz, &[0, 1], &[0]),
            app(U3, &[0], &[0, 0, 0]),
            app(Ry, &[1], &[0]),
            app(Ry, &[1], &[0]),
            app(Ecr, &[0, 1], &[]),
            app(U3, &[0], &[1, 0, 0]),
        ],
        3 => vec![
            app(Rx, &[0], &[0]),
            app(H, &[1], &[]),
            app(Rz, &[2], &[1]),
            app(U3, &[0], &[0, 0, 0]),
            app(Rz, &[2], &[1]),
            app(Ry, &[0], &[0]),
            app(Cy, &[0, 1], &[]),
            app(Ecr, &[2, 1], &[]),
            app(Crx, &[2, 0], &[1]),
            app(U3, &[1], &[2, 1, 2]),
        ],
        4 => vec![
            app(Z, &[0], &[]),
            app(U3, &[3], &[0, 0, 0]),
            app(Ecr, &[2, 1], &[]),
            app(Rz, &[1], &[0]),
            app(U3, &[2], &[0, 0, 0]),
            app(Y, &[0], &[]),
            app(Ry, &[1], &[0]),
            app(Cx, &[2, 3], &[]),
            app(U3, &[1], &[0, 0, 0]),
            app(Z, &[2], &[]),
            app(Crz, &[1, 0], &[2]),
            app(Rz, &[2], &[1]),
            app(Y, &[1], &[]),
            app(Rx, &[2], &[2]),
            app(Cry, &[3, 1], &[2]),
            app(U3, &[2], &[2, 2, 1]),
            app(Rz, &[1], &[1]),
            app(Sx, &[2], &[]),
            app(Ry, &[3], &[3]),
        ],
        9 => as_regular_9q(),
        _ => panic!("no regular ansatz-search circuit for {n} qubits"),
    };
    circuit(n, g)
}

fn as_regular_9q() -> Vec<GateApplication> {
    vec![
        app(X, &[0], &[]),
        app(U3, &[1], &[1, 2, 3]),
        app(Rz, &[3], &[2]),
        app(Ry, &[4], &[0]),
        app(H, &[5], &[]),
        app(Rx, &[4], &[1]),
        app(Ecr, &[8, 1], &[]),
        app(Cy, &[4, 6], &[]),
        app(Cy, &[8, 0], &[]),
        app(Ry, &[0], &[4]),
        app(Ecr, &[4, 5], &[]),
        app(H, &[6], &[]),
        app(Ry, &[8], &[4]),
        app(U3, &[6], &[1, 4, 5]),
        app(Rz, &[8], &[8]),
        app(Crx, &[4, 7], &[4]),
        app(Ecr, &[6, 1], &[]),
        app(Rx, &[4], &[6]),
        app(Sx, &[6], &[]),
        app(Crx, &[6, 3], &[3]),
        app(Sx, &[3], &[]),
        app(Rz, &[6], &[6]),
        app(Ecr, &[3, 0], &[]),
        app(Sx, &[0], &[]),
        app(Cx, &[0, 7], &[]),
        app(Ecr, &[2, 7], &[]),
        app(Cx, &[0, 5], &[]),
        app(Ecr, &[7, 1], &[]),
        app(Cy, &[6, 0], &[]),
        app(Crz, &[7, 5], &[6]),
        app(Crx, &[3, 6], &[7]),
        app(Cx, &[3, 1], &[]),
        // tail mirroring the early texture, sized to the reported
        // complexity
        app(Ry, &[8], &[5]),
        app(Rx, &[8], &[7]),
        app(X, &[8], &[]),
        app(Y, &[8], &[]),
        app(Rz, &[8], &[0]),
        app(Rx, &[4], &[8]),
        app(Y, &[4], &[]),
        app(Sx, &[4], &[]),
        app(Rz, &[2], &[5]),
        app(Y, &[2], &[]),
        app(Ry, &[5], &[8]),
        app(Ry, &[1], &[8]),
        app(Cx, &[1, 0], &[]),
    ]
}

/// Build a library circuit. The architecture selects which of the two
/// ansatz-search circuits `As` refers to; C1..C6 are shared.
pub fn baseline_circuit(
    id: BaselineId,
    num_qubits: usize,
    arch: Arch,
) -> Result<ParameterizedCircuit, SimError> {
    let supported = matches!(num_qubits, 2 | 3 | 4 | 9);
    if !supported {
        return Err(SimError::Contract(format!(
            "no library circuits for {num_qubits} qubits"
        )));
    }
    if id == BaselineId::C6 && !matches!(num_qubits, 2 | 3) {
        return Err(SimError::Contract(
            "C6 only exists for 2 and 3 qubits".into(),
        ));
    }
    Ok(match id {
        BaselineId::C1 => c1(num_qubits),
        BaselineId::C2 => c2(num_qubits),
        BaselineId::C3 => c3(num_qubits),
        BaselineId::C4 => c4(num_qubits),
        BaselineId::C5 => c5(num_qubits),
        BaselineId::C6 => c6(num_qubits),
        BaselineId::As => match arch {
            Arch::Hybrid => as_hybrid(num_qubits),
            Arch::Regular => as_regular(num_qubits),
        },
    })
}

/// Ids available at a given qubit count.
pub fn available_ids(num_qubits: usize) -> Vec<BaselineId> {
    match num_qubits {
        2 | 3 => BaselineId::ALL.to_vec(),
        4 | 9 => vec![
            BaselineId::C1,
            BaselineId::C2,
            BaselineId::C3,
            BaselineId::C4,
            BaselineId::C5,
            BaselineId::As,
        ],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invalid_pairs_rejected() {
        assert!(baseline_circuit(BaselineId::C6, 4, Arch::Hybrid).is_err());
        assert!(baseline_circuit(BaselineId::C1, 5, Arch::Hybrid).is_err());
    }

    #[test]
    fn c2_at_zero_angles_preserves_the_zero_state() {
        // oracle: Ry(0) and CX on |00> are identities on that input
        let c = baseline_circuit(BaselineId::C2, 2, Arch::Hybrid).unwrap();
        let out = c
            .run(&[0.0; 3], &crate::sim::StateVector::zero(2))
            .unwrap();
        assert!((out.amplitudes()[0].re - 1.0).abs() < 1e-12);
        assert!(out.amplitudes()[1..].iter().all(|a| a.norm() < 1e-12));
    }

    #[test]
    fn spot_complexities() {
        let c = baseline_circuit(BaselineId::C2, 2, Arch::Hybrid).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (3, 3, 4));

        let c = baseline_circuit(BaselineId::C6, 3, Arch::Hybrid).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (12, 8, 12));

        let c = baseline_circuit(BaselineId::C5, 4, Arch::Hybrid).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (8, 9, 16));

        let c = baseline_circuit(BaselineId::As, 2, Arch::Hybrid).unwrap();
        let x = c.complexity();
        assert_eq!((x.params, x.depth, x.gates), (2, 4, 5));
    }
}
