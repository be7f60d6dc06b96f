use num_complex::Complex64;

use crate::sim::{Mat2, Mat4, SimError};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Exact evaluator that keeps independent qubit subsystems factorized.
///
/// Qubits start in single-qubit pure groups; two-qubit gates merge
/// groups; discarding a qubit traces it out, leaving the survivors'
/// reduced (generally mixed) state. Readout probabilities match the full
/// statevector computation exactly while never materializing entangled
/// subsystems larger than the circuit structure requires.
pub struct GroupedState {
    membership: Vec<Option<usize>>,
    groups: Vec<Group>,
}

struct Group {
    qubits: Vec<usize>,
    state: GroupState,
}

enum GroupState {
    /// 2^k amplitudes; local bit j belongs to `qubits[j]`.
    Pure(Vec<Complex64>),
    /// 2^k x 2^k density matrix, row major.
    Mixed(Vec<Complex64>),
}

/// Mixed groups beyond this many qubits are refused so callers can fall
/// back to a plain statevector run.
const MAX_MIXED_QUBITS: usize = 10;

impl GroupedState {
    /// Product state of per-qubit amplitudes (a0, a1).
    pub fn product(factors: &[(Complex64, Complex64)]) -> Self {
        let groups = factors
            .iter()
            .enumerate()
            .map(|(q, &(a0, a1))| Group {
                qubits: vec![q],
                state: GroupState::Pure(vec![a0, a1]),
            })
            .collect();
        GroupedState {
            membership: (0..factors.len()).map(Some).collect(),
            groups,
        }
    }

    fn group_of(&self, q: usize) -> Result<usize, SimError> {
        self.membership
            .get(q)
            .copied()
            .flatten()
            .ok_or_else(|| SimError::Contract(format!("qubit {q} is not active")))
    }

    fn local_bit(&self, g: usize, q: usize) -> usize {
        self.groups[g]
            .qubits
            .iter()
            .position(|&x| x == q)
            .expect("membership is consistent")
    }

    pub fn apply1(&mut self, q: usize, m: &Mat2) -> Result<(), SimError> {
        let g = self.group_of(q)?;
        let bit = self.local_bit(g, q);
        let dim = 1usize << self.groups[g].qubits.len();
        match &mut self.groups[g].state {
            GroupState::Pure(amps) => pure_apply1(amps, bit, m),
            GroupState::Mixed(rho) => mixed_apply1(rho, dim, bit, m),
        }
        Ok(())
    }

    pub fn apply2(&mut self, first: usize, second: usize, m: &Mat4) -> Result<(), SimError> {
        if first == second {
            return Err(SimError::DuplicateQubit { index: first });
        }
        let ga = self.group_of(first)?;
        let gb = self.group_of(second)?;
        let g = if ga == gb { ga } else { self.merge(ga, gb)? };
        let ba = self.local_bit(g, first);
        let bb = self.local_bit(g, second);
        let dim = 1usize << self.groups[g].qubits.len();
        match &mut self.groups[g].state {
            GroupState::Pure(amps) => pure_apply2(amps, ba, bb, m),
            GroupState::Mixed(rho) => mixed_apply2(rho, dim, ba, bb, m),
        }
        Ok(())
    }

    /// Trace out `q`; its group keeps the survivors' reduced state.
    pub fn discard(&mut self, q: usize) -> Result<(), SimError> {
        let g = self.group_of(q)?;
        let bit = self.local_bit(g, q);
        let k = self.groups[g].qubits.len();
        self.membership[q] = None;
        if k == 1 {
            self.groups[g].qubits.clear();
            self.groups[g].state = GroupState::Pure(vec![Complex64::new(1.0, 0.0)]);
            return Ok(());
        }
        let rho = match &self.groups[g].state {
            GroupState::Pure(amps) => trace_out_pure(amps, k, bit),
            GroupState::Mixed(rho) => trace_out_mixed(rho, k, bit),
        };
        self.groups[g].qubits.remove(bit);
        self.groups[g].state = GroupState::Mixed(rho);
        Ok(())
    }

    pub fn prob_one(&self, q: usize) -> Result<f64, SimError> {
        let g = self.group_of(q)?;
        let bit = self.local_bit(g, q);
        let mask = 1usize << bit;
        Ok(match &self.groups[g].state {
            GroupState::Pure(amps) => amps
                .iter()
                .enumerate()
                .filter(|(i, _)| i & mask != 0)
                .map(|(_, a)| a.norm_sqr())
                .sum(),
            GroupState::Mixed(rho) => {
                let dim = 1usize << self.groups[g].qubits.len();
                (0..dim)
                    .filter(|i| i & mask != 0)
                    .map(|i| rho[i * dim + i].re)
                    .sum()
            }
        })
    }

    fn merge(&mut self, ga: usize, gb: usize) -> Result<usize, SimError> {
        let (lo, hi) = (ga.min(gb), ga.max(gb));
        let hi_group = std::mem::replace(
            &mut self.groups[hi],
            Group {
                qubits: Vec::new(),
                state: GroupState::Pure(vec![Complex64::new(1.0, 0.0)]),
            },
        );
        let lo_group = &mut self.groups[lo];
        let ka = lo_group.qubits.len();
        let kb = hi_group.qubits.len();

        let both_pure = matches!(&lo_group.state, GroupState::Pure(_))
            && matches!(&hi_group.state, GroupState::Pure(_));
        if !both_pure && ka + kb > MAX_MIXED_QUBITS {
            // restore before bailing out
            self.groups[hi] = hi_group;
            return Err(SimError::Contract(format!(
                "merged mixed subsystem of {} qubits exceeds the factorized limit",
                ka + kb
            )));
        }

        let merged_state = match (&lo_group.state, &hi_group.state) {
            (GroupState::Pure(a), GroupState::Pure(b)) => {
                let da = 1usize << ka;
                let db = 1usize << kb;
                let mut amps = vec![ZERO; da * db];
                for ib in 0..db {
                    for ia in 0..da {
                        amps[ia + da * ib] = a[ia] * b[ib];
                    }
                }
                GroupState::Pure(amps)
            }
            _ => {
                let ra = to_density(&lo_group.state, ka);
                let rb = to_density(&hi_group.state, kb);
                let da = 1usize << ka;
                let db = 1usize << kb;
                let dim = da * db;
                let mut rho = vec![ZERO; dim * dim];
                for ib in 0..db {
                    for ia in 0..da {
                        for jb in 0..db {
                            for ja in 0..da {
                                rho[(ia + da * ib) * dim + (ja + da * jb)] =
                                    ra[ia * da + ja] * rb[ib * db + jb];
                            }
                        }
                    }
                }
                GroupState::Mixed(rho)
            }
        };
        lo_group.state = merged_state;
        let moved = hi_group.qubits;
        for &q in &moved {
            self.membership[q] = Some(lo);
        }
        lo_group.qubits.extend(moved);
        Ok(lo)
    }
}

fn to_density(state: &GroupState, k: usize) -> Vec<Complex64> {
    let dim = 1usize << k;
    match state {
        GroupState::Pure(amps) => {
            let mut rho = vec![ZERO; dim * dim];
            for i in 0..dim {
                for j in 0..dim {
                    rho[i * dim + j] = amps[i] * amps[j].conj();
                }
            }
            rho
        }
        GroupState::Mixed(rho) => rho.clone(),
    }
}

fn pure_apply1(amps: &mut [Complex64], bit: usize, m: &Mat2) {
    let step = 1usize << bit;
    let mut base = 0;
    while base < amps.len() {
        for off in 0..step {
            let i = base + off;
            let j = i | step;
            let a = amps[i];
            let b = amps[j];
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[j] = m[1][0] * a + m[1][1] * b;
        }
        base += step << 1;
    }
}

fn pure_apply2(amps: &mut [Complex64], ba: usize, bb: usize, m: &Mat4) {
    let ma = 1usize << ba;
    let mb = 1usize << bb;
    let mask = ma | mb;
    for i in 0..amps.len() {
        if i & mask != 0 {
            continue;
        }
        let idx = [i, i | mb, i | ma, i | ma | mb];
        let v = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &t) in idx.iter().enumerate() {
            let mut acc = ZERO;
            for (c, &vc) in v.iter().enumerate() {
                acc += m[r][c] * vc;
            }
            amps[t] = acc;
        }
    }
}

fn mixed_apply1(rho: &mut [Complex64], dim: usize, bit: usize, m: &Mat2) {
    let step = 1usize << bit;
    // rows: rho <- (U (x) I) rho
    for c in 0..dim {
        let mut r = 0;
        while r < dim {
            if r & step == 0 {
                let i = r * dim + c;
                let j = (r | step) * dim + c;
                let a = rho[i];
                let b = rho[j];
                rho[i] = m[0][0] * a + m[0][1] * b;
                rho[j] = m[1][0] * a + m[1][1] * b;
            }
            r += 1;
        }
    }
    // columns: rho <- rho (U (x) I)^dagger
    for r in 0..dim {
        let row = r * dim;
        let mut c = 0;
        while c < dim {
            if c & step == 0 {
                let i = row + c;
                let j = row + (c | step);
                let a = rho[i];
                let b = rho[j];
                rho[i] = a * m[0][0].conj() + b * m[0][1].conj();
                rho[j] = a * m[1][0].conj() + b * m[1][1].conj();
            }
            c += 1;
        }
    }
}

fn mixed_apply2(rho: &mut [Complex64], dim: usize, ba: usize, bb: usize, m: &Mat4) {
    let ma = 1usize << ba;
    let mb = 1usize << bb;
    let mask = ma | mb;
    for c in 0..dim {
        for r in 0..dim {
            if r & mask != 0 {
                continue;
            }
            let idx = [r, r | mb, r | ma, r | ma | mb];
            let v = [
                rho[idx[0] * dim + c],
                rho[idx[1] * dim + c],
                rho[idx[2] * dim + c],
                rho[idx[3] * dim + c],
            ];
            for (i, &t) in idx.iter().enumerate() {
                let mut acc = ZERO;
                for (k, &vk) in v.iter().enumerate() {
                    acc += m[i][k] * vk;
                }
                rho[t * dim + c] = acc;
            }
        }
    }
    for r in 0..dim {
        let row = r * dim;
        for c in 0..dim {
            if c & mask != 0 {
                continue;
            }
            let idx = [c, c | mb, c | ma, c | ma | mb];
            let v = [
                rho[row + idx[0]],
                rho[row + idx[1]],
                rho[row + idx[2]],
                rho[row + idx[3]],
            ];
            for (i, &t) in idx.iter().enumerate() {
                let mut acc = ZERO;
                for (k, &vk) in v.iter().enumerate() {
                    acc += vk * m[i][k].conj();
                }
                rho[row + t] = acc;
            }
        }
    }
}

fn trace_out_pure(amps: &[Complex64], k: usize, bit: usize) -> Vec<Complex64> {
    let small = 1usize << (k - 1);
    let insert = |idx: usize, v: usize| -> usize {
        let low = idx & ((1 << bit) - 1);
        let high = idx >> bit;
        low | (v << bit) | (high << (bit + 1))
    };
    let mut rho = vec![ZERO; small * small];
    for v in 0..2 {
        for i in 0..small {
            let ii = insert(i, v);
            for j in 0..small {
                rho[i * small + j] += amps[ii] * amps[insert(j, v)].conj();
            }
        }
    }
    rho
}

fn trace_out_mixed(rho: &[Complex64], k: usize, bit: usize) -> Vec<Complex64> {
    let dim = 1usize << k;
    let small = dim >> 1;
    let insert = |idx: usize, v: usize| -> usize {
        let low = idx & ((1 << bit) - 1);
        let high = idx >> bit;
        low | (v << bit) | (high << (bit + 1))
    };
    let mut out = vec![ZERO; small * small];
    for v in 0..2 {
        for i in 0..small {
            let ii = insert(i, v);
            for j in 0..small {
                out[i * small + j] += rho[ii * dim + insert(j, v)];
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{gate_matrix, GateKind, GateMatrix, StateVector};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn mat2(kind: GateKind, p: &[f64]) -> Mat2 {
        match gate_matrix(kind, p).unwrap() {
            GateMatrix::Single(m) => m,
            _ => unreachable!(),
        }
    }

    fn mat4(kind: GateKind, p: &[f64]) -> Mat4 {
        match gate_matrix(kind, p).unwrap() {
            GateMatrix::Two(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn matches_statevector_on_random_programs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let n = rng.gen_range(2..=5);
            let factors: Vec<(Complex64, Complex64)> = (0..n)
                .map(|_| {
                    let t = rng.gen_range(0.0..std::f64::consts::PI);
                    ((t / 2.0).cos().into(), (t / 2.0).sin().into())
                })
                .collect();
            let mut grouped = GroupedState::product(&factors);
            let mut full = StateVector::product_state(&factors);

            for _ in 0..12 {
                if rng.gen_bool(0.5) {
                    let q = rng.gen_range(0..n);
                    let m = mat2(GateKind::Ry, &[rng.gen_range(0.0..6.0)]);
                    grouped.apply1(q, &m).unwrap();
                    full.apply_mat2(q, &m).unwrap();
                } else {
                    let a = rng.gen_range(0..n);
                    let mut b = rng.gen_range(0..n);
                    while b == a {
                        b = rng.gen_range(0..n);
                    }
                    let m = mat4(GateKind::Crx, &[rng.gen_range(0.0..6.0)]);
                    grouped.apply2(a, b, &m).unwrap();
                    full.apply_mat4(a, b, &m).unwrap();
                }
            }
            for q in 0..n {
                assert_abs_diff_eq!(
                    grouped.prob_one(q).unwrap(),
                    full.prob_one(q).unwrap(),
                    epsilon = 1e-10
                );
            }
        }
    }

    #[test]
    fn discard_matches_marginals_of_survivors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(33);
        for _ in 0..30 {
            let n = 4;
            let factors: Vec<(Complex64, Complex64)> = (0..n)
                .map(|_| {
                    let t = rng.gen_range(0.0..std::f64::consts::PI);
                    ((t / 2.0).cos().into(), (t / 2.0).sin().into())
                })
                .collect();
            let mut grouped = GroupedState::product(&factors);
            let mut full = StateVector::product_state(&factors);

            let entangler = mat4(GateKind::Cx, &[]);
            for (a, b) in [(0usize, 1usize), (2, 3), (1, 2)] {
                grouped.apply2(a, b, &entangler).unwrap();
                full.apply_mat4(a, b, &entangler).unwrap();
            }
            // drop qubit 1: survivors keep exact marginals
            grouped.discard(1).unwrap();
            let m = mat2(GateKind::Ry, &[0.4]);
            grouped.apply1(3, &m).unwrap();
            full.apply_mat2(3, &m).unwrap();
            for q in [0usize, 2, 3] {
                assert_abs_diff_eq!(
                    grouped.prob_one(q).unwrap(),
                    full.prob_one(q).unwrap(),
                    epsilon = 1e-10
                );
            }
            assert!(grouped.prob_one(1).is_err());
        }
    }
}
