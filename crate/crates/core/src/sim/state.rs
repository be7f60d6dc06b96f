use num_complex::Complex64;

use super::gates::{GateMatrix, Mat2, Mat4};
use super::SimError;

/// A pure n-qubit state as 2^n dense complex amplitudes, unit norm.
///
/// Little-endian indexing: qubit 0 is the least significant bit of the
/// amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        assert!(num_qubits >= 1, "state needs at least one qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        StateVector { num_qubits, amps }
    }

    /// Computational basis state |index> (little-endian bits).
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut s = Self::zero(num_qubits);
        s.amps[0] = Complex64::new(0.0, 0.0);
        s.amps[index] = Complex64::new(1.0, 0.0);
        s
    }

    /// Wrap raw amplitudes. The length must be a power of two and the
    /// norm must be 1 within 1e-10.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let n = amps.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(SimError::DimensionMismatch(format!(
                "amplitude count {n} is not a power of two >= 2"
            )));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(SimError::Contract(format!(
                "state norm^2 = {norm}, expected 1"
            )));
        }
        Ok(StateVector {
            num_qubits: n.trailing_zeros() as usize,
            amps,
        })
    }

    /// Tensor product of per-qubit pure states given as (a0, a1) pairs;
    /// qubit i of the result is `factors[i]`.
    pub fn product_state(factors: &[(Complex64, Complex64)]) -> Self {
        assert!(!factors.is_empty());
        let n = factors.len();
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        let mut filled = 1usize;
        for (q, &(a0, a1)) in factors.iter().enumerate() {
            let _ = q;
            for i in (0..filled).rev() {
                let v = amps[i];
                amps[i] = v * a0;
                amps[i + filled] = v * a1;
            }
            filled <<= 1;
        }
        StateVector { num_qubits: n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    fn check_qubit(&self, q: usize) -> Result<(), SimError> {
        if q >= self.num_qubits {
            Err(SimError::QubitOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            })
        } else {
            Ok(())
        }
    }

    /// Apply a single-qubit unitary to `qubit`, in place.
    pub fn apply_mat2(&mut self, qubit: usize, m: &Mat2) -> Result<(), SimError> {
        self.check_qubit(qubit)?;
        let step = 1usize << qubit;
        let len = self.amps.len();
        let mut base = 0;
        while base < len {
            for off in 0..step {
                let i = base + off;
                let j = i | step;
                let a = self.amps[i];
                let b = self.amps[j];
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[j] = m[1][0] * a + m[1][1] * b;
            }
            base += step << 1;
        }
        Ok(())
    }

    /// Apply a two-qubit unitary; `first` is the first tensor factor of
    /// the 4x4 matrix (its bit selects the upper half of the index).
    pub fn apply_mat4(&mut self, first: usize, second: usize, m: &Mat4) -> Result<(), SimError> {
        self.check_qubit(first)?;
        self.check_qubit(second)?;
        if first == second {
            return Err(SimError::DuplicateQubit { index: first });
        }
        let bf = 1usize << first;
        let bs = 1usize << second;
        let mask = bf | bs;
        for i in 0..self.amps.len() {
            if i & mask != 0 {
                continue;
            }
            // i has both bits clear; the block is {i, i|bs, i|bf, i|bf|bs}
            // ordered by (bit_first, bit_second).
            let idx = [i, i | bs, i | bf, i | bf | bs];
            let v = [
                self.amps[idx[0]],
                self.amps[idx[1]],
                self.amps[idx[2]],
                self.amps[idx[3]],
            ];
            for (r, &target) in idx.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, &vc) in v.iter().enumerate() {
                    acc += m[r][c] * vc;
                }
                self.amps[target] = acc;
            }
        }
        Ok(())
    }

    /// Apply a bound gate to the listed qubits.
    pub fn apply(&mut self, matrix: &GateMatrix, qubits: &[usize]) -> Result<(), SimError> {
        match matrix {
            GateMatrix::Single(m) => {
                if qubits.len() != 1 {
                    return Err(SimError::DimensionMismatch(format!(
                        "single-qubit gate got {} operands",
                        qubits.len()
                    )));
                }
                self.apply_mat2(qubits[0], m)
            }
            GateMatrix::Two(m) => {
                if qubits.len() != 2 {
                    return Err(SimError::DimensionMismatch(format!(
                        "two-qubit gate got {} operands",
                        qubits.len()
                    )));
                }
                self.apply_mat4(qubits[0], qubits[1], m)
            }
        }
    }

    /// Exact Born probability of measuring |1> on `qubit`, marginal over
    /// all other qubits. No sampling.
    pub fn prob_one(&self, qubit: usize) -> Result<f64, SimError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Reduced single-qubit density matrix of `qubit` (partial trace over
    /// the rest).
    pub fn reduced_density(&self, qubit: usize) -> Result<Mat2, SimError> {
        self.check_qubit(qubit)?;
        let bit = 1usize << qubit;
        let mut rho = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, a) in self.amps.iter().enumerate() {
            if i & bit != 0 {
                continue;
            }
            let b = self.amps[i | bit];
            rho[0][0] += a * a.conj();
            rho[0][1] += a * b.conj();
            rho[1][0] += b * a.conj();
            rho[1][1] += b * b.conj();
        }
        Ok(rho)
    }

    /// Purity Tr(rho_k^2) of the reduced single-qubit state; requires at
    /// least two qubits (undefined for a lone qubit).
    pub fn single_qubit_purity(&self, qubit: usize) -> Result<f64, SimError> {
        if self.num_qubits < 2 {
            return Err(SimError::Contract(
                "single-qubit purity needs >= 2 qubits".into(),
            ));
        }
        let rho = self.reduced_density(qubit)?;
        let mut tr = Complex64::new(0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                tr += rho[r][c] * rho[c][r];
            }
        }
        Ok(tr.re)
    }
}

/// Overlap probability |<a|b>|^2 between two pure states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64, SimError> {
    if a.num_qubits != b.num_qubits {
        return Err(SimError::DimensionMismatch(format!(
            "fidelity of {} vs {} qubits",
            a.num_qubits, b.num_qubits
        )));
    }
    let ip: Complex64 = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(ip.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::super::gates::{gate_matrix, GateKind};
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn hadamard_on_zero() {
        let mut s = StateVector::zero(1);
        let m = gate_matrix(GateKind::H, &[]).unwrap();
        s.apply(&m, &[0]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, std::f64::consts::FRAC_1_SQRT_2);
        assert_abs_diff_eq!(s.amplitudes()[1].re, std::f64::consts::FRAC_1_SQRT_2);
    }

    #[test]
    fn x_on_qubit_one_of_two() {
        let mut s = StateVector::zero(2);
        let m = gate_matrix(GateKind::X, &[]).unwrap();
        s.apply(&m, &[1]).unwrap();
        // |10> in ket order q1q0 = index 0b10.
        assert_abs_diff_eq!(s.amplitudes()[2].re, 1.0);
    }

    #[test]
    fn cx_with_clear_control_is_identity() {
        let mut s = StateVector::zero(2);
        let m = gate_matrix(GateKind::Cx, &[]).unwrap();
        s.apply(&m, &[0, 1]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0].re, 1.0);
    }

    #[test]
    fn cx_with_set_control_flips_target() {
        let mut s = StateVector::basis(2, 0b01); // q0 = 1
        let m = gate_matrix(GateKind::Cx, &[]).unwrap();
        s.apply(&m, &[0, 1]).unwrap();
        assert_abs_diff_eq!(s.amplitudes()[0b11].re, 1.0);
    }

    #[test]
    fn fidelity_examples() {
        let zero = StateVector::zero(1);
        let one = StateVector::basis(1, 1);
        let mut plus = StateVector::zero(1);
        plus.apply(&gate_matrix(GateKind::H, &[]).unwrap(), &[0])
            .unwrap();
        assert_abs_diff_eq!(fidelity(&zero, &zero).unwrap(), 1.0);
        assert_abs_diff_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert_abs_diff_eq!(fidelity(&zero, &plus).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn fidelity_dimension_mismatch() {
        let a = StateVector::zero(1);
        let b = StateVector::zero(2);
        assert!(fidelity(&a, &b).is_err());
    }

    #[test]
    fn prob_one_examples() {
        let s = StateVector::zero(1);
        assert_abs_diff_eq!(s.prob_one(0).unwrap(), 0.0);
        let mut h = StateVector::zero(1);
        h.apply(&gate_matrix(GateKind::H, &[]).unwrap(), &[0])
            .unwrap();
        assert_abs_diff_eq!(h.prob_one(0).unwrap(), 0.5, epsilon = 1e-12);
        let mut r = StateVector::zero(1);
        r.apply(
            &gate_matrix(GateKind::Ry, &[std::f64::consts::FRAC_PI_2]).unwrap(),
            &[0],
        )
        .unwrap();
        assert_abs_diff_eq!(r.prob_one(0).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn purity_of_product_and_bell() {
        let s = StateVector::zero(2);
        assert_abs_diff_eq!(s.single_qubit_purity(0).unwrap(), 1.0);

        let mut bell = StateVector::zero(2);
        bell.apply(&gate_matrix(GateKind::H, &[]).unwrap(), &[0])
            .unwrap();
        bell.apply(&gate_matrix(GateKind::Cx, &[]).unwrap(), &[0, 1])
            .unwrap();
        assert_abs_diff_eq!(bell.single_qubit_purity(0).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(bell.single_qubit_purity(1).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn purity_derived_example() {
        // qubit 1 of CX (Ry(pi/4) (x) I) |00> has purity 1 - sin^2(pi/4)/2.
        let mut s = StateVector::zero(2);
        s.apply(
            &gate_matrix(GateKind::Ry, &[std::f64::consts::FRAC_PI_4]).unwrap(),
            &[0],
        )
        .unwrap();
        s.apply(&gate_matrix(GateKind::Cx, &[]).unwrap(), &[0, 1])
            .unwrap();
        let expected = 1.0 - 0.5 * (std::f64::consts::FRAC_PI_4).sin().powi(2);
        assert_abs_diff_eq!(
            s.single_qubit_purity(1).unwrap(),
            expected,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(expected, 0.75);
    }

    #[test]
    fn purity_rejects_single_qubit_state() {
        let s = StateVector::zero(1);
        assert!(s.single_qubit_purity(0).is_err());
    }

    #[test]
    fn product_state_matches_gate_application() {
        let a = (Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8));
        let b = (
            Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        );
        let s = StateVector::product_state(&[a, b]);
        // index = b1 b0: amp(q1=i, q0=j) = b_i * a_j
        assert_abs_diff_eq!((s.amplitudes()[0] - a.0 * b.0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.amplitudes()[1] - a.1 * b.0).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.amplitudes()[2] - a.0 * b.1).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((s.amplitudes()[3] - a.1 * b.1).norm(), 0.0, epsilon = 1e-15);
    }
}
