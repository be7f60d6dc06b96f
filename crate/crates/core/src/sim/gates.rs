use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SimError;

/// 2x2 complex matrix, row major.
pub type Mat2 = [[Complex64; 2]; 2];
/// 4x4 complex matrix, row major. Basis index of a two-qubit gate is
/// `2*b_first + b_second` where the first listed qubit is the first
/// tensor factor.
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// The gate vocabulary used for circuits, encodings and the ansatz search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    Sx,
    X,
    Y,
    Z,
    Rx,
    Ry,
    Rz,
    U3,
    Cx,
    Cy,
    Cz,
    Ecr,
    Crx,
    Cry,
    Crz,
}

impl GateKind {
    pub const ALL: [GateKind; 16] = [
        GateKind::H,
        GateKind::Sx,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Cy,
        GateKind::Cz,
        GateKind::Ecr,
        GateKind::Crx,
        GateKind::Cry,
        GateKind::Crz,
    ];

    /// Number of qubits the gate acts on.
    pub fn arity(self) -> usize {
        match self {
            GateKind::H
            | GateKind::Sx
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::U3 => 1,
            _ => 2,
        }
    }

    /// Number of real rotation parameters.
    pub fn num_params(self) -> usize {
        match self {
            GateKind::U3 => 3,
            GateKind::Rx
            | GateKind::Ry
            | GateKind::Rz
            | GateKind::Crx
            | GateKind::Cry
            | GateKind::Crz => 1,
            _ => 0,
        }
    }

    pub fn is_trainable(self) -> bool {
        self.num_params() > 0
    }
}

/// A concrete unitary produced by binding parameters to a [`GateKind`].
#[derive(Debug, Clone, Copy)]
pub enum GateMatrix {
    Single(Mat2),
    Two(Mat4),
}

pub const MAT2_ID: Mat2 = [[ONE, ZERO], [ZERO, ONE]];

pub fn rx_mat(theta: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(0.0, -s)],
        [Complex64::new(0.0, -s), Complex64::new(c, 0.0)],
    ]
}

pub fn ry_mat(theta: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
        [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
    ]
}

pub fn rz_mat(theta: f64) -> Mat2 {
    [
        [Complex64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, Complex64::from_polar(1.0, theta / 2.0)],
    ]
}

/// The universal single-qubit gate,
/// `[[cos(t/2), -e^{il} sin(t/2)], [e^{ip} sin(t/2), e^{i(p+l)} cos(t/2)]]`.
pub fn u3_mat(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    [
        [
            Complex64::new(c, 0.0),
            -Complex64::from_polar(s, lambda),
        ],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(c, phi + lambda),
        ],
    ]
}

fn x_mat() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

fn y_mat() -> Mat2 {
    [[ZERO, -I], [I, ZERO]]
}

fn z_mat() -> Mat2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

fn h_mat() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Principal square root of X; SX^2 = X exactly.
fn sx_mat() -> Mat2 {
    let p = Complex64::new(0.5, 0.5);
    let m = Complex64::new(0.5, -0.5);
    [[p, m], [m, p]]
}

/// Controlled version of `u`: first tensor factor is the control.
fn controlled(u: Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    out[0][0] = ONE;
    out[1][1] = ONE;
    for r in 0..2 {
        for c in 0..2 {
            out[2 + r][2 + c] = u[r][c];
        }
    }
    out
}

/// Echoed cross-resonance, `(1/sqrt2) (I (x) X - X (x) Y)`; the first
/// listed qubit is the first tensor factor.
fn ecr_mat() -> Mat4 {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let c = |re: f64, im: f64| Complex64::new(re * r, im * r);
    [
        [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)],
        [c(1.0, 0.0), c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(1.0, 0.0)],
        [c(0.0, -1.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
    ]
}

/// Bind `params` to `kind`, producing the concrete unitary.
pub fn gate_matrix(kind: GateKind, params: &[f64]) -> Result<GateMatrix, SimError> {
    if params.len() != kind.num_params() {
        return Err(SimError::WrongParamCount {
            kind,
            expected: kind.num_params(),
            got: params.len(),
        });
    }
    let m = match kind {
        GateKind::H => GateMatrix::Single(h_mat()),
        GateKind::Sx => GateMatrix::Single(sx_mat()),
        GateKind::X => GateMatrix::Single(x_mat()),
        GateKind::Y => GateMatrix::Single(y_mat()),
        GateKind::Z => GateMatrix::Single(z_mat()),
        GateKind::Rx => GateMatrix::Single(rx_mat(params[0])),
        GateKind::Ry => GateMatrix::Single(ry_mat(params[0])),
        GateKind::Rz => GateMatrix::Single(rz_mat(params[0])),
        GateKind::U3 => GateMatrix::Single(u3_mat(params[0], params[1], params[2])),
        GateKind::Cx => GateMatrix::Two(controlled(x_mat())),
        GateKind::Cy => GateMatrix::Two(controlled(y_mat())),
        GateKind::Cz => GateMatrix::Two(controlled(z_mat())),
        GateKind::Ecr => GateMatrix::Two(ecr_mat()),
        GateKind::Crx => GateMatrix::Two(controlled(rx_mat(params[0]))),
        GateKind::Cry => GateMatrix::Two(controlled(ry_mat(params[0]))),
        GateKind::Crz => GateMatrix::Two(controlled(rz_mat(params[0]))),
    };
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_dev_from_unitary_2(m: &Mat2) -> f64 {
        // max |(U U^dag - I)_{rc}|
        let mut dev: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let mut s = ZERO;
                for k in 0..2 {
                    s += m[r][k] * m[c][k].conj();
                }
                let target = if r == c { ONE } else { ZERO };
                dev = dev.max((s - target).norm());
            }
        }
        dev
    }

    fn max_dev_from_unitary_4(m: &Mat4) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let mut s = ZERO;
                for k in 0..4 {
                    s += m[r][k] * m[c][k].conj();
                }
                let target = if r == c { ONE } else { ZERO };
                dev = dev.max((s - target).norm());
            }
        }
        dev
    }

    #[test]
    fn u3_zero_angles_is_identity() {
        let m = u3_mat(0.0, 0.0, 0.0);
        for r in 0..2 {
            for c in 0..2 {
                assert!((m[r][c] - MAT2_ID[r][c]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        let m = rx_mat(std::f64::consts::PI);
        assert!((m[0][0]).norm() < 1e-12);
        assert!((m[0][1] - -I).norm() < 1e-12);
        assert!((m[1][0] - -I).norm() < 1e-12);
        assert!((m[1][1]).norm() < 1e-12);
    }

    #[test]
    fn crz_zero_is_identity() {
        let GateMatrix::Two(m) = gate_matrix(GateKind::Crz, &[0.0]).unwrap() else {
            panic!("crz is two-qubit");
        };
        for r in 0..4 {
            for c in 0..4 {
                let target = if r == c { ONE } else { ZERO };
                assert!((m[r][c] - target).norm() < 1e-12);
            }
        }
    }

    fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    #[test]
    fn sx_squared_is_x() {
        let sq = mat2_mul(&sx_mat(), &sx_mat());
        let x = x_mat();
        for r in 0..2 {
            for c in 0..2 {
                assert!((sq[r][c] - x[r][c]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn wrong_param_count_rejected() {
        assert!(matches!(
            gate_matrix(GateKind::U3, &[0.1]),
            Err(SimError::WrongParamCount { .. })
        ));
        assert!(matches!(
            gate_matrix(GateKind::H, &[0.1]),
            Err(SimError::WrongParamCount { .. })
        ));
    }

    #[test]
    fn every_kind_is_unitary_on_random_params() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for kind in GateKind::ALL {
            for _ in 0..1000 {
                let params: Vec<f64> = (0..kind.num_params())
                    .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                    .collect();
                let dev = match gate_matrix(kind, &params).unwrap() {
                    GateMatrix::Single(m) => max_dev_from_unitary_2(&m),
                    GateMatrix::Two(m) => max_dev_from_unitary_4(&m),
                };
                assert!(dev < 1e-10, "{kind:?} deviates {dev}");
            }
        }
    }
}
