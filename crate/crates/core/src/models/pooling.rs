use num_complex::Complex64;

use crate::sim::{gate_matrix, GateKind, GateMatrix, Mat4, SimError, StateVector};

fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = [[zero; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = zero;
            for k in 0..4 {
                acc += a[r][k] * b[k][c];
            }
            out[r][c] = acc;
        }
    }
    out
}

fn two_qubit(kind: GateKind, params: &[f64]) -> Mat4 {
    match gate_matrix(kind, params).expect("two-qubit gate") {
        GateMatrix::Two(m) => m,
        GateMatrix::Single(_) => unreachable!(),
    }
}

fn x_on_control() -> Mat4 {
    // X on the first tensor factor
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [[zero; 4]; 4];
    m[0][2] = one;
    m[1][3] = one;
    m[2][0] = one;
    m[3][1] = one;
    m
}

/// The two-qubit pooling unitary
/// `(X (x) I) CRX(theta0) (X (x) I) CRZ(theta1)`: an Rz lands on the
/// target when the control is |1>, an Rx when it is |0>. The first
/// tensor factor is the control.
pub fn pooling_unitary(theta0: f64, theta1: f64) -> Mat4 {
    let crz = two_qubit(GateKind::Crz, &[theta1]);
    let crx = two_qubit(GateKind::Crx, &[theta0]);
    let x = x_on_control();
    mat4_mul(&x, &mat4_mul(&crx, &mat4_mul(&x, &crz)))
}

/// Apply one pooling operation onto the statevector: the discarded
/// qubit controls, the surviving qubit is the target.
pub fn apply_pooling(
    state: &mut StateVector,
    control: usize,
    target: usize,
    theta0: f64,
    theta1: f64,
) -> Result<(), SimError> {
    let u = pooling_unitary(theta0, theta1);
    state.apply_mat4(control, target, &u)
}

/// The interpolation arrows for a `rows x cols` grid: (control cell,
/// target cell) pairs in application order. The corner folds into its
/// left neighbor first, then the remaining last-column cells fold left,
/// then the last-row cells fold up. The grid shrinks by one row and one
/// column.
pub fn interpolation_arrows(rows: usize, cols: usize) -> Vec<((usize, usize), (usize, usize))> {
    assert!(rows >= 2 && cols >= 2, "interpolation needs a 2x2 grid");
    let mut arrows = Vec::with_capacity(rows + cols - 1);
    arrows.push(((rows - 1, cols - 1), (rows - 1, cols - 2)));
    for r in 0..rows - 1 {
        arrows.push(((r, cols - 1), (r, cols - 2)));
    }
    for c in 0..cols - 1 {
        arrows.push(((rows - 1, c), (rows - 2, c)));
    }
    arrows
}

/// Pooling pairs of one 2x2-block pooling layer over a `rows x cols`
/// grid (both even): per block, top-right and bottom-right fold into
/// their left neighbors, then the bottom-left folds into the surviving
/// top-left cell.
pub fn pooling_block_arrows(rows: usize, cols: usize) -> Vec<((usize, usize), (usize, usize))> {
    assert!(
        rows % 2 == 0 && cols % 2 == 0,
        "2x2 pooling needs even grid dimensions"
    );
    let mut arrows = Vec::new();
    for br in 0..rows / 2 {
        for bc in 0..cols / 2 {
            let (r, c) = (2 * br, 2 * bc);
            arrows.push(((r, c + 1), (r, c)));
            arrows.push(((r + 1, c + 1), (r + 1, c)));
            arrows.push(((r + 1, c), (r, c)));
        }
    }
    arrows
}
