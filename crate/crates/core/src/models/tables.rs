// reference values coincidentally near well-known constants are data,
// not approximations
#![allow(clippy::approx_constant)]

use crate::metrics::{Arch, ThresholdSet};
use crate::models::BaselineId;

/// One published evaluation row: complexity triple, expressibility and
/// entanglement (mean, std) and the printed objective value.
/// Expressibility and the objective are infinite for the 9-qubit
/// regular circuit 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub id: BaselineId,
    pub params: usize,
    pub depth: usize,
    pub gates: usize,
    pub expr: (f64, f64),
    pub entgl: (f64, f64),
    pub l_pqc: f64,
}

/// A published evaluation table: one architecture at one qubit count.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceTable {
    /// Table key accepted by the reproduction command (s1..s8 follow the
    /// hybrid 2/3/4/9 then regular 2/3/4/9 order).
    pub key: &'static str,
    pub arch: Arch,
    pub qubits: usize,
    pub rows: &'static [ReferenceRow],
    /// Printed expressibility threshold (the entanglement threshold and
    /// the caps follow from the qubit count).
    pub expr_thr: f64,
    pub expr_max: f64,
}

impl ReferenceTable {
    pub fn thresholds(&self) -> ThresholdSet {
        ThresholdSet::standard(self.arch, self.qubits)
    }
}

const INF: f64 = f64::INFINITY;

use BaselineId::*;

macro_rules! row {
    ($id:expr, $p:expr, $d:expr, $g:expr, $em:expr, $es:expr, $nm:expr, $ns:expr, $l:expr) => {
        ReferenceRow {
            id: $id,
            params: $p,
            depth: $d,
            gates: $g,
            expr: ($em, $es),
            entgl: ($nm, $ns),
            l_pqc: $l,
        }
    };
}

static HYBRID_2Q: [ReferenceRow; 7] = [
    row!(C1, 2, 3, 5, 0.252, 0.31, 0.203, 0.258, 1.664),
    row!(C2, 3, 3, 4, 0.005, 0.001, 0.249, 0.003, 1.376),
    row!(C3, 4, 3, 5, 0.331, 0.325, 0.501, 0.14, 1.23),
    row!(C4, 4, 3, 5, 0.005, 0.001, 0.25, 0.002, 1.375),
    row!(C5, 4, 4, 6, 0.002, 0.001, 0.313, 0.002, 1.218),
    row!(C6, 6, 4, 6, 0.005, 0.001, 0.214, 0.002, 1.466),
    row!(As, 2, 4, 5, 0.013, 0.012, 0.389, 0.09, 1.028),
];

static HYBRID_3Q: [ReferenceRow; 7] = [
    row!(C1, 3, 4, 8, 0.245, 0.304, 0.324, 0.252, 1.681),
    row!(C2, 4, 4, 6, 0.002, 0.001, 0.375, 0.003, 1.438),
    row!(C3, 6, 4, 8, 0.241, 0.305, 0.606, 0.08, 1.255),
    row!(C4, 6, 5, 9, 0.002, 0.0, 0.375, 0.002, 1.438),
    row!(C5, 6, 8, 12, 0.253, 0.006, 0.626, 0.002, 1.234),
    row!(C6, 12, 8, 12, 0.0, 0.0, 0.397, 0.002, 1.405),
    row!(As, 3, 3, 5, 0.11, 0.223, 0.758, 0.1, 1.069),
];

static HYBRID_4Q: [ReferenceRow; 6] = [
    row!(C1, 4, 5, 11, 0.252, 0.306, 0.319, 0.219, 1.784),
    row!(C2, 7, 5, 10, 0.021, 0.002, 0.367, 0.002, 1.558),
    row!(C3, 8, 5, 11, 0.249, 0.307, 0.677, 0.062, 1.348),
    row!(C4, 8, 6, 12, 0.002, 0.001, 0.375, 0.002, 1.545),
    row!(C5, 8, 9, 16, 0.348, 0.005, 0.711, 0.001, 1.379),
    row!(As, 2, 3, 7, 0.006, 0.005, 0.859, 0.017, 0.37),
];

static HYBRID_9Q: [ReferenceRow; 6] = [
    row!(C1, 9, 10, 26, 0.25, 0.306, 0.371, 0.153, 1.798),
    row!(C2, 16, 8, 24, 0.204, 0.005, 0.435, 0.001, 1.7),
    row!(C3, 18, 10, 26, 0.232, 0.299, 0.776, 0.031, 1.376),
    row!(C4, 18, 11, 27, 0.002, 0.001, 0.375, 0.001, 1.623),
    row!(C5, 18, 13, 36, 0.421, 0.004, 0.763, 0.001, 1.528),
    row!(As, 9, 9, 20, 0.002, 0.001, 0.962, 0.002, 1.032),
];

static REGULAR_2Q: [ReferenceRow; 7] = [
    row!(C1, 2, 3, 5, 0.734, 0.758, 1.0, 0.0, 1.055),
    row!(C2, 3, 3, 4, 0.127, 0.137, 0.252, 0.001, 1.378),
    row!(C3, 4, 3, 5, 0.035, 0.033, 0.371, 0.001, 1.073),
    row!(C4, 4, 3, 5, 0.035, 0.033, 0.251, 0.001, 1.373),
    row!(C5, 4, 4, 6, 0.033, 0.032, 0.318, 0.006, 1.206),
    row!(C6, 6, 4, 6, 0.011, 0.005, 0.212, 0.003, 1.471),
    row!(As, 2, 6, 8, 0.096, 0.043, 0.407, 0.001, 1.006),
];

static REGULAR_3Q: [ReferenceRow; 7] = [
    row!(C1, 3, 4, 8, 0.601, 0.332, 1.0, 0.0, 1.019),
    row!(C2, 4, 4, 6, 0.17, 0.128, 0.377, 0.0, 1.439),
    row!(C3, 6, 4, 8, 0.017, 0.013, 0.531, 0.006, 1.203),
    row!(C4, 6, 5, 9, 0.046, 0.05, 0.376, 0.001, 1.439),
    row!(C5, 6, 8, 12, 0.135, 0.142, 0.627, 0.002, 1.063),
    row!(C6, 12, 8, 12, 0.006, 0.001, 0.395, 0.002, 1.407),
    row!(As, 3, 6, 10, 0.072, 0.015, 0.888, 0.0, 1.002),
];

// The printed 4-qubit circuit-3 entanglement reads 1.621; the metric is
// bounded by 1 and the row's own objective value pins it at 0.621.
static REGULAR_4Q: [ReferenceRow; 6] = [
    row!(C1, 4, 5, 11, 0.55, 0.207, 1.0, 0.0, 1.008),
    row!(C2, 7, 5, 10, 0.019, 0.014, 0.367, 0.003, 1.554),
    row!(C3, 8, 5, 11, 0.007, 0.002, 0.621, 0.002, 1.246),
    row!(C4, 8, 6, 12, 0.048, 0.033, 0.372, 0.002, 1.549),
    row!(C5, 8, 9, 16, 0.01, 0.004, 0.713, 0.001, 1.134),
    row!(As, 4, 8, 19, 0.039, 0.012, 0.874, 0.0, 1.0),
];

static REGULAR_9Q: [ReferenceRow; 6] = [
    row!(C1, 9, 10, 26, INF, INF, 1.0, 0.0, INF),
    row!(C2, 16, 8, 24, 0.005, 0.002, 0.435, 0.002, 1.562),
    row!(C3, 18, 10, 26, 0.001, 0.001, 0.792, 0.001, 1.203),
    row!(C4, 18, 11, 27, 0.001, 0.001, 0.377, 0.001, 1.621),
    row!(C5, 18, 13, 36, 0.001, 0.001, 0.762, 0.001, 1.234),
    row!(As, 9, 18, 45, 0.047, 0.006, 1.0, 0.0, 1.0),
];

/// All published evaluation tables in order: hybrid 2/3/4/9 qubits, then
/// regular 2/3/4/9 qubits.
pub fn reference_tables() -> Vec<ReferenceTable> {
    let ln4 = 4.0_f64.ln();
    vec![
        ReferenceTable {
            key: "s1",
            arch: Arch::Hybrid,
            qubits: 2,
            rows: &HYBRID_2Q,
            expr_thr: 0.016,
            expr_max: ln4,
        },
        ReferenceTable {
            key: "s2",
            arch: Arch::Hybrid,
            qubits: 3,
            rows: &HYBRID_3Q,
            expr_thr: 0.016,
            expr_max: ln4,
        },
        ReferenceTable {
            key: "s3",
            arch: Arch::Hybrid,
            qubits: 4,
            rows: &HYBRID_4Q,
            expr_thr: 0.016,
            expr_max: ln4,
        },
        ReferenceTable {
            key: "s4",
            arch: Arch::Hybrid,
            qubits: 9,
            rows: &HYBRID_9Q,
            expr_thr: 0.016,
            expr_max: ln4,
        },
        ReferenceTable {
            key: "s5",
            arch: Arch::Regular,
            qubits: 2,
            rows: &REGULAR_2Q,
            expr_thr: 0.021,
            expr_max: 12.95,
        },
        ReferenceTable {
            key: "s6",
            arch: Arch::Regular,
            qubits: 3,
            rows: &REGULAR_3Q,
            expr_thr: 0.02,
            expr_max: 30.22,
        },
        ReferenceTable {
            key: "s7",
            arch: Arch::Regular,
            qubits: 4,
            rows: &REGULAR_4Q,
            expr_thr: 0.019,
            expr_max: 69.08,
        },
        ReferenceTable {
            key: "s8",
            arch: Arch::Regular,
            qubits: 9,
            rows: &REGULAR_9Q,
            expr_thr: 0.013,
            expr_max: 69.08,
        },
    ]
}

/// Look up a table by key (`s1`..`s8`) or by `<arch>-<q>q` name such as
/// `hybrid-2q` or `regular-9q`.
pub fn reference_table(which: &str) -> Option<ReferenceTable> {
    let w = which.to_ascii_lowercase();
    reference_tables().into_iter().find(|t| {
        t.key == w || format!("{}-{}q", t.arch.label(), t.qubits) == w
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::objective_lpqc;
    use crate::sim::Complexity;

    #[test]
    fn every_library_triple_matches_its_reference_row() {
        for table in reference_tables() {
            for row in table.rows {
                let circuit =
                    crate::models::baseline_circuit(row.id, table.qubits, table.arch).unwrap();
                let c = circuit.complexity();
                assert_eq!(
                    (c.params, c.depth, c.gates),
                    (row.params, row.depth, row.gates),
                    "{} {:?} at {} qubits",
                    table.arch.label(),
                    row.id,
                    table.qubits
                );
            }
        }
    }

    #[test]
    fn printed_objectives_recompute_from_printed_metrics() {
        // Eq-style recomputation from each row's own printed metric
        // values; rows in the complexity branch are skipped (the printed
        // search-time value there used a different normalization).
        for table in reference_tables() {
            let thr = table.thresholds();
            let thr = crate::metrics::ThresholdSet {
                expr_thr: table.expr_thr,
                expr_max: table.expr_max,
                ..thr
            };
            for row in table.rows {
                let c = Complexity {
                    params: row.params,
                    depth: row.depth,
                    gates: row.gates,
                };
                let recomputed = objective_lpqc(row.expr.0, row.entgl.0, c, &thr);
                if recomputed.is_infinite() {
                    assert!(row.l_pqc.is_infinite());
                    continue;
                }
                if recomputed <= 1.0 {
                    continue; // complexity branch
                }
                assert!(
                    (recomputed - row.l_pqc).abs() <= 0.02,
                    "{} {:?} {}q: recomputed {recomputed:.4} vs printed {}",
                    table.arch.label(),
                    row.id,
                    table.qubits,
                    row.l_pqc
                );
            }
        }
    }
}
