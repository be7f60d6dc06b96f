//! Expressibility, entanglement and complexity metrics with the
//! composite ansatz-search objective, in both the hybrid
//! (class-distribution) and regular (Haar-fidelity) flavors.

mod histogram;
mod objective;
mod report;
mod sampling;

pub use histogram::{kl_divergence, FidelityHistogram, HistogramConfig};
pub use objective::{
    derive_expr_threshold, haar_mean_entanglement, objective_lpqc, NoiseScale, ThresholdSet,
};
pub use report::MetricReport;
pub use sampling::{
    entanglement_metric, evaluate_circuit, expressibility_hybrid, expressibility_regular,
    meyer_wallach_q, ExprResult, Initializer, SamplingBudget, HYBRID_CLASSES,
};

use serde::{Deserialize, Serialize};

/// Which QCNN architecture a metric evaluation targets. The hybrid
/// flavor scores the measured-class distribution against a uniform
/// target; the regular flavor scores pair fidelities against the Haar
/// law.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Hybrid,
    Regular,
}

impl Arch {
    pub fn label(self) -> &'static str {
        match self {
            Arch::Hybrid => "hybrid",
            Arch::Regular => "regular",
        }
    }

    pub fn parse(s: &str) -> Option<Arch> {
        match s.to_ascii_lowercase().as_str() {
            "hybrid" | "h" => Some(Arch::Hybrid),
            "regular" | "r" => Some(Arch::Regular),
            _ => None,
        }
    }
}
