use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::Arch;

/// One circuit's metric row: complexity triple, expressibility and
/// entanglement with spreads, and the composite objective.
/// Expressibility and the objective may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub circuit_id: String,
    pub qubits: usize,
    pub arch: Arch,
    pub params: usize,
    pub depth: usize,
    pub gates: usize,
    pub expr_mean: f64,
    pub expr_std: f64,
    pub entgl_mean: f64,
    pub entgl_std: f64,
    pub l_pqc: f64,
}

/// Render a metric value; infinities print as "inf".
pub fn fmt_metric(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.6}")
    }
}

impl MetricReport {
    pub const CSV_HEADER: &'static str =
        "circuit_id,qubits,arch,params,depth,gates,expr_mean,expr_std,entgl_mean,entgl_std,l_pqc";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.circuit_id,
            self.qubits,
            self.arch.label(),
            self.params,
            self.depth,
            self.gates,
            fmt_metric(self.expr_mean),
            fmt_metric(self.expr_std),
            fmt_metric(self.entgl_mean),
            fmt_metric(self.entgl_std),
            fmt_metric(self.l_pqc),
        )
    }
}

impl Serialize for MetricReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        fn metric<S: Serializer>(
            st: &mut S::SerializeStruct,
            name: &'static str,
            v: f64,
        ) -> Result<(), S::Error> {
            if v.is_infinite() {
                st.serialize_field(name, "inf")
            } else {
                st.serialize_field(name, &v)
            }
        }
        let mut st = serializer.serialize_struct("MetricReport", 11)?;
        st.serialize_field("circuit_id", &self.circuit_id)?;
        st.serialize_field("qubits", &self.qubits)?;
        st.serialize_field("arch", self.arch.label())?;
        st.serialize_field("params", &self.params)?;
        st.serialize_field("depth", &self.depth)?;
        st.serialize_field("gates", &self.gates)?;
        metric::<S>(&mut st, "expr_mean", self.expr_mean)?;
        metric::<S>(&mut st, "expr_std", self.expr_std)?;
        metric::<S>(&mut st, "entgl_mean", self.entgl_mean)?;
        metric::<S>(&mut st, "entgl_std", self.entgl_std)?;
        metric::<S>(&mut st, "l_pqc", self.l_pqc)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_metrics_render_as_inf() {
        let r = MetricReport {
            circuit_id: "C1".into(),
            qubits: 9,
            arch: Arch::Regular,
            params: 9,
            depth: 10,
            gates: 26,
            expr_mean: f64::INFINITY,
            expr_std: f64::INFINITY,
            entgl_mean: 1.0,
            entgl_std: 0.0,
            l_pqc: f64::INFINITY,
        };
        let csv = r.csv_row();
        assert!(csv.contains(",inf,"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"expr_mean\":\"inf\""));
        assert!(json.contains("\"entgl_mean\":1.0"));
    }
}
