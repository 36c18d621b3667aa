//! Machine- and human-readable command reports.

use serde::Serialize;
use std::collections::BTreeMap;

/// One verified quantity inside a report.
#[derive(Debug, Clone, Serialize)]
pub struct StepRecord {
    pub id: String,
    pub dim: u32,
    pub computed: f64,
    pub reference: f64,
    pub residual: f64,
    pub neval: u64,
    pub converged: bool,
    pub anchor: String,
}

/// The stable report shape shared by all commands.
///
/// JSON field names and order are part of the CLI contract; repeated
/// runs of the same invocation differ only in `wall_ms`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub steps: Vec<StepRecord>,
    pub all_pass: bool,
    pub wall_ms: f64,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            params: BTreeMap::new(),
            steps: Vec::new(),
            all_pass: false,
            wall_ms: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.params.insert(key.to_string(), value.to_string());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plain-text table: one row per step, values at 17 significant
    /// digits, residuals in scientific notation.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        for (k, v) in &self.params {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for s in &self.steps {
            out.push_str(&format!(
                "{:<6} dim {}  computed {}  reference {}  residual {:.3e}  neval {:>9}  {}\n",
                s.id,
                s.dim,
                full(s.computed),
                full(s.reference),
                s.residual,
                s.neval,
                if s.converged { "converged" } else { "NOT CONVERGED" },
            ));
            out.push_str(&format!("       {}\n", s.anchor));
        }
        out.push_str(&format!(
            "result: {}  ({:.3} ms)\n",
            if self.all_pass { "PASS" } else { "FAIL" },
            self.wall_ms
        ));
        out
    }
}

/// A float at 17 significant digits (round-trip exact).
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_stable_field_names() {
        let mut r = Report::new("eval");
        r.param("name", "ahmed");
        r.steps.push(StepRecord {
            id: "ahmed".into(),
            dim: 1,
            computed: 0.5140418958900709,
            reference: 0.5140418958900708,
            residual: 1e-16,
            neval: 135,
            converged: true,
            anchor: "A".into(),
        });
        r.all_pass = true;
        let json = r.to_json();
        for key in [
            "\"command\"",
            "\"params\"",
            "\"steps\"",
            "\"id\"",
            "\"dim\"",
            "\"computed\"",
            "\"reference\"",
            "\"residual\"",
            "\"neval\"",
            "\"converged\"",
            "\"anchor\"",
            "\"all_pass\"",
            "\"wall_ms\"",
        ] {
            assert!(json.contains(key), "missing {key} in {json}");
        }
        let round: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(round["steps"][0]["neval"], 135);
    }

    #[test]
    fn full_precision_formatting() {
        assert_eq!(full(0.5140418958900709), "5.1404189589007088e-1");
        // 17 significant digits means the text is round-trip exact.
        for v in [std::f64::consts::PI, 0.1, 5.0 * std::f64::consts::PI.powi(2) / 96.0] {
            let reparsed: f64 = full(v).parse().unwrap();
            assert_eq!(reparsed.to_bits(), v.to_bits());
        }
    }
}
