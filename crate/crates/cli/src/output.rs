use std::time::Duration;

use forest_spectra::ExactMatrix;
use num_rational::BigRational;
use serde_json::{json, Value};

/// A finished command: what was asked, what was computed, and whether every
/// check that applies came out as the theory says.
pub struct Report {
    pub command: &'static str,
    pub input: Value,
    pub result: Value,
    pub verdict: Value,
    pub passed: bool,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.passed
    }

    pub fn into_json(self, elapsed: Duration) -> String {
        let mut verdict = self.verdict;
        if let Value::Object(map) = &mut verdict {
            map.insert("passed".into(), Value::Bool(self.passed));
        }
        let body = json!({
            "command": self.command,
            "input": self.input,
            "result": self.result,
            "verdict": verdict,
            "timing_ms": elapsed.as_millis() as u64,
        });
        serde_json::to_string_pretty(&body).expect("reports are plain JSON values")
    }
}

/// Rationals always print as `num/den`, integers included.
pub fn rational(x: &BigRational) -> Value {
    Value::String(format!("{}/{}", x.numer(), x.denom()))
}

pub fn matrix(m: &ExactMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(rational).collect())).collect())
}

pub fn big<T: std::fmt::Display>(x: &T) -> Value {
    Value::String(x.to_string())
}
