//! JSON state files and output formatting.
//!
//! A state file looks like `{"energies": [0, 1, 2], "beta": 0.2, "state": [0.42, 0.51, 0.07]}`.
//! Pair files add `"target"`, catalyst searches add `"catalyst_gibbs"`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::state::{Dist, EnergySpectrum};

pub const JSON_DIGITS: usize = 12;
pub const CSV_DIGITS: usize = 8;

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub energies: Vec<f64>,
    pub beta: f64,
    #[serde(default)]
    pub state: Option<Vec<f64>>,
    #[serde(default)]
    pub target: Option<Vec<f64>>,
    #[serde(default)]
    pub catalyst_gibbs: Option<f64>,
}

impl StateFile {
    /// Parses a state file; the error message carries serde's line and column.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("malformed input at line {}, column {}: {e}", e.line(), e.column()))
    }

    pub fn spectrum(&self, beta_override: Option<f64>) -> Result<EnergySpectrum> {
        EnergySpectrum::new(self.energies.clone(), beta_override.unwrap_or(self.beta))
    }
}

/// Rounds to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) => {
            if n.is_f64() {
                if let Some(r) = n.as_f64().map(|x| round_sig(x, JSON_DIGITS)).and_then(serde_json::Number::from_f64) {
                    *n = r;
                }
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

/// Pretty JSON with every float rounded to [`JSON_DIGITS`] significant digits.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut v = serde_json::to_value(value).expect("serialisable output");
    round_value(&mut v);
    serde_json::to_string_pretty(&v).expect("serialisable output")
}

/// A float cell rounded to [`CSV_DIGITS`] significant digits.
pub fn csv_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        round_sig(x, CSV_DIGITS).to_string()
    }
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// Serialises a distribution as a plain array.
pub fn dist_values(p: &Dist) -> Vec<f64> {
    p.as_slice().to_vec()
}
