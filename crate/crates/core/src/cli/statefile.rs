//! JSON state files.
//!
//! ```json
//! {
//!   "convention": { "hbar": 1.0, "ordering": "q1 p1 q2 p2", "vacuum_variance": 0.5 },
//!   "mean": [0.0, 0.0, 0.0, 0.0],
//!   "cov": [[0.5, 0.0, 0.0, 0.0], ...]
//! }
//! ```
//!
//! The convention block is mandatory and must match the library's units
//! exactly. `mean` is optional and defaults to zero. Floats are written in
//! shortest round-trip form, so parsing and re-serializing a file produced
//! here gives identical bytes.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::covariance::CovarianceMatrix;
use crate::matcore::{Mat4, Vector};
use crate::states::GaussianState;

pub const ORDERING: &str = "q1 p1 q2 p2";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Convention {
    pub hbar: f64,
    pub ordering: String,
    pub vacuum_variance: f64,
}

impl Default for Convention {
    fn default() -> Self {
        Self { hbar: 1.0, ordering: ORDERING.to_string(), vacuum_variance: 0.5 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub convention: Convention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vector<4>>,
    pub cov: [[f64; 4]; 4],
}

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read input: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed state file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported convention: {0}")]
    Convention(String),
    #[error("invalid covariance matrix: {0}")]
    Matrix(#[from] crate::error::Error),
}

impl StateFile {
    pub fn from_state(state: &GaussianState) -> Self {
        Self { convention: Convention::default(), mean: Some(*state.mean()), cov: state.cov().matrix().into_rows() }
    }

    pub fn parse(text: &str) -> Result<Self, InputError> {
        let file: Self = serde_json::from_str(text)?;
        file.validate_convention()?;
        Ok(file)
    }

    fn validate_convention(&self) -> Result<(), InputError> {
        let c = &self.convention;
        if c.hbar != 1.0 {
            return Err(InputError::Convention(format!("hbar must be 1, got {}", c.hbar)));
        }
        if c.ordering != ORDERING {
            return Err(InputError::Convention(format!("ordering must be \"{ORDERING}\", got \"{}\"", c.ordering)));
        }
        if c.vacuum_variance != 0.5 {
            return Err(InputError::Convention(format!("vacuum_variance must be 0.5, got {}", c.vacuum_variance)));
        }
        Ok(())
    }

    /// Indented JSON with one matrix row per line, followed by a newline.
    pub fn to_json(&self) -> String {
        to_pretty_json(&serde_json::to_value(self).expect("state file serializes"))
    }

    pub fn mean_or_zero(&self) -> Vector<4> {
        self.mean.unwrap_or([0.0; 4])
    }

    pub fn covariance(&self, tol: f64) -> Result<CovarianceMatrix, InputError> {
        Ok(CovarianceMatrix::from_matrix(Mat4::new(self.cov)?, tol)?)
    }

    /// The described state, or an error if the matrix is not a physical covariance matrix.
    pub fn state(&self, tol: f64) -> Result<GaussianState, InputError> {
        Ok(GaussianState::new(self.mean_or_zero(), self.covariance(tol)?, tol)?)
    }
}

/// Indented JSON in which arrays of scalars stay on one line. Ends with a newline.
pub fn to_pretty_json(value: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value, 0);
    out.push('\n');
    out
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, value: &Value, depth: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match value {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let parts: Vec<String> = items.iter().map(Value::to_string).collect();
            out.push_str(&format!("[{}]", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&format!("{}{}: ", pad(depth + 1), Value::String(key.clone())));
                write_value(out, item, depth + 1);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn round_trip_is_byte_exact() {
        for state in [states::vacuum(), states::two_mode_squeezed(0.7).unwrap(), states::random_separable(4, 3).unwrap()] {
            let text = StateFile::from_state(&state).to_json();
            let again = StateFile::parse(&text).unwrap().to_json();
            assert_eq!(text, again);
            assert_eq!(StateFile::parse(&text).unwrap().state(1e-9).unwrap(), state);
        }
    }

    #[test]
    fn mean_defaults_to_zero() {
        let text = r#"{"convention":{"hbar":1,"ordering":"q1 p1 q2 p2","vacuum_variance":0.5},
            "cov":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#;
        let file = StateFile::parse(text).unwrap();
        assert_eq!(file.mean, None);
        assert_eq!(file.state(1e-9).unwrap(), states::vacuum());
    }

    #[test]
    fn convention_is_enforced() {
        let missing = r#"{"cov":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#;
        assert!(matches!(StateFile::parse(missing), Err(InputError::Json(_))));
        let wrong = r#"{"convention":{"hbar":2,"ordering":"q1 p1 q2 p2","vacuum_variance":0.5},
            "cov":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#;
        assert!(matches!(StateFile::parse(wrong), Err(InputError::Convention(_))));
        let order = r#"{"convention":{"hbar":1,"ordering":"q1 q2 p1 p2","vacuum_variance":0.5},
            "cov":[[0.5,0,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#;
        assert!(matches!(StateFile::parse(order), Err(InputError::Convention(_))));
    }

    #[test]
    fn asymmetric_matrix_rejected() {
        let text = r#"{"convention":{"hbar":1,"ordering":"q1 p1 q2 p2","vacuum_variance":0.5},
            "cov":[[0.5,0.1,0,0],[0,0.5,0,0],[0,0,0.5,0],[0,0,0,0.5]]}"#;
        let file = StateFile::parse(text).unwrap();
        assert!(matches!(file.covariance(1e-9), Err(InputError::Matrix(_))));
    }
}
