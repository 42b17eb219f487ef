use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::parse::{ExprError, LowerError};
use crate::reduction::ReductionError;
use crate::spectral::SpectralError;
use crate::symmetry::SymmetryError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ErrorKind {
    Usage,
    Parse,
    Model,
    Numerical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    /// Variant name of the underlying error.
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        let code = match kind {
            ErrorKind::Usage => "Usage",
            ErrorKind::Parse => "Parse",
            ErrorKind::Model => "Model",
            ErrorKind::Numerical => "Numerical",
        };
        CliError { kind, code: code.into(), message: message.into() }
    }

    fn from_error<E: std::fmt::Debug + std::fmt::Display>(kind: ErrorKind, e: &E) -> Self {
        CliError { kind, code: variant_name(e), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage | ErrorKind::Parse => 2,
            ErrorKind::Model => 3,
            ErrorKind::Numerical => 4,
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind,
                "code": self.code,
                "message": self.message,
                "exitCode": self.exit_code(),
            }
        })
        .to_string()
    }
}

/// Outermost variant name from the `Debug` form, looking through
/// transparent wrappers such as `Algebra(..)`.
fn variant_name<E: std::fmt::Debug>(e: &E) -> String {
    let debug = format!("{e:?}");
    let mut name: &str = &debug;
    loop {
        let end = name.find(|c: char| !c.is_alphanumeric() && c != '_').unwrap_or(name.len());
        let head = &name[..end];
        let rest = &name[end..];
        if matches!(head, "Algebra" | "Parse" | "Lower") && rest.starts_with('(') {
            name = &rest[1..];
            continue;
        }
        return head.to_string();
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        let kind = match &e {
            ExprError::Lower(LowerError::Algebra(_)) => ErrorKind::Model,
            _ => ErrorKind::Parse,
        };
        CliError::from_error(kind, &e)
    }
}

impl From<SymmetryError> for CliError {
    fn from(e: SymmetryError) -> Self {
        CliError::from_error(ErrorKind::Model, &e)
    }
}

impl From<ReductionError> for CliError {
    fn from(e: ReductionError) -> Self {
        CliError::from_error(ErrorKind::Model, &e)
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        let kind = if e.is_model_error() { ErrorKind::Model } else { ErrorKind::Numerical };
        CliError::from_error(kind, &e)
    }
}

/// Machine-readable output of one command.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    /// SHA-256 over the subcommand name and every input (file contents and
    /// expression text), each followed by a NUL byte.
    pub input_hash: String,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs: &[&[u8]], result: Value) -> Self {
        let mut hasher = Sha256::new();
        for part in inputs {
            hasher.update(part);
            hasher.update([0u8]);
        }
        RunReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_hash: hex::encode(hasher.finalize()),
            result,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report values are finite JSON");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::new(ErrorKind::Usage, "x").exit_code(), 2);
        assert_eq!(CliError::from(SpectralError::InvalidModel("m".into())).exit_code(), 3);
        assert_eq!(CliError::from(SpectralError::FitDegenerate("f".into())).exit_code(), 4);
        assert_eq!(CliError::from(ReductionError::CMPositionDependence).exit_code(), 3);
    }

    #[test]
    fn variant_names_look_through_wrappers() {
        let e = CliError::from(ReductionError::CMPositionDependence);
        assert_eq!(e.code, "CMPositionDependence");
        let e = CliError::from(SymmetryError::NoRotations(1));
        assert_eq!(e.code, "NoRotations");
    }

    #[test]
    fn hash_is_stable() {
        let a = RunReport::new(vec![], &[b"x", b"y"], Value::Null);
        let b = RunReport::new(vec!["other".into()], &[b"x", b"y"], Value::Null);
        let c = RunReport::new(vec![], &[b"xy"], Value::Null);
        assert_eq!(a.input_hash, b.input_hash);
        assert_ne!(a.input_hash, c.input_hash);
    }
}
