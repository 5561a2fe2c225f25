//! JSON and CSV emission with 12-significant-digit numbers, and the
//! machine-readable error envelope.

use crate::num::g12;

/// A JSON scalar for hand-assembled output objects.
pub enum J {
    N(f64),
    U(u64),
    S(String),
    Raw(String),
}

impl J {
    fn render(&self) -> String {
        match self {
            J::N(x) => g12(*x),
            J::U(n) => n.to_string(),
            J::S(s) => serde_json::to_string(s).expect("string encodes"),
            J::Raw(r) => r.clone(),
        }
    }
}

pub fn obj(fields: &[(&str, J)]) -> String {
    let body: Vec<String> = fields
        .iter()
        .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).unwrap(), v.render()))
        .collect();
    format!("{{{}}}", body.join(","))
}

pub fn arr(items: Vec<String>) -> String {
    format!("[{}]", items.join(","))
}

pub fn null() -> J {
    J::Raw("null".into())
}

/// Error classes with their process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Numeric,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> CliError {
        CliError {
            kind: ErrorKind::Config,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Numeric => 3,
        }
    }

    pub fn to_json(&self) -> String {
        let kind = match self.kind {
            ErrorKind::Config => "config",
            ErrorKind::Numeric => "numeric",
        };
        obj(&[(
            "error",
            J::Raw(obj(&[
                ("kind", J::S(kind.into())),
                ("message", J::S(self.message.clone())),
            ])),
        )])
    }
}

impl From<String> for CliError {
    fn from(message: String) -> CliError {
        CliError::config(message)
    }
}

impl From<resist_core::Error> for CliError {
    fn from(err: resist_core::Error) -> CliError {
        use resist_core::Error::*;
        let kind = match err {
            OutsideDomain { .. } | InvalidCurvature(_) | NonPositiveWarp { .. }
            | InvalidWarpTable(_) | InvalidEndpoints(_) | InvalidParameter(_)
            | OutsideRange { .. } => ErrorKind::Config,
            AtBreakpoint(_) | RegularityViolation(_) | NotMonotone { .. }
            | NonUnitNormal(_) | InfeasibleBudget { .. } | NumericalFailure(_) => {
                ErrorKind::Numeric
            }
        };
        CliError {
            kind,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::config(format!("io error: {err}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_rendering() {
        let s = obj(&[
            ("value", J::N(0.5)),
            ("n", J::U(3)),
            ("tag", J::S("graph".into())),
            ("none", null()),
        ]);
        assert_eq!(
            s,
            r#"{"value":5.00000000000e-1,"n":3,"tag":"graph","none":null}"#
        );
        let parsed: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(parsed["value"], 0.5);
    }

    #[test]
    fn error_envelope() {
        let e = CliError {
            kind: ErrorKind::Numeric,
            message: "quadrature diverged".into(),
        };
        assert_eq!(e.exit_code(), 3);
        let parsed: serde_json::Value = serde_json::from_str(&e.to_json()).unwrap();
        assert_eq!(parsed["error"]["kind"], "numeric");
        assert_eq!(CliError::config("x").exit_code(), 2);
    }
}
