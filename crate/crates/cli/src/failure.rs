use std::fmt;

/// A failed run: one machine-parsable line on stderr plus an exit status.
#[derive(Debug, thiserror::Error)]
pub struct Failure {
    pub kind: &'static str,
    pub field: String,
    pub reason: String,
    pub code: i32,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let reason = self.reason.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error: kind={} field={} reason={}", self.kind, self.field, reason)
    }
}

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BLOW_UP: i32 = 3;
pub const EXIT_IO: i32 = 1;

impl Failure {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Failure { kind: "config", field: field.into(), reason: reason.into(), code: EXIT_VALIDATION }
    }

    pub fn missing(field: &str, subcommand: &str) -> Self {
        Failure::config(field, format!("required by {subcommand}"))
    }

    pub fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Failure { kind: "io", field: path.display().to_string(), reason: e.to_string(), code: EXIT_IO }
    }

    /// Maps a serde_json error, pulling the offending field out of messages
    /// such as ``missing field `p` ``.
    pub fn json(e: &serde_json::Error) -> Self {
        let msg = e.to_string();
        let field = msg.split('`').nth(1).unwrap_or("-").to_string();
        Failure::config(field, msg)
    }
}

/// First token of a constraint that looks like a parameter name.
fn constraint_field(constraint: &str) -> String {
    constraint
        .split(|c: char| c.is_whitespace() || c == ',' || c == '(')
        .find(|t| t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()))
        .map(|t| t.trim_end_matches(|c: char| !c.is_ascii_alphanumeric() && c != '_').to_string())
        .unwrap_or_else(|| "-".into())
}

impl From<smrlab::Error> for Failure {
    fn from(e: smrlab::Error) -> Self {
        use smrlab::Error as E;
        let reason = e.to_string();
        match e {
            E::ParameterRange { constraint } => Failure {
                kind: "parameter_range",
                field: constraint_field(&constraint),
                reason,
                code: EXIT_VALIDATION,
            },
            E::ShapeMismatch { .. } => Failure { kind: "shape", field: "-".into(), reason, code: EXIT_VALIDATION },
            E::LatticeMismatch(_) => Failure { kind: "lattice", field: "-".into(), reason, code: EXIT_VALIDATION },
            E::InvalidInput(_) => Failure { kind: "invalid_input", field: "-".into(), reason, code: EXIT_VALIDATION },
            E::BlowUp { seed, .. } => Failure {
                kind: "blow_up",
                field: seed.map(|s| format!("seed={s}")).unwrap_or_else(|| "-".into()),
                reason,
                code: EXIT_BLOW_UP,
            },
        }
    }
}
