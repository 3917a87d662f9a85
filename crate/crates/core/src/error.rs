use std::fmt;

use serde::Serialize;

/// One violated axiom together with the ids that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: String,
    pub witness: Vec<String>,
}

impl Violation {
    pub fn new(axiom: &str, witness: Vec<String>) -> Self {
        Violation { axiom: axiom.to_string(), witness }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn ok() -> Self {
        ValidationReport { ok: true, violations: Vec::new() }
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
        self.ok = self.violations.is_empty();
    }

    pub fn has(&self, axiom: &str) -> bool {
        self.violations.iter().any(|v| v.axiom == axiom)
    }

    pub fn into_result(self) -> Result<()> {
        if self.ok {
            Ok(())
        } else {
            Err(Error::Validation(self))
        }
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in self.violations.iter().take(5) {
            write!(f, "; {} at ({})", v.axiom, v.witness.join(", "))?;
        }
        if self.violations.len() > 5 {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

/// An entry where the character route and the convolution route disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub row: String,
    pub col: String,
    pub fast: i64,
    pub oracle: i64,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Dangling or duplicate ids, unparsable descriptors.
    #[error("malformed input: {0}")]
    Structural(String),
    #[error("validation failed: {0}")]
    Validation(ValidationReport),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("fast path and oracle disagree on {} entr(y/ies)", .0.len())]
    RouteMismatch(Vec<Mismatch>),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
