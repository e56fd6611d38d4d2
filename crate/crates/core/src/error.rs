use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input violates an invariant of the type that owns it.
    #[error("invalid {field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("unknown ion species `{0}`")]
    UnknownSpecies(String),

    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),

    #[error("unknown field `{0}`")]
    UnknownField(String),

    /// The requested scattering infidelity is at or below the heating floor `eta * P0`.
    #[error("scattering target {target:e} unreachable; minimum achievable is {minimum:e}")]
    InfeasibleScattering { target: f64, minimum: f64 },

    #[error("insufficient p-bits for one block: need {required}, have {available}")]
    InsufficientPbits { required: u64, available: u64 },

    #[error("bound not binding in range [{lo:e}, {hi:e}] m")]
    BoundNotBinding { lo: f64, hi: f64 },

    #[error("{0} outside rule-of-thumb validity (must be < 0.003)")]
    OutsideRuleOfThumb(f64),

    #[error("parse error{}: {message}", location.as_ref().map(|l| format!(" at {l}")).unwrap_or_default())]
    Parse {
        location: Option<String>,
        message: String,
    },

    #[error("unknown format `{0}`")]
    UnknownFormat(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors that mean "the design is well-formed but cannot be realised".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleScattering { .. } | Error::BoundNotBinding { .. }
        )
    }
}

pub(crate) fn ensure(cond: bool, field: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(field, reason))
    }
}
