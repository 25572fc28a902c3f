use thiserror::Error;

/// Errors produced by the sampling, counting and diagnostic routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The winding count of the phase disagrees with the expected number of
    /// roots. This indicates a bug upstream, not bad luck.
    #[error("root bracketing found {found} solutions, expected {expected}")]
    BracketFailure { expected: usize, found: usize },

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("phase trajectory was computed without history")]
    HistoryMissing,

    #[error("adaptive quadrature did not converge (estimate {estimate:e}, error {error:e})")]
    QuadratureNonconvergence { estimate: f64, error: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value,
            expected,
        })
    }
}
