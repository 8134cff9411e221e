use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid value {value} for `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("linear system is singular at omega = {omega} (condition estimate {condition:e})")]
    Singular { omega: f64, condition: f64 },

    #[error("non-finite value in {context} at omega = {omega}")]
    NonFinite { context: &'static str, omega: f64 },

    #[error("frequency grids do not line up: {0}")]
    GridMismatch(&'static str),

    #[error("expected a 4x4 matrix, got {rows} rows with {cols} columns")]
    Dimension { rows: usize, cols: usize },

    #[error("objective is not finite at {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    #[error("time integration gained norm: {excess:e} above the injected photon norm")]
    NormGrowth { excess: f64 },
}

impl Error {
    pub fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
