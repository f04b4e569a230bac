use thiserror::Error;

/// Errors raised by kernel evaluation, source construction and field evaluators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coincident points: separation {separation:e} is below the floor {floor:e}")]
    CoincidentPoints { separation: f64, floor: f64 },

    #[error("evaluation point lies on the source support (distance {distance:e})")]
    OnSupport { distance: f64 },

    #[error("parameter {value} is outside the chart domain [{min}, {max}]")]
    OutOfDomain { value: f64, min: f64, max: f64 },

    #[error("point with z = {z} lies outside the slab 0 < z < {thickness}")]
    OutOfSlab { z: f64, thickness: f64 },

    #[error("degenerate foliation: {0}")]
    DegenerateFoliation(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} did not converge after {iterations} iterations (last error estimate {estimate:e})")]
    NonConvergence {
        what: &'static str,
        iterations: usize,
        estimate: f64,
    },

    #[error("trajectory speed {speed:e} m/s is not below the wave speed {c:e} m/s")]
    Superluminal { speed: f64, c: f64 },

    #[error("non-finite value encountered while evaluating {0}")]
    NonFinite(&'static str),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
