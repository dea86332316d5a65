use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor argument failed validation.
    #[error("invalid parameter `{name}`: {message}")]
    Parameter { name: &'static str, message: String },

    /// A surface profile failed an invariant check after ODE integration.
    #[error("surface construction failed: invariant `{invariant}` violated at r = {location}: {detail}")]
    Construction {
        invariant: &'static str,
        location: f64,
        detail: String,
    },

    /// An evaluation was requested outside the valid domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The data is too degenerate for the numerical method.
    #[error("numerical degeneracy: {0}")]
    Degeneracy(String),

    /// A geodesic left the tabulated annulus.
    #[error("trajectory left the tabulated annulus at arclength {exit_arclength}")]
    Range { exit_arclength: f64 },

    /// Internal solver failure that valid inputs should never trigger.
    #[error("internal search failure: {0}")]
    Search(String),

    /// An experiment produced no usable data.
    #[error("experiment inconclusive: {0}")]
    Inconclusive(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parameter(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}
