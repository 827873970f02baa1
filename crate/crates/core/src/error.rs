use thiserror::Error;

/// Errors raised by the physics, solver and sweep layers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// An argument is outside the domain where the model is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown material `{name}` (available: {available})")]
    UnknownMaterial { name: String, available: String },

    /// Adaptive quadrature did not reach the requested tolerance.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {intervals} intervals")]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    /// No heat-balance root could be bracketed.
    #[error("no equilibrium root: {0}")]
    NoRoot(String),

    /// An iterative solver hit its iteration cap.
    #[error("no convergence after {iterations} iterations (last residuals: {history:?})")]
    NonConvergence { iterations: usize, history: Vec<f64> },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("config error: {0}")]
    Config(String),

    /// Wraps an error raised while solving stage `index` of a cascade.
    #[error("stage {index}: {source}")]
    Stage {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of a numerical method, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Quadrature { .. } | Error::NoRoot(_) | Error::NonConvergence { .. } => true,
            Error::Fit(_) => true,
            Error::Stage { source, .. } => source.is_numeric(),
            _ => false,
        }
    }

    /// Short machine-readable tag used in CSV status columns.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::UnknownMaterial { .. } => "unknown_material",
            Error::Quadrature { .. } => "quadrature",
            Error::NoRoot(_) => "no_root",
            Error::NonConvergence { .. } => "non_convergence",
            Error::Fit(_) => "fit",
            Error::Config(_) => "config",
            Error::Stage { source, .. } => source.tag(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
