use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A special function or scattering matrix was evaluated at a pole.
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("term budget exceeded: {needed} terms required, {limit} allowed")]
    Budget { needed: usize, limit: usize },

    #[error("integral diverges: {0}")]
    Divergence(String),

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("no scattering geodesic: {0}")]
    NoScatteringGeodesic(String),

    #[error("geometry: {0}")]
    Geometry(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error objects.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "pole",
            Error::Budget { .. } => "budget",
            Error::Divergence(_) => "divergence",
            Error::Domain(_) => "domain",
            Error::NoScatteringGeodesic(_) => "no_scattering_geodesic",
            Error::Geometry(_) => "geometry",
        }
    }

    /// Numeric failures (as opposed to precondition violations).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::Budget { .. })
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
