use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parameter outside the supported range: {0}")]
    UnsupportedRange(String),

    /// The annihilation operator sent the state to (numerically) zero.
    #[error("photon subtraction annihilates the state (squared norm {0:.3e})")]
    DegenerateSubtraction(f64),

    #[error("superposition cancels to a vanishing vector (norm {0:.3e})")]
    DegenerateSuperposition(f64),

    #[error("grid captures only {captured:.9} of the probability mass")]
    GridCoverage { captured: f64 },

    #[error("distributions are not sampled on the same support")]
    GridMismatch,

    #[error("zero resolution on a discrete spectrum: use the probability mass function directly")]
    UsePmfDirectly,

    #[error("fluctuation photon number is only defined for pure states")]
    UnsupportedMixedState,

    #[error("unknown figure identifier `{0}`")]
    InvalidFigure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),

    /// A computation failed at a specific point of a sweep or figure.
    #[error("{family} at parameter {parameter}: {source}")]
    AtPoint {
        family: String,
        parameter: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Stable kebab-case identifier, used in machine-parsable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::UnsupportedRange(_) => "unsupported-range",
            Error::DegenerateSubtraction(_) => "degenerate-subtraction",
            Error::DegenerateSuperposition(_) => "degenerate-superposition",
            Error::GridCoverage { .. } => "grid-coverage-error",
            Error::GridMismatch => "grid-mismatch",
            Error::UsePmfDirectly => "use-pmf-directly",
            Error::UnsupportedMixedState => "unsupported-mixed-state",
            Error::InvalidFigure(_) => "invalid-id",
            Error::Config(_) => "config-error",
            Error::Io(_) => "io-error",
            Error::AtPoint { source, .. } => source.kind(),
        }
    }

    pub(crate) fn at_point(self, family: &str, parameter: f64) -> Error {
        match self {
            e @ Error::AtPoint { .. } => e,
            e => Error::AtPoint {
                family: family.to_string(),
                parameter,
                source: Box::new(e),
            },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
