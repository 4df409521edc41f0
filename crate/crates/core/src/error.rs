use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A mode specification violates its own invariants.
    #[error("invalid mode: {0}")]
    InvalidMode(String),

    /// A configuration field is out of range or unparseable.
    #[error("invalid value for `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("quadrature did not converge: |I_2n - I_n| = {difference:.3e} exceeds tolerance {tolerance:.3e}")]
    NonConvergence { difference: f64, tolerance: f64 },

    /// The integrand is still significant at the radial truncation.
    #[error(
        "integrand at r_max = {r_max} is {ratio:.3e} of its peak (limit 1e-12); enlarge r_max"
    )]
    Truncation { r_max: f64, ratio: f64 },

    #[error("special function overflow: {0}")]
    Overflow(String),

    #[error("degenerate mode: {0}")]
    DegenerateMode(String),

    #[error("OAM window too small: edge probability {edge_ratio:.3e} of the maximum exceeds 1e-6 at l_window = {l_window}")]
    WindowTooSmall { l_window: u32, edge_ratio: f64 },

    #[error("empty spectrum: no conserving (l_s, l_i) pair in the window")]
    EmptySpectrum,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization: {0}")]
    Serialize(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidMode(_) => 2,
            Error::WindowTooSmall { .. } => 4,
            Error::NonConvergence { .. }
            | Error::Truncation { .. }
            | Error::Overflow(_)
            | Error::DegenerateMode(_)
            | Error::EmptySpectrum => 3,
            Error::Io(_) | Error::Serialize(_) => 1,
        }
    }
}
