use thiserror::Error;

/// Errors produced by the constellation model, analysis and design routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {name} = {value} must be strictly positive")]
    NonPositiveProbability { name: &'static str, value: f64 },

    #[error("joint probabilities sum to {sum}, expected 1 within {tolerance:e}")]
    SumOutOfTolerance { sum: f64, tolerance: f64 },

    #[error("marginals ({p1}, {p2}) with correlation {gamma_m} give a non-positive joint probability")]
    InfeasibleCorrelation { p1: f64, p2: f64, gamma_m: f64 },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("sender {sender} has coinciding signal points")]
    DegenerateConstellation { sender: u8 },

    #[error("combined constellation is not collinear")]
    NotCollinear,

    #[error("combined constellation is collinear; use the interval path")]
    CollinearInput,

    #[error("combined constellation is not bijective")]
    NonBijective,

    #[error("correlation {rho} is too close to +/-1 for the bivariate normal integral")]
    CorrelationAtUnity { rho: f64 },

    #[error("distances d1 = {d1}, d2 = {d2} do not belong to table case {case}")]
    CaseMismatch { case: &'static str, d1: f64, d2: f64 },

    #[error("waveform correlation {gamma_phi} is not supported by this designer ({expected})")]
    WrongGammaPhi { gamma_phi: f64, expected: &'static str },

    #[error("energy equation has no real root for separation {d2}")]
    InfeasibleRoot { d2: f64 },

    #[error("sweep needs at least one configuration")]
    EmptySweep,

    #[error("unknown SNR convention `{0}`")]
    UnknownConvention(String),

    #[error("{}", format_config_error(.line, .field, .message))]
    Config {
        line: Option<usize>,
        field: String,
        message: String,
    },

    #[error("i/o: {0}")]
    Io(String),
}

fn format_config_error(line: &Option<usize>, field: &str, message: &str) -> String {
    match line {
        Some(line) => format!("config error at line {line}, field `{field}`: {message}"),
        None => format!("config error in field `{field}`: {message}"),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl Error {
    pub(crate) fn config(line: Option<usize>, field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            line,
            field: field.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by user input rather than by the numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::UnknownConvention(_)
                | Error::NonPositiveProbability { .. }
                | Error::SumOutOfTolerance { .. }
                | Error::InfeasibleCorrelation { .. }
                | Error::InvalidParameter { .. }
                | Error::WrongGammaPhi { .. }
                | Error::EmptySweep
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
