use std::fmt;

/// Failure classes mapped onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config, input files or parameters: exit 2.
    User(String),
    /// A numerical tolerance or consistency check failed: exit 3.
    Tolerance(String),
}

impl CliError {
    pub fn user(msg: impl Into<String>) -> Self {
        Self::User(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::User(_) => 2,
            Self::Tolerance(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::User(m) => write!(f, "error: {m}"),
            Self::Tolerance(m) => write!(f, "tolerance failure: {m}"),
        }
    }
}

impl From<qellip::Error> for CliError {
    fn from(e: qellip::Error) -> Self {
        use qellip::Error as E;
        match e {
            E::InvalidParameter(_)
            | E::Parse { .. }
            | E::NumericalDomain(_)
            | E::DegenerateFit(_)
            | E::TruncationTooSmall(_) => Self::User(e.to_string()),
            _ => Self::Tolerance(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::User(format!("i/o: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
