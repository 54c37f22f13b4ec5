use thiserror::Error;

/// Harness failures, split by the exit code they map to.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad config file, flag value, or incompatible artifact. Exit code 1.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed or inconsistent input files. Exit code 1.
    #[error("input error: {0}")]
    Input(String),

    /// Failure while running. Exit code 2.
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Input(_) => 1,
            HarnessError::Runtime(_) => 2,
        }
    }
}

impl From<plasticwalk::Error> for HarnessError {
    fn from(e: plasticwalk::Error) -> Self {
        use plasticwalk::Error as E;
        match e {
            E::Config(m) => HarnessError::Config(m),
            E::Input(m) => HarnessError::Input(m),
            other => HarnessError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
