use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid config: {}", .0.join("; "))]
    Config(Vec<String>),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("solver failed in {context}: {source}")]
    Solver {
        context: String,
        #[source]
        source: cnd_core::Error,
    },
    #[error("bad input data: {0}")]
    Data(String),
}

impl CliError {
    /// Machine-readable category printed with every failure.
    pub fn category(&self) -> &'static str {
        match self {
            Self::Config(_) => "config",
            Self::Io { .. } => "io",
            Self::Solver { .. } => "solver",
            Self::Data(_) => "data",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 3,
            Self::Io { .. } => 4,
            Self::Solver { .. } => 5,
            Self::Data(_) => 6,
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io {
            context: context.into(),
            source,
        }
    }

    pub fn solver(context: impl Into<String>, source: cnd_core::Error) -> Self {
        Self::Solver {
            context: context.into(),
            source,
        }
    }
}
