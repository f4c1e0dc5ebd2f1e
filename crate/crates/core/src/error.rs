use thiserror::Error;

/// Errors produced by the solver and its drivers.
#[derive(Debug, Error)]
pub enum LwfrError {
    #[error("configuration error: {0}")]
    Config(String),

    /// Validation failures collected from a config file, one entry per problem.
    #[error("configuration errors:\n{}", format_lines(.0))]
    ConfigLines(Vec<ConfigIssue>),

    #[error("geometry error in element {element}: {message}")]
    Geometry { element: usize, message: String },

    #[error("non-physical state in element {element}, node {node}: {message}")]
    State {
        element: usize,
        node: usize,
        message: String,
    },

    #[error("step size control failed: {0}")]
    StepControl(String),

    /// A run stopped early; `time` is the last time with a valid solution.
    #[error("run aborted after t = {time}: {source}")]
    Aborted {
        time: f64,
        #[source]
        source: Box<LwfrError>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A single problem found while parsing or validating a config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigIssue {
    /// 1-based line number, or 0 when the problem is not tied to a line.
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

fn format_lines(issues: &[ConfigIssue]) -> String {
    issues
        .iter()
        .map(|i| format!("  {i}"))
        .collect::<Vec<_>>()
        .join("\n")
}

impl LwfrError {
    pub fn is_config(&self) -> bool {
        matches!(self, LwfrError::Config(_) | LwfrError::ConfigLines(_))
    }
}

pub type Result<T> = std::result::Result<T, LwfrError>;
