use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("element is not hyperbolic (|trace| = {abs_trace} <= 2)")]
    NotHyperbolic { abs_trace: f64 },

    #[error("enumeration frontier exceeded the node budget ({nodes} > {budget}); lower L or raise the budget")]
    BudgetExceeded { nodes: usize, budget: usize },

    #[error("ill-conditioned rank decision: {0}")]
    IllConditioned(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("chain condition d1*d0 = 0 violated (residual {residual:e} > {bound:e})")]
    ChainConditionViolated { residual: f64, bound: f64 },

    #[error("s = {s_re}{s_im:+}i lies outside the convergence region (abscissa estimate {abscissa}, margin {margin} < required {required})")]
    OutsideConvergence { s_re: f64, s_im: f64, abscissa: f64, margin: f64, required: f64 },

    #[error("prediction not applicable: {0}")]
    NotApplicable(String),

    #[error("representation is not acyclic: det(Id - rho(c)) = 0")]
    NotAcyclic,

    #[error("relator check failed: {0}")]
    RelatorViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
