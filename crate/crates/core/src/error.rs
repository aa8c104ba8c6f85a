use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the operation.
    #[error("{what} = {value} is outside the domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("enumeration needs {needed} pair visits, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("set file line {line}: {message}")]
    SetFormat { line: usize, message: String },

    #[error("set is empty")]
    EmptySet,

    #[error("sphere radii out of order: i = {i} > j = {j}")]
    RadiiOrder { i: usize, j: usize },

    /// The hypercontractivity ODE left the domain of C.
    #[error("C argument {argument} exceeds ln 2 at t = {t}")]
    CDomain { argument: f64, t: f64 },

    /// Shooting found no root in its bracket; `t` is past the practical validity range.
    #[error("no shooting root for t = {t} (alpha = {alpha}, q0 = {q0})")]
    ShootingOutOfRange { alpha: f64, q0: f64, t: f64 },

    #[error("unknown {kind} `{name}`")]
    UnknownName { kind: &'static str, name: String },

    #[error("cannot parse `{input}` as {what}")]
    Parse { what: &'static str, input: String },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("at grid point {point}: {source}")]
    AtGridPoint {
        point: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            what,
            value,
            domain,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
