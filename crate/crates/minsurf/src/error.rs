use num_complex::Complex64;
use thiserror::Error;

/// Byte range of a node in the source expression text.
pub type Span = (usize, usize);

/// What went wrong while evaluating an expression node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalFailure {
    DivisionByZero,
    NonFinite,
    /// Graph mode expects real values; the expression produced a complex one.
    NonReal,
    UnboundVariable,
}

impl std::fmt::Display for EvalFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EvalFailure::DivisionByZero => write!(f, "division by zero"),
            EvalFailure::NonFinite => write!(f, "non-finite result"),
            EvalFailure::NonReal => write!(f, "non-real value in graph mode"),
            EvalFailure::UnboundVariable => write!(f, "variable not bound at evaluation"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("arity mismatch for `{func}` at byte {offset}: {msg}")]
    ArityMismatch {
        func: String,
        offset: usize,
        msg: String,
    },

    #[error("evaluation failure ({kind}) in `{node}`{}", span_note(.span))]
    Eval {
        kind: EvalFailure,
        node: String,
        span: Option<Span>,
    },

    #[error(
        "contour integration did not converge: error estimate {achieved:.3e} \
         exceeds tolerance {tol:.3e} after {evals} evaluations"
    )]
    QuadratureBudget {
        achieved: f64,
        tol: f64,
        evals: usize,
    },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("parameter {0} lies outside the declared domain")]
    OutOfDomain(Complex64),

    #[error("curvature singular: R vanishes at w = {0}")]
    CurvatureSingular(Complex64),

    #[error("sample carries no derivative fields")]
    MissingDerivatives,

    #[error("hodograph degenerate at {at}: umbilic indicator {indicator:.3e}")]
    Degenerate { at: Complex64, indicator: f64 },

    #[error("transformation singular: |zeta| = 1 at {0}")]
    UnitCircle(Complex64),

    #[error("inverse mismatch: |F(Finv(rho)) - rho| = {gap:.3e} at rho = {at}")]
    InverseMismatch { at: Complex64, gap: f64 },

    #[error("degenerate metric (EG - F^2 vanishes) at {0}")]
    DegenerateMetric(Complex64),

    #[error("degenerate or collinear stencil near {0}")]
    DegenerateStencil(Complex64),

    #[error("insufficient neighbors for the stencil: need {need}, have {have}")]
    InsufficientNeighbors { need: usize, have: usize },

    #[error("root search did not converge near {0}")]
    RootSearch(Complex64),

    #[error("unknown surface `{name}`; available: {available}")]
    UnknownSurface { name: String, available: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

fn span_note(span: &Option<Span>) -> String {
    match span {
        Some((a, b)) => format!(" at bytes {a}..{b}"),
        None => String::new(),
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 usage/config, 3 numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownIdentifier { .. }
            | Error::ArityMismatch { .. }
            | Error::UnknownSurface { .. }
            | Error::Config(_)
            | Error::InvalidData(_)
            | Error::Io(_) => 2,
            _ => 3,
        }
    }
}
