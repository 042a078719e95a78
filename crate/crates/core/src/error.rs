use thiserror::Error;

/// Everything that can go wrong in this crate.
///
/// Variants carry enough context to print a single-line diagnostic; the CLI
/// relies on `Display` being one line.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("map is parabolic or the identity (trace {trace_re}{trace_im:+}i)")]
    ParabolicOrIdentity { trace_re: f64, trace_im: f64 },
    #[error("map is elliptic (zero translation length)")]
    Elliptic,
    #[error("geodesics share an endpoint")]
    SharedEndpoint,
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error("polyline segment {index} has coincident endpoints")]
    DegenerateSegment { index: usize },
    #[error("generator A is not loxodromic (trace {trace})")]
    NonLoxodromicA { trace: String },
    #[error("trace triple violates the Markov relation (residual {residual:.3e})")]
    InconsistentTriple { residual: f64 },
    #[error("generator trace {trace} is parabolic")]
    ParabolicGenerator { trace: String },
    #[error("infeasible bending angles ({theta_alpha}, {theta_beta})")]
    InfeasibleAngles { theta_alpha: f64, theta_beta: f64 },
    #[error("infeasible lengths: cosh/tanh product {product} outside (0, 1)")]
    InfeasibleLengths { product: f64 },
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("element is not loxodromic")]
    NonLoxodromic,
    #[error("neither bend sign unbends the group (imaginary residuals {minus:.3e}, {plus:.3e})")]
    SignConventionFailure { minus: f64, plus: f64 },
    #[error("finite-difference step {h} is too small")]
    StepTooSmall { h: f64 },
    #[error("invalid weights ({a}, {b})")]
    InvalidWeights { a: f64, b: f64 },
    #[error("could not bracket the minimum after {iterations} expansions")]
    NoBracket { iterations: usize },
    #[error("point ({x}, {y}) is not in the Fuchsian region")]
    InfeasiblePoint { x: f64, y: f64 },
    #[error("need at least 5 points for a slope fit, got {0}")]
    InsufficientPoints(usize),
    #[error("slope fit data must be positive (index {0})")]
    NonPositiveData(usize),
    #[error("no limit points land in the image window")]
    EmptyWindow,
    #[error("invalid image spec: {0}")]
    InvalidImageSpec(&'static str),
    #[error("sweep failed at theta = {theta}: {source}")]
    Sweep {
        theta: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("invariant violated: {0}")]
    InvariantViolated(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Variant name, for machine-readable diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParabolicOrIdentity { .. } => "ParabolicOrIdentity",
            Error::Elliptic => "Elliptic",
            Error::SharedEndpoint => "SharedEndpoint",
            Error::Degenerate { .. } => "Degenerate",
            Error::DegenerateSegment { .. } => "DegenerateSegment",
            Error::NonLoxodromicA { .. } => "NonLoxodromicA",
            Error::InconsistentTriple { .. } => "InconsistentTriple",
            Error::ParabolicGenerator { .. } => "ParabolicGenerator",
            Error::InfeasibleAngles { .. } => "InfeasibleAngles",
            Error::InfeasibleLengths { .. } => "InfeasibleLengths",
            Error::InconsistentInputs { .. } => "InconsistentInputs",
            Error::NonLoxodromic => "NonLoxodromic",
            Error::SignConventionFailure { .. } => "SignConventionFailure",
            Error::StepTooSmall { .. } => "StepTooSmall",
            Error::InvalidWeights { .. } => "InvalidWeights",
            Error::NoBracket { .. } => "NoBracket",
            Error::InfeasiblePoint { .. } => "InfeasiblePoint",
            Error::InsufficientPoints { .. } => "InsufficientPoints",
            Error::NonPositiveData { .. } => "NonPositiveData",
            Error::EmptyWindow => "EmptyWindow",
            Error::InvalidImageSpec { .. } => "InvalidImageSpec",
            Error::Sweep { .. } => "Sweep",
            Error::InvariantViolated { .. } => "InvariantViolated",
            Error::Io { .. } => "Io",
        }
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

pub type Result<T> = std::result::Result<T, Error>;
