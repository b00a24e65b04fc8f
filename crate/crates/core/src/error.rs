use num_complex::Complex64;
use thiserror::Error;

/// Failures raised by the algebra, the domain model and the solvers.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("root finder did not converge after {iterations} iterations (worst backward error {backward_error:e})")]
    RootsNotConverged {
        iterations: usize,
        backward_error: f64,
        best: Vec<Complex64>,
    },
    #[error("zero divisor")]
    ZeroDivisor,
    #[error("ambiguous pole cluster near {0}")]
    AmbiguousPoleCluster(Complex64),
    #[error("boundary pole at {0} (|w| = {abs})", abs = .0.norm())]
    BoundaryPole(Complex64),
    #[error("multivalued antiderivative: residue {residue} at interior pole {pole}")]
    MultivaluedAntiderivative { pole: Complex64, residue: Complex64 },
    #[error("path hits pole at {0}")]
    PathHitsPole(Complex64),
    #[error("evaluation at pole {0}")]
    EvaluationAtPole(Complex64),

    #[error("map not analytic on closure: pole at {0}")]
    MapNotAnalytic(Complex64),
    #[error("critical point (cusp risk): f' vanishes at {0}")]
    CriticalPoint(Complex64),
    #[error("not univalent: {0}")]
    NotUnivalent(String),
    #[error("invalid double witness: max |q^2 - f'| coefficient mismatch {0:e}")]
    InvalidDoubleWitness(f64),
    #[error("constant map does not define a domain")]
    ConstantMap,
    #[error("point not in domain: {0}")]
    PointNotInDomain(Complex64),

    #[error("order cap exceeded: requested order {requested}, cap {cap}")]
    OrderCapExceeded { requested: usize, cap: usize },
    #[error("parameter {0} is not strictly inside the unit disc")]
    ParameterOutsideDisc(Complex64),

    #[error("singular boundary data: pole at w = {0}")]
    SingularBoundaryData(Complex64),
    #[error("decomposition failed: boundary residual {residual:e} exceeds {tol:e}")]
    DecompositionFailed { residual: f64, tol: f64 },
    #[error("not a double quadrature domain (no witness q)")]
    NotDoubleQuadrature,

    #[error("solver residual {residual:e} exceeds {tol:e}")]
    SolverResidual { residual: f64, tol: f64 },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("incompatible data (nonzero mean): mean {0}")]
    IncompatibleData(Complex64),
    #[error("split failed: boundary residual {residual:e} exceeds {tol:e}")]
    SplitFailed { residual: f64, tol: f64 },
    #[error("not in D-to-N range as represented: {0}")]
    NotInDtnRange(String),
    #[error("not a derivative of a meromorphic extension element: residue {residue} at {pole}")]
    NotADerivative { pole: Complex64, residue: Complex64 },

    #[error("parse error in `{field}`{}: {message}", index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    Parse {
        field: String,
        index: Option<usize>,
        message: String,
    },
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(field: impl Into<String>, index: Option<usize>, message: impl Into<String>) -> Self {
        Error::Parse {
            field: field.into(),
            index,
            message: message.into(),
        }
    }
}
