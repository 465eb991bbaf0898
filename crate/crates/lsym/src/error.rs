use thiserror::Error;

/// Errors raised across the library. The CLI maps each variant to an exit code
/// through [`Error::is_numerical`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unsupported group family: {0}")]
    UnsupportedFamily(String),
    #[error("matrix is not in the Lie algebra (residual {residual:e})")]
    NotInAlgebra { residual: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("torus is not maximal: centralizer in k has dimension {centralizer} > {torus}")]
    NotMaximalTorus { centralizer: usize, torus: usize },
    #[error("Weyl character limit did not stabilize at a singular point")]
    SingularPoint,
    #[error("integrand not declared K-invariant")]
    NotInvariant,
    #[error("root data do not share a maximal torus")]
    TorusMismatch,

    #[error("fundamental rank is {0}, expected 1")]
    DeltaNotOne(usize),
    #[error("unsupported delta-one factor: {0}")]
    UnsupportedDeltaOneFactor(String),
    #[error("element is not in the Cartan subgroup H: {0}")]
    NotInH(String),

    #[error("eigenvalue factor vanishes: {0}")]
    SingularEigenvalue(String),
    #[error("quadrature not converged: estimate {estimate:e} at order {order}")]
    QuadratureNotConverged { estimate: f64, order: usize },
    #[error("torus of the centralizer has dimension {0} > 4")]
    DimensionBudget(usize),
    #[error("torus element is not regular in M: {0}")]
    NotRegular(String),
    #[error("torus of the centralizer is not a Cartan subalgebra of k(γ)")]
    TorusNotCartan,
    #[error("weight extraction failed: {0}")]
    WeightExtraction(String),

    #[error("dataset has no counting constants")]
    MissingCountingConstants,
    #[error("r_j violates r_j = r_(2l-j) at j = {0}")]
    DualityViolation(usize),
    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),
}

impl Error {
    /// True for failures of numerical procedures rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularPoint
                | Error::SingularEigenvalue(_)
                | Error::QuadratureNotConverged { .. }
                | Error::WeightExtraction(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
