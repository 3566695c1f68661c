use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every stage of the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("coefficients are not Hermitian-symmetric (defect {defect:.3e})")]
    SymmetryViolation { defect: f64 },
    #[error("multiplier is not finite at k = {k:?}")]
    MultiplierDomain { k: [i32; 3] },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("resolution N = {n} is too large for the convolution oracle (limit {limit})")]
    ResolutionTooLarge { n: usize, limit: usize },
    #[error("annulus C_{k} has no lattice points on this box; it needs L > {required_period:.6}")]
    EmptyAnnulus { k: u32, required_period: f64 },
    #[error("only {usable} usable shells above the noise floor (need at least {needed})")]
    InsufficientDecayRange { usable: usize, needed: usize },
    #[error("ratio undefined: {0}")]
    UndefinedRatio(String),
    #[error("fixed-point iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize, history: Vec<f64> },
    #[error("Picard iterate {iteration} left the ball: norm {norm:.6e} > {bound:.6e}")]
    ContractionFailure { iteration: usize, norm: f64, bound: f64 },
    #[error("data has infinite Gevrey norm at radius {r}")]
    DataNotGevrey { r: f64 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("malformed field container: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
