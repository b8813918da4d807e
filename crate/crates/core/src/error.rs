use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite sample at contour node {node} (mu = {mu})")]
    NonFiniteSample { node: usize, mu: Complex64 },

    #[error("singular pencil: determinant vanishes identically")]
    SingularPencil,

    #[error("mu = {mu} is within {distance:.3e} of spectral point {point}")]
    NearSingular {
        mu: Complex64,
        point: Complex64,
        distance: f64,
    },

    #[error("contour around {center} (radius {radius:.3e}) passes within the guard of spectral point {point}")]
    ContourTooClose {
        center: Complex64,
        radius: f64,
        point: Complex64,
    },

    #[error("requested pole order {requested} exceeds detected order {detected}")]
    PoleOrderExceeded { requested: usize, detected: usize },

    #[error("{mu} is a spectral point")]
    SpectralBasePoint { mu: Complex64 },

    #[error("zero {zero} of det D(z) lies within the guard of the circle |z| = {radius}")]
    BoundaryZero { zero: Complex64, radius: f64 },

    #[error("operator is not Fredholm at weight {delta}: det D(z) vanishes near {zero} on |z| = e^delta")]
    NotFredholm { delta: f64, zero: Complex64 },

    #[error("argument principle failed on |z - {center}| = {radius}: {reason}")]
    Winding {
        center: Complex64,
        radius: f64,
        reason: String,
    },

    #[error("truncation kernels did not stabilize up to N = {n_max}; increase N")]
    Unstabilized { n_max: usize },

    #[error("unresolvable zero collision for t in [{t_lo}, {t_hi}]")]
    Collision { t_lo: f64, t_hi: f64 },

    #[error("number of finite zeros changes along the path near t = {t}")]
    ZeroCountChanged { t: f64 },

    #[error("tangential crossing at t = {t} (d ln|z|/dt = {rate:.3e})")]
    TangentialCrossing { t: f64, rate: f64 },

    #[error("crossing at t = {t}, z = {z} has local multiplicity {d} > 1")]
    DegenerateCrossing { t: f64, z: Complex64, d: usize },

    #[error("multiplicities {0:?} are not pairwise coprime")]
    NotCoprime(Vec<u64>),

    #[error("unsupported Seifert data {0:?}: fewer than three nontrivial fibers")]
    UnsupportedSeifert(Vec<u64>),

    #[error("Seifert normalization failed: {0}")]
    Normalization(String),

    #[error("internal consistency: {0}")]
    Consistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
