use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("hopping R={r:?} has no conjugate entry at -R")]
    MissingConjugate { r: Vec<i64> },

    #[error("hermiticity violation at R={r:?}: max |H(-R) - H(R)^dag| = {residual:.3e}")]
    NonHermitian { r: Vec<i64>, residual: f64 },

    #[error("gap closed at k={k:?}: smallest |eigenvalue| = {gap:.3e}")]
    GapClosed { k: Vec<f64>, gap: f64 },

    #[error("negative-eigenvalue count varies over the grid: {first} at k={first_k:?} vs {other} at k={k:?}")]
    InconsistentFilling {
        first: usize,
        first_k: Vec<f64>,
        other: usize,
        k: Vec<f64>,
    },

    #[error("matrix is not unitary: max |U^dag U - I| = {residual:.3e}")]
    NonUnitary { residual: f64 },

    #[error("U conj(U) is neither +I nor -I: best residual {residual:.3e}")]
    InvalidRepresentation { residual: f64 },

    #[error("classification conflict: {0}")]
    ClassificationConflict(String),

    #[error("chiral symmetry violated: residual {residual:.3e} >= tol {tol:.3e}")]
    ChiralViolation { residual: f64, tol: f64 },

    #[error("{kind} symmetry violated: residual {residual:.3e} >= tol {tol:.3e}")]
    SymmetryViolation {
        kind: &'static str,
        residual: f64,
        tol: f64,
    },

    #[error("chiral blocks have unequal dimensions: {plus} vs {minus}")]
    UnequalChiralBlocks { plus: usize, minus: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("matrix is not antisymmetric: max |A + A^T| = {residual:.3e}")]
    NotAntisymmetric { residual: f64 },

    #[error(
        "singular link overlap at grid site ({ix},{iy}): |det| = {modulus:.3e}; refine the grid"
    )]
    SingularLink { ix: usize, iy: usize, modulus: f64 },

    #[error(
        "phase step of {delta:.4} rad at segment {segment} reaches the branch cut; refine the grid"
    )]
    BranchTooCoarse { segment: usize, delta: f64 },

    #[error("Wilson spectrum of line {line} has no resolvable gap (largest gap {gap:.3e}); refine the grid")]
    DegenerateWilsonPhases { line: usize, gap: f64 },

    #[error("interpolation obstructed at k={k:?}, theta={theta:.6}: path gap {gap:.3e}")]
    Obstruction { k: Vec<f64>, theta: f64, gap: f64 },

    #[error("endpoint theta={endpoint} breaks the symmetry: residual {residual:.3e}")]
    EndpointAsymmetry { endpoint: f64, residual: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("linear algebra backend error: {0}")]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}
