use crate::state::Dims;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("shape error in {op}: expected {expected:?}, found {found:?}")]
    Shape {
        op: &'static str,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },
    #[error("trace must be 1, found {trace}")]
    Trace { trace: f64 },
    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("purity tr(rho^2) = {purity} exceeds 1")]
    Purity { purity: f64 },
    #[error("state vector norm must be 1, found {norm}")]
    Norm { norm: f64 },
    #[error("unsupported dimensions {dims}: {reason}")]
    UnsupportedDims { dims: Dims, reason: &'static str },
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    #[error("kraus operators are not trace preserving: |sum E^dagger E - 1| = {deviation:e}")]
    Channel { deviation: f64 },
    #[error("direction is not a unit vector: norm {norm}")]
    NonUnitDirection { norm: f64 },
    #[error("matrix is not unitary: |U^dagger U - 1| = {deviation:e}")]
    NotUnitary { deviation: f64 },
}
