//! Validated bipartite density matrices and pure states.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::eigen::{hermitian_eigen, HERMITIAN_TOLERANCE};
use crate::error::{Error, Result};
pub use crate::matrix::Dims;
use crate::matrix::{orthonormal_completion, ComplexMatrix, Side};
use crate::real;

pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const PSD_TOLERANCE: f64 = 1e-9;
pub const NORM_TOLERANCE: f64 = 1e-10;

/// A Hermitian, unit-trace, positive semidefinite operator on `C^m (x) C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Dims,
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Checks every density-matrix invariant, reporting the first violated one.
    pub fn validate(mat: ComplexMatrix, dims: Dims) -> Result<Self> {
        let d = dims.total();
        if mat.shape() != (d, d) {
            return Err(Error::Shape {
                op: "validate",
                expected: (d, d),
                found: mat.shape(),
            });
        }
        let deviation = mat.hermitian_deviation();
        if deviation > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = mat.trace().re;
        if (trace - 1.0).abs() > TRACE_TOLERANCE {
            return Err(Error::Trace { trace });
        }
        let eig = hermitian_eigen(&mat)?;
        let min_eigenvalue = eig.values[d - 1];
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        let purity = mat.frobenius_sq();
        if purity > 1.0 + PSD_TOLERANCE {
            return Err(Error::Purity { purity });
        }
        Ok(DensityMatrix { dims, mat })
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix, dims: Dims) -> Self {
        debug_assert_eq!(mat.shape(), (dims.total(), dims.total()));
        DensityMatrix { dims, mat }
    }

    pub fn maximally_mixed(dims: Dims) -> Self {
        let d = dims.total();
        Self::from_trusted(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), dims)
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    /// `tr rho^2`
    pub fn purity(&self) -> f64 {
        self.mat.frobenius_sq()
    }

    pub fn reduced(&self, keep: Side) -> ComplexMatrix {
        self.mat
            .partial_trace(self.dims, keep)
            .expect("density matrix shape matches its dims")
    }

    /// Exchanges the two subsystems.
    pub fn swapped(&self) -> Self {
        let Dims { a: m, b: n } = self.dims;
        let mat = ComplexMatrix::from_fn(m * n, m * n, |r, c| {
            let (j, i) = (r / m, r % m);
            let (l, k) = (c / m, c % m);
            self.mat[(i * n + j, k * n + l)]
        });
        Self::from_trusted(mat, self.dims.swapped())
    }

    /// `(u_a (x) u_b) rho (u_a (x) u_b)^dagger`
    pub fn local_conjugate(&self, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> Result<Self> {
        if u_a.shape() != (self.dims.a, self.dims.a) || u_b.shape() != (self.dims.b, self.dims.b) {
            return Err(Error::Shape {
                op: "local_conjugate",
                expected: (self.dims.a, self.dims.b),
                found: (u_a.rows(), u_b.rows()),
            });
        }
        let w = u_a.kron(u_b);
        Ok(Self::from_trusted(self.mat.conjugate_by(&w)?, self.dims))
    }

    /// Convex mixture `sum w_k rho_k`; weights must be nonnegative and sum to one.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts.first().ok_or(Error::InvalidParameter {
            name: "parts",
            reason: "mixture needs at least one state",
        })?;
        let dims = first.1.dims;
        let mut acc = ComplexMatrix::zeros(dims.total(), dims.total());
        for &(w, rho) in parts {
            if rho.dims != dims {
                return Err(Error::Shape {
                    op: "mixture",
                    expected: (dims.a, dims.b),
                    found: (rho.dims.a, rho.dims.b),
                });
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    reason: "mixture weights must be nonnegative",
                });
            }
            acc = &acc + &rho.mat.scale_real(w);
        }
        Self::validate(acc, dims)
    }

    /// Returns the state vector when `rho` is pure within `tol` of unit purity.
    pub fn as_pure(&self, tol: f64) -> Option<PureState> {
        if (self.purity() - 1.0).abs() > tol {
            return None;
        }
        let eig = hermitian_eigen(&self.mat).ok()?;
        PureState::new(self.dims, eig.vector(0)).ok()
    }
}

/// Normalized amplitudes `a_ij` of `sum a_ij |ij>`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Dims,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Dims, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Shape {
                op: "pure_state",
                expected: (dims.total(), 1),
                found: (amplitudes.len(), 1),
            });
        }
        if let Some(pos) = amplitudes.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos, col: 0 });
        }
        let norm = real::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum());
        if (norm * norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Norm { norm });
        }
        Ok(PureState { dims, amplitudes })
    }

    /// Scales `amplitudes` to unit norm first.
    pub fn normalized(dims: Dims, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = real::sqrt(amplitudes.iter().map(|z| z.norm_sqr()).sum());
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::Norm { norm });
        }
        for z in &mut amplitudes {
            *z /= norm;
        }
        Self::new(dims, amplitudes)
    }

    pub fn product(a: &[C64], b: &[C64]) -> Result<Self> {
        let dims = Dims::new(a.len(), b.len())?;
        let amps = a.iter().flat_map(|&x| b.iter().map(move |&y| x * y)).collect();
        Self::normalized(dims, amps)
    }

    #[inline]
    pub fn dims(&self) -> Dims {
        self.dims
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    /// `a_ij`
    #[inline]
    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amplitudes[i * self.dims.b + j]
    }

    /// The `m x n` matrix `[a_ij]`.
    pub fn amplitude_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_vec_unchecked(self.dims.a, self.dims.b, self.amplitudes.clone())
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(ComplexMatrix::outer(&self.amplitudes), self.dims)
    }

    pub fn schmidt_decompose(&self) -> SchmidtDecomposition {
        schmidt_decompose(self)
    }
}

/// `a = basis_a * diag(coefficients) * basis_b^dagger` with unitary bases.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// `min(m, n)` nonnegative values in descending order.
    pub coefficients: Vec<f64>,
    pub basis_a: ComplexMatrix,
    pub basis_b: ComplexMatrix,
}

impl SchmidtDecomposition {
    /// Number of coefficients above `1e-12`.
    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&s| s > 1e-12).count()
    }
}

pub fn schmidt_decompose(psi: &PureState) -> SchmidtDecomposition {
    let Dims { a: m, b: n } = psi.dims;
    let amp = psi.amplitude_matrix();
    let gram = amp.mul_adjoint(&amp);
    let eig = crate::eigen::jacobi(&gram);
    let k = m.min(n);
    let coefficients: Vec<f64> = eig.values[..k].iter().map(|&l| real::sqrt(l.max(0.0))).collect();
    let amp_dag = amp.adjoint();
    let mut right: Vec<Vec<C64>> = Vec::with_capacity(k);
    for (i, &s) in coefficients.iter().enumerate() {
        if s <= 1e-12 {
            break;
        }
        let v = amp_dag
            .mul_vec(&eig.vector(i))
            .expect("shapes agree")
            .into_iter()
            .map(|z| z / s)
            .collect();
        right.push(v);
    }
    SchmidtDecomposition {
        coefficients,
        basis_a: eig.vectors,
        basis_b: orthonormal_completion(&right, n),
    }
}

/// The four Bell states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

pub fn make_bell(which: Bell) -> PureState {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let amps = match which {
        Bell::PhiPlus => [h, 0.0, 0.0, h],
        Bell::PhiMinus => [h, 0.0, 0.0, -h],
        Bell::PsiPlus => [0.0, h, h, 0.0],
        Bell::PsiMinus => [0.0, h, -h, 0.0],
    };
    PureState {
        dims: Dims::QUBITS,
        amplitudes: amps.iter().map(|&x| C64::new(x, 0.0)).collect(),
    }
}

/// `p |Phi+><Phi+| + (1 - p) 1/4`
pub fn make_werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: "werner parameter must lie in [0, 1]",
        });
    }
    let bell = make_bell(Bell::PhiPlus).density().into_matrix();
    let mixed = ComplexMatrix::identity(4).scale_real((1.0 - p) / 4.0);
    Ok(DensityMatrix::from_trusted(&bell.scale_real(p) + &mixed, Dims::QUBITS))
}

/// `|ket><ket|` for a computational basis product `|i>|j>`.
pub fn basis_state(dims: Dims, i: usize, j: usize) -> Result<PureState> {
    if i >= dims.a || j >= dims.b {
        return Err(Error::InvalidParameter {
            name: "index",
            reason: "basis index out of range",
        });
    }
    let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
    amps[i * dims.b + j] = C64::new(1.0, 0.0);
    PureState::new(dims, amps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn validate_examples() {
        let q = Dims::QUBITS;
        assert!(DensityMatrix::validate(ComplexMatrix::identity(4).scale_real(0.25), q).is_ok());
        let err = DensityMatrix::validate(ComplexMatrix::identity(4).scale_real(0.5), q).unwrap_err();
        assert!(matches!(err, Error::Trace { .. }));
        assert!(alloc::format!("{err}").contains("trace"));
        let err = DensityMatrix::validate(ComplexMatrix::from_diag(&[1.5, -0.5, 0.0, 0.0]), q)
            .unwrap_err();
        assert!(matches!(err, Error::NotPositive { .. }));
        let nh = ComplexMatrix::from_real(4, 4, &[
            0.25, 0.1, 0.0, 0.0, //
            0.0, 0.25, 0.0, 0.0, //
            0.0, 0.0, 0.25, 0.0, //
            0.0, 0.0, 0.0, 0.25,
        ])
        .unwrap();
        assert!(matches!(DensityMatrix::validate(nh, q), Err(Error::NotHermitian { .. })));
        let err = DensityMatrix::validate(ComplexMatrix::identity(3), q).unwrap_err();
        assert!(matches!(err, Error::Shape { .. }));
    }

    #[test]
    fn pure_states_with_zero_diagonals_are_accepted() {
        let rho = make_bell(Bell::PhiPlus).density();
        assert!(DensityMatrix::validate(rho.matrix().clone(), Dims::QUBITS).is_ok());
    }

    #[test]
    fn bell_amplitudes() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(make_bell(Bell::PhiPlus).amplitudes(), &[c(h), c(0.0), c(0.0), c(h)]);
        assert_eq!(make_bell(Bell::PsiMinus).amplitudes(), &[c(0.0), c(h), c(-h), c(0.0)]);
    }

    #[test]
    fn werner_limits() {
        let w0 = make_werner(0.0).unwrap();
        assert!(w0.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-16);
        let w1 = make_werner(1.0).unwrap();
        assert!(w1.matrix().max_abs_diff(make_bell(Bell::PhiPlus).density().matrix()) < 1e-16);
        assert!(make_werner(1.5).is_err());
        assert!(make_werner(-0.1).is_err());
        assert!(make_werner(f64::NAN).is_err());
    }

    #[test]
    fn schmidt_examples() {
        let s = basis_state(Dims::QUBITS, 0, 0).unwrap().schmidt_decompose();
        assert_abs_diff_eq!(s.coefficients[0], 1.0, epsilon = 1e-14);
        assert_eq!(s.rank(), 1);

        let s = make_bell(Bell::PhiPlus).schmidt_decompose();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(s.coefficients[0], h, epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients[1], h, epsilon = 1e-14);

        let psi = PureState::new(Dims::QUBITS, vec![c(0.2f64.sqrt()), c(0.0), c(0.0), c(0.8f64.sqrt())])
            .unwrap();
        let s = psi.schmidt_decompose();
        assert_abs_diff_eq!(s.coefficients[0], 0.8f64.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(s.coefficients[1], 0.2f64.sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn schmidt_reconstructs_rectangular() {
        let amps: Vec<C64> = (0..6).map(|k| C64::new(k as f64 - 2.0, 0.5 * k as f64)).collect();
        let psi = PureState::normalized(Dims { a: 2, b: 3 }, amps).unwrap();
        let s = psi.schmidt_decompose();
        assert!(s.basis_a.unitarity_deviation() < 1e-12);
        assert!(s.basis_b.unitarity_deviation() < 1e-12);
        let sum_sq: f64 = s.coefficients.iter().map(|x| x * x).sum();
        assert_abs_diff_eq!(sum_sq, 1.0, epsilon = 1e-12);
        let mut diag = ComplexMatrix::zeros(2, 3);
        for (i, &x) in s.coefficients.iter().enumerate() {
            diag[(i, i)] = c(x);
        }
        let back = (&s.basis_a * &diag).mul_adjoint(&s.basis_b);
        assert!(back.max_abs_diff(&psi.amplitude_matrix()) < 1e-12);
    }

    #[test]
    fn swap_exchanges_reduced_states() {
        let psi = PureState::product(&[c(1.0), c(0.0)], &[c(0.6), c(0.8), c(0.0)]).unwrap();
        let rho = psi.density();
        let sw = rho.swapped();
        assert_eq!(sw.dims(), Dims { a: 3, b: 2 });
        assert!(sw.reduced(Side::A).max_abs_diff(&rho.reduced(Side::B)) < 1e-15);
        assert!(sw.swapped().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn pure_state_rejects_bad_norm() {
        assert!(matches!(
            PureState::new(Dims::QUBITS, vec![c(1.0), c(1.0), c(0.0), c(0.0)]),
            Err(Error::Norm { .. })
        ));
    }
}
