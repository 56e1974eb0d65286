//! Basis-relative coherence contributions of the three classes.
//!
//! In the frame `rho_U = (U_A (x) U_B) rho (U_A (x) U_B)^dagger` each entry
//! `<k k'| rho_U |l l'>` is counted as
//!
//! * Class I when `k != l` (Bob cannot recover it after Alice measures),
//! * Class II when `k' != l'`,
//! * Class III when `k + l = m - 1` and `k' + l' = n - 1` (anti-diagonal).
//!
//! `total` double-counts the entries that are in both Class I and Class II;
//! `tilde_total` counts every off-diagonal entry once.

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::state::{DensityMatrix, Dims};
use crate::unitary;

pub const UNITARY_TOLERANCE: f64 = 1e-9;

/// A product frame `U_A (x) U_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBasisPair {
    u_a: ComplexMatrix,
    u_b: ComplexMatrix,
}

impl LocalBasisPair {
    pub fn new(u_a: ComplexMatrix, u_b: ComplexMatrix) -> Result<Self> {
        for u in [&u_a, &u_b] {
            let deviation = u.unitarity_deviation();
            if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(LocalBasisPair { u_a, u_b })
    }

    pub fn computational(dims: Dims) -> Self {
        LocalBasisPair {
            u_a: ComplexMatrix::identity(dims.a),
            u_b: ComplexMatrix::identity(dims.b),
        }
    }

    /// The frame whose `k`-th basis vectors are the `k`-th columns of
    /// `vectors_a` and `vectors_b`, i.e. `<k k'|rho_U|l l'> = <a_k b_k'|rho|a_l b_l'>`.
    pub fn from_basis_vectors(vectors_a: &ComplexMatrix, vectors_b: &ComplexMatrix) -> Result<Self> {
        Self::new(vectors_a.adjoint(), vectors_b.adjoint())
    }

    /// `U_A = exp(i H_A)`, `U_B = exp(i H_B)` from generator coefficients.
    pub fn from_coefficients(dims: Dims, coeffs_a: &[f64], coeffs_b: &[f64]) -> Self {
        LocalBasisPair {
            u_a: unitary::unitary_from_coefficients(dims.a, coeffs_a),
            u_b: unitary::unitary_from_coefficients(dims.b, coeffs_b),
        }
    }

    pub(crate) fn from_parts_unchecked(u_a: ComplexMatrix, u_b: ComplexMatrix) -> Self {
        LocalBasisPair { u_a, u_b }
    }

    pub fn u_a(&self) -> &ComplexMatrix {
        &self.u_a
    }

    pub fn u_b(&self) -> &ComplexMatrix {
        &self.u_b
    }

    pub fn dims(&self) -> Dims {
        Dims {
            a: self.u_a.rows(),
            b: self.u_b.rows(),
        }
    }

    /// `rho_U` as a raw matrix.
    pub fn rotate(&self, rho: &DensityMatrix) -> Result<ComplexMatrix> {
        if self.dims() != rho.dims() {
            return Err(Error::Shape {
                op: "contributions",
                expected: (rho.dims().a, rho.dims().b),
                found: (self.u_a.rows(), self.u_b.rows()),
            });
        }
        Ok(rotate_raw(rho.matrix(), &self.u_a, &self.u_b))
    }
}

pub(crate) fn rotate_raw(m: &ComplexMatrix, u_a: &ComplexMatrix, u_b: &ComplexMatrix) -> ComplexMatrix {
    let w = u_a.kron(u_b);
    w.matmul(m).mul_adjoint(&w)
}

/// The five contribution functionals evaluated in one frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassContributions {
    /// `C_[A|B]`
    pub class1: f64,
    /// `C_[B|A]`
    pub class2: f64,
    /// `v`, the anti-diagonal (Class III) contribution.
    pub class3: f64,
    /// `C~_Total`, every off-diagonal entry once.
    pub tilde_total: f64,
    /// `C_Total = class1 + class2`.
    pub total: f64,
}

impl ClassContributions {
    pub fn get(&self, objective: Objective) -> f64 {
        match objective {
            Objective::Class1 => self.class1,
            Objective::Class2 => self.class2,
            Objective::Class3 => self.class3,
            Objective::TildeTotal => self.tilde_total,
            Objective::Total => self.total,
        }
    }
}

/// Which contribution an optimization targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    Class1,
    Class2,
    Class3,
    TildeTotal,
    Total,
}

impl Objective {
    pub const ALL: [Objective; 5] = [
        Objective::Class1,
        Objective::Class2,
        Objective::Class3,
        Objective::TildeTotal,
        Objective::Total,
    ];

    /// Whether the functional depends on `U_A` / `U_B`. Class I sums over
    /// a complete B basis, so `U_B` drops out; symmetrically for Class II.
    pub fn varies(self) -> (bool, bool) {
        match self {
            Objective::Class1 => (true, false),
            Objective::Class2 => (false, true),
            _ => (true, true),
        }
    }
}

pub fn contributions(rho: &DensityMatrix, basis: &LocalBasisPair) -> Result<ClassContributions> {
    let rotated = basis.rotate(rho)?;
    Ok(contributions_of_matrix(&rotated, rho.dims()))
}

/// Contributions of a matrix already expressed in the frame of interest.
pub fn contributions_of_matrix(m: &ComplexMatrix, dims: Dims) -> ClassContributions {
    let Dims { a, b } = dims;
    let mut out = ClassContributions::default();
    for k in 0..a {
        for kp in 0..b {
            let row = k * b + kp;
            for l in 0..a {
                for lp in 0..b {
                    let w = m[(row, l * b + lp)].norm_sqr();
                    let a_off = k != l;
                    let b_off = kp != lp;
                    if a_off {
                        out.class1 += w;
                    }
                    if b_off {
                        out.class2 += w;
                    }
                    if a_off || b_off {
                        out.tilde_total += w;
                    }
                    if k + l == a - 1 && kp + lp == b - 1 {
                        out.class3 += w;
                    }
                }
            }
        }
    }
    out.total = out.class1 + out.class2;
    out
}

/// Sum of squared moduli of the off-diagonal entries of a single-system
/// matrix.
pub fn offdiagonal_sq(m: &ComplexMatrix) -> f64 {
    let mut acc = 0.0;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::{make_bell, Bell, PureState};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;

    #[test]
    fn maximally_mixed_has_no_coherence() {
        let rho = DensityMatrix::maximally_mixed(Dims::QUBITS);
        let mut r = random::rng(1);
        let basis = LocalBasisPair::new(random::haar_unitary(2, &mut r), random::haar_unitary(2, &mut r)).unwrap();
        let c = contributions(&rho, &basis).unwrap();
        for o in Objective::ALL {
            assert!(c.get(o) < 1e-15);
        }
    }

    #[test]
    fn bell_in_computational_basis() {
        let rho = make_bell(Bell::PhiPlus).density();
        let c = contributions(&rho, &LocalBasisPair::computational(Dims::QUBITS)).unwrap();
        assert_abs_diff_eq!(c.class1, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.class2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.class3, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.tilde_total, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.total, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_plus_product() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let psi = PureState::product(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], &[C64::new(h, 0.0), C64::new(h, 0.0)]).unwrap();
        let c = contributions(&psi.density(), &LocalBasisPair::computational(Dims::QUBITS)).unwrap();
        assert_abs_diff_eq!(c.class1, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.class2, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.class3, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(c.tilde_total, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.total, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn odd_dimension_class3_counts_center_entry() {
        // for a qutrit pair the anti-diagonal includes the entry (1 1, 1 1)
        let rho = DensityMatrix::maximally_mixed(Dims { a: 3, b: 3 });
        let c = contributions(&rho, &LocalBasisPair::computational(rho.dims())).unwrap();
        assert_abs_diff_eq!(c.class3, 1.0 / 81.0, epsilon = 1e-15);
        assert_eq!(c.class1, 0.0);
    }

    #[test]
    fn rejects_mismatched_basis() {
        let rho = DensityMatrix::maximally_mixed(Dims { a: 2, b: 3 });
        assert!(contributions(&rho, &LocalBasisPair::computational(Dims::QUBITS)).is_err());
        let bad = ComplexMatrix::from_diag(&[1.0, 2.0]);
        assert!(matches!(
            LocalBasisPair::new(bad, ComplexMatrix::identity(2)),
            Err(Error::NotUnitary { .. })
        ));
    }

    fn state_and_basis() -> impl Strategy<Value = (DensityMatrix, LocalBasisPair)> {
        (1usize..=3, 1usize..=3, any::<u64>()).prop_map(|(a, b, seed)| {
            let a = a + 1;
            let dims = Dims { a, b: b + 1 };
            let mut r = random::rng(seed);
            let rho = random::random_mixed_with(dims, dims.total(), &mut r).unwrap();
            let basis = LocalBasisPair::new(random::haar_unitary(dims.a, &mut r), random::haar_unitary(dims.b, &mut r)).unwrap();
            (rho, basis)
        })
    }

    proptest! {
        #[test]
        fn structural_relations((rho, basis) in state_and_basis()) {
            let c = contributions(&rho, &basis).unwrap();
            prop_assert_eq!(c.total, c.class1 + c.class2);
            prop_assert!(c.tilde_total <= c.total + 1e-12);
            // class1 + class2 - tilde = doubly off-diagonal weight >= 0
            let rot = basis.rotate(&rho).unwrap();
            let Dims { a, b } = rho.dims();
            let mut doubly = 0.0;
            for r in 0..a * b {
                for s in 0..a * b {
                    if r / b != s / b && r % b != s % b {
                        doubly += rot[(r, s)].norm_sqr();
                    }
                }
            }
            prop_assert!((c.class1 + c.class2 - c.tilde_total - doubly).abs() < 1e-12);
            if rho.dims().is_qubits() {
                prop_assert!(c.class3 <= c.class1.min(c.class2) + 1e-12);
            }
        }

        #[test]
        fn class1_ignores_b_frame((rho, basis) in state_and_basis(), seed in any::<u64>()) {
            let mut r = random::rng(seed);
            let other = LocalBasisPair::new(basis.u_a().clone(), random::haar_unitary(rho.dims().b, &mut r)).unwrap();
            let c1 = contributions(&rho, &basis).unwrap();
            let c2 = contributions(&rho, &other).unwrap();
            prop_assert!((c1.class1 - c2.class1).abs() < 1e-12);
        }

        #[test]
        fn relabeling_invariance((rho, basis) in state_and_basis(), shift in 1usize..3) {
            // cyclically permute the basis vectors of both sides
            let va = basis.u_a().adjoint();
            let vb = basis.u_b().adjoint();
            let (a, b) = (va.cols(), vb.cols());
            let pa = ComplexMatrix::from_fn(a, a, |i, j| va[(i, (j + shift) % a)]);
            let pb = ComplexMatrix::from_fn(b, b, |i, j| vb[(i, (j + shift) % b)]);
            let permuted = LocalBasisPair::from_basis_vectors(&pa, &pb).unwrap();
            let c1 = contributions(&rho, &basis).unwrap();
            let c2 = contributions(&rho, &permuted).unwrap();
            prop_assert!((c1.class1 - c2.class1).abs() < 1e-12);
            prop_assert!((c1.class2 - c2.class2).abs() < 1e-12);
            prop_assert!((c1.tilde_total - c2.tilde_total).abs() < 1e-12);
        }
    }
}
