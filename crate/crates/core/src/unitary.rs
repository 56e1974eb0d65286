//! Unitaries parameterized as `exp(iH)` with `H` Hermitian.
//!
//! A `d x d` generator takes `d^2` real coefficients: the `d` diagonal
//! entries followed by the real and imaginary parts of each upper
//! off-diagonal entry in row-major order. The map is onto `U(d)`; global and
//! column phases stay redundant.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::eigen::jacobi;
use crate::matrix::ComplexMatrix;
use crate::real;

/// Generator coefficients for one or both local unitaries.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryParameters {
    pub angles: Vec<f64>,
}

impl UnitaryParameters {
    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.angles.iter().all(|a| a.is_finite())
    }
}

#[inline]
pub fn coefficient_count(d: usize) -> usize {
    d * d
}

pub fn hermitian_generator(d: usize, coeffs: &[f64]) -> ComplexMatrix {
    assert_eq!(coeffs.len(), coefficient_count(d), "generator coefficient count");
    let mut h = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        h[(i, i)] = C64::new(coeffs[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = C64::new(coeffs[k], coeffs[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }
    h
}

/// `exp(iH)` for the generator described by `coeffs`.
pub fn unitary_from_coefficients(d: usize, coeffs: &[f64]) -> ComplexMatrix {
    match d {
        1 => {
            let (s, c) = (real::sin(coeffs[0]), real::cos(coeffs[0]));
            ComplexMatrix::from_vec_unchecked(1, 1, alloc::vec![C64::new(c, s)])
        }
        2 => qubit_exp(coeffs),
        _ => {
            let eig = jacobi(&hermitian_generator(d, coeffs));
            let v = &eig.vectors;
            let phases: Vec<C64> = eig
                .values
                .iter()
                .map(|&l| C64::new(real::cos(l), real::sin(l)))
                .collect();
            ComplexMatrix::from_fn(d, d, |i, j| {
                (0..d).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum()
            })
        }
    }
}

// exp(i(a0 + a.sigma)) = e^{i a0} (cos|a| + i sin|a| a.sigma/|a|)
fn qubit_exp(coeffs: &[f64]) -> ComplexMatrix {
    let a0 = 0.5 * (coeffs[0] + coeffs[1]);
    let az = 0.5 * (coeffs[0] - coeffs[1]);
    let ax = coeffs[2];
    let ay = -coeffs[3];
    let r = real::sqrt(ax * ax + ay * ay + az * az);
    let (c, sinc) = if r < 1e-8 {
        (1.0 - 0.5 * r * r, 1.0 - r * r / 6.0)
    } else {
        (real::cos(r), real::sin(r) / r)
    };
    let g = C64::new(real::cos(a0), real::sin(a0));
    let i = C64::new(0.0, 1.0);
    // i sinc (a.sigma) = i sinc [[az, ax - i ay], [ax + i ay, -az]]
    let m00 = C64::new(c, 0.0) + i * sinc * az;
    let m11 = C64::new(c, 0.0) - i * sinc * az;
    let m01 = i * sinc * C64::new(ax, -ay);
    let m10 = i * sinc * C64::new(ax, ay);
    ComplexMatrix::from_vec_unchecked(2, 2, alloc::vec![g * m00, g * m01, g * m10, g * m11])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::hermitian_eigen;
    use proptest::prelude::*;

    // exp via eigendecomposition, independent of the closed qubit form
    fn exp_i_reference(h: &ComplexMatrix) -> ComplexMatrix {
        let eig = hermitian_eigen(h).unwrap();
        let d = h.rows();
        let mut acc = ComplexMatrix::zeros(d, d);
        for k in 0..d {
            let v = eig.vector(k);
            let ph = C64::new(eig.values[k].cos(), eig.values[k].sin());
            acc = &acc + &ComplexMatrix::outer(&v).scale(ph);
        }
        acc
    }

    #[test]
    fn zero_generator_is_identity() {
        for d in 1..5 {
            let u = unitary_from_coefficients(d, &alloc::vec![0.0; d * d]);
            assert!(u.max_abs_diff(&ComplexMatrix::identity(d)) < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn unitary_and_matches_reference(d in 1usize..=4, seed in proptest::collection::vec(-3.5f64..3.5, 16)) {
            let coeffs = &seed[..d * d];
            let u = unitary_from_coefficients(d, coeffs);
            prop_assert!(u.unitarity_deviation() < 1e-12);
            let r = exp_i_reference(&hermitian_generator(d, coeffs));
            prop_assert!(u.max_abs_diff(&r) < 1e-12);
        }
    }
}
