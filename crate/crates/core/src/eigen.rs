//! Cyclic Jacobi eigensolver for small Hermitian matrices.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::real;

/// Inputs whose `max |m - m^dagger|` exceeds this are rejected.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Rebuilds `V f(D) V^dagger`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let w = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled.mul_adjoint(&self.vectors)
    }
}

/// Diagonalizes a Hermitian matrix.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    m.check_square("hermitian_eigen")?;
    let deviation = m.hermitian_deviation();
    if deviation > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(jacobi(m))
}

/// Eigen-decomposition of a real symmetric `n x n` matrix given row-major.
pub fn symmetric_eigen(n: usize, entries: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let m = ComplexMatrix::from_real(n, n, entries)?;
    let eig = hermitian_eigen(&m)?;
    let vectors = (0..n)
        .map(|k| {
            // a real symmetric input yields eigenvectors that are real up to
            // a column phase; rotate the largest component onto the real axis
            let v = eig.vector(k);
            let pivot = v
                .iter()
                .copied()
                .fold(C64::new(0.0, 0.0), |acc, z| if z.norm() > acc.norm() { z } else { acc });
            let phase = pivot.conj() / pivot.norm();
            v.iter().map(|&z| (z * phase).re).collect()
        })
        .collect();
    Ok((eig.values, vectors))
}

pub(crate) fn jacobi(m: &ComplexMatrix) -> HermitianEigen {
    let n = m.rows();
    let mut a = m.clone();
    // symmetrize so the iteration works on an exactly Hermitian matrix
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
    let mut v = ComplexMatrix::identity(n);
    let tol = 1e-15 * real::sqrt(a.frobenius_sq());

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let gabs = g.norm();
                if gabs <= tol {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, g, gabs);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen { values, vectors }
}

// Applies G = diag(1, e^{-i phi}) * [[c, s], [-s, c]] in the (p, q) plane,
// A <- G^dagger A G, V <- V G, which annihilates A[p][q].
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, g: C64, gabs: f64) {
    let n = a.rows();
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    let tau = (beta - alpha) / (2.0 * gabs);
    let t = if tau >= 0.0 {
        1.0 / (tau + real::hypot(1.0, tau))
    } else {
        -1.0 / (-tau + real::hypot(1.0, tau))
    };
    let c = 1.0 / real::hypot(1.0, t);
    let s = t * c;
    let phase = (g / gabs).conj();

    let g00 = C64::new(c, 0.0);
    let g01 = C64::new(s, 0.0);
    let g10 = phase * (-s);
    let g11 = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g00 + akq * g10;
        a[(k, q)] = akp * g01 + akq * g11;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g00.conj() * apk + g10.conj() * aqk;
        a[(q, k)] = g01.conj() * apk + g11.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(alpha - t * gabs, 0.0);
    a[(q, q)] = C64::new(beta + t * gabs, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g00 + vkq * g10;
        v[(k, q)] = vkp * g01 + vkq * g11;
    }
}

/// Principal square root of a positive semidefinite matrix; tiny negative
/// eigenvalues from roundoff are clamped to zero.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eigen(m)?.reconstruct_with(|x| real::sqrt(x.max(0.0))))
}
