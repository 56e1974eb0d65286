//! Dense complex matrices for small bipartite systems.
//!
//! Composite indices are row-major: the basis vector `|ij>` of an `m x n`
//! system sits at position `i * n + j`. Every module relies on this.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Local dimensions `(m, n)` of a bipartite system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub a: usize,
    pub b: usize,
}

impl Dims {
    pub const QUBITS: Dims = Dims { a: 2, b: 2 };

    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::InvalidParameter {
                name: "dims",
                reason: "local dimensions must be positive",
            });
        }
        Ok(Dims { a, b })
    }

    #[inline]
    pub fn total(self) -> usize {
        self.a * self.b
    }

    pub fn swapped(self) -> Dims {
        Dims { a: self.b, b: self.a }
    }

    pub fn is_qubits(self) -> bool {
        self == Dims::QUBITS
    }
}

impl fmt::Display for Dims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.a, self.b)
    }
}

/// Subsystem selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, rejecting bad lengths and
    /// non-finite components.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Shape {
                op: "new",
                expected: (rows, cols),
                found: (data.len(), 1),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = C64::new(d, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { rows, cols, data }
    }

    /// `|v><v|`
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if cols == 0 || rows == 0 || columns.iter().any(|c| c.len() != rows) {
            return Err(Error::Shape {
                op: "from_columns",
                expected: (rows, cols),
                found: (columns.iter().map(Vec::len).max().unwrap_or(0), cols),
            });
        }
        Self::new(rows, cols, (0..rows * cols).map(|p| columns[p % cols][p / cols]).collect())
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Standard matrix product.
    pub fn multiply(&self, other: &ComplexMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                op: "multiply",
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        Ok(self.matmul(other))
    }

    pub(crate) fn matmul(&self, other: &ComplexMatrix) -> Self {
        debug_assert_eq!(self.cols, other.rows);
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![C64::new(0.0, 0.0); n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let orow = &other.data[p * m..(p + 1) * m];
                for (o, &b) in row.iter_mut().zip(orow) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix::from_vec_unchecked(n, m, out)
    }

    /// `self * other^dagger` without materializing the adjoint.
    pub(crate) fn mul_adjoint(&self, other: &ComplexMatrix) -> Self {
        debug_assert_eq!(self.cols, other.cols);
        let (n, k, m) = (self.rows, self.cols, other.rows);
        let mut out = Vec::with_capacity(n * m);
        for i in 0..n {
            let a = &self.data[i * k..(i + 1) * k];
            for j in 0..m {
                let b = &other.data[j * k..(j + 1) * k];
                out.push(a.iter().zip(b).map(|(&x, &y)| x * y.conj()).sum());
            }
        }
        ComplexMatrix::from_vec_unchecked(n, m, out)
    }

    /// `u * self * u^dagger`
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Result<Self> {
        Ok(u.multiply(self)?.mul_adjoint(u))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Shape {
                op: "mul_vec",
                expected: (self.cols, 1),
                found: (v.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect())
    }

    /// Kronecker product; row `(i, j)` of the result is `i * b.rows + j`.
    pub fn kron(&self, b: &ComplexMatrix) -> Self {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for k in 0..b.rows {
                for j in 0..self.cols {
                    let a = self.data[i * self.cols + j];
                    data.extend(b.data[k * b.cols..(k + 1) * b.cols].iter().map(|&z| a * z));
                }
            }
        }
        ComplexMatrix::from_vec_unchecked(rows, cols, data)
    }

    /// Reduced matrix of the `keep` subsystem of an `(m n) x (m n)` operator.
    pub fn partial_trace(&self, dims: Dims, keep: Side) -> Result<Self> {
        let d = dims.total();
        if self.shape() != (d, d) {
            return Err(Error::Shape {
                op: "partial_trace",
                expected: (d, d),
                found: self.shape(),
            });
        }
        let (m, n) = (dims.a, dims.b);
        Ok(match keep {
            Side::A => Self::from_fn(m, m, |i, k| (0..n).map(|j| self[(i * n + j, k * n + j)]).sum()),
            Side::B => Self::from_fn(n, n, |j, l| (0..m).map(|i| self[(i * n + j, i * n + l)]).sum()),
        })
    }

    /// Sum of squared moduli of all entries.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - self^dagger`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Frobenius norm of `self^dagger self - 1`.
    pub fn unitarity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let g = self.adjoint().matmul(self);
        crate::real::sqrt((&g - &Self::identity(self.rows)).frobenius_sq())
    }

    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.shape() != other.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn check_square(&self, op: &'static str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::Shape {
                op,
                expected: (self.rows, self.rows),
                found: self.shape(),
            })
        }
    }
}

/// Modified Gram-Schmidt over `vectors`, then completed with standard basis
/// vectors until `dim` orthonormal columns exist. Vectors whose remainder
/// norm falls below `1e-10` are skipped.
pub(crate) fn orthonormal_completion(vectors: &[Vec<C64>], dim: usize) -> ComplexMatrix {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dim);
    let standard = (0..dim).map(|k| {
        let mut e = vec![C64::new(0.0, 0.0); dim];
        e[k] = C64::new(1.0, 0.0);
        e
    });
    for candidate in vectors.iter().cloned().chain(standard) {
        if basis.len() == dim {
            break;
        }
        let mut w = candidate;
        // two passes keep the columns orthogonal to working precision
        for _ in 0..2 {
            for b in &basis {
                let overlap: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= overlap * bi;
                }
            }
        }
        let norm = crate::real::sqrt(w.iter().map(|z| z.norm_sqr()).sum());
        if norm > 1e-10 {
            basis.push(w.into_iter().map(|z| z / norm).collect());
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| basis[j][i])
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in add");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        )
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch in sub");
        ComplexMatrix::from_vec_unchecked(
            self.rows,
            self.cols,
            self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        )
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    /// Panics on a shape mismatch; use [`ComplexMatrix::multiply`] for a checked product.
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        self.matmul(rhs)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            f.write_str("  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            f.write_str("\n")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_products() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.multiply(&i2).unwrap(), i2);
        let [_, x, y, z] = pauli::all();
        assert!(x.multiply(&x).unwrap().max_abs_diff(&i2) < 1e-15);
        let xy = x.multiply(&y).unwrap();
        assert!(xy.max_abs_diff(&z.scale(c(0.0, 1.0))) < 1e-15);
    }

    #[test]
    fn multiply_rejects_bad_shapes() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.multiply(&a), Err(Error::Shape { .. })));
    }

    #[test]
    fn constructor_rejects_non_finite() {
        let err = ComplexMatrix::from_real(1, 2, &[1.0, f64::NAN]).unwrap_err();
        assert_eq!(err, Error::NonFinite { row: 0, col: 1 });
        assert!(ComplexMatrix::from_real(2, 2, &[1.0]).is_err());
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        assert_eq!(p0.kron(&p0), ComplexMatrix::from_diag(&[1.0, 0.0, 0.0, 0.0]));
        let z = pauli::sigma_z();
        assert_eq!(z.kron(&z), ComplexMatrix::from_diag(&[1.0, -1.0, -1.0, 1.0]));
    }

    #[test]
    fn kron_index_convention() {
        // |01> in a 2x3 system sits at index 0 * 3 + 1.
        let e0 = ComplexMatrix::from_real(2, 1, &[1.0, 0.0]).unwrap();
        let e1 = ComplexMatrix::from_real(3, 1, &[0.0, 1.0, 0.0]).unwrap();
        let v = e0.kron(&e1);
        assert_eq!(v.rows(), 6);
        assert_eq!(v[(1, 0)], c(1.0, 0.0));
    }

    #[test]
    fn partial_trace_of_bell_projector() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexMatrix::outer(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        for side in [Side::A, Side::B] {
            let r = phi.partial_trace(Dims::QUBITS, side).unwrap();
            assert!(r.max_abs_diff(&half) < 1e-15);
        }
        assert!(phi.partial_trace(Dims { a: 2, b: 3 }, Side::A).is_err());
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(ComplexMatrix::identity(2).frobenius_sq(), 2.0);
        assert_eq!(ComplexMatrix::zeros(3, 3).frobenius_sq(), 0.0);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let phi = ComplexMatrix::outer(&[c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        assert!((phi.frobenius_sq() - 1.0).abs() < 1e-15);
    }

    fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n).prop_map(move |v| {
            ComplexMatrix::new(n, n, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in matrix(2), b in matrix(3), cc in matrix(2), d in matrix(3)) {
            let lhs = &a.kron(&b) * &cc.kron(&d);
            let rhs = (&a * &cc).kron(&(&b * &d));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn kron_associative(a in matrix(2), b in matrix(3), cc in matrix(2)) {
            let lhs = a.kron(&b).kron(&cc);
            let rhs = a.kron(&b.kron(&cc));
            prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }

        #[test]
        fn partial_trace_of_product(a in matrix(2), b in matrix(3)) {
            let ab = a.kron(&b);
            let dims = Dims { a: 2, b: 3 };
            let ra = ab.partial_trace(dims, Side::A).unwrap();
            prop_assert!(ra.max_abs_diff(&a.scale(b.trace())) < 1e-12);
            let rb = ab.partial_trace(dims, Side::B).unwrap();
            prop_assert!(rb.max_abs_diff(&b.scale(a.trace())) < 1e-12);
            prop_assert!((ra.trace() - ab.trace()).norm() < 1e-12);
        }
    }
}
