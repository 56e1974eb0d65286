//! Two-qubit Bloch representation
//! `rho = (1 + x.sigma (x) 1 + 1 (x) y.sigma + sum T_ij sigma_i (x) sigma_j) / 4`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pauli::PauliBasis;
use crate::state::{DensityMatrix, Dims};

const IMAG_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochRep {
    /// Bloch vector of subsystem A.
    pub x: [f64; 3],
    /// Bloch vector of subsystem B.
    pub y: [f64; 3],
    /// Correlation tensor, `t[i][j] = tr[rho sigma_i (x) sigma_j]`.
    pub t: [[f64; 3]; 3],
}

fn real_expectation(rho: &ComplexMatrix, op: &ComplexMatrix) -> Result<f64> {
    // tr(rho op) = sum_ij rho_ij op_ji
    let n = rho.rows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * op[(j, i)];
        }
    }
    if acc.im.abs() > IMAG_TOLERANCE {
        return Err(Error::NotHermitian { deviation: acc.im.abs() });
    }
    Ok(acc.re)
}

impl BlochRep {
    pub fn decompose(rho: &DensityMatrix) -> Result<Self> {
        if !rho.dims().is_qubits() {
            return Err(Error::UnsupportedDims {
                dims: rho.dims(),
                reason: "bloch representation needs two qubits",
            });
        }
        let p = PauliBasis::new();
        let m = rho.matrix();
        let mut out = BlochRep {
            x: [0.0; 3],
            y: [0.0; 3],
            t: [[0.0; 3]; 3],
        };
        for i in 0..3 {
            out.x[i] = real_expectation(m, &p.sigma[i].kron(&p.identity))?;
            out.y[i] = real_expectation(m, &p.identity.kron(&p.sigma[i]))?;
            for j in 0..3 {
                out.t[i][j] = real_expectation(m, &p.sigma[i].kron(&p.sigma[j]))?;
            }
        }
        Ok(out)
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let p = PauliBasis::new();
        let mut acc = ComplexMatrix::identity(4);
        for i in 0..3 {
            acc = &acc + &p.sigma[i].kron(&p.identity).scale_real(self.x[i]);
            acc = &acc + &p.identity.kron(&p.sigma[i]).scale_real(self.y[i]);
            for j in 0..3 {
                acc = &acc + &p.sigma[i].kron(&p.sigma[j]).scale_real(self.t[i][j]);
            }
        }
        acc.scale_real(0.25)
    }

    /// Fails with a validation error when the data describe no physical state.
    pub fn compose(&self) -> Result<DensityMatrix> {
        DensityMatrix::validate(self.to_matrix(), Dims::QUBITS)
    }

    /// `||T||_F^2`
    pub fn t_norm_sq(&self) -> f64 {
        self.t.iter().flatten().map(|v| v * v).sum()
    }

    /// `T T^t`, row-major.
    pub fn t_tt(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[i * 3 + j] = (0..3).map(|k| self.t[i][k] * self.t[j][k]).sum();
            }
        }
        out
    }

    /// `T^t T`, row-major.
    pub fn tt_t(&self) -> [f64; 9] {
        let mut out = [0.0; 9];
        for i in 0..3 {
            for j in 0..3 {
                out[i * 3 + j] = (0..3).map(|k| self.t[k][i] * self.t[k][j]).sum();
            }
        }
        out
    }

    /// Bloch data of the state with subsystems exchanged.
    pub fn swapped(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.t[j][i];
            }
        }
        BlochRep { x: self.y, y: self.x, t }
    }
}

pub fn norm_sq(v: &[f64; 3]) -> f64 {
    v.iter().map(|a| a * a).sum()
}
