//! Kraus channels acting on one side of a bipartite state.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Side};
use crate::real;
use crate::state::DensityMatrix;

pub const COMPLETENESS_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    side: Side,
    gamma: Option<f64>,
}

impl KrausChannel {
    /// Checks `sum E_k^dagger E_k = 1`.
    pub fn new(operators: Vec<ComplexMatrix>, side: Side) -> Result<Self> {
        let d = operators.first().map(ComplexMatrix::rows).ok_or(Error::InvalidParameter {
            name: "operators",
            reason: "a channel needs at least one kraus operator",
        })?;
        let mut acc = ComplexMatrix::zeros(d, d);
        for e in &operators {
            if e.shape() != (d, d) {
                return Err(Error::Shape {
                    op: "kraus",
                    expected: (d, d),
                    found: e.shape(),
                });
            }
            acc = &acc + &(&e.adjoint() * e);
        }
        let deviation = real::sqrt((&acc - &ComplexMatrix::identity(d)).frobenius_sq());
        if deviation > COMPLETENESS_TOLERANCE {
            return Err(Error::Channel { deviation });
        }
        Ok(KrausChannel {
            operators,
            side,
            gamma: None,
        })
    }

    /// Qubit phase damping `E0 = diag(1, sqrt(1 - g))`, `E1 = diag(0, sqrt(g))`.
    pub fn phase_damping(gamma: f64, side: Side) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter {
                name: "gamma",
                reason: "damping strength must lie in [0, 1]",
            });
        }
        let e0 = ComplexMatrix::from_diag(&[1.0, real::sqrt(1.0 - gamma)]);
        let e1 = ComplexMatrix::from_diag(&[0.0, real::sqrt(gamma)]);
        let mut ch = Self::new(vec![e0, e1], side)?;
        ch.gamma = Some(gamma);
        Ok(ch)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Damping strength for the built-in parameterized channels.
    pub fn gamma(&self) -> Option<f64> {
        self.gamma
    }

    pub fn local_dim(&self) -> usize {
        self.operators[0].rows()
    }
}

/// `sum_k (E_k (x) 1) rho (E_k (x) 1)^dagger`, mirrored for side B.
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    let dims = rho.dims();
    let local = match ch.side {
        Side::A => dims.a,
        Side::B => dims.b,
    };
    if ch.local_dim() != local {
        return Err(Error::Shape {
            op: "apply_channel",
            expected: (local, local),
            found: (ch.local_dim(), ch.local_dim()),
        });
    }
    let d = dims.total();
    let mut acc = ComplexMatrix::zeros(d, d);
    for e in &ch.operators {
        let lifted = match ch.side {
            Side::A => e.kron(&ComplexMatrix::identity(dims.b)),
            Side::B => ComplexMatrix::identity(dims.a).kron(e),
        };
        acc = &acc + &rho.matrix().conjugate_by(&lifted)?;
    }
    DensityMatrix::validate(acc, dims)
}
