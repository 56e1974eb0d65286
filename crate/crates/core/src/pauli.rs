//! Pauli matrices.

use num_complex::Complex64 as C64;

use crate::matrix::ComplexMatrix;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_vec_unchecked(2, 2, alloc::vec![ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_vec_unchecked(2, 2, alloc::vec![ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_vec_unchecked(2, 2, alloc::vec![ONE, ZERO, ZERO, -ONE])
}

/// `[1, sigma_x, sigma_y, sigma_z]`
pub fn all() -> [ComplexMatrix; 4] {
    [ComplexMatrix::identity(2), sigma_x(), sigma_y(), sigma_z()]
}

/// The three Pauli matrices with the identity, built once.
#[derive(Debug, Clone)]
pub struct PauliBasis {
    pub identity: ComplexMatrix,
    pub sigma: [ComplexMatrix; 3],
}

impl PauliBasis {
    pub fn new() -> Self {
        PauliBasis {
            identity: ComplexMatrix::identity(2),
            sigma: [sigma_x(), sigma_y(), sigma_z()],
        }
    }
}

impl Default for PauliBasis {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra() {
        let p = PauliBasis::new();
        for s in &p.sigma {
            assert_eq!(s * s, p.identity);
            assert_eq!(s.trace(), ZERO);
            assert_eq!(s.hermitian_deviation(), 0.0);
        }
        // sigma_i sigma_j = i sigma_k, cyclic
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            let lhs = &p.sigma[a] * &p.sigma[b];
            assert_eq!(lhs, p.sigma[c].scale(I));
        }
    }
}
