//! Seeded random states and unitaries.
//!
//! Pure states are Haar distributed (normalized complex Gaussian vectors),
//! mixed states follow the Hilbert-Schmidt/Ginibre construction `G G^dagger / tr`.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{orthonormal_completion, ComplexMatrix};
use crate::state::{DensityMatrix, Dims, PureState};

/// The generator used throughout: deterministic and platform independent.
pub type StateRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StateRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_pure(dims: Dims, seed: u64) -> PureState {
    random_pure_with(dims, &mut rng(seed))
}

pub fn random_pure_with<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    loop {
        if let Ok(psi) = PureState::normalized(dims, gaussian_vector(rng, dims.total())) {
            return psi;
        }
    }
}

pub fn random_mixed(dims: Dims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_with(dims, rank, &mut rng(seed))
}

pub fn random_mixed_with<R: Rng + ?Sized>(dims: Dims, rank: usize, rng: &mut R) -> Result<DensityMatrix> {
    let d = dims.total();
    if rank == 0 || rank > d {
        return Err(Error::InvalidParameter {
            name: "rank",
            reason: "rank must lie in 1..=m*n",
        });
    }
    let g = ComplexMatrix::from_vec_unchecked(d, rank, gaussian_vector(rng, d * rank));
    let ggd = g.mul_adjoint(&g);
    let tr = ggd.trace().re;
    // hermitize exactly; the product is only Hermitian up to roundoff
    let rho = ComplexMatrix::from_fn(d, d, |i, j| {
        if i <= j {
            ggd[(i, j)] / tr
        } else {
            ggd[(j, i)].conj() / tr
        }
    });
    DensityMatrix::validate(rho, dims)
}

/// Haar-random `d x d` unitary via Gram-Schmidt on a Ginibre matrix.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let cols: Vec<Vec<C64>> = (0..d).map(|_| gaussian_vector(rng, d)).collect();
    orthonormal_completion(&cols, d)
}

/// A product of two Haar-random local pure states.
pub fn random_product_pure<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> PureState {
    loop {
        let a = gaussian_vector(rng, dims.a);
        let b = gaussian_vector(rng, dims.b);
        if let Ok(psi) = PureState::product(&a, &b) {
            return psi;
        }
    }
}

/// `sum p_ij U_A|i><i|U_A^dagger (x) U_B|j><j|U_B^dagger` with random
/// probabilities and Haar-random local bases: a classically correlated state.
pub fn random_classical<R: Rng + ?Sized>(dims: Dims, rng: &mut R) -> DensityMatrix {
    let d = dims.total();
    let weights: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let diag: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let u_a = haar_unitary(dims.a, rng);
    let u_b = haar_unitary(dims.b, rng);
    let w = u_a.kron(&u_b);
    let rho = w.matmul(&ComplexMatrix::from_diag(&diag)).mul_adjoint(&w);
    let rho = ComplexMatrix::from_fn(d, d, |i, j| {
        if i <= j {
            rho[(i, j)]
        } else {
            rho[(j, i)].conj()
        }
    });
    DensityMatrix::from_trusted(rho, dims)
}
