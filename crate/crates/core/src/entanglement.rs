//! Concurrence and the coherence monogamy relations.
//!
//! `script_d` is the fixed computational-basis total `C_Total`, never
//! minimized; it must not be confused with the minimized symmetric discord.

use alloc::vec::Vec;

use num_complex::Complex64 as C64;

use crate::coherence::{contributions_of_matrix, offdiagonal_sq};
use crate::eigen::hermitian_eigen;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Side};
use crate::pauli;
use crate::random;
use crate::real;
use crate::state::{DensityMatrix, PureState};

/// `2 sqrt(sum_{i<j, k<l} |a_ik a_jl - a_il a_jk|^2)`
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let dims = psi.dims();
    let mut acc = 0.0;
    for i in 0..dims.a {
        for j in (i + 1)..dims.a {
            for k in 0..dims.b {
                for l in (k + 1)..dims.b {
                    let minor = psi.amplitude(i, k) * psi.amplitude(j, l) - psi.amplitude(i, l) * psi.amplitude(j, k);
                    acc += minor.norm_sqr();
                }
            }
        }
    }
    2.0 * real::sqrt(acc)
}

/// Two-qubit concurrence `max(0, l1 - l2 - l3 - l4)` where `l_i` are the
/// square roots of the eigenvalues of `sqrt(rho) rho~ sqrt(rho)` and
/// `rho~ = (s_y s_y) rho* (s_y s_y)`.
///
/// The spectrum is taken from `tau tau^dagger` with `tau = W^t Y W`, where
/// the columns of `W` are the weighted eigenvectors `sqrt(p_i) |e_i>`; it
/// coincides with the nonzero spectrum above but avoids square roots of the
/// roundoff-level eigenvalues of a rank-deficient `rho`.
pub fn concurrence_mixed_2q(rho: &DensityMatrix) -> Result<f64> {
    if !rho.dims().is_qubits() {
        return Err(Error::UnsupportedDims {
            dims: rho.dims(),
            reason: "mixed-state concurrence is implemented for two qubits",
        });
    }
    let yy = pauli::sigma_y().kron(&pauli::sigma_y());
    let eig = hermitian_eigen(rho.matrix())?;
    let columns: Vec<Vec<C64>> = (0..4)
        .filter(|&k| eig.values[k] > RANK_CUTOFF)
        .map(|k| {
            let w = real::sqrt(eig.values[k]);
            eig.vector(k).into_iter().map(|z| z * w).collect()
        })
        .collect();
    if columns.is_empty() {
        return Ok(0.0);
    }
    let w = ComplexMatrix::from_columns(&columns)?;
    let tau = &(&w.transpose() * &yy) * &w;
    let h = tau.mul_adjoint(&tau);
    let spectrum = hermitian_eigen(&(&h + &h.adjoint()).scale_real(0.5))?;
    let mut l = [0.0; 4];
    for (slot, &m) in l.iter_mut().zip(&spectrum.values) {
        *slot = real::sqrt(m.max(0.0));
    }
    Ok((l[0] - l[1] - l[2] - l[3]).max(0.0))
}

const RANK_CUTOFF: f64 = 1e-14;

/// `C_Total` of a bipartite state in the computational basis.
pub fn script_d(rho: &DensityMatrix) -> f64 {
    contributions_of_matrix(rho.matrix(), rho.dims()).total
}

/// `sum_{j != k} |m_jk|^2` for a single-system matrix.
pub fn script_d_local(m: &ComplexMatrix) -> f64 {
    offdiagonal_sq(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonogamyReport {
    pub c_squared: f64,
    pub d_total: f64,
    pub d_local_a: f64,
    pub d_local_b: f64,
    /// `d_total - d_local_a - d_local_b - c_squared`; zero for pure states.
    pub residual: f64,
}

/// Evaluates both sides of `C^2 = D(rho_AB) - D(rho_A) - D(rho_B)`.
pub fn monogamy_check(psi: &PureState) -> MonogamyReport {
    let c = concurrence_pure(psi);
    let rho = psi.density();
    let d_total = script_d(&rho);
    let d_local_a = script_d_local(&rho.reduced(Side::A));
    let d_local_b = script_d_local(&rho.reduced(Side::B));
    MonogamyReport {
        c_squared: c * c,
        d_total,
        d_local_a,
        d_local_b,
        residual: d_total - d_local_a - d_local_b - c * c,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedMonogamyReport {
    /// `C^2(rho) + D(rho_A) + D(rho_B)`
    pub lhs: f64,
    /// `sum_i p_i D(phi_i)` for each sampled decomposition.
    pub rhs_samples: Vec<f64>,
    pub holds: bool,
}

impl MixedMonogamyReport {
    pub fn min_rhs(&self) -> f64 {
        self.rhs_samples.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub const MIXED_MONOGAMY_SLACK: f64 = 1e-9;

/// Checks the mixed-state monogamy inequality against sampled pure-state
/// decompositions. Sample 0 is the eigen-ensemble; the rest mix the
/// weighted eigenvectors `sqrt(l_i) |e_i>` with Haar-random unitaries.
/// Every decomposition's average bounds the true minimum from above, so
/// `lhs <= rhs` must hold for each one.
pub fn corollary1_check(rho: &DensityMatrix, decomposition_samples: usize, seed: u64) -> Result<MixedMonogamyReport> {
    let c = concurrence_mixed_2q(rho)?;
    if decomposition_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "decomposition_samples",
            reason: "at least one decomposition is needed",
        });
    }
    let lhs = c * c + script_d_local(&rho.reduced(Side::A)) + script_d_local(&rho.reduced(Side::B));

    let dims = rho.dims();
    let d = dims.total();
    let eig = hermitian_eigen(rho.matrix())?;
    let weighted: Vec<Vec<C64>> = (0..d)
        .map(|k| {
            let w = real::sqrt(eig.values[k].max(0.0));
            eig.vector(k).into_iter().map(|z| z * w).collect()
        })
        .collect();

    let mut rng = random::rng(seed);
    let mut rhs_samples = Vec::with_capacity(decomposition_samples);
    for sample in 0..decomposition_samples {
        let mixing = if sample == 0 {
            ComplexMatrix::identity(d)
        } else {
            random::haar_unitary(d, &mut rng)
        };
        let mut avg = 0.0;
        for j in 0..d {
            let mut u = alloc::vec![C64::new(0.0, 0.0); d];
            for (i, w) in weighted.iter().enumerate() {
                let coeff = mixing[(j, i)];
                for (ui, wi) in u.iter_mut().zip(w) {
                    *ui += coeff * wi;
                }
            }
            let p: f64 = u.iter().map(|z| z.norm_sqr()).sum();
            if p < 1e-15 {
                continue;
            }
            let phi = PureState::normalized(dims, u)?;
            avg += p * script_d(&phi.density());
        }
        rhs_samples.push(avg);
    }
    let holds = rhs_samples.iter().all(|&r| lhs <= r + MIXED_MONOGAMY_SLACK);
    Ok(MixedMonogamyReport { lhs, rhs_samples, holds })
}
