//! Class III (anti-diagonal) coherence and the CHSH criterion for two qubits.
//!
//! With `s1 >= s2 >= s3` the singular values of the correlation tensor,
//! the extremes of the anti-diagonal contribution over product frames are
//! `V = s3^2 / 4` and `V~ = (s1^2 + s2^2) / 4`, so `V + V~ = |T|^2 / 4` and
//! `V~ > 1/4` is exactly the Horodecki condition for violating CHSH.

use crate::bloch::BlochRep;
use crate::coherence::Objective;
use crate::discord::{basis_from_directions, MeasurementDirection};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::coherence::LocalBasisPair;
use crate::optimize::{maximize_over_bases, minimize_over_bases, OptimizerConfig, OptimizerDiagnostics};
use crate::real;
use crate::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationSpectrum {
    /// Singular values of `T`, descending.
    pub singular_values: [f64; 3],
    pub t_norm_sq: f64,
}

impl CorrelationSpectrum {
    /// Horodecki `m = s1^2 + s2^2`.
    pub fn horodecki_m(&self) -> f64 {
        let [s1, s2, _] = self.singular_values;
        s1 * s1 + s2 * s2
    }

    /// Smallest eigenvalue of `T T^t`.
    pub fn min_eigenvalue(&self) -> f64 {
        let s3 = self.singular_values[2];
        s3 * s3
    }
}

fn bloch_of(rho: &DensityMatrix) -> Result<BlochRep> {
    if !rho.dims().is_qubits() {
        return Err(Error::UnsupportedDims {
            dims: rho.dims(),
            reason: "correlation tensor needs two qubits",
        });
    }
    BlochRep::decompose(rho)
}

pub fn correlation_spectrum(rho: &DensityMatrix) -> Result<CorrelationSpectrum> {
    let b = bloch_of(rho)?;
    let (values, _) = symmetric_eigen(3, &b.t_tt())?;
    let mut singular_values = [0.0; 3];
    for (s, &l) in singular_values.iter_mut().zip(&values) {
        *s = real::sqrt(l.max(0.0));
    }
    Ok(CorrelationSpectrum {
        singular_values,
        t_norm_sq: b.t_norm_sq(),
    })
}

/// `(V, V~)` in closed form.
pub fn v_measures_analytic(rho: &DensityMatrix) -> Result<(f64, f64)> {
    let s = correlation_spectrum(rho)?;
    Ok((s.min_eigenvalue() / 4.0, s.horodecki_m() / 4.0))
}

/// `(|T|^2 - p1^t T T^t p1 - p2^t T^t T p2 + (p1^t T p2)^2) / 4`, the
/// anti-diagonal contribution when A is measured along `p1` and B along `p2`.
pub fn v_objective_bloch(rho: &DensityMatrix, p1: &MeasurementDirection, p2: &MeasurementDirection) -> Result<f64> {
    let b = bloch_of(rho)?;
    let (a, c) = (p1.vector(), p2.vector());
    let mut t_c = [0.0; 3]; // T p2
    let mut tt_a = [0.0; 3]; // T^t p1
    for i in 0..3 {
        for j in 0..3 {
            t_c[i] += b.t[i][j] * c[j];
            tt_a[j] += b.t[i][j] * a[i];
        }
    }
    let cross: f64 = (0..3).map(|i| a[i] * t_c[i]).sum();
    let norm = |v: &[f64; 3]| v.iter().map(|x| x * x).sum::<f64>();
    Ok((b.t_norm_sq() - norm(&tt_a) - norm(&t_c) + cross * cross) / 4.0)
}

/// Product frame measuring A along `p1` and B along `p2`.
pub fn basis_for_directions(p1: &MeasurementDirection, p2: &MeasurementDirection) -> LocalBasisPair {
    basis_from_directions(p1, p2)
}

#[derive(Debug, Clone, Copy)]
pub struct VMeasures {
    pub v: f64,
    pub v_tilde: f64,
    pub min_diagnostics: OptimizerDiagnostics,
    pub max_diagnostics: OptimizerDiagnostics,
    /// Set when the state is not two qubits: no closed form or criterion
    /// backs the values.
    pub exploratory: bool,
}

/// `V` and `V~` by direct minimization and maximization of the Class III
/// contribution; works for any local dimensions.
pub fn v_measures_numeric(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<VMeasures> {
    let lo = minimize_over_bases(rho, Objective::Class3, cfg)?;
    let hi = maximize_over_bases(rho, Objective::Class3, cfg)?;
    Ok(VMeasures {
        v: lo.value,
        v_tilde: hi.value,
        min_diagnostics: lo.diagnostics,
        max_diagnostics: hi.diagnostics,
        exploratory: !rho.dims().is_qubits(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChshReport {
    pub violates: bool,
    pub horodecki_m: f64,
    pub v: f64,
    pub v_tilde: f64,
    pub t_norm_sq: f64,
}

/// CHSH violation decided through `V~ > 1/4`, equivalently `m > 1`.
pub fn chsh_violation(rho: &DensityMatrix) -> Result<ChshReport> {
    let s = correlation_spectrum(rho)?;
    let (v, v_tilde) = (s.min_eigenvalue() / 4.0, s.horodecki_m() / 4.0);
    let violates = s.horodecki_m() > 1.0;
    debug_assert!(!violates || v < (s.t_norm_sq - 1.0) / 4.0 + 1e-12);
    Ok(ChshReport {
        violates,
        horodecki_m: s.horodecki_m(),
        v,
        v_tilde,
        t_norm_sq: s.t_norm_sq,
    })
}
