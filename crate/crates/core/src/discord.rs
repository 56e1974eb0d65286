//! Geometric discords as minimized Class I / Class II coherence.
//!
//! For two qubits the one-sided values have closed forms in the Bloch data,
//! `D_[A|B] = (|x|^2 + |T|^2 - lambda_max(x x^t + T T^t)) / 4` and the mirror
//! image for `D_[B|A]`. The two-sided discord has no closed form and is only
//! computed numerically.

use crate::bloch::{norm_sq, BlochRep};
use crate::coherence::{LocalBasisPair, Objective};
use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::optimize::{minimize_over_bases, BasisOptimum, OptimizerConfig, OptimizerDiagnostics};
use crate::real;
use crate::state::DensityMatrix;
use crate::Method;

use num_complex::Complex64 as C64;

/// Bloch direction of the first projector of an optimal local measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementDirection {
    p: [f64; 3],
}

impl MeasurementDirection {
    pub const UNIT_TOLERANCE: f64 = 1e-12;

    pub fn new(p: [f64; 3]) -> Result<Self> {
        let norm = real::sqrt(norm_sq(&p));
        if norm.is_nan() || (norm - 1.0).abs() > Self::UNIT_TOLERANCE {
            return Err(Error::NonUnitDirection { norm });
        }
        Ok(MeasurementDirection { p })
    }

    /// Scales a nonzero vector to unit length.
    pub fn normalized(p: [f64; 3]) -> Result<Self> {
        let norm = real::sqrt(norm_sq(&p));
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::NonUnitDirection { norm });
        }
        Self::new([p[0] / norm, p[1] / norm, p[2] / norm])
    }

    pub fn vector(&self) -> [f64; 3] {
        self.p
    }

    /// Columns `|psi(p)>`, `|psi(-p)>`; the `+z` direction gives the
    /// computational basis exactly.
    pub fn basis_vectors(&self) -> ComplexMatrix {
        let [x, y, z] = self.p;
        let theta = real::acos(z.clamp(-1.0, 1.0));
        let phi = real::atan2(y, x);
        let (c, s) = (real::cos(theta / 2.0), real::sin(theta / 2.0));
        let e = C64::new(real::cos(phi), real::sin(phi));
        let mut m = ComplexMatrix::zeros(2, 2);
        m[(0, 0)] = C64::new(c, 0.0);
        m[(1, 0)] = e * s;
        m[(0, 1)] = -e.conj() * s;
        m[(1, 1)] = C64::new(c, 0.0);
        m
    }
}

fn require_qubits(rho: &DensityMatrix, what: &'static str) -> Result<BlochRep> {
    if !rho.dims().is_qubits() {
        return Err(Error::UnsupportedDims {
            dims: rho.dims(),
            reason: what,
        });
    }
    BlochRep::decompose(rho)
}

/// Top eigenpair of a symmetric 3x3 matrix. Within a degenerate top
/// eigenspace the lexicographically largest sign-normalized eigenvector wins.
pub(crate) fn top_eigenpair(m: &[f64; 9]) -> Result<(f64, [f64; 3])> {
    let (values, vectors) = symmetric_eigen(3, m)?;
    let top = values[0];
    let scale = top.abs().max(1.0);
    let mut best: Option<[f64; 3]> = None;
    for (k, v) in vectors.iter().enumerate() {
        if top - values[k] > 1e-12 * scale {
            break;
        }
        let mut u = [v[0], v[1], v[2]];
        if let Some(first) = u.iter().find(|c| c.abs() > 1e-12) {
            if *first < 0.0 {
                u.iter_mut().for_each(|c| *c = -*c);
            }
        }
        let larger = match best {
            None => true,
            Some(b) => u.iter().zip(&b).find(|(a, b)| (*a - *b).abs() > 1e-12).is_some_and(|(a, b)| a > b),
        };
        if larger {
            best = Some(u);
        }
    }
    Ok((top, best.expect("three eigenvectors")))
}

fn one_sided(local: &[f64; 3], corr: [f64; 9], t_norm_sq: f64) -> Result<(f64, MeasurementDirection)> {
    let mut m = corr;
    for i in 0..3 {
        for j in 0..3 {
            m[i * 3 + j] += local[i] * local[j];
        }
    }
    let (lambda_max, dir) = top_eigenpair(&m)?;
    let value = ((norm_sq(local) + t_norm_sq - lambda_max) / 4.0).max(0.0);
    Ok((value, MeasurementDirection::normalized(dir)?))
}

/// `D_[A|B]` of a two-qubit state with the optimal measurement direction on A.
pub fn discord_ab_analytic(rho: &DensityMatrix) -> Result<(f64, MeasurementDirection)> {
    let b = require_qubits(rho, "closed-form discord needs two qubits")?;
    one_sided(&b.x, b.t_tt(), b.t_norm_sq())
}

/// `D_[B|A]` of a two-qubit state with the optimal measurement direction on B.
pub fn discord_ba_analytic(rho: &DensityMatrix) -> Result<(f64, MeasurementDirection)> {
    let b = require_qubits(rho, "closed-form discord needs two qubits")?;
    one_sided(&b.y, b.tt_t(), b.t_norm_sq())
}

pub fn discord_ab_numeric(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    minimize_over_bases(rho, Objective::Class1, cfg)
}

pub fn discord_ba_numeric(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    minimize_over_bases(rho, Objective::Class2, cfg)
}

/// `D = D_[A|B] + D_[B|A]`; the numeric route runs the two minimizations
/// separately since the A and B frames decouple.
pub fn discord_symmetric(rho: &DensityMatrix, method: Method, cfg: &OptimizerConfig) -> Result<f64> {
    match method {
        Method::Analytic => Ok(discord_ab_analytic(rho)?.0 + discord_ba_analytic(rho)?.0),
        Method::Numeric => Ok(discord_ab_numeric(rho, cfg)?.value + discord_ba_numeric(rho, cfg)?.value),
    }
}

/// `D~`, the two-side geometric discord: minimized `tilde_total`.
pub fn discord_two_side(rho: &DensityMatrix, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    minimize_over_bases(rho, Objective::TildeTotal, cfg)
}

/// Product frame measuring along the two given Bloch directions.
pub fn basis_from_directions(p_a: &MeasurementDirection, p_b: &MeasurementDirection) -> LocalBasisPair {
    LocalBasisPair::from_basis_vectors(&p_a.basis_vectors(), &p_b.basis_vectors())
        .expect("direction bases are unitary")
}

#[derive(Debug, Clone)]
pub struct DiscordReport {
    pub d_ab: f64,
    pub d_ba: f64,
    pub d_sym: f64,
    pub d_tilde: f64,
    /// Route used for `d_ab`, `d_ba` and `d_sym`; `d_tilde` is always numeric.
    pub method: Method,
    pub one_sided_diagnostics: Option<(OptimizerDiagnostics, OptimizerDiagnostics)>,
    pub tilde_diagnostics: OptimizerDiagnostics,
}

impl DiscordReport {
    /// `max(d_ab, d_ba) <= d_tilde <= d_ab + d_ba` up to `tol`.
    pub fn sandwich_holds(&self, tol: f64) -> bool {
        self.d_ab.max(self.d_ba) <= self.d_tilde + tol && self.d_tilde <= self.d_sym + tol
    }
}

/// All discord measures of `rho`. An analytic request on anything but two
/// qubits is served numerically and tagged as such.
pub fn discord_report(rho: &DensityMatrix, method: Method, cfg: &OptimizerConfig) -> Result<DiscordReport> {
    let method = if rho.dims().is_qubits() { method } else { Method::Numeric };
    let (d_ab, d_ba, one_sided_diagnostics) = match method {
        Method::Analytic => (discord_ab_analytic(rho)?.0, discord_ba_analytic(rho)?.0, None),
        Method::Numeric => {
            let ab = discord_ab_numeric(rho, cfg)?;
            let ba = discord_ba_numeric(rho, cfg)?;
            (ab.value, ba.value, Some((ab.diagnostics, ba.diagnostics)))
        }
    };
    let tilde = discord_two_side(rho, cfg)?;
    Ok(DiscordReport {
        d_ab,
        d_ba,
        d_sym: d_ab + d_ba,
        d_tilde: tilde.value,
        method,
        one_sided_diagnostics,
        tilde_diagnostics: tilde.diagnostics,
    })
}
