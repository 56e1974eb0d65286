//! Multi-start Nelder-Mead search over local product bases.
//!
//! Each restart draws generator coefficients uniformly from `[-pi, pi]`
//! using a generator seeded with `seed + restart`, runs an adaptive simplex
//! descent and re-seeds the simplex at its best vertex until a run stops
//! improving. The best restart wins; ties go to the lowest restart index, so
//! results are bit-for-bit reproducible.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;

use crate::coherence::{contributions_of_matrix, rotate_raw, LocalBasisPair, Objective};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::random;
use crate::state::{DensityMatrix, Dims};
use crate::unitary::{coefficient_count, unitary_from_coefficients, UnitaryParameters};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Simplex iterations allowed per restart.
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: 32,
            max_iterations: 2000,
            objective_tolerance: 1e-9,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iterations == 0 {
            return Err(Error::InvalidParameter {
                name: "optimizer",
                reason: "restarts and max_iterations must be positive",
            });
        }
        if self.objective_tolerance.is_nan() || self.objective_tolerance <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "objective_tolerance",
                reason: "tolerance must be positive",
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OptimizerDiagnostics {
    /// Whether the winning restart met the tolerance within its budget.
    pub converged: bool,
    /// Restarts that met the tolerance.
    pub converged_restarts: usize,
    pub restarts: usize,
    pub best_restart: usize,
    pub iterations: usize,
    pub evaluations: usize,
}

/// Outcome of a single simplex descent.
#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Adaptive Nelder-Mead: coefficients scale with the dimension, which keeps
/// the simplex from collapsing in the 8-18 parameter problems seen here.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, max_iterations: usize, tol: f64) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let nf = n as f64;
    let (alpha, beta, gamma, delta) = if n >= 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut evaluations = 0;
    let mut eval = |x: &[f64], evaluations: &mut usize| {
        *evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    points.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        points.push(p);
    }
    let mut values: Vec<f64> = points.iter().map(|p| eval(p, &mut evaluations)).collect();
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iterations {
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
        let best = order[0];
        let worst = order[n];
        let second = order[n.saturating_sub(1)];
        if (values[worst] - values[best]).abs() <= tol {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &idx in &order[..n] {
            for (c, x) in centroid.iter_mut().zip(&points[idx]) {
                *c += x / nf;
            }
        }

        for k in 0..n {
            trial[k] = centroid[k] + alpha * (centroid[k] - points[worst][k]);
        }
        let fr = eval(&trial, &mut evaluations);

        if fr < values[best] {
            for k in 0..n {
                trial2[k] = centroid[k] + beta * (trial[k] - centroid[k]);
            }
            let fe = eval(&trial2, &mut evaluations);
            if fe < fr {
                points[worst].copy_from_slice(&trial2);
                values[worst] = fe;
            } else {
                points[worst].copy_from_slice(&trial);
                values[worst] = fr;
            }
            continue;
        }
        if fr < values[second] {
            points[worst].copy_from_slice(&trial);
            values[worst] = fr;
            continue;
        }
        let outside = fr < values[worst];
        for k in 0..n {
            trial2[k] = if outside {
                centroid[k] + gamma * (trial[k] - centroid[k])
            } else {
                centroid[k] - gamma * (centroid[k] - points[worst][k])
            };
        }
        let fc = eval(&trial2, &mut evaluations);
        let accept = if outside { fc <= fr } else { fc < values[worst] };
        if accept {
            points[worst].copy_from_slice(&trial2);
            values[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        let anchor = points[best].clone();
        for &idx in &order[1..] {
            for (p, a) in points[idx].iter_mut().zip(&anchor) {
                *p = a + delta * (*p - a);
            }
            values[idx] = eval(&points[idx], &mut evaluations);
        }
    }

    let best = (0..=n)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)))
        .unwrap_or(0);
    SimplexResult {
        x: points.swap_remove(best),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

const INITIAL_STEP: f64 = 0.6;
const MAX_POLISH_ROUNDS: usize = 6;

/// Descends from `x0`, then restarts the simplex at the incumbent with a
/// smaller step while that still improves by more than the tolerance. The
/// rounds share one iteration budget.
pub fn polished_descent<F>(mut f: F, x0: &[f64], max_iterations: usize, tol: f64) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let mut step = INITIAL_STEP;
    let mut out = nelder_mead(&mut f, x0, step, max_iterations, tol);
    for _ in 0..MAX_POLISH_ROUNDS {
        if !out.converged || out.iterations >= max_iterations {
            break;
        }
        step *= 0.25;
        let budget = max_iterations - out.iterations;
        let next = nelder_mead(&mut f, &out.x, step, budget, tol);
        let improvement = out.value - next.value;
        out.iterations += next.iterations;
        out.evaluations += next.evaluations;
        out.converged = next.converged;
        if next.value < out.value {
            out.x = next.x;
            out.value = next.value;
        }
        if improvement <= tol {
            break;
        }
    }
    out
}

/// Best point over `cfg.restarts` independent descents.
pub fn multi_start<F>(mut f: F, dim: usize, cfg: &OptimizerConfig) -> Result<(Vec<f64>, f64, OptimizerDiagnostics)>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    let mut diag = OptimizerDiagnostics {
        restarts: cfg.restarts,
        ..Default::default()
    };
    let mut best: Option<(Vec<f64>, f64)> = None;
    for restart in 0..cfg.restarts {
        let mut rng = random::rng(cfg.seed.wrapping_add(restart as u64));
        let x0: Vec<f64> = (0..dim).map(|_| rng.random_range(-PI..PI)).collect();
        let run = polished_descent(&mut f, &x0, cfg.max_iterations, cfg.objective_tolerance);
        diag.iterations += run.iterations;
        diag.evaluations += run.evaluations;
        if run.converged {
            diag.converged_restarts += 1;
        }
        let better = best.as_ref().is_none_or(|(_, v)| run.value < *v);
        if better {
            diag.best_restart = restart;
            diag.converged = run.converged;
            best = Some((run.x, run.value));
        }
    }
    let (x, v) = best.expect("at least one restart");
    Ok((x, v, diag))
}

/// Extremum of one contribution over local bases.
#[derive(Debug, Clone)]
pub struct BasisOptimum {
    pub value: f64,
    pub basis: LocalBasisPair,
    pub parameters: UnitaryParameters,
    pub diagnostics: OptimizerDiagnostics,
}

fn split_parameters(dims: Dims, objective: Objective, x: &[f64]) -> (ComplexMatrix, ComplexMatrix) {
    let (vary_a, vary_b) = objective.varies();
    let na = if vary_a { coefficient_count(dims.a) } else { 0 };
    let u_a = if vary_a {
        unitary_from_coefficients(dims.a, &x[..na])
    } else {
        ComplexMatrix::identity(dims.a)
    };
    let u_b = if vary_b {
        unitary_from_coefficients(dims.b, &x[na..])
    } else {
        ComplexMatrix::identity(dims.b)
    };
    (u_a, u_b)
}

fn parameter_count(dims: Dims, objective: Objective) -> usize {
    let (vary_a, vary_b) = objective.varies();
    let mut n = 0;
    if vary_a {
        n += coefficient_count(dims.a);
    }
    if vary_b {
        n += coefficient_count(dims.b);
    }
    n
}

fn optimize(rho: &DensityMatrix, objective: Objective, cfg: &OptimizerConfig, sign: f64) -> Result<BasisOptimum> {
    let dims = rho.dims();
    let dim = parameter_count(dims, objective);
    let m = rho.matrix();
    let eval = |x: &[f64]| {
        let (u_a, u_b) = split_parameters(dims, objective, x);
        sign * contributions_of_matrix(&rotate_raw(m, &u_a, &u_b), dims).get(objective)
    };
    let (x, value, diagnostics) = multi_start(eval, dim, cfg)?;
    let (u_a, u_b) = split_parameters(dims, objective, &x);
    Ok(BasisOptimum {
        value: (sign * value).max(0.0),
        basis: LocalBasisPair::from_parts_unchecked(u_a, u_b),
        parameters: UnitaryParameters { angles: x },
        diagnostics,
    })
}

/// `min_{U_A, U_B}` of the chosen contribution.
pub fn minimize_over_bases(rho: &DensityMatrix, objective: Objective, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    optimize(rho, objective, cfg, 1.0)
}

/// `max_{U_A, U_B}` of the chosen contribution.
pub fn maximize_over_bases(rho: &DensityMatrix, objective: Objective, cfg: &OptimizerConfig) -> Result<BasisOptimum> {
    optimize(rho, objective, cfg, -1.0)
}
