//! Closed forms checked against brute-force searches and textbook routes
//! that share no code path with them.

use std::f64::consts::PI;

use cohcorr_core::coherence::contributions;
use cohcorr_core::discord::{basis_from_directions, discord_ab_analytic, discord_ba_analytic};
use cohcorr_core::eigen::{hermitian_eigen, sqrt_psd};
use cohcorr_core::entanglement::concurrence_mixed_2q;
use cohcorr_core::nonlocality::{v_measures_analytic, v_objective_bloch};
use cohcorr_core::pauli;
use cohcorr_core::random;
use cohcorr_core::{Dims, MeasurementDirection};

fn sphere_grid(n_theta: usize, n_phi: usize) -> Vec<MeasurementDirection> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..=n_theta {
        let theta = PI * i as f64 / n_theta as f64;
        for j in 0..n_phi {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let p = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            out.push(MeasurementDirection::normalized(p).unwrap());
        }
    }
    out
}

#[test]
fn one_sided_discords_against_direction_scan() {
    let grid = sphere_grid(90, 180);
    let z = MeasurementDirection::new([0.0, 0.0, 1.0]).unwrap();
    for seed in 0..6 {
        let rho = random::random_mixed(Dims::QUBITS, 4, 500 + seed).unwrap();
        let (ab, _) = discord_ab_analytic(&rho).unwrap();
        let (ba, _) = discord_ba_analytic(&rho).unwrap();
        let mut scan_ab = f64::INFINITY;
        let mut scan_ba = f64::INFINITY;
        for p in &grid {
            let c_ab = contributions(&rho, &basis_from_directions(p, &z)).unwrap().class1;
            let c_ba = contributions(&rho, &basis_from_directions(&z, p)).unwrap().class2;
            // The closed form is a lower bound for every measurement.
            assert!(ab <= c_ab + 1e-12 && ba <= c_ba + 1e-12);
            scan_ab = scan_ab.min(c_ab);
            scan_ba = scan_ba.min(c_ba);
        }
        assert!(scan_ab - ab < 1e-3, "seed {seed}: {scan_ab} vs {ab}");
        assert!(scan_ba - ba < 1e-3, "seed {seed}: {scan_ba} vs {ba}");
    }
}

#[test]
fn anti_diagonal_extremes_against_direction_scan() {
    let grid = sphere_grid(24, 48);
    for seed in 0..3 {
        let rho = random::random_mixed(Dims::QUBITS, 4, 900 + seed).unwrap();
        let (v, v_tilde) = v_measures_analytic(&rho).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for p1 in &grid {
            for p2 in &grid {
                let x = v_objective_bloch(&rho, p1, p2).unwrap();
                assert!(x >= v - 1e-12 && x <= v_tilde + 1e-12);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        assert!(lo - v < 5e-3 && v_tilde - hi < 5e-3, "seed {seed}");
    }
}

/// `sqrt(sqrt(rho) rho~ sqrt(rho))` route; fine when rho has full rank.
fn concurrence_textbook(rho: &cohcorr_core::DensityMatrix) -> f64 {
    let yy = pauli::sigma_y().kron(&pauli::sigma_y());
    let tilde = yy.multiply(&rho.matrix().conj()).unwrap().multiply(&yy).unwrap();
    let s = sqrt_psd(rho.matrix()).unwrap();
    let inner = s.multiply(&tilde).unwrap().multiply(&s).unwrap();
    let inner = &(&inner + &inner.adjoint()).scale_real(0.5);
    let l: Vec<f64> = hermitian_eigen(inner).unwrap().values.iter().map(|x| x.max(0.0).sqrt()).collect();
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[test]
fn concurrence_against_textbook_route() {
    for seed in 0..200 {
        let rho = random::random_mixed(Dims::QUBITS, 4, seed).unwrap();
        let c = concurrence_mixed_2q(&rho).unwrap();
        assert!((c - concurrence_textbook(&rho)).abs() < 1e-9, "seed {seed}");
    }
}
