//! Parameter sweeps over state families, written as CSV.

use std::fmt::Write as _;

use cohcorr_core::discord::{discord_ab_analytic, discord_ba_analytic};
use cohcorr_core::nonlocality::chsh_violation;
use cohcorr_core::state::make_werner;

use crate::error::CliError;
use crate::format::g12;

pub const HEADER: &str = "p,d_ab,d_ba,d_sym,v,v_tilde,horodecki_m,chsh_violated";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub p: f64,
    pub d_ab: f64,
    pub d_ba: f64,
    pub d_sym: f64,
    pub v: f64,
    pub v_tilde: f64,
    pub horodecki_m: f64,
    pub chsh_violated: bool,
}

/// Grid `lo + (hi - lo) * k / (steps - 1)` for `k = 0..steps`.
pub fn grid(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Usage(format!("sweep range needs lo < hi, got [{lo}, {hi}]")));
    }
    if steps < 2 {
        return Err(CliError::Usage(format!("sweep needs at least 2 steps, got {steps}")));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps)
        .map(|k| if k + 1 == steps { hi } else { lo + (hi - lo) * k as f64 / last })
        .collect())
}

/// Closed-form measures along the Werner family `p |Phi+><Phi+| + (1-p) I/4`.
pub fn werner_sweep(lo: f64, hi: f64, steps: usize) -> Result<Vec<SweepRow>, CliError> {
    grid(lo, hi, steps)?
        .into_iter()
        .map(|p| {
            let rho = make_werner(p)?;
            let d_ab = discord_ab_analytic(&rho)?.0;
            let d_ba = discord_ba_analytic(&rho)?.0;
            let chsh = chsh_violation(&rho)?;
            Ok(SweepRow {
                p,
                d_ab,
                d_ba,
                d_sym: d_ab + d_ba,
                v: chsh.v,
                v_tilde: chsh.v_tilde,
                horodecki_m: chsh.horodecki_m,
                chsh_violated: chsh.violates,
            })
        })
        .collect()
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            g12(r.p),
            g12(r.d_ab),
            g12(r.d_ba),
            g12(r.d_sym),
            g12(r.v),
            g12(r.v_tilde),
            g12(r.horodecki_m),
            r.chsh_violated
        );
    }
    out
}

/// Onset of CHSH violation: the crossing `horodecki_m = 1`, linearly
/// interpolated between the last satisfying row and the first violating
/// one. `None` if no row violates or the first row already does.
pub fn violation_onset(rows: &[SweepRow]) -> Option<f64> {
    let k = rows.iter().position(|r| r.chsh_violated)?;
    let (lo, hi) = (rows.get(k.checked_sub(1)?)?, &rows[k]);
    let t = (1.0 - lo.horodecki_m) / (hi.horodecki_m - lo.horodecki_m);
    Some(lo.p + t * (hi.p - lo.p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row_at(rows: &[SweepRow], p: f64) -> SweepRow {
        *rows.iter().find(|r| (r.p - p).abs() < 1e-12).unwrap()
    }

    #[test]
    fn werner_rows() {
        let rows = werner_sweep(0.0, 1.0, 101).unwrap();
        assert_eq!(rows.len(), 101);
        assert!(!row_at(&rows, 0.70).chsh_violated);
        assert!(row_at(&rows, 0.71).chsh_violated);
        let last = row_at(&rows, 1.0);
        assert!((last.d_sym - 1.0).abs() < 1e-14);
        assert!((last.v_tilde - 0.5).abs() < 1e-14);
        let first = rows[0];
        for x in [first.d_ab, first.d_ba, first.d_sym, first.v, first.v_tilde, first.horodecki_m] {
            assert_eq!(x, 0.0);
        }
        // p^2/2 for each one-sided discord of a Werner state.
        let mid = row_at(&rows, 0.5);
        assert!((mid.d_ab - 0.125).abs() < 1e-14 && (mid.d_ba - 0.125).abs() < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let csv = to_csv(&werner_sweep(0.0, 1.0, 3).unwrap());
        let lines: Vec<&str> = csv.split('\n').collect();
        assert_eq!(lines[0], HEADER);
        assert_eq!(lines[1], "0,0,0,0,0,0,0,false");
        assert_eq!(lines[2], "0.5,0.125,0.125,0.25,0.0625,0.125,0.5,false");
        assert_eq!(lines[3], "1,0.5,0.5,1,0.25,0.5,2,true");
        assert_eq!(lines[4], "");
        assert!(!csv.contains('\r'));
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn onset_brackets_threshold() {
        let onset = violation_onset(&werner_sweep(0.0, 1.0, 1001).unwrap()).unwrap();
        assert!(onset > 0.7071 && onset < 0.7072, "{onset}");
        assert!(violation_onset(&werner_sweep(0.0, 0.5, 11).unwrap()).is_none());
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(werner_sweep(0.5, 0.5, 10).is_err());
        assert!(werner_sweep(0.0, 1.0, 1).is_err());
        assert!(werner_sweep(0.0, 1.5, 3).is_err());
    }
}
