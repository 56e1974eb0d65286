//! Single-state analysis behind `cohcorr analyze`.

use std::fmt::Write as _;

use clap::ValueEnum;
use cohcorr_core::discord::{
    discord_ab_analytic, discord_ab_numeric, discord_ba_analytic, discord_ba_numeric, discord_two_side,
};
use cohcorr_core::entanglement::{concurrence_mixed_2q, concurrence_pure, script_d, script_d_local};
use cohcorr_core::nonlocality::{chsh_violation, v_measures_numeric, VMeasures};
use cohcorr_core::optimize::BasisOptimum;
use cohcorr_core::{DensityMatrix, Error, Method, OptimizerConfig, OptimizerDiagnostics, Side};
use serde::Serialize;

use crate::error::CliError;
use crate::format::g12;

/// Purity slack for treating an input as a pure state.
pub const PURITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    #[value(name = "d_ab")]
    DAb,
    #[value(name = "d_ba")]
    DBa,
    #[value(name = "d_sym")]
    DSym,
    #[value(name = "d_tilde")]
    DTilde,
    #[value(name = "v")]
    V,
    #[value(name = "v_tilde")]
    VTilde,
    Chsh,
    Concurrence,
    Monogamy,
}

impl Measure {
    pub const ALL: [Measure; 9] = [
        Measure::DAb,
        Measure::DBa,
        Measure::DSym,
        Measure::DTilde,
        Measure::V,
        Measure::VTilde,
        Measure::Chsh,
        Measure::Concurrence,
        Measure::Monogamy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Measure::DAb => "d_ab",
            Measure::DBa => "d_ba",
            Measure::DSym => "d_sym",
            Measure::DTilde => "d_tilde",
            Measure::V => "v",
            Measure::VTilde => "v_tilde",
            Measure::Chsh => "chsh",
            Measure::Concurrence => "concurrence",
            Measure::Monogamy => "monogamy",
        }
    }

    /// Measures whose closed form does not need two qubits.
    fn analytic_any_dims(self) -> bool {
        matches!(self, Measure::Concurrence | Measure::Monogamy)
    }

    /// Measures that only have a closed form (or only an optimizer route).
    fn routes(self) -> (bool, bool) {
        match self {
            Measure::Concurrence | Measure::Monogamy => (true, false),
            Measure::DTilde => (false, true),
            _ => (true, true),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum MethodChoice {
    #[default]
    Analytic,
    Numeric,
    Both,
}

#[derive(Debug, Clone)]
pub struct AnalyzeRequest {
    pub measures: Vec<Measure>,
    pub method: MethodChoice,
    pub optimizer: OptimizerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub measure: &'static str,
    pub method: &'static str,
    pub value: f64,
    /// CHSH verdict; only set for `chsh`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violates: Option<bool>,
    /// Optimizer convergence; `None` for closed forms.
    pub converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub dims: [usize; 2],
    pub records: Vec<Record>,
}

const NOT_CONVERGED: &str = "optimizer did not reach tolerance";

/// Optimizer results shared between measures.
struct Cache<'a> {
    rho: &'a DensityMatrix,
    cfg: OptimizerConfig,
    ab: Option<BasisOptimum>,
    ba: Option<BasisOptimum>,
    v: Option<VMeasures>,
}

impl Cache<'_> {
    fn ab(&mut self) -> Result<&BasisOptimum, Error> {
        if self.ab.is_none() {
            self.ab = Some(discord_ab_numeric(self.rho, &self.cfg)?);
        }
        Ok(self.ab.as_ref().expect("filled"))
    }

    fn ba(&mut self) -> Result<&BasisOptimum, Error> {
        if self.ba.is_none() {
            self.ba = Some(discord_ba_numeric(self.rho, &self.cfg)?);
        }
        Ok(self.ba.as_ref().expect("filled"))
    }

    fn v(&mut self) -> Result<&VMeasures, Error> {
        if self.v.is_none() {
            self.v = Some(v_measures_numeric(self.rho, &self.cfg)?);
        }
        Ok(self.v.as_ref().expect("filled"))
    }
}

fn numeric(measure: Measure, value: f64, diags: &[OptimizerDiagnostics]) -> Record {
    let converged = diags.iter().all(|d| d.converged);
    Record {
        measure: measure.name(),
        method: Method::Numeric.as_str(),
        value,
        violates: None,
        converged: Some(converged),
        warning: (!converged).then(|| NOT_CONVERGED.to_string()),
    }
}

fn analytic(measure: Measure, value: f64) -> Record {
    Record {
        measure: measure.name(),
        method: Method::Analytic.as_str(),
        value,
        violates: None,
        converged: None,
        warning: None,
    }
}

fn concurrence(rho: &DensityMatrix) -> Result<(f64, bool), Error> {
    match rho.as_pure(PURITY_TOLERANCE) {
        Some(psi) => Ok((concurrence_pure(&psi), true)),
        None => Ok((concurrence_mixed_2q(rho)?, false)),
    }
}

pub fn analyze(rho: &DensityMatrix, req: &AnalyzeRequest) -> Result<Analysis, CliError> {
    if req.measures.is_empty() {
        return Err(CliError::Usage("at least one measure is required".into()));
    }
    req.optimizer.validate()?;
    let dims = rho.dims();
    let qubits = dims.is_qubits();
    if !qubits {
        if req.method != MethodChoice::Numeric {
            if let Some(m) = req.measures.iter().find(|m| !m.analytic_any_dims()) {
                return Err(CliError::Validation(Error::UnsupportedDims {
                    dims,
                    reason: analytic_reason(*m),
                }));
            }
        }
        if req.measures.contains(&Measure::Chsh) {
            return Err(CliError::Validation(Error::UnsupportedDims {
                dims,
                reason: "the chsh criterion is defined for two qubits",
            }));
        }
    }

    let want_analytic = req.method != MethodChoice::Numeric;
    let want_numeric = req.method != MethodChoice::Analytic;
    let mut cache = Cache {
        rho,
        cfg: req.optimizer,
        ab: None,
        ba: None,
        v: None,
    };
    let mut records = Vec::new();
    for &m in &req.measures {
        let (has_analytic, has_numeric) = m.routes();
        // A measure with a single route answers any method request.
        let do_analytic = has_analytic && (want_analytic || !has_numeric);
        let do_numeric = has_numeric && (want_numeric || !has_analytic);
        if do_analytic {
            records.push(analytic_record(rho, m)?);
        }
        if do_numeric {
            records.push(numeric_record(&mut cache, m)?);
        }
    }
    Ok(Analysis {
        dims: [dims.a, dims.b],
        records,
    })
}

fn analytic_reason(m: Measure) -> &'static str {
    match m {
        Measure::DTilde => "d_tilde has no closed form; use --method numeric",
        _ => "the analytic method needs 2x2 dims; use --method numeric",
    }
}

fn analytic_record(rho: &DensityMatrix, m: Measure) -> Result<Record, CliError> {
    let rec = match m {
        Measure::DAb => analytic(m, discord_ab_analytic(rho)?.0),
        Measure::DBa => analytic(m, discord_ba_analytic(rho)?.0),
        Measure::DSym => analytic(m, discord_ab_analytic(rho)?.0 + discord_ba_analytic(rho)?.0),
        Measure::V => analytic(m, chsh_violation(rho)?.v),
        Measure::VTilde => analytic(m, chsh_violation(rho)?.v_tilde),
        Measure::Chsh => {
            let r = chsh_violation(rho)?;
            Record {
                violates: Some(r.violates),
                ..analytic(m, r.horodecki_m)
            }
        }
        Measure::Concurrence => analytic(m, concurrence(rho)?.0),
        Measure::Monogamy => {
            let (c, pure) = concurrence(rho)?;
            let residual = script_d(rho)
                - script_d_local(&rho.reduced(Side::A))
                - script_d_local(&rho.reduced(Side::B))
                - c * c;
            Record {
                warning: (!pure).then(|| "mixed state: the equality is only guaranteed for pure states".to_string()),
                ..analytic(m, residual)
            }
        }
        Measure::DTilde => unreachable!("d_tilde has no closed form"),
    };
    Ok(rec)
}

fn numeric_record(cache: &mut Cache<'_>, m: Measure) -> Result<Record, CliError> {
    let rec = match m {
        Measure::DAb => {
            let o = cache.ab()?;
            numeric(m, o.value, &[o.diagnostics])
        }
        Measure::DBa => {
            let o = cache.ba()?;
            numeric(m, o.value, &[o.diagnostics])
        }
        Measure::DSym => {
            let (ab, dab) = {
                let o = cache.ab()?;
                (o.value, o.diagnostics)
            };
            let o = cache.ba()?;
            numeric(m, ab + o.value, &[dab, o.diagnostics])
        }
        Measure::DTilde => {
            let o = discord_two_side(cache.rho, &cache.cfg)?;
            numeric(m, o.value, &[o.diagnostics])
        }
        Measure::V | Measure::VTilde | Measure::Chsh => {
            let r = cache.v()?;
            let mut rec = match m {
                Measure::V => numeric(m, r.v, &[r.min_diagnostics]),
                Measure::VTilde => numeric(m, r.v_tilde, &[r.max_diagnostics]),
                _ => {
                    // m = s1^2 + s2^2 = 4 V~
                    let hm = 4.0 * r.v_tilde;
                    Record {
                        violates: Some(hm > 1.0),
                        ..numeric(m, hm, &[r.max_diagnostics])
                    }
                }
            };
            if r.exploratory && rec.warning.is_none() {
                rec.warning = Some("exploratory: no closed form beyond two qubits".to_string());
            }
            rec
        }
        Measure::Concurrence | Measure::Monogamy => unreachable!("closed form only"),
    };
    Ok(rec)
}

impl Analysis {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("measure,method,value,violates,converged,warning\n");
        let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.measure,
                r.method,
                g12(r.value),
                opt(r.violates),
                opt(r.converged),
                r.warning.as_deref().unwrap_or("")
            );
        }
        out
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("state dims: {}x{}\n", self.dims[0], self.dims[1]);
        let _ = writeln!(out, "{:<12} {:<9} {:<20} notes", "measure", "method", "value");
        for r in &self.records {
            let mut notes = Vec::new();
            if let Some(v) = r.violates {
                notes.push(if v { "violates CHSH" } else { "no CHSH violation" }.to_string());
            }
            if r.converged == Some(true) {
                notes.push("converged".into());
            }
            notes.extend(r.warning.clone());
            let _ = writeln!(out, "{:<12} {:<9} {:<20} {}", r.measure, r.method, g12(r.value), notes.join("; "));
        }
        // Trailing spaces from empty notes are noise.
        out.lines().map(|l| l.trim_end()).collect::<Vec<_>>().join("\n") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cohcorr_core::state::{make_bell, Bell};
    use cohcorr_core::{random, Dims};

    fn req(measures: &[Measure], method: MethodChoice) -> AnalyzeRequest {
        AnalyzeRequest {
            measures: measures.to_vec(),
            method,
            optimizer: OptimizerConfig::default().with_restarts(8),
        }
    }

    fn value(a: &Analysis, measure: &str, method: &str) -> f64 {
        a.records.iter().find(|r| r.measure == measure && r.method == method).unwrap().value
    }

    #[test]
    fn bell_symmetric_discord() {
        let rho = make_bell(Bell::PhiPlus).density();
        let a = analyze(&rho, &req(&[Measure::DSym], MethodChoice::Analytic)).unwrap();
        assert_eq!(a.records.len(), 1);
        assert!((a.records[0].value - 1.0).abs() < 1e-14);
        assert_eq!(a.records[0].converged, None);
    }

    #[test]
    fn maximally_mixed_is_all_zero() {
        let rho = DensityMatrix::maximally_mixed(Dims::QUBITS);
        let a = analyze(&rho, &req(&Measure::ALL, MethodChoice::Both)).unwrap();
        for r in &a.records {
            assert!(r.value.abs() < 1e-12, "{r:?}");
            if r.measure == "chsh" {
                assert_eq!(r.violates, Some(false));
            }
        }
        // d_tilde, concurrence and monogamy have one route each.
        assert_eq!(a.records.len(), 6 * 2 + 3);
    }

    #[test]
    fn both_routes_agree() {
        let rho = random::random_mixed(Dims::QUBITS, 4, 3).unwrap();
        let a = analyze(&rho, &req(&[Measure::DAb, Measure::DBa, Measure::V, Measure::VTilde, Measure::Chsh], MethodChoice::Both)).unwrap();
        for m in ["d_ab", "d_ba", "v", "v_tilde", "chsh"] {
            assert!((value(&a, m, "analytic") - value(&a, m, "numeric")).abs() < 1e-6, "{m}");
        }
    }

    #[test]
    fn non_qubit_rules() {
        let rho = random::random_pure(Dims::new(2, 3).unwrap(), 1).density();
        let err = analyze(&rho, &req(&[Measure::DAb], MethodChoice::Analytic)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("2x3"), "{err}");
        assert!(analyze(&rho, &req(&[Measure::Chsh], MethodChoice::Numeric)).is_err());
        let a = analyze(&rho, &req(&[Measure::Concurrence, Measure::Monogamy], MethodChoice::Analytic)).unwrap();
        assert!(value(&a, "monogamy", "analytic").abs() < 1e-10);
        let a = analyze(&rho, &req(&[Measure::V], MethodChoice::Numeric)).unwrap();
        assert!(a.records[0].warning.as_deref().unwrap().starts_with("exploratory"));
    }

    #[test]
    fn mixed_monogamy_is_flagged() {
        let rho = random::random_mixed(Dims::QUBITS, 4, 2).unwrap();
        let a = analyze(&rho, &req(&[Measure::Monogamy], MethodChoice::Analytic)).unwrap();
        assert!(a.records[0].warning.is_some());
    }

    #[test]
    fn output_formats() {
        let rho = make_bell(Bell::PhiPlus).density();
        let a = analyze(&rho, &req(&[Measure::DAb, Measure::Chsh], MethodChoice::Analytic)).unwrap();
        let csv = a.to_csv();
        assert_eq!(
            csv,
            "measure,method,value,violates,converged,warning\nd_ab,analytic,0.5,,,\nchsh,analytic,2,true,,\n"
        );
        let json: serde_json::Value = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(json["dims"], serde_json::json!([2, 2]));
        assert_eq!(json["records"][1]["violates"], serde_json::json!(true));
        assert!(a.to_table().contains("violates CHSH"));
    }
}
