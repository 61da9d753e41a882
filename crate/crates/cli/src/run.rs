use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use shiftq_core::hochschild::{hbar_component, mc_defect_star, moyal, StarProduct, StarProductJson};
use shiftq_core::linfty::{
    derivation_defect, jacobi_defect, mc_defect, morphism_defect, morphism_from_json, sweep, twisted_derivation_defect,
    DefectReport, Element, FiniteAlgebraJson, FiniteDerivationJson, FiniteLInfty, FiniteMorphismJson, MCElement, TermJson,
    Truncation,
};
use shiftq_core::poisson::Polyvector;
use shiftq_core::shift::{
    run_classical, run_nijenhuis, run_quantum, scan_strong_nijenhuis, Overrides, QuantumProblemJson, ScanJson,
    ShiftProblemJson, ShiftReport,
};
use shiftq_core::{Error, Result};

use crate::config::{Command, Config};

pub const SCHEMA: &str = "shiftq/1";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Result of one engine run before it is wrapped in the report envelope.
struct Outcome {
    result: Value,
    truncation: Value,
    pass: bool,
    failure: Option<String>,
    /// Overrides the pass/fail exit code (partial scans).
    exit: Option<i32>,
}

pub struct Report {
    pub json: Value,
    pub exit: i32,
}

pub fn error_exit(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => EXIT_USAGE,
        Error::Structural(_) | Error::Domain(_) => EXIT_DOMAIN,
        Error::Resource(_) => EXIT_RESOURCE,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Structural(_) => "structural",
        Error::Domain(_) => "domain",
        Error::Resource(_) => "resource",
    }
}

pub fn run(cfg: &Config) -> Report {
    let command = cfg.command.name();
    let outcome = match &cfg.input {
        None => Err(Error::parse(format!("{command}: --input is required"))),
        Some(path) => dispatch(cfg, path),
    };
    match outcome {
        Ok(o) => {
            let exit = o.exit.unwrap_or(if o.pass { EXIT_PASS } else { EXIT_FAIL });
            let mut env = json!({
                "schema": SCHEMA,
                "command": command,
                "pass": o.pass,
                "exit_code": exit,
                "truncation": o.truncation,
                "result": o.result,
            });
            if let Some(f) = o.failure {
                env["failure"] = Value::String(f);
            }
            Report { json: env, exit }
        }
        Err(e) => {
            let exit = error_exit(&e);
            let json = json!({
                "schema": SCHEMA,
                "command": command,
                "pass": false,
                "exit_code": exit,
                "error": { "kind": error_kind(&e), "message": e.to_string() },
            });
            Report { json, exit }
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn overrides(cfg: &Config) -> Overrides {
    Overrides {
        kmax: cfg.kmax.map(usize::from),
        arity_cutoff: cfg.arity_cutoff.map(usize::from),
    }
}

fn dispatch(cfg: &Config, path: &Path) -> Result<Outcome> {
    match cfg.command {
        Command::Classical => classical(cfg, read_json(path)?),
        Command::Quantum => quantum(cfg, read_json(path)?),
        Command::StarCheck => star_check(cfg, read_json(path)?),
        Command::LinftyCheck => linfty_check(cfg, read_json(path)?),
        Command::MorphismCheck => morphism_check(cfg, read_json(path)?),
        Command::DerivationCheck => derivation_check(cfg, read_json(path)?),
        Command::Nijenhuis => nijenhuis(cfg, read_json(path)?),
        Command::Scan => scan(cfg, read_json(path)?),
    }
}

fn shift_outcome(report: ShiftReport, truncation: Value) -> Outcome {
    let failure = report
        .hypotheses
        .iter()
        .find(|h| !h.pass)
        .map(|h| format!("{}: {}", h.name, h.detail))
        .or_else(|| {
            report
                .brackets
                .iter()
                .find(|b| b.value != "0")
                .map(|b| format!("bracket({}, {}) = {}", b.left, b.right, b.value))
        });
    Outcome {
        pass: report.verified,
        result: to_value(&report),
        truncation,
        failure,
        exit: None,
    }
}

fn defect_failure(label: &str, rep: &DefectReport) -> Option<String> {
    rep.residuals
        .first()
        .map(|r| format!("{label}({}) = {}", r.tuple.join(", "), r.value))
}

fn classical(cfg: &Config, problem: ShiftProblemJson) -> Result<Outcome> {
    let ov = overrides(cfg);
    let kmax = match &problem {
        ShiftProblemJson::Poisson(p) => ov.kmax.unwrap_or(p.kmax),
        ShiftProblemJson::Binary(b) => ov.kmax.unwrap_or(b.kmax),
    };
    let report = run_classical(&problem, ov)?;
    Ok(shift_outcome(report, json!({ "kmax": kmax })))
}

fn quantum(cfg: &Config, problem: QuantumProblemJson) -> Result<Outcome> {
    let ov = overrides(cfg);
    let kmax = ov.kmax.unwrap_or(match &problem {
        QuantumProblemJson::Tpoly { kmax, .. } | QuantumProblemJson::Finite { kmax, .. } => *kmax,
    });
    let cutoff = problem.arity_cutoff(ov);
    let report = run_quantum(&problem, ov)?;
    Ok(shift_outcome(report, json!({ "kmax": kmax, "arity_cutoff": cutoff })))
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StarInput {
    Moyal { moyal: Polyvector, hbar_cap: usize },
    Explicit(StarProductJson),
}

fn star_check(cfg: &Config, input: StarInput) -> Result<Outcome> {
    let cap_override = cfg.hbar_cap.map(usize::from);
    let star = match input {
        StarInput::Moyal { moyal: pi, hbar_cap } => moyal(&pi, cap_override.unwrap_or(hbar_cap))?,
        StarInput::Explicit(j) => {
            let s = j.into_star_product(None)?;
            match cap_override {
                Some(cap) => {
                    let parts: Vec<_> = (1..=cap.min(s.hbar_cap())).map(|k| (k, s.component(k))).collect();
                    StarProduct::from_components(s.vars(), cap, &parts)?
                }
                None => s,
            }
        }
    };
    let defect = mc_defect_star(&star);
    let cap = star.hbar_cap();
    let mut residuals = Vec::new();
    for k in 0..=cap {
        let c = hbar_component(&defect, k);
        if !c.is_zero() {
            residuals.push(json!({ "order": k, "value": c.to_string() }));
        }
    }
    let failure = residuals
        .first()
        .map(|r| format!("ħ^{} residual of δB + ½[B,B]: {}", r["order"], r["value"].as_str().unwrap_or("")));
    Ok(Outcome {
        pass: residuals.is_empty(),
        result: json!({ "mc_defect_zero": residuals.is_empty(), "residuals": residuals }),
        truncation: json!({ "hbar_cap": cap }),
        failure,
        exit: None,
    })
}

#[derive(Deserialize)]
struct LinftyInput {
    #[serde(flatten)]
    algebra: FiniteAlgebraJson,
    #[serde(default)]
    mc: Option<Vec<TermJson>>,
}

fn truncation(cutoff: usize) -> Truncation {
    Truncation {
        arity_cutoff: cutoff,
        hbar_cap: None,
    }
}

fn with_cutoff(mut alg: FiniteAlgebraJson, cfg: &Config) -> FiniteAlgebraJson {
    if let Some(a) = cfg.arity_cutoff {
        alg.cutoff = a.into();
    }
    alg
}

fn linfty_check(cfg: &Config, input: LinftyInput) -> Result<Outcome> {
    let lin = FiniteLInfty::from_json(&with_cutoff(input.algebra, cfg))?;
    let alg = &lin.algebra;
    let cutoff = alg.cutoff();
    let rep = sweep(alg.probes(), 1..=cutoff, truncation(cutoff), |a| jacobi_defect(alg, a))?;
    let mut failure = defect_failure("jacobi", &rep);
    let mut pass = rep.pass;
    let mut result = json!({ "jacobi": to_value(&rep) });
    if let Some(terms) = input.mc {
        let v = lin.vector_from_json(&terms)?;
        let d = mc_defect(alg, &v)?;
        let ok = d.is_zero();
        if !ok && failure.is_none() {
            failure = Some(format!("mc_defect = {d}"));
        }
        pass &= ok;
        result["mc"] = json!({ "defect": d.to_string(), "pass": ok });
    }
    Ok(Outcome {
        pass,
        result,
        truncation: json!({ "arity_cutoff": cutoff }),
        failure,
        exit: None,
    })
}

fn morphism_check(cfg: &Config, mut input: FiniteMorphismJson) -> Result<Outcome> {
    input.source = with_cutoff(input.source, cfg);
    input.target = input.target.map(|t| with_cutoff(t, cfg));
    let (_, _, f) = morphism_from_json(&input)?;
    let cutoff = f.source.cutoff();
    let rep = sweep(f.source.probes(), 1..=cutoff, truncation(cutoff), |a| morphism_defect(&f, a))?;
    Ok(Outcome {
        pass: rep.pass,
        failure: defect_failure("morphism", &rep),
        result: json!({ "morphism": to_value(&rep) }),
        truncation: json!({ "arity_cutoff": cutoff }),
        exit: None,
    })
}

fn derivation_check(cfg: &Config, mut input: FiniteDerivationJson) -> Result<Outcome> {
    input.algebra = with_cutoff(input.algebra, cfg);
    let lin = FiniteLInfty::from_json(&input.algebra)?;
    let x = lin.derivation_from_json(&input.x)?;
    let alg = &lin.algebra;
    let cutoff = alg.cutoff();
    let rep = sweep(alg.probes(), 1..=cutoff, truncation(cutoff), |a| derivation_defect(&x, a))?;
    let mut failure = defect_failure("derivation", &rep);
    let mut pass = rep.pass;
    let mut result = json!({ "derivation": to_value(&rep) });
    if let Some(terms) = &input.mc {
        let m = MCElement::verified(lin.vector_from_json(terms)?, alg)?;
        let tw = sweep(alg.probes(), 1..=cutoff, truncation(cutoff), |a| twisted_derivation_defect(&x, &m, a))?;
        if failure.is_none() {
            failure = defect_failure("twisted_derivation", &tw);
        }
        pass &= tw.pass;
        result["twisted_derivation"] = to_value(&tw);
    }
    Ok(Outcome {
        pass,
        result,
        truncation: json!({ "arity_cutoff": cutoff }),
        failure,
        exit: None,
    })
}

fn nijenhuis(cfg: &Config, problem: QuantumProblemJson) -> Result<Outcome> {
    let ov = overrides(cfg);
    let cutoff = problem.arity_cutoff(ov);
    let rep = run_nijenhuis(&problem, ov)?;
    let weak_pass = rep.residuals.iter().all(|r| r.tuple.len() > 1);
    Ok(Outcome {
        pass: rep.pass,
        failure: defect_failure("𝒳_π", &rep),
        result: json!({ "weak_pass": weak_pass, "strong": to_value(&rep) }),
        truncation: json!({ "arity_cutoff": cutoff, "nijenhuis_arity": rep.checked_arity }),
        exit: None,
    })
}

fn scan(cfg: &Config, mut problem: ScanJson) -> Result<Outcome> {
    problem.dgla = with_cutoff(problem.dgla, cfg);
    let rep = scan_strong_nijenhuis(&problem, cfg.budget)?;
    let failure = rep
        .budget_exhausted
        .then(|| format!("budget exhausted after {} of {} candidates", rep.examined, rep.grid_size));
    Ok(Outcome {
        pass: !rep.budget_exhausted,
        exit: rep.budget_exhausted.then_some(EXIT_RESOURCE),
        truncation: json!({ "arity_cutoff": problem.dgla.cutoff, "budget": rep.budget }),
        result: to_value(&rep),
        failure,
    })
}
