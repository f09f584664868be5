//! Executes the suites of a resolved configuration and writes `report.json`
//! plus one CSV per suite.

use crate::check::{CheckKind, CheckReport};
use crate::config::{ExperimentConfig, IntegralCheck, OracleKind, ResolvedConfig, Suite, SweepPlanKind};
use crate::error::{Error, Result};
use crate::integral::{
    convergence_study, default_tolerance, heintze_karcher, lk_minkowski, minkowski_spaceform, minkowski_warped,
    minkowski_weighted, oscillation_scaling, rigidity_residual, HK_TOL, RIGIDITY_TOL,
};
use crate::invariants::SpaceFormSign;
use crate::oracle::{gauss_bonnet_oracle, newton_tensor_oracle};
use crate::property::{self, equality_atlas, ratio_study, sweep, SamplerSpec, SweepPlan, ViolationRecord};
use crate::surface::RevolutionSurface;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

pub const TOOL_NAME: &str = "warpcurv";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub kind: String,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
    #[serde(default)]
    pub violations: Vec<ViolationRecord>,
}

/// Wall-clock data; the only part of a report that varies between runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub suites: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    /// The configuration as parsed, defaults filled in.
    pub config: serde_json::Value,
    pub suites: Vec<SuiteReport>,
    pub pass: bool,
    pub timing: Timing,
}

/// A check counts towards the verdict unless it failed and is advisory.
pub fn counts_as_pass(r: &CheckReport) -> bool {
    r.pass || r.metadata.get("advisory").and_then(|v| v.as_bool()) == Some(true)
}

impl RunReport {
    /// Failing checks as `(suite, report)` pairs, advisory failures excluded.
    pub fn failures(&self) -> Vec<(&str, &CheckReport)> {
        self.suites
            .iter()
            .flat_map(|s| s.checks.iter().filter(|r| !counts_as_pass(r)).map(move |r| (s.name.as_str(), r)))
            .collect()
    }

    /// The report as JSON with the timing block removed.
    pub fn deterministic_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().expect("object").remove("timing");
        v
    }
}

fn error_report(name: &str, e: &Error) -> CheckReport {
    // Finite placeholders keep the JSON numeric; the verdict and message carry the failure.
    CheckReport::composite(name, 0.0, 0.0, false).with("error", e.to_string())
}

fn suite_seed(config: &ExperimentConfig, index: usize, own: Option<u64>) -> u64 {
    own.unwrap_or_else(|| config.seed.wrapping_add((index as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn integral_reports(surface: &RevolutionSurface, check: IntegralCheck, k: usize, nodes: usize, tol: Option<f64>) -> Result<Vec<CheckReport>> {
    let tol = tol.unwrap_or_else(|| match check {
        IntegralCheck::HeintzeKarcher => HK_TOL,
        _ => default_tolerance(surface.model()),
    });
    match check {
        IntegralCheck::MinkowskiSpaceform => minkowski_spaceform(surface, k, nodes, tol).map(|r| vec![r]),
        IntegralCheck::MinkowskiWarped => minkowski_warped(surface, k, nodes, tol).map(|r| vec![r]),
        IntegralCheck::MinkowskiWeighted => minkowski_weighted(surface, k, nodes, tol),
        IntegralCheck::HeintzeKarcher => heintze_karcher(surface, nodes, tol).map(|r| vec![r]),
        IntegralCheck::LkMinkowski => lk_minkowski(surface, k, nodes, tol).map(|r| vec![r]),
    }
}

fn check_label(check: IntegralCheck) -> &'static str {
    match check {
        IntegralCheck::MinkowskiSpaceform => "minkowski-space-form",
        IntegralCheck::MinkowskiWarped => "minkowski-warped",
        IntegralCheck::MinkowskiWeighted => "minkowski-weighted",
        IntegralCheck::HeintzeKarcher => "heintze-karcher",
        IntegralCheck::LkMinkowski => "lk-minkowski",
    }
}

fn plans(kind: SweepPlanKind, count: u64, seed: u64) -> Vec<SweepPlan> {
    match kind {
        SweepPlanKind::NewtonMaclaurin => property::newton_maclaurin_plan(count, seed, false),
        SweepPlanKind::Garding => property::newton_maclaurin_plan(count, seed, true),
        SweepPlanKind::Hyperbolic => property::hyperbolic_plan(count, seed),
        SweepPlanKind::XFamily => property::x_family_plan(count, seed),
        SweepPlanKind::Spherical => property::spherical_plan(count, seed),
        SweepPlanKind::Permutation => property::permutation_plan(count, seed),
    }
}

fn run_suite(resolved: &ResolvedConfig, index: usize, suite: &Suite) -> SuiteReport {
    let config = &resolved.config;
    let mut checks = Vec::new();
    let mut violations = Vec::new();
    let mut push = |name: &str, r: Result<Vec<CheckReport>>| match r {
        Ok(v) => checks.extend(v),
        Err(e) => checks.push(error_report(name, &e)),
    };
    match suite {
        Suite::Integral { surfaces, checks: kinds, ks, tolerance, nodes, .. } => {
            let nodes = nodes.unwrap_or(config.nodes);
            for s in surfaces {
                let surface = &resolved.surfaces[s];
                for &check in kinds {
                    let ks: &[usize] = if check == IntegralCheck::HeintzeKarcher { &[1] } else { ks };
                    for &k in ks {
                        let r = integral_reports(surface, check, k, nodes, *tolerance);
                        push(check_label(check), r.map(|v| v.into_iter().map(|r| r.with("surface", s.as_str())).collect()));
                    }
                }
            }
        }
        Suite::Rigidity { surfaces, targets, tolerance, nodes, .. } => {
            let nodes = nodes.unwrap_or(config.nodes);
            let tol = tolerance.unwrap_or(RIGIDITY_TOL);
            for s in surfaces {
                let surface = &resolved.surfaces[s];
                for t in targets {
                    let r = rigidity_residual(surface, t, nodes, tol);
                    push("rigidity-oscillation", r.map(|r| vec![r.with("surface", s.as_str())]));
                }
            }
        }
        Suite::Scaling { model, r0, eps, mode, targets, nodes, .. } => {
            let model = &resolved.models[model];
            for t in targets {
                let r = oscillation_scaling(model, *r0, *eps, *mode, t, nodes.unwrap_or(config.nodes));
                push("rigidity-scaling", r.map(|r| vec![r]));
            }
        }
        Suite::Convergence { surface, check, k, nodes, .. } => {
            let s = &resolved.surfaces[surface];
            let r = convergence_study(check_label(*check), nodes, |m| {
                integral_reports(s, *check, *k, m, None).map(|v| v.into_iter().next().expect("one report"))
            });
            push("quadrature-convergence", r.map(|r| vec![r.with("surface", surface.as_str()).with("k", *k)]));
        }
        Suite::Sweep { plan, sampler, checks: list, count, seed, .. } => {
            let seed = suite_seed(config, index, *seed);
            let plans = match (plan, sampler) {
                (Some(kind), _) => plans(*kind, *count, seed),
                (None, Some(s)) => {
                    let mut spec = SamplerSpec::new(s.cone, s.n, *count, seed);
                    spec.scale = s.scale.unwrap_or(1.0);
                    vec![SweepPlan { spec, checks: list.clone() }]
                }
                (None, None) => Vec::new(),
            };
            for p in plans {
                match sweep(&p.spec, &p.checks) {
                    Ok(summary) => {
                        checks.extend(summary.reports());
                        violations.extend(summary.violations);
                    }
                    Err(e) => checks.push(error_report("sweep", &e)),
                }
            }
        }
        Suite::Atlas { checks: list, cases, .. } => {
            for &c in list {
                for &[n, k] in cases {
                    push(c.name(), equality_atlas(c, n, k).map(|a| vec![a.to_report()]));
                }
            }
        }
        Suite::Oracle { oracle, dims, ks, count, seed, .. } => {
            let seed = suite_seed(config, index, *seed);
            for &dim in dims {
                for &k in ks {
                    match oracle {
                        OracleKind::GaussBonnet => {
                            for eps in SpaceFormSign::ALL {
                                push("gauss-bonnet-oracle", gauss_bonnet_oracle(dim, k, eps, *count, seed).map(|r| vec![r]));
                            }
                        }
                        OracleKind::NewtonTensor => {
                            push("newton-tensor-oracle", newton_tensor_oracle(dim, k, *count, seed).map(|r| vec![r]));
                        }
                    }
                }
            }
        }
        Suite::Permutation { cases, count, seed, .. } => {
            let seed = suite_seed(config, index, *seed);
            for (i, &[n, k]) in cases.iter().enumerate() {
                let s = seed.wrapping_add(i as u64);
                push("permutation-ratio", ratio_study(n, k, *count, s).map(|r| vec![r.to_report()]));
            }
        }
    }
    SuiteReport {
        name: suite.name().to_string(),
        kind: suite.kind().to_string(),
        pass: !checks.is_empty() && checks.iter().all(counts_as_pass),
        checks,
        violations,
    }
}

/// Runs every suite on a pool of `workers` threads (the rayon default when
/// `None`) and assembles the report in configuration order.
pub fn run(resolved: &ResolvedConfig, workers: Option<usize>) -> Result<RunReport> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        builder = builder.num_threads(w);
    }
    let pool = builder.build().map_err(|e| Error::InvalidParameter(format!("worker pool: {e}")))?;
    let start = Instant::now();
    let results: Vec<(SuiteReport, f64)> = pool.install(|| {
        resolved
            .config
            .suites
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let t = Instant::now();
                let r = run_suite(resolved, i, s.get_ref());
                (r, t.elapsed().as_secs_f64())
            })
            .collect()
    });
    let timing = Timing {
        wall_seconds: start.elapsed().as_secs_f64(),
        suites: results.iter().map(|(r, t)| (r.name.clone(), *t)).collect(),
    };
    let suites: Vec<SuiteReport> = results.into_iter().map(|(r, _)| r).collect();
    Ok(RunReport {
        tool: ToolInfo { name: TOOL_NAME.into(), version: env!("CARGO_PKG_VERSION").into() },
        config: serde_json::to_value(&resolved.config).expect("serializable"),
        pass: suites.iter().all(|s| s.pass),
        suites,
        timing,
    })
}

/// 17 significant digits, enough for a binary round trip.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn kind_label(kind: CheckKind) -> &'static str {
    match kind {
        CheckKind::Identity => "identity",
        CheckKind::Inequality => "inequality",
        CheckKind::Composite => "composite",
    }
}

pub fn write_suite_csv(suite: &SuiteReport, path: &Path) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["check", "kind", "lhs", "rhs", "residual", "tolerance", "pass", "metadata"])?;
    for r in &suite.checks {
        let meta = serde_json::to_string(&r.metadata).expect("serializable");
        w.write_record([
            r.name.as_str(),
            kind_label(r.kind),
            &format_number(r.lhs),
            &format_number(r.rhs),
            &format_number(r.residual),
            &format_number(r.tolerance),
            if counts_as_pass(r) { "true" } else { "false" },
            &meta,
        ])?;
    }
    w.flush()
}

/// Writes `report.json` and `<suite>.csv` files into `dir`.
pub fn write_outputs(report: &RunReport, dir: &Path) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let json = serde_json::to_string_pretty(report).expect("serializable");
    std::fs::write(dir.join(REPORT_FILE), json + "\n")?;
    for s in &report.suites {
        write_suite_csv(s, &dir.join(format!("{}.csv", s.name)))?;
    }
    Ok(())
}
