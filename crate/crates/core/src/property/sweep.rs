//! Parallel sweeps of pointwise checks over sampled spectra, with
//! counterexample shrinking.

use super::checks::PropertyCheck;
use super::sampler::{draw, SamplerSpec};
use crate::check::{CheckKind, CheckReport};
use crate::error::Result;
use crate::invariants::STRICT_THRESHOLD;
use crate::symmetric::PrincipalSpectrum;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Violations kept per check; the count is always exact.
pub const MAX_RECORDS: usize = 16;
const SHRINK_ROUNDS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub check: String,
    pub index: u64,
    pub spectrum: Vec<f64>,
    pub residual: f64,
    pub shrunk_spectrum: Vec<f64>,
    pub shrunk_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check: PropertyCheck,
    pub name: String,
    /// Individual inequality instances evaluated (several per sample for
    /// checks ranging over `l` or over combination variants).
    pub evaluated: u64,
    pub violations: u64,
    /// Samples rejected by the check's precondition.
    pub input_errors: u64,
    pub min_residual: f64,
    pub min_index: u64,
    /// Instances with `|residual| ≤ 1e−12`.
    pub tight: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub spec: SamplerSpec,
    pub checks: Vec<CheckSummary>,
    pub violations: Vec<ViolationRecord>,
}

impl SweepSummary {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0 && c.input_errors == 0)
    }

    /// One report per check: the minimal residual and the violation count.
    pub fn reports(&self) -> Vec<CheckReport> {
        self.checks
            .iter()
            .map(|c| {
                let mut r = CheckReport::composite(
                    c.name.clone(),
                    c.min_residual,
                    crate::invariants::INEQUALITY_TOL,
                    c.violations == 0 && c.input_errors == 0,
                )
                .with("cone", self.spec.cone.label())
                .with("n", self.spec.n)
                .with("samples", self.spec.count)
                .with("seed", self.spec.seed)
                .with("evaluated", c.evaluated)
                .with("violations", c.violations)
                .with("input_errors", c.input_errors)
                .with("tight", c.tight)
                .with("params", serde_json::to_value(c.check).expect("serializable"));
                r.kind = CheckKind::Inequality;
                r
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
struct Acc {
    evaluated: u64,
    violations: u64,
    input_errors: u64,
    min_residual: f64,
    min_index: u64,
    tight: u64,
    records: Vec<(u64, Vec<f64>, f64)>,
}

impl Acc {
    fn new() -> Self {
        Self {
            evaluated: 0,
            violations: 0,
            input_errors: 0,
            min_residual: f64::INFINITY,
            min_index: u64::MAX,
            tight: 0,
            records: Vec::new(),
        }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.evaluated += other.evaluated;
        self.violations += other.violations;
        self.input_errors += other.input_errors;
        self.tight += other.tight;
        if other.min_residual < self.min_residual
            || (other.min_residual == self.min_residual && other.min_index < self.min_index)
        {
            self.min_residual = other.min_residual;
            self.min_index = other.min_index;
        }
        self.records.extend(other.records);
        self.records.sort_by_key(|r| r.0);
        self.records.truncate(MAX_RECORDS);
        self
    }
}

/// The failing instance with the smallest residual, if any.
fn worst_failure(reports: &[CheckReport]) -> Option<f64> {
    reports.iter().filter(|r| !r.pass).map(|r| r.residual).fold(None, |m, r| match m {
        Some(x) if x <= r => Some(x),
        _ => Some(r),
    })
}

fn evaluate_one(check: &PropertyCheck, spectrum: &PrincipalSpectrum, rng: &ChaCha8Rng, index: u64) -> Acc {
    let mut acc = Acc::new();
    match check.evaluate(spectrum, &mut rng.clone()) {
        Err(_) => acc.input_errors = 1,
        Ok(reports) => {
            for r in &reports {
                acc.evaluated += 1;
                let res = if r.residual.is_nan() { f64::NEG_INFINITY } else { r.residual };
                if res < acc.min_residual {
                    acc.min_residual = res;
                    acc.min_index = index;
                }
                if res.abs() <= STRICT_THRESHOLD {
                    acc.tight += 1;
                }
            }
            if let Some(worst) = worst_failure(&reports) {
                acc.violations = reports.iter().filter(|r| !r.pass).count() as u64;
                acc.records.push((index, spectrum.kappa().to_vec(), worst));
            }
        }
    }
    acc
}

/// Contracts coordinates toward the mean while the check keeps failing.
pub fn shrink(check: &PropertyCheck, spectrum: &[f64], rng: &ChaCha8Rng) -> (Vec<f64>, f64) {
    shrink_with(spectrum, |x| {
        let s = PrincipalSpectrum::new(x.to_vec()).ok()?;
        worst_failure(&check.evaluate(&s, &mut rng.clone()).ok()?)
    })
}

/// Coordinate-wise contraction toward the isotropic point, keeping a move
/// only while `fails` still reports a failure residual.
pub fn shrink_with<F>(spectrum: &[f64], fails: F) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let mut current = spectrum.to_vec();
    let mut residual = fails(&current).unwrap_or(f64::NAN);
    for _ in 0..SHRINK_ROUNDS {
        let mean = current.iter().sum::<f64>() / current.len() as f64;
        let mut moved = false;
        for i in 0..current.len() {
            let mut cand = current.clone();
            cand[i] += 0.5 * (mean - cand[i]);
            if cand[i] == current[i] {
                continue;
            }
            if let Some(r) = fails(&cand) {
                current = cand;
                residual = r;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    (current, residual)
}

/// Runs `checks` on `count` inputs produced by `input(index)`.
pub fn sweep_inputs<F>(spec: &SamplerSpec, checks: &[PropertyCheck], input: F) -> Result<SweepSummary>
where
    F: Fn(u64) -> Result<(PrincipalSpectrum, ChaCha8Rng)> + Sync,
{
    let accs = (0..spec.count)
        .into_par_iter()
        .map(|i| -> Result<Vec<Acc>> {
            let (s, rng) = input(i)?;
            Ok(checks.iter().map(|c| evaluate_one(c, &s, &rng, i)).collect())
        })
        .try_reduce(
            || checks.iter().map(|_| Acc::new()).collect(),
            |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()),
        )?;
    let mut summaries = Vec::new();
    let mut violations = Vec::new();
    for (check, acc) in checks.iter().zip(accs) {
        for (index, spectrum, residual) in &acc.records {
            let (_, rng) = input(*index)?;
            let (shrunk, shrunk_residual) = shrink(check, spectrum, &rng);
            violations.push(ViolationRecord {
                check: check.name().to_string(),
                index: *index,
                spectrum: spectrum.clone(),
                residual: *residual,
                shrunk_spectrum: shrunk,
                shrunk_residual,
            });
        }
        summaries.push(CheckSummary {
            check: *check,
            name: check.name().to_string(),
            evaluated: acc.evaluated,
            violations: acc.violations,
            input_errors: acc.input_errors,
            min_residual: acc.min_residual,
            min_index: acc.min_index,
            tight: acc.tight,
        });
    }
    Ok(SweepSummary { spec: spec.clone(), checks: summaries, violations })
}

/// Samples `spec` and runs every check on every sample.
pub fn sweep(spec: &SamplerSpec, checks: &[PropertyCheck]) -> Result<SweepSummary> {
    spec.validate()?;
    for c in checks {
        c.admissible(spec.cone, spec.len())?;
    }
    sweep_inputs(spec, checks, |i| draw(spec, i).map(|(d, rng)| (d.spectrum, rng)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::sampler::{sample_rng, Cone};

    #[test]
    fn small_sweep_has_no_violations_and_is_deterministic() {
        let spec = SamplerSpec::new(Cone::Garding { k: 3 }, 6, 3000, 9);
        let checks = [PropertyCheck::NewtonMaclaurin { k: 3 }, PropertyCheck::QuotientPointwise { k: 3 }];
        let a = sweep(&spec, &checks).unwrap();
        assert!(a.pass(), "{a:?}");
        assert_eq!(a.checks[0].evaluated, 2 * 3000);
        assert_eq!(a, sweep(&spec, &checks).unwrap());
        assert!(a.checks[0].min_residual >= -1e-10);
    }

    #[test]
    fn planted_precondition_failure_is_an_input_error() {
        let spec = SamplerSpec::new(Cone::Horoconvex, 6, 4, 0);
        let check = [PropertyCheck::RefinedNewtonMaclaurin { k: 2 }];
        let s = sweep_inputs(&spec, &check, |i| {
            let k = if i == 2 { vec![0.5, 2.0, 2.0, 3.0, 1.5] } else { vec![1.5; 5] };
            Ok((PrincipalSpectrum::new(k).unwrap(), sample_rng(0, i)))
        })
        .unwrap();
        assert_eq!(s.checks[0].input_errors, 1);
        assert_eq!(s.checks[0].violations, 0);
        assert!(s.violations.is_empty());
    }

    #[test]
    fn shrunk_counterexamples_still_fail() {
        let fails = |x: &[f64]| {
            let spread = x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
            (spread > 1.0).then_some(1.0 - spread)
        };
        let start = [5.0, 0.0, 1.0, 2.0];
        let (shrunk, residual) = shrink_with(&start, fails);
        assert!(fails(&shrunk).is_some());
        assert_eq!(fails(&shrunk), Some(residual));
        let spread = |x: &[f64]| x.iter().cloned().fold(f64::MIN, f64::max) - x.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread(&shrunk) < 2.0, "{shrunk:?}");
    }
}
