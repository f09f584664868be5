//! Equality atlas for the hyperbolic Newton-Maclaurin type inequalities.

use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::invariants::{check_refined_nm, check_general_nm, STRICT_THRESHOLD};
use crate::symmetric::PrincipalSpectrum;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AtlasCheck {
    RefinedNewtonMaclaurin,
    GeneralNewtonMaclaurin,
}

impl AtlasCheck {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RefinedNewtonMaclaurin => "refined-newton-maclaurin",
            Self::GeneralNewtonMaclaurin => "general-newton-maclaurin",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "refined-newton-maclaurin" => Ok(Self::RefinedNewtonMaclaurin),
            "general-newton-maclaurin" => Ok(Self::GeneralNewtonMaclaurin),
            _ => Err(Error::InvalidParameter(format!("no equality atlas for `{name}`"))),
        }
    }

    fn evaluate(&self, spectrum: &PrincipalSpectrum, k: usize) -> Result<CheckReport> {
        match self {
            Self::RefinedNewtonMaclaurin => check_refined_nm(spectrum, k),
            Self::GeneralNewtonMaclaurin => check_general_nm(spectrum, k),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Isotropic,
    OneSpike,
    TwoSpike,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasEntry {
    pub family: Family,
    pub params: Vec<f64>,
    pub residual: f64,
    pub expect_equality: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub check: AtlasCheck,
    pub n: usize,
    pub k: usize,
    pub entries: Vec<AtlasEntry>,
}

impl AtlasReport {
    pub fn pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn to_report(&self) -> CheckReport {
        let worst_equal = self
            .entries
            .iter()
            .filter(|e| e.expect_equality)
            .map(|e| e.residual.abs())
            .fold(0.0, f64::max);
        let least_strict = self
            .entries
            .iter()
            .filter(|e| !e.expect_equality)
            .map(|e| e.residual)
            .fold(f64::INFINITY, f64::min);
        CheckReport::composite(format!("{}-equality-atlas", self.check.name()), worst_equal, STRICT_THRESHOLD, self.pass())
            .with("n", self.n)
            .with("k", self.k)
            .with("families", self.entries.len())
            .with("max_equality_residual", worst_equal)
            .with("min_strict_residual", least_strict)
    }
}

pub const ISOTROPIC_VALUES: [f64; 6] = [1.0, 1.2, 1.7, 2.5, 4.0, 10.0];
pub const SPIKE_VALUES: [f64; 5] = [1.5, 2.0, 3.0, 5.0, 10.0];
pub const TWO_SPIKE_VALUES: [(f64, f64); 5] = [(2.0, 1.5), (1.5, 1.2), (3.0, 3.0), (5.0, 1.1), (10.0, 2.0)];

/// Evaluates `check` on the isotropic line, the one-spike family
/// `(a, 1, …, 1)` and the two-spike family `(a, b, 1, …, 1)`. Equality is
/// expected on the first two (the one-spike family only for `k >= 2`).
///
/// With fewer than `k` curvatures above 1 every `Ĥ_j` with `j >= k`
/// vanishes, so `L̃_k` and the odd parts of order `k` are zero and both gaps
/// vanish as well. The two-spike family is therefore an equality case for
/// `k >= 3` and strict only for `k <= 2`.
pub fn equality_atlas(check: AtlasCheck, n: usize, k: usize) -> Result<AtlasReport> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("need n >= 4, got {n}")));
    }
    let m = n - 1;
    let mut entries = Vec::new();
    let mut push = |family: Family, params: Vec<f64>, kappa: Vec<f64>, expect_equality: bool| -> Result<()> {
        let r = check.evaluate(&PrincipalSpectrum::new(kappa)?, k)?;
        let pass = if expect_equality { r.residual.abs() < STRICT_THRESHOLD } else { r.residual > STRICT_THRESHOLD };
        entries.push(AtlasEntry { family, params, residual: r.residual, expect_equality, pass });
        Ok(())
    };
    for c in ISOTROPIC_VALUES {
        push(Family::Isotropic, vec![c], vec![c; m], true)?;
    }
    for a in SPIKE_VALUES {
        let mut kappa = vec![1.0; m];
        kappa[0] = a;
        push(Family::OneSpike, vec![a], kappa, k >= 2)?;
    }
    for (a, b) in TWO_SPIKE_VALUES {
        let mut kappa = vec![1.0; m];
        kappa[0] = a;
        kappa[1] = b;
        push(Family::TwoSpike, vec![a, b], kappa, k >= 3)?;
    }
    Ok(AtlasReport { check, n, k, entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isotropic_and_single_spike_are_equality_cases() {
        for check in [AtlasCheck::RefinedNewtonMaclaurin, AtlasCheck::GeneralNewtonMaclaurin] {
            for n in 6..=11 {
                for k in 2..=(n - 2) / 2 {
                    let a = equality_atlas(check, n, k).unwrap();
                    assert!(a.pass(), "{a:?}");
                }
            }
        }
    }

    #[test]
    fn spec_anchor_values() {
        let iso = PrincipalSpectrum::new(vec![1.7; 5]).unwrap();
        assert!(check_general_nm(&iso, 2).unwrap().residual.abs() < 1e-12);
        let mut spike = vec![1.0; 5];
        spike[0] = 3.0;
        let r = check_general_nm(&PrincipalSpectrum::new(spike).unwrap(), 2).unwrap();
        assert_eq!(r.residual, 0.0);
        let mut two = vec![1.0; 5];
        two[0] = 2.0;
        two[1] = 1.5;
        assert!(check_general_nm(&PrincipalSpectrum::new(two).unwrap(), 2).unwrap().residual > 1e-12);
    }

    #[test]
    fn two_spikes_are_strict_exactly_for_k_two() {
        for check in [AtlasCheck::RefinedNewtonMaclaurin, AtlasCheck::GeneralNewtonMaclaurin] {
            let a = equality_atlas(check, 8, 2).unwrap();
            assert!(a.entries.iter().filter(|e| e.family == Family::TwoSpike).all(|e| e.residual > 1e-12));
            let a = equality_atlas(check, 8, 3).unwrap();
            assert!(a.entries.iter().filter(|e| e.family == Family::TwoSpike).all(|e| e.residual.abs() < 1e-12));
        }
    }

    #[test]
    fn one_spike_is_strict_for_k_one() {
        let a = equality_atlas(AtlasCheck::RefinedNewtonMaclaurin, 5, 1).unwrap();
        assert!(a.pass(), "{a:?}");
        assert!(a.entries.iter().filter(|e| e.family == Family::OneSpike).all(|e| e.residual > 1e-12));
    }
}
