//! Pointwise inequalities evaluated on sampled spectra.

use super::sampler::Cone;
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::invariants::{
    check_x_log_concavity, check_permutation_sum, check_refined_nm, check_general_nm, check_spherical_ineq, spherical_cone_order,
    HatSpectrum, INEQUALITY_TOL, PERMUTATION_MAX_LEN,
};
use crate::symmetric::{cone_membership, ConeLabel, PrincipalSpectrum};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "kebab-case")]
pub enum PropertyCheck {
    /// `H_{k−1} H_l ≥ H_k H_{l−1}` for every `1 ≤ l < k`.
    NewtonMaclaurin { k: usize },
    /// `H_l ≥ H_k^{l/k}` for every `1 ≤ l < k`.
    MaclaurinPower { k: usize },
    /// `H_{k−1}/H_{l−1} ≥ H_k/H_l` for every `1 ≤ l < k`.
    QuotientChain { k: usize },
    /// `(k−1)H_{k−2}(Λ_j)H_{l−1} − (l−1)H_{k−1}H_{l−2}(Λ_j) ≥ 0` for all `j` and `1 ≤ l < k`.
    QuotientPointwise { k: usize },
    /// Random nonnegative combinations, mean-value form.
    CombinationMean { k: usize },
    /// Random nonnegative combinations, deleted-entry form.
    CombinationPointwise { k: usize },
    RefinedNewtonMaclaurin { k: usize },
    GeneralNewtonMaclaurin { k: usize },
    XFamily { s: i32, t: i32 },
    /// The spherical family with `s = 1, t = k − 1`, i.e. `Ñ_{k−1}L̃_k ≥ Ñ_kL̃_{k−1}` on the sphere.
    SphericalX { k: usize },
    PermutationSum { k: usize },
}

impl PropertyCheck {
    pub fn name(&self) -> &'static str {
        match self {
            Self::NewtonMaclaurin { .. } => "newton-maclaurin",
            Self::MaclaurinPower { .. } => "maclaurin-power",
            Self::QuotientChain { .. } => "quotient-chain",
            Self::QuotientPointwise { .. } => "quotient-pointwise",
            Self::CombinationMean { .. } => "combination-mean",
            Self::CombinationPointwise { .. } => "combination-pointwise",
            Self::RefinedNewtonMaclaurin { .. } => "refined-newton-maclaurin",
            Self::GeneralNewtonMaclaurin { .. } => "general-newton-maclaurin",
            Self::XFamily { .. } => "x-family-log-concavity",
            Self::SphericalX { .. } => "spherical-x-family",
            Self::PermutationSum { .. } => "permutation-sum",
        }
    }

    /// The cone the check is stated on.
    pub fn cone(&self) -> Cone {
        match *self {
            Self::NewtonMaclaurin { k }
            | Self::MaclaurinPower { k }
            | Self::QuotientChain { k }
            | Self::QuotientPointwise { k }
            | Self::CombinationMean { k }
            | Self::CombinationPointwise { k } => Cone::Garding { k },
            Self::SphericalX { k } => Cone::Convex2k { k },
            _ => Cone::Horoconvex,
        }
    }

    /// Whether a sweep over `cone` with spectra of length `len` satisfies the
    /// check's hypotheses.
    pub fn admissible(&self, cone: Cone, len: usize) -> Result<()> {
        let fail = |why: String| Err(Error::InvalidParameter(format!("{} not admissible: {why}", self.name())));
        match *self {
            Self::NewtonMaclaurin { k }
            | Self::MaclaurinPower { k }
            | Self::QuotientChain { k }
            | Self::QuotientPointwise { k }
            | Self::CombinationMean { k }
            | Self::CombinationPointwise { k } => {
                if !(2..=len).contains(&k) {
                    return fail(format!("need 2 <= k <= {len}"));
                }
                match cone.garding_order(len) {
                    Some(order) if order >= k => Ok(()),
                    _ => fail(format!("needs samples in the {k}-th Gårding cone, got {}", cone.label())),
                }
            }
            Self::RefinedNewtonMaclaurin { k } | Self::GeneralNewtonMaclaurin { k } | Self::PermutationSum { k } => {
                if cone != Cone::Horoconvex {
                    return fail("needs horoconvex samples".into());
                }
                if k == 0 || 2 * k + 1 > len {
                    return fail(format!("need 1 <= k and 2k + 1 <= {len}"));
                }
                if matches!(self, Self::PermutationSum { .. }) && len > PERMUTATION_MAX_LEN {
                    return fail(format!("brute force limited to length {PERMUTATION_MAX_LEN}"));
                }
                Ok(())
            }
            Self::XFamily { s, t } => {
                if cone != Cone::Horoconvex {
                    return fail("needs horoconvex samples".into());
                }
                if s < 1 || t < 0 {
                    return fail("need s >= 1, t >= 0".into());
                }
                Ok(())
            }
            Self::SphericalX { k } => {
                if k == 0 || 2 * k > len {
                    return fail(format!("need 1 <= k and 2k <= {len}"));
                }
                let need = spherical_cone_order(len, 1, k as i32 - 1);
                match cone.garding_order(len) {
                    Some(order) if order >= need => Ok(()),
                    _ => fail(format!("needs {need}-convex samples, got {}", cone.label())),
                }
            }
        }
    }

    /// Evaluates the check. `rng` supplies combination coefficients.
    pub fn evaluate(&self, spectrum: &PrincipalSpectrum, rng: &mut ChaCha8Rng) -> Result<Vec<CheckReport>> {
        self.admissible(self.cone_for(spectrum), spectrum.len())?;
        match *self {
            Self::NewtonMaclaurin { k } => {
                require_garding(spectrum, k)?;
                Ok((1..k)
                    .map(|l| {
                        let lhs = spectrum.normalized_h(k as i32 - 1) * spectrum.normalized_h(l as i32);
                        let rhs = spectrum.normalized_h(k as i32) * spectrum.normalized_h(l as i32 - 1);
                        tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, l)
                    })
                    .collect())
            }
            Self::MaclaurinPower { k } => {
                require_garding(spectrum, k)?;
                let hk = spectrum.normalized_h(k as i32).max(0.0);
                Ok((1..k)
                    .map(|l| {
                        let lhs = spectrum.normalized_h(l as i32);
                        let rhs = hk.powf(l as f64 / k as f64);
                        tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, l)
                    })
                    .collect())
            }
            Self::QuotientChain { k } => {
                require_garding(spectrum, k)?;
                let h = |j: usize| spectrum.normalized_h(j as i32);
                Ok((1..k)
                    .map(|l| {
                        let lhs = h(k - 1) / h(l - 1);
                        let rhs = h(k) / h(l);
                        tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, l)
                    })
                    .collect())
            }
            Self::QuotientPointwise { k } => {
                require_garding(spectrum, k)?;
                let mut out = Vec::new();
                for l in 1..k {
                    let (lhs, rhs) = worst_deleted(spectrum, |j| {
                        let hd = |o: i32| spectrum.normalized_h_deleted(o, j).unwrap();
                        let lhs = (k - 1) as f64 * hd(k as i32 - 2) * spectrum.normalized_h(l as i32 - 1);
                        let rhs = (l - 1) as f64 * spectrum.normalized_h(k as i32 - 1) * hd(l as i32 - 2);
                        (lhs, rhs)
                    });
                    out.push(tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, l));
                }
                Ok(out)
            }
            Self::CombinationMean { k } => {
                require_garding(spectrum, k)?;
                let mut out = Vec::new();
                for variant in combination_variants(k, spectrum.len()) {
                    let combo = RandomCombo::draw(rng, variant, k);
                    let h = |j: i64| if j < 0 { 0.0 } else { spectrum.normalized_h(j as i32) };
                    let c = combo.ratio(|j| h(j as i64));
                    let (lhs, rhs) = match variant {
                        Variant::FromOne => (
                            combo.b_sum(|j| c * h(j as i64 - 1)),
                            combo.a_sum(|i| h(i as i64 - 1)),
                        ),
                        Variant::FromZero => (
                            combo.a_sum(|i| h(i as i64 + 1)),
                            combo.b_sum(|j| c * h(j as i64 + 1)),
                        ),
                    };
                    out.push(
                        tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, combo.l)
                            .with("variant", variant.label()),
                    );
                }
                Ok(out)
            }
            Self::CombinationPointwise { k } => {
                require_garding(spectrum, k)?;
                let mut out = Vec::new();
                for variant in combination_variants(k, spectrum.len()) {
                    let combo = RandomCombo::draw(rng, variant, k);
                    let h = |o: i64| if o < 0 { 0.0 } else { spectrum.normalized_h(o as i32) };
                    let c = combo.ratio(|j| h(j as i64));
                    let (lhs, rhs) = worst_deleted(spectrum, |p| {
                        let hd = |o: i64| if o < 0 { 0.0 } else { spectrum.normalized_h_deleted(o as i32, p).unwrap() };
                        match variant {
                            Variant::FromOne => (
                                combo.b_sum(|j| c * (j as f64 - 1.0) * hd(j as i64 - 2)),
                                combo.a_sum(|i| (i as f64 - 1.0) * hd(i as i64 - 2)),
                            ),
                            Variant::FromZero => (
                                combo.b_sum(|j| c * j as f64 * hd(j as i64 - 1)),
                                combo.a_sum(|i| i as f64 * hd(i as i64 - 1)),
                            ),
                        }
                    });
                    out.push(
                        tag(CheckReport::inequality(self.name(), lhs, rhs, INEQUALITY_TOL), spectrum, k, combo.l)
                            .with("variant", variant.label()),
                    );
                }
                Ok(out)
            }
            Self::RefinedNewtonMaclaurin { k } => Ok(vec![check_refined_nm(spectrum, k)?]),
            Self::GeneralNewtonMaclaurin { k } => Ok(vec![check_general_nm(spectrum, k)?]),
            Self::XFamily { s, t } => Ok(vec![check_x_log_concavity(&HatSpectrum::from_spectrum(spectrum)?, s, t)?]),
            Self::SphericalX { k } => Ok(vec![check_spherical_ineq(spectrum, 1, k as i32 - 1)?.with("k", k)]),
            Self::PermutationSum { k } => Ok(vec![check_permutation_sum(spectrum, k)?]),
        }
    }

    fn cone_for(&self, spectrum: &PrincipalSpectrum) -> Cone {
        match self.cone() {
            Cone::Horoconvex => Cone::Horoconvex,
            _ => Cone::Garding { k: spectrum.len() },
        }
    }
}

fn require_garding(spectrum: &PrincipalSpectrum, k: usize) -> Result<()> {
    if cone_membership(spectrum, ConeLabel::open(k)) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("spectrum is outside the {k}-th Gårding cone")))
    }
}

fn tag(report: CheckReport, spectrum: &PrincipalSpectrum, k: usize, l: usize) -> CheckReport {
    report.with("n", spectrum.ambient_dim()).with("k", k).with("l", l)
}

/// The `(lhs, rhs)` pair with the smallest scaled gap over deleted entries.
fn worst_deleted<F>(spectrum: &PrincipalSpectrum, f: F) -> (f64, f64)
where
    F: Fn(usize) -> (f64, f64),
{
    let mut best = f(0);
    let mut gap = crate::check::scaled_gap(best.0, best.1);
    for j in 1..spectrum.len() {
        let pair = f(j);
        let g = crate::check::scaled_gap(pair.0, pair.1);
        if g < gap {
            best = pair;
            gap = g;
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    /// `a_1..a_{l−1}`, `2 ≤ l < k`.
    FromOne,
    /// `a_0..a_{l−1}`, `1 ≤ l < k ≤ n − 2`.
    FromZero,
}

impl Variant {
    fn label(&self) -> &'static str {
        match self {
            Variant::FromOne => "a-from-1",
            Variant::FromZero => "a-from-0",
        }
    }
}

fn combination_variants(k: usize, len: usize) -> Vec<Variant> {
    let mut v = Vec::new();
    if k >= 3 {
        v.push(Variant::FromOne);
    }
    if k + 1 <= len {
        v.push(Variant::FromZero);
    }
    v
}

/// Nonnegative coefficients `a_i` (`i` in `lo..l`) and `b_j` (`j` in `l..=k`),
/// not all zero on either side.
struct RandomCombo {
    l: usize,
    lo: usize,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RandomCombo {
    fn draw(rng: &mut ChaCha8Rng, variant: Variant, k: usize) -> Self {
        let lo = if variant == Variant::FromOne { 1 } else { 0 };
        let l = rng.random_range(lo + 1..k);
        let side = |rng: &mut ChaCha8Rng, len: usize| -> Vec<f64> {
            let mut c: Vec<f64> = (0..len)
                .map(|_| if rng.random::<f64>() < 0.3 { 0.0 } else { rng.random::<f64>() })
                .collect();
            if c.iter().all(|&x| x == 0.0) {
                let j = rng.random_range(0..len);
                c[j] = 1.0;
            }
            c
        };
        let a = side(rng, l - lo);
        let b = side(rng, k - l + 1);
        Self { l, lo, a, b }
    }

    fn a_sum(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.a.iter().enumerate().map(|(i, c)| c * f(self.lo + i)).sum()
    }

    fn b_sum(&self, f: impl Fn(usize) -> f64) -> f64 {
        self.b.iter().enumerate().map(|(j, c)| c * f(self.l + j)).sum()
    }

    /// `c = Σ a_i H_i / Σ b_j H_j`, which rescales `b` onto the constraint.
    fn ratio(&self, h: impl Fn(usize) -> f64) -> f64 {
        self.a_sum(&h) / self.b_sum(&h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property::sampler::sample_rng;

    fn spec(k: &[f64]) -> PrincipalSpectrum {
        PrincipalSpectrum::new(k.to_vec()).unwrap()
    }

    #[test]
    fn newton_maclaurin_is_tight_on_isotropic_spectra() {
        let mut rng = sample_rng(0, 0);
        let nm4 = PropertyCheck::NewtonMaclaurin { k: 4 };
        for r in nm4.evaluate(&spec(&[1.3; 5]), &mut rng).unwrap() {
            assert!(r.pass && r.residual.abs() < 1e-15);
        }
        let nm3 = PropertyCheck::NewtonMaclaurin { k: 3 };
        for r in nm3.evaluate(&spec(&[3.0, 1.0, 0.2, 0.1]), &mut rng).unwrap() {
            assert!(r.pass && r.residual > 1e-3);
        }
    }

    #[test]
    fn quotient_pointwise_hand_case() {
        // κ = (2, 1, 1), k = 2, l = 1: (k−1) H_0(Λ_j) H_0 = 1 > 0.
        let mut rng = sample_rng(0, 0);
        let r = PropertyCheck::QuotientPointwise { k: 2 }.evaluate(&spec(&[2.0, 1.0, 1.0]), &mut rng).unwrap();
        assert_eq!((r[0].lhs, r[0].rhs), (1.0, 0.0));
    }

    #[test]
    fn combination_forms_hold_with_equality_on_isotropic_spectra() {
        let mut rng = sample_rng(5, 1);
        for check in [PropertyCheck::CombinationMean { k: 4 }, PropertyCheck::CombinationPointwise { k: 4 }] {
            let reports = check.evaluate(&spec(&[1.0; 6]), &mut rng).unwrap();
            assert_eq!(reports.len(), 2);
            for r in reports {
                assert!(r.pass, "{r:?}");
            }
        }
    }

    #[test]
    fn preconditions_are_input_errors() {
        let mut rng = sample_rng(0, 0);
        let r = PropertyCheck::RefinedNewtonMaclaurin { k: 1 }.evaluate(&spec(&[0.5, 2.0, 2.0]), &mut rng);
        assert!(matches!(r, Err(Error::Precondition(_))));
        let r = PropertyCheck::NewtonMaclaurin { k: 3 }.evaluate(&spec(&[1.0, -5.0, 1.0]), &mut rng);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn admissibility_follows_the_cone() {
        let nm = PropertyCheck::NewtonMaclaurin { k: 3 };
        assert!(nm.admissible(Cone::Garding { k: 3 }, 5).is_ok());
        assert!(nm.admissible(Cone::Garding { k: 2 }, 5).is_err());
        assert!(nm.admissible(Cone::Horoconvex, 5).is_err());
        let p = PropertyCheck::RefinedNewtonMaclaurin { k: 2 };
        assert!(p.admissible(Cone::Horoconvex, 5).is_ok());
        assert!(p.admissible(Cone::Horoconvex, 4).is_err());
        assert!(PropertyCheck::SphericalX { k: 2 }.admissible(Cone::Convex2k { k: 2 }, 4).is_ok());
    }
}
