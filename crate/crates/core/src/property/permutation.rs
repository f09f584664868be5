//! The brute-force permutation sum against `Ĥ_1 L̃_k − O_k` on sampled
//! horoconvex spectra: signs must agree and the ratio must be constant per
//! `(n, k)`.

use super::sampler::{draw, Cone, SamplerSpec};
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::invariants::{permutation_sum, tilde_l_hat, tilde_n_hat_odd, HatSpectrum, STRICT_THRESHOLD};
use crate::symmetric::factorial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const RATIO_TOL: f64 = 1e-8;
/// Samples whose gap is below this fraction of `Ĥ_1 L̃_k + O_k` are too close
/// to equality for a stable ratio and only take part in the sign test.
const RATIO_FLOOR: f64 = 1e-8;

/// `m² (m−1)(m−2)⋯(m−2k) / k!` with `m = n − 1`.
pub fn permutation_ratio(len: usize, k: usize) -> f64 {
    let m = len as f64;
    let falling: f64 = (1..=2 * k).map(|j| m - j as f64).product();
    m * m * falling / factorial(k as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioStudy {
    pub n: usize,
    pub k: usize,
    pub samples: u64,
    pub sign_mismatches: u64,
    pub ratio_samples: u64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub expected: f64,
}

impl RatioStudy {
    /// `(max − min) / |expected|` over the measured ratios.
    pub fn spread(&self) -> f64 {
        (self.ratio_max - self.ratio_min) / self.expected.abs()
    }

    pub fn deviation(&self) -> f64 {
        (self.ratio_max - self.expected).abs().max((self.ratio_min - self.expected).abs()) / self.expected.abs()
    }

    pub fn pass(&self) -> bool {
        self.sign_mismatches == 0 && self.ratio_samples > 0 && self.spread() <= RATIO_TOL && self.deviation() <= RATIO_TOL
    }

    pub fn to_report(&self) -> CheckReport {
        CheckReport::composite("permutation-ratio", self.spread(), RATIO_TOL, self.pass())
            .with("n", self.n)
            .with("k", self.k)
            .with("samples", self.samples)
            .with("sign_mismatches", self.sign_mismatches)
            .with("ratio_samples", self.ratio_samples)
            .with("ratio_min", self.ratio_min)
            .with("ratio_max", self.ratio_max)
            .with("expected", self.expected)
            .with("deviation", self.deviation())
    }
}

/// Draws `count` horoconvex spectra of length `n − 1` and compares the sum with the gap.
pub fn ratio_study(n: usize, k: usize, count: u64, seed: u64) -> Result<RatioStudy> {
    let spec = SamplerSpec::new(Cone::Horoconvex, n, count, seed);
    spec.validate()?;
    let len = spec.len();
    if k == 0 || 2 * k + 1 > len {
        return Err(Error::InvalidParameter(format!("need 1 <= k and 2k + 1 <= {len}, got k={k}")));
    }
    let rows = (0..count)
        .into_par_iter()
        .map(|i| -> Result<(bool, Option<f64>)> {
            let (d, _) = draw(&spec, i)?;
            let sum = permutation_sum(&d.spectrum, k)?;
            let hat = HatSpectrum::from_spectrum(&d.spectrum)?;
            let (hl, odd) = (hat.h(1) * tilde_l_hat(&hat, k), tilde_n_hat_odd(&hat, k));
            let gap = hl - odd;
            let scale = (hl.abs() + odd.abs()).max(f64::MIN_POSITIVE);
            let tight = gap.abs() <= RATIO_FLOOR * scale;
            let agree = tight || (sum > STRICT_THRESHOLD) == (gap > 0.0);
            Ok((agree, (!tight).then(|| sum / gap)))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.1).collect();
    Ok(RatioStudy {
        n,
        k,
        samples: count,
        sign_mismatches: rows.iter().filter(|r| !r.0).count() as u64,
        ratio_samples: ratios.len() as u64,
        ratio_min: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        ratio_max: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        expected: permutation_ratio(len, k),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_matches_measured_constants() {
        assert_eq!(permutation_ratio(3, 1), 18.0);
        assert_eq!(permutation_ratio(7, 1), 1470.0);
        assert_eq!(permutation_ratio(5, 2), 300.0);
        assert_eq!(permutation_ratio(7, 2), 8820.0);
    }

    #[test]
    fn ratio_is_constant_on_samples() {
        let s = ratio_study(6, 2, 50, 3).unwrap();
        assert!(s.pass(), "{s:?}");
        assert_eq!(s.ratio_samples, 50);
    }
}
