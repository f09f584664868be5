//! Deterministic cone samplers. Sample `i` of a run with seed `s` is drawn
//! from the ChaCha8 stream `i` of key `s`, so results do not depend on how
//! samples are distributed over threads.

use crate::error::{Error, Result};
use crate::symmetric::{cone_membership, ConeLabel, PrincipalSpectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Draw cap after which a cone is declared unreachable.
pub const MAX_DRAWS: u64 = 1_000_000;
/// Acceptance rate below which a cone is declared unreachable.
pub const MIN_ACCEPTANCE: f64 = 1e-3;
/// One sample in ten is pushed toward the cone boundary.
pub const BOUNDARY_EVERY: u64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Cone {
    Garding { k: usize },
    Horoconvex,
    Convex2k { k: usize },
}

impl Cone {
    /// Order of the Gårding cone the draws must lie in, if any.
    pub fn garding_order(&self, len: usize) -> Option<usize> {
        match *self {
            Cone::Garding { k } => Some(k.min(len)),
            Cone::Convex2k { k } => Some((2 * k).min(len)),
            Cone::Horoconvex => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Cone::Garding { k } => format!("garding({k})"),
            Cone::Horoconvex => "horoconvex".into(),
            Cone::Convex2k { k } => format!("convex-2k({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    pub cone: Cone,
    /// Ambient dimension; spectra have `n − 1` entries.
    pub n: usize,
    pub count: u64,
    pub seed: u64,
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_scale() -> f64 {
    1.0
}

impl SamplerSpec {
    pub fn new(cone: Cone, n: usize, count: u64, seed: u64) -> Self {
        Self { cone, n, count, seed, scale: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 1 {
            return Err(Error::InvalidParameter("sample count must be at least 1".into()));
        }
        if self.n < 3 {
            return Err(Error::InvalidParameter(format!("need n − 1 >= 2, got n = {}", self.n)));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be positive, got {}", self.scale)));
        }
        if let Some(k) = self.cone.garding_order(usize::MAX) {
            if k == 0 || k > self.n - 1 {
                return Err(Error::InvalidParameter(format!(
                    "cone {} needs order in 1..={}",
                    self.cone.label(),
                    self.n - 1
                )));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n - 1
    }
}

/// The generator for sample `index`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A drawn spectrum and the number of proposals it took.
#[derive(Debug, Clone, PartialEq)]
pub struct Draw {
    pub spectrum: PrincipalSpectrum,
    pub proposals: u64,
}

/// Repeats `propose` until `accept` holds, giving up after [`MAX_DRAWS`] proposals.
pub fn rejection_sample<R, P, A>(rng: &mut R, mut propose: P, accept: A) -> Result<(Vec<f64>, u64)>
where
    R: Rng,
    P: FnMut(&mut R) -> Vec<f64>,
    A: Fn(&[f64]) -> bool,
{
    for tries in 1..=MAX_DRAWS {
        let x = propose(rng);
        if accept(&x) {
            return Ok((x, tries));
        }
    }
    Err(Error::Unreachable(format!("no accepted draw in {MAX_DRAWS} proposals")))
}

fn normal<R: Rng>(rng: &mut R) -> f64 {
    rng.sample::<f64, _>(StandardNormal)
}

/// Mixture of positive-dominant proposals.
fn garding_proposal<R: Rng>(rng: &mut R, len: usize, scale: f64) -> Vec<f64> {
    let u: f64 = rng.random();
    if u < 0.4 {
        (0..len).map(|_| scale * normal(rng).abs()).collect()
    } else if u < 0.8 {
        let shift: f64 = rng.random_range(0.0..1.5);
        (0..len).map(|_| scale * (normal(rng) + shift)).collect()
    } else {
        let mut x: Vec<f64> = (0..len).map(|_| scale * normal(rng)).collect();
        let j = rng.random_range(0..len);
        x[j] = scale * (len as f64) * normal(rng).abs();
        x
    }
}

/// Moves the smallest entry down until the spectrum is within a random
/// relative distance `10^{−u}`, `u ∈ [1, 8]`, of leaving `Γ_k^+`.
fn push_to_garding_boundary<R: Rng>(rng: &mut R, kappa: &[f64], k: usize) -> Vec<f64> {
    let inside = |t: f64| -> bool {
        let mut y = kappa.to_vec();
        let j = argmin(kappa);
        y[j] -= t;
        PrincipalSpectrum::new(y).is_ok_and(|s| cone_membership(&s, ConeLabel::open(k)))
    };
    let mut hi = kappa.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let mut grow = 0;
    while inside(hi) {
        hi *= 2.0;
        grow += 1;
        if grow > 60 {
            return kappa.to_vec();
        }
    }
    let mut lo = 0.0;
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u: f64 = rng.random_range(1.0..8.0);
    let t = lo * (1.0 - 10f64.powf(-u));
    let mut y = kappa.to_vec();
    y[argmin(kappa)] -= t;
    if inside(t) {
        y
    } else {
        kappa.to_vec()
    }
}

fn argmin(x: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in x.iter().enumerate() {
        if *v < x[best] {
            best = i;
        }
    }
    best
}

/// Draws sample `index` of `spec`. The generator is returned so callers can
/// draw auxiliary parameters from the same substream.
pub fn draw(spec: &SamplerSpec, index: u64) -> Result<(Draw, ChaCha8Rng)> {
    let mut rng = sample_rng(spec.seed, index);
    let len = spec.len();
    let boundary = index % BOUNDARY_EVERY == BOUNDARY_EVERY - 1;
    let (kappa, proposals) = match spec.cone {
        Cone::Horoconvex => {
            let mut x: Vec<f64> = (0..len).map(|_| 1.0 + normal(&mut rng).abs() * spec.scale).collect();
            if boundary {
                let j = rng.random_range(0..len);
                let u: f64 = rng.random_range(4.0..10.0);
                x[j] = 1.0 + normal(&mut rng).abs() * spec.scale * 10f64.powf(-u);
            }
            (x, 1)
        }
        cone => {
            let k = cone.garding_order(len).expect("garding cone");
            let (x, tries) = rejection_sample(
                &mut rng,
                |r| garding_proposal(r, len, spec.scale),
                |x| PrincipalSpectrum::new(x.to_vec()).is_ok_and(|s| cone_membership(&s, ConeLabel::open(k))),
            )?;
            if boundary {
                (push_to_garding_boundary(&mut rng, &x, k), tries)
            } else {
                (x, tries)
            }
        }
    };
    Ok((Draw { spectrum: PrincipalSpectrum::new(kappa)?, proposals }, rng))
}

/// The first `spec.count` samples, in index order.
pub fn sample(spec: &SamplerSpec) -> Result<Vec<PrincipalSpectrum>> {
    use rayon::prelude::*;
    spec.validate()?;
    let draws: Vec<Draw> = (0..spec.count)
        .into_par_iter()
        .map(|i| draw(spec, i).map(|(d, _)| d))
        .collect::<Result<_>>()?;
    let proposals: u64 = draws.iter().map(|d| d.proposals).sum();
    if proposals >= MAX_DRAWS && (draws.len() as f64) < MIN_ACCEPTANCE * proposals as f64 {
        return Err(Error::Unreachable(format!(
            "acceptance {} of {proposals} proposals for {}",
            draws.len(),
            spec.cone.label()
        )));
    }
    Ok(draws.into_iter().map(|d| d.spectrum).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let spec = SamplerSpec::new(Cone::Garding { k: 3 }, 7, 5, 42);
        assert_eq!(sample(&spec).unwrap(), sample(&spec).unwrap());
        let other = SamplerSpec { seed: 43, ..spec.clone() };
        assert_ne!(sample(&spec).unwrap(), sample(&other).unwrap());
    }

    #[test]
    fn horoconvex_draws_are_horoconvex() {
        let spec = SamplerSpec::new(Cone::Horoconvex, 6, 2000, 7);
        for s in sample(&spec).unwrap() {
            assert!(s.is_horoconvex(0.0));
        }
    }

    #[test]
    fn garding_draws_pass_the_membership_oracle() {
        let spec = SamplerSpec::new(Cone::Garding { k: 3 }, 7, 5000, 11);
        let draws = sample(&spec).unwrap();
        let mut mixed = 0;
        for s in &draws {
            let k = s.kappa();
            let mut sums = [1.0, 0.0, 0.0, 0.0];
            for &x in k {
                for j in (1..4).rev() {
                    sums[j] += x * sums[j - 1];
                }
            }
            assert!(sums[1] > 0.0 && sums[2] > 0.0 && sums[3] > 0.0, "{k:?}");
            if s.min() < 0.0 {
                mixed += 1;
            }
        }
        assert!(mixed > 100, "only {mixed} draws with a negative entry");
    }

    #[test]
    fn boundary_draws_are_close_to_the_boundary() {
        let spec = SamplerSpec::new(Cone::Garding { k: 2 }, 5, 200, 3);
        let draws = sample(&spec).unwrap();
        let near = draws
            .iter()
            .skip(BOUNDARY_EVERY as usize - 1)
            .step_by(BOUNDARY_EVERY as usize)
            .filter(|s| s.sigma(2) < 1e-1 * s.sigma(1).powi(2))
            .count();
        assert!(near >= 15, "{near}");
    }

    #[test]
    fn unreachable_cone_is_an_error() {
        let mut rng = sample_rng(1, 0);
        let r = rejection_sample(&mut rng, |r| vec![r.random::<f64>()], |x| x[0] > 2.0);
        assert!(matches!(r, Err(Error::Unreachable(_))));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SamplerSpec::new(Cone::Horoconvex, 2, 5, 0).validate().is_err());
        assert!(SamplerSpec::new(Cone::Horoconvex, 4, 0, 0).validate().is_err());
        assert!(SamplerSpec::new(Cone::Garding { k: 4 }, 4, 5, 0).validate().is_err());
    }
}
