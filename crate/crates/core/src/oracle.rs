//! Randomized cross-checks between independent evaluations of the same
//! quantity: the Newton tensor by recurrence and by delta expansion, and the
//! Gauss-Bonnet curvatures by tensor contraction and by mean curvatures.

use crate::check::CheckReport;
use crate::error::Result;
use crate::invariants::{gauss_riemann, lk_from_h, lk_from_riemann, SpaceFormSign};
use crate::property::sampler::sample_rng;
use crate::symmetric::{newton_tensor, newton_tensor_delta, PrincipalSpectrum, ShapeMatrix};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

pub const GAUSS_BONNET_TOL: f64 = 1e-9;
pub const NEWTON_TENSOR_TOL: f64 = 1e-12;

/// `|a − b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_gap(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn random_diagonal(dim: usize, seed: u64, index: u64) -> Vec<f64> {
    let mut rng = sample_rng(seed, index);
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn random_shape(dim: usize, seed: u64, index: u64) -> ShapeMatrix {
    let mut rng = sample_rng(seed, index);
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    ShapeMatrix::new(m).expect("finite entries")
}

fn stream(seed: u64, dim: usize, k: usize, tag: u64) -> u64 {
    seed ^ ((dim as u64) << 40) ^ ((k as u64) << 32) ^ (tag << 24)
}

/// Worst relative gap between `L_k` from the curvature tensor of the Gauss
/// equation and `C(n−1,2k)(2k)! Σ C(k,i) ε^i H_{2k−2i}`, over `count` random
/// diagonal second fundamental forms.
pub fn gauss_bonnet_oracle(dim: usize, k: usize, eps: SpaceFormSign, count: u64, seed: u64) -> Result<CheckReport> {
    let gaps = (0..count)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let kappa = random_diagonal(dim, stream(seed, dim, k, eps.value() as u64 & 3), i);
            let contracted = lk_from_riemann(&gauss_riemann(&ShapeMatrix::diagonal(&kappa), eps), k)?;
            let expanded = lk_from_h(&PrincipalSpectrum::new(kappa)?, eps, k);
            Ok(relative_gap(contracted, expanded))
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    Ok(
        CheckReport::composite("gauss-bonnet-oracle", worst, GAUSS_BONNET_TOL, worst <= GAUSS_BONNET_TOL)
            .with("n", dim + 1)
            .with("k", k)
            .with("eps", eps.value())
            .with("samples", count),
    )
}

/// Worst relative max-entry gap between `T_k` by recurrence and by the
/// generalized Kronecker delta, over random symmetric matrices.
pub fn newton_tensor_oracle(dim: usize, k: usize, count: u64, seed: u64) -> Result<CheckReport> {
    let gaps = (0..count)
        .into_par_iter()
        .map(|i| -> Result<f64> {
            let b = random_shape(dim, stream(seed, dim, k, 7), i);
            let r = newton_tensor(&b, k as i32);
            let d = newton_tensor_delta(&b, k as i32)?;
            // Floor at |B|^k: T_k vanishes identically once k >= dim.
            let floor = b.entries().amax().powi(k as i32);
            let scale = r.entries().iter().chain(d.entries().iter()).fold(floor, |s, x| s.max(x.abs()));
            let diff = (r.entries() - d.entries()).amax();
            Ok(if scale == 0.0 { 0.0 } else { diff / scale })
        })
        .collect::<Result<Vec<f64>>>()?;
    let worst = gaps.iter().copied().fold(0.0, f64::max);
    Ok(
        CheckReport::composite("newton-tensor-oracle", worst, NEWTON_TENSOR_TOL, worst <= NEWTON_TENSOR_TOL)
            .with("n", dim + 1)
            .with("k", k)
            .with("samples", count),
    )
}
