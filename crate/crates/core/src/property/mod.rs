//! Randomized sweeps of the pointwise inequalities.

pub mod atlas;
pub mod checks;
pub mod permutation;
pub mod sampler;
pub mod sweep;

pub use atlas::{equality_atlas, AtlasCheck, AtlasReport};
pub use checks::PropertyCheck;
pub use permutation::{ratio_study, RatioStudy};
pub use sampler::{sample, Cone, SamplerSpec};
pub use sweep::{sweep, SweepSummary, ViolationRecord};

/// Largest spectrum length covered by the standard plan.
pub const MAX_LEN: usize = 10;

/// A sampler together with the checks run on its samples.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub spec: SamplerSpec,
    pub checks: Vec<PropertyCheck>,
}

fn plan_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Newton-Maclaurin family on `Γ_k^+` for every `2 ≤ k ≤ n − 1`, `3 ≤ n − 1 ≤ 10`.
pub fn newton_maclaurin_plan(count: u64, seed: u64, with_quotients: bool) -> Vec<SweepPlan> {
    let mut out = Vec::new();
    for len in 3..=MAX_LEN {
        for k in 2..=len {
            let mut checks = vec![PropertyCheck::NewtonMaclaurin { k }, PropertyCheck::MaclaurinPower { k }];
            if with_quotients {
                checks.extend([
                    PropertyCheck::QuotientChain { k },
                    PropertyCheck::QuotientPointwise { k },
                    PropertyCheck::CombinationMean { k },
                    PropertyCheck::CombinationPointwise { k },
                ]);
            }
            let spec = SamplerSpec::new(Cone::Garding { k }, len + 1, count, plan_seed(seed, out.len()));
            out.push(SweepPlan { spec, checks });
        }
    }
    out
}

/// Refined and general hyperbolic forms on horoconvex samples, every
/// admissible `(n, k)` with `n − 1 ≤ 10`.
pub fn hyperbolic_plan(count: u64, seed: u64) -> Vec<SweepPlan> {
    let mut out = Vec::new();
    for len in 3..=MAX_LEN {
        let mut checks = Vec::new();
        for k in 1..=(len - 1) / 2 {
            checks.push(PropertyCheck::RefinedNewtonMaclaurin { k });
            checks.push(PropertyCheck::GeneralNewtonMaclaurin { k });
        }
        let spec = SamplerSpec::new(Cone::Horoconvex, len + 1, count, plan_seed(seed ^ 0x4843, out.len()));
        out.push(SweepPlan { spec, checks });
    }
    out
}

/// Log-concavity of `X_{s,t}` for `1 ≤ s ≤ 6`, `0 ≤ t ≤ 4`.
pub fn x_family_plan(count: u64, seed: u64) -> Vec<SweepPlan> {
    let checks: Vec<PropertyCheck> =
        (1..=6).flat_map(|s| (0..=4).map(move |t| PropertyCheck::XFamily { s, t })).collect();
    [4usize, 7, 10]
        .iter()
        .enumerate()
        .map(|(i, &len)| SweepPlan {
            spec: SamplerSpec::new(Cone::Horoconvex, len + 1, count, plan_seed(seed ^ 0x5846, i)),
            checks: checks.clone(),
        })
        .collect()
}

/// The spherical family on `2k`-convex samples, `2 ≤ n − 1 ≤ 10`.
pub fn spherical_plan(count: u64, seed: u64) -> Vec<SweepPlan> {
    let mut out = Vec::new();
    for len in 2..=MAX_LEN {
        for k in 1..=len / 2 {
            let spec = SamplerSpec::new(Cone::Convex2k { k }, len + 1, count, plan_seed(seed ^ 0x5350, out.len()));
            out.push(SweepPlan { spec, checks: vec![PropertyCheck::SphericalX { k }] });
        }
    }
    out
}

/// Brute-force permutation sums for `n − 1 ≤ 7`, `k ≤ 2`.
pub fn permutation_plan(count: u64, seed: u64) -> Vec<SweepPlan> {
    let mut out = Vec::new();
    for len in 3..=7 {
        let checks: Vec<PropertyCheck> =
            (1..=2).filter(|k| 2 * k + 1 <= len).map(|k| PropertyCheck::PermutationSum { k }).collect();
        let spec = SamplerSpec::new(Cone::Horoconvex, len + 1, count, plan_seed(seed ^ 0x5053, out.len()));
        out.push(SweepPlan { spec, checks });
    }
    out
}
