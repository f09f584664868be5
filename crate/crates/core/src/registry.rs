//! Every check the tool can run, in a fixed order, with the statement it verifies.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CheckInfo {
    pub name: &'static str,
    /// Suite kind that runs the check.
    pub suite: &'static str,
    /// The statement the check verifies.
    pub anchor: &'static str,
}

const fn info(name: &'static str, suite: &'static str, anchor: &'static str) -> CheckInfo {
    CheckInfo { name, suite, anchor }
}

pub const REGISTRY: &[CheckInfo] = &[
    info("newton-tensor-oracle", "oracle", "Newton tensor recurrence vs generalized Kronecker delta"),
    info("gauss-bonnet-oracle", "oracle", "Gauss-Bonnet curvature L_k as a combination of mean curvatures"),
    info("newton-maclaurin", "sweep", "Newton-Maclaurin inequality H_{k-1}H_{k+1} <= H_k^2 on the Garding cone"),
    info("maclaurin-power", "sweep", "Maclaurin inequality H_l >= H_k^{l/k} on the Garding cone"),
    info("quotient-chain", "sweep", "monotone chain of curvature quotients H_k/H_{k-1}"),
    info("quotient-pointwise", "sweep", "pointwise quotient inequality behind the H_k/H_l rigidity"),
    info("combination-mean", "sweep", "mean-curvature combination inequality for linear curvature relations"),
    info("combination-pointwise", "sweep", "pointwise combination inequality with a deleted curvature"),
    info("refined-newton-maclaurin", "sweep", "refined Newton-Maclaurin inequality for L and N on horoconvex spectra"),
    info("general-newton-maclaurin", "sweep", "general Newton-Maclaurin inequality N_{k-1}L_k >= N_k L_{k-1} on horoconvex spectra"),
    info("x-family-log-concavity", "sweep", "log-concavity of the X_{s,t} family on nonnegative hat spectra"),
    info("spherical-x-family", "sweep", "spherical X_{s,t} inequality on 2k-convex spectra"),
    info("permutation-sum", "sweep", "permutation-sum form of the refined inequality, sign agreement"),
    info("permutation-ratio", "permutation", "constant ratio of the permutation sum to the hat gap"),
    info("refined-newton-maclaurin-equality-atlas", "atlas", "equality cases of the refined Newton-Maclaurin inequality"),
    info("general-newton-maclaurin-equality-atlas", "atlas", "equality cases of the general Newton-Maclaurin inequality"),
    info("minkowski-space-form", "integral", "Minkowski formula in space forms"),
    info("minkowski-warped", "integral", "Minkowski formula in warped products with the A_11 correction"),
    info("minkowski-weighted", "integral", "weighted Minkowski formula with the gradient term"),
    info("minkowski-weighted-inequality", "integral", "weighted Minkowski inequality for k-convex hypersurfaces"),
    info("heintze-karcher", "integral", "Heintze-Karcher inequality for mean-convex hypersurfaces"),
    info("lk-minkowski", "integral", "Minkowski formula for the Gauss-Bonnet curvatures L_k and N_k"),
    info("rigidity-oscillation", "rigidity", "rigidity of constant curvature quotients, weighted means and combinations"),
    info("rigidity-scaling", "scaling", "linear dependence of the rigidity oscillation on the perturbation"),
    info("quadrature-convergence", "convergence", "node-doubling convergence of an integral identity"),
];

pub fn lookup(name: &str) -> Option<&'static CheckInfo> {
    REGISTRY.iter().find(|c| c.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn registry_is_large_and_unique() {
        assert!(REGISTRY.len() >= 15);
        let names: BTreeSet<_> = REGISTRY.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|c| !c.anchor.is_empty()));
    }

    #[test]
    fn every_property_check_is_registered() {
        use crate::property::{AtlasCheck, PropertyCheck};
        let checks = [
            PropertyCheck::NewtonMaclaurin { k: 2 },
            PropertyCheck::MaclaurinPower { k: 2 },
            PropertyCheck::QuotientChain { k: 2 },
            PropertyCheck::QuotientPointwise { k: 2 },
            PropertyCheck::CombinationMean { k: 2 },
            PropertyCheck::CombinationPointwise { k: 2 },
            PropertyCheck::RefinedNewtonMaclaurin { k: 2 },
            PropertyCheck::GeneralNewtonMaclaurin { k: 2 },
            PropertyCheck::XFamily { s: 1, t: 0 },
            PropertyCheck::SphericalX { k: 1 },
            PropertyCheck::PermutationSum { k: 1 },
        ];
        for c in checks {
            assert!(lookup(c.name()).is_some(), "{}", c.name());
        }
        for a in [AtlasCheck::RefinedNewtonMaclaurin, AtlasCheck::GeneralNewtonMaclaurin] {
            assert!(lookup(&format!("{}-equality-atlas", a.name())).is_some());
        }
    }
}
