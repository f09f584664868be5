use approx::assert_relative_eq;
use std::f64::consts::PI;
use warpcurv::ambient::{model_library, WarpedModel};
use warpcurv::integral::*;
use warpcurv::quadrature::CompositeRule;
use warpcurv::surface::{sphere_area, ProfileCurve, RevolutionSurface};

const NODES: usize = 1024;

#[test]
fn composite_rule_integrates_sine_and_polynomials() {
    let rule = CompositeRule::new(0.0, PI, 64).unwrap();
    let sine: Vec<f64> = rule.points.iter().map(|t| t.sin()).collect();
    assert_relative_eq!(rule.apply(&sine), 2.0, max_relative = 1e-14);
    let rule = CompositeRule::new(-1.0, 2.0, 16).unwrap();
    let poly: Vec<f64> = rule.points.iter().map(|x| x.powi(31)).collect();
    assert_relative_eq!(rule.apply(&poly), (2f64.powi(32) - 1.0) / 32.0, max_relative = 1e-13);
    assert!(CompositeRule::new(0.0, 1.0, 40).is_err());
}

#[test]
fn slices_are_umbilical_with_the_warping_ratio() {
    for model in model_library(4).unwrap() {
        let r0 = 0.5 * (model.horizon().unwrap_or(0.0) + model.r_max().min(3.0));
        let s = RevolutionSurface::new(model.clone(), ProfileCurve::slice(r0)).unwrap();
        let w = model.warping(r0).unwrap();
        for t in [0.3, 1.2, 2.9] {
            let p = s.geometry_at(t).unwrap();
            assert_relative_eq!(p.kappa_profile, w.d1 / w.lambda, max_relative = 1e-10);
            assert_relative_eq!(p.kappa_rot, w.d1 / w.lambda, max_relative = 1e-10);
            assert_relative_eq!(p.x_dot_nu, w.lambda, max_relative = 1e-12);
        }
        let area = s.sample(NODES).unwrap().area().unwrap();
        assert_relative_eq!(area, w.lambda.powi(3) * sphere_area(3), max_relative = 1e-12);
    }
}

#[test]
fn closed_form_warpings() {
    let cases = [
        (WarpedModel::euclidean(4).unwrap(), 1.3),
        (WarpedModel::sphere(4).unwrap(), 1.3f64.sin()),
        (WarpedModel::hyperbolic(4).unwrap(), 1.3f64.sinh()),
    ];
    for (m, expected) in cases {
        assert_relative_eq!(m.lambda(1.3).unwrap(), expected, max_relative = 1e-14);
    }
}

#[test]
fn minkowski_on_a_slice_matches_closed_form() {
    let model = WarpedModel::hyperbolic(5).unwrap();
    let s = RevolutionSurface::new(model, ProfileCurve::slice(0.9)).unwrap();
    let (l, v) = (0.9f64.sinh(), 0.9f64.cosh());
    for k in 1..=4 {
        let r = minkowski_spaceform(&s, k, NODES, SPACE_FORM_TOL).unwrap();
        let expected = l * (v / l).powi(k as i32) * l.powi(4) * sphere_area(4);
        assert!(r.pass, "{r:?}");
        assert_relative_eq!(r.lhs, expected, max_relative = 1e-12);
    }
}

#[test]
fn identities_hold_on_perturbed_spheres() {
    let h = RevolutionSurface::new(WarpedModel::hyperbolic(4).unwrap(), ProfileCurve::perturbed(1.0, 0.05, 3)).unwrap();
    for k in 1..=3 {
        assert!(minkowski_spaceform(&h, k, NODES, SPACE_FORM_TOL).unwrap().pass);
    }
    let ads = WarpedModel::schwarzschild(4, 2.0, 1.0, 0.0, 4.0).unwrap();
    let r0 = ads.horizon().unwrap() + 0.8;
    let s = RevolutionSurface::new(ads, ProfileCurve::perturbed(r0, 0.05, 2)).unwrap();
    for k in 1..=2 {
        let r = minkowski_warped(&s, k, NODES, WARPED_TOL).unwrap();
        assert!(r.pass, "{r:?}");
        for w in minkowski_weighted(&s, k, NODES, WARPED_TOL).unwrap() {
            assert!(w.pass, "{w:?}");
        }
    }
}

#[test]
fn heintze_karcher_is_strict_off_umbilical() {
    let model = WarpedModel::sphere(4).unwrap();
    let slice = RevolutionSurface::new(model.clone(), ProfileCurve::slice(0.8)).unwrap();
    let bump = RevolutionSurface::new(model, ProfileCurve::perturbed(0.8, 0.05, 2)).unwrap();
    let eq = heintze_karcher(&slice, NODES, HK_TOL).unwrap();
    let strict = heintze_karcher(&bump, NODES, HK_TOL).unwrap();
    assert!(eq.pass && eq.residual.abs() <= UMBILIC_TOL);
    assert!(strict.pass && strict.residual > UMBILIC_TOL);
}

#[test]
fn rigidity_distinguishes_slices_from_bumps() {
    let model = WarpedModel::hyperbolic(4).unwrap();
    let target = RigidityTarget::Quotient { k: 2, l: 1 };
    let slice = RevolutionSurface::new(model.clone(), ProfileCurve::slice(1.1)).unwrap();
    let bump = RevolutionSurface::new(model.clone(), ProfileCurve::perturbed(1.1, 0.01, 2)).unwrap();
    let a = rigidity_residual(&slice, &target, NODES, RIGIDITY_TOL).unwrap();
    let b = rigidity_residual(&bump, &target, NODES, RIGIDITY_TOL).unwrap();
    assert!(a.pass && a.residual <= RIGIDITY_TOL);
    assert!(b.pass && b.residual > 10.0 * RIGIDITY_TOL);
    let scaling = oscillation_scaling(&model, 1.1, 0.01, 2, &target, NODES).unwrap();
    assert!(scaling.pass, "{scaling:?}");
}

#[test]
fn convergence_reaches_the_floor() {
    let s = RevolutionSurface::new(WarpedModel::euclidean(4).unwrap(), ProfileCurve::perturbed(1.0, 0.1, 6)).unwrap();
    let r = convergence_study("minkowski-space-form", &[16, 32, 64, 128, 256], |n| {
        minkowski_spaceform(&s, 2, n, SPACE_FORM_TOL)
    })
    .unwrap();
    assert!(r.pass, "{r:?}");
}
