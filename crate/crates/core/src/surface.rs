//! Rotationally symmetric hypersurfaces in a warped product with round fiber.
//!
//! The fiber `S^{n-1}` is written with a polar angle `θ`, so the ambient
//! metric reads `dr² + λ(r)²(dθ² + sin²θ g_{S^{n-2}})` and a hypersurface
//! is generated by a profile `t ↦ (r(t), θ(t))` in the half-plane
//! `dr² + λ² dθ²`, `t ∈ [0, π]`, meeting the axis at both ends.

use crate::ambient::WarpedModel;
use crate::error::{Error, Result};
use crate::invariants::SpaceFormSign;
use crate::quadrature::CompositeRule;
use crate::symmetric::PrincipalSpectrum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourierMode {
    pub mode: u32,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileCurve {
    /// `r ≡ r0`, `θ = t`.
    Slice { r0: f64 },
    /// `r(θ) = r0 + Σ eps_m cos(mθ)`, `θ = t`.
    Graph { r0: f64, modes: Vec<FourierMode> },
    /// Geodesic sphere of radius `radius` whose center lies at distance
    /// `distance` from the origin on the axis `θ = 0`.
    OffsetSphere { distance: f64, radius: f64 },
}

/// Profile coordinates and their first two `t`-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub r: [f64; 3],
    pub theta: [f64; 3],
}

impl ProfileCurve {
    pub fn slice(r0: f64) -> Self {
        Self::Slice { r0 }
    }

    pub fn perturbed(r0: f64, eps: f64, mode: u32) -> Self {
        Self::Graph { r0, modes: vec![FourierMode { mode, eps }] }
    }

    pub fn offset_sphere(distance: f64, radius: f64) -> Self {
        Self::OffsetSphere { distance, radius }
    }

    pub fn label(&self) -> String {
        match self {
            Self::Slice { r0 } => format!("slice(r0={r0})"),
            Self::Graph { r0, modes } => {
                let m: Vec<String> = modes.iter().map(|m| format!("{}:{}", m.mode, m.eps)).collect();
                format!("graph(r0={r0}; {})", m.join(","))
            }
            Self::OffsetSphere { distance, radius } => format!("offset(d={distance}, a={radius})"),
        }
    }

    /// True when the curve is a slice or a sphere centered at the origin.
    pub fn is_centered_sphere(&self) -> bool {
        match self {
            Self::Slice { .. } => true,
            Self::Graph { modes, .. } => modes.iter().all(|m| m.eps == 0.0 || m.mode == 0),
            Self::OffsetSphere { distance, .. } => *distance == 0.0,
        }
    }

    pub fn jet(&self, model: &WarpedModel, t: f64) -> Result<CurveJet> {
        match self {
            Self::Slice { r0 } => Ok(CurveJet { r: [*r0, 0.0, 0.0], theta: [t, 1.0, 0.0] }),
            Self::Graph { r0, modes } => {
                let mut r = [*r0, 0.0, 0.0];
                for m in modes {
                    let k = f64::from(m.mode);
                    let (s, c) = (k * t).sin_cos();
                    r[0] += m.eps * c;
                    r[1] -= m.eps * k * s;
                    r[2] -= m.eps * k * k * c;
                }
                Ok(CurveJet { r, theta: [t, 1.0, 0.0] })
            }
            Self::OffsetSphere { distance, radius } => offset_jet(model, *distance, *radius, t),
        }
    }
}

/// Offset spheres are traced in the 2-plane through the axis, in the flat,
/// hyperboloid or round model: `q(t) = A + B cos t + C sin t`. The spatial
/// components `(q_1, q_2) = λ(r)(cos θ, sin θ)` give `r` and `θ`.
fn offset_jet(model: &WarpedModel, d: f64, a: f64, t: f64) -> Result<CurveJet> {
    let eps = model.space_form().ok_or_else(|| Error::NotSpaceForm(model.name().to_string()))?;
    let (b, c): ([f64; 2], [f64; 2]) = match eps {
        SpaceFormSign::Flat => ([a, 0.0], [0.0, a]),
        SpaceFormSign::Hyperbolic => ([a.sinh() * d.cosh(), 0.0], [0.0, a.sinh()]),
        SpaceFormSign::Spherical => ([a.sin() * d.cos(), 0.0], [0.0, a.sin()]),
    };
    let base: [f64; 2] = match eps {
        SpaceFormSign::Flat => [d, 0.0],
        SpaceFormSign::Hyperbolic => [a.cosh() * d.sinh(), 0.0],
        SpaceFormSign::Spherical => [a.cos() * d.sin(), 0.0],
    };
    let (st, ct) = t.sin_cos();
    let mut x = [0.0; 2];
    let mut x1 = [0.0; 2];
    let mut x2 = [0.0; 2];
    for i in 0..2 {
        x[i] = base[i] + b[i] * ct + c[i] * st;
        x1[i] = -b[i] * st + c[i] * ct;
        x2[i] = -b[i] * ct - c[i] * st;
    }
    let s = x[0].hypot(x[1]);
    if s == 0.0 {
        return Err(Error::InvalidParameter("offset sphere passes through the origin".into()));
    }
    let s1 = (x[0] * x1[0] + x[1] * x1[1]) / s;
    let s2 = (x1[0] * x1[0] + x1[1] * x1[1] + x[0] * x2[0] + x[1] * x2[1]) / s - s1 * s1 / s;
    let th = x[1].atan2(x[0]);
    let th1 = (x[0] * x1[1] - x[1] * x1[0]) / (s * s);
    let th2 = (x[0] * x2[1] - x[1] * x2[0]) / (s * s) - 2.0 * th1 * s1 / s;
    let r = model.r_of_lambda(s)?;
    let w = model.warping(r)?;
    let r1 = s1 / w.d1;
    let r2 = (s2 - w.d2 * r1 * r1) / w.d1;
    Ok(CurveJet { r: [r, r1, r2], theta: [th, th1, th2] })
}

/// Pointwise geometry of the hypersurface at parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfacePoint {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    pub lambda: f64,
    /// `V = λ′(r)`.
    pub v: f64,
    pub lambda_pp: f64,
    /// Principal curvature along the profile, multiplicity 1.
    pub kappa_profile: f64,
    /// Principal curvature of the rotation orbits, multiplicity `n − 2`.
    pub kappa_rot: f64,
    /// `ν = ν^r ∂_r + ν^θ ∂_θ`, unit and outward.
    pub nu_r: f64,
    pub nu_theta: f64,
    /// `⟨X, ν⟩ = λ ν^r`.
    pub x_dot_nu: f64,
    /// `⟨∂_r, e_1⟩ = ṙ/|γ′|` with `e_1` the unit profile tangent.
    pub radial_tangent: f64,
    /// `|γ′|_g`.
    pub speed: f64,
    /// `ρ^{n−2} |γ′|_g` with `ρ = λ sin θ`.
    pub area_density: f64,
    /// `λ″/λ + (K − λ′²)/λ²`.
    pub radial_bracket: f64,
    pub n: usize,
}

impl SurfacePoint {
    pub fn spectrum(&self) -> PrincipalSpectrum {
        let mut k = vec![self.kappa_rot; self.n - 1];
        k[0] = self.kappa_profile;
        PrincipalSpectrum::new(k).expect("finite curvatures")
    }

    pub fn star_shaped(&self) -> bool {
        self.nu_r >= 0.0
    }

    /// `⟨X, e_1⟩ = λ ṙ/|γ′|`.
    pub fn x_dot_e1(&self) -> f64 {
        self.lambda * self.radial_tangent
    }

    /// `|ν|² = (ν^r)² + λ²(ν^θ)²`.
    pub fn normal_norm_sq(&self) -> f64 {
        self.nu_r * self.nu_r + self.lambda * self.lambda * self.nu_theta * self.nu_theta
    }
}

/// Area of the unit `d`-sphere.
pub fn sphere_area(d: usize) -> f64 {
    match d {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (d - 1) as f64 * sphere_area(d - 2),
    }
}

const AXIS_EPS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct RevolutionSurface {
    model: WarpedModel,
    curve: ProfileCurve,
    orientation: f64,
}

impl RevolutionSurface {
    /// Validates the curve against the model domain and fixes the outward
    /// orientation by `ν^r > 0` at the outermost sampled point.
    pub fn new(model: WarpedModel, curve: ProfileCurve) -> Result<Self> {
        let r_floor = if model.horizon().is_some() { 1e-3 } else { 0.0 };
        match &curve {
            ProfileCurve::Slice { r0 } | ProfileCurve::Graph { r0, .. } if !r0.is_finite() => {
                return Err(Error::InvalidParameter(format!("r0 must be finite, got {r0}")));
            }
            ProfileCurve::OffsetSphere { distance, radius } => {
                if model.space_form().is_none() {
                    return Err(Error::NotSpaceForm(model.name().to_string()));
                }
                if !(*radius > 0.0 && *distance >= 0.0 && distance != radius) {
                    return Err(Error::InvalidParameter(format!(
                        "offset sphere needs radius > 0, distance >= 0 and distance != radius, got d={distance}, a={radius}"
                    )));
                }
            }
            _ => {}
        }
        let mut surface = Self { model, curve, orientation: 1.0 };
        let mut outer = (f64::NEG_INFINITY, 0.0);
        for i in 0..=512 {
            let t = PI * i as f64 / 512.0;
            let jet = surface.curve.jet(&surface.model, t)?;
            let r = jet.r[0];
            if !(r > r_floor && r < surface.model.r_max()) {
                return Err(Error::OutOfDomain { r, min: r_floor, max: surface.model.r_max() });
            }
            let lambda = surface.model.lambda(r)?;
            let speed = jet.r[1].hypot(lambda * jet.theta[1]);
            if !(speed > 1e-12) {
                return Err(Error::InvalidParameter(format!("degenerate profile at t = {t}")));
            }
            if r > outer.0 {
                outer = (r, lambda * jet.theta[1] / speed);
            }
        }
        if outer.1 < 0.0 {
            surface.orientation = -1.0;
        }
        Ok(surface)
    }

    pub fn model(&self) -> &WarpedModel {
        &self.model
    }

    pub fn curve(&self) -> &ProfileCurve {
        &self.curve
    }

    pub fn dim(&self) -> usize {
        self.model.dim()
    }

    pub fn geometry_at(&self, t: f64) -> Result<SurfacePoint> {
        geometry_at(&self.model, &self.curve, self.orientation, t)
    }

    /// Evaluates the surface at the points of a composite rule with `nodes` points.
    pub fn sample(&self, nodes: usize) -> Result<SurfaceSample> {
        let rule = CompositeRule::new(0.0, PI, nodes)?;
        let points = rule
            .points
            .par_iter()
            .map(|&t| self.geometry_at(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(SurfaceSample { rule, points, omega: sphere_area(self.dim() - 2) })
    }

    /// `∫_Σ f dμ`.
    pub fn integrate<F>(&self, f: F, nodes: usize) -> Result<f64>
    where
        F: Fn(&SurfacePoint) -> f64 + Sync,
    {
        self.sample(nodes)?.integrate(f)
    }
}

/// The surface evaluated at the nodes of a quadrature rule, reused by
/// every integral of one check.
#[derive(Debug, Clone)]
pub struct SurfaceSample {
    pub rule: CompositeRule,
    pub points: Vec<SurfacePoint>,
    omega: f64,
}

impl SurfaceSample {
    pub fn integrate<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&SurfacePoint) -> f64 + Sync,
    {
        let values: Vec<f64> = self.points.par_iter().map(|p| f(p) * p.area_density).collect();
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("integrand at t = {}", self.points[i].t)));
        }
        Ok(self.omega * self.rule.apply(&values))
    }

    pub fn area(&self) -> Result<f64> {
        self.integrate(|_| 1.0)
    }

    /// `sup − inf` of `f` over the nodes.
    pub fn oscillation<F>(&self, f: F) -> Result<f64>
    where
        F: Fn(&SurfacePoint) -> f64,
    {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for p in &self.points {
            let v = f(p);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("curvature function at t = {}", p.t)));
            }
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Ok(hi - lo)
    }
}

/// Pointwise geometry; `orientation = ±1` flips the counterclockwise normal.
pub fn geometry_at(model: &WarpedModel, curve: &ProfileCurve, orientation: f64, t: f64) -> Result<SurfacePoint> {
    let jet = curve.jet(model, t)?;
    let [r, rd, rdd] = jet.r;
    let [th, thd, thdd] = jet.theta;
    let w = model.warping(r)?;
    let (lambda, lp, lpp) = (w.lambda, w.d1, w.d2);
    let speed = rd.hypot(lambda * thd);
    let nu_r = orientation * lambda * thd / speed;
    let nu_theta = -orientation * rd / (lambda * speed);
    let acc_r = rdd - lambda * lp * thd * thd;
    let acc_theta = thdd + 2.0 * (lp / lambda) * rd * thd;
    let kappa_profile = -(nu_r * acc_r + lambda * lambda * nu_theta * acc_theta) / (speed * speed);
    let sin_th = th.sin();
    let at_end = t == 0.0 || t == PI;
    let kappa_rot = if sin_th.abs() > AXIS_EPS {
        (nu_r * lp * sin_th + nu_theta * lambda * th.cos()) / (lambda * sin_th)
    } else if at_end {
        kappa_profile
    } else {
        return Err(Error::AxisPoint { t });
    };
    let n = model.dim();
    let rho = lambda * sin_th.abs();
    Ok(SurfacePoint {
        t,
        r,
        theta: th,
        lambda,
        v: lp,
        lambda_pp: lpp,
        kappa_profile,
        kappa_rot,
        nu_r,
        nu_theta,
        x_dot_nu: lambda * nu_r,
        radial_tangent: orientation * rd / speed,
        speed,
        area_density: rho.powi(n as i32 - 2) * speed,
        radial_bracket: model.radial_bracket(r)?,
        n,
    })
}

/// `r(θ) = r0 + eps cos(mode θ)`.
pub fn perturbed_sphere(model: WarpedModel, r0: f64, eps: f64, mode: u32) -> Result<RevolutionSurface> {
    RevolutionSurface::new(model, ProfileCurve::perturbed(r0, eps, mode))
}

/// `A_11 = (1/(n−1)) (λ″/λ + (K − λ′²)/λ²) λ^{−2} ⟨X,e_1⟩² ⟨X,ν⟩`; the other
/// diagonal entries vanish since `⟨X, e_j⟩ = 0` along the orbits.
pub fn a_term(point: &SurfacePoint) -> f64 {
    let xe = point.x_dot_e1();
    point.radial_bracket * xe * xe * point.x_dot_nu / ((point.n - 1) as f64 * point.lambda * point.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{DMatrix, DVector};

    fn surf(model: WarpedModel, curve: ProfileCurve) -> RevolutionSurface {
        RevolutionSurface::new(model, curve).unwrap()
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(2), 4.0 * PI);
        assert_relative_eq!(sphere_area(3), 2.0 * PI * PI);
        assert_relative_eq!(sphere_area(4), 8.0 * PI * PI / 3.0);
    }

    #[test]
    fn slices_are_isotropic() {
        let models = crate::ambient::model_library(4).unwrap();
        for model in models {
            let r0 = 0.8f64.min(model.r_max() * 0.5);
            let s = surf(model.clone(), ProfileCurve::slice(r0));
            let w = model.warping(r0).unwrap();
            for p in s.sample(64).unwrap().points {
                assert_relative_eq!(p.kappa_profile, w.d1 / w.lambda, max_relative = 1e-12);
                assert_relative_eq!(p.kappa_rot, w.d1 / w.lambda, max_relative = 1e-12);
                assert!((p.normal_norm_sq() - 1.0).abs() < 1e-12);
                assert!(p.star_shaped());
            }
            let endpoint = s.geometry_at(0.0).unwrap();
            assert_relative_eq!(endpoint.kappa_rot, w.d1 / w.lambda, max_relative = 1e-12);
        }
        let h = surf(WarpedModel::hyperbolic(3).unwrap(), ProfileCurve::slice(1.2));
        let p = h.geometry_at(0.4).unwrap();
        assert_relative_eq!(p.kappa_rot, 1.0 / 1.2f64.tanh(), max_relative = 1e-14);
    }

    #[test]
    fn offset_spheres_are_umbilic() {
        for model in [WarpedModel::euclidean(3).unwrap(), WarpedModel::hyperbolic(4).unwrap(), WarpedModel::sphere(5).unwrap()] {
            for (d, a) in [(0.3, 0.5), (0.8, 0.4)] {
                let s = surf(model.clone(), ProfileCurve::offset_sphere(d, a));
                let expected = match model.space_form().unwrap() {
                    SpaceFormSign::Flat => 1.0 / a,
                    SpaceFormSign::Hyperbolic => 1.0 / a.tanh(),
                    SpaceFormSign::Spherical => 1.0 / a.tan(),
                };
                for p in s.sample(64).unwrap().points {
                    assert_relative_eq!(p.kappa_profile, expected, max_relative = 1e-10);
                    assert_relative_eq!(p.kappa_rot, expected, max_relative = 1e-10);
                    assert!((p.normal_norm_sq() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn axis_points_need_the_endpoint_limit() {
        let s = surf(WarpedModel::euclidean(3).unwrap(), ProfileCurve::offset_sphere(0.8, 0.4));
        assert!(s.geometry_at(0.0).is_ok());
        let bad = geometry_at(s.model(), s.curve(), 1.0, 1e-12);
        assert!(matches!(bad, Err(Error::AxisPoint { .. })));
    }

    #[test]
    fn unit_sphere_area() {
        let s = surf(WarpedModel::euclidean(3).unwrap(), ProfileCurve::slice(1.0));
        assert!((s.integrate(|_| 1.0, 64).unwrap() - 4.0 * PI).abs() < 1e-10);
        let r0: f64 = 0.9;
        let h = surf(WarpedModel::hyperbolic(3).unwrap(), ProfileCurve::slice(r0));
        let exact = 4.0 * PI * r0.sinh().powi(2);
        assert!((h.integrate(|_| 1.0, 64).unwrap() - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn node_doubling_converges() {
        let s = surf(WarpedModel::euclidean(3).unwrap(), ProfileCurve::perturbed(1.0, 0.2, 3));
        let reference = s.integrate(|_| 1.0, 4096).unwrap();
        let mut prev = f64::INFINITY;
        for nodes in [16, 32, 64] {
            let err = (s.integrate(|_| 1.0, nodes).unwrap() - reference).abs();
            assert!(err * 4.0 <= prev || err < 1e-13, "nodes={nodes}: {err} vs {prev}");
            prev = err;
        }
    }

    #[test]
    fn perturbations_are_first_order() {
        let m = WarpedModel::hyperbolic(3).unwrap();
        let osc = |eps: f64| {
            let s = perturbed_sphere(m.clone(), 1.0, eps, 2).unwrap();
            s.sample(256).unwrap().oscillation(|p| p.spectrum().normalized_h(2) / p.spectrum().normalized_h(1)).unwrap()
        };
        assert!(osc(0.0) < 1e-14);
        let (a, b) = (osc(1e-3), osc(5e-4));
        assert!(a > 0.0);
        assert!((a / b - 2.0).abs() < 0.01, "ratio {}", a / b);
    }

    #[test]
    fn domain_checks() {
        let s = WarpedModel::sphere(3).unwrap();
        assert!(RevolutionSurface::new(s.clone(), ProfileCurve::slice(1.6)).is_err());
        assert!(RevolutionSurface::new(s, ProfileCurve::offset_sphere(1.0, 1.0)).is_err());
        let ads = WarpedModel::schwarzschild(3, 2.0, 1.0, 0.0, 4.0).unwrap();
        assert!(matches!(
            RevolutionSurface::new(ads.clone(), ProfileCurve::offset_sphere(1.0, 0.5)),
            Err(Error::NotSpaceForm(_))
        ));
        assert!(RevolutionSurface::new(ads, ProfileCurve::perturbed(0.5, 0.6, 2)).is_err());
    }

    #[test]
    fn a_term_signs() {
        let ads = WarpedModel::schwarzschild(3, 2.0, 1.0, 0.0, 4.0).unwrap();
        let slice = surf(ads.clone(), ProfileCurve::slice(1.0));
        assert_eq!(a_term(&slice.geometry_at(0.7).unwrap()), 0.0);
        let pert = surf(ads, ProfileCurve::perturbed(1.0, 0.1, 2));
        let p = pert.geometry_at(0.7).unwrap();
        assert!(p.star_shaped() && p.radial_tangent != 0.0);
        assert!(a_term(&p) > 0.0);
        let h = surf(WarpedModel::hyperbolic(4).unwrap(), ProfileCurve::perturbed(1.0, 0.1, 2));
        assert_eq!(a_term(&h.geometry_at(0.7).unwrap()), 0.0);
    }

    /// Embedding of a 3-dimensional space form into `R^4` (flat: `R^3 × {0}`),
    /// with the quadratic form `diag(s, 1, 1, 1)`.
    fn embed(eps: SpaceFormSign, r: f64, th: f64, phi: f64) -> DVector<f64> {
        let (a, b) = match eps {
            SpaceFormSign::Flat => (0.0, r),
            SpaceFormSign::Spherical => (r.cos(), r.sin()),
            SpaceFormSign::Hyperbolic => (r.cosh(), r.sinh()),
        };
        DVector::from_vec(vec![a, b * th.cos(), b * th.sin() * phi.cos(), b * th.sin() * phi.sin()])
    }

    fn metric(eps: SpaceFormSign) -> DMatrix<f64> {
        let s = match eps {
            SpaceFormSign::Hyperbolic => -1.0,
            SpaceFormSign::Spherical => 1.0,
            SpaceFormSign::Flat => 0.0,
        };
        DMatrix::from_diagonal(&DVector::from_vec(vec![s, 1.0, 1.0, 1.0]))
    }

    /// Principal curvatures by central differences of the embedding, using
    /// only the profile values `r(t)`, `θ(t)`.
    fn fd_curvatures(s: &RevolutionSurface, t: f64) -> (f64, f64) {
        let eps = s.model().space_form().unwrap();
        let g = metric(eps);
        let ip = |x: &DVector<f64>, y: &DVector<f64>| (x.transpose() * &g * y)[(0, 0)];
        let pos = |t: f64, phi: f64| {
            let j = s.curve().jet(s.model(), t).unwrap();
            embed(eps, j.r[0], j.theta[0], phi)
        };
        let h = 1e-4;
        let phi = 0.3;
        let p = pos(t, phi);
        let pt = (pos(t + h, phi) - pos(t - h, phi)) / (2.0 * h);
        let pp = (pos(t, phi + h) - pos(t, phi - h)) / (2.0 * h);
        let ptt = (pos(t + h, phi) - &p * 2.0 + pos(t - h, phi)) / (h * h);
        let ppp = (pos(t, phi + h) - &p * 2.0 + pos(t, phi - h)) / (h * h);
        // Normal: orthogonal to the tangent plane (and to the position for curved forms).
        let mut rows: Vec<DVector<f64>> = vec![&g * &pt, &g * &pp];
        if eps != SpaceFormSign::Flat {
            rows.push(&g * &p);
        } else {
            rows.push(DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0]));
        }
        // Generalized cross product: signed 3x3 minors of the 3x4 constraint matrix.
        let a = DMatrix::from_rows(&rows.iter().map(|r| r.transpose()).collect::<Vec<_>>());
        let mut nrm = DVector::from_fn(4, |j, _| {
            let minor = a.clone().remove_column(j);
            if j % 2 == 0 { minor.determinant() } else { -minor.determinant() }
        });
        nrm /= ip(&nrm, &nrm).sqrt();
        // Outward: positive pairing with the radial direction.
        let j = s.curve().jet(s.model(), t).unwrap();
        let radial = (embed(eps, j.r[0] + h, j.theta[0], phi) - embed(eps, j.r[0] - h, j.theta[0], phi)) / (2.0 * h);
        if ip(&nrm, &radial) < 0.0 {
            nrm = -nrm;
        }
        let k_profile = -ip(&ptt, &nrm) / ip(&pt, &pt);
        let k_rot = -ip(&ppp, &nrm) / ip(&pp, &pp);
        (k_profile, k_rot)
    }

    #[test]
    fn curvatures_match_embedding_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let models = [WarpedModel::euclidean(3).unwrap(), WarpedModel::sphere(3).unwrap(), WarpedModel::hyperbolic(3).unwrap()];
        for model in models {
            for _ in 0..6 {
                let r0 = rng.random_range(0.6..1.0);
                let modes = (1..=3).map(|m| FourierMode { mode: m, eps: rng.random_range(-0.08..0.08) }).collect();
                let s = surf(model.clone(), ProfileCurve::Graph { r0, modes });
                for _ in 0..5 {
                    let t = rng.random_range(0.2..PI - 0.2);
                    let p = s.geometry_at(t).unwrap();
                    assert!(p.star_shaped());
                    let (kp, kr) = fd_curvatures(&s, t);
                    assert!((kp - p.kappa_profile).abs() < 1e-6, "{} profile {kp} vs {}", model.name(), p.kappa_profile);
                    assert!((kr - p.kappa_rot).abs() < 1e-6, "{} rot {kr} vs {}", model.name(), p.kappa_rot);
                }
            }
        }
    }
}
