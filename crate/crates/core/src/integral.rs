//! Integral formulas and integral inequalities on surfaces of revolution,
//! and oscillation scans of the curvature functions fixed by the rigidity
//! statements.

use crate::ambient::{check_conditions, WarpedModel};
use crate::check::CheckReport;
use crate::error::{Error, Result};
use crate::invariants::{lk_from_h, nk_from_h, tilde_l, tilde_n, SpaceFormSign};
use crate::surface::{a_term, ProfileCurve, RevolutionSurface, SurfacePoint, SurfaceSample};
use crate::symmetric::{binomial, PrincipalSpectrum};
use serde::{Deserialize, Serialize};

/// Identity tolerance for closed-form space forms.
pub const SPACE_FORM_TOL: f64 = 1e-8;
/// Identity tolerance for models whose warping function is interpolated.
pub const WARPED_TOL: f64 = 1e-6;
pub const HK_TOL: f64 = 1e-9;
pub const UMBILIC_TOL: f64 = 1e-8;
pub const RIGIDITY_TOL: f64 = 1e-10;
/// Convergence floor of the node-doubling study.
pub const CONVERGENCE_FLOOR: f64 = 1e-11;
const HYPOTHESIS_TOL: f64 = 1e-10;

pub fn default_tolerance(model: &WarpedModel) -> f64 {
    if model.space_form().is_some() {
        SPACE_FORM_TOL
    } else {
        WARPED_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComboFamily {
    H,
    L,
    N,
}

/// `Σ_{i<l} a_i F_i = Σ_{l≤j≤k} b_j G_j`, with `G_j = V H_j` when weighted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureCombo {
    /// `a_0, …, a_{l−1}`.
    pub a: Vec<f64>,
    /// `b_l, …, b_k`.
    pub b: Vec<f64>,
    pub l: usize,
    pub k: usize,
    #[serde(default)]
    pub weighted: bool,
    pub family: ComboFamily,
}

impl CurvatureCombo {
    pub fn new(family: ComboFamily, l: usize, k: usize, a: Vec<f64>, b: Vec<f64>, weighted: bool) -> Result<Self> {
        let combo = Self { a, b, l, k, weighted, family };
        combo.validate()?;
        Ok(combo)
    }

    /// The single function `F_k`, with `l = 0` and no `a`-side.
    pub fn constant(family: ComboFamily, k: usize, weighted: bool) -> Result<Self> {
        let mut b = vec![0.0; k + 1];
        b[k] = 1.0;
        Self::new(family, 0, k, vec![], b, weighted)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l >= self.k {
            return Err(Error::InvalidParameter(format!("need l < k, got l={}, k={}", self.l, self.k)));
        }
        if self.a.len() != self.l || self.b.len() != self.k - self.l + 1 {
            return Err(Error::InvalidParameter(format!(
                "expected {} a- and {} b-coefficients, got {} and {}",
                self.l,
                self.k - self.l + 1,
                self.a.len(),
                self.b.len()
            )));
        }
        if self.a.iter().chain(&self.b).any(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidParameter("coefficients must be finite and nonnegative".into()));
        }
        if self.a.iter().chain(&self.b).all(|&c| c == 0.0) {
            return Err(Error::InvalidParameter("at least one coefficient must be nonzero".into()));
        }
        if self.weighted && self.family != ComboFamily::H {
            return Err(Error::InvalidParameter("only the H family carries a weight".into()));
        }
        Ok(())
    }

    pub fn label(&self) -> String {
        let side = |coef: &[f64], start: usize, f: &str| {
            let terms: Vec<String> = coef
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| format!("{c}*{f}{}", start + i))
                .collect();
            if terms.is_empty() {
                "0".to_string()
            } else {
                terms.join("+")
            }
        };
        let f = match self.family {
            ComboFamily::H => "H",
            ComboFamily::L => "L",
            ComboFamily::N => "N",
        };
        let g = if self.weighted { "VH" } else { f };
        format!("{} = {}", side(&self.a, 0, f), side(&self.b, self.l, g))
    }
}

/// The curvature function whose oscillation a rigidity scan measures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RigidityTarget {
    /// `H_k / H_l`.
    Quotient { k: usize, l: usize },
    /// `V H_k`.
    WeightedMean { k: usize },
    Combination(CurvatureCombo),
}

impl RigidityTarget {
    pub fn label(&self) -> String {
        match self {
            Self::Quotient { k, l } => format!("H{k}/H{l}"),
            Self::WeightedMean { k } => format!("VH{k}"),
            Self::Combination(c) => c.label(),
        }
    }
}

fn require_space_form(surface: &RevolutionSurface) -> Result<SpaceFormSign> {
    surface.model().space_form().ok_or_else(|| {
        Error::NotSpaceForm(format!("{} (use the warped-product Minkowski check)", surface.model().name()))
    })
}

fn check_order(surface: &RevolutionSurface, k: usize) -> Result<()> {
    let n = surface.dim();
    if k == 0 || k > n - 1 {
        return Err(Error::InvalidParameter(format!("need 1 <= k <= {}, got {k}", n - 1)));
    }
    Ok(())
}

fn tagged(report: CheckReport, surface: &RevolutionSurface, k: usize, nodes: usize) -> CheckReport {
    report
        .with("model", surface.model().name())
        .with("surface", surface.curve().label())
        .with("n", surface.dim())
        .with("k", k)
        .with("nodes", nodes)
}

fn h(p: &SurfacePoint, k: i32) -> f64 {
    p.spectrum().normalized_h(k)
}

/// `σ_j(Λ_1)`, the profile curvature removed.
fn sigma_rot(p: &SurfacePoint, j: i32) -> f64 {
    if j < 0 {
        return 0.0;
    }
    binomial(p.n as i64 - 2, j as i64) * p.kappa_rot.powi(j)
}

/// A surface is umbilical when both principal curvatures agree at every node.
pub fn is_umbilical(sample: &SurfaceSample) -> bool {
    sample
        .points
        .iter()
        .all(|p| (p.kappa_profile - p.kappa_rot).abs() <= UMBILIC_TOL * p.kappa_rot.abs().max(1.0))
}

/// `∫⟨X,ν⟩H_k = ∫V H_{k−1}` in a space form.
pub fn minkowski_spaceform(surface: &RevolutionSurface, k: usize, nodes: usize, tol: f64) -> Result<CheckReport> {
    require_space_form(surface)?;
    check_order(surface, k)?;
    let sample = surface.sample(nodes)?;
    let ki = k as i32;
    let lhs = sample.integrate(|p| p.x_dot_nu * h(p, ki))?;
    let rhs = sample.integrate(|p| p.v * h(p, ki - 1))?;
    Ok(tagged(CheckReport::identity("minkowski-space-form", lhs, rhs, tol), surface, k, nodes))
}

/// Correction integrand `A_11 σ_{k−2}(Λ_1)` scaled by `(k−1)/C(n−2,k−2)`.
fn warped_correction(p: &SurfacePoint, k: usize) -> f64 {
    if k < 2 {
        return 0.0;
    }
    let c = (k - 1) as f64 / binomial(p.n as i64 - 2, k as i64 - 2);
    c * a_term(p) * sigma_rot(p, k as i32 - 2)
}

/// `∫⟨X,ν⟩H_k = ∫V H_{k−1} + (k−1)/C(n−2,k−2) ∫A_11 σ_{k−2}(Λ_1)`.
pub fn minkowski_warped(surface: &RevolutionSurface, k: usize, nodes: usize, tol: f64) -> Result<CheckReport> {
    check_order(surface, k)?;
    let sample = surface.sample(nodes)?;
    let ki = k as i32;
    let lhs = sample.integrate(|p| p.x_dot_nu * h(p, ki))?;
    let base = sample.integrate(|p| p.v * h(p, ki - 1))?;
    let correction = sample.integrate(|p| warped_correction(p, k))?;
    let star = sample.points.iter().all(|p| p.nu_r >= -HYPOTHESIS_TOL);
    let bracket_nonneg = sample.points.iter().all(|p| p.radial_bracket >= -HYPOTHESIS_TOL);
    let mut report = CheckReport::identity("minkowski-warped", lhs, base + correction, tol)
        .with("correction", correction)
        .with("star_shaped", star);
    if star && bracket_nonneg {
        let pointwise = sample.points.iter().all(|p| a_term(p) >= -HYPOTHESIS_TOL);
        report = report.with("correction_nonnegative", pointwise);
        report.pass &= pointwise;
    }
    Ok(tagged(report, surface, k, nodes))
}

/// `λλ″ (ṙ/|γ′|)² σ_{k−1}(Λ_1) / (k C(n−1,k))`.
fn gradient_term(p: &SurfacePoint, k: usize) -> f64 {
    let c = 1.0 / (k as f64 * binomial(p.n as i64 - 1, k as i64));
    c * p.lambda * p.lambda_pp * p.radial_tangent * p.radial_tangent * sigma_rot(p, k as i32 - 1)
}

fn closed_cone(spectrum: &PrincipalSpectrum, k: usize) -> bool {
    let e = spectrum.elementary();
    let k = k.min(spectrum.len());
    let scale = spectrum.kappa().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    (1..=k).all(|j| e[j] >= -HYPOTHESIS_TOL * scale.powi(j as i32))
}

/// The weighted formula `∫⟨X,ν⟩V H_k = ∫V² H_{k−1} + (k−1)/C(n−2,k−2) ∫V A_11 σ_{k−2}(Λ_1)
/// + ∫λλ″(ṙ/|γ′|)² σ_{k−1}(Λ_1)/(k C(n−1,k))`, and, when `Σ` is `k`-convex
/// and `λ″ ≥ 0` along `Σ`, the inequality with the last term dropped.
pub fn minkowski_weighted(surface: &RevolutionSurface, k: usize, nodes: usize, tol: f64) -> Result<Vec<CheckReport>> {
    check_order(surface, k)?;
    let sample = surface.sample(nodes)?;
    let ki = k as i32;
    let lhs = sample.integrate(|p| p.x_dot_nu * p.v * h(p, ki))?;
    let base = sample.integrate(|p| p.v * p.v * h(p, ki - 1))?;
    let correction = sample.integrate(|p| p.v * warped_correction(p, k))?;
    let gradient = sample.integrate(|p| gradient_term(p, k))?;
    let identity = CheckReport::identity("minkowski-weighted", lhs, base + correction + gradient, tol)
        .with("correction", correction)
        .with("gradient_term", gradient);
    let mut out = vec![tagged(identity, surface, k, nodes)];
    let convex = sample.points.iter().all(|p| closed_cone(&p.spectrum(), k));
    let convex_model = sample.points.iter().all(|p| p.lambda_pp >= -HYPOTHESIS_TOL);
    if convex && convex_model {
        let umbilical = is_umbilical(&sample);
        let mut ineq = CheckReport::inequality("minkowski-weighted-inequality", lhs, base + correction, HK_TOL)
            .with("slack", lhs - base - correction)
            .with("umbilical", umbilical);
        if umbilical {
            ineq.pass &= (lhs - base - correction).abs() <= tol;
        }
        out.push(tagged(ineq, surface, k, nodes));
    }
    Ok(out)
}

/// `∫V/H_1 ≥ ∫⟨X,ν⟩` for mean-convex surfaces, with equality exactly on
/// umbilical ones. In warped models where any of (C1), (C2), (C4) fails on
/// the sampling grid the report is marked advisory.
pub fn heintze_karcher(surface: &RevolutionSurface, nodes: usize, tol: f64) -> Result<CheckReport> {
    let sample = surface.sample(nodes)?;
    if let Some(p) = sample.points.iter().find(|p| !(h(p, 1) > 0.0)) {
        return Err(Error::Precondition(format!("H_1 = {} <= 0 at t = {}", h(p, 1), p.t)));
    }
    let lhs = sample.integrate(|p| p.v / h(p, 1))?;
    let rhs = sample.integrate(|p| p.x_dot_nu)?;
    let admissible = match surface.model().space_form() {
        Some(_) => true,
        None => {
            let c = check_conditions(surface.model());
            c.c1.holds && c.c2.holds && c.c4.holds
        }
    };
    let umbilical = is_umbilical(&sample);
    let mut report = CheckReport::inequality("heintze-karcher", lhs, rhs, tol)
        .with("slack", lhs - rhs)
        .with("umbilical", umbilical)
        .with("advisory", !admissible);
    if umbilical {
        report.pass &= (lhs - rhs).abs() <= UMBILIC_TOL;
    }
    Ok(tagged(report, surface, 1, nodes))
}

/// `∫V L̃_k = ∫⟨X,ν⟩Ñ_k` in a space form, for `2k + 1 ≤ n − 1`.
pub fn lk_minkowski(surface: &RevolutionSurface, k: usize, nodes: usize, tol: f64) -> Result<CheckReport> {
    let eps = require_space_form(surface)?;
    let n = surface.dim();
    if 2 * k + 1 > n - 1 {
        return Err(Error::InvalidParameter(format!("need 2k + 1 <= {}, got k = {k}", n - 1)));
    }
    let sample = surface.sample(nodes)?;
    let lhs = sample.integrate(|p| p.v * tilde_l(&p.spectrum(), eps, k))?;
    let rhs = sample.integrate(|p| p.x_dot_nu * tilde_n(&p.spectrum(), eps, k))?;
    Ok(tagged(CheckReport::identity("gauss-bonnet-minkowski", lhs, rhs, tol), surface, k, nodes))
}

fn family_value(p: &SurfacePoint, family: ComboFamily, eps: Option<SpaceFormSign>, j: usize) -> f64 {
    match family {
        ComboFamily::H => h(p, j as i32),
        ComboFamily::L => lk_from_h(&p.spectrum(), eps.expect("space form"), j),
        ComboFamily::N => nk_from_h(&p.spectrum(), eps.expect("space form"), j),
    }
}

fn combo_sides(p: &SurfacePoint, combo: &CurvatureCombo, eps: Option<SpaceFormSign>) -> (f64, f64) {
    let a: f64 = combo.a.iter().enumerate().map(|(i, c)| c * family_value(p, combo.family, eps, i)).sum();
    let weight = if combo.weighted { p.v } else { 1.0 };
    let b: f64 = combo
        .b
        .iter()
        .enumerate()
        .map(|(j, c)| c * weight * family_value(p, combo.family, eps, combo.l + j))
        .sum();
    (a, b)
}

fn require_star_shaped(sample: &SurfaceSample) -> Result<()> {
    match sample.points.iter().find(|p| p.nu_r < -HYPOTHESIS_TOL) {
        Some(p) => Err(Error::Precondition(format!("surface is not star-shaped at t = {}", p.t))),
        None => Ok(()),
    }
}

fn require_cone(sample: &SurfaceSample, order: usize, what: &str) -> Result<()> {
    match sample.points.iter().find(|p| !closed_cone(&p.spectrum(), order)) {
        Some(p) => Err(Error::Precondition(format!("surface is not {what} at t = {}", p.t))),
        None => Ok(()),
    }
}

fn require_horoconvex(sample: &SurfaceSample) -> Result<()> {
    match sample.points.iter().find(|p| !p.spectrum().is_horoconvex(HYPOTHESIS_TOL)) {
        Some(p) => Err(Error::Precondition(format!("surface is not horoconvex at t = {}", p.t))),
        None => Ok(()),
    }
}

/// Checks the hypotheses of the rigidity statement behind `target` and
/// returns the pointwise function to scan.
fn rigidity_function(
    surface: &RevolutionSurface,
    sample: &SurfaceSample,
    target: &RigidityTarget,
) -> Result<Box<dyn Fn(&SurfacePoint) -> f64 + Sync>> {
    let n = surface.dim();
    let space_form = surface.model().space_form();
    match target {
        RigidityTarget::Quotient { k, l } => {
            let (k, l) = (*k, *l);
            if !(1 <= l && l < k && k <= n - 1) {
                return Err(Error::InvalidParameter(format!("need 1 <= l < k <= {}, got l={l}, k={k}", n - 1)));
            }
            require_star_shaped(sample)?;
            let hl: Vec<f64> = sample.points.iter().map(|p| h(p, l as i32)).collect();
            let positive = hl.iter().all(|&x| x > HYPOTHESIS_TOL);
            let negative = hl.iter().all(|&x| x < -HYPOTHESIS_TOL);
            if !(positive || negative) {
                return Err(Error::Precondition(format!("H_{l} vanishes on the surface")));
            }
            Ok(Box::new(move |p| h(p, k as i32) / h(p, l as i32)))
        }
        RigidityTarget::WeightedMean { k } => {
            let k = *k;
            check_order(surface, k)?;
            require_star_shaped(sample)?;
            Ok(Box::new(move |p| p.v * h(p, k as i32)))
        }
        RigidityTarget::Combination(combo) => {
            combo.validate()?;
            let k = combo.k;
            match combo.family {
                ComboFamily::H => {
                    if k > n - 1 {
                        return Err(Error::InvalidParameter(format!("need k <= {}, got {k}", n - 1)));
                    }
                    require_cone(sample, k, &format!("{k}-convex"))?;
                    if space_form.is_none() || combo.weighted {
                        require_star_shaped(sample)?;
                    }
                }
                ComboFamily::L | ComboFamily::N => {
                    let eps = require_space_form(surface)?;
                    let odd = combo.family == ComboFamily::N;
                    let top = if odd { 2 * k + 1 } else { 2 * k };
                    if top > n - 1 {
                        return Err(Error::InvalidParameter(format!("need {top} <= {}, got k = {k}", n - 1)));
                    }
                    match eps {
                        SpaceFormSign::Hyperbolic => require_horoconvex(sample)?,
                        _ => require_cone(sample, top, &format!("{top}-convex"))?,
                    }
                }
            }
            let sides: Vec<(f64, f64)> = sample.points.iter().map(|p| combo_sides(p, combo, space_form)).collect();
            let mean = |pick: fn(&(f64, f64)) -> f64| -> f64 {
                sample.rule.apply(
                    &sides
                        .iter()
                        .zip(&sample.points)
                        .map(|(s, p)| pick(s) * p.area_density)
                        .collect::<Vec<_>>(),
                )
            };
            let a_mean = mean(|s| s.0);
            let b_mean = mean(|s| s.1);
            let combo = combo.clone();
            if combo.a.iter().all(|&c| c == 0.0) || combo.b.iter().all(|&c| c == 0.0) || b_mean == 0.0 {
                return Ok(Box::new(move |p| {
                    let (a, b) = combo_sides(p, &combo, space_form);
                    a + b
                }));
            }
            let c = a_mean / b_mean;
            Ok(Box::new(move |p| {
                let (a, b) = combo_sides(p, &combo, space_form);
                a - c * b
            }))
        }
    }
}

/// True for the surfaces on which every rigidity function is constant:
/// slices, and geodesic spheres of a space form.
pub fn expect_constant(surface: &RevolutionSurface) -> bool {
    match surface.curve() {
        ProfileCurve::OffsetSphere { .. } => surface.model().space_form().is_some(),
        c => c.is_centered_sphere(),
    }
}

/// Oscillation `sup − inf` over the quadrature nodes of the function fixed by
/// the rigidity statement. The report passes when the oscillation is at most
/// `tol` on slices and geodesic spheres, and exceeds `10·tol` elsewhere.
pub fn rigidity_residual(
    surface: &RevolutionSurface,
    target: &RigidityTarget,
    nodes: usize,
    tol: f64,
) -> Result<CheckReport> {
    let sample = surface.sample(nodes)?;
    let f = rigidity_function(surface, &sample, target)?;
    let osc = sample.oscillation(|p| f(p))?;
    let constant = expect_constant(surface);
    let pass = if constant { osc <= tol } else { osc > 10.0 * tol };
    let k = match target {
        RigidityTarget::Quotient { k, .. } | RigidityTarget::WeightedMean { k } => *k,
        RigidityTarget::Combination(c) => c.k,
    };
    let report = CheckReport::composite("rigidity-oscillation", osc, tol, pass)
        .with("target", target.label())
        .with("expect_constant", constant);
    Ok(tagged(report, surface, k, nodes))
}

/// Ratio `osc(eps) / osc(eps/2)` on `r = r0 + eps cos(mode θ)`; linear
/// dependence on `eps` gives 2.
pub fn oscillation_scaling(
    model: &WarpedModel,
    r0: f64,
    eps: f64,
    mode: u32,
    target: &RigidityTarget,
    nodes: usize,
) -> Result<CheckReport> {
    let osc = |e: f64| -> Result<f64> {
        let s = RevolutionSurface::new(model.clone(), ProfileCurve::perturbed(r0, e, mode))?;
        Ok(rigidity_residual(&s, target, nodes, RIGIDITY_TOL)?.residual)
    };
    let (full, half) = (osc(eps)?, osc(0.5 * eps)?);
    let ratio = full / half;
    let report = CheckReport::composite("rigidity-scaling", ratio - 2.0, 0.2, (ratio - 2.0).abs() <= 0.2)
        .with("model", model.name())
        .with("target", target.label())
        .with("eps", eps)
        .with("oscillation", full)
        .with("oscillation_half", half)
        .with("ratio", ratio);
    Ok(report)
}

/// Runs `check` at each node count. Passes when `|residual|` never increases
/// while above the floor and ends below it.
pub fn convergence_study<F>(name: &str, node_counts: &[usize], check: F) -> Result<CheckReport>
where
    F: Fn(usize) -> Result<CheckReport>,
{
    if node_counts.is_empty() {
        return Err(Error::InvalidParameter("empty node list".into()));
    }
    let residuals = node_counts
        .iter()
        .map(|&m| check(m).map(|r| r.residual.abs()))
        .collect::<Result<Vec<f64>>>()?;
    let monotone = residuals
        .windows(2)
        .all(|w| w[0] < CONVERGENCE_FLOOR || w[1] <= w[0]);
    let last = *residuals.last().unwrap();
    let report = CheckReport::composite(
        "quadrature-convergence",
        last,
        CONVERGENCE_FLOOR,
        monotone && last < CONVERGENCE_FLOOR,
    )
    .with("identity", name)
    .with("nodes", node_counts.to_vec())
    .with("residuals", residuals)
    .with("monotone", monotone);
    Ok(report)
}
