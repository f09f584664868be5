//! Warped-product ambient spaces `dr² + λ(r)² g_N` with fiber `N` of constant
//! curvature `K`.

use crate::error::{Error, Result};
use crate::invariants::SpaceFormSign;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

/// `λ`, `λ′`, `λ″` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Warping {
    pub lambda: f64,
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelKind {
    Euclidean,
    Sphere,
    Hyperbolic,
    /// `λ′² = 1 + κλ² − mλ^{2−n} + q²λ^{4−2n}`, `r = 0` on the horizon.
    Schwarzschild { mass: f64, kappa: f64, charge: f64 },
}

#[derive(Debug, Clone)]
pub struct WarpedModel {
    name: String,
    kind: ModelKind,
    n: usize,
    fiber_curvature: f64,
    r_max: f64,
    profile: Option<Arc<HorizonProfile>>,
}

const HORIZON_GRID: usize = 20_000;

impl WarpedModel {
    fn check_dim(n: usize) -> Result<()> {
        if n < 3 {
            return Err(Error::InvalidParameter(format!("ambient dimension must be >= 3, got {n}")));
        }
        Ok(())
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(Self {
            name: "euclidean".into(),
            kind: ModelKind::Euclidean,
            n,
            fiber_curvature: 1.0,
            r_max: f64::INFINITY,
            profile: None,
        })
    }

    /// The open hemisphere `λ = sin r`, `0 < r < π/2`, where `V = cos r > 0`.
    pub fn sphere(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(Self {
            name: "sphere".into(),
            kind: ModelKind::Sphere,
            n,
            fiber_curvature: 1.0,
            r_max: FRAC_PI_2,
            profile: None,
        })
    }

    pub fn hyperbolic(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(Self {
            name: "hyperbolic".into(),
            kind: ModelKind::Hyperbolic,
            n,
            fiber_curvature: 1.0,
            r_max: f64::INFINITY,
            profile: None,
        })
    }

    /// The Schwarzschild family truncated at `r_cap`.
    pub fn schwarzschild(n: usize, mass: f64, kappa: f64, charge: f64, r_cap: f64) -> Result<Self> {
        Self::check_dim(n)?;
        if !(r_cap.is_finite() && r_cap > 0.0) {
            return Err(Error::InvalidParameter(format!("r_cap must be positive, got {r_cap}")));
        }
        let name = match (kappa == 0.0, charge == 0.0) {
            (true, true) => "schwarzschild",
            (false, true) if kappa > 0.0 => "ads-schwarzschild",
            (false, true) => "ds-schwarzschild",
            _ => "reissner-nordstrom",
        };
        let profile = HorizonProfile::build(name, n, mass, kappa, charge, r_cap, HORIZON_GRID)?;
        Ok(Self {
            name: name.into(),
            kind: ModelKind::Schwarzschild { mass, kappa, charge },
            n,
            fiber_curvature: 1.0,
            r_max: profile.r_end,
            profile: Some(Arc::new(profile)),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Replaces the fiber curvature; only the condition checker and the Ricci
    /// formula use a value other than 1.
    pub fn with_fiber_curvature(mut self, k: f64) -> Self {
        self.fiber_curvature = k;
        self
    }

    /// Truncates the radial domain.
    pub fn with_r_max(mut self, r_max: f64) -> Result<Self> {
        if !(r_max > 0.0 && r_max <= self.r_max) {
            return Err(Error::InvalidParameter(format!(
                "r_max must lie in (0, {}], got {r_max}",
                self.r_max
            )));
        }
        self.r_max = r_max;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn fiber_curvature(&self) -> f64 {
        self.fiber_curvature
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn space_form(&self) -> Option<SpaceFormSign> {
        match self.kind {
            ModelKind::Euclidean => Some(SpaceFormSign::Flat),
            ModelKind::Sphere => Some(SpaceFormSign::Spherical),
            ModelKind::Hyperbolic => Some(SpaceFormSign::Hyperbolic),
            ModelKind::Schwarzschild { .. } => None,
        }
    }

    /// Horizon radius `λ_0` of a Schwarzschild-type model.
    pub fn horizon(&self) -> Option<f64> {
        self.profile.as_ref().map(|p| p.lambda0)
    }

    pub fn warping(&self, r: f64) -> Result<Warping> {
        if !(r >= 0.0 && r <= self.r_max) || r.is_nan() {
            return Err(Error::OutOfDomain { r, min: 0.0, max: self.r_max });
        }
        Ok(match &self.kind {
            ModelKind::Euclidean => Warping { lambda: r, d1: 1.0, d2: 0.0 },
            ModelKind::Sphere => Warping { lambda: r.sin(), d1: r.cos(), d2: -r.sin() },
            ModelKind::Hyperbolic => Warping { lambda: r.sinh(), d1: r.cosh(), d2: r.sinh() },
            ModelKind::Schwarzschild { .. } => self.profile.as_ref().expect("profile").warping(r),
        })
    }

    pub fn lambda(&self, r: f64) -> Result<f64> {
        Ok(self.warping(r)?.lambda)
    }

    /// The potential `V = λ′`.
    pub fn potential(&self, r: f64) -> Result<f64> {
        Ok(self.warping(r)?.d1)
    }

    /// Radius with `λ(r) = s`, on the increasing branch.
    pub fn r_of_lambda(&self, s: f64) -> Result<f64> {
        let r = match &self.kind {
            ModelKind::Euclidean => s,
            ModelKind::Hyperbolic => s.asinh(),
            ModelKind::Sphere if (0.0..=1.0).contains(&s) => s.asin(),
            ModelKind::Sphere => f64::NAN,
            ModelKind::Schwarzschild { .. } => self.profile.as_ref().expect("profile").r_of_lambda(s),
        };
        if !(r >= 0.0 && r <= self.r_max) {
            return Err(Error::OutOfDomain { r, min: 0.0, max: self.r_max });
        }
        Ok(r)
    }

    /// `λ″/λ + (K − λ′²)/λ²`; nonnegative iff the radial Ricci curvature is the smallest.
    pub fn radial_bracket(&self, r: f64) -> Result<f64> {
        let w = self.warping(r)?;
        Ok(match self.kind {
            // Exactly zero in space forms; avoid round-off in `1 - cosh²`.
            ModelKind::Euclidean | ModelKind::Sphere | ModelKind::Hyperbolic if self.fiber_curvature == 1.0 => 0.0,
            _ => w.d2 / w.lambda + (self.fiber_curvature - w.d1 * w.d1) / (w.lambda * w.lambda),
        })
    }

    /// `2λ″/λ − (n−2)(K − λ′²)/λ²`, the quantity required to be non-decreasing.
    pub fn scalar_monotone_quantity(&self, r: f64) -> Result<f64> {
        let w = self.warping(r)?;
        let nm2 = (self.n - 2) as f64;
        Ok(2.0 * w.d2 / w.lambda - nm2 * (self.fiber_curvature - w.d1 * w.d1) / (w.lambda * w.lambda))
    }

    /// `Ric(u, v)` for tangent vectors split into radial and fiber parts.
    pub fn ricci(&self, r: f64, u: &TangentVector, v: &TangentVector) -> Result<f64> {
        if !(r > 0.0 && r < self.r_max) {
            return Err(Error::OutOfDomain { r, min: 0.0, max: self.r_max });
        }
        let w = self.warping(r)?;
        let nm2 = (self.n - 2) as f64;
        let tangential = w.d2 / w.lambda - nm2 * (self.fiber_curvature - w.d1 * w.d1) / (w.lambda * w.lambda);
        let radial = self.radial_bracket(r)?;
        Ok(-tangential * u.dot(v) - nm2 * radial * u.radial * v.radial)
    }

    pub fn describe(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "model": self.kind,
            "n": self.n,
            "fiber_curvature": self.fiber_curvature,
            "r_max": if self.r_max.is_finite() { serde_json::json!(self.r_max) } else { serde_json::json!("inf") },
        })
    }
}

/// A tangent vector `a ∂r + w` with `w` tangent to the fiber, given in a
/// `ḡ`-orthonormal frame of the fiber directions.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub radial: f64,
    pub fiber: Vec<f64>,
}

impl TangentVector {
    pub fn new(radial: f64, fiber: Vec<f64>) -> Self {
        Self { radial, fiber }
    }

    pub fn dot(&self, other: &TangentVector) -> f64 {
        self.radial * other.radial + self.fiber.iter().zip(&other.fiber).map(|(a, b)| a * b).sum::<f64>()
    }
}

/// Models of dimension `n` used by the default experiments.
pub fn model_library(n: usize) -> Result<Vec<WarpedModel>> {
    Ok(vec![
        WarpedModel::euclidean(n)?,
        WarpedModel::sphere(n)?,
        WarpedModel::hyperbolic(n)?,
        WarpedModel::schwarzschild(n, 1.0, 0.0, 0.0, 4.0)?,
        WarpedModel::schwarzschild(n, 2.0, 1.0, 0.0, 4.0)?,
        WarpedModel::schwarzschild(n, 1.0, 0.0, 0.3, 4.0)?,
    ])
}

/// Radial profile of a Schwarzschild-type model, tabulated in `u` where
/// `λ = λ_0 + u²`. Then `r(u) = ∫_0^u 2s / √F(λ_0 + s²) ds` has a smooth
/// integrand up to the horizon.
#[derive(Debug)]
struct HorizonProfile {
    n: usize,
    mass: f64,
    kappa: f64,
    charge: f64,
    lambda0: f64,
    u: Vec<f64>,
    r: Vec<f64>,
    dudr: Vec<f64>,
    r_end: f64,
}

impl HorizonProfile {
    fn f(&self, l: f64) -> f64 {
        blackening(self.n, self.mass, self.kappa, self.charge, l)
    }

    fn df(&self, l: f64) -> f64 {
        blackening_derivative(self.n, self.mass, self.kappa, self.charge, l)
    }

    fn build(name: &str, n: usize, mass: f64, kappa: f64, charge: f64, r_cap: f64, cells: usize) -> Result<Self> {
        let no_horizon = |reason: &str| Error::NoHorizon { model: name.to_string(), reason: reason.to_string() };
        if !(mass.is_finite() && mass > 0.0) {
            return Err(no_horizon("mass must be positive"));
        }
        let f = |l: f64| blackening(n, mass, kappa, charge, l);
        let (lambda0, lambda_top) = find_horizon(&f).ok_or_else(|| no_horizon("F has no sign change from - to +"))?;
        if blackening_derivative(n, mass, kappa, charge, lambda0) <= 0.0 {
            return Err(no_horizon("degenerate horizon"));
        }
        let mut profile = Self {
            n,
            mass,
            kappa,
            charge,
            lambda0,
            u: Vec::new(),
            r: Vec::new(),
            dudr: Vec::new(),
            r_end: 0.0,
        };
        // Grow u_max until r(u_max) covers r_cap, without crossing a cosmological horizon.
        let u_limit = lambda_top.map(|t| ((t - lambda0) * 0.999).sqrt());
        let mut u_max = 1.0f64;
        loop {
            if let Some(limit) = u_limit {
                u_max = u_max.min(limit);
            }
            let r_top = profile.integrate_to(u_max, 512);
            if r_top >= r_cap || Some(u_max) == u_limit {
                break;
            }
            u_max *= 2.0;
            if u_max > 1e8 {
                return Err(Error::InvalidParameter(format!("{name}: r_cap = {r_cap} not reachable")));
            }
        }
        profile.tabulate(u_max, cells);
        profile.r_end = profile.r.last().copied().unwrap_or(0.0).min(r_cap);
        Ok(profile)
    }

    fn integrand(&self, s: f64) -> f64 {
        let f = self.f(self.lambda0 + s * s);
        if s == 0.0 || f <= 0.0 {
            2.0 / self.df(self.lambda0).sqrt()
        } else {
            2.0 * s / f.sqrt()
        }
    }

    fn integrate_to(&self, u_max: f64, cells: usize) -> f64 {
        let h = u_max / cells as f64;
        (0..cells).map(|i| gauss8(|s| self.integrand(s), i as f64 * h, (i + 1) as f64 * h)).sum()
    }

    fn dudr_at(&self, u: f64) -> f64 {
        if u == 0.0 {
            self.df(self.lambda0).sqrt() / 2.0
        } else {
            self.f(self.lambda0 + u * u).max(0.0).sqrt() / (2.0 * u)
        }
    }

    fn tabulate(&mut self, u_max: f64, cells: usize) {
        let h = u_max / cells as f64;
        let mut u = Vec::with_capacity(cells + 1);
        let mut r = Vec::with_capacity(cells + 1);
        let mut acc = 0.0;
        for i in 0..=cells {
            let ui = i as f64 * h;
            if i > 0 {
                acc += gauss8(|s| self.integrand(s), ui - h, ui);
            }
            u.push(ui);
            r.push(acc);
        }
        self.dudr = u.iter().map(|&x| self.dudr_at(x)).collect();
        self.u = u;
        self.r = r;
    }

    /// `u(r)` by cubic Hermite interpolation with exact slopes `du/dr`.
    fn u_of_r(&self, r: f64) -> f64 {
        let i = match self.r.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => return self.u[i],
            Err(i) => i.clamp(1, self.r.len() - 1) - 1,
        };
        let (r0, r1) = (self.r[i], self.r[i + 1]);
        let h = r1 - r0;
        let t = (r - r0) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.u[i] + h10 * h * self.dudr[i] + h01 * self.u[i + 1] + h11 * h * self.dudr[i + 1]
    }

    fn warping(&self, r: f64) -> Warping {
        let u = self.u_of_r(r);
        let lambda = self.lambda0 + u * u;
        Warping { lambda, d1: self.f(lambda).max(0.0).sqrt(), d2: 0.5 * self.df(lambda) }
    }

    fn r_of_lambda(&self, s: f64) -> f64 {
        if s < self.lambda0 {
            return f64::NAN;
        }
        let u = (s - self.lambda0).sqrt();
        let last = *self.u.last().unwrap();
        if u > last {
            return f64::INFINITY;
        }
        let h = last / (self.u.len() - 1) as f64;
        let i = ((u / h) as usize).min(self.u.len() - 2);
        self.r[i] + gauss8(|x| self.integrand(x), self.u[i], u)
    }
}

/// `F(λ) = 1 + κλ² − mλ^{2−n} + q²λ^{4−2n}`.
pub fn blackening(n: usize, mass: f64, kappa: f64, charge: f64, l: f64) -> f64 {
    let n = n as i32;
    1.0 + kappa * l * l - mass * l.powi(2 - n) + charge * charge * l.powi(4 - 2 * n)
}

pub fn blackening_derivative(n: usize, mass: f64, kappa: f64, charge: f64, l: f64) -> f64 {
    let nf = n as f64;
    let n = n as i32;
    2.0 * kappa * l + (nf - 2.0) * mass * l.powi(1 - n) - (2.0 * nf - 4.0) * charge * charge * l.powi(3 - 2 * n)
}

/// Outer horizon `λ_0` (largest crossing of `F` from − to +) and, if `F`
/// turns negative again, the cosmological root above it.
fn find_horizon(f: &dyn Fn(f64) -> f64) -> Option<(f64, Option<f64>)> {
    let grid: Vec<f64> = (0..=4000).map(|i| 10f64.powf(-4.0 + 10.0 * i as f64 / 4000.0)).collect();
    let vals: Vec<f64> = grid.iter().map(|&l| f(l)).collect();
    let mut inner = None;
    let mut outer = None;
    for i in 0..grid.len() - 1 {
        if vals[i] < 0.0 && vals[i + 1] >= 0.0 {
            inner = Some(bisect(f, grid[i], grid[i + 1]));
            outer = None;
        } else if vals[i] >= 0.0 && vals[i + 1] < 0.0 && inner.is_some() && outer.is_none() {
            outer = Some(bisect(f, grid[i], grid[i + 1]));
        }
    }
    inner.map(|l0| (l0, outer))
}

fn bisect(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let fa_neg = f(a) < 0.0;
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (f(m) < 0.0) == fa_neg {
            a = m;
        } else {
            b = m;
        }
    }
    // The endpoint where F >= 0, so that √F stays real.
    if fa_neg {
        b
    } else {
        a
    }
}

fn gauss8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 4] = [0.183_434_642_495_649_8, 0.525_532_409_916_329, 0.796_666_477_413_626_7, 0.960_289_856_497_536_3];
    const W: [f64; 4] = [0.362_683_783_378_362, 0.313_706_645_877_887_3, 0.222_381_034_453_374_5, 0.101_228_536_290_376_3];
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    h * X.iter().zip(W).map(|(&x, w)| w * (f(c - h * x) + f(c + h * x))).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionMargin {
    pub holds: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub model: String,
    pub grid_points: usize,
    pub r_lo: f64,
    pub r_hi: f64,
    /// `min λ′`.
    pub c1: ConditionMargin,
    /// `min (λ″/λ + (K − λ′²)/λ²)`.
    pub c2: ConditionMargin,
    /// `min λ″`.
    pub c3: ConditionMargin,
    /// `min(λ″(0), −|λ′(0)|, scaled minimal increment of the monotone quantity)`.
    pub c4: ConditionMargin,
    pub c4_lambda_prime_at_0: f64,
    pub c4_lambda_second_at_0: f64,
    pub c4_monotone_margin: f64,
}

pub const CONDITION_GRID: usize = 2000;
const MONOTONE_TOL: f64 = 1e-9;

/// Samples (C1)–(C4) on a uniform grid of `(δ, r̄ − δ)`. Infinite domains are
/// truncated at `r = 10`.
pub fn check_conditions(model: &WarpedModel) -> ConditionReport {
    check_conditions_on(model, CONDITION_GRID)
}

pub fn check_conditions_on(model: &WarpedModel, points: usize) -> ConditionReport {
    let points = points.max(2);
    let delta = 1e-3;
    let top = if model.r_max().is_finite() { model.r_max() } else { 10.0 };
    let (lo, hi) = (delta, top - delta);
    let grid: Vec<f64> = (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect();
    let mut c1 = f64::INFINITY;
    let mut c2 = f64::INFINITY;
    let mut c3 = f64::INFINITY;
    let mut mono = f64::INFINITY;
    let mut prev: Option<f64> = None;
    for &r in &grid {
        let w = model.warping(r).expect("grid inside domain");
        c1 = c1.min(w.d1);
        c2 = c2.min(model.radial_bracket(r).expect("grid inside domain"));
        c3 = c3.min(w.d2);
        let q = model.scalar_monotone_quantity(r).expect("grid inside domain");
        if let Some(p) = prev {
            mono = mono.min((q - p) / q.abs().max(p.abs()).max(1.0));
        }
        prev = Some(q);
    }
    let w0 = model.warping(0.0).expect("r = 0 inside domain");
    let c4_margin = w0.d2.min(-w0.d1.abs()).min(mono);
    ConditionReport {
        model: model.name().to_string(),
        grid_points: points,
        r_lo: lo,
        r_hi: hi,
        c1: ConditionMargin { holds: c1 > 0.0, margin: c1 },
        c2: ConditionMargin { holds: c2 > 0.0, margin: c2 },
        c3: ConditionMargin { holds: c3 >= 0.0, margin: c3 },
        c4: ConditionMargin {
            holds: w0.d1.abs() <= 1e-12 && w0.d2 > 0.0 && mono >= -MONOTONE_TOL,
            margin: c4_margin,
        },
        c4_lambda_prime_at_0: w0.d1,
        c4_lambda_second_at_0: w0.d2,
        c4_monotone_margin: mono,
    }
}
