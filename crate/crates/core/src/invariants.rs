//! Gauss-Bonnet curvatures of hypersurfaces in space forms, their odd
//! companions, the hat substitution `κ = 1 + κ̂` and the `X_{s,t}` families.

use crate::check::{CheckReport, EqualityCase};
use crate::delta::{for_each_injective, permutation_sign};
use crate::error::{Error, Result};
use crate::symmetric::{binomial, cone_membership, factorial, normalized_of, ConeLabel, PrincipalSpectrum, ShapeMatrix};
use serde::{Deserialize, Serialize};

/// Sectional curvature of the ambient space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpaceFormSign {
    Hyperbolic,
    Flat,
    Spherical,
}

impl SpaceFormSign {
    pub const ALL: [SpaceFormSign; 3] = [Self::Hyperbolic, Self::Flat, Self::Spherical];

    pub fn value(self) -> i32 {
        match self {
            Self::Hyperbolic => -1,
            Self::Flat => 0,
            Self::Spherical => 1,
        }
    }

    pub fn from_value(eps: i32) -> Result<Self> {
        match eps {
            -1 => Ok(Self::Hyperbolic),
            0 => Ok(Self::Flat),
            1 => Ok(Self::Spherical),
            _ => Err(Error::InvalidParameter(format!("space form sign must be -1, 0 or 1, got {eps}"))),
        }
    }

    fn as_f64(self) -> f64 {
        f64::from(self.value())
    }
}

/// Mixed curvature tensor `R_{ij}^{kl}` in an orthonormal frame, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannTensor {
    dim: usize,
    data: Vec<f64>,
}

impl RiemannTensor {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim.pow(4)] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.offset(i, j, k, l)]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, l: usize, value: f64) {
        let o = self.offset(i, j, k, l);
        self.data[o] = value;
    }

    /// `R = Σ R_{ij}^{ij}`.
    pub fn scalar(&self) -> f64 {
        let d = self.dim;
        (0..d).flat_map(|i| (0..d).map(move |j| (i, j))).map(|(i, j)| self.get(i, j, i, j)).sum()
    }

    /// `Ric_i^k = Σ_j R_{ij}^{kj}`.
    pub fn ricci(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        (0..d)
            .map(|i| (0..d).map(|k| (0..d).map(|j| self.get(i, j, k, j)).sum()).collect())
            .collect()
    }

    pub fn norm_squared(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    /// Largest violation of the algebraic curvature-tensor symmetries.
    pub fn symmetry_defect(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let r = self.get(i, j, k, l);
                        worst = worst
                            .max((r + self.get(j, i, k, l)).abs())
                            .max((r + self.get(i, j, l, k)).abs())
                            .max((r - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        worst
    }
}

/// Shifted curvatures `κ̂ = κ - 1`, all nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct HatSpectrum {
    kappa_hat: Vec<f64>,
}

impl HatSpectrum {
    pub fn new(kappa_hat: Vec<f64>) -> Result<Self> {
        if kappa_hat.len() < 2 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least 2 entries, got {}",
                kappa_hat.len()
            )));
        }
        if let Some(bad) = kappa_hat.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidSpectrum(format!("hat entries must be finite and >= 0, got {bad}")));
        }
        Ok(Self { kappa_hat })
    }

    /// `κ̂ = κ - 1`; requires a horoconvex spectrum.
    pub fn from_spectrum(spectrum: &PrincipalSpectrum) -> Result<Self> {
        if !spectrum.is_horoconvex(0.0) {
            return Err(Error::Precondition(format!(
                "spectrum is not horoconvex (min κ = {})",
                spectrum.min()
            )));
        }
        Self::new(spectrum.kappa().iter().map(|k| k - 1.0).collect())
    }

    pub fn kappa_hat(&self) -> &[f64] {
        &self.kappa_hat
    }

    pub fn len(&self) -> usize {
        self.kappa_hat.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `Ĥ_j`, zero for `j < 0` and `j > len`.
    pub fn h(&self, j: i32) -> f64 {
        normalized_of(&self.kappa_hat, j)
    }

    pub fn mean_curvatures(&self) -> Vec<f64> {
        (0..=self.len() as i32).map(|j| self.h(j)).collect()
    }

    pub fn to_spectrum(&self) -> PrincipalSpectrum {
        PrincipalSpectrum::new(self.kappa_hat.iter().map(|k| k + 1.0).collect())
            .expect("a valid hat spectrum shifts to a valid spectrum")
    }
}

/// `R_{ij}^{kl} = h_i^k h_j^l − h_i^l h_j^k + ε(δ_i^k δ_j^l − δ_i^l δ_j^k)`.
pub fn gauss_riemann(h: &ShapeMatrix, eps: SpaceFormSign) -> RiemannTensor {
    let d = h.dim();
    let e = eps.as_f64();
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut r = RiemannTensor::zeros(d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    let v = h.get(i, k) * h.get(j, l) - h.get(i, l) * h.get(j, k)
                        + e * (delta(i, k) * delta(j, l) - delta(i, l) * delta(j, k));
                    r.set(i, j, k, l, v);
                }
            }
        }
    }
    r
}

pub const LK_MAX_DIM: usize = 8;
pub const LK_MAX_ORDER: usize = 3;

/// `L_k = 2^{-k} δ^{i_1…i_{2k}}_{j_1…j_{2k}} R_{i_1i_2}^{j_1j_2} ⋯ R_{i_{2k-1}i_{2k}}^{j_{2k-1}j_{2k}}`
/// by literal enumeration. The lower indices run over orderings of the
/// upper ones, built pair by pair so that vanishing curvature entries prune
/// the search.
pub fn lk_from_riemann(r: &RiemannTensor, k: usize) -> Result<f64> {
    let d = r.dim();
    if d > LK_MAX_DIM || k > LK_MAX_ORDER {
        return Err(Error::SizeLimit(format!(
            "Gauss-Bonnet contraction supports dim <= {LK_MAX_DIM} and k <= {LK_MAX_ORDER}, got dim={d}, k={k}"
        )));
    }
    // No injective 2k-tuples of indices exist.
    if 2 * k > d {
        return Ok(0.0);
    }
    if k == 0 {
        return Ok(1.0);
    }
    let len = 2 * k;
    let mut total = 0.0;
    let mut lower = vec![0usize; len];
    let mut used = vec![false; len];
    for_each_injective(d, len, &[], &mut |upper| {
        lower_pairs(r, upper, 0, 1.0, &mut lower, &mut used, &mut total);
    });
    Ok(total / 2f64.powi(k as i32))
}

fn lower_pairs(
    r: &RiemannTensor,
    upper: &[usize],
    pair: usize,
    product: f64,
    lower: &mut [usize],
    used: &mut [bool],
    total: &mut f64,
) {
    let len = upper.len();
    if 2 * pair == len {
        let positions: Vec<usize> = lower.iter().map(|j| upper.iter().position(|u| u == j).unwrap()).collect();
        *total += f64::from(permutation_sign(&positions)) * product;
        return;
    }
    let (i1, i2) = (upper[2 * pair], upper[2 * pair + 1]);
    for a in 0..len {
        if used[a] {
            continue;
        }
        for b in 0..len {
            if b == a || used[b] {
                continue;
            }
            let v = r.get(i1, i2, upper[a], upper[b]);
            if v == 0.0 {
                continue;
            }
            used[a] = true;
            used[b] = true;
            lower[2 * pair] = upper[a];
            lower[2 * pair + 1] = upper[b];
            lower_pairs(r, upper, pair + 1, product * v, lower, used, total);
            used[a] = false;
            used[b] = false;
        }
    }
}

/// `C(n-1, 2k)·(2k)!`, the normalization of `L_k` and `N_k`.
pub fn gb_prefactor(len: usize, k: usize) -> f64 {
    binomial(len as i64, 2 * k as i64) * factorial(2 * k as u32)
}

/// `L̃_k = Σ_i C(k,i) ε^i H_{2k-2i}`.
pub fn tilde_l(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    if eps == SpaceFormSign::Hyperbolic && spectrum.is_horoconvex(0.0) {
        return tilde_l_hat(&HatSpectrum::from_spectrum(spectrum).unwrap(), k);
    }
    alternating(spectrum, eps, k, 0)
}

/// `Ñ_k = Σ_i C(k,i) ε^i H_{2k-2i+1}`.
pub fn tilde_n(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    if eps == SpaceFormSign::Hyperbolic && spectrum.is_horoconvex(0.0) && 2 * k < spectrum.len() {
        return tilde_n_hat(&HatSpectrum::from_spectrum(spectrum).unwrap(), k);
    }
    alternating(spectrum, eps, k, 1)
}

/// The plain sums in `H`, without the hat shortcut.
pub fn tilde_l_direct(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    alternating(spectrum, eps, k, 0)
}

pub fn tilde_n_direct(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    alternating(spectrum, eps, k, 1)
}

fn alternating(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize, shift: i32) -> f64 {
    let e = eps.as_f64();
    (0..=k)
        .map(|i| {
            let order = 2 * (k - i) as i32 + shift;
            binomial(k as i64, i as i64) * e.powi(i as i32) * spectrum.normalized_h(order)
        })
        .sum()
}

pub fn lk_from_h(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    gb_prefactor(spectrum.len(), k) * tilde_l_direct(spectrum, eps, k)
}

pub fn nk_from_h(spectrum: &PrincipalSpectrum, eps: SpaceFormSign, k: usize) -> f64 {
    gb_prefactor(spectrum.len(), k) * tilde_n_direct(spectrum, eps, k)
}

/// Hyperbolic `L̃_k = Σ_i 2^i C(k,i) Ĥ_{2k-i}`.
pub fn tilde_l_hat(hat: &HatSpectrum, k: usize) -> f64 {
    x_st(hat, k as i32, k as i32)
}

/// The odd part `Ñ_k − L̃_k = Σ_i 2^i C(k,i) Ĥ_{2k+1-i}` of the hyperbolic companion.
pub fn tilde_n_hat_odd(hat: &HatSpectrum, k: usize) -> f64 {
    x_st(hat, k as i32 + 1, k as i32)
}

/// Hyperbolic `Ñ_k`. Since `H_j = Σ_l C(j,l) Ĥ_l`, the odd sum picks up the
/// even one: `Ñ_k = L̃_k + Σ_i 2^i C(k,i) Ĥ_{2k+1-i}`.
pub fn tilde_n_hat(hat: &HatSpectrum, k: usize) -> f64 {
    tilde_l_hat(hat, k) + tilde_n_hat_odd(hat, k)
}

/// `X_{s,t} = Σ_{i=0}^t 2^i C(t,i) Ĥ_{s+t-i}`.
pub fn x_st(hat: &HatSpectrum, s: i32, t: i32) -> f64 {
    (0..=t.max(-1))
        .map(|i| 2f64.powi(i) * binomial(i64::from(t), i64::from(i)) * hat.h(s + t - i))
        .sum()
}

/// Spherical `X_{s,t} = Σ_{i=0}^t C(t,i) H_{s+2t-2i}`.
pub fn x_st_spherical(spectrum: &PrincipalSpectrum, s: i32, t: i32) -> f64 {
    (0..=t.max(-1))
        .map(|i| binomial(i64::from(t), i64::from(i)) * spectrum.normalized_h(s + 2 * t - 2 * i))
        .sum()
}

pub const EQUALITY_THRESHOLD: f64 = 1e-8;

/// Structural equality class of a horoconvex spectrum: isotropic, or a
/// single curvature above 1 with the rest at 1 (counted only for `k >= 2`).
pub fn classify_equality(spectrum: &PrincipalSpectrum, k: usize) -> Option<EqualityCase> {
    if spectrum.spread() < EQUALITY_THRESHOLD {
        return Some(EqualityCase::Isotropic);
    }
    let above = spectrum.kappa().iter().filter(|&&x| x - 1.0 > EQUALITY_THRESHOLD).count();
    let at_one = spectrum.kappa().iter().filter(|&&x| (x - 1.0).abs() < EQUALITY_THRESHOLD).count();
    if k >= 2 && above == 1 && at_one == spectrum.len() - 1 {
        return Some(EqualityCase::SingleSpike);
    }
    None
}

pub const STRICT_THRESHOLD: f64 = 1e-12;
pub const INEQUALITY_TOL: f64 = 1e-10;

fn hyperbolic_order(spectrum: &PrincipalSpectrum, k: usize, min_k: usize) -> Result<HatSpectrum> {
    let m = spectrum.len();
    if k < min_k || 2 * k + 1 > m {
        return Err(Error::InvalidParameter(format!("k = {k} needs {min_k} <= k and 2k + 1 <= {m}")));
    }
    HatSpectrum::from_spectrum(spectrum)
}

/// `H_1 L̃_k ≥ Ñ_k` for horoconvex `κ`. The gap is evaluated as
/// `Ĥ_1 L̃_k − (Ñ_k − L̃_k)`, which has no cancellation for `κ̂ ≥ 0`.
pub fn check_refined_nm(spectrum: &PrincipalSpectrum, k: usize) -> Result<CheckReport> {
    let hat = hyperbolic_order(spectrum, k, 1)?;
    let l = tilde_l_hat(&hat, k);
    let odd = tilde_n_hat_odd(&hat, k);
    let h1 = 1.0 + hat.h(1);
    let gap = hat.h(1) * l - odd;
    Ok(CheckReport::inequality_gap("refined-newton-maclaurin", h1 * l, l + odd, gap, INEQUALITY_TOL)
        .with("k", k)
        .with("n", spectrum.ambient_dim())
        .with_equality(classify_equality(spectrum, k)))
}

pub fn check_refined_nm_all(spectrum: &PrincipalSpectrum) -> Result<Vec<CheckReport>> {
    (1..=(spectrum.len() - 1) / 2).map(|k| check_refined_nm(spectrum, k)).collect()
}

/// `Ñ_{k−1} L̃_k ≥ Ñ_k L̃_{k−1}` for horoconvex `κ`, `k >= 1`.
///
/// Writing `Ñ_j = L̃_j + O_j` with `O_j` the odd hat part, the gap equals
/// `O_{k−1} L̃_k − O_k L̃_{k−1}`.
pub fn check_general_nm(spectrum: &PrincipalSpectrum, k: usize) -> Result<CheckReport> {
    let hat = hyperbolic_order(spectrum, k, 1)?;
    let (l_prev, l_k) = (tilde_l_hat(&hat, k - 1), tilde_l_hat(&hat, k));
    let (o_prev, o_k) = (tilde_n_hat_odd(&hat, k - 1), tilde_n_hat_odd(&hat, k));
    let lhs = (l_prev + o_prev) * l_k;
    let rhs = (l_k + o_k) * l_prev;
    let gap = o_prev * l_k - o_k * l_prev;
    Ok(CheckReport::inequality_gap("general-newton-maclaurin", lhs, rhs, gap, INEQUALITY_TOL)
        .with("k", k)
        .with("n", spectrum.ambient_dim())
        .with_equality(classify_equality(spectrum, k)))
}

pub fn check_general_nm_all(spectrum: &PrincipalSpectrum) -> Result<Vec<CheckReport>> {
    (1..=(spectrum.len() - 1) / 2).map(|k| check_general_nm(spectrum, k)).collect()
}

/// `X_{s,t}^2 ≥ X_{s+1,t} X_{s−1,t}`.
pub fn check_x_log_concavity(hat: &HatSpectrum, s: i32, t: i32) -> Result<CheckReport> {
    if s < 1 || t < 0 {
        return Err(Error::InvalidParameter(format!("need s >= 1 and t >= 0, got s={s}, t={t}")));
    }
    let x = x_st(hat, s, t);
    let lhs = x * x;
    let rhs = x_st(hat, s + 1, t) * x_st(hat, s - 1, t);
    Ok(CheckReport::inequality("x-family-log-concavity", lhs, rhs, INEQUALITY_TOL)
        .with("s", s)
        .with("t", t)
        .with("n", hat.len() + 1))
}

/// Cone order needed by the spherical inequality at `(s, t)`.
pub fn spherical_cone_order(len: usize, s: i32, t: i32) -> usize {
    ((s + 2 * t + 1).max(1) as usize).min(len)
}

/// `X_{s,t} X_{s+1,t} ≥ X_{s−1,t} X_{s+2,t}` for the spherical family.
pub fn check_spherical_ineq(spectrum: &PrincipalSpectrum, s: i32, t: i32) -> Result<CheckReport> {
    if s < 1 || t < 0 {
        return Err(Error::InvalidParameter(format!("need s >= 1 and t >= 0, got s={s}, t={t}")));
    }
    let order = spherical_cone_order(spectrum.len(), s, t);
    if !cone_membership(spectrum, ConeLabel::closed(order)) {
        return Err(Error::Precondition(format!("spectrum is not {order}-convex")));
    }
    let lhs = x_st_spherical(spectrum, s, t) * x_st_spherical(spectrum, s + 1, t);
    let rhs = x_st_spherical(spectrum, s - 1, t) * x_st_spherical(spectrum, s + 2, t);
    Ok(CheckReport::inequality("spherical-x-family", lhs, rhs, INEQUALITY_TOL)
        .with("s", s)
        .with("t", t)
        .with("n", spectrum.ambient_dim()))
}

pub const PERMUTATION_MAX_LEN: usize = 9;

/// `Σ κ_{i_1}(κ_{i_2}κ_{i_3} − 1)⋯(κ_{i_{2k−2}}κ_{i_{2k−1}} − 1)(κ_{i_{2k}} − κ_{i_{2k+1}})^2`
/// over injective index tuples.
pub fn permutation_sum(spectrum: &PrincipalSpectrum, k: usize) -> Result<f64> {
    let m = spectrum.len();
    if m > PERMUTATION_MAX_LEN || k == 0 || 2 * k + 1 > m {
        return Err(Error::SizeLimit(format!(
            "permutation sum supports len <= {PERMUTATION_MAX_LEN} and 1 <= k with 2k+1 <= len, got len={m}, k={k}"
        )));
    }
    let kappa = spectrum.kappa();
    let mut total = 0.0;
    for_each_injective(m, 2 * k + 1, &[], &mut |idx| {
        let mut term = kappa[idx[0]];
        for p in 0..k - 1 {
            term *= kappa[idx[1 + 2 * p]] * kappa[idx[2 + 2 * p]] - 1.0;
        }
        let d = kappa[idx[2 * k - 1]] - kappa[idx[2 * k]];
        total += term * d * d;
    });
    Ok(total)
}

/// Compares the brute-force permutation sum with `−(Ñ_k − H_1 L̃_k)`.
/// The report's residual is the sum itself (expected nonnegative); the
/// measured ratio is recorded as metadata when the reference is nonzero.
pub fn check_permutation_sum(spectrum: &PrincipalSpectrum, k: usize) -> Result<CheckReport> {
    let sum = permutation_sum(spectrum, k)?;
    let hat = HatSpectrum::from_spectrum(spectrum)?;
    let gap = hat.h(1) * tilde_l_hat(&hat, k) - tilde_n_hat_odd(&hat, k);
    let signs_agree = (sum > STRICT_THRESHOLD) == (gap > STRICT_THRESHOLD);
    let mut report = CheckReport::composite("permutation-sum", sum, INEQUALITY_TOL, sum >= -INEQUALITY_TOL && signs_agree)
        .with("k", k)
        .with("n", spectrum.ambient_dim())
        .with("reference", gap);
    report.lhs = sum;
    report.rhs = gap;
    if gap != 0.0 {
        report = report.with("ratio", sum / gap);
    }
    Ok(report)
}
