//! Elementary symmetric functions, normalized mean curvatures, Newton
//! tensors and Gårding cones.
//!
//! Orders are `i32` so that the conventions `σ_{-1} = H_{-1} = 0` and
//! `σ_k = 0` for `k` beyond the number of entries can be used directly in
//! index arithmetic such as `H_{k-2}`.

use crate::delta::{for_each_injective, signed_permutations};
use crate::error::{Error, Result};
use nalgebra::DMatrix;

/// Binomial coefficient as `f64`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> f64 {
    if k < 0 || n < 0 || k > n {
        return 0.0;
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc as f64
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// `[σ_0, σ_1, …, σ_m]` of `values`, by the one-pass product recurrence
/// `e_j ← e_j + x·e_{j-1}`.
pub fn elementary_symmetric(values: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; values.len() + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e
}

/// `σ_k(values)` with the out-of-range conventions.
pub fn sigma_of(values: &[f64], k: i32) -> f64 {
    if k < 0 || k as usize > values.len() {
        return 0.0;
    }
    let k = k as usize;
    let mut e = vec![0.0; k + 1];
    e[0] = 1.0;
    for (i, &x) in values.iter().enumerate() {
        for j in (1..=(i + 1).min(k)).rev() {
            e[j] += x * e[j - 1];
        }
    }
    e[k]
}

/// `H_k(values) = σ_k / C(len, k)`, with `H_0 = 1` and zero out of range.
pub fn normalized_of(values: &[f64], k: i32) -> f64 {
    let m = values.len() as i64;
    if k < 0 || i64::from(k) > m {
        return 0.0;
    }
    sigma_of(values, k) / binomial(m, i64::from(k))
}

/// The ordered principal curvatures `κ_1, …, κ_{n-1}` of a hypersurface in
/// an `n`-dimensional ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct PrincipalSpectrum {
    kappa: Vec<f64>,
}

impl PrincipalSpectrum {
    pub fn new(kappa: Vec<f64>) -> Result<Self> {
        if kappa.len() < 2 {
            return Err(Error::InvalidSpectrum(format!(
                "need at least 2 principal curvatures, got {}",
                kappa.len()
            )));
        }
        if let Some(bad) = kappa.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidSpectrum(format!("non-finite entry {bad}")));
        }
        Ok(Self { kappa })
    }

    pub fn isotropic(value: f64, len: usize) -> Result<Self> {
        Self::new(vec![value; len])
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// Number of principal curvatures, `n - 1`.
    pub fn len(&self) -> usize {
        self.kappa.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ambient dimension `n`.
    pub fn ambient_dim(&self) -> usize {
        self.kappa.len() + 1
    }

    pub fn elementary(&self) -> Vec<f64> {
        elementary_symmetric(&self.kappa)
    }

    pub fn sigma(&self, k: i32) -> f64 {
        sigma_of(&self.kappa, k)
    }

    pub fn normalized_h(&self, k: i32) -> f64 {
        normalized_of(&self.kappa, k)
    }

    /// `[H_0, …, H_{n-1}]`.
    pub fn mean_curvatures(&self) -> Vec<f64> {
        let m = self.len() as i64;
        self.elementary()
            .into_iter()
            .enumerate()
            .map(|(k, s)| s / binomial(m, k as i64))
            .collect()
    }

    /// The spectrum with entry `j` (0-based) removed.
    pub fn deleted(&self, j: usize) -> Result<Vec<f64>> {
        if j >= self.len() {
            return Err(Error::IndexOutOfRange { index: j, len: self.len() });
        }
        let mut rest = self.kappa.clone();
        rest.remove(j);
        Ok(rest)
    }

    /// `σ_k(Λ_j)`: the k-th elementary function with entry `j` (0-based) removed.
    pub fn sigma_deleted(&self, k: i32, j: usize) -> Result<f64> {
        Ok(sigma_of(&self.deleted(j)?, k))
    }

    /// `H_k(Λ_j)`, normalized over the `n - 2` remaining entries.
    pub fn normalized_h_deleted(&self, k: i32, j: usize) -> Result<f64> {
        Ok(normalized_of(&self.deleted(j)?, k))
    }

    /// `max κ - min κ`.
    pub fn spread(&self) -> f64 {
        let (lo, hi) = self
            .kappa
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        hi - lo
    }

    pub fn min(&self) -> f64 {
        self.kappa.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn in_cone(&self, label: ConeLabel) -> bool {
        cone_membership(self, label)
    }

    pub fn is_horoconvex(&self, tol: f64) -> bool {
        horoconvex(self, tol)
    }
}

/// Gårding cone `Γ_k^+` (strict) or its closure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConeLabel {
    pub k: usize,
    pub strict: bool,
}

impl ConeLabel {
    pub fn open(k: usize) -> Self {
        Self { k, strict: true }
    }

    pub fn closed(k: usize) -> Self {
        Self { k, strict: false }
    }
}

/// `σ_j > 0` (strict) or `σ_j >= 0` (closure) for every `1 <= j <= k`.
pub fn cone_membership(spectrum: &PrincipalSpectrum, label: ConeLabel) -> bool {
    let e = spectrum.elementary();
    let k = label.k.min(spectrum.len());
    e[1..=k]
        .iter()
        .all(|&s| if label.strict { s > 0.0 } else { s >= 0.0 })
}

/// Horospherical convexity: every principal curvature is at least `1 - tol`.
pub fn horoconvex(spectrum: &PrincipalSpectrum, tol: f64) -> bool {
    spectrum.min() >= 1.0 - tol
}

/// A real symmetric `(n-1)×(n-1)` matrix, e.g. the second fundamental form in
/// an orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeMatrix {
    entries: DMatrix<f64>,
}

impl ShapeMatrix {
    /// Symmetrizes `(A + Aᵀ)/2`, so the stored matrix is exactly symmetric.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter(format!(
                "shape matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("shape matrix".into()));
        }
        let entries = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self { entries })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self { entries: DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(values)) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { entries: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.entries.trace()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.entries.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `σ_k` of the eigenvalues.
    pub fn sigma(&self, k: i32) -> f64 {
        sigma_of(&self.eigenvalues(), k)
    }

    pub fn mul(&self, other: &ShapeMatrix) -> DMatrix<f64> {
        &self.entries * &other.entries
    }
}

/// `T_k(B)` from `T_0 = Id`, `T_k = σ_k(B)·Id − B·T_{k−1}`; `T_{-1} = 0`.
pub fn newton_tensor(b: &ShapeMatrix, k: i32) -> ShapeMatrix {
    let dim = b.dim();
    if k < 0 {
        return ShapeMatrix { entries: DMatrix::zeros(dim, dim) };
    }
    let sigmas = elementary_symmetric(&b.eigenvalues());
    let mut t = DMatrix::<f64>::identity(dim, dim);
    for j in 1..=(k as usize) {
        let s = sigmas.get(j).copied().unwrap_or(0.0);
        t = DMatrix::identity(dim, dim) * s - b.entries() * &t;
    }
    // The product B·T_{k-1} is symmetric in exact arithmetic; drop round-off asymmetry.
    let entries = (&t + t.transpose()) * 0.5;
    ShapeMatrix { entries }
}

pub const DELTA_MAX_ORDER: i32 = 4;
pub const DELTA_MAX_DIM: usize = 8;

/// `(T_k)^i_j = (1/k!) δ^{i i_1…i_k}_{j j_1…j_k} B_{i_1}^{j_1}⋯B_{i_k}^{j_k}`,
/// evaluated literally.  Factorial cost; restricted to `k <= 4`, `dim <= 8`.
pub fn newton_tensor_delta(b: &ShapeMatrix, k: i32) -> Result<ShapeMatrix> {
    let dim = b.dim();
    if k > DELTA_MAX_ORDER || dim > DELTA_MAX_DIM {
        return Err(Error::SizeLimit(format!(
            "delta expansion supports k <= {DELTA_MAX_ORDER} and dim <= {DELTA_MAX_DIM}, got k={k}, dim={dim}"
        )));
    }
    if k < 0 {
        return Ok(ShapeMatrix { entries: DMatrix::zeros(dim, dim) });
    }
    let k = k as usize;
    let norm = crate::symmetric::factorial(k as u32);
    let mut out = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        for_each_injective(dim, k, &[i], &mut |tail| {
            let mut upper = Vec::with_capacity(k + 1);
            upper.push(i);
            upper.extend_from_slice(tail);
            for (lower, sign) in signed_permutations(&upper) {
                let mut prod = f64::from(sign);
                for a in 1..=k {
                    prod *= b.get(upper[a], lower[a]);
                }
                out[(i, lower[0])] += prod;
            }
        });
    }
    Ok(ShapeMatrix { entries: out / norm })
}
