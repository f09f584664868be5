//! Structured pass/fail records shared by every identity and inequality check.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// `lhs == rhs`; passes when `|residual| <= tolerance`.
    Identity,
    /// `lhs >= rhs`; passes when `residual >= -tolerance`.
    Inequality,
    /// Composite verdict computed by the check itself.
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityCase {
    /// All principal curvatures coincide.
    Isotropic,
    /// Exactly one curvature exceeds 1, all others equal 1 (only meaningful for k >= 2).
    SingleSpike,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub kind: CheckKind,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality: Option<EqualityCase>,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
}

/// Inequality residuals are scaled by `max(1, |lhs| + |rhs|)` so a fixed
/// one-sided tolerance is meaningful for large curvature products.
pub fn scaled_gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / (lhs.abs() + rhs.abs()).max(1.0)
}

impl CheckReport {
    pub fn identity(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = lhs - rhs;
        Self {
            name: name.into(),
            kind: CheckKind::Identity,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual.abs() <= tolerance,
            equality: None,
            metadata: BTreeMap::new(),
        }
    }

    /// A check of `lhs >= rhs` with a scaled residual.
    pub fn inequality(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let residual = scaled_gap(lhs, rhs);
        Self {
            name: name.into(),
            kind: CheckKind::Inequality,
            lhs,
            rhs,
            residual,
            tolerance,
            pass: residual.is_finite() && residual >= -tolerance,
            equality: None,
            metadata: BTreeMap::new(),
        }
    }

    /// Like [`CheckReport::inequality`], but with `lhs - rhs` supplied by the
    /// caller when a cancellation-free form of the difference is available.
    pub fn inequality_gap(
        name: impl Into<String>,
        lhs: f64,
        rhs: f64,
        gap: f64,
        tolerance: f64,
    ) -> Self {
        let mut report = Self::inequality(name, lhs, rhs, tolerance);
        report.residual = gap / (lhs.abs() + rhs.abs()).max(1.0);
        report.pass = report.residual.is_finite() && report.residual >= -tolerance;
        report
    }

    pub fn composite(name: impl Into<String>, residual: f64, tolerance: f64, pass: bool) -> Self {
        Self {
            name: name.into(),
            kind: CheckKind::Composite,
            lhs: residual,
            rhs: 0.0,
            residual,
            tolerance,
            pass,
            equality: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }

    pub fn with_equality(mut self, case: Option<EqualityCase>) -> Self {
        self.equality = case;
        self
    }
}
