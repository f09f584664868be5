//! Composite Gauss-Legendre rules and compensated summation.

use crate::error::{Error, Result};
use std::sync::LazyLock;

pub const PANEL_ORDER: usize = 16;
pub const DEFAULT_NODES: usize = 2048;

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[-1, 1]`,
/// by Newton iteration on `P_order` from the Chebyshev initial guesses.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = order as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

static PANEL_RULE: LazyLock<(Vec<f64>, Vec<f64>)> = LazyLock::new(|| gauss_legendre(PANEL_ORDER));

/// Composite rule on `[a, b]` with `nodes / 16` equal panels of 16 points.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeRule {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl CompositeRule {
    pub fn new(a: f64, b: f64, nodes: usize) -> Result<Self> {
        if nodes < PANEL_ORDER || nodes % PANEL_ORDER != 0 {
            return Err(Error::InvalidParameter(format!(
                "node count must be a positive multiple of {PANEL_ORDER}, got {nodes}"
            )));
        }
        let panels = nodes / PANEL_ORDER;
        let (x, w) = &*PANEL_RULE;
        let h = (b - a) / panels as f64;
        let mut points = Vec::with_capacity(nodes);
        let mut weights = Vec::with_capacity(nodes);
        for p in 0..panels {
            let lo = a + p as f64 * h;
            let mid = lo + 0.5 * h;
            for (xi, wi) in x.iter().zip(w) {
                points.push(mid + 0.5 * h * xi);
                weights.push(0.5 * h * wi);
            }
        }
        Ok(Self { points, weights })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `Σ w_i f_i` for values already evaluated at the rule's points.
    pub fn apply(&self, values: &[f64]) -> f64 {
        neumaier_sum(self.weights.iter().zip(values).map(|(w, v)| w * v))
    }
}

/// Neumaier's improved Kahan summation, in iteration order.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(16);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-15);
        for deg in 0..32 {
            let exact = if deg % 2 == 0 { 2.0 / (deg as f64 + 1.0) } else { 0.0 };
            let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg)).sum();
            assert!((approx - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn small_rules_match_tables() {
        let (x, w) = gauss_legendre(2);
        assert_relative_eq!(x[1], 1.0 / 3f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(w[0], 1.0, max_relative = 1e-15);
        let (x, w) = gauss_legendre(3);
        assert_eq!(x[1], 0.0);
        assert_relative_eq!(w[1], 8.0 / 9.0, max_relative = 1e-15);
    }

    #[test]
    fn composite_rule_on_smooth_integrand() {
        let rule = CompositeRule::new(0.0, std::f64::consts::PI, 64).unwrap();
        let vals: Vec<f64> = rule.points.iter().map(|t| t.sin()).collect();
        assert!((rule.apply(&vals) - 2.0).abs() < 1e-14);
        assert!(CompositeRule::new(0.0, 1.0, 8).is_err());
        assert!(CompositeRule::new(0.0, 1.0, 40).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(neumaier_sum(v), 2.0);
    }
}
