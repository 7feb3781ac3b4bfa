//! First and second moment sums of the optional-edge probabilities, the mean
//! degree, and the maximum-degree tail check.

use serde::Serialize;

use crate::graph::LabelledGraph;
use crate::model::ModelParams;
use crate::series::{zeta, CompensatedSum};

/// `a = 1/2` is matched exactly first, then within this tolerance.
pub const HALF_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    BelowHalf,
    Half,
    AboveHalf,
}

impl Regime {
    pub fn of(a: f64) -> Self {
        if a == 0.5 || (a - 0.5).abs() < HALF_TOLERANCE {
            Regime::Half
        } else if a < 0.5 {
            Regime::BelowHalf
        } else {
            Regime::AboveHalf
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport {
    pub s1_exact: f64,
    pub s1_asymptotic: f64,
    pub s2_exact: f64,
    pub s2_asymptotic: f64,
    pub regime: Regime,
    pub mean_degree_exact: f64,
    pub mean_degree_asymptotic: f64,
}

/// `(S₁, S₂)`: per-vertex sums of `p(k)` and `p(k)²` over optional
/// neighbours. For even `n` the antipodal term has coefficient 1.
pub fn s_sums_exact(params: &ModelParams) -> (f64, f64) {
    let table = params.probability_table();
    let n = params.n();
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    for (k, &p) in table.iter().enumerate().skip(2) {
        let w = if n.is_multiple_of(2) && k == n / 2 {
            1.0
        } else {
            2.0
        };
        s1.add(w * p);
        s2.add(w * p * p);
    }
    (s1.value(), s2.value())
}

/// Leading-order `(S₁, S₂)` in the three `a` regimes.
pub fn s_sums_asymptotic(params: &ModelParams) -> (f64, f64, Regime) {
    let (n, a, b) = (params.n() as f64, params.a(), params.b());
    let regime = Regime::of(a);
    let s2 = match regime {
        Regime::BelowHalf => 4.0 * (1.0 - a).powi(2) / (1.0 - 2.0 * a) * b * b / n,
        Regime::Half => b * b * n.ln() / n,
        Regime::AboveHalf => {
            // 2a ∈ (1, 2) is never near the pole here
            let z = zeta(2.0 * a).expect("2a > 1");
            2f64.powf(3.0 - 2.0 * a) * (1.0 - a).powi(2) * z * b * b / n.powf(2.0 - 2.0 * a)
        }
    };
    (2.0 * b, s2, regime)
}

/// The `a > 1/2` leading term with the excluded `k = 1` summand removed,
/// i.e. `ζ(2a) − 1` in place of `ζ(2a)`. Only meaningful for `a > 1/2`.
pub fn s2_above_half_without_unit_term(params: &ModelParams) -> f64 {
    let (n, a, b) = (params.n() as f64, params.a(), params.b());
    let z = zeta(2.0 * a).expect("2a > 1");
    2f64.powf(3.0 - 2.0 * a) * (1.0 - a).powi(2) * (z - 1.0) * b * b / n.powf(2.0 - 2.0 * a)
}

pub fn mean_degree_exact(params: &ModelParams) -> f64 {
    2.0 + s_sums_exact(params).0
}

pub fn mean_degree_asymptotic(params: &ModelParams) -> f64 {
    2.0 * params.b() + 2.0
}

/// Variance of a single vertex degree: `Σ p(k)(1 − p(k))` over its optional
/// neighbours, `= S₁ − S₂`.
pub fn degree_variance(params: &ModelParams) -> f64 {
    let (s1, s2) = s_sums_exact(params);
    s1 - s2
}

pub fn moment_report(params: &ModelParams) -> MomentReport {
    let (s1_exact, s2_exact) = s_sums_exact(params);
    let (s1_asymptotic, s2_asymptotic, regime) = s_sums_asymptotic(params);
    MomentReport {
        s1_exact,
        s1_asymptotic,
        s2_exact,
        s2_asymptotic,
        regime,
        mean_degree_exact: 2.0 + s1_exact,
        mean_degree_asymptotic: mean_degree_asymptotic(params),
    }
}

/// Maximum degree and whether it exceeds `9b/2`.
pub fn max_degree_exceedance(g: &LabelledGraph, b: f64) -> (usize, bool) {
    let d = g.max_degree();
    (d, d as f64 > 4.5 * b)
}
