//! Graph, structural and conditional entropies (nats) for SW, Erdős–Rényi and
//! preferential-attachment graphs, and the compressibility ratio.
//!
//! Asymptotic evaluators return the explicit leading terms only. The
//! unquantified `o(·)`/`O(·)` remainders are reported as separate slack
//! fields fixed at zero rather than folded into the values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::moments::s_sums_exact;
use crate::series::{
    binary_entropy, compensated_sum, log_factorial, log_power_tail, CompensatedSum,
};

/// Exact entropy of the independent edge family: every pair at distance `k`
/// contributes `h(p(k))`, with `n/2` antipodal pairs when `n` is even.
pub fn sw_entropy_exact(params: &ModelParams) -> f64 {
    let table = params.probability_table();
    let mut acc = CompensatedSum::new();
    for (k, &p) in table.iter().enumerate().skip(2) {
        acc.add(params.pairs_at_distance(k) as f64 * binary_entropy(p));
    }
    acc.value()
}

/// `C_a = a(1 + log 2)/(1 − a) + log((1 − a)·2^{1−a}) − 1`.
pub fn sw_entropy_constant(a: f64) -> f64 {
    a * (1.0 + std::f64::consts::LN_2) / (1.0 - a) + ((1.0 - a) * 2f64.powf(1.0 - a)).ln() - 1.0
}

/// The constant `K_a` with `H(G)/(n b) = log n − log b − K_a + o(1)` for the
/// exact entropy: `a/(1 − a) + log(2(1 − a)) − 1`.
///
/// It is smaller than [`sw_entropy_constant`] by `a² log 2/(1 − a)`; the two
/// agree only as `a → 0`.
pub fn sw_entropy_limit_constant(a: f64) -> f64 {
    a / (1.0 - a) + (2.0 * (1.0 - a)).ln() - 1.0
}

/// `n·b·(log n − log b − C_a)`.
pub fn sw_entropy_asymptotic(params: &ModelParams) -> f64 {
    let (n, b) = (params.n() as f64, params.b());
    n * b * (n.ln() - b.ln() - sw_entropy_constant(params.a()))
}

/// Leading terms of the structural entropy; they coincide with those of the
/// graph entropy.
pub fn sw_structural_entropy_asymptotic(params: &ModelParams) -> f64 {
    sw_entropy_asymptotic(params)
}

/// Explicit part of the bound `H(G|S) ≤ n log b + n log 5 + log(n/b) + O(1)`.
pub fn sw_conditional_entropy_upper(params: &ModelParams) -> f64 {
    let (n, b) = (params.n() as f64, params.b());
    n * b.ln() + n * 5f64.ln() + (n / b).ln()
}

/// Expected edge count: the `n` cycle edges plus `n·S₁/2` optional ones.
pub fn sw_expected_edges(params: &ModelParams) -> f64 {
    let n = params.n() as f64;
    n + n * s_sums_exact(params).0 / 2.0
}

/// Nats per expected edge.
pub fn compressibility_ratio(h_graph: f64, expected_edges: f64) -> Result<f64> {
    if expected_edges == 0.0 {
        return Err(Error::Domain(
            "compressibility with zero expected edges".into(),
        ));
    }
    if !(expected_edges > 0.0) {
        return Err(Error::Domain(format!(
            "expected edge count must be positive, got {expected_edges}"
        )));
    }
    Ok(h_graph / expected_edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub h_graph_exact: f64,
    pub h_graph_asymptotic: f64,
    /// `o(n b)` remainder of the graph-entropy expansion; not modelled.
    pub h_graph_slack: f64,
    pub c_a: f64,
    pub c_a_limit: f64,
    pub h_structure_asymptotic: f64,
    /// `max(h_graph_exact − h_conditional_upper, h_graph_exact − n log n)`.
    pub h_structure_lower: f64,
    pub h_structure_upper: f64,
    pub h_conditional_upper: f64,
    /// `O(1)` remainder of the conditional bound; not modelled.
    pub h_conditional_slack: f64,
    pub expected_edges: f64,
    pub compressibility: f64,
}

pub fn entropy_report(params: &ModelParams) -> EntropyReport {
    let n = params.n() as f64;
    let h_graph_exact = sw_entropy_exact(params);
    let h_conditional_upper = sw_conditional_entropy_upper(params);
    let expected_edges = sw_expected_edges(params);
    EntropyReport {
        n: params.n(),
        a: params.a(),
        b: params.b(),
        c: params.c(),
        h_graph_exact,
        h_graph_asymptotic: sw_entropy_asymptotic(params),
        h_graph_slack: 0.0,
        c_a: sw_entropy_constant(params.a()),
        c_a_limit: sw_entropy_limit_constant(params.a()),
        h_structure_asymptotic: sw_structural_entropy_asymptotic(params),
        h_structure_lower: (h_graph_exact - h_conditional_upper).max(h_graph_exact - n * n.ln()),
        h_structure_upper: h_graph_exact,
        h_conditional_upper,
        h_conditional_slack: 0.0,
        expected_edges,
        compressibility: compressibility_ratio(h_graph_exact, expected_edges)
            .expect("SW graphs always have the cycle edges"),
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(())
}

fn pairs(n: u64) -> f64 {
    n as f64 * (n as f64 - 1.0) / 2.0
}

/// `C(n, 2)·h(p)`.
pub fn er_entropy(n: u64, p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(pairs(n) * binary_entropy(p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErStructuralEntropy {
    /// `C(n, 2)·h(p) − log n!`.
    pub value: f64,
    /// Whether `log n / n < p < 1 − log n / n`, the range where the
    /// expansion is known to hold. Reported, not enforced.
    pub valid: bool,
    /// `O(log n / n^β)` remainder; not modelled.
    pub slack: f64,
}

pub fn er_structural_entropy_asymptotic(n: u64, p: f64) -> Result<ErStructuralEntropy> {
    check_probability(p)?;
    let threshold = if n >= 2 {
        (n as f64).ln() / n as f64
    } else {
        1.0
    };
    Ok(ErStructuralEntropy {
        value: pairs(n) * binary_entropy(p) - log_factorial(n),
        valid: p > threshold && 1.0 - p > threshold,
        slack: 0.0,
    })
}

/// Direct terms summed before switching to the tail expansion.
const PAG_DIRECT_TERMS: u64 = 1000;
/// Terms kept from `1/((1+y)(1+2y)) = Σ_j (−1)^j (2^{j+1} − 1) y^j`, `y = 1/d`.
const PAG_TAIL_ORDER: i32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PagEntropy {
    pub n: u64,
    pub m: u64,
    /// `A = Σ_{d≥m} log d / ((d+1)(d+2))`.
    pub a_constant: f64,
    /// Cut-off `D` after which the tail of `A` is evaluated by expansion.
    pub a_cutoff: u64,
    /// `∫_D^∞ log x / x² dx = (log D + 1)/D`, bounding the tail past `D`.
    pub a_tail_bound: f64,
    /// `m n log n + m(log 2m − 1 − log m! − A) n`.
    pub h_graph_asymptotic: f64,
    /// `(m − 1) n log n`.
    pub h_structure_leading: f64,
    /// `o(n)` remainder; not modelled.
    pub slack: f64,
}

/// `A(m) = Σ_{d≥m} log d / ((d+1)(d+2))`.
///
/// Terms up to `D = max(m, 1000)` are summed directly. Past `D` the summand is
/// expanded as `log d · Σ_j (−1)^j (2^{j+1} − 1) d^{−2−j}` and each
/// `Σ_{d>D} log d / d^s` is evaluated in closed form; the neglected terms are
/// below `(2/D)^{10}` relative.
pub fn pag_constant(m: u64) -> Result<(f64, u64)> {
    if m == 0 {
        return Err(Error::Domain("PAG needs m ≥ 1".into()));
    }
    let cutoff = m.max(PAG_DIRECT_TERMS);
    let mut acc = CompensatedSum::new();
    for d in m..=cutoff {
        let x = d as f64;
        acc.add(x.ln() / ((x + 1.0) * (x + 2.0)));
    }
    for j in 0..PAG_TAIL_ORDER {
        let coeff = (2f64.powi(j + 1) - 1.0) * if j % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(coeff * log_power_tail(2.0 + j as f64, cutoff)?);
    }
    Ok((acc.value(), cutoff))
}

pub fn pag_entropy_asymptotic(n: u64, m: u64) -> Result<PagEntropy> {
    let (a_constant, a_cutoff) = pag_constant(m)?;
    let (nf, mf) = (n as f64, m as f64);
    let log_m_fact = compensated_sum((2..=m).map(|k| (k as f64).ln()));
    let cut = a_cutoff as f64;
    Ok(PagEntropy {
        n,
        m,
        a_constant,
        a_cutoff,
        a_tail_bound: (cut.ln() + 1.0) / cut,
        h_graph_asymptotic: mf * nf * nf.ln()
            + mf * ((2.0 * mf).ln() - 1.0 - log_m_fact - a_constant) * nf,
        h_structure_leading: (mf - 1.0) * nf * nf.ln(),
        slack: 0.0,
    })
}
