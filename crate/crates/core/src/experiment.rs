//! Monte Carlo and sweep drivers. Each returns plain rows with every input,
//! estimate, target and a pass flag, ready for CSV or JSON output.
//!
//! Trials run in parallel; trial `i` uses seed `base ⊕ i` and results are
//! collected in trial order, so output never depends on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::entropy::{
    compressibility_ratio, sw_entropy_asymptotic, sw_entropy_constant, sw_entropy_exact,
    sw_entropy_limit_constant, sw_expected_edges,
};
use crate::error::{Error, Result};
use crate::model::{sample_sw, ModelParams};
use crate::moments::{
    max_degree_exceedance, mean_degree_asymptotic, mean_degree_exact,
    s2_above_half_without_unit_term, s_sums_asymptotic, s_sums_exact, Regime,
};
use crate::rng::{rng_from_seed, trial_seed, uniform};
use crate::symmetry::{canonical_form_with_budget, z_statistic, Permutation};

/// `b` either given directly or as the preset `(log n)²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BSpec {
    Value(f64),
    LogSquared,
}

impl BSpec {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            BSpec::Value(b) => b,
            BSpec::LogSquared => (n as f64).ln().powi(2),
        }
    }
}

fn trials_par<T: Send>(trials: u64, seed: u64, f: impl Fn(u64) -> T + Sync) -> Vec<T> {
    (0..trials)
        .into_par_iter()
        .map(|i| f(trial_seed(seed, i)))
        .collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let t = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / t;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0);
    (mean, (var / t).sqrt())
}

#[derive(Debug, Clone, Serialize)]
pub struct MeanDegreeRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
    pub empirical_mean: f64,
    pub standard_error: f64,
    pub exact: f64,
    pub asymptotic: f64,
    pub within_3se: bool,
    pub exact_vs_asymptotic: f64,
    pub within_5pct: bool,
    pub pass: bool,
}

/// Mean degree `2|E|/n` per sampled graph, averaged over trials.
pub fn mean_degree_experiment(params: &ModelParams, trials: u64, seed: u64) -> MeanDegreeRow {
    let n = params.n();
    let degrees = trials_par(trials, seed, |s| {
        2.0 * sample_sw(params, s).edge_count() as f64 / n as f64
    });
    let (empirical_mean, standard_error) = mean_and_se(&degrees);
    let exact = mean_degree_exact(params);
    let asymptotic = mean_degree_asymptotic(params);
    let within_3se = (empirical_mean - exact).abs() <= 3.0 * standard_error;
    let exact_vs_asymptotic = (exact - asymptotic).abs() / asymptotic;
    let within_5pct = exact_vs_asymptotic <= 0.05;
    MeanDegreeRow {
        n,
        a: params.a(),
        b: params.b(),
        c: params.c(),
        trials,
        seed,
        empirical_mean,
        standard_error,
        exact,
        asymptotic,
        within_3se,
        exact_vs_asymptotic,
        within_5pct,
        pass: within_3se && within_5pct,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntropySweepRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub h_exact: f64,
    pub h_asymptotic: f64,
    pub relative_gap: f64,
    pub c_a: f64,
    /// `log n − log b − h_exact/(n b)`.
    pub c_a_empirical: f64,
    pub c_a_limit: f64,
    pub expected_edges: f64,
    pub compressibility: f64,
    pub compressibility_over_log_n: f64,
    pub gap_shrinking: bool,
    pub pass: bool,
}

/// Exact vs asymptotic graph entropy and compressibility over `ns`.
pub fn entropy_sweep(a: f64, ns: &[usize], b: BSpec) -> Result<Vec<EntropySweepRow>> {
    let mut rows: Vec<EntropySweepRow> = Vec::with_capacity(ns.len());
    for &n in ns {
        let params = ModelParams::new(n, a, b.resolve(n))?;
        let (nf, bf) = (n as f64, params.b());
        let h_exact = sw_entropy_exact(&params);
        let h_asymptotic = sw_entropy_asymptotic(&params);
        let relative_gap = (h_exact - h_asymptotic).abs() / h_exact;
        let expected_edges = sw_expected_edges(&params);
        let compressibility = compressibility_ratio(h_exact, expected_edges)?;
        let gap_shrinking = rows
            .last()
            .is_none_or(|prev| relative_gap < prev.relative_gap);
        rows.push(EntropySweepRow {
            n,
            a,
            b: bf,
            c: params.c(),
            h_exact,
            h_asymptotic,
            relative_gap,
            c_a: sw_entropy_constant(a),
            c_a_empirical: nf.ln() - bf.ln() - h_exact / (nf * bf),
            c_a_limit: sw_entropy_limit_constant(a),
            expected_edges,
            compressibility,
            compressibility_over_log_n: compressibility / nf.ln(),
            gap_shrinking,
            pass: relative_gap <= 0.05 && gap_shrinking,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct TailsRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
    pub threshold: f64,
    pub exceed_count: u64,
    pub exceed_fraction: f64,
    pub largest_max_degree: usize,
    pub pass: bool,
}

/// Fraction of sampled graphs whose maximum degree exceeds `9b/2`.
pub fn tails_experiment(params: &ModelParams, trials: u64, seed: u64) -> TailsRow {
    let results = trials_par(trials, seed, |s| {
        max_degree_exceedance(&sample_sw(params, s), params.b())
    });
    let exceed_count = results.iter().filter(|r| r.1).count() as u64;
    let exceed_fraction = exceed_count as f64 / trials as f64;
    TailsRow {
        n: params.n(),
        a: params.a(),
        b: params.b(),
        c: params.c(),
        trials,
        seed,
        threshold: 4.5 * params.b(),
        exceed_count,
        exceed_fraction,
        largest_max_degree: results.iter().map(|r| r.0).max().unwrap_or(0),
        pass: trials > 0 && exceed_fraction <= 0.01,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ZConcentrationRow {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
    pub mean_z: f64,
    pub min_z: usize,
    pub zero_trials: u64,
    /// `0.8 · 2 d(π) b` with `d(π) = 2`.
    pub target: f64,
    pub pass: bool,
}

/// A uniformly random transposition, drawn from the stream seeded with `!seed`
/// so it is independent of the graph sampled from `seed`.
pub fn random_transposition(n: usize, seed: u64) -> Permutation {
    let mut rng = rng_from_seed(!seed);
    let i = 1 + (uniform(&mut rng) * n as f64) as usize;
    let mut j = 1 + (uniform(&mut rng) * (n - 1) as f64) as usize;
    if j >= i {
        j += 1;
    }
    Permutation::transposition(n, i, j).expect("distinct points in range")
}

/// `Z_π` for one sampled graph and one random transposition per trial.
pub fn z_concentration_experiment(
    params: &ModelParams,
    trials: u64,
    seed: u64,
) -> ZConcentrationRow {
    let n = params.n();
    let zs = trials_par(trials, seed, |s| {
        let g = sample_sw(params, s);
        z_statistic(&g, &random_transposition(n, s)).expect("sizes match")
    });
    let mean_z = zs.iter().sum::<usize>() as f64 / trials as f64;
    let target = 0.8 * 4.0 * params.b();
    let zero_trials = zs.iter().filter(|&&z| z == 0).count() as u64;
    ZConcentrationRow {
        n,
        a: params.a(),
        b: params.b(),
        c: params.c(),
        trials,
        seed,
        mean_z,
        min_z: zs.iter().copied().min().unwrap_or(0),
        zero_trials,
        target,
        pass: trials > 0 && mean_z >= target && zero_trials == 0,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct S2RegimeRow {
    pub a: f64,
    pub n: usize,
    pub b: f64,
    pub c: f64,
    pub regime: Regime,
    pub s1_exact: f64,
    pub s2_exact: f64,
    pub s2_asymptotic: f64,
    pub ratio: f64,
    /// Same ratio with `ζ(2a) − 1` in place of `ζ(2a)` when `a > 1/2`.
    pub ratio_unit_term_removed: f64,
    pub in_band: bool,
    pub toward_one: bool,
    pub pass: bool,
}

/// `s2_exact / s2_asymptotic` for each `a` over the `n` grid. A row passes if
/// the ratio moved closer to 1 than at the previous `n`, and the last row of
/// each `a` must also lie in `[0.9, 1.1]`.
pub fn s2_regimes(as_: &[f64], ns: &[usize], b: BSpec) -> Result<Vec<S2RegimeRow>> {
    let mut rows = Vec::new();
    for &a in as_ {
        let mut prev: Option<f64> = None;
        for (i, &n) in ns.iter().enumerate() {
            let params = ModelParams::new(n, a, b.resolve(n))?;
            let (s1_exact, s2_exact) = s_sums_exact(&params);
            let (_, s2_asymptotic, regime) = s_sums_asymptotic(&params);
            let ratio = s2_exact / s2_asymptotic;
            let ratio_unit_term_removed = match regime {
                Regime::AboveHalf => s2_exact / s2_above_half_without_unit_term(&params),
                _ => ratio,
            };
            let in_band = (0.9..=1.1).contains(&ratio);
            let toward_one = prev.is_none_or(|p| (ratio - 1.0).abs() < (p - 1.0).abs());
            let last = i + 1 == ns.len();
            rows.push(S2RegimeRow {
                a,
                n,
                b: params.b(),
                c: params.c(),
                regime,
                s1_exact,
                s2_exact,
                s2_asymptotic,
                ratio,
                ratio_unit_term_removed,
                in_band,
                toward_one,
                pass: toward_one && (!last || in_band),
            });
            prev = Some(ratio);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetrySummary {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub trials: u64,
    pub seed: u64,
    pub node_budget: u64,
    pub completed: u64,
    pub resource_limited: u64,
    pub asymmetric_count: u64,
    /// Over completed trials; absent when none completed.
    pub asymmetric_fraction: Option<f64>,
    /// `|Aut(G)|` (decimal) → number of trials.
    pub aut_size_histogram: BTreeMap<String, u64>,
}

/// `|Aut(G)|` for each sampled graph. Trials that exhaust the search budget
/// are counted and excluded; other errors abort.
pub fn symmetry_survey(
    params: &ModelParams,
    trials: u64,
    seed: u64,
    node_budget: u64,
) -> Result<SymmetrySummary> {
    let results = trials_par(trials, seed, |s| {
        canonical_form_with_budget(&sample_sw(params, s), node_budget).map(|cf| cf.aut_size)
    });
    let mut histogram = BTreeMap::new();
    let (mut completed, mut resource_limited, mut asymmetric_count) = (0, 0, 0);
    for r in results {
        match r {
            Ok(size) => {
                completed += 1;
                if size == 1u32.into() {
                    asymmetric_count += 1;
                }
                *histogram.entry(size.to_string()).or_insert(0) += 1;
            }
            Err(Error::ResourceLimit { .. }) => resource_limited += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(SymmetrySummary {
        n: params.n(),
        a: params.a(),
        b: params.b(),
        c: params.c(),
        trials,
        seed,
        node_budget,
        completed,
        resource_limited,
        asymmetric_count,
        asymmetric_fraction: (completed > 0).then(|| asymmetric_count as f64 / completed as f64),
        aut_size_histogram: histogram,
    })
}
