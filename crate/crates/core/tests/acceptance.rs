//! Acceptance suite: one line per criterion, `PASS` or `FAIL` with the
//! measured quantities. Exits non-zero if any criterion fails.
//!
//! Run a subset with `cargo test --test acceptance -- 3 11`.

use std::time::{Duration, Instant};

use swgraph::codec::{decode_labelled, decode_structural, encode_labelled, encode_structural};
use swgraph::entropy::{
    compressibility_ratio, sw_entropy_constant, sw_entropy_exact, sw_expected_edges,
};
use swgraph::experiment::{
    entropy_sweep, mean_degree_experiment, s2_regimes, symmetry_survey, tails_experiment,
    z_concentration_experiment, BSpec,
};
use swgraph::model::{log_likelihood_sw, sample_er, sample_sw, ModelParams};
use swgraph::series::{binary_entropy_expansion, harmonic_sum, log_power_sum, power_sum};
use swgraph::symmetry::{
    aut_size, aut_size_enumeration, aut_size_refinement, canonical_form, tau_count, total_defect,
    DEFAULT_NODE_BUDGET,
};
use swgraph::LabelledGraph;

const BASE_SEED: u64 = 20_240_601;
const LN2: f64 = std::f64::consts::LN_2;

struct Outcome {
    pass: bool,
    detail: String,
}

fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn log_sq(n: usize) -> f64 {
    (n as f64).ln().powi(2)
}

// 1. Mean degree
const C1_N: usize = 10_001;
const C1_A: f64 = 0.5;
const C1_B: f64 = 20.0;
const C1_TRIALS: u64 = 200;
const C1_SE_MULTIPLE: f64 = 3.0;
const C1_TARGET: f64 = 42.0;
const C1_REL_TOL: f64 = 0.05;

fn mean_degree() -> Outcome {
    let p = ModelParams::new(C1_N, C1_A, C1_B).unwrap();
    let r = mean_degree_experiment(&p, C1_TRIALS, BASE_SEED);
    let se_ok = (r.empirical_mean - r.exact).abs() <= C1_SE_MULTIPLE * r.standard_error;
    let rel = (r.exact - C1_TARGET).abs() / C1_TARGET;
    Outcome {
        pass: se_ok && rel <= C1_REL_TOL,
        detail: format!(
            "empirical {:.4} ± {:.4} (SE), exact {:.4}, |exact − 42|/42 = {:.4}",
            r.empirical_mean, r.standard_error, r.exact, rel
        ),
    }
}

// 2. S-sum regimes
const C2_AS: [f64; 3] = [0.3, 0.5, 0.7];
const C2_NS: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];
const C2_B: f64 = 20.0;
const C2_BAND: (f64, f64) = (0.9, 1.1);

fn s_sum_regimes() -> Outcome {
    let rows = s2_regimes(&C2_AS, &C2_NS, BSpec::Value(C2_B)).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for chunk in rows.chunks(C2_NS.len()) {
        let ratios: Vec<f64> = chunk.iter().map(|r| r.ratio).collect();
        let monotone = ratios
            .windows(2)
            .all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
        let last = *ratios.last().unwrap();
        let ok = monotone && (C2_BAND.0..=C2_BAND.1).contains(&last);
        pass &= ok;
        parts.push(format!(
            "a={}: ratios {} {}",
            chunk[0].a,
            ratios
                .iter()
                .map(|r| format!("{r:.3}"))
                .collect::<Vec<_>>()
                .join(" "),
            if ok { "ok" } else { "out of band" }
        ));
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

// 3. Euler–Maclaurin bounds
const C3_S: [f64; 4] = [0.3, 0.5, 2.0, 3.0];
const C3_GRID_POINTS: u32 = 25;
const C3_MAX_N: f64 = 1e6;
const C3_P_POINTS: usize = 50;

fn euler_maclaurin() -> Outcome {
    let mut ns: Vec<u64> = (0..C3_GRID_POINTS)
        .map(|i| {
            C3_MAX_N
                .powf(i as f64 / (C3_GRID_POINTS - 1) as f64)
                .round() as u64
        })
        .collect();
    ns.dedup();
    let mut checks = 0;
    let mut failures = Vec::new();
    for &n in &ns {
        let h = harmonic_sum(n).unwrap();
        checks += 1;
        if !h.within_bound() {
            failures.push(format!("H_{n}"));
        }
        for &s in &C3_S {
            for (name, e) in [
                ("power", power_sum(s, n).unwrap()),
                ("log", log_power_sum(s, n).unwrap()),
            ] {
                checks += 1;
                if !e.within_bound() {
                    failures.push(format!(
                        "{name}(s={s}, n={n}): |r|={:.3e} > {:.3e}",
                        e.residual.abs(),
                        e.error_bound
                    ));
                }
            }
        }
        let l = log_power_sum(1.0, n).unwrap();
        checks += 1;
        if !l.within_bound() {
            failures.push(format!("log(s=1, n={n})"));
        }
    }
    // log-spaced p from 1e-4 to 0.99
    for i in 0..C3_P_POINTS {
        let p = 1e-4 * (0.99f64 / 1e-4).powf(i as f64 / (C3_P_POINTS - 1) as f64);
        let e = binary_entropy_expansion(p).unwrap();
        let cube = p * p * p;
        checks += 1;
        if !(e.residual >= -cube / 2.0 && e.residual <= 0.0) {
            failures.push(format!("h residual at p={p:.4e}: {:.3e}", e.residual));
        }
        if p <= 0.25 && e.residual > -cube / 10.0 {
            failures.push(format!("h residual at p={p:.4e} above −p³/10"));
        }
    }
    Outcome {
        pass: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "{checks} expansions within their bounds over {} n values",
                ns.len()
            )
        } else {
            failures.join("; ")
        },
    }
}

// 4. Graph entropy
const C4_N: usize = 100_000;
const C4_A: f64 = 0.5;
const C4_REL_TOL: f64 = 0.05;
const C4_SWEEP: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];
const C4_FIT_AS: [f64; 3] = [0.3, 0.5, 0.7];
const C4_FIT_NS: [usize; 3] = [100_000, 1_000_000, 10_000_000];
const C4_FIT_TOL: f64 = 0.02;

fn graph_entropy() -> Outcome {
    let rows = entropy_sweep(C4_A, &C4_SWEEP, BSpec::LogSquared).unwrap();
    let at_n = rows.iter().find(|r| r.n == C4_N).unwrap();
    let gap_ok = at_n.relative_gap <= C4_REL_TOL;
    let shrinking = rows
        .windows(2)
        .all(|w| w[1].relative_gap < w[0].relative_gap);
    let mut fit_ok = true;
    let mut fits = Vec::new();
    for &a in &C4_FIT_AS {
        // intercept-only least squares of log n − log b − H/(n b) is its mean
        let sweep = entropy_sweep(a, &C4_FIT_NS, BSpec::LogSquared).unwrap();
        let fit = sweep.iter().map(|r| r.c_a_empirical).sum::<f64>() / sweep.len() as f64;
        let c_a = sw_entropy_constant(a);
        let rel = (fit - c_a).abs() / c_a.abs();
        fit_ok &= rel <= C4_FIT_TOL;
        fits.push(format!(
            "a={a}: fit {fit:.4} vs C_a {c_a:.4} ({:.1}%)",
            100.0 * rel
        ));
    }
    Outcome {
        pass: gap_ok && shrinking && fit_ok,
        detail: format!(
            "gap at n=1e5 {:.2}% (≤ 5%: {gap_ok}); gaps {} shrinking: {shrinking}; {}",
            100.0 * at_n.relative_gap,
            rows.iter()
                .map(|r| format!("{:.2}%", 100.0 * r.relative_gap))
                .collect::<Vec<_>>()
                .join(" "),
            fits.join("; ")
        ),
    }
}

// 5. Entropy–likelihood identity
const C5_N: usize = 101;
const C5_A: f64 = 0.5;
const C5_B: f64 = 5.0;
const C5_SAMPLES: u64 = 100_000;
const C5_SE_MULTIPLE: f64 = 3.0;

fn entropy_likelihood() -> Outcome {
    let p = ModelParams::new(C5_N, C5_A, C5_B).unwrap();
    let xs: Vec<f64> = (0..C5_SAMPLES)
        .map(|i| -log_likelihood_sw(&p, &sample_sw(&p, BASE_SEED ^ i)).unwrap())
        .collect();
    let t = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / t;
    let se = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0) / t).sqrt();
    let h = sw_entropy_exact(&p);
    Outcome {
        pass: (mean - h).abs() <= C5_SE_MULTIPLE * se,
        detail: format!(
            "mean −log P {mean:.4} ± {se:.4}, H {h:.4}, z = {:.2}",
            (mean - h) / se
        ),
    }
}

// 6. Asymmetry
const C6_N: usize = 300;
const C6_A: f64 = 0.5;
const C6_TRIALS: u64 = 200;
const C6_CYCLES: [usize; 5] = [5, 9, 10, 57, 300];

fn asymmetry() -> Outcome {
    let p = ModelParams::new(C6_N, C6_A, log_sq(C6_N)).unwrap();
    let s = symmetry_survey(&p, C6_TRIALS, BASE_SEED, DEFAULT_NODE_BUDGET).unwrap();
    let all_asym = s.asymmetric_fraction == Some(1.0) && s.completed == C6_TRIALS;
    let cycles_ok = C6_CYCLES
        .iter()
        .all(|&n| aut_size(&LabelledGraph::cycle(n)).unwrap() == (2 * n as u64).into());
    Outcome {
        pass: all_asym && cycles_ok,
        detail: format!(
            "b = {:.2}, asymmetric {}/{} (budget-limited {}); |Aut(C_n)| = 2n for n in {:?}: {cycles_ok}",
            p.b(),
            s.asymmetric_count,
            s.trials,
            s.resource_limited,
            C6_CYCLES
        ),
    }
}

// 7. Automorphism oracle agreement
const C7_NS: [usize; 4] = [5, 6, 7, 8];
const C7_GRAPHS: u64 = 100;

fn automorphism_oracles() -> Outcome {
    let mut disagreements = 0;
    let mut defect_violations = 0;
    let mut symmetric = 0;
    for &n in &C7_NS {
        for i in 0..C7_GRAPHS {
            let edge_p = [0.3, 0.5, 0.7][(i % 3) as usize];
            let g = sample_er(n, edge_p, BASE_SEED ^ (n as u64) << 32 ^ i).unwrap();
            let brute = aut_size_enumeration(&g).unwrap();
            if aut_size_refinement(&g).unwrap() != brute.into() {
                disagreements += 1;
            }
            if (total_defect(&g).unwrap() != 0) != (brute == 1) {
                defect_violations += 1;
            }
            symmetric += u32::from(brute > 1);
        }
    }
    Outcome {
        pass: disagreements == 0 && defect_violations == 0,
        detail: format!(
            "{} graphs ({symmetric} symmetric): {disagreements} aut disagreements, {defect_violations} defect violations",
            C7_NS.len() as u64 * C7_GRAPHS
        ),
    }
}

// 8. Z concentration
const C8_N: usize = 500;
const C8_A: f64 = 0.5;
const C8_TRIALS: u64 = 200;

fn z_concentration() -> Outcome {
    let p = ModelParams::new(C8_N, C8_A, log_sq(C8_N)).unwrap();
    let r = z_concentration_experiment(&p, C8_TRIALS, BASE_SEED);
    Outcome {
        pass: r.mean_z >= r.target && r.zero_trials == 0,
        detail: format!(
            "mean Z {:.2} ≥ 0.8·4b = {:.2}; min Z {}, zero trials {}",
            r.mean_z, r.target, r.min_z, r.zero_trials
        ),
    }
}

// 9. Degree tails
const C9_N: usize = 2000;
const C9_A: f64 = 0.5;
const C9_TRIALS: u64 = 200;
const C9_MAX_FRACTION: f64 = 0.01;

fn degree_tails() -> Outcome {
    let p = ModelParams::new(C9_N, C9_A, log_sq(C9_N)).unwrap();
    let r = tails_experiment(&p, C9_TRIALS, BASE_SEED);
    Outcome {
        pass: r.exceed_fraction <= C9_MAX_FRACTION,
        detail: format!(
            "threshold 9b/2 = {:.1}, largest max degree {}, exceedance {}/{}",
            r.threshold, r.largest_max_degree, r.exceed_count, r.trials
        ),
    }
}

// 10. τ bound
const C10_NS: [usize; 4] = [5, 6, 7, 8];
const C10_GRAPHS: u64 = 50;
const C10_EXTRA_EDGE_P: f64 = 0.3;

fn tau_bound() -> Outcome {
    let mut violations = 0;
    let mut max_tau = 0;
    let mut cycles_ok = true;
    for &n in &C10_NS {
        for i in 0..C10_GRAPHS {
            let extra = sample_er(n, C10_EXTRA_EDGE_P, BASE_SEED ^ (n as u64) << 40 ^ i).unwrap();
            let cycle = LabelledGraph::cycle(n);
            let mut edges: Vec<_> = cycle.edges().chain(extra.edges()).collect();
            edges.sort_unstable();
            edges.dedup();
            let g = LabelledGraph::from_edges(n, edges).unwrap();
            let tau = tau_count(&g).unwrap();
            max_tau = max_tau.max(tau);
            let d = g.max_degree() as f64;
            if tau as f64 > n as f64 * d.powi(n as i32 - 1) {
                violations += 1;
            }
        }
        cycles_ok &= tau_count(&LabelledGraph::cycle(n)).unwrap() == 1;
    }
    Outcome {
        pass: violations == 0 && cycles_ok,
        detail: format!(
            "{} graphs, {violations} above n·d^(n−1), largest τ {max_tau}; τ(C_n) = 1: {cycles_ok}",
            C10_NS.len() as u64 * C10_GRAPHS
        ),
    }
}

// 11. Codec efficiency
const C11_N: usize = 10_000;
const C11_A: f64 = 0.5;
const C11_B: f64 = 20.0;
const C11_TRIALS: u64 = 50;
const C11_LOWER: f64 = 0.99;
const C11_UPPER: f64 = 1.001;
const C11_SLACK_BITS: f64 = 128.0;

fn codec_efficiency() -> Outcome {
    let p = ModelParams::new(C11_N, C11_A, C11_B).unwrap();
    let h = sw_entropy_exact(&p);
    let mut bits = Vec::new();
    let mut lossy = 0;
    let mut structural_mismatch = 0;
    let mut structural_bits = 0.0;
    for i in 0..C11_TRIALS {
        let g = sample_sw(&p, BASE_SEED ^ i);
        let c = encode_labelled(&p, &g).unwrap();
        bits.push(c.payload_bits() as f64);
        if decode_labelled(&c).unwrap() != g {
            lossy += 1;
        }
        let s = encode_structural(&p, &g).unwrap();
        structural_bits += s.payload_bits() as f64;
        let back = decode_structural(&s).unwrap();
        if canonical_form(&back).unwrap().canonical_edge_list
            != canonical_form(&g).unwrap().canonical_edge_list
        {
            structural_mismatch += 1;
        }
    }
    let mean_nats = bits.iter().sum::<f64>() / bits.len() as f64 * LN2;
    let (lo, hi) = (C11_LOWER * h, C11_UPPER * h + C11_SLACK_BITS * LN2);
    Outcome {
        pass: lossy == 0 && structural_mismatch == 0 && mean_nats >= lo && mean_nats <= hi,
        detail: format!(
            "mean payload {mean_nats:.1} nats in [{lo:.1}, {hi:.1}] (H = {h:.1}); lossy {lossy}, structural mismatches {structural_mismatch}; structural mean {:.0} bits",
            structural_bits / C11_TRIALS as f64
        ),
    }
}

// 12. Incompressibility trend
const C12_A: f64 = 0.5;
const C12_NS: [usize; 4] = [1_000, 10_000, 100_000, 1_000_000];
const C12_BAND: (f64, f64) = (0.1, 2.0);

fn incompressibility() -> Outcome {
    let mut ratios = Vec::new();
    for &n in &C12_NS {
        let p = ModelParams::new(n, C12_A, log_sq(n)).unwrap();
        ratios.push((
            n,
            compressibility_ratio(sw_entropy_exact(&p), sw_expected_edges(&p)).unwrap(),
        ));
    }
    let increasing = ratios.windows(2).all(|w| w[1].1 > w[0].1);
    let banded = ratios
        .iter()
        .all(|&(n, r)| (C12_BAND.0..=C12_BAND.1).contains(&(r / (n as f64).ln())));
    Outcome {
        pass: increasing && banded,
        detail: ratios
            .iter()
            .map(|&(n, r)| format!("n={n}: {r:.3} ({:.3}·log n)", r / (n as f64).ln()))
            .collect::<Vec<_>>()
            .join(", "),
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 12] = [
        (1, "mean degree", minutes(2), mean_degree),
        (2, "S-sum regimes", minutes(1), s_sum_regimes),
        (3, "Euler–Maclaurin bounds", minutes(1), euler_maclaurin),
        (4, "graph entropy", minutes(1), graph_entropy),
        (
            5,
            "entropy–likelihood identity",
            minutes(2),
            entropy_likelihood,
        ),
        (6, "asymmetry", minutes(10), asymmetry),
        (7, "automorphism oracles", minutes(5), automorphism_oracles),
        (8, "Z concentration", minutes(2), z_concentration),
        (9, "degree tails", minutes(2), degree_tails),
        (10, "tau bound", minutes(5), tau_bound),
        (11, "codec efficiency", minutes(5), codec_efficiency),
        (12, "incompressibility trend", minutes(1), incompressibility),
    ];
    let selected: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let pass = outcome.pass && in_time;
        println!(
            "criterion {id:>2} {:<28} {}  [{:.1}s / {}s] {}",
            name,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            outcome.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
