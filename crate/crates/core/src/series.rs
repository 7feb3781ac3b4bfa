//! Scalar sums and entropy primitives.
//!
//! Every finite sum here is accumulated with [`CompensatedSum`], and every
//! asymptotic expansion is returned as a [`SumExpansion`] carrying its own
//! error bound. The limiting constants (ζ(s), ζ′(s) and the first Stieltjes
//! constant γ′) are estimated numerically from their defining limits with
//! Euler–Maclaurin tail corrections.

use serde::Serialize;

use crate::error::{Error, Result};

/// Euler's constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Successive limit estimates must agree to this tolerance.
pub const LIMIT_TOLERANCE: f64 = 1e-10;

/// Hard cap on the number of terms used while iterating a limit.
pub const LIMIT_MAX_TERMS: u64 = 100_000_000;

/// Exponents closer than this to 1 are rejected by the `s ≠ 1` branches.
pub const POLE_EXCLUSION: f64 = 1e-6;

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// An exact finite sum paired with its asymptotic expansion.
///
/// `residual` is `exact_value − asymptotic_value`. When the underlying series
/// converges the residual is computed from the tail of the series rather than
/// by subtracting two nearly equal numbers, so it stays meaningful even when
/// `error_bound` is far below the resolution of `exact_value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SumExpansion {
    pub exact_value: f64,
    pub asymptotic_value: f64,
    pub error_bound: f64,
    pub residual: f64,
}

impl SumExpansion {
    fn from_parts(exact_value: f64, asymptotic_value: f64, error_bound: f64) -> Self {
        Self {
            exact_value,
            asymptotic_value,
            error_bound,
            residual: exact_value - asymptotic_value,
        }
    }

    /// `|residual| ≤ error_bound`.
    pub fn within_bound(&self) -> bool {
        self.residual.abs() <= self.error_bound
    }
}

/// `h(p) = −p log p − (1−p) log(1−p)` in nats, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p), "probability out of range: {p}");
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.ln() - (1.0 - p) * (-p).ln_1p()
}

/// Small-`p` expansion `h(p) ≈ p log(1/p) + p − p²/2` with bound `p³/2`.
///
/// The residual is evaluated from the exact series
/// `h(p) − p log(1/p) − p + p²/2 = −Σ_{k≥3} p^k / (k(k−1))` for `p ≤ 1/2`,
/// which avoids cancellation for tiny `p`.
pub fn binary_entropy_expansion(p: f64) -> Result<SumExpansion> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("expansion needs 0 < p < 1, got {p}")));
    }
    let exact = binary_entropy(p);
    let asymptotic = p * (1.0 / p).ln() + p - 0.5 * p * p;
    let residual = if p <= 0.5 {
        let mut acc = CompensatedSum::new();
        let mut pk = p * p * p;
        let mut k = 3.0_f64;
        loop {
            let term = pk / (k * (k - 1.0));
            acc.add(-term);
            if term < 1e-19 * acc.value().abs() {
                break;
            }
            pk *= p;
            k += 1.0;
        }
        acc.value()
    } else {
        exact - asymptotic
    };
    Ok(SumExpansion {
        exact_value: exact,
        asymptotic_value: asymptotic,
        error_bound: 0.5 * p * p * p,
        residual,
    })
}

/// `f(x) = x^{−t} (α + β log x)`: the shape of every summand used here.
#[derive(Debug, Clone, Copy)]
struct Summand {
    t: f64,
    alpha: f64,
    beta: f64,
}

const BERNOULLI_OVER_FACTORIAL: [f64; 6] = [
    1.0 / 12.0,                   // B2 / 2!
    -1.0 / 720.0,                 // B4 / 4!
    1.0 / 30_240.0,               // B6 / 6!
    -1.0 / 1_209_600.0,           // B8 / 8!
    1.0 / 47_900_160.0,           // B10 / 10!
    -691.0 / 1_307_674_368_000.0, // B12 / 12!
];

impl Summand {
    fn power(s: f64) -> Self {
        Self {
            t: s,
            alpha: 1.0,
            beta: 0.0,
        }
    }

    fn log_power(s: f64) -> Self {
        Self {
            t: s,
            alpha: 0.0,
            beta: 1.0,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let lx = x.ln();
        (self.alpha + self.beta * lx) * (-self.t * lx).exp()
    }

    fn derivative(&self) -> Self {
        Self {
            t: self.t + 1.0,
            alpha: self.beta - self.t * self.alpha,
            beta: -self.t * self.beta,
        }
    }

    /// An antiderivative, normalised so that it vanishes at infinity when `t > 1`.
    fn antiderivative(&self, x: f64) -> f64 {
        let lx = x.ln();
        if self.t == 1.0 {
            self.alpha * lx + 0.5 * self.beta * lx * lx
        } else {
            let u = 1.0 - self.t;
            let scale = (u * lx).exp();
            scale * (self.alpha / u + self.beta * (lx / u - 1.0 / (u * u)))
        }
    }

    /// Σ_j B_{2j}/(2j)! · f^{(2j−1)}(x).
    fn bernoulli_correction(&self, x: f64) -> f64 {
        let mut d = self.derivative();
        let mut acc = 0.0;
        for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
            if j > 0 {
                d = d.derivative().derivative();
            }
            acc += coeff * d.eval(x);
        }
        acc
    }

    fn partial_sum(&self, from: u64, to: u64) -> f64 {
        compensated_sum((from..=to).map(|k| self.eval(k as f64)))
    }

    /// `lim_N [Σ_{k≤N} f(k) − F(N)]`, iterated by doubling `N` until two
    /// consecutive estimates differ by less than [`LIMIT_TOLERANCE`].
    fn limit_constant(&self) -> f64 {
        let estimate = |partial: f64, n: u64| {
            let x = n as f64;
            partial - self.antiderivative(x) - 0.5 * self.eval(x) - self.bernoulli_correction(x)
        };
        let mut n = 16u64;
        let mut partial = self.partial_sum(1, n);
        let mut prev = estimate(partial, n);
        while 2 * n <= LIMIT_MAX_TERMS {
            partial += self.partial_sum(n + 1, 2 * n);
            n *= 2;
            let next = estimate(partial, n);
            if (next - prev).abs() < LIMIT_TOLERANCE {
                return next;
            }
            prev = next;
        }
        prev
    }

    /// `Σ_{k>n} f(k)` for `t > 1`: direct summation up to a far cut-off plus an
    /// Euler–Maclaurin remainder there.
    fn tail(&self, n: u64) -> f64 {
        let cutoff = n + n.max(64);
        let x = cutoff as f64;
        let remainder = -self.antiderivative(x) + 0.5 * self.eval(x) - self.bernoulli_correction(x);
        let mut acc: CompensatedSum = (n + 1..cutoff).map(|k| self.eval(k as f64)).collect();
        acc.add(remainder);
        acc.value()
    }

    /// Residual of `Σ_{k≤n} f(k) ≈ F(n) + C + f(n)/2` for a convergent series.
    fn convergent_residual(&self, n: u64) -> f64 {
        let x = n as f64;
        -(self.tail(n) + self.antiderivative(x) + 0.5 * self.eval(x))
    }
}

/// Riemann ζ(s) for `s > 0`, `s ≠ 1`.
///
/// For `s ∈ (0,1)` this is `lim_M [Σ_{k≤M} k^{−s} − M^{1−s}/(1−s)]`.
pub fn zeta(s: f64) -> Result<f64> {
    check_exponent(s)?;
    Ok(Summand::power(s).limit_constant())
}

/// Derivative ζ′(s) for `s > 0`, `s ≠ 1`, from
/// `−ζ′(s) = lim_N [Σ_{k≤N} log k / k^s − N^{1−s} (log N/(1−s) − 1/(1−s)²)]`.
pub fn zeta_derivative(s: f64) -> Result<f64> {
    if !(s >= 0.0) || (s - 1.0).abs() < POLE_EXCLUSION {
        return Err(Error::Domain(format!("ζ′ needs s ≥ 0, s ≠ 1, got {s}")));
    }
    Ok(-Summand::log_power(s).limit_constant())
}

/// γ′ = lim_n [Σ_{k≤n} log k / k − (log n)²/2].
pub fn gamma_prime() -> f64 {
    Summand::log_power(1.0).limit_constant()
}

fn check_exponent(s: f64) -> Result<()> {
    if !(s > 0.0) {
        return Err(Error::Domain(format!("exponent must be positive, got {s}")));
    }
    if (s - 1.0).abs() < POLE_EXCLUSION {
        return Err(Error::Domain(format!(
            "exponent {s} is within {POLE_EXCLUSION} of the pole at 1"
        )));
    }
    Ok(())
}

fn check_count(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("sum length must be at least 1".into()));
    }
    Ok(())
}

/// `Σ_{k=1}^n 1/k ≈ log n + γ + 1/(2n)`, bound `1/(6n²)` (valid for `n ≥ 2`).
pub fn harmonic_sum(n: u64) -> Result<SumExpansion> {
    check_count(n)?;
    let exact = Summand::power(1.0).partial_sum(1, n);
    let x = n as f64;
    Ok(SumExpansion::from_parts(
        exact,
        x.ln() + EULER_GAMMA + 0.5 / x,
        1.0 / (6.0 * x * x),
    ))
}

/// `Σ_{k=1}^n k^{−s} ≈ n^{1−s}/(1−s) + ζ(s) + 1/(2n^s)`, bound `s/(6n^{s+1})`.
pub fn power_sum(s: f64, n: u64) -> Result<SumExpansion> {
    check_exponent(s)?;
    check_count(n)?;
    let f = Summand::power(s);
    let x = n as f64;
    let exact = f.partial_sum(1, n);
    let asymptotic = x.powf(1.0 - s) / (1.0 - s) + zeta(s)? + 0.5 * x.powf(-s);
    let bound = s / (6.0 * x.powf(s + 1.0));
    let mut out = SumExpansion::from_parts(exact, asymptotic, bound);
    if s > 1.0 {
        out.residual = f.convergent_residual(n);
    }
    Ok(out)
}

/// `Σ_{k=1}^n log k / k^s` with the two-branch expansion:
///
/// * `s = 1`: `(log n)²/2 + γ′ + log n/(2n)`, bound `(1 + log n)/(6n²)`;
/// * `s ≠ 1`: `log n/((1−s)n^{s−1}) − 1/((1−s)² n^{s−1}) − ζ′(s) + log n/(2n^s)`,
///   bound `(1 + s log n)/(6n^{s+1})`.
pub fn log_power_sum(s: f64, n: u64) -> Result<SumExpansion> {
    if !(s >= 0.0) {
        return Err(Error::Domain(format!(
            "exponent must be non-negative, got {s}"
        )));
    }
    check_count(n)?;
    let x = n as f64;
    let lx = x.ln();
    if s == 1.0 {
        let f = Summand::log_power(1.0);
        let exact = f.partial_sum(1, n);
        return Ok(SumExpansion::from_parts(
            exact,
            0.5 * lx * lx + gamma_prime() + 0.5 * lx / x,
            (1.0 + lx) / (6.0 * x * x),
        ));
    }
    if (s - 1.0).abs() < POLE_EXCLUSION {
        return Err(Error::Domain(format!(
            "exponent {s} is within {POLE_EXCLUSION} of the pole at 1"
        )));
    }
    let f = Summand::log_power(s);
    let exact = f.partial_sum(1, n);
    let u = 1.0 - s;
    let asymptotic =
        lx * x.powf(u) / u - x.powf(u) / (u * u) - zeta_derivative(s)? + 0.5 * lx * x.powf(-s);
    let bound = (1.0 + s * lx) / (6.0 * x.powf(s + 1.0));
    let mut out = SumExpansion::from_parts(exact, asymptotic, bound);
    if s > 1.0 {
        out.residual = f.convergent_residual(n);
    }
    Ok(out)
}

/// `Σ_{k>n} log k / k^s` for `s > 1`.
pub fn log_power_tail(s: f64, n: u64) -> Result<f64> {
    if !(s > 1.0 + POLE_EXCLUSION) {
        return Err(Error::Domain(format!("tail needs s > 1, got {s}")));
    }
    check_count(n)?;
    Ok(Summand::log_power(s).tail(n))
}

/// `log n! = Σ_{k=2}^n log k`, summed exactly (no Stirling).
pub fn log_factorial(n: u64) -> f64 {
    compensated_sum((2..=n).map(|k| (k as f64).ln()))
}
