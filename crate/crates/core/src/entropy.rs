//! Entropy functionals on natural numbers. All logarithms are natural, so
//! every value is in nats, and `0 log 0 = 0` throughout.
//!
//! `H(n)` is the Shannon entropy of the exponent weights `a_i / Ω(n)` of the
//! prime factorization of `n`, evaluated as `log Ω - (1/Ω) Σ a_i log a_i`.
//! `H̄(n)` is the Shannon entropy of the weights `d / σ(n)` over the divisors
//! `d` of `n`.

use serde::Serialize;

use crate::arith::{factorize, is_prime, Factorization};
use crate::error::{domain, Result};
use crate::Limits;

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `(Σ a, Σ a log a)` over a multiset of exponents.
pub(crate) fn exponent_sums(exponents: impl IntoIterator<Item = u64>) -> (u64, f64) {
    exponents.into_iter().fold((0, 0.0), |(total, s), a| (total + a, s + xlogx(a as f64)))
}

/// Entropy of the distribution `a_i / Σ a` for a multiset of positive
/// exponents; 0 for the empty multiset.
///
/// This is the common core of [`entropy_h`] and the ideal entropy.
pub fn exponent_entropy(exponents: impl IntoIterator<Item = u64>) -> f64 {
    let (total, s) = exponent_sums(exponents);
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    (total.ln() - s / total).max(0.0)
}

/// `H(n)`; `H(1) = 0`.
pub fn entropy_h(f: &Factorization) -> f64 {
    exponent_entropy(f.exponents().map(u64::from))
}

/// A finite probability distribution with strictly positive weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    weights: Vec<f64>,
}

impl Distribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(domain("a distribution needs at least one weight"));
        }
        if let Some(w) = weights.iter().find(|&&w| !(w > 0.0 && w <= 1.0)) {
            return Err(domain(format!("weight {w} is outside (0, 1]")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(domain(format!("weights sum to {total}, not 1")));
        }
        Ok(Distribution { weights })
    }

    /// Normalizes positive counts into a distribution.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        if counts.contains(&0) {
            return Err(domain("counts must be positive"));
        }
        let total: u64 = counts.iter().sum();
        Self::new(counts.iter().map(|&c| c as f64 / total as f64).collect())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// `H_S(p) = -Σ p_i log p_i`.
pub fn shannon_entropy(d: &Distribution) -> f64 {
    -d.weights.iter().map(|&w| xlogx(w)).sum::<f64>()
}

/// `H̄(n) = log σ(n) - (1/σ(n)) Σ_{d|n} d log d`, using the exact σ and divisor list.
pub fn entropy_hbar(f: &Factorization, limits: &Limits) -> Result<f64> {
    let divisors = f.divisors(limits.max_divisors)?;
    let sigma = f.divisor_sum_wide() as f64;
    let weighted: f64 = divisors.iter().map(|&d| xlogx(d as f64)).sum();
    Ok((sigma.ln() - weighted / sigma).max(0.0))
}

fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(domain(format!("{p} is not prime")))
    }
}

/// Closed form of `H̄(p^α)`.
///
/// Evaluated with `x = p^-(α+1)` so that large `α` degrades gracefully to
/// [`hbar_limit`] instead of overflowing.
pub fn hbar_prime_power(p: u64, alpha: u32) -> Result<f64> {
    require_prime(p)?;
    if alpha == 0 {
        return Err(domain("alpha must be at least 1"));
    }
    let ln_p = (p as f64).ln();
    let k = f64::from(alpha) + 1.0;
    let x = (-k * ln_p).exp();
    // (α+1) log p / (p^(α+1) - 1) = (α+1) log p * x / (1 - x)
    let head = k * ln_p * x / (1.0 - x);
    Ok(-head + (-x).ln_1p() - (p as f64 - 1.0).ln() + p as f64 * ln_p / (p as f64 - 1.0))
}

/// `lim_{α→∞} H̄(p^α) = p log p / (p-1) - log(p-1)`.
///
/// Rewritten as `log p / (p-1) - log(1 - 1/p)` to avoid cancellation for large `p`.
pub fn hbar_limit(p: u64) -> Result<f64> {
    require_prime(p)?;
    let pf = p as f64;
    Ok(pf.ln() / (pf - 1.0) - (-1.0 / pf).ln_1p())
}

/// `H(n p^α)` for a prime `p` not dividing `n`, from `H(n)` and `Ω(n)` alone.
pub fn entropy_h_appended(f: &Factorization, p: u64, alpha: u64) -> Result<f64> {
    require_prime(p)?;
    if f.is_one() {
        return Err(domain("n must be at least 2"));
    }
    if f.value() % p == 0 {
        return Err(domain(format!("{p} divides {}", f.value())));
    }
    if alpha == 0 {
        return Err(domain("alpha must be at least 1"));
    }
    let omega = f.big_omega() as f64;
    let a = alpha as f64;
    let total = omega + a;
    let h = omega * entropy_h(f) / total + total.ln() - (xlogx(omega) + xlogx(a)) / total;
    let h = h.max(0.0);
    debug_assert!({
        let direct = exponent_entropy(f.exponents().map(u64::from).chain([alpha]));
        (h - direct).abs() <= 1e-12 * direct.abs().max(1.0)
    });
    Ok(h)
}

/// `Ω(n) e^{-H(n)}`, the pivot of the appended-prime-power trichotomy.
///
/// Computed as `exp((1/Ω) Σ a_i log a_i)`, the exponent-weighted geometric mean
/// of the exponents, which equals `Ω e^{-H}` and is exactly 1 for squarefree `n`.
pub fn threshold(f: &Factorization) -> Result<f64> {
    if f.is_one() {
        return Err(domain("the threshold is defined for n >= 2"));
    }
    let (total, s) = exponent_sums(f.exponents().map(u64::from));
    Ok((s / total as f64).exp())
}

/// Every integer-level quantity for one `n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub n: u64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "Hbar")]
    pub hbar: f64,
    #[serde(rename = "bigOmega")]
    pub big_omega: u64,
    #[serde(rename = "smallOmega")]
    pub small_omega: usize,
    pub tau: u64,
    pub sigma: u64,
    #[serde(rename = "tauE")]
    pub tau_e: u64,
    pub threshold: f64,
}

impl EntropyReport {
    pub fn new(n: u64, limits: &Limits) -> Result<Self> {
        if n < 2 {
            return Err(domain("n must be at least 2"));
        }
        let f = factorize(n)?;
        Ok(EntropyReport {
            n,
            h: entropy_h(&f),
            hbar: entropy_hbar(&f, limits)?,
            big_omega: f.big_omega(),
            small_omega: f.small_omega(),
            tau: f.divisor_count(),
            sigma: f.divisor_sum()?,
            tau_e: f.tau_e(),
            threshold: threshold(&f)?,
        })
    }
}
