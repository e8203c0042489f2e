//! Named verification sweeps.
//!
//! Every suite walks a range (or a seeded random sample), checks one family of
//! claims and returns a [`SuiteOutcome`] with the number of checks, the number
//! of violations and the first few violation messages.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, primes_up_to, Factorization};
use crate::entropy::{
    entropy_h, entropy_h_appended, entropy_hbar, exponent_entropy, hbar_limit, hbar_prime_power, shannon_entropy,
    Distribution,
};
use crate::error::{domain, Error, Result};
use crate::laws::{
    check_corollary_ideal, check_corollary_int, check_family_exponents_ge3, check_family_pkq,
    check_family_two_prime_powers, classify_prop41, product_entropy_gap, rel_close, scan_product_inequality,
    Prop41Case, Relation, ScanSummary,
};
use crate::numfield::{
    ideal_entropy, ideal_exponential_divisors, ideal_tau_e, split_prime, FieldSpec, SplittingPattern,
};
use crate::Limits;

/// How many violation messages a suite keeps verbatim.
const KEEP_EXAMPLES: usize = 10;

/// Number of random draws in the sampled suites.
pub const RANDOM_SAMPLES: usize = 10_000;

/// Number of random conforming pairs for the exponents-at-least-3 family.
pub const GE3_SAMPLES: usize = 1_000;

pub const SUITE_NAMES: &[&str] = &[
    "bounds",
    "power-invariance",
    "additivity",
    "closed-form",
    "limits",
    "shannon",
    "families",
    "gap-identity",
    "appended-power",
    "corollary-int",
    "corollary-ideal",
    "splitting",
    "edivisors",
    "products",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: String,
    pub checked: u64,
    pub violations: u64,
    /// The first few violation messages, in a deterministic order.
    pub examples: Vec<String>,
    /// Suite-specific counters.
    pub tallies: BTreeMap<String, u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanSummary>,
}

impl SuiteOutcome {
    fn new(suite: &str) -> Self {
        SuiteOutcome {
            suite: suite.to_string(),
            checked: 0,
            violations: 0,
            examples: Vec::new(),
            tallies: BTreeMap::new(),
            scan: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }

    fn check(&mut self, passed: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !passed {
            self.fail(msg());
        }
    }

    fn fail(&mut self, msg: String) {
        self.violations += 1;
        if self.examples.len() < KEEP_EXAMPLES {
            self.examples.push(msg);
        }
    }

    fn tally(&mut self, key: &str, by: u64) {
        *self.tallies.entry(key.to_string()).or_default() += by;
    }

    /// Folds per-item results computed in parallel, preserving input order.
    fn absorb(&mut self, results: Vec<Option<String>>) {
        for r in results {
            self.check(r.is_none(), || r.unwrap_or_default());
        }
    }
}

/// Range and seed parameters for [`run`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SuiteParams {
    /// Upper end of the swept range; `None` picks the suite default.
    pub max: Option<u64>,
    pub seed: u64,
    pub limits: Limits,
}

/// Runs the suite called `name`.
pub fn run(name: &str, params: &SuiteParams) -> Result<SuiteOutcome> {
    let max = |default: u64| params.max.unwrap_or(default);
    match name {
        "bounds" => Ok(bounds(max(1_000_000))),
        "power-invariance" => Ok(power_invariance(max(10_000))),
        "additivity" => additivity(params.seed, max(1_000), &params.limits),
        "closed-form" => closed_form(max(50), &params.limits),
        "limits" => limits(max(1_000_000)),
        "shannon" => shannon(max(100)),
        "families" => Ok(families(params.seed)),
        "gap-identity" => Ok(gap_identity(params.seed, max(1_000_000))),
        "appended-power" => Ok(appended_power(params.seed, RANDOM_SAMPLES)),
        "corollary-int" => corollary_int(max(100_000), &params.limits),
        "corollary-ideal" => corollary_ideal(max(8), &params.limits),
        "splitting" => splitting(max(10_000), &params.limits),
        "edivisors" => edivisors(max(100_000), &params.limits),
        "products" => products(max(200)),
        _ => Err(domain(format!("unknown suite {name:?}; expected one of {}", SUITE_NAMES.join(", ")))),
    }
}

/// `0 <= H(n) <= log ω(n)` for `2 <= n <= max`.
pub fn bounds(max: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("bounds");
    let results: Vec<Option<String>> = (2..=max)
        .into_par_iter()
        .map(|n| {
            let f = factorize(n).expect("n >= 2");
            let h = entropy_h(&f);
            let upper = (f.small_omega() as f64).ln();
            (h < 0.0 || h > upper + 1e-12).then(|| format!("H({n}) = {h} outside [0, {upper}]"))
        })
        .collect();
    out.absorb(results);
    out
}

/// `H(n^k) = H(n)` for `2 <= n <= max`, `1 <= k <= 5`, on the exponents of `n^k`
/// and, when `n^k` fits in 64 bits, on `factorize(n^k)`.
pub fn power_invariance(max: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("power-invariance");
    for n in 2..=max {
        let f = factorize(n).expect("n >= 2");
        let h = entropy_h(&f);
        for k in 1..=5u32 {
            let scaled = exponent_entropy(f.exponents().map(|a| u64::from(a * k)));
            out.check((scaled - h).abs() <= 1e-12, || format!("H({n}^{k}) = {scaled} != H({n}) = {h}"));
            if let Some(nk) = n.checked_pow(k) {
                let direct = entropy_h(&factorize(nk).expect("n^k >= 2"));
                out.check((direct - h).abs() <= 1e-12, || format!("H({nk}) = {direct} != H({n}) = {h}"));
            }
        }
    }
    out
}

/// Random coprime pairs in `[lo, hi]²`.
pub fn coprime_pairs(seed: u64, count: usize, lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        let (m, n) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
        if gcd(m, n) == 1 {
            pairs.push((m, n));
        }
    }
    pairs
}

/// `H̄(mn) = H̄(m) + H̄(n)` on random coprime pairs `m, n <= max`.
pub fn additivity(seed: u64, max: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("additivity");
    for (m, n) in coprime_pairs(seed, RANDOM_SAMPLES, 2, max) {
        let hb = |x: u64| entropy_hbar(&factorize(x)?, limits);
        let (hm, hn, hmn) = (hb(m)?, hb(n)?, hb(m * n)?);
        let err = (hmn - hm - hn).abs();
        out.check(err <= 1e-9, || format!("Hbar({m}*{n}) off by {err:e}"));
    }
    Ok(out)
}

/// Closed form of `H̄(p^α)` against the divisor-sum evaluation, for primes
/// `p <= max_p`, `α <= 12`, wherever `p^α` fits in 64 bits.
pub fn closed_form(max_p: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("closed-form");
    for p in primes_up_to(max_p) {
        for alpha in 1..=12u32 {
            let Some(n) = p.checked_pow(alpha) else {
                out.tally("skipped_overflow", 1);
                continue;
            };
            let closed = hbar_prime_power(p, alpha)?;
            let brute = entropy_hbar(&factorize(n)?, limits)?;
            out.check((closed - brute).abs() <= 1e-9, || {
                format!("Hbar({p}^{alpha}): closed {closed} vs divisor sum {brute}")
            });
        }
    }
    Ok(out)
}

/// `lim H̄(p^α)` strictly decreasing over primes up to `max_p`, small at
/// `p = 999983`, and `H(6 * 5^α)` small at `α = 10^6`.
pub fn limits(max_p: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("limits");
    let primes = primes_up_to(max_p);
    let values: Vec<f64> = primes.iter().map(|&p| hbar_limit(p)).collect::<Result<_>>()?;
    for (w, ps) in values.windows(2).zip(primes.windows(2)) {
        out.check(w[1] < w[0], || format!("limit at {} = {} not below limit at {} = {}", ps[1], w[1], ps[0], w[0]));
    }
    let far = hbar_limit(999_983)?;
    out.check(far < 2e-5, || format!("limit at 999983 = {far:e}"));
    let tail = entropy_h_appended(&factorize(6)?, 5, 1_000_000)?;
    out.check(tail < 5e-5, || format!("H(6 * 5^1000000) = {tail:e}"));
    Ok(out)
}

/// `H_S(1/p, 1 - 1/p) = (1 - 1/p) lim H̄(p^α)` for primes `p <= max_p`.
pub fn shannon(max_p: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("shannon");
    for p in primes_up_to(max_p) {
        let inv = 1.0 / p as f64;
        let hs = shannon_entropy(&Distribution::new(vec![inv, 1.0 - inv])?);
        let rhs = (1.0 - inv) * hbar_limit(p)?;
        out.check((hs - rhs).abs() <= 1e-12, || format!("p = {p}: H_S = {hs}, rhs = {rhs}"));
    }
    Ok(out)
}

/// Random coprime pairs whose prime exponents are all in `3..=7`, drawn from
/// the first eight primes.
pub fn ge3_pairs(seed: u64, count: usize) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut primes = primes_up_to(19);
    let mut pairs = Vec::with_capacity(count);
    while pairs.len() < count {
        primes.shuffle(&mut rng);
        let (r, s) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
        let mut build =
            |ps: &[u64]| ps.iter().try_fold(1u64, |acc, &p| acc.checked_mul(p.checked_pow(rng.gen_range(3..=7))?));
        if let (Some(m), Some(n)) = (build(&primes[..r]), build(&primes[r..r + s])) {
            pairs.push((m, n));
        }
    }
    pairs
}

/// The three parametric product families.
pub fn families(seed: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("families");
    let ten = primes_up_to(29);
    for &p in &ten {
        for &q in &ten {
            for &t in &ten {
                if p == q || q == t || p == t {
                    continue;
                }
                for k in 1..=10 {
                    record_family(&mut out, "pkq", check_family_pkq(p, q, t, k));
                }
            }
        }
    }
    let eight = primes_up_to(19);
    for quad in four_subsets(&eight) {
        // every assignment of the four primes to the roles (p1, p2, q1, q2)
        for [a, b, c, d] in role_orders(quad) {
            for k in 1..=8 {
                record_family(&mut out, "two_prime_powers", check_family_two_prime_powers(a, b, c, d, k));
            }
        }
    }
    for (m, n) in ge3_pairs(seed, GE3_SAMPLES) {
        record_family(&mut out, "exponents_ge3", check_family_exponents_ge3(m, n));
    }
    out
}

fn record_family(out: &mut SuiteOutcome, family: &str, result: Result<crate::laws::GapReport>) {
    match result {
        Ok(r) => {
            out.check(true, String::new);
            let key = match r.relation {
                Relation::Less => "less",
                Relation::Equal => "equal",
                Relation::Greater => "greater",
            };
            out.tally(&format!("{family}_{key}"), 1);
        }
        Err(Error::Range(_)) => out.tally(&format!("{family}_skipped_overflow"), 1),
        Err(e) => {
            out.checked += 1;
            out.fail(format!("{family}: {e}"));
        }
    }
}

fn four_subsets(xs: &[u64]) -> Vec<[u64; 4]> {
    let mut out = Vec::new();
    for a in 0..xs.len() {
        for b in a + 1..xs.len() {
            for c in b + 1..xs.len() {
                for d in c + 1..xs.len() {
                    out.push([xs[a], xs[b], xs[c], xs[d]]);
                }
            }
        }
    }
    out
}

fn role_orders(q: [u64; 4]) -> Vec<[u64; 4]> {
    let mut out = Vec::with_capacity(24);
    for i in 0..4 {
        for j in (0..4).filter(|&j| j != i) {
            for k in (0..4).filter(|&k| k != i && k != j) {
                let l = 6 - i - j - k;
                out.push([q[i], q[j], q[k], q[l]]);
            }
        }
    }
    out
}

/// Direct product gap against the closed expression on random coprime pairs.
pub fn gap_identity(seed: u64, max: u64) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("gap-identity");
    for (m, n) in coprime_pairs(seed, RANDOM_SAMPLES, 2, max) {
        match product_entropy_gap(m, n) {
            Ok(r) => {
                let f = r.formula_gap.expect("coprime pair");
                out.check(rel_close(r.gap, f, 1e-12), || format!("({m}, {n}): {} vs {f}", r.gap));
            }
            Err(e) => {
                out.checked += 1;
                out.fail(e.to_string());
            }
        }
    }
    out
}

/// Random `(n, p, α, β)`: `n` uniform in `[2, 10^4]`, `p` uniform over the
/// primes below 100 that do not divide `n`, `α` uniform in `[1, 12]`, `β`
/// uniform in `[1, α]`.
pub fn appended_power_samples(seed: u64, count: usize) -> Vec<(u64, u64, u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = primes_up_to(100);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(2..=10_000u64);
            let coprime: Vec<u64> = primes.iter().copied().filter(|p| n % p != 0).collect();
            let p = *coprime.choose(&mut rng).expect("n <= 10^4 has at most 5 prime factors");
            let alpha = rng.gen_range(1..=12u64);
            let beta = rng.gen_range(1..=alpha);
            (n, p, alpha, beta)
        })
        .collect()
}

/// The appended-prime-power trichotomy on random inputs.
pub fn appended_power(seed: u64, count: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome::new("appended-power");
    for (n, p, alpha, beta) in appended_power_samples(seed, count) {
        match classify_prop41(n, p, alpha, beta) {
            Ok(r) => {
                out.check(true, String::new);
                for c in r.cases {
                    out.tally(case_key(c), 1);
                }
            }
            Err(e) => {
                out.checked += 1;
                out.tally("contradictions", 1);
                out.fail(e.to_string());
            }
        }
    }
    out
}

fn case_key(c: Prop41Case) -> &'static str {
    match c {
        Prop41Case::I => "case_i",
        Prop41Case::II => "case_ii",
        Prop41Case::III => "case_iii",
    }
}

/// Whether `n` has at least three prime factors, all with exponent 1 or 2.
pub fn corollary_shaped(f: &Factorization) -> bool {
    f.small_omega() >= 3 && f.exponents().all(|a| a <= 2)
}

/// `H(d_e) <= H(n)` for every e-divisor of every conforming `n <= max`.
pub fn corollary_int(max: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("corollary-int");
    for n in 2..=max {
        let f = factorize(n)?;
        if !corollary_shaped(&f) {
            continue;
        }
        out.tally("integers", 1);
        let report = check_corollary_int(n, limits.max_divisors)?;
        out.checked += report.checked;
        if !report.holds() {
            out.tally("integers_with_violations", 1);
        }
        for v in report.violations {
            out.fail(format!(
                "n = {n}: H({}) = {} > H({n}) = {}",
                v.value.unwrap_or_default(),
                v.entropy,
                report.entropy
            ));
        }
    }
    Ok(out)
}

/// Ideal corollary over every multiset of ramification indices in `{1, 2}`
/// with `3 <= g <= max_g`.
pub fn corollary_ideal(max_g: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("corollary-ideal");
    for g in 3..=max_g as usize {
        for twos in 0..=g {
            let sp = SplittingPattern::from_factors((0..g).map(|i| (if i < twos { 2 } else { 1 }, 1)))?;
            out.tally("patterns", 1);
            let report = check_corollary_ideal(&sp, limits.max_divisors)?;
            out.checked += report.checked;
            for v in report.violations {
                out.fail(format!(
                    "e = {:?}: e-divisor {:?} has H = {} > {}",
                    sp.ramification_indices().collect::<Vec<_>>(),
                    v.exponents,
                    v.entropy,
                    report.entropy
                ));
            }
        }
    }
    Ok(out)
}

/// The field matrix exercised by the splitting checks.
pub fn field_matrix() -> Vec<FieldSpec> {
    let mut fields = Vec::new();
    for d in [-1i64, 2, -2, 3, -3, 5, -5, 13] {
        fields.push(FieldSpec::quadratic(d).expect("squarefree"));
    }
    for l in [3u64, 5, 7, 11, 13] {
        fields.push(FieldSpec::cyclotomic(l).expect("odd prime"));
    }
    for m in [2u64, 3, 5, 7] {
        fields.push(FieldSpec::pure_cubic(m).expect("monogenic"));
    }
    fields
}

/// Structural checks on `pO_K` for every field in [`field_matrix`] and every prime `p <= max_p`.
pub fn splitting(max_p: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("splitting");
    let primes = primes_up_to(max_p);
    for field in field_matrix() {
        let degree = field.degree();
        for &p in &primes {
            let sp = split_prime(field, p)?;
            let h = ideal_entropy(&sp);
            let g = sp.g() as f64;
            out.check(sp.weighted_degree() == u64::from(degree), || {
                format!("{field}, p = {p}: sum e f = {}", sp.weighted_degree())
            });
            out.check(h >= 0.0 && h <= g.ln() + 1e-12 && g <= f64::from(degree), || {
                format!("{field}, p = {p}: H = {h}, g = {g}")
            });
            if field.is_galois() {
                let x = sp.factors()[0];
                out.check(sp.is_uniform() && u64::from(x.e * x.f) * sp.g() as u64 == u64::from(degree), || {
                    format!("{field}, p = {p}: non-uniform Galois pattern {:?}", sp.factors())
                });
                out.check((h - g.ln()).abs() <= 1e-12, || format!("{field}, p = {p}: H = {h} != log {g}"));
            }
            if sp.is_inert() || sp.is_totally_ramified() {
                out.check(h == 0.0, || format!("{field}, p = {p}: H = {h} for inert/ramified"));
            }
            let count = ideal_exponential_divisors(&sp, limits.max_divisors)?.len() as u64;
            out.check(count == ideal_tau_e(&sp), || format!("{field}, p = {p}: {count} e-divisors"));
            let kind = match sp.factors() {
                [x] if x.e > 1 => "ramified",
                [_] => "inert",
                xs if xs.iter().all(|x| x.e == 1 && x.f == 1) => "split",
                _ => "partial",
            };
            out.tally(kind, 1);
        }
    }
    Ok(out)
}

/// `|e-divisors(n)| = τ^(e)(n)`, each e-divisor divides `n` with the same
/// prime support, for `2 <= n <= max`.
pub fn edivisors(max: u64, limits: &Limits) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("edivisors");
    for n in 2..=max {
        let f = factorize(n)?;
        let divs = f.exponential_divisors(limits.max_divisors)?;
        out.check(divs.len() as u64 == f.tau_e(), || {
            format!("n = {n}: {} e-divisors vs tau_e {}", divs.len(), f.tau_e())
        });
        for d in &divs {
            out.check(n % d.value() == 0 && d.small_omega() == f.small_omega(), || {
                format!("n = {n}: bad e-divisor {}", d.value())
            });
        }
    }
    Ok(out)
}

/// Coprime product scan over `[2, max]²`.
pub fn products(max: u64) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("products");
    let scan = scan_product_inequality(max, max)?;
    out.checked = scan.pairs;
    for v in &scan.violations {
        out.fail(v.clone());
    }
    out.tally("less", scan.less);
    out.tally("equal", scan.equal);
    out.tally("greater", scan.greater);
    out.scan = Some(scan);
    Ok(out)
}
