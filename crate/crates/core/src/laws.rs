//! Checkers for how `H` behaves under products and appended prime powers.
//!
//! Each checker computes the entropies involved directly from factorizations
//! and compares them with the claimed relation. Claims that fail are reported
//! as [`Error::Verification`] or collected as violations, never suppressed.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{factorize, gcd, is_prime, Factorization};
use crate::entropy::{entropy_h, exponent_entropy, exponent_sums, threshold, xlogx};
use crate::error::{domain, range, Error, Result};
use crate::numfield::{ideal_entropy, ideal_exponential_divisors, SplittingPattern};

/// Absolute tolerance under which a gap counts as zero.
pub const EQUAL_TOL: f64 = 1e-12;

/// Relative tolerance for two evaluations of the same quantity.
pub const IDENTITY_TOL: f64 = 1e-12;

/// Largest range accepted by [`scan_product_inequality`] on each axis.
pub const MAX_SCAN: u64 = 10_000;

/// `|a - b| <= tol * max(|a|, |b|, 1)`.
pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Relation {
    Less,
    Equal,
    Greater,
}

impl Relation {
    pub fn of_gap(gap: f64) -> Self {
        if gap.abs() <= EQUAL_TOL {
            Relation::Equal
        } else if gap < 0.0 {
            Relation::Less
        } else {
            Relation::Greater
        }
    }
}

/// `H(mn) - H(m) - H(n)` and the quantities it came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GapReport {
    pub m: u64,
    pub n: u64,
    pub gap: f64,
    pub relation: Relation,
    #[serde(rename = "H_m")]
    pub h_m: f64,
    #[serde(rename = "H_n")]
    pub h_n: f64,
    #[serde(rename = "H_mn")]
    pub h_mn: f64,
    /// The gap from the closed expression in Ω and `Σ a log a`; coprime pairs only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub formula_gap: Option<f64>,
}

impl GapReport {
    fn direct(m: &Factorization, n: &Factorization, h_mn: f64) -> Self {
        let (h_m, h_n) = (entropy_h(m), entropy_h(n));
        let gap = h_mn - h_m - h_n;
        GapReport {
            m: m.value(),
            n: n.value(),
            gap,
            relation: Relation::of_gap(gap),
            h_m,
            h_n,
            h_mn,
            formula_gap: None,
        }
    }
}

/// The product gap for coprime `m`, `n` written in terms of `A = Ω(m)`,
/// `B = Ω(n)` and the sums `S_m = Σ a_i log a_i`, `S_n = Σ b_j log b_j`:
///
/// `B / (A (A+B)) S_m + A / (B (A+B)) S_n - log(AB / (A+B))`
pub fn gap_formula(m: &Factorization, n: &Factorization) -> f64 {
    let (om, sm) = exponent_sums(m.exponents().map(u64::from));
    let (on, sn) = exponent_sums(n.exponents().map(u64::from));
    let (om, on) = (om as f64, on as f64);
    let total = om + on;
    on / (om * total) * sm + om / (on * total) * sn - (om * on / total).ln()
}

/// `H(mn)` from the factorization of `mn`, obtained by adding exponents prime
/// by prime; `mn` itself may exceed 64 bits.
fn product_entropy(m: &Factorization, n: &Factorization) -> f64 {
    let mut exps: Vec<u64> = Vec::with_capacity(m.small_omega() + n.small_omega());
    let (a, b) = (m.entries(), n.entries());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(p, x)), Some(&(q, y))) if p == q => {
                exps.push(u64::from(x) + u64::from(y));
                i += 1;
                j += 1;
            }
            (Some(&(p, x)), Some(&(q, _))) if p < q => {
                exps.push(u64::from(x));
                i += 1;
            }
            (Some(&(_, x)), None) => {
                exps.push(u64::from(x));
                i += 1;
            }
            (_, Some(&(_, y))) => {
                exps.push(u64::from(y));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    exponent_entropy(exps)
}

/// Product gap for coprime `m, n >= 2`, evaluated both directly and through
/// [`gap_formula`]; the two must agree.
pub fn product_entropy_gap(m: u64, n: u64) -> Result<GapReport> {
    if m < 2 || n < 2 {
        return Err(domain("m and n must be at least 2"));
    }
    if gcd(m, n) != 1 {
        return Err(domain(format!("gcd({m}, {n}) != 1")));
    }
    let (fm, fn_) = (factorize(m)?, factorize(n)?);
    let mut report = GapReport::direct(&fm, &fn_, product_entropy(&fm, &fn_));
    let formula = gap_formula(&fm, &fn_);
    if !rel_close(report.gap, formula, IDENTITY_TOL) {
        return Err(Error::Verification(format!("gap({m}, {n}): direct {} vs formula {formula}", report.gap)));
    }
    report.formula_gap = Some(formula);
    Ok(report)
}

fn distinct_primes(ps: &[u64]) -> Result<()> {
    for (i, &p) in ps.iter().enumerate() {
        if !is_prime(p) {
            return Err(domain(format!("{p} is not prime")));
        }
        if ps[..i].contains(&p) {
            return Err(domain(format!("prime {p} repeated")));
        }
    }
    Ok(())
}

fn checked_pow(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k).ok_or_else(|| range(format!("{p}^{k} exceeds 64 bits")))
}

fn checked_mul(a: u64, b: u64) -> Result<u64> {
    a.checked_mul(b).ok_or_else(|| range(format!("{a} * {b} exceeds 64 bits")))
}

fn expect_relation(report: GapReport, expected: Relation, what: &str) -> Result<GapReport> {
    if report.relation == expected {
        Ok(report)
    } else {
        Err(Error::Verification(format!(
            "{what}: m = {}, n = {}, gap = {:e} is {:?}, expected {:?}",
            report.m, report.n, report.gap, report.relation, expected
        )))
    }
}

/// `m = p^k q`, `n = p^k t`: expects `H(mn) < H(m) + H(n)`.
///
/// Here `gcd(m, n) = p^k`, so `H(mn)` comes from the factorization of `mn`
/// (exponent `2k` at `p`) and the coprime gap formula is not used.
pub fn check_family_pkq(p: u64, q: u64, t: u64, k: u32) -> Result<GapReport> {
    distinct_primes(&[p, q, t])?;
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let pk = checked_pow(p, k)?;
    let (m, n) = (checked_mul(pk, q)?, checked_mul(pk, t)?);
    let (fm, fn_) = (factorize(m)?, factorize(n)?);
    let report = GapReport::direct(&fm, &fn_, product_entropy(&fm, &fn_));
    expect_relation(report, Relation::Less, "p^k q / p^k t family")
}

/// `m = p1^k p2`, `n = q1^k q2`: expects equality for `k = 1` and `H(mn) > H(m) + H(n)` for `k >= 2`.
pub fn check_family_two_prime_powers(p1: u64, p2: u64, q1: u64, q2: u64, k: u32) -> Result<GapReport> {
    distinct_primes(&[p1, p2, q1, q2])?;
    if k == 0 {
        return Err(domain("k must be at least 1"));
    }
    let m = checked_mul(checked_pow(p1, k)?, p2)?;
    let n = checked_mul(checked_pow(q1, k)?, q2)?;
    let report = product_entropy_gap(m, n)?;
    let expected = if k == 1 { Relation::Equal } else { Relation::Greater };
    expect_relation(report, expected, "p1^k p2 / q1^k q2 family")
}

/// Coprime `m`, `n` whose exponents are all at least 3: expects `H(mn) > H(m) + H(n)`.
pub fn check_family_exponents_ge3(m: u64, n: u64) -> Result<GapReport> {
    if m < 2 || n < 2 || gcd(m, n) != 1 {
        return Err(domain(format!("({m}, {n}) must be coprime and at least 2")));
    }
    for x in [m, n] {
        if factorize(x)?.exponents().any(|a| a < 3) {
            return Err(domain(format!("{x} has a prime exponent below 3")));
        }
    }
    let report = product_entropy_gap(m, n)?;
    expect_relation(report, Relation::Greater, "exponents >= 3 family")
}

/// The three regimes of `H(n p^α)` against `H(n p^β)`, `α >= β`, relative to
/// the threshold `T = Ω(n) e^{-H(n)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Prop41Case {
    /// `β >= T`: claims `H(np^α) <= H(np^β)`.
    #[serde(rename = "i")]
    I,
    /// `β <= α <= T`: claims `H(np^α) >= H(np^β)`.
    #[serde(rename = "ii")]
    II,
    /// `β <= T <= α`: claims `H(np^α) <= H(np^β)`.
    #[serde(rename = "iii")]
    III,
}

impl Prop41Case {
    /// Whether the ordering this case claims holds for the given entropies.
    pub fn holds(self, h_alpha: f64, h_beta: f64) -> bool {
        match self {
            Prop41Case::I | Prop41Case::III => h_alpha <= h_beta + EQUAL_TOL,
            Prop41Case::II => h_alpha + EQUAL_TOL >= h_beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Prop41Report {
    pub n: u64,
    pub p: u64,
    pub alpha: u64,
    pub beta: u64,
    pub threshold: f64,
    /// Every case whose hypothesis the inputs satisfy.
    pub cases: Vec<Prop41Case>,
    #[serde(rename = "H_alpha")]
    pub h_alpha: f64,
    #[serde(rename = "H_beta")]
    pub h_beta: f64,
}

// `x <= y` up to rounding in the threshold
fn le_tol(x: f64, y: f64) -> bool {
    x <= y + IDENTITY_TOL * y.abs().max(1.0)
}

/// Determines which cases apply to `(n, p, α, β)` and checks each claimed
/// ordering against `H(np^α)` and `H(np^β)` computed from the factorizations.
pub fn classify_prop41(n: u64, p: u64, alpha: u64, beta: u64) -> Result<Prop41Report> {
    if n < 2 {
        return Err(domain("n must be at least 2"));
    }
    if !is_prime(p) {
        return Err(domain(format!("{p} is not prime")));
    }
    if n % p == 0 {
        return Err(domain(format!("{p} divides {n}")));
    }
    if beta == 0 || alpha < beta {
        return Err(domain(format!("need alpha >= beta >= 1, got alpha = {alpha}, beta = {beta}")));
    }
    let f = factorize(n)?;
    let t = threshold(&f)?;
    let (a, b) = (alpha as f64, beta as f64);
    let mut cases = Vec::new();
    if le_tol(t, b) {
        cases.push(Prop41Case::I);
    }
    if le_tol(a, t) {
        cases.push(Prop41Case::II);
    }
    if le_tol(b, t) && le_tol(t, a) {
        cases.push(Prop41Case::III);
    }
    let with_power = |e: u64| exponent_entropy(f.exponents().map(u64::from).chain([e]));
    let report =
        Prop41Report { n, p, alpha, beta, threshold: t, cases, h_alpha: with_power(alpha), h_beta: with_power(beta) };
    if let Some(case) = report.cases.iter().find(|c| !c.holds(report.h_alpha, report.h_beta)) {
        return Err(Error::Verification(format!(
            "case {case:?} fails for n = {n}, p = {p}, alpha = {alpha}, beta = {beta}: \
             H(np^alpha) = {}, H(np^beta) = {}, threshold = {t}",
            report.h_alpha, report.h_beta
        )));
    }
    Ok(report)
}

/// One exponential divisor whose entropy exceeds that of the whole.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorollaryViolation {
    /// Exponents `β_i` of the divisor, aligned with the prime (ideal) factors.
    pub exponents: Vec<u32>,
    /// Integer value of the divisor, for the integer version.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    pub entropy: f64,
}

/// Result of comparing `H(d)` with `H(whole)` over every exponential divisor `d`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CorollaryReport {
    pub entropy: f64,
    pub checked: u64,
    pub violations: Vec<CorollaryViolation>,
}

impl CorollaryReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn corollary_shape(exponents: impl Iterator<Item = u32>, count: usize, what: &str) -> Result<()> {
    let mut all = exponents;
    if count < 3 || !all.all(|a| a == 1 || a == 2) {
        return Err(domain(format!("{what} needs at least 3 prime factors with exponents in {{1, 2}}")));
    }
    Ok(())
}

/// Compares `H(d_e)` with `H(n)` for every exponential divisor of `n`, where
/// `ω(n) >= 3` and every exponent of `n` is 1 or 2.
pub fn check_corollary_int(n: u64, cap: u64) -> Result<CorollaryReport> {
    let f = factorize(n)?;
    corollary_shape(f.exponents(), f.small_omega(), "the integer corollary")?;
    let whole = entropy_h(&f);
    let divisors = f.exponential_divisors(cap)?;
    let violations = divisors
        .iter()
        .filter_map(|d| {
            let h = entropy_h(d);
            (h > whole + EQUAL_TOL).then(|| CorollaryViolation {
                exponents: d.exponents().collect(),
                value: Some(d.value()),
                entropy: h,
            })
        })
        .collect();
    Ok(CorollaryReport { entropy: whole, checked: divisors.len() as u64, violations })
}

/// Ideal version of [`check_corollary_int`]: `g >= 3` and every `e_i` in `{1, 2}`.
pub fn check_corollary_ideal(sp: &SplittingPattern, cap: u64) -> Result<CorollaryReport> {
    corollary_shape(sp.ramification_indices(), sp.g(), "the ideal corollary")?;
    let whole = ideal_entropy(sp);
    let vectors = ideal_exponential_divisors(sp, cap)?;
    let mut violations = Vec::new();
    for betas in &vectors {
        let h = ideal_entropy(&sp.with_exponents(betas)?);
        if h > whole + EQUAL_TOL {
            violations.push(CorollaryViolation { exponents: betas.clone(), value: None, entropy: h });
        }
    }
    Ok(CorollaryReport { entropy: whole, checked: vectors.len() as u64, violations })
}

/// A pair attaining an extreme gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub m: u64,
    pub n: u64,
    pub gap: f64,
}

/// Tallies of the product relation over a rectangle of coprime pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ScanSummary {
    pub max_m: u64,
    pub max_n: u64,
    pub pairs: u64,
    pub less: u64,
    pub equal: u64,
    pub greater: u64,
    /// Largest positive gap.
    pub max_gap: Option<Witness>,
    /// Most negative gap.
    pub min_gap: Option<Witness>,
    /// Pairs matching the shape of one of the parametric families.
    pub family_pairs: u64,
    pub violations: Vec<String>,
}

impl ScanSummary {
    fn empty(max_m: u64, max_n: u64) -> Self {
        ScanSummary {
            max_m,
            max_n,
            pairs: 0,
            less: 0,
            equal: 0,
            greater: 0,
            max_gap: None,
            min_gap: None,
            family_pairs: 0,
            violations: Vec::new(),
        }
    }

    fn record(&mut self, w: Witness) {
        self.pairs += 1;
        match Relation::of_gap(w.gap) {
            Relation::Less => self.less += 1,
            Relation::Equal => self.equal += 1,
            Relation::Greater => self.greater += 1,
        }
        self.max_gap = pick(self.max_gap, Some(w), Ordering::Greater);
        self.min_gap = pick(self.min_gap, Some(w), Ordering::Less);
    }

    fn merge(mut self, other: ScanSummary) -> Self {
        self.pairs += other.pairs;
        self.less += other.less;
        self.equal += other.equal;
        self.greater += other.greater;
        self.family_pairs += other.family_pairs;
        self.max_gap = pick(self.max_gap, other.max_gap, Ordering::Greater);
        self.min_gap = pick(self.min_gap, other.min_gap, Ordering::Less);
        self.violations.extend(other.violations);
        self
    }
}

/// Keeps the witness further in direction `want`, breaking ties by smallest `(m, n)`.
fn pick(a: Option<Witness>, b: Option<Witness>, want: Ordering) -> Option<Witness> {
    match (a, b) {
        (Some(x), Some(y)) => {
            let ord = y.gap.partial_cmp(&x.gap).unwrap_or(Ordering::Equal);
            if ord == want || (ord == Ordering::Equal && (y.m, y.n) < (x.m, x.n)) {
                Some(y)
            } else {
                Some(x)
            }
        }
        (x, None) => x,
        (None, y) => y,
    }
}

struct Profile {
    omega: u64,
    xlogx_sum: f64,
    h: f64,
    /// exponents sorted descending
    shape: Vec<u32>,
}

fn family_expectation(a: &[u32], b: &[u32]) -> Option<(Relation, &'static str)> {
    if a.len() == 2 && a == b && a[1] == 1 {
        let rel = if a[0] == 1 { Relation::Equal } else { Relation::Greater };
        return Some((rel, "p1^k p2 / q1^k q2"));
    }
    if a.iter().chain(b).all(|&e| e >= 3) {
        return Some((Relation::Greater, "exponents >= 3"));
    }
    None
}

/// Scans all coprime pairs `2 <= m <= max_m`, `2 <= n <= max_n`, tallying the
/// sign of `H(mn) - H(m) - H(n)`.
///
/// Pairs shaped like the coprime parametric families (`p1^k p2` with `q1^k q2`,
/// or all exponents at least 3) are held to those families' relations; any
/// mismatch lands in `violations`. The `p^k q`, `p^k t` family never occurs
/// since its pairs are not coprime. The summary does not depend on the thread
/// schedule.
pub fn scan_product_inequality(max_m: u64, max_n: u64) -> Result<ScanSummary> {
    if max_m > MAX_SCAN || max_n > MAX_SCAN {
        return Err(range(format!("scan bounds are limited to {MAX_SCAN}")));
    }
    let top = max_m.max(max_n).max(1);
    let profiles: Vec<Option<Profile>> = (0..=top)
        .map(|k| {
            (k >= 2).then(|| {
                let f = factorize(k).expect("k >= 2");
                let (omega, xlogx_sum) = exponent_sums(f.exponents().map(u64::from));
                let mut shape: Vec<u32> = f.exponents().collect();
                shape.sort_unstable_by(|a, b| b.cmp(a));
                Profile { omega, xlogx_sum, h: entropy_h(&f), shape }
            })
        })
        .collect();
    let summary = (2..=max_m)
        .into_par_iter()
        .map(|m| {
            let mut part = ScanSummary::empty(max_m, max_n);
            let pm = profiles[m as usize].as_ref().expect("m >= 2");
            for n in 2..=max_n {
                if gcd(m, n) != 1 {
                    continue;
                }
                let pn = profiles[n as usize].as_ref().expect("n >= 2");
                let total = (pm.omega + pn.omega) as f64;
                let h_mn = (total.ln() - (pm.xlogx_sum + pn.xlogx_sum) / total).max(0.0);
                let w = Witness { m, n, gap: h_mn - pm.h - pn.h };
                part.record(w);
                if let Some((expected, family)) = family_expectation(&pm.shape, &pn.shape) {
                    part.family_pairs += 1;
                    if Relation::of_gap(w.gap) != expected {
                        part.violations.push(format!("{family}: ({m}, {n}) gap {:e}, expected {expected:?}", w.gap));
                    }
                }
            }
            part
        })
        .reduce(|| ScanSummary::empty(max_m, max_n), ScanSummary::merge);
    let mut summary = summary;
    summary.violations.sort();
    Ok(summary)
}

/// `(k+1) log(k+1) - k log k - log 2`, which equals `(k+1)(H(m)+H(n)-H(mn))`
/// on the `p^k q`, `p^k t` family.
pub fn pkq_margin(k: u32) -> f64 {
    let k = f64::from(k);
    xlogx(k + 1.0) - xlogx(k) - std::f64::consts::LN_2
}
