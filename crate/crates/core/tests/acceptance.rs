//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Each check drives the library and compares against oracles defined in this
//! file (trial division, brute-force divisor sums, brute-force root counting),
//! none of which call back into the crate.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use entropia::entropy::{
    entropy_h, entropy_h_appended, entropy_hbar, hbar_limit, hbar_prime_power, shannon_entropy, Distribution,
};
use entropia::laws::{
    check_corollary_int, check_family_exponents_ge3, check_family_pkq, check_family_two_prime_powers, classify_prop41,
    product_entropy_gap, Relation,
};
use entropia::numfield::{
    ideal_entropy, ideal_exponential_divisors, ideal_tau_e, split_prime, FieldSpec, SplittingPattern,
};
use entropia::suites::{appended_power_samples, field_matrix, ge3_pairs};
use entropia::{factorize, Error, Limits};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

mod oracle {
    /// Prime exponents of `n` by trial division, in increasing prime order.
    pub fn factor(mut n: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut d = 2u64;
        while d * d <= n {
            let mut a = 0;
            while n % d == 0 {
                n /= d;
                a += 1;
            }
            if a > 0 {
                out.push((d, a));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    pub fn exponents(n: u64) -> Vec<u64> {
        factor(n).into_iter().map(|(_, a)| a).collect()
    }

    /// Smallest-prime-factor table for `0..=limit`.
    pub fn spf(limit: usize) -> Vec<u32> {
        let mut s = vec![0u32; limit + 1];
        for i in 2..=limit {
            if s[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if s[j] == 0 {
                        s[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        s
    }

    pub fn exponents_spf(mut n: usize, spf: &[u32]) -> Vec<u64> {
        let mut out = Vec::new();
        while n > 1 {
            let p = spf[n] as usize;
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push(a);
        }
        out
    }

    /// `-Σ w log w` with `w = a / Σ a`.
    pub fn h(exps: &[u64]) -> f64 {
        let total: u64 = exps.iter().sum();
        if total == 0 {
            return 0.0;
        }
        exps.iter()
            .map(|&a| {
                let w = a as f64 / total as f64;
                -w * w.ln()
            })
            .sum()
    }

    pub fn divisors(n: u64) -> Vec<u64> {
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1;
        while d * d <= n {
            if n % d == 0 {
                small.push(d);
                if d * d != n {
                    large.push(n / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// `-Σ (d/σ) log(d/σ)` over the divisors of `n`.
    pub fn hbar(n: u64) -> f64 {
        let divs = divisors(n);
        let sigma: u64 = divs.iter().sum();
        divs.iter()
            .map(|&d| {
                let w = d as f64 / sigma as f64;
                -w * w.ln()
            })
            .sum()
    }

    /// H̄(p^α) from exact 128-bit divisor sums.
    pub fn hbar_prime_power(p: u64, alpha: u32) -> f64 {
        let p = p as u128;
        let powers: Vec<u128> = (0..=alpha).map(|i| p.pow(i)).collect();
        let sigma: u128 = powers.iter().sum();
        powers
            .iter()
            .map(|&d| {
                let w = d as f64 / sigma as f64;
                -w * w.ln()
            })
            .sum()
    }

    pub fn divisor_count(a: u64) -> u64 {
        (1..=a).filter(|d| a % d == 0).count() as u64
    }

    /// Every exponent vector `(b_i)` with `b_i | a_i`.
    pub fn e_vectors(exps: &[u64]) -> Vec<Vec<u64>> {
        let mut acc = vec![Vec::new()];
        for &a in exps {
            let mut next = Vec::new();
            for v in &acc {
                for b in (1..=a).filter(|b| a % b == 0) {
                    let mut w = v.clone();
                    w.push(b);
                    next.push(w);
                }
            }
            acc = next;
        }
        acc
    }

    pub fn pow_mod(b: u64, e: u64, m: u64) -> u64 {
        (0..e).fold(1 % m, |acc, _| acc * (b % m) % m)
    }

    /// `(e, f)` factors of `pO_K`, sorted descending, by root counting and
    /// brute-force orders.
    pub fn splitting(family: &str, param: i64, p: u64) -> Vec<(u32, u32)> {
        let mut out = match family {
            "quad" => {
                let d = param;
                let roots = |c1: i64, c0: i64| -> usize {
                    (0..p as i64).filter(|&x| (x * x + c1 * x + c0).rem_euclid(p as i64) == 0).count()
                };
                // minimal polynomial of the ring generator
                let (c1, c0) = if d.rem_euclid(4) == 1 { (-1, -(d - 1) / 4) } else { (0, -d) };
                let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
                if disc.rem_euclid(p as i64) == 0 {
                    vec![(2, 1)]
                } else if roots(c1, c0) == 2 {
                    vec![(1, 1), (1, 1)]
                } else {
                    vec![(1, 2)]
                }
            }
            "cyclo" => {
                let l = param as u64;
                if p == l {
                    vec![((l - 1) as u32, 1)]
                } else {
                    let f = (1..l).find(|&k| pow_mod(p, k, l) == 1).unwrap();
                    vec![(1, f as u32); ((l - 1) / f) as usize]
                }
            }
            "cubic" => {
                let m = param as u64;
                if m % p == 0 || p == 3 {
                    vec![(3, 1)]
                } else {
                    let roots = (0..p).filter(|&x| (x * x % p) * x % p == m % p).count();
                    match roots {
                        3 => vec![(1, 1); 3],
                        1 => vec![(1, 2), (1, 1)],
                        _ => vec![(1, 3)],
                    }
                }
            }
            _ => unreachable!(),
        };
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

fn within(a: f64, b: f64, tol: f64, what: &str) -> std::result::Result<(), String> {
    if (a - b).abs() <= tol {
        Ok(())
    } else {
        Err(format!("{what}: {a} vs {b}"))
    }
}

fn h_of(n: u64) -> f64 {
    entropy_h(&factorize(n).unwrap())
}

fn primes_to(limit: usize) -> Vec<u64> {
    let spf = oracle::spf(limit);
    (2..=limit).filter(|&i| spf[i] as usize == i).map(|i| i as u64).collect()
}

fn c01_golden_values() -> Outcome {
    let start = Instant::now();
    let ln = f64::ln;
    within(h_of(6), ln(2.0), 1e-9, "H(6)")?;
    within(h_of(2310), ln(5.0), 1e-9, "H(2310)")?;
    within(product_entropy_gap(22, 105).unwrap().gap, ln(5.0 / 6.0), 1e-9, "gap(22, 105)")?;
    within(product_entropy_gap(20, 63).unwrap().gap, ln(32.0 / 27.0) / 3.0, 1e-9, "gap(20, 63)")?;
    let (h180, h60) = (h_of(180), h_of(60));
    within(h180, ln(5.0) - 0.8 * ln(2.0), 1e-9, "H(180)")?;
    within(h60, ln(4.0) - 0.5 * ln(2.0), 1e-9, "H(60)")?;
    if h60 > h180 {
        return Err(format!("H(60) = {h60} > H(180) = {h180}"));
    }
    for n in [6, 2310, 180, 60] {
        within(h_of(n), oracle::h(&oracle::exponents(n)), 1e-12, "oracle H")?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.2}s"));
    }
    Ok(format!("7 values within 1e-9, {elapsed:.3}s"))
}

fn c02_ideal_examples() -> Outcome {
    let start = Instant::now();
    let cases = [("cyclo:5", 5u64, 0.0), ("cubic:2", 29, 2f64.ln()), ("cubic:2", 31, 3f64.ln())];
    for (field, p, want) in cases {
        let sp = split_prime(field.parse().unwrap(), p).unwrap();
        within(ideal_entropy(&sp), want, 1e-12, &format!("H({p} in {field})"))?;
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        return Err(format!("took {elapsed:.2}s"));
    }
    Ok(format!("3 ideals within 1e-12, {elapsed:.3}s"))
}

fn c03_bounds() -> Outcome {
    const MAX: usize = 1_000_000;
    let start = Instant::now();
    let mut lib = Vec::with_capacity(MAX - 1);
    for n in 2..=MAX as u64 {
        let f = factorize(n).unwrap();
        lib.push((entropy_h(&f), f.small_omega()));
    }
    let elapsed = start.elapsed().as_secs_f64();
    let spf = oracle::spf(MAX);
    let mut violations = 0;
    let mut first = None;
    for (i, &(h, omega)) in lib.iter().enumerate() {
        let n = i + 2;
        let exps = oracle::exponents_spf(n, &spf);
        let upper = (exps.len() as f64).ln();
        let bad = omega != exps.len() || h < 0.0 || h > upper + 1e-12 || (h - oracle::h(&exps)).abs() > 1e-12;
        if bad {
            violations += 1;
            first.get_or_insert(n);
        }
    }
    if violations > 0 {
        return Err(format!("{violations} violations, first at n = {}", first.unwrap()));
    }
    if elapsed >= 30.0 {
        return Err(format!("took {elapsed:.1}s"));
    }
    Ok(format!("n in [2, 10^6], 0 violations, {elapsed:.2}s"))
}

fn c04_additivity() -> Outcome {
    let limits = Limits::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    let mut worst = 0f64;
    while checked < 10_000 {
        let (m, n) = (rng.gen_range(2..=1000u64), rng.gen_range(2..=1000u64));
        if oracle::factor(m).iter().any(|&(p, _)| n % p == 0) {
            continue;
        }
        checked += 1;
        let hb = |x: u64| entropy_hbar(&factorize(x).unwrap(), &limits).unwrap();
        let (hm, hn, hmn) = (hb(m), hb(n), hb(m * n));
        worst = worst.max((hmn - hm - hn).abs());
        within(hmn, oracle::hbar(m * n), 1e-9, &format!("oracle Hbar({})", m * n))?;
    }
    if worst > 1e-9 {
        return Err(format!("max additivity error {worst:e}"));
    }
    Ok(format!("10^4 coprime pairs, max error {worst:.1e}"))
}

fn c05_closed_form() -> Outcome {
    let mut worst = 0f64;
    let mut count = 0;
    for p in primes_to(50) {
        for alpha in 1..=12u32 {
            let got = hbar_prime_power(p, alpha).unwrap();
            let want = oracle::hbar_prime_power(p, alpha);
            worst = worst.max((got - want).abs());
            count += 1;
            within(got, want, 1e-9, &format!("Hbar({p}^{alpha})"))?;
        }
    }
    Ok(format!("{count} prime powers, max error {worst:.1e}"))
}

fn c06_limits() -> Outcome {
    let primes = primes_to(1_000_000);
    let values: Vec<f64> = primes.iter().map(|&p| hbar_limit(p).unwrap()).collect();
    if let Some(i) = (1..values.len()).find(|&i| values[i] >= values[i - 1]) {
        return Err(format!("not decreasing at p = {}", primes[i]));
    }
    for &p in primes.iter().take(20) {
        let pf = p as f64;
        let direct = pf * pf.ln() / (pf - 1.0) - (pf - 1.0).ln();
        within(hbar_limit(p).unwrap(), direct, 1e-12, &format!("limit at {p}"))?;
        within(hbar_prime_power(p, 200).unwrap(), direct, 1e-12, &format!("Hbar({p}^200)"))?;
    }
    let far = hbar_limit(999_983).unwrap();
    if far >= 2e-5 {
        return Err(format!("limit at 999983 = {far:e}"));
    }
    let tail = entropy_h_appended(&factorize(6).unwrap(), 5, 1_000_000).unwrap();
    within(tail, oracle::h(&[1, 1, 1_000_000]), 1e-12, "H(6 * 5^10^6)")?;
    if tail >= 5e-5 {
        return Err(format!("H(6 * 5^10^6) = {tail:e}"));
    }
    Ok(format!("{} primes decreasing, limit(999983) = {far:.3e}, H(6*5^10^6) = {tail:.3e}", primes.len()))
}

fn oracle_gap(m: u64, n: u64) -> f64 {
    let (a, b) = (oracle::exponents(m), oracle::exponents(n));
    let joint: Vec<u64> = a.iter().chain(&b).copied().collect();
    oracle::h(&joint) - oracle::h(&a) - oracle::h(&b)
}

fn c07_families() -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut failures = Vec::new();

    let ten = primes_to(29);
    let (mut checked, mut bad) = (0, 0);
    for &p in &ten {
        for &q in &ten {
            for &t in &ten {
                if p == q || q == t || p == t {
                    continue;
                }
                for k in 1..=10 {
                    checked += 1;
                    if check_family_pkq(p, q, t, k).is_err() {
                        bad += 1;
                    }
                }
            }
        }
    }
    notes.push(format!("pkq {checked} checked/{bad} bad"));
    if bad > 0 {
        failures.push("pkq");
    }

    let eight = primes_to(19);
    let (mut checked, mut bad) = (0, 0);
    for a in 0..8 {
        for b in 0..8 {
            for c in 0..8 {
                for d in 0..8 {
                    let idx = [a, b, c, d];
                    if (0..4).any(|i| (i + 1..4).any(|j| idx[i] == idx[j])) {
                        continue;
                    }
                    let [p1, p2, q1, q2] = idx.map(|i| eight[i]);
                    for k in 1..=8u32 {
                        checked += 1;
                        let r = check_family_two_prime_powers(p1, p2, q1, q2, k);
                        let want = if k == 1 { Relation::Equal } else { Relation::Greater };
                        if !matches!(r, Ok(ref g) if g.relation == want) {
                            bad += 1;
                        }
                    }
                }
            }
        }
    }
    notes.push(format!("two-prime-powers {checked} checked/{bad} bad"));
    if bad > 0 {
        failures.push("two-prime-powers");
    }

    let (mut bad, mut first) = (0, None);
    for (m, n) in ge3_pairs(0, 1000) {
        let ok = oracle::exponents(m).iter().chain(&oracle::exponents(n)).all(|&a| a >= 3)
            && oracle::factor(m).iter().all(|&(p, _)| n % p != 0);
        if !ok {
            return Err(format!("sampler produced non-conforming pair ({m}, {n})"));
        }
        match check_family_exponents_ge3(m, n) {
            Ok(_) => {}
            Err(Error::Verification(_)) => {
                bad += 1;
                first.get_or_insert((m, n, oracle_gap(m, n)));
            }
            Err(e) => return Err(format!("({m}, {n}): {e}")),
        }
    }
    notes.push(format!("exponents>=3 1000 checked/{bad} bad"));
    if let Some((m, n, g)) = first {
        notes.push(format!("e.g. ({m}, {n}) oracle gap {g:.4e}"));
        failures.push("exponents>=3");
    }

    let elapsed = start.elapsed().as_secs_f64();
    notes.push(format!("{elapsed:.2}s"));
    if elapsed >= 10.0 {
        failures.push("runtime");
    }
    if failures.is_empty() {
        Ok(notes.join(", "))
    } else {
        Err(format!("failing: {}; {}", failures.join(", "), notes.join(", ")))
    }
}

fn c08_eq_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut checked = 0;
    let mut worst = 0f64;
    while checked < 10_000 {
        let (m, n) = (rng.gen_range(2..=1_000_000u64), rng.gen_range(2..=1_000_000u64));
        if oracle::factor(m).iter().any(|&(p, _)| n % p == 0) {
            continue;
        }
        checked += 1;
        let r = product_entropy_gap(m, n).map_err(|e| format!("({m}, {n}): {e}"))?;
        let formula = r.formula_gap.ok_or("no formula gap")?;
        let direct = oracle_gap(m, n);
        for (x, y) in [(r.gap, formula), (direct, formula)] {
            let rel = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
            worst = worst.max(rel);
        }
    }
    if worst > 1e-12 {
        return Err(format!("max relative error {worst:e}"));
    }
    Ok(format!("10^4 coprime pairs, max relative error {worst:.1e}"))
}

fn c09_appended_power() -> Outcome {
    let (mut bad, mut confirmed, mut first) = (0, 0, None);
    for (n, p, alpha, beta) in appended_power_samples(0, 10_000) {
        match classify_prop41(n, p, alpha, beta) {
            Ok(_) => {}
            Err(Error::Verification(_)) => {
                bad += 1;
                // oracle: does H(np^α) exceed H(np^β) while the threshold lies between β and α?
                let mut e = oracle::exponents(n);
                let total: u64 = e.iter().sum();
                let t = (e.iter().map(|&a| a as f64 * (a as f64).ln()).sum::<f64>() / total as f64).exp();
                e.push(alpha);
                let ha = oracle::h(&e);
                *e.last_mut().unwrap() = beta;
                let hb = oracle::h(&e);
                if beta as f64 <= t && ha > hb {
                    confirmed += 1;
                }
                first.get_or_insert((n, p, alpha, beta));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    match first {
        None => Ok("10^4 samples, 0 contradictions".to_string()),
        Some((n, p, a, b)) => Err(format!(
            "{bad} contradictions in 10^4 samples ({confirmed} confirmed by oracle), first n = {n}, p = {p}, alpha = {a}, beta = {b}"
        )),
    }
}

fn c10_corollary_int() -> Outcome {
    let start = Instant::now();
    let (mut integers, mut checked, mut bad, mut oracle_bad, mut first) = (0, 0, 0, 0, None);
    for n in 2..=100_000u64 {
        let exps = oracle::exponents(n);
        if exps.len() < 3 || exps.iter().any(|&a| a > 2) {
            continue;
        }
        integers += 1;
        let report = check_corollary_int(n, 1_000_000).map_err(|e| e.to_string())?;
        checked += report.checked;
        bad += report.violations.len();
        let whole = oracle::h(&exps);
        let worse = oracle::e_vectors(&exps).into_iter().filter(|v| oracle::h(v) > whole + 1e-12).count();
        oracle_bad += worse;
        if let Some(v) = report.violations.first() {
            first.get_or_insert((n, v.value.unwrap_or_default()));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if bad != oracle_bad {
        return Err(format!("library found {bad} violations, oracle {oracle_bad}"));
    }
    match first {
        None if elapsed < 60.0 => Ok(format!("{integers} integers, {checked} e-divisors, 0 violations, {elapsed:.2}s")),
        None => Err(format!("took {elapsed:.1}s")),
        Some((n, d)) => Err(format!(
            "{bad} violations over {integers} integers (oracle agrees), first H({d}) > H({n}), {elapsed:.2}s"
        )),
    }
}

fn describe(field: &FieldSpec) -> (&'static str, i64) {
    let s = field.to_string();
    let (family, arg) = s.split_once(':').unwrap();
    let family = match family {
        "quad" => "quad",
        "cyclo" => "cyclo",
        _ => "cubic",
    };
    (family, arg.parse().unwrap())
}

fn c11_splitting() -> Outcome {
    let primes = primes_to(10_000);
    let mut count = 0;
    for field in field_matrix() {
        let (family, param) = describe(&field);
        let degree = u64::from(field.degree());
        for &p in &primes {
            let sp = split_prime(field, p).unwrap();
            let got: Vec<(u32, u32)> = sp.factors().iter().map(|x| (x.e, x.f)).collect();
            let want = oracle::splitting(family, param, p);
            if got != want {
                return Err(format!("{field}, p = {p}: {got:?} vs oracle {want:?}"));
            }
            let sum: u64 = want.iter().map(|&(e, f)| u64::from(e * f)).sum();
            if sum != degree {
                return Err(format!("{field}, p = {p}: sum e f = {sum}"));
            }
            if field.is_galois() {
                let (e, f) = want[0];
                let g = want.len() as u64;
                if want.iter().any(|&x| x != (e, f)) || u64::from(e * f) * g != degree {
                    return Err(format!("{field}, p = {p}: efg != degree"));
                }
                within(ideal_entropy(&sp), (g as f64).ln(), 1e-12, &format!("{field}, p = {p}: H vs log g"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} (field, prime) pairs match the root-counting oracle"))
}

fn c12_edivisor_counts() -> Outcome {
    let cap = 1_000_000;
    for n in 2..=100_000u64 {
        let f = factorize(n).unwrap();
        let got = f.exponential_divisors(cap).unwrap().len() as u64;
        let want: u64 = oracle::exponents(n).iter().map(|&a| oracle::divisor_count(a)).product();
        if got != want || f.tau_e() != want {
            return Err(format!("n = {n}: {got} e-divisors, tau_e {}, oracle {want}", f.tau_e()));
        }
    }
    let mut patterns: Vec<SplittingPattern> = Vec::new();
    for field in field_matrix() {
        for p in primes_to(200) {
            patterns.push(split_prime(field, p).unwrap());
        }
    }
    for e1 in 1..=12u32 {
        for e2 in 1..=12u32 {
            for e3 in 1..=6u32 {
                patterns.push(SplittingPattern::from_factors([(e1, 1), (e2, 2), (e3, 1)]).unwrap());
            }
        }
    }
    for sp in &patterns {
        let got = ideal_exponential_divisors(sp, cap).unwrap().len() as u64;
        let want: u64 = sp.factors().iter().map(|x| oracle::divisor_count(u64::from(x.e))).product();
        if got != want || ideal_tau_e(sp) != want {
            return Err(format!("{:?}: {got} e-divisors, oracle {want}", sp.factors()));
        }
    }
    Ok(format!("n <= 10^5 and {} ideal patterns agree with the oracle", patterns.len()))
}

fn c13_shannon() -> Outcome {
    let primes = primes_to(100);
    for &p in &primes {
        let q = 1.0 / p as f64;
        let lib = shannon_entropy(&Distribution::new(vec![q, 1.0 - q]).unwrap());
        let direct = -q * q.ln() - (1.0 - q) * (1.0 - q).ln();
        within(lib, direct, 1e-12, &format!("H_S at p = {p}"))?;
        within(lib, (1.0 - q) * hbar_limit(p).unwrap(), 1e-12, &format!("p = {p}"))?;
    }
    Ok(format!("{} primes within 1e-12", primes.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("golden values", c01_golden_values),
        ("ideal examples", c02_ideal_examples),
        ("bounds sweep", c03_bounds),
        ("Hbar additivity", c04_additivity),
        ("closed form vs oracle", c05_closed_form),
        ("limits", c06_limits),
        ("parametric families", c07_families),
        ("gap identity", c08_eq_identity),
        ("appended prime power trichotomy", c09_appended_power),
        ("integer e-divisor corollary", c10_corollary_int),
        ("splitting invariants", c11_splitting),
        ("e-divisor counting", c12_edivisor_counts),
        ("Shannon identity", c13_shannon),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
