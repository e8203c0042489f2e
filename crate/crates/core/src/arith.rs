//! Exact factorization of 64-bit integers and the arithmetic functions built on it.
//!
//! Factoring uses trial division by the primes below 10^4, then Brent's
//! variant of Pollard's rho on whatever cofactor is left. Primality is decided
//! by Miller-Rabin with the first twelve primes as witnesses, which is
//! deterministic for every `u64`.

use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{domain, range, Result};

const TRIAL_BOUND: u64 = 10_000;

/// Witness set that makes Miller-Rabin exact below 3.3 * 10^24.
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// All primes `<= limit`, ascending (sieve of Eratosthenes).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(TRIAL_BOUND))
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for any `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n` (Brent's cycle detection).
fn pollard_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1.. {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r <<= 1;
        }
        if g == n {
            // the batch overshot; replay one step at a time
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Canonical prime factorization `n = p_1^a_1 ... p_r^a_r` with `p_1 < ... < p_r`.
///
/// The empty factorization represents 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Factorization {
    value: u64,
    entries: Vec<(u64, u32)>,
}

impl Factorization {
    /// The factorization of 1.
    pub fn one() -> Self {
        Factorization { value: 1, entries: Vec::new() }
    }

    /// Builds a factorization from `(prime, exponent)` pairs, checking every invariant.
    pub fn from_prime_powers(entries: Vec<(u64, u32)>) -> Result<Self> {
        let mut value = 1u64;
        let mut last = 0u64;
        for &(p, a) in &entries {
            if p <= last {
                return Err(domain(format!("primes must be strictly increasing, got {p} after {last}")));
            }
            if a == 0 {
                return Err(domain(format!("exponent of {p} must be at least 1")));
            }
            if !is_prime(p) {
                return Err(domain(format!("{p} is not prime")));
            }
            value = p
                .checked_pow(a)
                .and_then(|pa| value.checked_mul(pa))
                .ok_or_else(|| range("factorization value exceeds 64 bits"))?;
            last = p;
        }
        Ok(Factorization { value, entries })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    /// `(prime, exponent)` pairs, ascending by prime.
    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|&(p, _)| p)
    }

    pub fn exponents(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&(_, a)| a)
    }

    pub fn is_one(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents().all(|a| a == 1)
    }

    /// Exponent of `p` in this factorization (0 when `p` does not divide the value).
    pub fn exponent_of(&self, p: u64) -> u32 {
        self.entries.binary_search_by_key(&p, |&(q, _)| q).map(|i| self.entries[i].1).unwrap_or(0)
    }

    /// Ω(n): number of prime factors counted with multiplicity.
    pub fn big_omega(&self) -> u64 {
        self.exponents().map(u64::from).sum()
    }

    /// ω(n): number of distinct prime factors.
    pub fn small_omega(&self) -> usize {
        self.entries.len()
    }

    /// τ(n) = ∏ (a_i + 1).
    pub fn divisor_count(&self) -> u64 {
        self.exponents().map(|a| u64::from(a) + 1).product()
    }

    /// σ(n) = ∏ (p^(a+1) - 1) / (p - 1), with a range error if it does not fit in 64 bits.
    pub fn divisor_sum(&self) -> Result<u64> {
        u64::try_from(self.divisor_sum_wide()).map_err(|_| range(format!("sigma({}) exceeds 64 bits", self.value)))
    }

    /// σ(n) in 128 bits; never overflows for a 64-bit `n`.
    pub(crate) fn divisor_sum_wide(&self) -> u128 {
        self.entries
            .iter()
            .map(|&(p, a)| {
                let p = p as u128;
                // 1 + p + ... + p^a, term by term: p^a <= n < 2^64
                let mut term = 1u128;
                let mut sum = 1u128;
                for _ in 0..a {
                    term *= p;
                    sum += term;
                }
                sum
            })
            .product()
    }

    /// All divisors, ascending. Fails when τ(n) exceeds `cap`.
    pub fn divisors(&self, cap: u64) -> Result<Vec<u64>> {
        let count = self.divisor_count();
        if count > cap {
            return Err(range(format!("{} has {count} divisors, above the cap of {cap}", self.value)));
        }
        let mut divs = Vec::with_capacity(count as usize);
        divs.push(1u64);
        for &(p, a) in &self.entries {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..a {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }

    /// τ^(e)(n) = τ(a_1) ... τ(a_r); equals 1 for n = 1.
    pub fn tau_e(&self) -> u64 {
        self.exponents().map(|a| small_divisors(a).len() as u64).product()
    }

    /// Every exponential divisor `∏ p_i^b_i` with `b_i | a_i`, ascending by value.
    pub fn exponential_divisors(&self, cap: u64) -> Result<Vec<Factorization>> {
        if self.is_one() {
            return Err(domain("exponential divisors are defined for n > 1"));
        }
        let count = self.tau_e();
        if count > cap {
            return Err(range(format!("{} has {count} exponential divisors, above the cap of {cap}", self.value)));
        }
        let choices: Vec<Vec<u32>> = self.exponents().map(small_divisors).collect();
        let mut out = Vec::with_capacity(count as usize);
        for betas in cartesian(&choices) {
            let entries: Vec<(u64, u32)> = self.primes().zip(betas).collect();
            let value = entries.iter().map(|&(p, b)| p.pow(b)).product();
            out.push(Factorization { value, entries });
        }
        out.sort_unstable_by_key(Factorization::value);
        Ok(out)
    }

    /// The factorization of `self * other` for coprime arguments.
    pub fn coprime_product(&self, other: &Factorization) -> Result<Factorization> {
        let value = self.value.checked_mul(other.value).ok_or_else(|| range("product exceeds 64 bits"))?;
        let mut entries = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        while i < self.entries.len() || j < other.entries.len() {
            match (self.entries.get(i), other.entries.get(j)) {
                (Some(&a), Some(&b)) if a.0 == b.0 => {
                    return Err(domain(format!("{} and {} share the prime {}", self.value, other.value, a.0)))
                }
                (Some(&a), Some(&b)) if a.0 < b.0 => {
                    entries.push(a);
                    i += 1;
                }
                (Some(&a), None) => {
                    entries.push(a);
                    i += 1;
                }
                (_, Some(&b)) => {
                    entries.push(b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Ok(Factorization { value, entries })
    }
}

/// Divisors of a small exponent, ascending.
pub(crate) fn small_divisors(a: u32) -> Vec<u32> {
    (1..=a).filter(|d| a % d == 0).collect()
}

/// Every combination picking one element from each list, in lexicographic order.
pub(crate) fn cartesian(choices: &[Vec<u32>]) -> Vec<Vec<u32>> {
    choices.iter().fold(vec![Vec::new()], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&o| {
                    let mut v = prefix.clone();
                    v.push(o);
                    v
                })
            })
            .collect()
    })
}

/// Canonical factorization of `n >= 1`.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(domain("cannot factorize 0"));
    }
    let mut rest = n;
    let mut entries = Vec::new();
    for &p in small_primes() {
        if p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut a = 0;
            while rest % p == 0 {
                rest /= p;
                a += 1;
            }
            entries.push((p, a));
        }
    }
    if rest > 1 {
        let mut big = Vec::new();
        split_into(rest, &mut big);
        big.sort_unstable();
        for p in big {
            match entries.last_mut() {
                Some((q, a)) if *q == p => *a += 1,
                _ => entries.push((p, 1)),
            }
        }
    }
    Ok(Factorization { value: n, entries })
}
