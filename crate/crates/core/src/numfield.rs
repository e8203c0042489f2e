//! Splitting of rational primes in three families of number fields, and the
//! entropy and divisor counts of the ideal `pO_K` read off its splitting pattern.
//!
//! Only the shape `pO_K = P_1^e_1 ... P_g^e_g` with residue degrees `f_i` is
//! modelled; prime ideals are identified by position.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::{cartesian, factorize, is_prime, pow_mod, small_divisors};
use crate::entropy::exponent_entropy;
use crate::error::{domain, range, Error, Result};

/// A number field from one of the supported families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    /// `Q(√d)`, `d` squarefree and not 0 or 1.
    Quadratic { d: i64 },
    /// `Q(ζ_l)` for an odd prime `l`.
    CyclotomicPrime { l: u64 },
    /// `Q(∛m)`, `m >= 2` cubefree with `m² ≢ 1 (mod 9)` so that `O_K = Z[∛m]`.
    PureCubic { m: u64 },
}

impl FieldSpec {
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(domain(format!("quadratic discriminant parameter {d} is degenerate")));
        }
        let f = factorize(d.unsigned_abs())?;
        if !f.is_squarefree() {
            return Err(domain(format!("{d} is not squarefree")));
        }
        Ok(FieldSpec::Quadratic { d })
    }

    pub fn cyclotomic(l: u64) -> Result<Self> {
        if l < 3 || !is_prime(l) {
            return Err(domain(format!("cyclotomic conductor {l} must be an odd prime")));
        }
        Ok(FieldSpec::CyclotomicPrime { l })
    }

    pub fn pure_cubic(m: u64) -> Result<Self> {
        if m < 2 {
            return Err(domain("pure cubic parameter must be at least 2"));
        }
        if factorize(m)?.exponents().any(|a| a >= 3) {
            return Err(domain(format!("{m} is not cubefree")));
        }
        if (m % 9) * (m % 9) % 9 == 1 {
            return Err(domain(format!("{m}^2 = 1 mod 9: Z[cbrt {m}] is not the maximal order")));
        }
        Ok(FieldSpec::PureCubic { m })
    }

    /// `[K : Q]`.
    pub fn degree(&self) -> u32 {
        match *self {
            FieldSpec::Quadratic { .. } => 2,
            FieldSpec::CyclotomicPrime { l } => (l - 1) as u32,
            FieldSpec::PureCubic { .. } => 3,
        }
    }

    /// Quadratic and prime cyclotomic fields are Galois over Q; pure cubic fields are not.
    pub fn is_galois(&self) -> bool {
        !matches!(self, FieldSpec::PureCubic { .. })
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Quadratic { d } => write!(f, "quad:{d}"),
            FieldSpec::CyclotomicPrime { l } => write!(f, "cyclo:{l}"),
            FieldSpec::PureCubic { m } => write!(f, "cubic:{m}"),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses `quad:<d>`, `cyclo:<l>` or `cubic:<m>`.
impl FromStr for FieldSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (family, arg) = s.split_once(':').ok_or_else(|| domain(format!("field descriptor {s:?} has no ':'")))?;
        let bad_arg = || domain(format!("cannot parse field parameter in {s:?}"));
        match family {
            "quad" => FieldSpec::quadratic(arg.parse().map_err(|_| bad_arg())?),
            "cyclo" => FieldSpec::cyclotomic(arg.parse().map_err(|_| bad_arg())?),
            "cubic" => FieldSpec::pure_cubic(arg.parse().map_err(|_| bad_arg())?),
            _ => Err(domain(format!("unknown field family {family:?}"))),
        }
    }
}

/// One prime ideal factor `P^e` with residue degree `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IdealFactor {
    pub e: u32,
    pub f: u32,
}

impl IdealFactor {
    pub fn new(e: u32, f: u32) -> Self {
        IdealFactor { e, f }
    }
}

/// The multiset `{(e_i, f_i)}` of an ideal factorization, in canonical
/// descending `(e, f)` order.
///
/// Patterns produced by [`split_prime`] remember the field and rational prime
/// they came from; patterns built by hand or derived from exponential divisors
/// do not, and are not tied to a field degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingPattern {
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    field: Option<FieldSpec>,
    factors: Vec<IdealFactor>,
}

impl SplittingPattern {
    /// A pattern from raw `(e, f)` pairs, not attached to any field.
    pub fn from_factors(factors: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut factors: Vec<IdealFactor> = factors.into_iter().map(|(e, f)| IdealFactor::new(e, f)).collect();
        if factors.is_empty() {
            return Err(domain("a splitting pattern needs at least one prime ideal"));
        }
        if factors.iter().any(|x| x.e == 0 || x.f == 0) {
            return Err(domain("ramification indices and residue degrees must be positive"));
        }
        factors.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplittingPattern { p: None, field: None, factors })
    }

    fn of_prime(field: FieldSpec, p: u64, factors: Vec<(u32, u32)>) -> Self {
        let mut sp = Self::from_factors(factors).expect("splitting rules produce positive (e, f)");
        sp.p = Some(p);
        sp.field = Some(field);
        sp
    }

    pub fn p(&self) -> Option<u64> {
        self.p
    }

    pub fn field(&self) -> Option<FieldSpec> {
        self.field
    }

    pub fn factors(&self) -> &[IdealFactor] {
        &self.factors
    }

    /// Number of distinct prime ideals.
    pub fn g(&self) -> usize {
        self.factors.len()
    }

    pub fn ramification_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.factors.iter().map(|x| x.e)
    }

    /// `Ω(I) = Σ e_i`.
    pub fn big_omega(&self) -> u64 {
        self.ramification_indices().map(u64::from).sum()
    }

    /// `Σ e_i f_i`.
    pub fn weighted_degree(&self) -> u64 {
        self.factors.iter().map(|x| u64::from(x.e) * u64::from(x.f)).sum()
    }

    /// All `e_i` equal and all `f_i` equal.
    pub fn is_uniform(&self) -> bool {
        self.factors.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_inert(&self) -> bool {
        self.g() == 1 && self.factors[0].e == 1
    }

    pub fn is_totally_ramified(&self) -> bool {
        self.g() == 1 && self.factors[0].f == 1 && self.field.is_some_and(|k| self.factors[0].e == k.degree())
    }

    /// Checks the structural invariants; `Σ e_i f_i = [K:Q]` and the Galois
    /// uniformity only apply to patterns that carry their field.
    pub fn validate(&self) -> Result<()> {
        if self.factors.is_empty() || self.factors.iter().any(|x| x.e == 0 || x.f == 0) {
            return Err(domain("malformed splitting pattern"));
        }
        if let Some(field) = self.field {
            let n = u64::from(field.degree());
            if self.weighted_degree() != n {
                return Err(Error::Verification(format!("sum e_i f_i = {} but [K:Q] = {n}", self.weighted_degree())));
            }
            if field.is_galois() {
                let IdealFactor { e, f } = self.factors[0];
                if !self.is_uniform() || u64::from(e) * u64::from(f) * self.g() as u64 != n {
                    return Err(Error::Verification("Galois pattern is not uniform with efg = n".into()));
                }
            }
        }
        Ok(())
    }

    /// The pattern `∏ P_i^{β_i}` with the same residue degrees.
    pub fn with_exponents(&self, betas: &[u32]) -> Result<Self> {
        if betas.len() != self.g() {
            return Err(domain(format!("expected {} exponents, got {}", self.g(), betas.len())));
        }
        Self::from_factors(betas.iter().zip(&self.factors).map(|(&b, x)| (b, x.f)))
    }
}

/// Jacobi symbol `(a / n)` for odd positive `n`, by the reciprocity loop.
pub fn jacobi(a: i64, n: u64) -> i32 {
    assert!(n % 2 == 1, "Jacobi symbol needs an odd modulus");
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut sign = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Kronecker symbol `(D / p)` for a prime `p`.
pub fn kronecker_prime(disc: i64, p: u64) -> i32 {
    if p == 2 {
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    jacobi(disc, p)
}

/// Multiplicative order of `a` modulo the prime `l`, `gcd(a, l) = 1`.
pub fn multiplicative_order(a: u64, l: u64) -> u64 {
    let divisors = factorize(l - 1).and_then(|f| f.divisors(u64::MAX)).expect("l >= 3");
    divisors.into_iter().find(|&k| pow_mod(a, k, l) == 1).expect("a^(l-1) = 1 mod l")
}

/// The splitting pattern of `pO_K`.
pub fn split_prime(field: FieldSpec, p: u64) -> Result<SplittingPattern> {
    if !is_prime(p) {
        return Err(domain(format!("{p} is not prime")));
    }
    let factors = match field {
        FieldSpec::Quadratic { d } => {
            let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
            match kronecker_prime(disc, p) {
                1 => vec![(1, 1), (1, 1)],
                -1 => vec![(1, 2)],
                _ => vec![(2, 1)],
            }
        }
        FieldSpec::CyclotomicPrime { l } => {
            if p == l {
                vec![((l - 1) as u32, 1)]
            } else {
                let f = multiplicative_order(p % l, l);
                let g = (l - 1) / f;
                vec![(1, f as u32); g as usize]
            }
        }
        FieldSpec::PureCubic { m } => {
            if m % p == 0 || p == 3 {
                // x^3 - m is x^3 or (x - m)^3 mod p
                vec![(3, 1)]
            } else if p % 3 == 2 {
                vec![(1, 1), (1, 2)]
            } else if pow_mod(m % p, (p - 1) / 3, p) == 1 {
                vec![(1, 1); 3]
            } else {
                vec![(1, 3)]
            }
        }
    };
    let sp = SplittingPattern::of_prime(field, p, factors);
    sp.validate().map_err(|e| Error::Unsupported(format!("{field} at p = {p}: {e}")))?;
    Ok(sp)
}

/// `H(I) = log Ω(I) - (1/Ω(I)) Σ e_i log e_i`.
pub fn ideal_entropy(sp: &SplittingPattern) -> f64 {
    exponent_entropy(sp.ramification_indices().map(u64::from))
}

/// `τ(I) = ∏ (e_i + 1)`.
pub fn ideal_tau(sp: &SplittingPattern) -> u64 {
    sp.ramification_indices().map(|e| u64::from(e) + 1).product()
}

/// `τ^(e)(I) = ∏ τ(e_i)`.
pub fn ideal_tau_e(sp: &SplittingPattern) -> u64 {
    sp.ramification_indices().map(|e| small_divisors(e).len() as u64).product()
}

/// All exponent vectors `(β_1, ..., β_g)` with `β_i | e_i`, lexicographic.
pub fn ideal_exponential_divisors(sp: &SplittingPattern, cap: u64) -> Result<Vec<Vec<u32>>> {
    let count = ideal_tau_e(sp);
    if count > cap {
        return Err(range(format!("{count} exponential divisors exceed the cap of {cap}")));
    }
    let choices: Vec<Vec<u32>> = sp.ramification_indices().map(small_divisors).collect();
    Ok(cartesian(&choices))
}
