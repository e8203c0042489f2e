//! Entropies of natural numbers and of ideals `pO_K`.
//!
//! * [`arith`]: factorization and the arithmetic functions Ω, ω, τ, σ, τ^(e).
//! * [`entropy`]: the exponent entropy `H`, the divisor entropy `H̄`, Shannon
//!   entropy and the closed forms relating them.
//! * [`numfield`]: prime splitting in quadratic, prime cyclotomic and pure
//!   cubic fields, and the ideal entropy built on splitting patterns.
//! * [`laws`]: checkers for the product inequalities, the appended-prime-power
//!   trichotomy and the exponential-divisor corollaries.
//! * [`suites`]: named verification sweeps that drive `laws` over ranges.

pub mod arith;
pub mod entropy;
mod error;
pub mod laws;
pub mod numfield;
pub mod suites;

pub use arith::{factorize, is_prime, Factorization};
pub use error::{Error, Result};

/// Environment variable that overrides [`Limits::max_divisors`].
pub const MAX_DIVISORS_ENV: &str = "ENTROPIA_MAX_DIVISORS";

/// Enumeration caps shared by divisor and e-divisor listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_divisors: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_divisors: 1_000_000 }
    }
}

impl Limits {
    /// Defaults, with `ENTROPIA_MAX_DIVISORS` applied when it parses as an integer.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(cap) = std::env::var(MAX_DIVISORS_ENV).ok().and_then(|v| v.trim().parse().ok()) {
            limits.max_divisors = cap;
        }
        limits
    }
}
