//! Fixed-precision arithmetic in the ring of p-adic integers.
//!
//! A [`PadicInt`] is a residue modulo `p^K` together with its context
//! `(p, K)`. Operations never mix contexts implicitly: combining values with
//! different `(p, K)` is an error, not a coercion. The precision `K` is the
//! number of p-adic digits retained; valuations are reported relative to it
//! (see [`ValLevel`]).

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default number of p-adic digits. Every congruence checked in this crate
/// needs at most three digits; twelve leaves generous headroom for iterated
/// products without blowing up residue sizes.
pub const DEFAULT_PRECISION: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("mismatched contexts: (p={left_prime}, K={left_precision}) vs (p={right_prime}, K={right_precision})")]
    MismatchedContext {
        left_prime: u64,
        left_precision: u32,
        right_prime: u64,
        right_precision: u32,
    },
    #[error("residue {residue} is divisible by {prime}, so it has no inverse")]
    NonUnit { residue: BigUint, prime: u64 },
    #[error("{q} is not congruent to 1 mod {p}")]
    NotCongruentOne { q: u64, p: u64 },
    #[error("square roots require an odd prime")]
    EvenPrime,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
}

/// Deterministic Miller-Rabin primality test, exact for all `u64` inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    // This witness set decides primality for every integer below 3.3 * 10^24.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = mod_pow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn mod_pow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Valuation of a truncated p-adic value. `level` is the largest exponent
/// `v <= K` with `p^v` dividing the value; `saturated` means the value was
/// zero to full precision, so the true valuation is only known to be `>= K`.
///
/// Invariant: `saturated` implies `level == K` for the precision the value
/// was measured at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValLevel {
    level: u32,
    saturated: bool,
}

impl ValLevel {
    pub(crate) fn finite(level: u32) -> Self {
        ValLevel {
            level,
            saturated: false,
        }
    }

    pub(crate) fn saturated(precision: u32) -> Self {
        ValLevel {
            level: precision,
            saturated: true,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn is_saturated(&self) -> bool {
        self.saturated
    }
}

/// An element of `Z_p` truncated at `p^K`: the residue satisfies
/// `0 <= residue < p^K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicInt {
    prime: u64,
    precision: u32,
    residue: BigUint,
}

impl PadicInt {
    /// Builds a value from an arbitrary non-negative integer, reducing it
    /// modulo `p^K`. Rejects composite `p` and zero precision.
    pub fn new(prime: u64, precision: u32, value: BigUint) -> Result<Self, PadicError> {
        if !is_prime_u64(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        let modulus = BigUint::from(prime).pow(precision);
        Ok(PadicInt {
            prime,
            precision,
            residue: value % modulus,
        })
    }

    pub fn from_u64(prime: u64, precision: u32, value: u64) -> Result<Self, PadicError> {
        Self::new(prime, precision, BigUint::from(value))
    }

    /// Like [`PadicInt::from_u64`] but accepts negative representatives,
    /// which are reduced into `[0, p^K)`.
    pub fn from_i64(prime: u64, precision: u32, value: i64) -> Result<Self, PadicError> {
        if value >= 0 {
            return Self::from_u64(prime, precision, value as u64);
        }
        let base = Self::new(prime, precision, BigUint::from(value.unsigned_abs()))?;
        Ok(base.neg())
    }

    pub fn zero(prime: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(prime, precision, BigUint::zero())
    }

    pub fn one(prime: u64, precision: u32) -> Result<Self, PadicError> {
        Self::new(prime, precision, BigUint::one())
    }

    fn unchecked(prime: u64, precision: u32, residue: BigUint) -> Self {
        debug_assert!(residue < BigUint::from(prime).pow(precision));
        PadicInt {
            prime,
            precision,
            residue,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// The canonical representative in `[0, p^K)`.
    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.prime).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.residue.is_one()
    }

    /// A value is a unit exactly when its residue is prime to p.
    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.prime).is_zero()
    }

    fn check_context(&self, other: &Self) -> Result<(), PadicError> {
        if self.prime != other.prime || self.precision != other.precision {
            return Err(PadicError::MismatchedContext {
                left_prime: self.prime,
                left_precision: self.precision,
                right_prime: other.prime,
                right_precision: other.precision,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_context(other)?;
        let sum = (&self.residue + &other.residue) % self.modulus();
        Ok(Self::unchecked(self.prime, self.precision, sum))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_context(other)?;
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, PadicError> {
        self.check_context(other)?;
        let prod = (&self.residue * &other.residue) % self.modulus();
        Ok(Self::unchecked(self.prime, self.precision, prod))
    }

    pub fn neg(&self) -> Self {
        if self.residue.is_zero() {
            return self.clone();
        }
        let res = self.modulus() - &self.residue;
        Self::unchecked(self.prime, self.precision, res)
    }

    /// Multiplicative inverse modulo `p^K`, defined only for units.
    pub fn inv(&self) -> Result<Self, PadicError> {
        if !self.is_unit() {
            return Err(PadicError::NonUnit {
                residue: self.residue.clone(),
                prime: self.prime,
            });
        }
        // For a unit, a^(phi(p^K) - 1) is the inverse; phi(p^K) = p^(K-1)(p-1).
        let phi = BigUint::from(self.prime).pow(self.precision - 1) * (self.prime - 1);
        let inv = self.residue.modpow(&(phi - 1u32), &self.modulus());
        Ok(Self::unchecked(self.prime, self.precision, inv))
    }

    /// Largest `v <= K` with `p^v` dividing the residue. Zero saturates at K.
    pub fn valuation(&self) -> ValLevel {
        if self.residue.is_zero() {
            return ValLevel::saturated(self.precision);
        }
        let p = BigUint::from(self.prime);
        let mut level = 0u32;
        let mut rest = self.residue.clone();
        loop {
            let (quot, rem) = rest.div_rem(&p);
            if !rem.is_zero() {
                return ValLevel::finite(level);
            }
            level += 1;
            rest = quot;
        }
    }

    pub fn pow(&self, exponent: &BigUint) -> Self {
        let res = self.residue.modpow(exponent, &self.modulus());
        Self::unchecked(self.prime, self.precision, res)
    }

    pub fn pow_u64(&self, exponent: u64) -> Self {
        self.pow(&BigUint::from(exponent))
    }
}

/// Lifts the square root of `q` congruent to 1 mod p, to precision `p^K`.
///
/// Requires an odd prime `p` and `q = 1 mod p`; the latter guarantees both
/// that `q` is a quadratic residue and that the branch fixed by `r = 1 mod p`
/// exists and is unique. Newton iteration `x <- (x + q/x)/2` starting at 1
/// doubles the number of correct digits each step.
pub fn hensel_sqrt(q: u64, p: u64, precision: u32) -> Result<PadicInt, PadicError> {
    if p == 2 {
        return Err(PadicError::EvenPrime);
    }
    if !is_prime_u64(p) {
        return Err(PadicError::NotPrime(p));
    }
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    if q % p != 1 {
        return Err(PadicError::NotCongruentOne { q, p });
    }
    let target = PadicInt::from_u64(p, precision, q)?;
    let half = PadicInt::from_u64(p, precision, 2)?.inv()?;
    let mut x = PadicInt::one(p, precision)?;
    loop {
        // x is a unit throughout: x = 1 mod p is preserved by the iteration.
        let next = x.add(&target.mul(&x.inv()?)?)?.mul(&half)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}
