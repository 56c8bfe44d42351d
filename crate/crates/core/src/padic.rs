//! Truncated p-adic integers with per-value precision.
//!
//! A [`Padic`] is a residue modulo `p^prec` for an odd prime `p`. Every value
//! carries its own precision; binary operations return the minimum of the
//! operand precisions, and the few operations that consume digits
//! ([`Padic::divide_exact`], [`UnitOneP::qint`], [`UnitOneP::dlog`]) say so.

use std::cmp::min;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest modulus a stored value may live in. Products are formed in `u128`.
const MAX_MODULUS: u64 = 1 << 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),
    #[error("precision must be positive")]
    ZeroPrecision,
    #[error("p^{prec} does not fit the supported range for p = {prime}")]
    PrecisionOverflow { prime: u64, prec: u32 },
    #[error("{0} is not a unit")]
    NotUnit(Padic),
    #[error("{0} is not congruent to 1 modulo p")]
    NotOneModP(Padic),
    #[error("cannot divide {num} by {den}: divisor has larger valuation")]
    Indivisible { num: Padic, den: Padic },
    #[error("division by {0}, which is zero at its precision")]
    ZeroDivisor(Padic),
    #[error("logarithm base is 1")]
    TrivialBase,
    #[error("logarithm base {base} has larger valuation than the argument {arg}")]
    BaseTooDeep { base: Padic, arg: Padic },
    #[error("precision exhausted")]
    PrecisionExhausted,
}

pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `p^k` if it stays below [`MAX_MODULUS`].
pub fn checked_modulus(p: u64, k: u32) -> Option<u64> {
    let mut m: u64 = 1;
    for _ in 0..k {
        m = m.checked_mul(p)?;
        if m > MAX_MODULUS {
            return None;
        }
    }
    Some(m)
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
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

/// Inverse of a unit modulo `m` via the extended Euclidean algorithm.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// p-adic valuation of a nonzero integer.
fn int_valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Valuation of a truncated value: exact below the precision, otherwise only
/// a lower bound is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    /// The exact valuation, or the precision bound for a zero value.
    pub fn bound(self) -> u32 {
        match self {
            Valuation::Finite(v) | Valuation::AtLeast(v) => v,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Padic {
    prime: u64,
    prec: u32,
    value: u64,
}

impl Padic {
    /// Reduces an integer modulo `p^prec`.
    pub fn new(prime: u64, value: i128, prec: u32) -> Result<Self, PadicError> {
        let m = Self::modulus_for(prime, prec)?;
        Ok(Padic {
            prime,
            prec,
            value: value.rem_euclid(m as i128) as u64,
        })
    }

    pub fn from_biguint(prime: u64, value: &BigUint, prec: u32) -> Result<Self, PadicError> {
        let m = Self::modulus_for(prime, prec)?;
        let r = (value % BigUint::from(m)).to_u64().unwrap_or(0);
        Ok(Padic { prime, prec, value: r })
    }

    pub fn zero(prime: u64, prec: u32) -> Result<Self, PadicError> {
        Self::new(prime, 0, prec)
    }

    pub fn one(prime: u64, prec: u32) -> Result<Self, PadicError> {
        Self::new(prime, 1, prec)
    }

    fn modulus_for(prime: u64, prec: u32) -> Result<u64, PadicError> {
        if !is_odd_prime(prime) {
            return Err(PadicError::BadPrime(prime));
        }
        if prec == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        checked_modulus(prime, prec).ok_or(PadicError::PrecisionOverflow { prime, prec })
    }

    /// Same prime and precision, different residue. Only called with a
    /// precision already validated for this prime.
    fn with_value(&self, value: u64, prec: u32) -> Padic {
        let m = self.prime.pow(prec);
        Padic {
            prime: self.prime,
            prec,
            value: value % m,
        }
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Representative in `0..p^prec`.
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.prec)
    }

    /// Representative in the symmetric range around 0.
    pub fn signed_value(&self) -> i128 {
        let m = self.modulus() as i128;
        let v = self.value as i128;
        if v > m / 2 {
            v - m
        } else {
            v
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    pub fn is_unit(&self) -> bool {
        !self.value.is_multiple_of(self.prime)
    }

    /// Drops digits down to `prec` (no-op if `prec >= self.prec`).
    pub fn reduce(&self, prec: u32) -> Padic {
        let prec = min(prec.max(1), self.prec);
        self.with_value(self.value, prec)
    }

    pub fn valuation(&self) -> Valuation {
        if self.value == 0 {
            Valuation::AtLeast(self.prec)
        } else {
            Valuation::Finite(int_valuation(self.prime, self.value))
        }
    }

    /// `value ≡ 0 (mod p^k)` for `k <= prec`.
    pub fn divisible_by_power(&self, k: u32) -> bool {
        self.valuation().bound() >= k
    }

    fn check_prime(&self, other: &Padic) -> Result<(), PadicError> {
        if self.prime != other.prime {
            Err(PadicError::PrimeMismatch(self.prime, other.prime))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other)?;
        let prec = min(self.prec, other.prec);
        let m = self.prime.pow(prec);
        Ok(self.with_value((self.value % m + other.value % m) % m, prec))
    }

    pub fn checked_sub(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(other)?;
        let prec = min(self.prec, other.prec);
        let m = self.prime.pow(prec);
        Ok(self.with_value(mul_mod(self.value, other.value, m), prec))
    }

    pub fn neg(&self) -> Padic {
        let m = self.modulus();
        self.with_value((m - self.value) % m, self.prec)
    }

    /// Adds an ordinary integer.
    pub fn add_int(&self, n: i128) -> Padic {
        let m = self.modulus() as i128;
        self.with_value((self.value as i128 + n).rem_euclid(m) as u64, self.prec)
    }

    pub fn mul_int(&self, n: i128) -> Padic {
        let m = self.modulus();
        let n = n.rem_euclid(m as i128) as u64;
        self.with_value(mul_mod(self.value, n, m), self.prec)
    }

    pub fn inv_unit(&self) -> Result<Padic, PadicError> {
        inv_mod(self.value, self.modulus())
            .filter(|_| self.is_unit())
            .map(|v| self.with_value(v, self.prec))
            .ok_or(PadicError::NotUnit(*self))
    }

    /// Exact quotient `a / b`, losing `valuation(b)` digits.
    pub fn divide_exact(&self, b: &Padic) -> Result<Padic, PadicError> {
        self.check_prime(b)?;
        let vb = match b.valuation() {
            Valuation::Finite(v) => v,
            Valuation::AtLeast(_) => return Err(PadicError::ZeroDivisor(*b)),
        };
        let prec = min(self.prec, b.prec);
        if vb >= prec {
            return Err(PadicError::ZeroDivisor(*b));
        }
        if let Valuation::Finite(va) = self.valuation() {
            if va < vb {
                return Err(PadicError::Indivisible { num: *self, den: *b });
            }
        }
        let shift = self.prime.pow(vb);
        let k = prec - vb;
        let m = self.prime.pow(k);
        let num = (self.value / shift) % m;
        let den = (b.value / shift) % m;
        let den_inv = inv_mod(den, m).expect("unit part is invertible");
        Ok(self.with_value(mul_mod(num, den_inv, m), k))
    }

    /// `u^m` by square-and-multiply; negative exponents need a unit.
    pub fn pow_int(&self, m: i64) -> Result<Padic, PadicError> {
        let base = if m < 0 { self.inv_unit()? } else { *self };
        let modulus = self.modulus();
        Ok(self.with_value(pow_mod(base.value, m.unsigned_abs(), modulus), self.prec))
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.value, self.prime, self.prec)
    }
}

// Operator forms panic on a prime mismatch, like integer overflow in debug builds.
impl Add for Padic {
    type Output = Padic;
    fn add(self, rhs: Padic) -> Padic {
        self.checked_add(&rhs).expect("p-adic addition")
    }
}

impl Sub for Padic {
    type Output = Padic;
    fn sub(self, rhs: Padic) -> Padic {
        self.checked_sub(&rhs).expect("p-adic subtraction")
    }
}

impl Mul for Padic {
    type Output = Padic;
    fn mul(self, rhs: Padic) -> Padic {
        self.checked_mul(&rhs).expect("p-adic multiplication")
    }
}

impl Neg for Padic {
    type Output = Padic;
    fn neg(self) -> Padic {
        Padic::neg(&self)
    }
}

/// An element of the multiplicative group `1 + pZ_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnitOneP(Padic);

impl UnitOneP {
    pub fn new(u: Padic) -> Result<Self, PadicError> {
        if u.value % u.prime != 1 % u.prime {
            return Err(PadicError::NotOneModP(u));
        }
        Ok(UnitOneP(u))
    }

    pub fn one(prime: u64, prec: u32) -> Result<Self, PadicError> {
        Ok(UnitOneP(Padic::one(prime, prec)?))
    }

    pub fn as_padic(&self) -> &Padic {
        &self.0
    }

    pub fn prime(&self) -> u64 {
        self.0.prime
    }

    pub fn prec(&self) -> u32 {
        self.0.prec
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn reduce(&self, prec: u32) -> UnitOneP {
        UnitOneP(self.0.reduce(prec))
    }

    /// Valuation of `u - 1`.
    pub fn depth(&self) -> Valuation {
        self.0.add_int(-1).valuation()
    }

    pub fn mul(&self, other: &UnitOneP) -> Result<UnitOneP, PadicError> {
        Ok(UnitOneP(self.0.checked_mul(&other.0)?))
    }

    pub fn inv(&self) -> UnitOneP {
        UnitOneP(self.0.inv_unit().expect("1 + pZ_p consists of units"))
    }

    pub fn pow_int(&self, m: i64) -> UnitOneP {
        UnitOneP(self.0.pow_int(m).expect("1 + pZ_p consists of units"))
    }

    /// `u^λ` for a p-adic exponent. Since `u ≡ 1 (mod p)`, the result modulo
    /// `p^k` only depends on `λ` modulo `p^(k-1)`, so the result carries
    /// precision `min(u.prec, λ.prec + 1)`.
    pub fn pow_padic(&self, lambda: &Padic) -> Result<UnitOneP, PadicError> {
        self.0.check_prime(lambda)?;
        let prec = min(self.0.prec, lambda.prec + 1);
        let m = self.0.prime.pow(prec);
        Ok(UnitOneP(self.0.with_value(pow_mod(self.0.value, lambda.value, m), prec)))
    }

    /// The q-integer `(u^λ - 1)/(u - 1)`, i.e. `1 + u + ... + u^(λ-1)` for
    /// integer `λ`. The result is known modulo `p^min(u.prec, λ.prec)`.
    pub fn qint(&self, lambda: &Padic) -> Result<Padic, PadicError> {
        self.0.check_prime(lambda)?;
        let p = self.0.prime;
        let prec = min(self.0.prec, lambda.prec);
        let u = self.0.value;
        if u == 1 {
            // u ≡ 1 at full precision: the binomial series collapses to λ.
            return Ok(lambda.reduce(prec));
        }
        let v = int_valuation(p, u - 1);
        let work = prec + v;
        let out_mod = p.pow(prec);
        let shifted = match checked_modulus(p, work) {
            Some(m) => {
                let num = (pow_mod(u, lambda.value, m) + m - 1) % m;
                num / p.pow(v)
            }
            None => {
                let m = BigUint::from(p).pow(work);
                let num = (BigUint::from(u).modpow(&BigUint::from(lambda.value), &m) + &m
                    - BigUint::one())
                    % &m;
                let q = num / BigUint::from(p).pow(v);
                (q % BigUint::from(out_mod)).to_u64().ok_or(PadicError::PrecisionExhausted)?
            }
        };
        let den = ((u - 1) / p.pow(v)) % out_mod;
        let den_inv = inv_mod(den, out_mod).ok_or(PadicError::PrecisionExhausted)?;
        Ok(self.0.with_value(mul_mod(shifted % out_mod, den_inv, out_mod), prec))
    }

    /// Iwasawa logarithm `Σ (-1)^(k+1) (u-1)^k / k`, returned at the precision of `u`.
    pub fn log1p(&self) -> Result<Padic, PadicError> {
        let p = self.0.prime;
        let prec = self.0.prec;
        let x = self.0.value.wrapping_sub(1);
        if self.0.value == 1 {
            return Ok(self.0.with_value(0, prec));
        }
        let v = int_valuation(p, x);
        // Terms with k·v - v_p(k) >= prec vanish; k·v - log_p k increases in k.
        let mut terms = 1u64;
        while terms * v as u64 - floor_log(p, terms) as u64 <= prec as u64 {
            terms += 1;
        }
        let deepest = floor_log(p, terms);
        let guard = prec.div_ceil(p as u32 - 1) + 2;
        let work = prec + guard.max(deepest + 1);
        let out_mod = p.pow(prec);
        let sum = match checked_modulus(p, work) {
            Some(m) => {
                let mut sum = 0u64;
                let mut power = 1u64;
                for k in 1..=terms {
                    power = mul_mod(power, x, m);
                    let j = int_valuation(p, k);
                    let unit = k / p.pow(j);
                    let term = mul_mod(power / p.pow(j), inv_mod(unit % m, m).unwrap(), m) % out_mod;
                    sum = if k % 2 == 1 {
                        (sum + term) % out_mod
                    } else {
                        (sum + out_mod - term) % out_mod
                    };
                }
                sum
            }
            None => {
                let m = BigUint::from(p).pow(work);
                let out = BigUint::from(out_mod);
                let xb = BigUint::from(x);
                let mut sum = BigUint::zero();
                let mut power = BigUint::one();
                for k in 1..=terms {
                    power = (&power * &xb) % &m;
                    let j = int_valuation(p, k);
                    let unit = k / p.pow(j);
                    let unit_inv = inv_mod(unit % out_mod, out_mod).unwrap();
                    let term = ((&power / BigUint::from(p).pow(j)) * BigUint::from(unit_inv)) % &out;
                    sum = if k % 2 == 1 {
                        (sum + term) % &out
                    } else {
                        (sum + &out - term) % &out
                    };
                }
                sum.to_u64().ok_or(PadicError::PrecisionExhausted)?
            }
        };
        Ok(self.0.with_value(sum, prec))
    }

    /// Discrete logarithm: the `λ` with `base^λ = u`. Loses `valuation(base - 1)` digits.
    pub fn dlog(&self, base: &UnitOneP) -> Result<Padic, PadicError> {
        self.0.check_prime(&base.0)?;
        let vb = match base.depth() {
            Valuation::Finite(v) => v,
            Valuation::AtLeast(_) => return Err(PadicError::TrivialBase),
        };
        if let Valuation::Finite(vu) = self.depth() {
            if vu < vb {
                return Err(PadicError::BaseTooDeep { base: base.0, arg: self.0 });
            }
        }
        let prec = min(self.0.prec, base.0.prec);
        if vb >= prec {
            return Err(PadicError::PrecisionExhausted);
        }
        let num = self.reduce(prec).log1p()?;
        let den = base.reduce(prec).log1p()?;
        num.divide_exact(&den)
    }
}

impl fmt::Display for UnitOneP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn floor_log(p: u64, n: u64) -> u32 {
    let mut k = 0;
    let mut acc = p;
    while acc <= n {
        k += 1;
        acc = acc.saturating_mul(p);
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pa(v: i128, prec: u32) -> Padic {
        Padic::new(3, v, prec).unwrap()
    }

    fn unit(v: i128, prec: u32) -> UnitOneP {
        UnitOneP::new(pa(v, prec)).unwrap()
    }

    #[test]
    fn cube_of_one_minus_p() {
        let u = pa(-2, 4);
        assert_eq!((u * u * u).value(), 73);
        assert_eq!(u.pow_int(3).unwrap().value(), 73);
    }

    #[test]
    fn inverses() {
        assert_eq!(pa(1, 4).inv_unit().unwrap().value(), 1);
        assert_eq!(pa(4, 2).inv_unit().unwrap().value(), 7);
        assert!(matches!(pa(3, 2).inv_unit(), Err(PadicError::NotUnit(_))));
        assert!(pa(3, 2).pow_int(-1).is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(pa(45, 4).valuation(), Valuation::Finite(2));
        assert_eq!(pa(0, 4).valuation(), Valuation::AtLeast(4));
        assert_eq!(pa(5, 4).valuation(), Valuation::Finite(0));
    }

    #[test]
    fn exact_division() {
        let q = pa(9, 4).divide_exact(&pa(3, 4)).unwrap();
        assert_eq!((q.value(), q.prec()), (3, 3));
        let a = pa(40, 4);
        assert_eq!(a.divide_exact(&pa(1, 4)).unwrap(), a);
        let z = pa(0, 4).divide_exact(&pa(3, 4)).unwrap();
        assert_eq!((z.value(), z.prec()), (0, 3));
        assert!(matches!(pa(1, 4).divide_exact(&pa(3, 4)), Err(PadicError::Indivisible { .. })));
        assert!(matches!(pa(1, 4).divide_exact(&pa(0, 4)), Err(PadicError::ZeroDivisor(_))));
    }

    #[test]
    fn mismatched_primes() {
        let a = pa(1, 3);
        let b = Padic::new(5, 1, 3).unwrap();
        assert_eq!(a.checked_add(&b), Err(PadicError::PrimeMismatch(3, 5)));
    }

    #[test]
    fn rejects_two_and_composites() {
        assert_eq!(Padic::new(2, 1, 3), Err(PadicError::BadPrime(2)));
        assert_eq!(Padic::new(9, 1, 3), Err(PadicError::BadPrime(9)));
        assert!(UnitOneP::new(pa(2, 3)).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(pa(-2, 4).pow_int(0).unwrap().value(), 1);
        let d = pa(-2, 5).pow_int(3).unwrap().add_int(-1);
        assert_eq!(d.valuation(), Valuation::Finite(2));
        let u = unit(-2, 4);
        assert!(u.pow_padic(&pa(0, 4)).unwrap().is_one());
        assert_eq!(u.pow_padic(&pa(1, 4)).unwrap().as_padic().value(), u.as_padic().value());
        assert_eq!(u.pow_padic(&pa(3, 4)).unwrap().as_padic().value(), 73);
    }

    #[test]
    fn qint_basics() {
        let u = unit(-2, 5);
        assert_eq!(u.qint(&pa(1, 5)).unwrap().value(), 1);
        assert_eq!(u.qint(&pa(3, 5)).unwrap().valuation(), Valuation::Finite(1));
        // u = 1 exactly: the q-integer is λ itself
        let one = unit(1, 4);
        assert_eq!(one.qint(&pa(7, 4)).unwrap().value(), 7);
        // negative exponent: (u^-1 - 1)/(u - 1) = -u^-1
        let q = u.qint(&pa(-1, 5)).unwrap();
        assert_eq!(q, u.inv().as_padic().neg());
    }

    #[test]
    fn logarithms() {
        assert!(unit(1, 5).log1p().unwrap().is_zero());
        let u0 = unit(4, 5);
        let sq = UnitOneP(u0.as_padic().pow_int(2).unwrap());
        let l = sq.dlog(&u0).unwrap();
        assert_eq!((l.value(), l.prec()), (2, 4));
        assert_eq!(u0.dlog(&unit(1, 5)), Err(PadicError::TrivialBase));
        assert!(matches!(u0.dlog(&unit(10, 5)), Err(PadicError::BaseTooDeep { .. })));
    }

    #[test]
    fn large_prime_guard_path() {
        // p^(prec+guard) overflows u64 here, forcing the wide fallback.
        let p = 1_000_003;
        let u = UnitOneP::new(Padic::new(p, 1 + p as i128 * 17, 3).unwrap()).unwrap();
        let lam = Padic::new(p, 5, 3).unwrap();
        let mut geo = Padic::zero(p, 3).unwrap();
        let mut pw = Padic::one(p, 3).unwrap();
        for _ in 0..5 {
            geo = geo + pw;
            pw = pw * *u.as_padic();
        }
        assert_eq!(u.qint(&lam).unwrap(), geo);
        let l = u.log1p().unwrap();
        assert_eq!(l.valuation(), Valuation::Finite(1));
    }
}
