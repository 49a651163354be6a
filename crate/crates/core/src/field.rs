//! Exact coefficient arithmetic: a prime field of runtime order and the
//! arbitrary-precision rationals.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Default prime order for modular arithmetic.
pub const DEFAULT_PRIME: u32 = 32749;

/// Coefficients a [`Chain`](crate::chains::Chain) can carry.
///
/// Chain manipulation only ever adds and negates coefficients, so no
/// field context is needed at this level.
pub trait Coeff: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

impl Coeff for i64 {
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, other: &Self) -> Self {
        self.checked_add(*other)
            .expect("integer coefficient overflow")
    }
    fn neg(&self) -> Self {
        -*self
    }
}

impl Coeff for BigRational {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn neg(&self) -> Self {
        -self
    }
}

/// Element of `GF(q)`; carries its modulus.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.modulus
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl Coeff for Fp {
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.modulus, other.modulus);
        let sum = (self.value as u64 + other.value as u64) % self.modulus as u64;
        Fp {
            value: sum as u32,
            modulus: self.modulus,
        }
    }
    fn neg(&self) -> Self {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        Fp {
            value,
            modulus: self.modulus,
        }
    }
}

/// A field with its arithmetic context.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    type Elem: Coeff;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn lift(&self, value: i64) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// Stable textual descriptor, e.g. `gf:32749` or `rational`.
    fn descriptor(&self) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.add(&b.neg())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("unrecognised field `{0}` (expected gf:<prime> or rational)")]
    Unrecognised(String),
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = q as u64;
    let mut d = 2u64;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    pub fn new(q: u32) -> Result<Self, FieldError> {
        if is_prime(q) {
            Ok(PrimeField { q })
        } else {
            Err(FieldError::NotPrime(q))
        }
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    fn elem(&self, value: u64) -> Fp {
        Fp {
            value: (value % self.q as u64) as u32,
            modulus: self.q,
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { q: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        self.elem(0)
    }
    fn one(&self) -> Fp {
        self.elem(1)
    }
    fn lift(&self, value: i64) -> Fp {
        let q = self.q as i64;
        self.elem(value.rem_euclid(q) as u64)
    }
    fn mul(&self, a: &Fp, b: &Fp) -> Fp {
        self.elem(a.value as u64 * b.value as u64)
    }
    fn inv(&self, a: &Fp) -> Option<Fp> {
        if a.value == 0 {
            return None;
        }
        // Fermat: a^(q-2).
        let (mut base, mut exp, mut acc) = (a.value as u64, self.q as u64 - 2, 1u64);
        let q = self.q as u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % q;
            }
            base = base * base % q;
            exp >>= 1;
        }
        Some(self.elem(acc))
    }
    fn descriptor(&self) -> String {
        format!("gf:{}", self.q)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn lift(&self, value: i64) -> BigRational {
        BigRational::from_integer(value.into())
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if Zero::is_zero(a) {
            None
        } else {
            Some(a.recip())
        }
    }
    fn descriptor(&self) -> String {
        "rational".to_owned()
    }
}

/// Runtime field selector, parsed from `gf:<q>` or `rational`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Prime(PrimeField),
    Rational,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec::Prime(PrimeField::default())
    }
}

impl FromStr for FieldSpec {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("rational") {
            return Ok(FieldSpec::Rational);
        }
        let q = s
            .strip_prefix("gf:")
            .and_then(|q| q.parse::<u32>().ok())
            .ok_or_else(|| FieldError::Unrecognised(s.to_owned()))?;
        Ok(FieldSpec::Prime(PrimeField::new(q)?))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Prime(field) => f.write_str(&field.descriptor()),
            FieldSpec::Rational => f.write_str("rational"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_arithmetic() {
        let f = PrimeField::default();
        let minus_one = f.lift(-1);
        assert_eq!(minus_one.value(), DEFAULT_PRIME - 1);
        assert!(minus_one.add(&f.one()).is_zero());
        for v in [1i64, 2, 17, 32748, -5] {
            let x = f.lift(v);
            assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        }
        assert_eq!(f.inv(&f.zero()), None);
        assert_eq!(PrimeField::new(32750), Err(FieldError::NotPrime(32750)));
    }

    #[test]
    fn rational_arithmetic() {
        let f = RationalField;
        let x = f.lift(3);
        assert_eq!(f.mul(&x, &f.inv(&x).unwrap()), f.one());
        assert!(Coeff::is_zero(&f.sub(&x, &x)));
    }

    #[test]
    fn parse_specs() {
        assert_eq!(
            "gf:32749".parse::<FieldSpec>().unwrap(),
            FieldSpec::default()
        );
        assert_eq!(
            "rational".parse::<FieldSpec>().unwrap(),
            FieldSpec::Rational
        );
        assert!("gf:4".parse::<FieldSpec>().is_err());
        assert!("real".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::default().to_string(), "gf:32749");
    }
}
