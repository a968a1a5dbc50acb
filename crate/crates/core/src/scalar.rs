//! Exact coefficient fields: the rationals and prime fields.
//!
//! Rationals stay on a machine-word fast path and promote to big integers
//! only when an operation would overflow, so equality is always structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest prime modulus accepted, so that products of residues fit in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "Q")]
    Rational,
    #[serde(rename = "Fp")]
    Prime(u64),
}

impl Field {
    pub fn prime(q: u64) -> Result<Self> {
        if q < 2 || q >= MAX_PRIME {
            return Err(Error::InvalidField(format!("modulus {q} out of range")));
        }
        let mut k = 2;
        while k * k <= q {
            if q % k == 0 {
                return Err(Error::InvalidField(format!("{q} is not prime")));
            }
            k += 1;
        }
        Ok(Field::Prime(q))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(q) => *q,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(Rat::Small(Ratio::from_integer(n))),
            Field::Prime(q) => Scalar::Fp {
                value: n.rem_euclid(q as i64) as u64,
                modulus: q,
            },
        }
    }

    pub fn from_ratio(&self, numer: i64, denom: i64) -> Option<Scalar> {
        if denom == 0 {
            return None;
        }
        match *self {
            Field::Rational => Some(Scalar::Q(Rat::from_big(BigRational::new(
                BigInt::from(numer),
                BigInt::from(denom),
            )))),
            Field::Prime(_) => {
                let d = self.from_i64(denom);
                if d.is_zero() {
                    return None;
                }
                Some(&self.from_i64(numer) * &d.inv()?)
            }
        }
    }

    /// Parses `"a"` or `"a/b"`; in a prime field both are read modulo q.
    pub fn parse(&self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::ParseScalar(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Rational => Ok(Scalar::Q(Rat::from_big(BigRational::new(num, den)))),
            Field::Prime(q) => {
                let modulus = BigInt::from(q);
                let reduce = |x: &BigInt| x.mod_floor(&modulus).to_u64().unwrap();
                let n = Scalar::Fp {
                    value: reduce(&num),
                    modulus: q,
                };
                let d = Scalar::Fp {
                    value: reduce(&den),
                    modulus: q,
                };
                Ok(&n * &d.inv().ok_or_else(bad)?)
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(q) => write!(f, "F{q}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rat {
    Small(Ratio<i64>),
    Big(Box<BigRational>),
}

impl Rat {
    fn from_big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(b) => (**b).clone(),
        }
    }

    fn small(r: Option<Ratio<i64>>) -> Option<Rat> {
        r.filter(|x| *x.numer() != i64::MIN).map(Rat::Small)
    }

    fn add(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = Rat::small(a.checked_add(b)) {
                return r;
            }
        }
        Rat::from_big(self.to_big() + other.to_big())
    }

    fn sub(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = Rat::small(a.checked_sub(b)) {
                return r;
            }
        }
        Rat::from_big(self.to_big() - other.to_big())
    }

    fn mul(&self, other: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, other) {
            if let Some(r) = Rat::small(a.checked_mul(b)) {
                return r;
            }
        }
        Rat::from_big(self.to_big() * other.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(a) => Rat::Small(-a),
            Rat::Big(b) => Rat::from_big(-(**b).clone()),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Rat::Small(a) => a.is_zero(),
            Rat::Big(b) => b.is_zero(),
        }
    }

    fn inv(&self) -> Option<Rat> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rat::Small(a) => Rat::small(Some(a.recip())).unwrap_or_else(|| Rat::from_big(self.to_big().recip())),
            Rat::Big(b) => Rat::from_big(b.recip()),
        })
    }
}

/// An element of an exact field.
///
/// Arithmetic between scalars of different fields is a logic error and
/// panics; every public constructor of spaces and maps checks fields first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rat),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(Rat::Small(r)) => r.is_one(),
            Scalar::Q(Rat::Big(_)) => false,
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => r.inv().map(Scalar::Q),
            Scalar::Fp { value, modulus } => {
                if *value == 0 {
                    return None;
                }
                // Fermat: a^(q-2)
                let (mut base, mut exp, mut acc) = (*value, *modulus - 2, 1u64);
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % modulus;
                    }
                    base = base * base % modulus;
                    exp >>= 1;
                }
                Some(Scalar::Fp {
                    value: acc,
                    modulus: *modulus,
                })
            }
        }
    }

    /// `(-1)^k` in the field of `self`.
    pub fn sign(field: Field, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            field.one()
        } else {
            field.from_i64(-1)
        }
    }

    /// Numerator and denominator as big integers (prime-field residues have denominator 1).
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        match self {
            Scalar::Q(r) => {
                let b = r.to_big();
                (b.numer().clone(), b.denom().clone())
            }
            Scalar::Fp { value, .. } => (BigInt::from(*value), BigInt::one()),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Q(r) => r.to_big().is_negative(),
            Scalar::Fp { .. } => false,
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.add(b)),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp {
                    value: (a + b) % p,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.sub(b)),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp {
                    value: (a + p - b) % p,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a.mul(b)),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp {
                    value: a * b % p,
                    modulus: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(a.neg()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(Rat::Small(r)) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Q(Rat::Small(r)) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Q(Rat::Big(r)) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Q(Rat::Big(r)) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}
