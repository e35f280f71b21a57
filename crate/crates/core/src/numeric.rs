//! Exact integer and rational primitives.
//!
//! [`Natural`] is the interchange type for every big integer that crosses a
//! process boundary: it parses and prints plain decimal digits only (no sign,
//! no separators, no radix prefix). [`ExactRational`] is always stored in
//! lowest terms with a positive denominator, so equality is structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Deref, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Natural(BigUint);

impl Natural {
    pub fn zero() -> Self {
        Natural(BigUint::zero())
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.0.clone())
    }
}

impl Deref for Natural {
    type Target = BigUint;

    fn deref(&self) -> &BigUint {
        &self.0
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural(v)
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural(BigUint::from(v))
    }
}

impl PartialEq<u64> for Natural {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl From<u128> for Natural {
    fn from(v: u128) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<Natural> for BigUint {
    fn from(v: Natural) -> Self {
        v.0
    }
}

impl FromStr for Natural {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("not a decimal natural number: {s:?}")));
        }
        // Digits-only input cannot fail to parse.
        Ok(Natural(
            BigUint::parse_bytes(s.as_bytes(), 10).expect("validated decimal digits"),
        ))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Floor square root by Newton iteration: the largest `r` with `r² ≤ n`.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // 2^ceil(bits/2) is always an upper bound, and Newton decreases
    // monotonically from any upper bound until it reaches the floor root.
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u32;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Smallest `r` with `r² ≥ n`.
pub fn ceil_sqrt(n: &BigUint) -> BigUint {
    let r = isqrt(n);
    if &r * &r == *n {
        r
    } else {
        r + 1u32
    }
}

const fn square_residues<const M: usize>() -> [bool; M] {
    let mut table = [false; M];
    let mut i = 0;
    while i < M {
        table[(i * i) % M] = true;
        i += 1;
    }
    table
}

static SQ64: [bool; 64] = square_residues::<64>();
static SQ63: [bool; 63] = square_residues::<63>();
static SQ65: [bool; 65] = square_residues::<65>();
static SQ11: [bool; 11] = square_residues::<11>();

/// Quadratic-residue screen. Never rejects a square.
#[inline]
fn passes_residue_filter(low: u64, rem_45045: u64) -> bool {
    SQ64[(low & 63) as usize]
        && SQ63[(rem_45045 % 63) as usize]
        && SQ65[(rem_45045 % 65) as usize]
        && SQ11[(rem_45045 % 11) as usize]
}

/// Returns the exact square root when `n` is a perfect square.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    let low = n.iter_u64_digits().next().unwrap_or(0);
    // 45045 = 63 * 65 * 11
    let rem = (n % 45045u32).to_u64().unwrap_or(0);
    if !passes_residue_filter(low, rem) {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

/// Floor square root of a `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    // f64 gets within a few ulps; the correction loops make it exact.
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn is_perfect_square_u128(n: u128) -> Option<u128> {
    if !passes_residue_filter(n as u64, (n % 45045) as u64) {
        return None;
    }
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    HalfUp,
}

/// Integer division with an explicit rounding rule.
pub fn round_div(a: &BigUint, b: &BigUint, mode: Rounding) -> Result<BigUint> {
    if b.is_zero() {
        return Err(Error::InvalidArgument("division by zero".into()));
    }
    Ok(match mode {
        Rounding::Floor => a / b,
        Rounding::HalfUp => ((a << 1u32) + b) / (b << 1u32),
    })
}

/// Exact rational number in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        Ok(ExactRational(BigRational::new(numer, denom)))
    }

    pub fn from_integer(v: BigInt) -> Self {
        ExactRational(BigRational::from_integer(v))
    }

    pub fn from_natural(v: &BigUint) -> Self {
        Self::from_integer(BigInt::from(v.clone()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `a`, `a/b`, `-a/b`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let parse_int = |t: &str| -> Result<BigInt> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<BigInt>().map_err(|_| bad())
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse_int(d)?;
                if d.is_negative() {
                    return Err(bad());
                }
                ExactRational::new(parse_int(n)?, d)
            }
            None => Ok(ExactRational::from_integer(parse_int(s)?)),
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }

        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the integer types.
forward_binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

/// Compares `a/b` with `c/d` by cross-multiplying (b, d > 0).
pub fn cmp_fractions(a: &BigInt, b: &BigInt, c: &BigInt, d: &BigInt) -> Ordering {
    (a * d).cmp(&(c * b))
}
