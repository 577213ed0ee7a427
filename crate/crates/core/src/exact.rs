//! Exact scalars: big rationals times an integer power of π, and Gaussian
//! rationals for polynomial coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact complex coefficient `a + b i` with `a, b ∈ Q`.
pub type GaussRat = Complex<BigRational>;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn gauss(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

pub fn gauss_real(re: BigRational) -> GaussRat {
    Complex::new(re, BigRational::zero())
}

pub fn gauss_to_c64(c: &GaussRat) -> Complex64 {
    Complex64::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of a non-negative rational, if it is rational.
pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    let n = exact_isqrt(r.numer())?;
    let d = exact_isqrt(r.denom())?;
    Some(BigRational::new(n, d))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.25"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{ip}{fp}0").parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), fp.len() + 1);
    let r = BigRational::new(digits, den);
    Ok(if neg { -r } else { r })
}

pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `rational · π^pi_pow`, kept in canonical form (zero always has `pi_pow = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    rational: BigRational,
    pi_pow: i32,
}

impl ExactScalar {
    pub fn new(rational: BigRational, pi_pow: i32) -> Self {
        let pi_pow = if rational.is_zero() { 0 } else { pi_pow };
        Self { rational, pi_pow }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), 0)
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), 0)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(rat(num, den), 0)
    }

    pub fn pi_power(k: i32) -> Self {
        Self::new(BigRational::one(), k)
    }

    pub fn rational(&self) -> &BigRational {
        &self.rational
    }

    pub fn pi_pow(&self) -> i32 {
        self.pi_pow
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.rational.is_positive()
    }

    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.rational) * std::f64::consts::PI.powi(self.pi_pow)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_pow != other.pi_pow {
            return Err(Error::PiPowerMismatch(self.pi_pow, other.pi_pow));
        }
        Ok(Self::new(&self.rational + &other.rational, self.pi_pow))
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero exact scalar");
        Self::new(self.rational.recip(), -self.pi_pow)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::new(&self.rational * r, self.pi_pow)
    }

    /// Exact square root when `pi_pow` is even and the rational part is a
    /// perfect square.
    pub fn exact_sqrt(&self) -> Option<Self> {
        if self.rational.is_negative() || self.pi_pow % 2 != 0 {
            return None;
        }
        Some(Self::new(rat_sqrt(&self.rational)?, self.pi_pow / 2))
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_add(rhs).expect("inhomogeneous exact sum")
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        &self + &rhs
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(-&self.rational, self.pi_pow)
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        self + &(-rhs)
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar::new(&self.rational * &rhs.rational, self.pi_pow + rhs.pi_pow)
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self * &rhs.recip()
    }
}

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |acc, x| acc + x)
    }
}

/// Ordered only when both sides carry the same power of π (or one is zero
/// and the other's sign decides).
impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.pi_pow == other.pi_pow || self.is_zero() || other.is_zero() {
            Some(self.rational.cmp(&other.rational))
        } else {
            None
        }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = format_rational(&self.rational);
        match self.pi_pow {
            0 => write!(f, "{r}"),
            1 => write!(f, "{r}·π"),
            k => write!(f, "{r}·π^{k}"),
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ExactScalar", 4)?;
        s.serialize_field("num", &self.rational.numer().to_string())?;
        s.serialize_field("den", &self.rational.denom().to_string())?;
        s.serialize_field("pi_pow", &self.pi_pow)?;
        s.serialize_field("approx", &self.to_f64())?;
        s.end()
    }
}

#[derive(Deserialize)]
struct ExactScalarRepr {
    num: String,
    den: String,
    pi_pow: i32,
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = ExactScalarRepr::deserialize(deserializer)?;
        let num: BigInt = repr.num.parse().map_err(de::Error::custom)?;
        let den: BigInt = repr.den.parse().map_err(de::Error::custom)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(ExactScalar::new(BigRational::new(num, den), repr.pi_pow))
    }
}

/// Gaussian rational times a power of π: the value of an exact inner product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactComplex {
    value: GaussRat,
    pi_pow: i32,
}

impl ExactComplex {
    pub fn new(value: GaussRat, pi_pow: i32) -> Self {
        let pi_pow = if value.is_zero() { 0 } else { pi_pow };
        Self { value, pi_pow }
    }

    pub fn zero() -> Self {
        Self::new(GaussRat::zero(), 0)
    }

    pub fn value(&self) -> &GaussRat {
        &self.value
    }

    pub fn pi_pow(&self) -> i32 {
        self.pi_pow
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn re(&self) -> ExactScalar {
        ExactScalar::new(self.value.re.clone(), self.pi_pow)
    }

    pub fn im(&self) -> ExactScalar {
        ExactScalar::new(self.value.im.clone(), self.pi_pow)
    }

    /// The real part, provided the imaginary part vanishes.
    pub fn as_real(&self) -> Option<ExactScalar> {
        self.value.im.is_zero().then(|| self.re())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.value.conj(), self.pi_pow)
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Self::new(
            self.value.scale(s.rational().clone()),
            self.pi_pow + s.pi_pow(),
        )
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.pi_pow != other.pi_pow {
            return Err(Error::PiPowerMismatch(self.pi_pow, other.pi_pow));
        }
        Ok(Self::new(&self.value + &other.value, self.pi_pow))
    }

    pub fn to_c64(&self) -> Complex64 {
        gauss_to_c64(&self.value) * std::f64::consts::PI.powi(self.pi_pow)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re = format_rational(&self.value.re);
        let im = format_rational(&self.value.im);
        write!(f, "({re} + {im}i)·π^{}", self.pi_pow)
    }
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.to_c64();
        let mut s = serializer.serialize_struct("ExactComplex", 5)?;
        s.serialize_field("re", &format_rational(&self.value.re))?;
        s.serialize_field("im", &format_rational(&self.value.im))?;
        s.serialize_field("pi_pow", &self.pi_pow)?;
        s.serialize_field("approx_re", &z.re)?;
        s.serialize_field("approx_im", &z.im)?;
        s.end()
    }
}
