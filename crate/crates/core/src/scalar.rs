//! Exact rational and Gaussian-rational scalars.
//!
//! Rationals are `num_rational::BigRational`, which is kept in canonical form
//! (reduced, positive denominator) after every operation. Complex values pair
//! two of them. Magnitudes are compared through [`ComplexRational::norm_sq`] so
//! that the exact layer never needs a square root.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Binary64 complex number used wherever values are genuinely approximate.
pub type ComplexFloat = num_complex::Complex64;

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"7"`, `"-3/4"`, `"0.25"` or `"1.5e-3"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::parse(s, "empty number"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num = parse_decimal(n.trim()).ok_or_else(|| Error::parse(s, "bad numerator"))?;
        let den = parse_decimal(d.trim()).ok_or_else(|| Error::parse(s, "bad denominator"))?;
        if den.is_zero() {
            return Err(Error::parse(s, "zero denominator"));
        }
        return Ok(num / den);
    }
    parse_decimal(t).ok_or_else(|| Error::parse(s, "not a rational number"))
}

fn parse_decimal(t: &str) -> Option<BigRational> {
    let (mantissa, exp) = match t.find(['e', 'E']) {
        Some(k) => (&t[..k], t[k + 1..].parse::<i32>().ok()?),
        None => (t, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(n);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest binary64 value, ties to even. Overflow is an error.
pub fn rational_to_f64(r: &BigRational) -> Result<f64> {
    if r.is_zero() {
        return Ok(0.0);
    }
    let negative = r.is_negative();
    let n = r.numer().abs();
    let d = r.denom().clone();

    // floor(log2(n/d))
    let mut e = n.bits() as i64 - d.bits() as i64;
    let ge = if e >= 0 { n >= (&d << e as usize) } else { (&n << (-e) as usize) >= d };
    if !ge {
        e -= 1;
    }
    if e > 1023 {
        return Err(Error::FloatOverflow(format_rational(r)));
    }
    // exponent of one unit in the last place, clamped at the subnormal floor
    let ulp = (e - 52).max(-1074);
    let (num, den) = if ulp <= 0 { (n << (-ulp) as usize, d) } else { (n, d << ulp as usize) };
    let (mut q, rem) = num.div_rem(&den);
    let twice = &rem << 1usize;
    if twice > den || (twice == den && q.is_odd()) {
        q += 1u32;
    }
    let q = q.to_f64().expect("quotient fits in 54 bits");
    let ulp = ulp as i32;
    let v = if ulp >= -1022 { q * 2f64.powi(ulp) } else { q * 2f64.powi(ulp + 200) * 2f64.powi(-200) };
    if v.is_infinite() {
        return Err(Error::FloatOverflow(format_rational(r)));
    }
    Ok(if negative { -v } else { v })
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (n >> shift as usize).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural logarithm of a positive rational of any size.
pub fn ln_rational(r: &BigRational) -> f64 {
    debug_assert!(r.is_positive());
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

/// Bit length of the larger of numerator and denominator.
pub fn rational_bits(r: &BigRational) -> u64 {
    r.numer().bits().max(r.denom().bits())
}

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ComplexRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl ComplexRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        Self { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// Exact `re² + im²`.
    pub fn norm_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self { re: &self.re * k, im: &self.im * k }
    }

    /// Componentwise correctly rounded conversion.
    pub fn to_float(&self) -> Result<ComplexFloat> {
        Ok(ComplexFloat::new(rational_to_f64(&self.re)?, rational_to_f64(&self.im)?))
    }

    pub fn from_float(z: ComplexFloat) -> Self {
        Self { re: rational_from_f64(z.re), im: rational_from_f64(z.im) }
    }

    /// `|z|` as a float, via the exact squared modulus.
    pub fn abs_f64(&self) -> f64 {
        let n = self.norm_sq();
        if n.is_zero() {
            return 0.0;
        }
        match rational_to_f64(&n) {
            Ok(v) if v.is_normal() => v.sqrt(),
            _ => (0.5 * ln_rational(&n)).exp(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn max_bits(&self) -> u64 {
        rational_bits(&self.re).max(rational_bits(&self.im))
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", format_rational(&self.re));
        }
        let im = format!("{}i", format_rational(&self.im.abs()));
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im}")
            } else {
                write!(f, "{im}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{sign}{im}", format_rational(&self.re))
        }
    }
}

impl FromStr for ComplexRational {
    type Err = Error;

    /// Accepts `"3/4"`, `"-1i"`, `"i"`, `"1/4-1i"`, `"0.5+2/3i"`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(Error::parse(s, "empty coefficient"));
        }
        let Some(body) = t.strip_suffix('i') else {
            return Ok(Self::real(parse_rational(&t).map_err(|_| Error::parse(s, "bad real part"))?));
        };
        // split at the last sign that is neither leading nor an exponent sign
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re_str, im_str) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im = match im_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other).map_err(|_| Error::parse(s, "bad imaginary part"))?,
        };
        let re = if re_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(re_str).map_err(|_| Error::parse(s, "bad real part"))?
        };
        Ok(Self { re, im })
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<'a> $tr<&'a ComplexRational> for &'a ComplexRational {
            type Output = ComplexRational;
            fn $m(self, rhs: &'a ComplexRational) -> ComplexRational {
                let f: fn(&ComplexRational, &ComplexRational) -> ComplexRational = $body;
                f(self, rhs)
            }
        }
        impl $tr<ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $m(self, rhs: ComplexRational) -> ComplexRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $m(self, rhs: &'a ComplexRational) -> ComplexRational {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| ComplexRational { re: &a.re + &b.re, im: &a.im + &b.im });
forward_binop!(Sub, sub, |a, b| ComplexRational { re: &a.re - &b.re, im: &a.im - &b.im });
forward_binop!(Mul, mul, |a, b| ComplexRational {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl AddAssign<&ComplexRational> for ComplexRational {
    fn add_assign(&mut self, rhs: &ComplexRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ComplexRational> for ComplexRational {
    fn sub_assign(&mut self, rhs: &ComplexRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ComplexRational> for ComplexRational {
    fn mul_assign(&mut self, rhs: &ComplexRational) {
        *self = &*self * rhs;
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { re: -self.re, im: -self.im }
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational { re: -&self.re, im: -&self.im }
    }
}

/// Exact JSON form of a rational: `{"num": "...", "den": "..."}`.
pub fn rational_json(r: &BigRational) -> serde_json::Value {
    serde_json::json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

#[derive(Serialize, Deserialize)]
struct RationalRepr {
    num: String,
    den: String,
}

impl RationalRepr {
    fn from_rational(r: &BigRational) -> Self {
        Self { num: r.numer().to_string(), den: r.denom().to_string() }
    }

    fn into_rational<E: de::Error>(self) -> std::result::Result<BigRational, E> {
        let num = BigInt::from_str(&self.num).map_err(E::custom)?;
        let den = BigInt::from_str(&self.den).map_err(E::custom)?;
        if den.sign() == Sign::NoSign {
            return Err(E::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}

impl Serialize for ComplexRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ComplexRational", 2)?;
        s.serialize_field("re", &RationalRepr::from_rational(&self.re))?;
        s.serialize_field("im", &RationalRepr::from_rational(&self.im))?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for ComplexRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            re: RationalRepr,
            im: RationalRepr,
        }
        let r = Repr::deserialize(deserializer)?;
        Ok(Self { re: r.re.into_rational()?, im: r.im.into_rational()? })
    }
}
