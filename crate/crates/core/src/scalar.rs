//! Scalar fields used throughout the crate.
//!
//! Construction work happens over exact fields: [`Rat`] (big rationals) or
//! [`GaussRat`] (Gaussian rationals, used as soon as an exponent or an
//! evaluation point has a nonzero imaginary part). Spectral work happens over
//! [`Complex64`]. All three implement [`Scalar`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type GaussRat = Complex<BigRational>;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether equality and `is_zero` are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    fn to_c64(&self) -> Complex64;

    fn abs_f64(&self) -> f64 {
        self.to_c64().norm()
    }

    /// `|x| <= tol * scale` for inexact fields, `x == 0` otherwise.
    fn near_zero(&self, scale: f64, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.abs_f64() <= tol * scale
        }
    }
}

/// Exact fields that can be read from and written to the `p/q+r/s i` notation.
pub trait ExactField: Scalar {
    /// Embeds a Gaussian rational, failing when it does not belong to the field.
    fn from_gauss(z: &GaussRat) -> Option<Self>;

    fn to_gauss(&self) -> GaussRat;
}

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }

    fn abs_f64(&self) -> f64 {
        rat_to_f64(self).abs()
    }
}

impl ExactField for Rat {
    fn from_gauss(z: &GaussRat) -> Option<Self> {
        z.im.is_zero().then(|| z.re.clone())
    }

    fn to_gauss(&self) -> GaussRat {
        Complex::new(self.clone(), Rat::zero())
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        Complex::new(Rat::from_i64(v), Rat::zero())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl ExactField for GaussRat {
    fn from_gauss(z: &GaussRat) -> Option<Self> {
        Some(z.clone())
    }

    fn to_gauss(&self) -> GaussRat {
        self.clone()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator/denominator beyond f64 range: divide as big integers first
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gauss(re: Rat, im: Rat) -> GaussRat {
    Complex::new(re, im)
}

/// `|a - b| <= tol * max(|a|, |b|, 1)`.
pub fn approx_eq<F: Scalar>(a: &F, b: &F, tol: f64) -> bool {
    let scale = a.abs_f64().max(b.abs_f64()).max(1.0);
    (a.clone() - b.clone()).near_zero(scale, tol)
}

fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    let s = s.strip_prefix('+').unwrap_or(s);
    Rat::from_str(s).map_err(|_| Error::Parse(format!("bad rational `{s}`")))
}

/// Parses `p/q`, `p/q+r/s i`, `r/s i`, `i`, `-i`, ... into a Gaussian rational.
pub fn parse_gauss(input: &str) -> Result<GaussRat> {
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty scalar".into()));
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok(gauss(parse_rat(&s)?, Rat::zero()));
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k)
        .next_back();
    let (re, im) = match split {
        Some(k) => (parse_rat(&body[..k])?, &body[k..]),
        None => (Rat::zero(), body),
    };
    let im = match im {
        "" | "+" => Rat::one(),
        "-" => -Rat::one(),
        other => parse_rat(other)?,
    };
    Ok(gauss(re, im))
}

pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn format_gauss(z: &GaussRat) -> String {
    if z.im.is_zero() {
        return format_rat(&z.re);
    }
    let im = if z.im.abs().is_one() {
        String::new()
    } else {
        format_rat(&z.im.abs())
    };
    let sign = if z.im.is_negative() { "-" } else { "+" };
    if z.re.is_zero() {
        let lead = if z.im.is_negative() { "-" } else { "" };
        format!("{lead}{im}i")
    } else {
        format!("{}{sign}{im}i", format_rat(&z.re))
    }
}

pub fn format_exact<F: ExactField>(x: &F) -> String {
    format_gauss(&x.to_gauss())
}
