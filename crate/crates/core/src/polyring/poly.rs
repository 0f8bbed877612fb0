use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense univariate polynomial, coefficients in ascending degree.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The polynomial `u`.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, degree: usize) -> Self {
        let mut coeffs = vec![F::zero(); degree + 1];
        coeffs[degree] = c;
        Self::from_coeffs(coeffs)
    }

    /// `u - root`.
    pub fn linear(root: &F) -> Self {
        Self::from_coeffs(vec![-root.clone(), F::one()])
    }

    /// `prod (u - r)` over the given roots.
    pub fn from_roots<'a>(roots: impl IntoIterator<Item = &'a F>) -> Self {
        roots
            .into_iter()
            .fold(Self::one(), |acc, r| &acc * &Self::linear(r))
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, u: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * u.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn shift_degree(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![F::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = F::one() / self.lead();
        self.scale(&inv)
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn divmod(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(dn) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if dn < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lead_inv = F::one() / d.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![F::zero(); dn - dd + 1];
        for k in (0..=dn - dd).rev() {
            let c = rem[k + dd].clone() * lead_inv.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            // the leading slot is eliminated by construction
            rem[k + dd] = F::zero();
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Exact quotient; errors if the remainder is not (near) zero.
    pub fn div_exact(&self, d: &Self, tol: f64) -> Result<Self> {
        let (q, r) = self.divmod(d)?;
        let scale = self.max_abs().max(1.0);
        if r.coeffs.iter().all(|c| c.near_zero(scale, tol)) {
            Ok(q)
        } else {
            Err(Error::Construction("polynomial division is not exact".into()))
        }
    }

    /// Monic gcd. Meaningful only over exact fields.
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.divmod(&y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        x.monic()
    }

    /// Coefficients of `self` in powers of `(u - b)`.
    pub fn taylor_at(&self, b: &F) -> Vec<F> {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = a[j].clone() + b.clone() * a[j + 1].clone();
                a[j] = t;
            }
        }
        a
    }

    /// Multiplicity of `b` as a root, up to `|p(b)| <= tol * scale` for inexact fields.
    pub fn root_multiplicity(&self, b: &F, tol: f64) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let t = self.taylor_at(b);
        let scale = t.iter().map(|c| c.abs_f64()).fold(0.0, f64::max);
        t.iter().take_while(|c| c.near_zero(scale, tol)).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs_f64()).fold(0.0, f64::max)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    pub fn to_c64(&self) -> Poly<Complex64> {
        self.map(|c| c.to_c64())
    }

    /// Composition `self(q(u))`.
    pub fn compose(&self, q: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * q) + &Self::constant(c.clone()))
    }

    /// Approximate equality of coefficient vectors, relative to the largest coefficient.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs()).max(1.0);
        (self - other).coeffs.iter().all(|c| c.near_zero(scale, tol))
    }
}

/// First `terms` coefficients of the power series `a / b` (`b[0] != 0`).
pub fn series_div<F: Scalar>(a: &[F], b: &[F], terms: usize) -> Vec<F> {
    let get = |v: &[F], k: usize| v.get(k).cloned().unwrap_or_else(F::zero);
    let inv0 = F::one() / get(b, 0);
    let mut out: Vec<F> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = get(a, k);
        for j in 1..=k {
            acc = acc - get(b, j) * out[k - j].clone();
        }
        out.push(acc * inv0.clone());
    }
    out
}

impl<F: Scalar> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, rhs: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<F: Scalar> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, rhs: &Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(out)
    }
}

impl<F: Scalar> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Scalar> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, rhs: Poly<F>) -> Poly<F> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}
