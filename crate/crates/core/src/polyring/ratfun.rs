use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyring::poly::{series_div, Poly};
use crate::scalar::Scalar;

/// Scalar rational function `num / den` with a monic denominator.
///
/// Over exact fields numerator and denominator are kept coprime. Over
/// floating-point fields no cancellation is attempted.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFun<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Scalar> RatFun<F> {
    pub fn new(num: Poly<F>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (num, den) = if F::EXACT {
            let g = Poly::gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                (num.divmod(&g).unwrap().0, den.divmod(&g).unwrap().0)
            }
        } else {
            (num, den)
        };
        let inv = F::one() / den.lead();
        RatFun {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    /// `c / (u - b)`.
    pub fn simple_pole(c: F, b: &F) -> Self {
        RatFun {
            num: Poly::constant(c),
            den: Poly::linear(b),
        }
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, u: &F) -> Option<F> {
        let d = self.den.eval(u);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(u) / d)
        }
    }

    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::normalized(num, &self.den * &self.den)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    /// Numerator after rewriting over the given denominator; fails when
    /// `target` is not a multiple of the current denominator.
    pub fn numerator_over(&self, target: &Poly<F>, tol: f64) -> Result<Poly<F>> {
        let scaled = &self.num * target;
        scaled.div_exact(&self.den, tol).map_err(|_| {
            Error::Construction("denominator does not divide the requested common denominator".into())
        })
    }

    /// Coefficients of `u^0, u^-1, ..., u^-(terms-1)` in the expansion at infinity.
    pub fn expand_at_infinity(&self, terms: usize) -> Result<Vec<F>> {
        let Some(dn) = self.num.degree() else {
            return Ok(vec![F::zero(); terms]);
        };
        let dd = self.den.degree().unwrap();
        if dn > dd {
            return Err(Error::NotQuasiExponential(format!(
                "coefficient grows like u^{} at infinity",
                dn - dd
            )));
        }
        let rev = |p: &Poly<F>| -> Vec<F> { p.coeffs().iter().rev().cloned().collect() };
        // num/den = u^(dn-dd) * series(w), w = 1/u
        let shift = dd - dn;
        let series = series_div(&rev(&self.num), &rev(&self.den), terms.saturating_sub(shift));
        let mut out = vec![F::zero(); shift.min(terms)];
        out.extend(series);
        out.truncate(terms);
        Ok(out)
    }

    /// Laurent expansion at `b`: returns the lowest exponent and the first
    /// `terms` coefficients starting from it.
    pub fn laurent_at(&self, b: &F, terms: usize, tol: f64) -> (i64, Vec<F>) {
        if self.is_zero() {
            return (0, vec![F::zero(); terms]);
        }
        let kn = self.num.root_multiplicity(b, tol);
        let kd = self.den.root_multiplicity(b, tol);
        let tn = self.num.taylor_at(b);
        let td = self.den.taylor_at(b);
        let series = series_div(&tn[kn..], &td[kd..], terms);
        (kn as i64 - kd as i64, series)
    }

    /// Order of the pole at `b` (0 when regular there).
    pub fn pole_order_at(&self, b: &F, tol: f64) -> usize {
        if self.is_zero() {
            return 0;
        }
        let kn = self.num.root_multiplicity(b, tol);
        let kd = self.den.root_multiplicity(b, tol);
        kd.saturating_sub(kn)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> RatFun<G> {
        RatFun::normalized(self.num.map(f), self.den.map(f))
    }

    pub fn to_c64(&self) -> RatFun<Complex64> {
        self.map(|c| c.to_c64())
    }
}

impl<F: Scalar> Add for &RatFun<F> {
    type Output = RatFun<F>;
    fn add(self, rhs: &RatFun<F>) -> RatFun<F> {
        if self.den == rhs.den {
            return RatFun::normalized(&self.num + &rhs.num, self.den.clone());
        }
        if F::EXACT {
            let g = Poly::gcd(&self.den, &rhs.den);
            let ml = rhs.den.divmod(&g).unwrap().0;
            let mr = self.den.divmod(&g).unwrap().0;
            let num = &(&self.num * &ml) + &(&rhs.num * &mr);
            RatFun::normalized(num, &self.den * &ml)
        } else {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            RatFun::normalized(num, &self.den * &rhs.den)
        }
    }
}

impl<F: Scalar> Neg for &RatFun<F> {
    type Output = RatFun<F>;
    fn neg(self) -> RatFun<F> {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<F: Scalar> Sub for &RatFun<F> {
    type Output = RatFun<F>;
    fn sub(self, rhs: &RatFun<F>) -> RatFun<F> {
        self + &(-rhs)
    }
}

impl<F: Scalar> Mul for &RatFun<F> {
    type Output = RatFun<F>;
    fn mul(self, rhs: &RatFun<F>) -> RatFun<F> {
        RatFun::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn reduces_to_lowest_terms() {
        // (u^2 - 1) / (u - 1) = u + 1
        let r = RatFun::new(p(&[-1, 0, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r.num(), &p(&[1, 1]));
        assert_eq!(r.den(), &p(&[1]));
        let a = RatFun::simple_pole(rat(1, 1), &rat(0, 1));
        let b = RatFun::simple_pole(rat(-1, 1), &rat(0, 1));
        assert!((&a + &b).is_zero());
        assert!(RatFun::new(p(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn derivative_quotient_rule() {
        // d/du 1/u = -1/u^2
        let r = RatFun::simple_pole(rat(1, 1), &rat(0, 1)).derivative();
        assert_eq!(r, RatFun::new(p(&[-1]), p(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn expansions() {
        // (u + 3)/(u - 1) = 1 + 4/u + 4/u^2 + ...
        let r = RatFun::new(p(&[3, 1]), p(&[-1, 1])).unwrap();
        assert_eq!(r.expand_at_infinity(3).unwrap(), vec![rat(1, 1), rat(4, 1), rat(4, 1)]);
        let grow = RatFun::from_poly(p(&[0, 1]));
        assert!(matches!(grow.expand_at_infinity(2), Err(Error::NotQuasiExponential(_))));
        // 1/(u(u-1)) at 0: -1/u - 1 - u ...
        let r = RatFun::new(p(&[1]), p(&[0, -1, 1])).unwrap();
        let (k, s) = r.laurent_at(&rat(0, 1), 2, 0.0);
        assert_eq!(k, -1);
        assert_eq!(s, vec![rat(-1, 1), rat(-1, 1)]);
        assert_eq!(r.pole_order_at(&rat(1, 1), 0.0), 1);
        assert_eq!(r.pole_order_at(&rat(2, 1), 0.0), 0);
    }
}
