use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polyring::{Poly, RatFun};
use crate::scalar::Scalar;
use crate::util::signed_permutations;

/// `e^{kappa u} * poly(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiExp<F> {
    pub kappa: F,
    pub poly: Poly<F>,
}

impl<F: Scalar> QuasiExp<F> {
    pub fn new(kappa: F, poly: Poly<F>) -> Self {
        QuasiExp { kappa, poly }
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// `d/du`: `e^{kappa u} (kappa p + p')`.
    pub fn derivative(&self) -> Self {
        QuasiExp {
            kappa: self.kappa.clone(),
            poly: &self.poly.scale(&self.kappa) + &self.poly.derivative(),
        }
    }

    pub fn to_rat(&self) -> QuasiRat<F> {
        QuasiRat {
            kappa: self.kappa.clone(),
            f: RatFun::from_poly(self.poly.clone()),
        }
    }

    pub fn eval_c64(&self, u: Complex64) -> Complex64 {
        (self.kappa.to_c64() * u).exp() * self.poly.to_c64().eval(&u)
    }
}

/// `e^{kappa u} * f(u)` with `f` rational; closed under differential operators
/// with rational coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiRat<F> {
    pub kappa: F,
    pub f: RatFun<F>,
}

impl<F: Scalar> QuasiRat<F> {
    pub fn is_zero(&self) -> bool {
        self.f.is_zero()
    }

    pub fn derivative(&self) -> Self {
        QuasiRat {
            kappa: self.kappa.clone(),
            f: &self.f.scale(&self.kappa) + &self.f.derivative(),
        }
    }
}

/// Vector-valued `e^{kappa u} * (f_1(u), ..., f_d(u))`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiRatVec<F> {
    pub kappa: F,
    pub comps: Vec<RatFun<F>>,
}

impl<F: Scalar> QuasiRatVec<F> {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RatFun::is_zero)
    }

    pub fn derivative(&self) -> Self {
        QuasiRatVec {
            kappa: self.kappa.clone(),
            comps: self
                .comps
                .iter()
                .map(|f| &f.scale(&self.kappa) + &f.derivative())
                .collect(),
        }
    }
}

/// Determinant of a square matrix of polynomials by permutation expansion.
pub fn poly_det<F: Scalar>(m: &[Vec<Poly<F>>]) -> Poly<F> {
    let n = m.len();
    let mut acc = Poly::zero();
    for (perm, sign) in signed_permutations(n) {
        let mut term = Poly::constant(F::from_i64(sign));
        for (r, &c) in perm.iter().enumerate() {
            term = &term * &m[r][c];
            if term.is_zero() {
                break;
            }
        }
        acc = &acc + &term;
    }
    acc
}

/// Rows `(kappa_i + d)^j p_i`, `j = 0..m-1`, for each input.
pub fn wronskian_matrix<F: Scalar>(fs: &[QuasiExp<F>]) -> Vec<Vec<Poly<F>>> {
    let m = fs.len();
    fs.iter()
        .map(|f| {
            let mut row = Vec::with_capacity(m);
            let mut cur = f.clone();
            for _ in 0..m {
                row.push(cur.poly.clone());
                cur = cur.derivative();
            }
            row
        })
        .collect()
}

/// `Wr(f_1, ..., f_m) = e^{(sum kappa_i) u} det[(kappa_i + d)^j p_i]`.
pub fn wronskian<F: Scalar>(fs: &[QuasiExp<F>]) -> Result<QuasiExp<F>> {
    if fs.is_empty() {
        return Err(Error::InvalidInput("Wronskian of an empty family".into()));
    }
    let kappa = fs.iter().fold(F::zero(), |acc, f| acc + f.kappa.clone());
    Ok(QuasiExp::new(kappa, poly_det(&wronskian_matrix(fs))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn wronskian_examples() {
        let a = QuasiExp::new(rat(2, 1), p(&[1]));
        let b = QuasiExp::new(rat(5, 1), p(&[1]));
        let w = wronskian(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(w, QuasiExp::new(rat(7, 1), p(&[3])));
        assert_eq!(wronskian(std::slice::from_ref(&a)).unwrap(), a);
        let w = wronskian(&[QuasiExp::new(rat(0, 1), p(&[0, 1])), QuasiExp::new(rat(0, 1), p(&[1]))]).unwrap();
        assert_eq!(w.poly, p(&[-1]));
        assert!(wronskian::<Rat>(&[]).is_err());
    }

    #[test]
    fn derivative_rule_matches_finite_difference() {
        let f = QuasiExp::new(rat(1, 2), p(&[3, -1, 2]));
        let u = Complex64::new(0.7, 0.0);
        let h = 1e-6;
        let fd = (f.eval_c64(u + h) - f.eval_c64(u - h)) / (2.0 * h);
        assert!((fd - f.derivative().eval_c64(u)).norm() < 1e-7);
    }
}
