use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::polyring::{Poly, RatFun};
use crate::scalar::Scalar;

/// Matrix-valued rational function `N(u) / d(u)`: a matrix polynomial over a
/// single monic scalar denominator.
///
/// The numerator is stored as its coefficient matrices in ascending degree,
/// with trailing zero matrices trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct MatRatFun<F> {
    rows: usize,
    cols: usize,
    num: Vec<ExactMatrix<F>>,
    den: Poly<F>,
}

impl<F: Scalar> MatRatFun<F> {
    pub fn new(rows: usize, cols: usize, num: Vec<ExactMatrix<F>>, den: Poly<F>) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.iter().any(|m| m.rows() != rows || m.cols() != cols) {
            return Err(Error::InvalidInput("numerator coefficient has the wrong shape".into()));
        }
        Ok(Self::normalized(rows, cols, num, den))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatRatFun {
            rows,
            cols,
            num: Vec::new(),
            den: Poly::one(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::constant(ExactMatrix::identity(n))
    }

    pub fn constant(m: ExactMatrix<F>) -> Self {
        Self::normalized(m.rows(), m.cols(), vec![m], Poly::one())
    }

    /// `r(u) * Id_n`.
    pub fn scalar(r: &RatFun<F>, n: usize) -> Self {
        let id = ExactMatrix::identity(n);
        let num = r.num().coeffs().iter().map(|c| id.scale(c)).collect();
        Self::normalized(n, n, num, r.den().clone())
    }

    /// `m / (u - b)`.
    pub fn simple_pole(m: ExactMatrix<F>, b: &F) -> Self {
        Self::normalized(m.rows(), m.cols(), vec![m], Poly::linear(b))
    }

    fn normalized(rows: usize, cols: usize, mut num: Vec<ExactMatrix<F>>, mut den: Poly<F>) -> Self {
        while num.last().is_some_and(ExactMatrix::is_zero) {
            num.pop();
        }
        if num.is_empty() {
            return Self::zeros(rows, cols);
        }
        if F::EXACT && !den.is_constant() {
            let mut g = den.monic();
            'outer: for i in 0..rows {
                for j in 0..cols {
                    let entry = Poly::from_coeffs(num.iter().map(|m| m.get(i, j).clone()).collect());
                    g = Poly::gcd(&g, &entry);
                    if g.is_constant() {
                        break 'outer;
                    }
                }
            }
            if !g.is_constant() {
                num = matpoly_div_exact(&num, &g);
                den = den.divmod(&g).expect("nonzero gcd").0;
            }
        }
        let lead = den.lead();
        if !lead.is_one() {
            let inv = F::one() / lead;
            num = num.iter().map(|m| m.scale(&inv)).collect();
            den = den.scale(&inv);
        }
        MatRatFun { rows, cols, num, den }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Numerator coefficient matrices, ascending in `u`.
    pub fn num(&self) -> &[ExactMatrix<F>] {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn entry(&self, i: usize, j: usize) -> RatFun<F> {
        let p = Poly::from_coeffs(self.num.iter().map(|m| m.get(i, j).clone()).collect());
        RatFun::new(p, self.den.clone()).expect("nonzero denominator")
    }

    pub fn eval(&self, u: &F) -> Option<ExactMatrix<F>> {
        let d = self.den.eval(u);
        if d.is_zero() {
            return None;
        }
        Some(matpoly_eval(&self.num, u, self.rows, self.cols).scale(&(F::one() / d)))
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::normalized(self.rows, self.cols, self.num.iter().map(|m| m.scale(c)).collect(), self.den.clone())
    }

    /// Multiplication by a scalar rational function.
    pub fn scale_ratfun(&self, r: &RatFun<F>) -> Self {
        let num = matpoly_scale_poly(&self.num, r.num());
        Self::normalized(self.rows, self.cols, num, &self.den * r.den())
    }

    /// Entrywise derivative by the quotient rule over the scalar denominator.
    pub fn derivative(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let dnum = matpoly_derivative(&self.num);
        let a = matpoly_scale_poly(&dnum, &self.den);
        let b = matpoly_scale_poly(&self.num, &self.den.derivative());
        Self::normalized(self.rows, self.cols, matpoly_sub(&a, &b), &self.den * &self.den)
    }

    /// Numerator after rewriting over `target`; fails unless the denominator divides `target`.
    pub fn numerator_over(&self, target: &Poly<F>, tol: f64) -> Result<Vec<ExactMatrix<F>>> {
        let q = target.div_exact(&self.den, tol).map_err(|_| {
            Error::Construction("denominator does not divide the requested common denominator".into())
        })?;
        Ok(matpoly_scale_poly(&self.num, &q))
    }

    /// Limit as `u -> infinity`; fails when some entry grows.
    pub fn limit_at_infinity(&self) -> Result<ExactMatrix<F>> {
        let dd = self.den.degree().unwrap();
        match self.num.len().checked_sub(1) {
            None => Ok(ExactMatrix::zeros(self.rows, self.cols)),
            Some(dn) if dn > dd => Err(Error::NotQuasiExponential(format!(
                "matrix coefficient grows like u^{}",
                dn - dd
            ))),
            Some(dn) if dn == dd => Ok(self.num[dn].clone()),
            Some(_) => Ok(ExactMatrix::zeros(self.rows, self.cols)),
        }
    }

    /// Restricts both sides: `left * self * right` with constant matrices.
    pub fn sandwich(&self, left: &ExactMatrix<F>, right: &ExactMatrix<F>) -> Self {
        let num = self.num.iter().map(|m| &(left * m) * right).collect();
        Self::normalized(left.rows(), right.cols(), num, self.den.clone())
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> MatRatFun<G> {
        MatRatFun::normalized(
            self.rows,
            self.cols,
            self.num.iter().map(|m| m.map(f)).collect(),
            self.den.map(f),
        )
    }

    pub fn to_c64(&self) -> MatRatFun<Complex64> {
        self.map(|c| c.to_c64())
    }
}

impl<F: Scalar> Add for &MatRatFun<F> {
    type Output = MatRatFun<F>;
    fn add(self, rhs: &MatRatFun<F>) -> MatRatFun<F> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return MatRatFun::normalized(self.rows, self.cols, matpoly_add(&self.num, &rhs.num), self.den.clone());
        }
        let (ml, mr) = if F::EXACT {
            let g = Poly::gcd(&self.den, &rhs.den);
            (rhs.den.divmod(&g).unwrap().0, self.den.divmod(&g).unwrap().0)
        } else {
            (rhs.den.clone(), self.den.clone())
        };
        let num = matpoly_add(&matpoly_scale_poly(&self.num, &ml), &matpoly_scale_poly(&rhs.num, &mr));
        MatRatFun::normalized(self.rows, self.cols, num, &self.den * &ml)
    }
}

impl<F: Scalar> Neg for &MatRatFun<F> {
    type Output = MatRatFun<F>;
    fn neg(self) -> MatRatFun<F> {
        MatRatFun {
            rows: self.rows,
            cols: self.cols,
            num: self.num.iter().map(|m| m.scale(&-F::one())).collect(),
            den: self.den.clone(),
        }
    }
}

impl<F: Scalar> Sub for &MatRatFun<F> {
    type Output = MatRatFun<F>;
    fn sub(self, rhs: &MatRatFun<F>) -> MatRatFun<F> {
        self + &(-rhs)
    }
}

impl<F: Scalar> Mul for &MatRatFun<F> {
    type Output = MatRatFun<F>;
    fn mul(self, rhs: &MatRatFun<F>) -> MatRatFun<F> {
        assert_eq!(self.cols, rhs.rows, "shape mismatch");
        if self.is_zero() || rhs.is_zero() {
            return MatRatFun::zeros(self.rows, rhs.cols);
        }
        let mut num = vec![ExactMatrix::zeros(self.rows, rhs.cols); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                num[i + j] = &num[i + j] + &(a * b);
            }
        }
        MatRatFun::normalized(self.rows, rhs.cols, num, &self.den * &rhs.den)
    }
}

/// Evaluates a matrix polynomial (Horner).
pub fn matpoly_eval<F: Scalar>(coeffs: &[ExactMatrix<F>], u: &F, rows: usize, cols: usize) -> ExactMatrix<F> {
    coeffs
        .iter()
        .rev()
        .fold(ExactMatrix::zeros(rows, cols), |acc, c| &acc.scale(u) + c)
}

/// Coefficients of a matrix polynomial in powers of `(u - b)`.
pub fn matpoly_taylor_at<F: Scalar>(coeffs: &[ExactMatrix<F>], b: &F) -> Vec<ExactMatrix<F>> {
    let mut a = coeffs.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            a[j] = &a[j] + &a[j + 1].scale(b);
        }
    }
    a
}

fn matpoly_add<F: Scalar>(a: &[ExactMatrix<F>], b: &[ExactMatrix<F>]) -> Vec<ExactMatrix<F>> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| match (a.get(k), b.get(k)) {
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => unreachable!(),
        })
        .collect()
}

fn matpoly_sub<F: Scalar>(a: &[ExactMatrix<F>], b: &[ExactMatrix<F>]) -> Vec<ExactMatrix<F>> {
    let neg: Vec<_> = b.iter().map(|m| m.scale(&-F::one())).collect();
    matpoly_add(a, &neg)
}

fn matpoly_derivative<F: Scalar>(a: &[ExactMatrix<F>]) -> Vec<ExactMatrix<F>> {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, m)| m.scale(&F::from_i64(k as i64)))
        .collect()
}

fn matpoly_scale_poly<F: Scalar>(a: &[ExactMatrix<F>], p: &Poly<F>) -> Vec<ExactMatrix<F>> {
    if a.is_empty() || p.is_zero() {
        return Vec::new();
    }
    let (r, c) = (a[0].rows(), a[0].cols());
    let mut out = vec![ExactMatrix::zeros(r, c); a.len() + p.coeffs().len() - 1];
    for (i, m) in a.iter().enumerate() {
        for (j, s) in p.coeffs().iter().enumerate() {
            if !s.is_zero() {
                out[i + j] = &out[i + j] + &m.scale(s);
            }
        }
    }
    out
}

/// Divides a matrix polynomial by a monic scalar polynomial known to divide it.
fn matpoly_div_exact<F: Scalar>(a: &[ExactMatrix<F>], g: &Poly<F>) -> Vec<ExactMatrix<F>> {
    let dg = g.degree().unwrap();
    if a.len() <= dg {
        return Vec::new();
    }
    let mut rem = a.to_vec();
    let mut quot = vec![ExactMatrix::zeros(a[0].rows(), a[0].cols()); a.len() - dg];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dg].clone();
        for (j, gc) in g.coeffs().iter().enumerate() {
            rem[k + j] = &rem[k + j] - &c.scale(gc);
        }
        quot[k] = c;
    }
    quot
}
