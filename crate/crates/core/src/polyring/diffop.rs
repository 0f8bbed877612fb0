use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::polyring::quasi::{QuasiRat, QuasiRatVec};
use crate::polyring::{MatRatFun, RatFun};
use crate::scalar::Scalar;
use crate::util::{binomial, signed_permutations};

/// Coefficient ring of a differential operator: a (possibly noncommutative)
/// differential ring.
pub trait OpCoeff: Clone + Debug + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn derivative(&self) -> Self;
    fn scale_int(&self, k: i64) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
}

impl<F: Scalar> OpCoeff for RatFun<F> {
    fn zero_like(&self) -> Self {
        RatFun::zero()
    }
    fn one_like(&self) -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn derivative(&self) -> Self {
        RatFun::derivative(self)
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&F::from_i64(k))
    }
}

impl<F: Scalar> OpCoeff for MatRatFun<F> {
    fn zero_like(&self) -> Self {
        MatRatFun::zeros(self.rows(), self.cols())
    }
    fn one_like(&self) -> Self {
        MatRatFun::identity(self.rows())
    }
    fn is_zero(&self) -> bool {
        MatRatFun::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn derivative(&self) -> Self {
        MatRatFun::derivative(self)
    }
    fn scale_int(&self, k: i64) -> Self {
        self.scale(&F::from_i64(k))
    }
}

/// `sum_k c_k(u) d^k`, coefficients stored in ascending powers of `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiffOp<C> {
    coeffs: Vec<C>,
}

impl<C: OpCoeff> DiffOp<C> {
    /// Builds from ascending coefficients; trailing zeros are dropped but the
    /// constant coefficient is always kept.
    pub fn new(mut coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "operator needs at least one coefficient");
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    /// The monic operator `d^N + h_1 d^{N-1} + ... + h_N`.
    pub fn from_h(h: Vec<C>, template: &C) -> Self {
        let mut coeffs: Vec<C> = h.into_iter().rev().collect();
        coeffs.push(template.one_like());
        Self::new(coeffs)
    }

    /// `a d + c`.
    pub fn first_order(a: C, c: C) -> Self {
        Self::new(vec![c, a])
    }

    pub fn multiplication(c: C) -> Self {
        Self::new(vec![c])
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// Coefficient of `d^k` (zero beyond the order).
    pub fn coeff(&self, k: usize) -> C {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| self.coeffs[0].zero_like())
    }

    /// `h_i`, the coefficient of `d^{N-i}`.
    pub fn h(&self, i: usize) -> C {
        self.coeff(self.order() - i)
    }

    pub fn is_monic(&self) -> bool {
        let lead = self.coeffs.last().unwrap();
        *lead == lead.one_like()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(OpCoeff::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k).add(&rhs.coeff(k))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(OpCoeff::neg).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale_int(&self, k: i64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.scale_int(k)).collect())
    }

    /// `self ∘ rhs`, expanding `d^k b = sum_m C(k,m) b^{(m)} d^{k-m}`.
    /// Coefficients multiply in the written order.
    pub fn compose(&self, rhs: &Self) -> Self {
        let ka = self.order();
        let kb = rhs.order();
        let zero = self.coeffs[0].zero_like();
        let mut out = vec![zero; ka + kb + 1];
        // derivs[l][m] = m-th derivative of rhs coefficient l
        let derivs: Vec<Vec<C>> = rhs
            .coeffs
            .iter()
            .map(|b| {
                let mut ds = vec![b.clone()];
                for _ in 0..ka {
                    let next = ds.last().unwrap().derivative();
                    ds.push(next);
                }
                ds
            })
            .collect();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (l, ds) in derivs.iter().enumerate() {
                for (m, d) in ds.iter().enumerate().take(k + 1) {
                    if d.is_zero() {
                        continue;
                    }
                    let term = a.mul(d).scale_int(binomial(k, m));
                    let idx = k - m + l;
                    out[idx] = out[idx].add(&term);
                }
            }
        }
        Self::new(out)
    }
}

/// Row determinant `sum_sigma sgn(sigma) a_{1 sigma(1)} ∘ ... ∘ a_{N sigma(N)}`
/// of a square matrix of first-order operators.
pub fn rdet_first_order<C: OpCoeff>(m: &[Vec<DiffOp<C>>]) -> Result<DiffOp<C>> {
    let n = m.len();
    if n == 0 || m.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("rdet needs a nonempty square matrix".into()));
    }
    if m.iter().flatten().any(|e| e.order() > 1) {
        return Err(Error::InvalidInput("rdet entries must be at most first order".into()));
    }
    let zero = DiffOp::multiplication(m[0][0].coeffs[0].zero_like());
    let mut acc = zero.clone();
    for (perm, sign) in signed_permutations(n) {
        let mut term: Option<DiffOp<C>> = None;
        for (r, &c) in perm.iter().enumerate() {
            let e = &m[r][c];
            if e.is_zero() {
                term = Some(zero.clone());
                break;
            }
            term = Some(match term {
                None => e.clone(),
                Some(t) => t.compose(e),
            });
        }
        let term = term.unwrap();
        acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    Ok(acc)
}

impl<F: Scalar> DiffOp<RatFun<F>> {
    /// Applies the operator to `e^{kappa u} f(u)`.
    pub fn apply(&self, f: &QuasiRat<F>) -> QuasiRat<F> {
        let mut cur = f.clone();
        let mut acc = RatFun::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                cur = cur.derivative();
            }
            acc = &acc + &(c * &cur.f);
        }
        QuasiRat {
            kappa: f.kappa.clone(),
            f: acc,
        }
    }
}

impl<F: Scalar> DiffOp<MatRatFun<F>> {
    /// Applies the operator to a vector-valued quasi-exponential.
    pub fn apply_vec(&self, f: &QuasiRatVec<F>) -> QuasiRatVec<F> {
        let d = f.comps.len();
        let mut cur = f.clone();
        let mut acc = vec![RatFun::zero(); d];
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                cur = cur.derivative();
            }
            for (i, slot) in acc.iter_mut().enumerate() {
                for (j, v) in cur.comps.iter().enumerate() {
                    if !v.is_zero() {
                        *slot = &*slot + &(&c.entry(i, j) * v);
                    }
                }
            }
        }
        QuasiRatVec {
            kappa: f.kappa.clone(),
            comps: acc,
        }
    }
}
