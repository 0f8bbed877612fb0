//! The universal differential operator `D = ∂^N + sum_i B_i(u) ∂^{N-i}` acting on
//! a weight subspace, built as the row determinant of
//! `[δ_ij (∂ - K_i) - e_ji(u)]`.

use std::collections::HashMap;

use serde::Serialize;

use crate::algebra::{Ambient, EmbeddedModule, ModuleSpec, WeightSpace};
use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::polyring::{matpoly_taylor_at, rdet_first_order, DiffOp, MatRatFun, Poly, RatFun};
use crate::scalar::Scalar;
use crate::util::{primes_from, signed_permutations};

#[derive(Clone, Debug)]
pub struct BetheOperator<F> {
    rank: usize,
    dim: usize,
    coeffs: Vec<MatRatFun<F>>,
    normalizer: Poly<F>,
    numerators: Vec<Vec<ExactMatrix<F>>>,
}

/// Builds the operator on the embedded basis of `module`.
///
/// The row determinant is expanded on the ambient weight space, one permutation
/// at a time, composing entries from the right. Off-diagonal entries move
/// between weight spaces, so each partial product is a graded map
/// `W_λ -> W_μ`; terms that leave the set of weights vanish early.
pub fn build_bethe_operator<F: Scalar>(module: &EmbeddedModule<F>) -> Result<BetheOperator<F>> {
    let spec = module.spec();
    let rank = spec.rank();
    let ambient_coeffs = ambient_coefficients(spec)?;
    let coeffs = ambient_coeffs
        .iter()
        .map(|b| module.restrict_matrat(b))
        .collect::<Result<Vec<_>>>()?;
    let normalizer = spec.normalizer();
    let numerators = coeffs
        .iter()
        .map(|b| {
            b.numerator_over(&normalizer, 0.0).map_err(|_| {
                Error::Construction("coefficient has a pole of order exceeding the factor size".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BetheOperator {
        rank,
        dim: module.dim(),
        coeffs,
        normalizer,
        numerators,
    })
}

/// `B_1(u), ..., B_N(u)` on the ambient weight space `(⊗ V(b_s)^{⊗ n_s})_λ`.
pub fn ambient_coefficients<F: Scalar>(spec: &ModuleSpec<F>) -> Result<Vec<MatRatFun<F>>> {
    let rank = spec.rank();
    let lambda = spec.weight().padded(rank);
    let amb = Ambient::new(spec);
    let w0 = WeightSpace::new(&lambda);
    let d = w0.dim();
    let mut cache: HashMap<(usize, usize, Vec<usize>), (WeightSpace, MatRatFun<F>)> = HashMap::new();
    let mut series = |i: usize, j: usize, from: &WeightSpace| -> Option<(WeightSpace, MatRatFun<F>)> {
        let to_w = from.shifted_weight(i, j)?;
        let key = (i, j, from.weight().to_vec());
        let entry = cache.entry(key).or_insert_with(|| {
            let to = WeightSpace::new(&to_w);
            let e = amb.e_series(i, j, from, &to);
            (to, e)
        });
        Some(entry.clone())
    };

    let mut total = vec![MatRatFun::zeros(d, d); rank + 1];
    for (perm, sign) in signed_permutations(rank) {
        // c[k] is the coefficient of ∂^k of the partial product
        let mut c = vec![MatRatFun::identity(d)];
        let mut space = w0.clone();
        let mut vanished = false;
        for r in (0..rank).rev() {
            let col = perm[r];
            if col == r {
                // e_rr(u) vanishes on weights with no r-th entry
                let e = series(r, r, &space).map_or_else(|| MatRatFun::zeros(space.dim(), space.dim()), |(_, e)| e);
                let shift = &e + &MatRatFun::scalar(&RatFun::constant(spec.k()[r].clone()), space.dim());
                let mut next = vec![MatRatFun::zeros(space.dim(), d); c.len() + 1];
                for (k, ck) in c.iter().enumerate() {
                    next[k + 1] = &next[k + 1] + ck;
                    next[k] = &next[k] + &(&ck.derivative() - &(&shift * ck));
                }
                c = next;
            } else {
                let Some((to, e)) = series(col, r, &space) else {
                    vanished = true;
                    break;
                };
                if to.dim() == 0 {
                    vanished = true;
                    break;
                }
                c = c.iter().map(|ck| -&(&e * ck)).collect();
                space = to;
            }
        }
        if vanished {
            continue;
        }
        debug_assert_eq!(space.weight(), lambda.as_slice());
        for (k, ck) in c.into_iter().enumerate() {
            total[k] = if sign > 0 { &total[k] + &ck } else { &total[k] - &ck };
        }
    }
    if total[rank] != MatRatFun::identity(d) {
        return Err(Error::Construction("row determinant is not monic".into()));
    }
    Ok((1..=rank).map(|i| total[rank - i].clone()).collect())
}

/// The same operator on all of `V^{⊗n}` (dimension `N^n`), computed with the
/// generic operator-valued row determinant. Intended for cross-checks only.
pub fn full_space_operator<F: Scalar>(spec: &ModuleSpec<F>) -> Result<(Vec<Vec<usize>>, DiffOp<MatRatFun<F>>)> {
    let rank = spec.rank();
    let n = spec.n();
    let basis = full_basis(rank, n);
    let index: HashMap<&[usize], usize> = basis.iter().enumerate().map(|(k, j)| (j.as_slice(), k)).collect();
    let pf = spec.position_factors();
    let dim = basis.len();
    let e = |i: usize, j: usize| -> MatRatFun<F> {
        let mut acc = MatRatFun::zeros(dim, dim);
        for s in 0..spec.factors() {
            let mut m = ExactMatrix::<F>::zeros(dim, dim);
            for (c, idx) in basis.iter().enumerate() {
                for p in 0..n {
                    if pf[p] == s && idx[p] == j {
                        let mut img = idx.clone();
                        img[p] = i;
                        let r = index[img.as_slice()];
                        let v = m.get(r, c).clone() + F::one();
                        m.set(r, c, v);
                    }
                }
            }
            acc = &acc + &MatRatFun::simple_pole(m, &spec.b()[s]);
        }
        acc
    };
    let one = MatRatFun::identity(dim);
    let matrix: Vec<Vec<DiffOp<MatRatFun<F>>>> = (0..rank)
        .map(|i| {
            (0..rank)
                .map(|j| {
                    let minus_e = -&e(j, i);
                    if i == j {
                        let k = MatRatFun::scalar(&RatFun::constant(spec.k()[i].clone()), dim);
                        DiffOp::first_order(one.clone(), &minus_e - &k)
                    } else {
                        DiffOp::multiplication(minus_e)
                    }
                })
                .collect()
        })
        .collect();
    Ok((basis, rdet_first_order(&matrix)?))
}

fn full_basis(rank: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..rank).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

/// Sample points `2, 3, 5, 7, 11, ...` (primes from `start`) avoiding the evaluation points.
pub fn sample_points<F: Scalar>(b: &[F], start: u64, count: usize) -> Vec<F> {
    primes_from(start)
        .map(|p| F::from_i64(p as i64))
        .filter(|u| !b.contains(u))
        .take(count)
        .collect()
}

/// Outcome of the polynomiality / local-scalar checks.
#[derive(Clone, Debug, Serialize)]
pub struct PolynomialityReport {
    /// `deg A_i` for `i = 1..N`.
    pub degrees: Vec<usize>,
    pub degree_bound: usize,
    pub degree_ok: bool,
    /// Lower local coefficients vanish (pole order of `B_i` at `b_s` is at most `i`).
    pub vanishing_ok: bool,
    /// Leading local coefficients are multiples of the identity.
    pub scalar_ok: bool,
    /// The local exponent identity holds at every point.
    pub identity_ok: bool,
    /// `A_i(b_s)` itself is a multiple of the identity, per `(s, i)`.
    pub value_scalar: Vec<Vec<bool>>,
    /// Observed pole order of the reduced `B_i` at `b_s`, per `(s, i)`.
    pub pole_orders: Vec<Vec<usize>>,
    pub failures: Vec<String>,
}

impl PolynomialityReport {
    pub fn ok(&self) -> bool {
        self.degree_ok && self.vanishing_ok && self.scalar_ok && self.identity_ok
    }
}

impl<F: Scalar> BetheOperator<F> {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `B_i(u)`, `i = 1..N`.
    pub fn coeff(&self, i: usize) -> &MatRatFun<F> {
        &self.coeffs[i - 1]
    }

    /// `prod_s (u - b_s)^{n_s}`.
    pub fn normalizer(&self) -> &Poly<F> {
        &self.normalizer
    }

    /// Coefficient matrices of `A_i(u) = B_i(u) prod_s (u - b_s)^{n_s}`.
    pub fn numerator(&self, i: usize) -> &[ExactMatrix<F>] {
        &self.numerators[i - 1]
    }

    pub fn as_diffop(&self) -> DiffOp<MatRatFun<F>> {
        let template = MatRatFun::identity(self.dim);
        DiffOp::from_h(self.coeffs.clone(), &template)
    }

    pub fn eval(&self, i: usize, u: &F) -> Result<ExactMatrix<F>> {
        self.coeff(i)
            .eval(u)
            .ok_or_else(|| Error::InvalidInput("sample point is an evaluation point".into()))
    }

    /// `B_1(u) + sum_i (K_i + e_ii(u)) = 0`.
    pub fn check_first_coefficient(&self, module: &EmbeddedModule<F>) -> Result<bool> {
        let spec = module.spec();
        let mut acc = self.coeff(1).clone();
        for i in 0..self.rank {
            acc = &acc + &module.e_series_action(i, i)?;
            acc = &acc + &MatRatFun::scalar(&RatFun::constant(spec.k()[i].clone()), self.dim);
        }
        Ok(acc.is_zero())
    }

    /// Limits `B_{i0}` of the coefficients at infinity.
    pub fn limits_at_infinity(&self) -> Result<Vec<ExactMatrix<F>>> {
        self.coeffs.iter().map(MatRatFun::limit_at_infinity).collect()
    }

    /// `sum_i B_{i0} α^{N-i} = prod_i (α - K_i) Id`.
    pub fn check_characteristic_at_infinity(&self, k: &[F]) -> Result<bool> {
        let expected = Poly::from_roots(k.iter());
        let limits = self.limits_at_infinity()?;
        Ok((1..=self.rank).all(|i| {
            let c = expected.coeff(self.rank - i);
            limits[i - 1] == ExactMatrix::identity(self.dim).scale(&c)
        }))
    }

    /// Pole order of the reduced `B_i` at each `b_s`, indexed `[s][i-1]`.
    pub fn pole_orders(&self, b: &[F]) -> Vec<Vec<usize>> {
        b.iter()
            .map(|bs| {
                self.coeffs
                    .iter()
                    .map(|c| if c.is_zero() { 0 } else { c.den().root_multiplicity(bs, 0.0) })
                    .collect()
            })
            .collect()
    }

    /// Polynomiality of `A_i`, the degree bound `deg A_i <= n`, and the local
    /// structure at each `b_s`: with `A_{i,j,s}` the Taylor coefficients of `A_i`
    /// at `b_s`, `A_{i,j,s} = 0` for `j < n_s - i`, `A_{i,n_s-i,s}` is scalar, and
    /// `sum_i A_{i,n_s-i,s} [α]_{N-i} = c_s prod_l (α - λ^(s)_l - N + l)` with
    /// `c_s = prod_{r != s} (b_s - b_r)^{n_r}` and `[α]_m` the falling factorial.
    pub fn check_polynomiality(&self, spec: &ModuleSpec<F>) -> PolynomialityReport {
        let n = spec.n();
        let rank = self.rank;
        let mut failures = Vec::new();
        let degrees: Vec<usize> = self.numerators.iter().map(|a| a.len().saturating_sub(1)).collect();
        let degree_ok = degrees.iter().all(|&d| d <= n);
        if !degree_ok {
            failures.push(format!("numerator degrees {degrees:?} exceed {n}"));
        }
        let (mut vanishing_ok, mut scalar_ok, mut identity_ok) = (true, true, true);
        let mut value_scalar = Vec::new();
        for s in 0..spec.factors() {
            let bs = &spec.b()[s];
            let ns = spec.n_s(s);
            let cs = (0..spec.factors())
                .filter(|&r| r != s)
                .fold(F::one(), |acc, r| acc * pow(&(bs.clone() - spec.b()[r].clone()), spec.n_s(r)));
            let mut local = vec![cs.clone()];
            let mut vs = Vec::new();
            for i in 1..=rank {
                let taylor = matpoly_taylor_at(self.numerator(i), bs);
                let at = |j: usize| taylor.get(j).cloned().unwrap_or_else(|| ExactMatrix::zeros(self.dim, self.dim));
                vs.push(at(0).as_scalar_multiple().is_some());
                for j in 0..ns.saturating_sub(i) {
                    if !at(j).is_zero() {
                        vanishing_ok = false;
                        failures.push(format!("A_{i} has a nonzero order-{j} coefficient at point {s}"));
                    }
                }
                if ns >= i {
                    match at(ns - i).as_scalar_multiple() {
                        Some(c) => local.push(c),
                        None => {
                            scalar_ok = false;
                            failures.push(format!("A_{i} leading local coefficient at point {s} is not scalar"));
                            local.push(F::zero());
                        }
                    }
                } else {
                    local.push(F::zero());
                }
            }
            value_scalar.push(vs);
            let lhs = (0..=rank).fold(Poly::zero(), |acc, i| {
                &acc + &falling_factorial::<F>(rank - i).scale(&local[i])
            });
            let lam = spec.partitions()[s].padded(rank);
            let roots: Vec<F> = (1..=rank)
                .map(|l| F::from_i64(lam[l - 1] as i64 + rank as i64 - l as i64))
                .collect();
            let rhs = Poly::from_roots(roots.iter()).scale(&cs);
            if lhs != rhs {
                identity_ok = false;
                failures.push(format!("local exponent identity fails at point {s}"));
            }
        }
        PolynomialityReport {
            degrees,
            degree_bound: n,
            degree_ok,
            vanishing_ok,
            scalar_ok,
            identity_ok,
            value_scalar,
            pole_orders: self.pole_orders(spec.b()),
            failures,
        }
    }

    /// All commutators `[B_i(u), B_j(v)]` over the sample points, plus
    /// commutation with the diagonal generators `e_ii`. Returns the number of
    /// nonzero commutators found.
    pub fn commutator_defects(&self, module: &EmbeddedModule<F>, points: &[F]) -> Result<usize> {
        let mut mats = Vec::new();
        for u in points {
            for i in 1..=self.rank {
                mats.push(self.eval(i, u)?);
            }
        }
        let mut defects = 0;
        for a in 0..mats.len() {
            for b in a + 1..mats.len() {
                if !mats[a].commutator(&mats[b]).is_zero() {
                    defects += 1;
                }
            }
        }
        for i in 0..self.rank {
            let e = module.e_constant(i)?;
            defects += mats.iter().filter(|m| !m.commutator(&e).is_zero()).count();
        }
        Ok(defects)
    }
}

fn pow<F: Scalar>(x: &F, k: usize) -> F {
    (0..k).fold(F::one(), |acc, _| acc * x.clone())
}

/// `α (α - 1) ... (α - m + 1)`.
pub fn falling_factorial<F: Scalar>(m: usize) -> Poly<F> {
    let roots: Vec<F> = (0..m).map(|j| F::from_i64(j as i64)).collect();
    Poly::from_roots(roots.iter())
}

/// Restricts an operator on the full tensor space to one weight block.
pub fn weight_block<F: Scalar>(basis: &[Vec<usize>], m: &ExactMatrix<F>, space: &WeightSpace) -> ExactMatrix<F> {
    let rows: Vec<usize> = space
        .basis()
        .iter()
        .map(|j| basis.iter().position(|x| x == j).expect("index in full basis"))
        .collect();
    let mut out = ExactMatrix::zeros(rows.len(), rows.len());
    for (a, &r) in rows.iter().enumerate() {
        for (b, &c) in rows.iter().enumerate() {
            out.set(a, b, m.get(r, c).clone());
        }
    }
    out
}

/// Whether `m` maps each weight space of the full tensor space into itself.
pub fn preserves_weights<F: Scalar>(basis: &[Vec<usize>], m: &ExactMatrix<F>, rank: usize) -> bool {
    let weight = |j: &[usize]| {
        let mut w = vec![0usize; rank];
        for &x in j {
            w[x] += 1;
        }
        w
    };
    for (r, jr) in basis.iter().enumerate() {
        for (c, jc) in basis.iter().enumerate() {
            if !m.get(r, c).is_zero() && weight(jr) != weight(jc) {
                return false;
            }
        }
    }
    true
}
