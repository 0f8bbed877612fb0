//! Spaces of quasi-exponentials `span{e^{K_i u} p_i(u)}`, their Wronskians,
//! fundamental operators and local exponents.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::algebra::ModuleSpec;
use crate::bethe::falling_factorial;
use crate::error::{Error, Result};
use crate::numeric::poly_roots;
use crate::polyring::{poly_det, wronskian, wronskian_matrix, DiffOp, Poly, QuasiExp, RatFun};
use crate::scalar::Scalar;

/// A point of the space of quasi-exponentials with exponents `K` and
/// polynomial parts `p_i`, `p_i` monic of degree `λ_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiExpSpace<F> {
    k: Vec<F>,
    polys: Vec<Poly<F>>,
}

impl<F: Scalar> QuasiExpSpace<F> {
    pub fn new(k: Vec<F>, polys: Vec<Poly<F>>) -> Result<Self> {
        if k.is_empty() || k.len() != polys.len() {
            return Err(Error::InvalidInput("need one polynomial part per exponent".into()));
        }
        if (0..k.len()).any(|i| (i + 1..k.len()).any(|j| k[i] == k[j])) {
            return Err(Error::InvalidInput("exponents K must be pairwise distinct".into()));
        }
        for p in &polys {
            if p.is_zero() || p.lead() != F::one() {
                return Err(Error::InvalidInput("polynomial parts must be monic".into()));
            }
        }
        let degs: Vec<usize> = polys.iter().map(|p| p.degree().unwrap()).collect();
        if degs.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput(format!("degrees {degs:?} are not non-increasing")));
        }
        Ok(QuasiExpSpace { k, polys })
    }

    /// `p_i = u^{λ_i} + f_{i1} u^{λ_i - 1} + ... + f_{iλ_i}` from the rows `f_i`.
    pub fn from_coefficients(k: Vec<F>, rows: Vec<Vec<F>>) -> Result<Self> {
        let polys = rows
            .into_iter()
            .map(|row| {
                let mut c: Vec<F> = row.into_iter().rev().collect();
                c.push(F::one());
                Poly::from_coeffs(c)
            })
            .collect();
        Self::new(k, polys)
    }

    /// Random space with the given degrees; coefficients are `p/q` with
    /// `|p| <= 9`, `1 <= q <= 4`.
    pub fn random(k: Vec<F>, degrees: &[usize], rng: &mut impl Rng) -> Result<Self> {
        let rows = degrees
            .iter()
            .map(|&d| {
                (0..d)
                    .map(|_| F::from_i64(rng.gen_range(-9..=9)) / F::from_i64(rng.gen_range(1..=4)))
                    .collect()
            })
            .collect();
        Self::from_coefficients(k, rows)
    }

    pub fn rank(&self) -> usize {
        self.k.len()
    }

    pub fn k(&self) -> &[F] {
        &self.k
    }

    pub fn polys(&self) -> &[Poly<F>] {
        &self.polys
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.polys.iter().map(|p| p.degree().unwrap()).collect()
    }

    /// `n = sum_i λ_i`.
    pub fn size(&self) -> usize {
        self.degrees().iter().sum()
    }

    /// Coefficient rows `f_{i1}, ..., f_{iλ_i}`.
    pub fn coefficients(&self) -> Vec<Vec<F>> {
        self.polys
            .iter()
            .map(|p| p.coeffs().iter().rev().skip(1).cloned().collect())
            .collect()
    }

    pub fn basis(&self) -> Vec<QuasiExp<F>> {
        self.k
            .iter()
            .zip(&self.polys)
            .map(|(k, p)| QuasiExp::new(k.clone(), p.clone()))
            .collect()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G + Copy) -> QuasiExpSpace<G> {
        QuasiExpSpace {
            k: self.k.iter().map(f).collect(),
            polys: self.polys.iter().map(|p| p.map(f)).collect(),
        }
    }

    pub fn to_c64(&self) -> QuasiExpSpace<Complex64> {
        self.map(|c| c.to_c64())
    }
}

/// `Wr(f_1, ..., f_N) = e^{(sum K_i) u} prod_{i<j} (K_j - K_i) (u^n + sum_s (-1)^s a_s u^{n-s})`.
#[derive(Clone, Debug, PartialEq)]
pub struct WronskiData<F> {
    pub prefactor: F,
    pub monic: Poly<F>,
    pub a: Vec<F>,
}

impl<F: Scalar> WronskiData<F> {
    /// `u^n + sum_s (-1)^s a_s u^{n-s}`.
    pub fn reconstruct(&self) -> Poly<F> {
        sign_polynomial(&self.a)
    }
}

/// The Wronski-map coordinates `a` of a monic polynomial.
pub fn wronski_coordinates<F: Scalar>(monic: &Poly<F>) -> Vec<F> {
    let n = monic.degree().unwrap_or(0);
    (1..=n)
        .map(|s| {
            let c = monic.coeff(n - s);
            if s % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect()
}

fn sign_polynomial<F: Scalar>(a: &[F]) -> Poly<F> {
    let n = a.len();
    let mut c = vec![F::zero(); n + 1];
    c[n] = F::one();
    for (s, x) in a.iter().enumerate().map(|(i, x)| (i + 1, x)) {
        c[n - s] = if s % 2 == 0 { x.clone() } else { -x.clone() };
    }
    Poly::from_coeffs(c)
}

/// `prod_{i<j} (K_j - K_i)`.
pub fn vandermonde<F: Scalar>(k: &[F]) -> F {
    let mut acc = F::one();
    for i in 0..k.len() {
        for j in i + 1..k.len() {
            acc = acc * (k[j].clone() - k[i].clone());
        }
    }
    acc
}

pub fn wronskian_of_space<F: Scalar>(x: &QuasiExpSpace<F>) -> Result<WronskiData<F>> {
    let w = wronskian(&x.basis())?;
    if w.is_zero() {
        return Err(Error::Degenerate("the Wronskian vanishes identically".into()));
    }
    let prefactor = vandermonde(x.k());
    let n = x.size();
    if w.poly.degree() != Some(n) {
        return Err(Error::Degenerate(format!("Wronskian has degree {:?}, expected {n}", w.poly.degree())));
    }
    let lead = w.poly.lead();
    let scale = lead.abs_f64().max(prefactor.abs_f64());
    if !(lead.clone() - prefactor.clone()).near_zero(scale, 1e-9) {
        return Err(Error::Degenerate("Wronskian leading coefficient differs from the Vandermonde factor".into()));
    }
    let monic = w.poly.scale(&(F::one() / prefactor.clone()));
    let a = wronski_coordinates(&monic);
    Ok(WronskiData { prefactor, monic, a })
}

/// The monic operator `D_X` with kernel `X`, together with its coefficients
/// cleared by the monic Wronskian: `G_0 = W`, `G_i = W F_i`.
#[derive(Clone, Debug)]
pub struct FundamentalData<F> {
    pub operator: DiffOp<RatFun<F>>,
    pub cleared: Vec<Poly<F>>,
    pub wronski: WronskiData<F>,
}

/// Solves `f_j^{(N)} + sum_i F_i f_j^{(N-i)} = 0` for `F_1..F_N` by Cramer's rule.
pub fn fundamental_data<F: Scalar>(x: &QuasiExpSpace<F>) -> Result<FundamentalData<F>> {
    let wronski = wronskian_of_space(x)?;
    let rank = x.rank();
    let basis = x.basis();
    let m = wronskian_matrix(&basis);
    let top: Vec<Poly<F>> = basis
        .iter()
        .map(|f| (0..rank).fold(f.clone(), |g, _| g.derivative()).poly)
        .collect();
    let inv = F::one() / wronski.prefactor.clone();
    let mut cleared = vec![wronski.monic.clone()];
    for i in 1..=rank {
        let col = rank - i;
        let mut mi = m.clone();
        for (row, t) in mi.iter_mut().zip(&top) {
            row[col] = -t;
        }
        cleared.push(poly_det(&mi).scale(&inv));
    }
    let h = cleared[1..]
        .iter()
        .map(|g| RatFun::new(g.clone(), wronski.monic.clone()))
        .collect::<Result<Vec<_>>>()?;
    let operator = DiffOp::from_h(h, &RatFun::one());
    Ok(FundamentalData {
        operator,
        cleared,
        wronski,
    })
}

pub fn fundamental_operator<F: Scalar>(x: &QuasiExpSpace<F>) -> Result<DiffOp<RatFun<F>>> {
    Ok(fundamental_data(x)?.operator)
}

/// Whether `D f = 0` for every basis function of `X` (relative `tol` for floats).
pub fn annihilates<F: Scalar>(d: &DiffOp<RatFun<F>>, x: &QuasiExpSpace<F>, tol: f64) -> bool {
    x.basis().iter().all(|f| {
        let r = d.apply(&f.to_rat());
        let scale = f.poly.max_abs().max(1.0) * r.f.den().max_abs().max(1.0);
        r.f.num().coeffs().iter().all(|c| c.near_zero(scale, tol))
    })
}

/// `F_1 = -Wr'/Wr`, checked as `G_1 = -(sum K_i) W - W'`.
pub fn check_first_coefficient<F: Scalar>(data: &FundamentalData<F>, k: &[F], tol: f64) -> bool {
    let w = &data.wronski.monic;
    let total = k.iter().fold(F::zero(), |a, b| a + b.clone());
    let expected = -&(&w.scale(&total) + &w.derivative());
    data.cleared[1].approx_eq(&expected, tol)
}

/// `χ(α) = sum_i F_{i0} α^{N-i}` with `F_{00} = 1`.
pub fn char_at_infinity<F: Scalar>(d: &DiffOp<RatFun<F>>) -> Result<Poly<F>> {
    infinity_layer(d, 0, F::one())
}

/// `sum_i F_{i1} α^{N-i}`, the next layer of the expansion at infinity.
pub fn second_char_at_infinity<F: Scalar>(d: &DiffOp<RatFun<F>>) -> Result<Poly<F>> {
    infinity_layer(d, 1, F::zero())
}

fn infinity_layer<F: Scalar>(d: &DiffOp<RatFun<F>>, j: usize, top: F) -> Result<Poly<F>> {
    let n = d.order();
    let mut c = vec![F::zero(); n + 1];
    c[n] = top;
    for i in 1..=n {
        c[n - i] = d.h(i).expand_at_infinity(j + 1)?[j].clone();
    }
    Ok(Poly::from_coeffs(c))
}

/// `-sum_i λ_i prod_{j != i} (α - K_j)`.
pub fn expected_second_char<F: Scalar>(k: &[F], degrees: &[usize]) -> Poly<F> {
    let mut acc = Poly::zero();
    for (i, &l) in degrees.iter().enumerate() {
        let others: Vec<F> = k.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
        acc = &acc - &Poly::from_roots(others.iter()).scale(&F::from_i64(l as i64));
    }
    acc
}

/// Local indicial polynomial at a point together with its roots.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicialData<F> {
    pub point: F,
    pub polynomial: Poly<F>,
    pub exponents: Vec<Complex64>,
}

impl<F: Scalar> IndicialData<F> {
    fn new(point: F, polynomial: Poly<F>) -> Self {
        let exponents = poly_roots(&polynomial.to_c64());
        IndicialData {
            point,
            polynomial,
            exponents,
        }
    }

    /// Whether the polynomial is `c prod_j (α - e_j)` for the given integers.
    pub fn has_exponents(&self, expected: &[i64], tol: f64) -> bool {
        if self.polynomial.degree() != Some(expected.len()) {
            return false;
        }
        let roots: Vec<F> = expected.iter().map(|&e| F::from_i64(e)).collect();
        let target = Poly::from_roots(roots.iter()).scale(&self.polynomial.lead());
        self.polynomial.approx_eq(&target, tol)
    }
}

/// Indicial polynomial of a monic scalar operator at `b`, for a regular
/// singularity whose coefficients have poles of order at most `n_b`: with
/// `c_i` the coefficient of `(u-b)^{-i}` in `F_i`, `χ(α) = sum_i c_i [α]_{N-i}`.
pub fn indicial_polynomial<F: Scalar>(d: &DiffOp<RatFun<F>>, b: &F, n_b: usize, tol: f64) -> Result<IndicialData<F>> {
    let n = d.order();
    let mut chi = falling_factorial::<F>(n);
    for i in 1..=n {
        let f = d.h(i);
        if f.is_zero() {
            continue;
        }
        let pole = f.pole_order_at(b, tol);
        if pole > i || pole > n_b {
            return Err(Error::NotInIntersection(format!(
                "coefficient F_{i} has a pole of order {pole} (irregular singularity)"
            )));
        }
        let (order, series) = f.laurent_at(b, i + 1, tol);
        let idx = -(i as i64) - order;
        if idx >= 0 {
            let c = series[idx as usize].clone();
            chi = &chi + &falling_factorial::<F>(n - i).scale(&c);
        }
    }
    Ok(IndicialData::new(b.clone(), chi))
}

/// Indicial polynomial from Wronskian-cleared coefficients `G_0..G_N` at a
/// point where the Wronskian vanishes to order `n_b`:
/// `sum_i G_{i,n_b-i} [α]_{N-i}`, after checking `G_{i,j} = 0` for `j < n_b - i`.
pub fn indicial_from_cleared<F: Scalar>(cleared: &[Poly<F>], b: &F, n_b: usize, tol: f64) -> Result<IndicialData<F>> {
    let n = cleared.len() - 1;
    let taylor: Vec<Vec<F>> = cleared.iter().map(|g| g.taylor_at(b)).collect();
    let scale = taylor.iter().flatten().map(|c| c.abs_f64()).fold(1.0, f64::max);
    let at = |i: usize, j: usize| taylor[i].get(j).cloned().unwrap_or_else(F::zero);
    let mut chi = Poly::zero();
    for i in 0..=n {
        for j in 0..n_b.saturating_sub(i) {
            if !at(i, j).near_zero(scale, tol) {
                return Err(Error::NotInIntersection(format!(
                    "cleared coefficient G_{i} has a nonzero order-{j} term (irregular singularity)"
                )));
            }
        }
        if n_b >= i {
            chi = &chi + &falling_factorial::<F>(n - i).scale(&at(i, n_b - i));
        }
    }
    Ok(IndicialData::new(b.clone(), chi))
}

/// Expected exponents `λ_N, λ_{N-1} + 1, ..., λ_1 + N - 1` at a point with highest weight `λ`.
pub fn expected_exponents(rank: usize, lambda: &[usize]) -> Vec<i64> {
    (1..=rank)
        .rev()
        .map(|l| lambda.get(l - 1).copied().unwrap_or(0) as i64 + rank as i64 - l as i64)
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    pub point: (f64, f64),
    pub expected: Vec<i64>,
    pub found: Vec<(f64, f64)>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub poles_ok: bool,
    pub wronskian_ok: bool,
    pub wronskian_rel_error: f64,
    pub points: Vec<PointReport>,
    pub failures: Vec<String>,
}

/// Decides whether `X` lies in the intersection of Schubert cells prescribed by
/// `spec`: the Wronskian equals `prod_s (u - b_s)^{n_s}` (so `D_X` has no other
/// finite singular points) and the exponents at every `b_s` are
/// `λ^(s)_j + N - j`. `tol` is relative and only used for inexact fields.
pub fn membership_test<F: Scalar>(x: &QuasiExpSpace<F>, spec: &ModuleSpec<F>, tol: f64) -> Result<MembershipReport> {
    let rank = spec.rank();
    if x.rank() != rank {
        return Err(Error::InvalidInput("space and module have different rank".into()));
    }
    let k_scale = spec.k().iter().map(Scalar::abs_f64).fold(1.0, f64::max);
    if x.k().iter().zip(spec.k()).any(|(a, b)| !(a.clone() - b.clone()).near_zero(k_scale, tol)) {
        return Err(Error::InvalidInput("space and module have different exponents K".into()));
    }
    let data = fundamental_data(x)?;
    let w = &data.wronski.monic;
    let mut failures = Vec::new();

    let mut rest = w.clone();
    for b in spec.b() {
        let mult = rest.root_multiplicity(b, tol);
        for _ in 0..mult {
            rest = rest.divmod(&Poly::linear(b))?.0;
        }
    }
    let poles_ok = rest.is_constant();
    if !poles_ok {
        failures.push("pole outside b".to_string());
    }

    let p = spec.normalizer();
    let diff = (w - &p).max_abs();
    let wronskian_rel_error = diff / p.max_abs().max(1.0);
    let wronskian_ok = w.approx_eq(&p, tol);
    if !wronskian_ok {
        failures.push(format!("Wronskian differs from the normalizer (relative error {wronskian_rel_error:.3e})"));
    }

    let mut points = Vec::new();
    for s in 0..spec.factors() {
        let b = &spec.b()[s];
        let lam = spec.partitions()[s].padded(rank);
        let expected = expected_exponents(rank, &lam);
        let c = b.to_c64();
        let (ok, found) = match indicial_from_cleared(&data.cleared, b, spec.n_s(s), tol) {
            Ok(ind) => {
                let cs = (0..spec.factors())
                    .filter(|&r| r != s)
                    .fold(F::one(), |acc, r| {
                        (0..spec.n_s(r)).fold(acc, |a, _| a * (b.clone() - spec.b()[r].clone()))
                    });
                let roots: Vec<F> = expected.iter().map(|&e| F::from_i64(e)).collect();
                let target = Poly::from_roots(roots.iter()).scale(&cs);
                let ok = ind.polynomial.approx_eq(&target, tol);
                if !ok {
                    failures.push(format!("exponents at point {s} differ from {expected:?}"));
                }
                (ok, ind.exponents.iter().map(|z| (z.re, z.im)).collect())
            }
            Err(e) => {
                failures.push(format!("point {s}: {e}"));
                (false, Vec::new())
            }
        };
        points.push(PointReport {
            point: (c.re, c.im),
            expected,
            found,
            ok,
        });
    }
    Ok(MembershipReport {
        member: poles_ok && wronskian_ok && points.iter().all(|p| p.ok),
        poles_ok,
        wronskian_ok,
        wronskian_rel_error,
        points,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Partition;
    use crate::scalar::{rat, Rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
    }

    fn ks(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn first_order_space() {
        // span e^{2u}(u - 3): D = d - 2 - 1/(u-3)
        let x = QuasiExpSpace::new(ks(&[2]), vec![p(&[-3, 1])]).unwrap();
        let d = fundamental_operator(&x).unwrap();
        let expected = &RatFun::constant(rat(-2, 1)) - &RatFun::simple_pole(rat(1, 1), &rat(3, 1));
        assert_eq!(d.h(1), expected);
        let ind = indicial_polynomial(&d, &rat(3, 1), 1, 0.0).unwrap();
        assert_eq!(ind.polynomial, p(&[-1, 1]));
    }

    #[test]
    fn two_by_two_wronskian() {
        // f_1 = u, f_2 = e^u u: det [[u, 1], [u, u + 1]] = u^2
        let x = QuasiExpSpace::new(ks(&[0, 1]), vec![p(&[0, 1]), p(&[0, 1])]).unwrap();
        let w = wronskian_of_space(&x).unwrap();
        assert_eq!(w.prefactor, rat(1, 1));
        assert_eq!(w.monic, p(&[0, 0, 1]));
        assert_eq!(w.reconstruct(), w.monic);
    }

    #[test]
    fn single_factor_member() {
        // Λ = ((1, 1)) at b = 0: X = span{u, e^u u} has Wronskian u^2
        let x = QuasiExpSpace::new(ks(&[0, 1]), vec![p(&[0, 1]), p(&[0, 1])]).unwrap();
        let spec = ModuleSpec::new(
            2,
            ks(&[0, 1]),
            vec![Partition::new(vec![1, 1]).unwrap()],
            ks(&[0]),
            Partition::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        let r = membership_test(&x, &spec, 0.0).unwrap();
        assert!(r.member, "{:?}", r.failures);
        assert_eq!(r.points[0].expected, vec![1, 2]);
    }

    #[test]
    fn generic_space_has_pole_outside_b() {
        let x = QuasiExpSpace::new(ks(&[0, 1]), vec![p(&[5, 1]), p(&[-7, 1])]).unwrap();
        let spec = ModuleSpec::new(
            2,
            ks(&[0, 1]),
            vec![Partition::new(vec![1]).unwrap(), Partition::new(vec![1]).unwrap()],
            ks(&[0, 1]),
            Partition::new(vec![1, 1]).unwrap(),
        )
        .unwrap();
        let r = membership_test(&x, &spec, 0.0).unwrap();
        assert!(!r.member);
        assert!(r.failures.iter().any(|f| f == "pole outside b"));
    }

    #[test]
    fn random_spaces_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (k, degs) in [(vec![0, 1], vec![2, 1]), (vec![-1, 2, 3], vec![2, 1, 1]), (vec![1, 0], vec![3, 0])] {
            let x = QuasiExpSpace::random(ks(&k), &degs, &mut rng).unwrap();
            let data = fundamental_data(&x).unwrap();
            assert!(annihilates(&data.operator, &x, 0.0));
            assert!(check_first_coefficient(&data, x.k(), 0.0));
            assert_eq!(char_at_infinity(&data.operator).unwrap(), Poly::from_roots(x.k().iter()));
            assert_eq!(
                second_char_at_infinity(&data.operator).unwrap(),
                expected_second_char(x.k(), &degs)
            );
            assert_eq!(data.wronski.reconstruct(), data.wronski.monic);
        }
    }

    #[test]
    fn indicial_routes_agree() {
        // a space whose Wronskian has a double root at 0
        let x = QuasiExpSpace::new(ks(&[0, 1]), vec![p(&[0, 0, 1]), p(&[0, 1])]).unwrap();
        let data = fundamental_data(&x).unwrap();
        let mult = data.wronski.monic.root_multiplicity(&rat(0, 1), 0.0);
        let a = indicial_polynomial(&data.operator, &rat(0, 1), mult, 0.0).unwrap();
        let b = indicial_from_cleared(&data.cleared, &rat(0, 1), mult, 0.0).unwrap();
        assert_eq!(a.polynomial.scale(&b.polynomial.lead()), b.polynomial);
    }

    #[test]
    fn exponent_formula() {
        assert_eq!(expected_exponents(2, &[1, 0]), vec![0, 2]);
        assert_eq!(expected_exponents(2, &[2, 0]), vec![0, 3]);
        assert_eq!(expected_exponents(3, &[1]), vec![0, 1, 3]);
    }
}
