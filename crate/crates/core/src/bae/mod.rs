//! Bethe ansatz: leveled root coordinates, the Bethe ansatz equations, the
//! factorized operator `D_Y` and the universal weight function.

mod newton;
mod weight;

pub use newton::{newton_solve, NewtonOptions, NewtonResult, NewtonStats};
pub use weight::{verify_eigenvector, weight_function, EigenvectorReport};

use num_complex::Complex64;

use crate::algebra::{ModuleSpec, Partition};
use crate::error::{Error, Result};
use crate::numeric::{poly_roots, sort_complex};
use crate::polyring::{wronskian, DiffOp, Poly, RatFun};
use crate::quasiexp::QuasiExpSpace;
use crate::scalar::Scalar;

/// Level sizes `l_a = λ_{a+1} + ... + λ_N` for `a = 0..N-1`.
pub fn levels(rank: usize, lambda: &Partition) -> Vec<usize> {
    let lam = lambda.padded(rank);
    (0..rank).map(|a| lam[a..].iter().sum()).collect()
}

/// Roots `t^(a)_j` for `a = 0..N-1`; level 0 holds the evaluation points.
#[derive(Clone, Debug, PartialEq)]
pub struct RootCoordinates {
    pub levels: Vec<Vec<Complex64>>,
}

impl RootCoordinates {
    pub fn new(levels: Vec<Vec<Complex64>>) -> Self {
        RootCoordinates { levels }
    }

    pub fn rank(&self) -> usize {
        self.levels.len()
    }

    /// Level `a`, empty beyond `N - 1`.
    pub fn level(&self, a: usize) -> &[Complex64] {
        self.levels.get(a).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Each level sorted by real, then imaginary part.
    pub fn canonical(&self) -> Self {
        let mut levels = self.levels.clone();
        for l in levels.iter_mut() {
            sort_complex(l);
        }
        RootCoordinates { levels }
    }

    /// Largest distance between the two configurations, matching roots within
    /// each level greedily (levels are multisets).
    pub fn distance(&self, other: &Self) -> f64 {
        if self.levels.len() != other.levels.len() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.levels.iter().zip(&other.levels) {
            if a.len() != b.len() {
                return f64::INFINITY;
            }
            let mut used = vec![false; b.len()];
            for x in a {
                let (k, d) = b
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !used[*k])
                    .map(|(k, y)| (k, (x - y).norm()))
                    .min_by(|p, q| p.1.total_cmp(&q.1))
                    .expect("levels have equal length");
                used[k] = true;
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Roots are simple within each level and consecutive levels share no root.
    pub fn check_generic(&self, tol: f64) -> Result<()> {
        let scale = self.levels.iter().flatten().map(|z| z.norm()).fold(1.0, f64::max);
        let thr = tol * scale;
        for (a, level) in self.levels.iter().enumerate() {
            for i in 0..level.len() {
                for j in i + 1..level.len() {
                    if (level[i] - level[j]).norm() <= thr {
                        return Err(Error::NonGeneric(format!("repeated root at level {a}")));
                    }
                }
                if a > 0 && self.levels[a - 1].iter().any(|z| (z - level[i]).norm() <= thr) {
                    return Err(Error::NonGeneric(format!("levels {} and {a} share a root", a - 1)));
                }
            }
        }
        Ok(())
    }
}

/// Left-hand side minus right-hand side of the Bethe ansatz equations, for
/// `a = 1..N-1`, `j = 1..l_a`, in that order. `k` is zero-based.
pub fn bae_residual(t: &RootCoordinates, k: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = k.len();
    let mut out = Vec::new();
    for a in 1..n {
        for (j, &x) in t.level(a).iter().enumerate() {
            let mut r = -(k[a] - k[a - 1]);
            for &y in t.level(a - 1) {
                r += inv(x - y)?;
            }
            for (jj, &y) in t.level(a).iter().enumerate() {
                if jj != j {
                    r -= 2.0 * inv(x - y)?;
                }
            }
            for &y in t.level(a + 1) {
                r += inv(x - y)?;
            }
            out.push(r);
        }
    }
    Ok(out)
}

fn inv(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::NonGeneric("coincident arguments".into()));
    }
    Ok(1.0 / z)
}

/// `χ^a(u, t) = K_a + sum_j 1/(u - t^(a-1)_j) - sum_j 1/(u - t^(a)_j)`, `a = 1..N`.
pub fn chi(t: &RootCoordinates, k: &[Complex64], a: usize) -> RatFun<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = RatFun::constant(k[a - 1]);
    for y in t.level(a - 1) {
        acc = &acc + &RatFun::simple_pole(one, y);
    }
    for y in t.level(a) {
        acc = &acc - &RatFun::simple_pole(one, y);
    }
    acc
}

/// `D_Y = (d - χ^1)(d - χ^2) ... (d - χ^N)`.
pub fn factorized_operator(t: &RootCoordinates, k: &[Complex64]) -> DiffOp<RatFun<Complex64>> {
    (1..=k.len())
        .map(|a| DiffOp::first_order(RatFun::one(), -&chi(t, k, a)))
        .reduce(|acc, f| acc.compose(&f))
        .expect("rank is positive")
}

/// Root coordinates of a space: `y_a` is the monic polynomial part of
/// `Wr(g_{a+1}, ..., g_N)` and `t^(a)` its roots.
pub fn root_coordinates_from_space(y: &QuasiExpSpace<Complex64>) -> Result<RootCoordinates> {
    let basis = y.basis();
    let rank = basis.len();
    let degrees = y.degrees();
    let mut out = Vec::with_capacity(rank);
    for a in 0..rank {
        let w = wronskian(&basis[a..])?;
        if w.is_zero() {
            return Err(Error::Degenerate(format!("trailing Wronskian from index {} vanishes", a + 1)));
        }
        let expected: usize = degrees[a..].iter().sum();
        let poly = trim_relative(&w.poly, 1e-12);
        if poly.degree() != Some(expected) {
            return Err(Error::Degenerate(format!(
                "trailing Wronskian from index {} has degree {:?}, expected {expected}",
                a + 1,
                poly.degree()
            )));
        }
        out.push(poly_roots(&poly.monic()));
    }
    Ok(RootCoordinates::new(out))
}

fn trim_relative(p: &Poly<Complex64>, tol: f64) -> Poly<Complex64> {
    let scale = p.max_abs();
    let mut c = p.coeffs().to_vec();
    while c.len() > 1 && c.last().unwrap().norm() <= tol * scale {
        c.pop();
    }
    Poly::from_coeffs(c)
}

/// Level-0 roots of a module with only vector-representation factors.
pub fn base_level<F: Scalar>(spec: &ModuleSpec<F>) -> Result<Vec<Complex64>> {
    if !spec.is_vector_case() {
        return Err(Error::InvalidInput(
            "Bethe ansatz solving needs every factor to be the vector representation".into(),
        ));
    }
    Ok(spec.b().iter().map(Scalar::to_c64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn level_profile() {
        assert_eq!(levels(2, &Partition::new(vec![1, 1]).unwrap()), vec![2, 1]);
        assert_eq!(levels(3, &Partition::new(vec![2, 1]).unwrap()), vec![3, 1, 0]);
        assert_eq!(levels(2, &Partition::new(vec![3]).unwrap()), vec![3, 0]);
    }

    #[test]
    fn quadratic_roots_solve_the_equations() {
        let k = [c(0.0), c(1.0)];
        for t in [(3.0 + 5f64.sqrt()) / 2.0, (3.0 - 5f64.sqrt()) / 2.0] {
            let r = RootCoordinates::new(vec![vec![c(0.0), c(1.0)], vec![c(t)]]);
            assert!(bae_residual(&r, &k).unwrap()[0].norm() < 1e-12);
        }
        let empty = RootCoordinates::new(vec![vec![c(0.0), c(1.0)], vec![]]);
        assert!(bae_residual(&empty, &k).unwrap().is_empty());
    }

    #[test]
    fn chi_telescopes() {
        let k = [c(0.0), c(1.0)];
        let t = RootCoordinates::new(vec![vec![c(0.0), c(1.0)], vec![c(2.5)]]);
        let total = &chi(&t, &k, 1) + &chi(&t, &k, 2);
        let expected = &(&RatFun::constant(c(1.0)) + &RatFun::simple_pole(c(1.0), &c(0.0)))
            + &RatFun::simple_pole(c(1.0), &c(1.0));
        for u in [c(3.0), c(-7.0), c(0.5)] {
            assert!((total.eval(&u).unwrap() - expected.eval(&u).unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn factorized_operator_kills_its_kernel() {
        // N = 1: D = d - K - 1/(u - b) kills e^{Ku}(u - b)
        let k = [c(2.0)];
        let t = RootCoordinates::new(vec![vec![c(3.0)]]);
        let d = factorized_operator(&t, &k);
        let x = QuasiExpSpace::new(vec![c(2.0)], vec![Poly::from_coeffs(vec![c(-3.0), c(1.0)])]).unwrap();
        assert!(crate::quasiexp::annihilates(&d, &x, 1e-12));
        let back = root_coordinates_from_space(&x).unwrap();
        assert!(back.distance(&t) < 1e-12);
    }

    #[test]
    fn genericity() {
        let t = RootCoordinates::new(vec![vec![c(0.0), c(1.0)], vec![c(1.0)]]);
        assert!(t.check_generic(1e-10).is_err());
        let t = RootCoordinates::new(vec![vec![c(0.0), c(0.0)], vec![c(1.0)]]);
        assert!(t.check_generic(1e-10).is_err());
    }

    fn vector_spec(k: &[(i64, i64)], b: &[i64], lambda: &[usize]) -> ModuleSpec<crate::scalar::Rat> {
        use crate::scalar::{rat, Rat};
        ModuleSpec::new(
            k.len(),
            k.iter().map(|&(p, q)| rat(p, q)).collect(),
            b.iter().map(|_| Partition::new(vec![1]).unwrap()).collect(),
            b.iter().map(|&x| Rat::from_i64(x)).collect(),
            Partition::new(lambda.to_vec()).unwrap(),
        )
        .unwrap()
    }

    fn solve_and_verify(k: &[(i64, i64)], b: &[i64], lambda: &[usize]) -> usize {
        let spec = vector_spec(k, b, lambda);
        let kc: Vec<Complex64> = spec.k().iter().map(Scalar::to_c64).collect();
        let sizes = levels(spec.rank(), spec.weight());
        let expected = crate::algebra::dimension_oracle(&spec) as usize;
        let out = newton_solve(&base_level(&spec).unwrap(), &kc, &sizes, expected, &NewtonOptions::default()).unwrap();
        let coeffs: Vec<_> = crate::bethe::ambient_coefficients(&spec)
            .unwrap()
            .iter()
            .map(|c| c.to_c64())
            .collect();
        for t in &out.solutions {
            let report = verify_eigenvector(&coeffs, &spec, t, 5, 1e-8).unwrap();
            assert!(report.ok, "{report:?}");
        }
        out.solutions.len()
    }

    #[test]
    fn bethe_vectors_are_eigenvectors() {
        assert_eq!(solve_and_verify(&[(0, 1), (1, 1)], &[0, 1], &[1, 1]), 2);
        assert_eq!(solve_and_verify(&[(0, 1), (1, 2)], &[0, 1, 2, 3], &[2, 2]), 6);
        assert_eq!(solve_and_verify(&[(0, 1), (1, 1), (3, 1)], &[0, 1, 2], &[1, 1, 1]), 6);
    }

    #[test]
    fn integer_twist_has_a_non_generic_point() {
        // K = (0, 1), b = (0, 1, 2, 3): {(u - 2)^2, e^u (u - 1)^2} has Wronskian
        // e^u u (u - 1)(u - 2)(u - 3), so y_1 = (u - 1)^2 meets y_0 at u = 1 and
        // only five of the six points are Bethe solutions.
        use crate::scalar::rat;
        let spec = vector_spec(&[(0, 1), (1, 1)], &[0, 1, 2, 3], &[2, 2]);
        let x = QuasiExpSpace::new(
            vec![rat(0, 1), rat(1, 1)],
            vec![
                Poly::from_coeffs(vec![rat(4, 1), rat(-4, 1), rat(1, 1)]),
                Poly::from_coeffs(vec![rat(1, 1), rat(-2, 1), rat(1, 1)]),
            ],
        )
        .unwrap();
        let report = crate::quasiexp::membership_test(&x, &spec, 1e-12).unwrap();
        assert!(report.member, "{:?}", report.failures);
        let t = root_coordinates_from_space(&x.to_c64()).unwrap();
        assert!(t.check_generic(1e-6).is_err());
        assert_eq!(solve_and_verify(&[(0, 1), (1, 1)], &[0, 1, 2, 3], &[2, 2]), 5);
    }

    #[test]
    fn perturbed_roots_are_not_eigenvectors() {
        let spec = vector_spec(&[(0, 1), (1, 1)], &[0, 1], &[1, 1]);
        let coeffs: Vec<_> = crate::bethe::ambient_coefficients(&spec)
            .unwrap()
            .iter()
            .map(|c| c.to_c64())
            .collect();
        let t = RootCoordinates::new(vec![vec![c(0.0), c(1.0)], vec![c((3.0 + 5f64.sqrt()) / 2.0 + 0.1)]]);
        assert!(!verify_eigenvector(&coeffs, &spec, &t, 5, 1e-8).unwrap().ok);
    }

    #[test]
    fn highest_weight_vector_is_an_eigenvector() {
        let spec = vector_spec(&[(0, 1), (2, 1)], &[0, 1, 3], &[3]);
        let sizes = levels(2, spec.weight());
        assert_eq!(sizes, vec![3, 0]);
        let kc: Vec<Complex64> = spec.k().iter().map(Scalar::to_c64).collect();
        let out = newton_solve(&base_level(&spec).unwrap(), &kc, &sizes, 1, &NewtonOptions::default()).unwrap();
        assert_eq!(out.solutions.len(), 1);
        let (basis, w) = weight_function(2, &out.solutions[0].levels).unwrap();
        assert_eq!(basis, vec![vec![0, 0, 0]]);
        assert_eq!(w, vec![c(1.0)]);
        let coeffs: Vec<_> = crate::bethe::ambient_coefficients(&spec)
            .unwrap()
            .iter()
            .map(|m| m.to_c64())
            .collect();
        assert!(verify_eigenvector(&coeffs, &spec, &out.solutions[0], 5, 1e-8).unwrap().ok);
    }

    #[test]
    fn factorized_operator_is_symmetric_within_levels() {
        let k = [c(0.0), c(1.0), c(3.0)];
        let a = RootCoordinates::new(vec![
            vec![c(0.0), c(1.0), c(2.0)],
            vec![c(0.3), Complex64::new(1.7, 0.2)],
            vec![c(-0.6)],
        ]);
        let mut b = a.clone();
        b.levels[1].reverse();
        b.levels[0].rotate_left(1);
        let (da, db) = (factorized_operator(&a, &k), factorized_operator(&b, &k));
        let (_, wa) = weight_function(3, &a.levels).unwrap();
        let (_, wb) = weight_function(3, &b.levels).unwrap();
        // permuting level 0 permutes the factors, so only compare ω under level >= 1 swaps
        let mut c1 = a.clone();
        c1.levels[1].reverse();
        let (_, wc) = weight_function(3, &c1.levels).unwrap();
        for (x, y) in wa.iter().zip(&wc) {
            assert!((x - y).norm() < 1e-12);
        }
        assert_ne!(wa, wb);
        for u in [c(5.0), Complex64::new(-2.0, 1.0)] {
            for i in 1..=3 {
                let (x, y) = (da.h(i).eval(&u).unwrap(), db.h(i).eval(&u).unwrap());
                assert!((x - y).norm() < 1e-10 * x.norm().max(1.0));
            }
        }
    }

    #[test]
    fn factorized_operator_has_the_twist_at_infinity() {
        let k = [c(0.0), c(1.0), c(3.0)];
        let t = RootCoordinates::new(vec![
            vec![c(0.0), c(1.0), c(2.0)],
            vec![c(0.3), Complex64::new(1.7, 0.2)],
            vec![c(-0.6)],
        ]);
        let chi = crate::quasiexp::char_at_infinity(&factorized_operator(&t, &k)).unwrap();
        assert!(chi.approx_eq(&Poly::from_roots(k.iter()), 1e-12));
    }
}
