use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{bae_residual, RootCoordinates};
use crate::algebra::WeightSpace;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct NewtonOptions {
    pub seed: u64,
    /// Starts per expected solution.
    pub starts_per_solution: usize,
    pub max_iterations: usize,
    /// Convergence threshold on the sup norm of the residual.
    pub tol_residual: f64,
    /// Two solutions closer than this are the same (up to reordering within levels).
    pub tol_dedup: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { seed: 0, starts_per_solution: 50, max_iterations: 100, tol_residual: 1e-12, tol_dedup: 1e-8 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonStats {
    pub starts: usize,
    pub converged: usize,
    pub non_generic: usize,
    /// Paths tracked from the large-twist limit, and how many reached a solution.
    pub paths: usize,
    pub paths_converged: usize,
}

#[derive(Clone, Debug)]
pub struct NewtonResult {
    /// Distinct generic solutions, each level sorted.
    pub solutions: Vec<RootCoordinates>,
    pub residuals: Vec<f64>,
    pub stats: NewtonStats,
}

/// Solves the Bethe ansatz equations by damped Newton iteration.
///
/// `base` is level 0 (the evaluation points), `sizes[a]` the number of roots at
/// level `a` (so `sizes[0] == base.len()`), `expected` the number of solutions
/// sought, which only sets the number of random starts.
///
/// Random starts alone are easily captured by pairs of roots collapsing onto an
/// evaluation point, so they are complemented by one start per weight-basis
/// tensor, continued from the large-twist limit (see [`continuation_path`]).
pub fn newton_solve(
    base: &[Complex64],
    k: &[Complex64],
    sizes: &[usize],
    expected: usize,
    opts: &NewtonOptions,
) -> Result<NewtonResult> {
    if sizes.len() != k.len() || sizes.first() != Some(&base.len()) {
        return Err(Error::InvalidInput("level sizes do not match the evaluation points".into()));
    }
    let unknowns: usize = sizes[1..].iter().sum();
    if unknowns == 0 {
        let mut levels = vec![base.to_vec()];
        levels.extend(sizes[1..].iter().map(|_| Vec::new()));
        let t = RootCoordinates::new(levels).canonical();
        let generic = t.check_generic(opts.tol_dedup).is_ok();
        return Ok(NewtonResult {
            solutions: if generic { vec![t] } else { Vec::new() },
            residuals: if generic { vec![0.0] } else { Vec::new() },
            stats: NewtonStats { starts: 1, converged: 1, non_generic: usize::from(!generic), paths: 0, paths_converged: 0 },
        });
    }
    let radius = 2.0 * base.iter().chain(k).map(|z| z.norm()).fold(1.0, f64::max);
    let starts = opts.starts_per_solution * expected.max(1);

    let runs: Vec<Option<(RootCoordinates, f64)>> = (0..starts)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(idx as u64));
            let x0: Vec<Complex64> = (0..unknowns).map(|_| random_in_disk(&mut rng, radius)).collect();
            run_newton(base, k, sizes, x0, opts)
        })
        .collect();

    let chains = chain_starts(base, sizes);
    let theta = {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37_79b9_7f4a_7c15);
        rng.gen_range(0.3..std::f64::consts::TAU - 0.3)
    };
    let tracked: Vec<Option<(RootCoordinates, f64)>> = chains
        .into_par_iter()
        .map(|x0| continuation_path(base, k, sizes, x0, theta, opts))
        .collect();

    let mut stats = NewtonStats {
        starts,
        converged: 0,
        non_generic: 0,
        paths: tracked.len(),
        paths_converged: tracked.iter().filter(|r| r.is_some()).count(),
    };
    let mut solutions: Vec<RootCoordinates> = Vec::new();
    let mut residuals = Vec::new();
    for (t, res) in tracked.into_iter().chain(runs).flatten() {
        stats.converged += 1;
        if t.check_generic(opts.tol_dedup).is_err() {
            stats.non_generic += 1;
            continue;
        }
        if solutions.iter().any(|s| s.distance(&t) <= opts.tol_dedup) {
            continue;
        }
        solutions.push(t.canonical());
        residuals.push(res);
    }
    Ok(NewtonResult { solutions, residuals, stats })
}

/// One start per tensor `J` of the weight basis: factor `s` carries a chain of
/// roots at levels `1..=J[s]` just beside `b_s` (offsets are added later).
fn chain_starts(base: &[Complex64], sizes: &[usize]) -> Vec<Vec<usize>> {
    let weight: Vec<usize> = (0..sizes.len())
        .map(|a| sizes[a] - sizes.get(a + 1).copied().unwrap_or(0))
        .collect();
    debug_assert_eq!(weight.iter().sum::<usize>(), base.len());
    WeightSpace::new(&weight).basis().to_vec()
}

/// Tracks the solution attached to `j` from `K -> s K`, `|s|` large, down to
/// `s = 1` along `s = exp((1 - τ)(ln M + iθ))`.
///
/// For large `|s|` each chain solves `1/d_a - 1/d_{a+1} = s (K_{a+1} - K_a)`,
/// i.e. consecutive roots differ by `d_a = 1/(s (K_N - K_a))`.
fn continuation_path(
    base: &[Complex64],
    k: &[Complex64],
    sizes: &[usize],
    j: Vec<usize>,
    theta: f64,
    opts: &NewtonOptions,
) -> Option<(RootCoordinates, f64)> {
    let n = k.len();
    let gap = min_gap(base).min(min_gap(k)).max(1e-6);
    let spread = base.iter().chain(k).map(|z| z.norm()).fold(1.0, f64::max);
    let log_m = (1e3 * spread / (gap * gap)).ln();
    let scale = |tau: f64| Complex64::new((1.0 - tau) * log_m, (1.0 - tau) * theta).exp();
    let scaled = |s: Complex64| -> Vec<Complex64> { k.iter().map(|x| x * s).collect() };

    let s0 = scale(0.0);
    let mut x = Vec::with_capacity(sizes[1..].iter().sum());
    for a in 1..n {
        for (s, &js) in j.iter().enumerate() {
            if js >= a {
                let offset: Complex64 = (1..=a).map(|c| 1.0 / (s0 * (k[n - 1] - k[c - 1]))).sum();
                x.push(base[s] + offset);
            }
        }
    }
    // along the path the residual is measured relative to the size of the twist
    let path_tol = |s: Complex64| 1e-10 * s.norm().max(1.0) * spread;
    let (mut t, _) = correct(base, &scaled(s0), sizes, x.clone(), 20, path_tol(s0))?;
    x = flatten(&t);

    let mut tau: f64 = 0.0;
    let mut dtau: f64 = 0.02;
    while tau < 1.0 {
        let next = (tau + dtau).min(1.0);
        let sn = scale(next);
        match correct(base, &scaled(sn), sizes, x.clone(), 6, path_tol(sn)) {
            Some((tn, _)) if step_is_small(&t, &tn) => {
                t = tn;
                x = flatten(&t);
                tau = next;
                dtau = (dtau * 1.5).min(0.1);
            }
            _ => {
                dtau *= 0.5;
                if dtau < 1e-7 {
                    return None;
                }
            }
        }
    }
    correct(base, k, sizes, x, opts.max_iterations, opts.tol_residual)
}

/// Guards against path jumping: no root moves by more than a fixed fraction of
/// its distance to the nearest other root.
fn step_is_small(a: &RootCoordinates, b: &RootCoordinates) -> bool {
    let all: Vec<Complex64> = a.levels.iter().flatten().copied().collect();
    let fa = flatten(a);
    let fb = flatten(b);
    fa.iter().zip(&fb).all(|(p, q)| {
        let near = all
            .iter()
            .map(|z| (z - p).norm())
            .filter(|&d| d > 0.0)
            .fold(f64::INFINITY, f64::min);
        (p - q).norm() <= 0.25 * near
    })
}

fn flatten(t: &RootCoordinates) -> Vec<Complex64> {
    t.levels[1..].iter().flatten().copied().collect()
}

fn min_gap(v: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            g = g.min((v[i] - v[j]).norm());
        }
    }
    g
}

/// Plain Newton on the residual itself; only used close to a solution.
fn correct(
    base: &[Complex64],
    k: &[Complex64],
    sizes: &[usize],
    mut x: Vec<Complex64>,
    iterations: usize,
    tol: f64,
) -> Option<(RootCoordinates, f64)> {
    let scale = x.iter().chain(base).map(|z| z.norm()).fold(1.0, f64::max);
    for _ in 0..=iterations {
        let t = assemble(base, sizes, &x);
        let r = bae_residual(&t, k).ok()?;
        let res = sup(&r);
        if !res.is_finite() {
            return None;
        }
        if res <= tol {
            return Some((t, res));
        }
        let step = jacobian(&t, sizes).lu().solve(&DVector::from_vec(r))?;
        if step.iter().any(|d| !d.is_finite() || d.norm() > scale) {
            return None;
        }
        for (a, d) in x.iter_mut().zip(step.iter()) {
            *a -= d;
        }
    }
    None
}

fn random_in_disk(rng: &mut impl Rng, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    let th = std::f64::consts::TAU * rng.gen::<f64>();
    Complex64::from_polar(r, th)
}

fn assemble(base: &[Complex64], sizes: &[usize], x: &[Complex64]) -> RootCoordinates {
    let mut levels = vec![base.to_vec()];
    let mut off = 0;
    for &l in &sizes[1..] {
        levels.push(x[off..off + l].to_vec());
        off += l;
    }
    RootCoordinates::new(levels)
}

fn sup(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn run_newton(
    base: &[Complex64],
    k: &[Complex64],
    sizes: &[usize],
    mut x: Vec<Complex64>,
    opts: &NewtonOptions,
) -> Option<(RootCoordinates, f64)> {
    // Steps follow the cleared equations `Q_j R_j` (polynomial, no poles);
    // convergence is judged on the residual `R` itself.
    let mut t = assemble(base, sizes, &x);
    let mut r = bae_residual(&t, k).ok()?;
    let mut g = cleared(&t, sizes, &r);
    let mut norm = sup(&g);
    for _ in 0..opts.max_iterations {
        let res = sup(&r);
        if !res.is_finite() || !norm.is_finite() {
            return None;
        }
        if res <= opts.tol_residual {
            return Some((t, res));
        }
        let jac = cleared_jacobian(&t, sizes, &r);
        let step = jac.lu().solve(&DVector::from_vec(g.clone()))?;
        let mut damping = 1.0;
        loop {
            let trial: Vec<Complex64> = x.iter().zip(step.iter()).map(|(a, d)| a - d * damping).collect();
            let tt = assemble(base, sizes, &trial);
            if let Ok(rt) = bae_residual(&tt, k) {
                let gt = cleared(&tt, sizes, &rt);
                let nt = sup(&gt);
                if nt.is_finite() && (nt < norm || damping < 1e-3) {
                    x = trial;
                    t = tt;
                    r = rt;
                    g = gt;
                    norm = nt;
                    break;
                }
            }
            damping *= 0.5;
            if damping < 1e-6 {
                return None;
            }
        }
    }
    let res = sup(&r);
    (res <= opts.tol_residual).then_some((t, res))
}

/// `Q_j = prod (t^(a)_j - y)` over every root `y` entering equation `(a, j)`.
fn clearing_factors(t: &RootCoordinates, sizes: &[usize]) -> Vec<Complex64> {
    let mut out = Vec::new();
    for a in 1..sizes.len() {
        for (j, &x) in t.level(a).iter().enumerate() {
            let mut q = Complex64::new(1.0, 0.0);
            for &y in t.level(a - 1).iter().chain(t.level(a + 1)) {
                q *= x - y;
            }
            for (jj, &y) in t.level(a).iter().enumerate() {
                if jj != j {
                    q *= x - y;
                }
            }
            out.push(q);
        }
    }
    out
}

fn cleared(t: &RootCoordinates, sizes: &[usize], r: &[Complex64]) -> Vec<Complex64> {
    clearing_factors(t, sizes).iter().zip(r).map(|(q, r)| q * r).collect()
}

/// `d(Q R) = Q (dR + R dlog Q)`.
fn cleared_jacobian(t: &RootCoordinates, sizes: &[usize], r: &[Complex64]) -> DMatrix<Complex64> {
    let mut jac = jacobian(t, sizes);
    let q = clearing_factors(t, sizes);
    let offsets = level_offsets(sizes);
    for a in 1..sizes.len() {
        for (j, &x) in t.level(a).iter().enumerate() {
            let row = offsets[a] + j;
            let mut dlog_self = Complex64::new(0.0, 0.0);
            for nb in [a - 1, a, a + 1] {
                for (jj, &y) in t.level(nb).iter().enumerate() {
                    if nb == a && jj == j {
                        continue;
                    }
                    let inv = 1.0 / (x - y);
                    dlog_self += inv;
                    if nb >= 1 && nb < sizes.len() {
                        jac[(row, offsets[nb] + jj)] -= r[row] * inv;
                    }
                }
            }
            jac[(row, row)] += r[row] * dlog_self;
            for col in 0..jac.ncols() {
                jac[(row, col)] *= q[row];
            }
        }
    }
    jac
}

fn level_offsets(sizes: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize; sizes.len() + 1];
    for a in 1..sizes.len() {
        offsets[a + 1] = offsets[a] + sizes[a];
    }
    offsets
}

/// Holomorphic Jacobian of [`bae_residual`] with respect to levels `1..N-1`.
fn jacobian(t: &RootCoordinates, sizes: &[usize]) -> DMatrix<Complex64> {
    let n: usize = sizes[1..].iter().sum();
    let offsets = level_offsets(sizes);
    let mut jac = DMatrix::zeros(n, n);
    let var = |a: usize, j: usize| (a >= 1 && a < sizes.len()).then(|| offsets[a] + j);
    for a in 1..sizes.len() {
        for (j, &x) in t.level(a).iter().enumerate() {
            let row = offsets[a] + j;
            let mut diag = Complex64::new(0.0, 0.0);
            for nb in [a - 1, a + 1] {
                for (jj, &y) in t.level(nb).iter().enumerate() {
                    let s = 1.0 / ((x - y) * (x - y));
                    diag -= s;
                    if let Some(col) = var(nb, jj) {
                        jac[(row, col)] += s;
                    }
                }
            }
            for (jj, &y) in t.level(a).iter().enumerate() {
                if jj != j {
                    let s = 2.0 / ((x - y) * (x - y));
                    diag += s;
                    jac[(row, offsets[a] + jj)] -= s;
                }
            }
            jac[(row, row)] += diag;
        }
    }
    jac
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let base = vec![c(0.0), c(1.0), c(3.0)];
        let k = [c(0.0), c(1.0), c(-2.0)];
        let sizes = [3, 2, 1];
        let x = vec![Complex64::new(0.4, 0.3), Complex64::new(2.1, -0.2), Complex64::new(-1.3, 0.7)];
        let jac = jacobian(&assemble(&base, &sizes, &x), &sizes);
        let h = 1e-6;
        let r0 = bae_residual(&assemble(&base, &sizes, &x), &k).unwrap();
        for col in 0..3 {
            let mut xp = x.clone();
            xp[col] += h;
            let rp = bae_residual(&assemble(&base, &sizes, &xp), &k).unwrap();
            for row in 0..3 {
                let fd = (rp[row] - r0[row]) / h;
                assert!((fd - jac[(row, col)]).norm() < 1e-4, "({row},{col}): {fd} vs {}", jac[(row, col)]);
            }
        }
    }

    #[test]
    fn cleared_jacobian_matches_finite_differences() {
        let base = vec![c(0.0), c(1.0), c(3.0)];
        let k = [c(0.0), c(1.0), c(-2.0)];
        let sizes = [3, 2, 1];
        let x = vec![Complex64::new(0.4, 0.3), Complex64::new(2.1, -0.2), Complex64::new(-1.3, 0.7)];
        let g = |x: &[Complex64]| {
            let t = assemble(&base, &sizes, x);
            let r = bae_residual(&t, &k).unwrap();
            cleared(&t, &sizes, &r)
        };
        let t = assemble(&base, &sizes, &x);
        let jac = cleared_jacobian(&t, &sizes, &bae_residual(&t, &k).unwrap());
        let h = 1e-6;
        let g0 = g(&x);
        for col in 0..3 {
            let mut xp = x.clone();
            xp[col] += h;
            let gp = g(&xp);
            for row in 0..3 {
                let fd = (gp[row] - g0[row]) / h;
                assert!((fd - jac[(row, col)]).norm() < 1e-4, "({row},{col}): {fd} vs {}", jac[(row, col)]);
            }
        }
    }

    #[test]
    fn finds_both_quadratic_roots() {
        let out = newton_solve(&[c(0.0), c(1.0)], &[c(0.0), c(1.0)], &[2, 1], 2, &NewtonOptions::default()).unwrap();
        assert_eq!(out.solutions.len(), 2);
        let mut roots: Vec<f64> = out.solutions.iter().map(|s| s.level(1)[0].re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((roots[1] - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn deterministic_for_a_seed() {
        let opts = NewtonOptions { seed: 7, ..Default::default() };
        let a = newton_solve(&[c(0.0), c(1.0), c(2.0)], &[c(0.0), c(1.0)], &[3, 1], 3, &opts).unwrap();
        let b = newton_solve(&[c(0.0), c(1.0), c(2.0)], &[c(0.0), c(1.0)], &[3, 1], 3, &opts).unwrap();
        assert_eq!(a.solutions, b.solutions);
        assert_eq!(a.solutions.len(), 3);
    }
}
