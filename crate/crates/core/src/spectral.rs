//! Joint spectrum of the Bethe operator coefficients, the scalar operators of
//! its eigenvectors, and their quasi-exponential kernels.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::ModuleSpec;
use crate::bethe::BetheOperator;
use crate::error::{Error, Result};
use crate::numeric::{eigenvalues, least_squares, null_space, smallest_right_singular, CMat, CVec};
use crate::polyring::{rational_reconstruct, DiffOp, Poly, RatFun};
use crate::quasiexp::QuasiExpSpace;
use crate::scalar::Scalar;
use crate::util::primes_from;

#[derive(Clone, Debug)]
pub struct SpectralOptions {
    pub seed: u64,
    /// Relative tolerance for eigenvector residuals.
    pub tol_residual: f64,
    /// Relative tolerance for eigenvalue clustering.
    pub tol_cluster: f64,
    /// Number of sample points `u_m`.
    pub samples: usize,
    pub max_attempts: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            seed: 0,
            tol_residual: 1e-9,
            tol_cluster: 1e-7,
            samples: 5,
            max_attempts: 8,
        }
    }
}

/// One joint eigenvector (or generalized eigenspace) and its eigenvalues
/// `h_i(u)`, stored over the common denominator `prod_s (u - b_s)^{n_s}`.
#[derive(Clone, Debug)]
pub struct EigenCharacter {
    pub vector: CVec,
    pub h: Vec<RatFun<Complex64>>,
    pub residual: f64,
    /// Dimension of the generalized joint eigenspace.
    pub multiplicity: usize,
    /// Dimension of the joint eigenspace proper.
    pub eigen_dim: usize,
}

impl EigenCharacter {
    pub fn diagonalizable(&self) -> bool {
        self.eigen_dim == self.multiplicity
    }
}

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub characters: Vec<EigenCharacter>,
    pub points: Vec<f64>,
    /// Seed that produced the accepted random combination.
    pub seed_used: u64,
    pub attempts: u64,
}

impl Spectrum {
    pub fn diagonalizable(&self) -> bool {
        self.characters.iter().all(EigenCharacter::diagonalizable)
    }

    /// Whether every joint eigenspace is one-dimensional.
    pub fn simple(&self) -> bool {
        self.characters.iter().all(|c| c.multiplicity == 1)
    }
}

/// Sample points `13, 17, 19, 23, ...` avoiding the evaluation points.
pub fn spectral_points<F: Scalar>(b: &[F], count: usize) -> Vec<F> {
    crate::bethe::sample_points(b, 13, count)
}

struct Block {
    basis: CMat,
    eigen: CMat,
}

/// Splits the weight space into joint generalized eigenspaces of all
/// `B_i(u_m)` using random combinations `T = sum c B_i(u_m)`.
pub fn joint_diagonalize<F: Scalar>(op: &BetheOperator<F>, b: &[F], opts: &SpectralOptions) -> Result<Spectrum> {
    let points = spectral_points(b, opts.samples);
    let mut mats = Vec::new();
    for u in &points {
        for i in 1..=op.rank() {
            let m = op.eval(i, u)?.to_c64();
            let norm = m.norm();
            mats.push(if norm > 0.0 { m / Complex64::new(norm, 0.0) } else { m });
        }
    }
    let numerators: Vec<Vec<CMat>> = (1..=op.rank())
        .map(|i| op.numerator(i).iter().map(|a| a.to_c64()).collect())
        .collect();
    let p = op.normalizer().to_c64();
    let d = op.dim();
    let full = mats_full(op, &points)?;
    let mut last_err = None;
    for attempt in 0..opts.max_attempts {
        let seed = opts.seed.wrapping_add(attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match decompose(&mats, CMat::identity(d, d), opts, &mut rng) {
            Ok(blocks) => {
                let characters = blocks
                    .into_iter()
                    .map(|blk| character_of(&blk, &numerators, &p, &full, d))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Spectrum {
                    characters,
                    points: points.iter().map(|u| u.to_c64().re).collect(),
                    seed_used: seed,
                    attempts: attempt + 1,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or_else(|| Error::Spectral("no attempts made".into())))
}

fn mats_full<F: Scalar>(op: &BetheOperator<F>, points: &[F]) -> Result<Vec<CMat>> {
    let mut out = Vec::new();
    for u in points {
        for i in 1..=op.rank() {
            out.push(op.eval(i, u)?.to_c64());
        }
    }
    Ok(out)
}

fn decompose(mats: &[CMat], q: CMat, opts: &SpectralOptions, rng: &mut ChaCha8Rng) -> Result<Vec<Block>> {
    let m = q.ncols();
    if m == 1 {
        return Ok(vec![Block { eigen: q.clone(), basis: q }]);
    }
    let mut t = CMat::zeros(m, m);
    for a in mats {
        t += a * Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
    }
    let scale = t.norm().max(f64::MIN_POSITIVE);
    let tol = opts.tol_cluster * scale;
    let clusters = cluster(eigenvalues(&t), tol)?;
    if clusters.len() == 1 {
        // one joint eigenvalue; the block is non-semisimple unless every generator is scalar
        let mut stacked = Vec::new();
        let mut all_scalar = true;
        for a in mats {
            let mu = a.trace() / Complex64::new(m as f64, 0.0);
            let shifted = a - CMat::identity(m, m) * mu;
            if shifted.norm() > opts.tol_residual * a.norm().max(1.0) {
                all_scalar = false;
            }
            stacked.push(shifted);
        }
        if all_scalar {
            return Ok(vec![Block { eigen: q.clone(), basis: q }]);
        }
        let rows: usize = stacked.iter().map(|s| s.nrows()).sum();
        let mut big = CMat::zeros(rows, m);
        let mut r0 = 0;
        for s in &stacked {
            big.view_mut((r0, 0), (m, m)).copy_from(s);
            r0 += m;
        }
        let kernel = null_space(&big, 10.0 * opts.tol_cluster);
        let eigen = if kernel.ncols() == 0 { smallest_right_singular(&big, 1) } else { kernel };
        return Ok(vec![Block {
            eigen: &q * eigen,
            basis: q,
        }]);
    }
    let mut out = Vec::new();
    for (lambda, mult) in clusters {
        let shifted = &t - CMat::identity(m, m) * lambda;
        let mut power = CMat::identity(m, m);
        for _ in 0..mult {
            power = &power * &shifted;
        }
        let g = smallest_right_singular(&power, mult);
        let restricted: Vec<CMat> = mats.iter().map(|a| g.adjoint() * a * &g).collect();
        out.extend(decompose(&restricted, &q * &g, opts, rng)?);
    }
    Ok(out)
}

/// Greedy clustering of eigenvalues sorted by real part; fails when two
/// clusters are closer than ten times the tolerance.
fn cluster(mut ev: Vec<Complex64>, tol: f64) -> Result<Vec<(Complex64, usize)>> {
    crate::numeric::sort_complex(&mut ev);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in ev {
        match groups.iter_mut().find(|g| g.iter().any(|w| (w - z).norm() <= tol)) {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    let centers: Vec<(Complex64, usize)> = groups
        .iter()
        .map(|g| (g.iter().sum::<Complex64>() / Complex64::new(g.len() as f64, 0.0), g.len()))
        .collect();
    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            if (centers[i].0 - centers[j].0).norm() <= 10.0 * tol {
                return Err(Error::Spectral("ambiguous eigenvalue clustering".into()));
            }
        }
    }
    Ok(centers)
}

fn character_of(blk: &Block, numerators: &[Vec<CMat>], p: &Poly<Complex64>, mats: &[CMat], d: usize) -> Result<EigenCharacter> {
    let mut v: CVec = blk.eigen.column(0).into_owned();
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::Spectral("zero eigenvector".into()));
    }
    v /= Complex64::new(norm, 0.0);
    let rq = |m: &CMat| (v.adjoint() * m * &v)[(0, 0)];
    let h = numerators
        .iter()
        .map(|coeffs| {
            let num = Poly::from_coeffs(coeffs.iter().map(rq).collect());
            RatFun::new(num, p.clone())
        })
        .collect::<Result<Vec<_>>>()?;
    let residual = mats
        .iter()
        .map(|m| {
            let mv = m * &v;
            let mu = rq(m);
            (&mv - &v * mu).norm() / m.norm().max(1.0)
        })
        .fold(0.0, f64::max);
    debug_assert_eq!(v.len(), d);
    Ok(EigenCharacter {
        vector: v,
        h,
        residual,
        multiplicity: blk.basis.ncols(),
        eigen_dim: blk.eigen.ncols(),
    })
}

/// `D^B_v = d^N + sum_i h_i(u) d^{N-i}`.
pub fn character_to_operator(ch: &EigenCharacter) -> DiffOp<RatFun<Complex64>> {
    DiffOp::from_h(ch.h.clone(), &RatFun::one())
}

/// Recovers `h_i` from Rayleigh quotients at `n + 2` sample points with the
/// numerator degree bounded by `n` and denominator `prod_s (u - b_s)^{n_s}`;
/// fails when the sampled values are not of that shape.
pub fn reconstruct_character<F: Scalar>(
    op: &BetheOperator<F>,
    spec: &ModuleSpec<F>,
    v: &CVec,
    tol: f64,
) -> Result<Vec<RatFun<Complex64>>> {
    let n = spec.n();
    let b: Vec<Complex64> = spec.b().iter().map(Scalar::to_c64).collect();
    let pts: Vec<u64> = primes_from(13)
        .filter(|&q| b.iter().all(|z| *z != Complex64::new(q as f64, 0.0)))
        .take(n + 2)
        .collect();
    let den = spec.normalizer().to_c64();
    (1..=op.rank())
        .map(|i| {
            let mut samples = Vec::new();
            for &q in &pts {
                let m = op.eval(i, &F::from_i64(q as i64))?.to_c64();
                let val = (v.adjoint() * m * v)[(0, 0)] / v.norm_squared();
                samples.push((Complex64::new(q as f64, 0.0), val));
            }
            rational_reconstruct(&samples, n, &den, tol).map_err(|e| Error::CharacterShape(e.to_string()))
        })
        .collect()
}

/// Largest relative coefficient difference between two lists of rational
/// functions sharing the denominator `den`.
pub fn character_distance(a: &[RatFun<Complex64>], b: &[RatFun<Complex64>], den: &Poly<Complex64>) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        let nx = x.numerator_over(den, 1e-6)?;
        let ny = y.numerator_over(den, 1e-6)?;
        let scale = nx.max_abs().max(ny.max_abs()).max(1.0);
        worst = worst.max((&nx - &ny).max_abs() / scale);
    }
    Ok(worst)
}

/// Number of pairwise distinct characters, comparing numerators over `den`.
pub fn count_distinct(chars: &[EigenCharacter], den: &Poly<Complex64>, tol: f64) -> Result<usize> {
    let mut reps: Vec<&EigenCharacter> = Vec::new();
    for c in chars {
        let mut fresh = true;
        for r in &reps {
            if character_distance(&c.h, &r.h, den)? <= tol {
                fresh = false;
                break;
            }
        }
        if fresh {
            reps.push(c);
        }
    }
    Ok(reps.len())
}

/// Posits `f_i = e^{K_i u}(u^{λ_i} + sum_j x_j u^{λ_i - j})` and solves
/// `D f_i = 0` for `x` after clearing denominators, by least squares.
pub fn kernel_from_operator<F: Scalar>(
    d: &DiffOp<RatFun<Complex64>>,
    spec: &ModuleSpec<F>,
    tol: f64,
) -> Result<QuasiExpSpace<Complex64>> {
    let rank = spec.rank();
    if d.order() != rank || !d.is_monic() {
        return Err(Error::InvalidInput("operator must be monic of the module's rank".into()));
    }
    let den = d
        .coeffs()
        .iter()
        .fold(Poly::one(), |acc: Poly<Complex64>, c| lcm_approx(&acc, c.den()));
    // cleared[k] multiplies d^k
    let cleared = d
        .coeffs()
        .iter()
        .map(|c| c.numerator_over(&den, 1e-8))
        .collect::<Result<Vec<_>>>()?;
    let lambda = spec.weight().padded(rank);
    let mut polys = Vec::with_capacity(rank);
    for (i, &deg) in lambda.iter().enumerate() {
        let kappa = spec.k()[i].to_c64();
        let image = |e: usize| -> Poly<Complex64> {
            let mut cur = Poly::monomial(Complex64::new(1.0, 0.0), e);
            let mut acc = Poly::zero();
            for c in &cleared {
                acc = &acc + &(c * &cur);
                cur = &cur.scale(&kappa) + &cur.derivative();
            }
            acc
        };
        let images: Vec<Poly<Complex64>> = (0..=deg).map(image).collect();
        let rows = images.iter().map(|g| g.coeffs().len()).max().unwrap_or(0).max(1);
        let mut a = CMat::zeros(rows, deg);
        for j in 1..=deg {
            for (r, c) in images[deg - j].coeffs().iter().enumerate() {
                a[(r, j - 1)] = *c;
            }
        }
        let mut rhs = CVec::zeros(rows);
        for (r, c) in images[deg].coeffs().iter().enumerate() {
            rhs[r] = -*c;
        }
        let (x, res) = least_squares(&a, &rhs);
        let scale = images.iter().map(Poly::max_abs).fold(1.0, f64::max);
        if res > tol * scale {
            return Err(Error::NoKernel(format!(
                "residual {:.3e} for f_{} (degree {deg})",
                res / scale,
                i + 1
            )));
        }
        let mut coeffs: Vec<Complex64> = x.iter().rev().copied().collect();
        coeffs.push(Complex64::new(1.0, 0.0));
        polys.push(Poly::from_coeffs(coeffs));
    }
    QuasiExpSpace::new(spec.k().iter().map(Scalar::to_c64).collect(), polys)
}

/// A common multiple of two monic denominators: their product divided by the
/// factors of `b` that already divide `a` (within tolerance).
fn lcm_approx(a: &Poly<Complex64>, b: &Poly<Complex64>) -> Poly<Complex64> {
    if b.is_constant() {
        return a.clone();
    }
    if a.is_constant() {
        return b.clone();
    }
    if b.div_exact(a, 1e-10).is_ok() {
        return b.clone();
    }
    if a.div_exact(b, 1e-10).is_ok() {
        return a.clone();
    }
    a * b
}

/// Dimension of the span of products of `mats` applied to a random vector
/// (breadth-first, Gram-Schmidt with relative threshold `tol`).
pub fn cyclic_span_dimension(mats: &[CMat], seed: u64, tol: f64) -> usize {
    let Some(first) = mats.first() else {
        return 0;
    };
    let d = first.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = CVec::from_fn(d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let mut basis: Vec<CVec> = Vec::new();
    let mut queue = std::collections::VecDeque::new();
    let add = |w: CVec, basis: &mut Vec<CVec>| -> Option<CVec> {
        let norm0 = w.norm();
        let mut r = w;
        for q in basis.iter() {
            let c = (q.adjoint() * &r)[(0, 0)];
            r -= q * c;
        }
        let norm = r.norm();
        if norm > tol * norm0.max(f64::MIN_POSITIVE) {
            let q = r / Complex64::new(norm, 0.0);
            basis.push(q.clone());
            Some(q)
        } else {
            None
        }
    };
    if let Some(q) = add(v, &mut basis) {
        queue.push_back(q);
    }
    while let Some(w) = queue.pop_front() {
        if basis.len() == d {
            break;
        }
        for m in mats {
            if let Some(q) = add(m * &w, &mut basis) {
                queue.push_back(q);
            }
        }
    }
    basis.len()
}
