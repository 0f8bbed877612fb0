use num_complex::Complex64;
use serde::Serialize;

use super::{factorized_operator, RootCoordinates};
use crate::algebra::{ModuleSpec, TensorIndex, WeightSpace};
use crate::bethe::sample_points;
use crate::error::{Error, Result};
use crate::numeric::CVec;
use crate::polyring::MatRatFun;
use crate::scalar::Scalar;
use crate::util::signed_permutations;

/// Universal weight function on the weight basis of `(V^{⊗n})_λ`.
///
/// `levels[0]` are the evaluation points `b_1..b_n` and `levels[a]` the roots
/// at level `a`. A basis tensor `J` (zero-based entries) receives
/// `sum_β prod_s ω_{s,β}` where `β` runs over bijections from the factors
/// reaching level `i` (`J[s] >= i`) onto the roots at that level and each
/// factor contributes the chain `1/(t^(1) - b_s) ... 1/(t^(J[s]) - t^(J[s]-1))`.
pub fn weight_function<F: Scalar>(rank: usize, levels: &[Vec<F>]) -> Result<(Vec<TensorIndex>, Vec<F>)> {
    let base = levels
        .first()
        .ok_or_else(|| Error::InvalidInput("weight function needs the evaluation points".into()))?;
    let n = base.len();
    let mut weight = vec![0usize; rank];
    for a in 0..rank {
        let here = levels.get(a).map_or(0, Vec::len);
        let next = levels.get(a + 1).map_or(0, Vec::len);
        if next > here {
            return Err(Error::InvalidInput("level sizes must be non-increasing".into()));
        }
        weight[a] = here - next;
    }
    if levels.len() > rank {
        return Err(Error::InvalidInput("more levels than the rank".into()));
    }
    debug_assert_eq!(weight.iter().sum::<usize>(), n);
    let space = WeightSpace::new(&weight);
    let values = space
        .basis()
        .iter()
        .map(|j| weight_component(j, levels))
        .collect::<Result<Vec<F>>>()?;
    Ok((space.basis().to_vec(), values))
}

fn weight_component<F: Scalar>(j: &[usize], levels: &[Vec<F>]) -> Result<F> {
    let top = j.iter().copied().max().unwrap_or(0);
    // members[i] = factors reaching level i
    let members: Vec<Vec<usize>> = (0..=top).map(|i| (0..j.len()).filter(|&s| j[s] >= i).collect()).collect();
    let perms: Vec<Vec<Vec<usize>>> = (1..=top)
        .map(|i| signed_permutations(members[i].len()).into_iter().map(|(p, _)| p).collect())
        .collect();
    // root assigned to factor s at level i
    let mut assign: Vec<Vec<usize>> = vec![(0..j.len()).collect(); top + 1];
    let mut total = F::zero();
    let mut idx = vec![0usize; top];
    loop {
        for i in 1..=top {
            for (pos, &s) in members[i].iter().enumerate() {
                assign[i][s] = perms[i - 1][idx[i - 1]][pos];
            }
        }
        let mut term = F::one();
        for (s, &js) in j.iter().enumerate() {
            for i in 1..=js {
                let d = levels[i][assign[i][s]].clone() - levels[i - 1][assign[i - 1][s]].clone();
                if d.is_zero() {
                    return Err(Error::NonGeneric("weight function has a pole at these roots".into()));
                }
                term = term / d;
            }
        }
        total = total + term;
        // odometer over the bijections
        let mut k = 0;
        loop {
            if k == top {
                return Ok(total);
            }
            idx[k] += 1;
            if idx[k] < perms[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenvectorReport {
    pub norm: f64,
    /// `max_i |B_i(u) ω - h_i(u) ω| / |ω|` at each sample point.
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub ok: bool,
}

/// Checks that the weight function at `t` is a joint eigenvector of the
/// ambient coefficients `B_i(u)` with eigenvalues read off the factorized
/// operator.
pub fn verify_eigenvector<F: Scalar>(
    coeffs: &[MatRatFun<Complex64>],
    spec: &ModuleSpec<F>,
    t: &RootCoordinates,
    samples: usize,
    tol: f64,
) -> Result<EigenvectorReport> {
    let k: Vec<Complex64> = spec.k().iter().map(Scalar::to_c64).collect();
    let (basis, omega) = weight_function(spec.rank(), &t.levels)?;
    if coeffs.first().map(MatRatFun::cols) != Some(basis.len()) {
        return Err(Error::InvalidInput("coefficients act on a different weight space".into()));
    }
    let omega = CVec::from_vec(omega);
    let norm = omega.norm();
    if norm <= 1e-300 {
        return Err(Error::Degenerate("weight function vanishes".into()));
    }
    let d = factorized_operator(t, &k);
    let points = sample_points(spec.b(), 13, samples);
    let mut residuals = Vec::with_capacity(points.len());
    for u in &points {
        let u = u.to_c64();
        let mut worst: f64 = 0.0;
        for (i, c) in coeffs.iter().enumerate() {
            let m = c.eval(&u).ok_or_else(|| Error::InvalidInput("sample point is a pole".into()))?;
            let h = d
                .h(i + 1)
                .eval(&u)
                .ok_or_else(|| Error::NonGeneric("sample point is a root".into()))?;
            let r = m.to_c64() * &omega - &omega * h;
            worst = worst.max(r.norm() / norm);
        }
        residuals.push(worst);
    }
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    Ok(EigenvectorReport { norm, residuals, max_residual, ok: max_residual <= tol })
}
