use crate::error::{Error, Result};
use crate::polyring::{Poly, RatFun};
use crate::scalar::Scalar;

/// Recovers `num / den` from point values, given the denominator and a bound on
/// the numerator degree.
///
/// The numerator is interpolated (Newton divided differences) through the
/// first `deg_num + 1` samples of `value * den(point)`; any further samples are
/// used as consistency checks, exact over exact fields and within `tol`
/// (relative) otherwise.
pub fn rational_reconstruct<F: Scalar>(
    samples: &[(F, F)],
    deg_num: usize,
    den: &Poly<F>,
    tol: f64,
) -> Result<RatFun<F>> {
    if samples.len() < deg_num + 1 {
        return Err(Error::InvalidInput(format!(
            "{} samples cannot determine a numerator of degree {deg_num}",
            samples.len()
        )));
    }
    let mut cleared = Vec::with_capacity(samples.len());
    for (u, v) in samples {
        let d = den.eval(u);
        if d.is_zero() {
            return Err(Error::InvalidInput("sample point is a root of the denominator".into()));
        }
        cleared.push((u.clone(), v.clone() * d));
    }
    let fit = &cleared[..deg_num + 1];
    for i in 0..fit.len() {
        for j in i + 1..fit.len() {
            if fit[i].0 == fit[j].0 {
                return Err(Error::InvalidInput("sample points must be distinct".into()));
            }
        }
    }
    let num = newton_interpolate(fit);
    let scale = cleared.iter().map(|(_, y)| y.abs_f64()).fold(1.0, f64::max);
    for (u, y) in &cleared[deg_num + 1..] {
        if !(num.eval(u) - y.clone()).near_zero(scale, tol) {
            return Err(Error::DegreeBound(format!(
                "samples are not consistent with a numerator of degree {deg_num}"
            )));
        }
    }
    RatFun::new(num, den.clone())
}

fn newton_interpolate<F: Scalar>(pts: &[(F, F)]) -> Poly<F> {
    let n = pts.len();
    let mut dd: Vec<F> = pts.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (dd[i].clone() - dd[i - 1].clone()) / (pts[i].0.clone() - pts[i - level].0.clone());
        }
    }
    // Horner on the Newton form
    let mut acc = Poly::zero();
    for i in (0..n).rev() {
        acc = &(&acc * &Poly::linear(&pts[i].0)) + &Poly::constant(dd[i].clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rat};

    fn p(c: &[i64]) -> Poly<Rat> {
        Poly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect())
    }

    #[test]
    fn recovers_simple_examples() {
        let den = p(&[-1, 1]);
        let s: Vec<_> = [2, 3].iter().map(|&u| (rat(u, 1), rat(1, u - 1))).collect();
        let r = rational_reconstruct(&s, 0, &den, 0.0).unwrap();
        assert_eq!(r.num(), &p(&[1]));

        let den = p(&[0, 1]);
        let s: Vec<_> = [1, 2, 3].iter().map(|&u| (rat(u, 1), rat(u * u + 1, u))).collect();
        let r = rational_reconstruct(&s, 2, &den, 0.0).unwrap();
        assert_eq!(r, RatFun::new(p(&[1, 0, 1]), p(&[0, 1])).unwrap());
    }

    #[test]
    fn detects_degree_violation() {
        let s: Vec<_> = [1, 2, 3, 4].iter().map(|&u| (rat(u, 1), rat(u * u * u, 1))).collect();
        assert!(matches!(rational_reconstruct(&s, 2, &Poly::one(), 0.0), Err(Error::DegreeBound(_))));
        assert!(rational_reconstruct(&s[..1], 2, &Poly::one(), 0.0).is_err());
    }
}
