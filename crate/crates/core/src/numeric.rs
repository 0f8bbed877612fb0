//! Floating-point linear algebra on complex matrices (thin wrappers over nalgebra).

use nalgebra::{DMatrix, DVector, Schur, SVD};
use num_complex::Complex64;

use crate::polyring::Poly;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Eigenvalues from the complex Schur form, in diagonal order.
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = Schur::new(m.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Orthonormal basis (as columns) of the right singular vectors belonging to
/// the `k` smallest singular values.
pub fn smallest_right_singular(m: &CMat, k: usize) -> CMat {
    let n = m.ncols();
    let padded = pad_square(m);
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("requested V^T");
    // singular values are sorted in decreasing order
    let rows: Vec<usize> = (n - k..n).collect();
    let mut out = CMat::zeros(n, k);
    for (c, &r) in rows.iter().enumerate() {
        for j in 0..n {
            out[(j, c)] = v_t[(r, j)].conj();
        }
    }
    out
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    SVD::new(m.clone(), false, false).singular_values.iter().copied().collect()
}

/// Orthonormal null-space basis: right singular vectors with singular value
/// `<= tol * max(sigma_max, 1)`.
pub fn null_space(m: &CMat, tol: f64) -> CMat {
    let n = m.ncols();
    if n == 0 {
        return CMat::zeros(0, 0);
    }
    let sv = singular_values(&pad_square(m));
    let thr = tol * sv.first().copied().unwrap_or(0.0).max(1.0);
    let k = sv.iter().filter(|&&s| s <= thr).count();
    smallest_right_singular(m, k)
}

fn pad_square(m: &CMat) -> CMat {
    if m.nrows() >= m.ncols() {
        return m.clone();
    }
    let mut p = CMat::zeros(m.ncols(), m.ncols());
    p.view_mut((0, 0), (m.nrows(), m.ncols())).copy_from(m);
    p
}

/// Least-squares solution of `a x = b` and the residual norm `|a x - b|`.
pub fn least_squares(a: &CMat, b: &CVec) -> (CVec, f64) {
    if a.ncols() == 0 {
        return (CVec::zeros(0), b.norm());
    }
    let svd = SVD::new(a.clone(), true, true);
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let x = svd
        .solve(b, smax * 1e-14)
        .expect("U and V^T were computed");
    let r = (a * &x - b).norm();
    (x, r)
}

/// Solves a square system by LU; `None` when singular.
pub fn solve(a: &CMat, b: &CVec) -> Option<CVec> {
    a.clone().lu().solve(b)
}

/// Roots of a polynomial via companion-matrix eigenvalues, polished by Newton steps.
pub fn poly_roots(p: &Poly<Complex64>) -> Vec<Complex64> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let monic = p.monic();
    let mut comp = CMat::zeros(d, d);
    for i in 1..d {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..d {
        comp[(i, d - 1)] = -monic.coeff(i);
    }
    let dp = monic.derivative();
    let mut roots = eigenvalues(&comp);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let dv = dp.eval(r);
            if dv.norm() == 0.0 {
                break;
            }
            let step = monic.eval(r) / dv;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *r -= step;
        }
    }
    sort_complex(&mut roots);
    roots
}

/// Sorts by real part, then imaginary part.
pub fn sort_complex(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn eigen_and_null_space() {
        let m = CMat::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(3.0)]);
        let mut ev = eigenvalues(&m);
        sort_complex(&mut ev);
        assert!((ev[0] - c(2.0)).norm() < 1e-12 && (ev[1] - c(3.0)).norm() < 1e-12);
        let shifted = &m - CMat::identity(2, 2) * c(3.0);
        let ns = null_space(&shifted, 1e-10);
        assert_eq!(ns.ncols(), 1);
        assert!((&m * &ns - &ns * c(3.0)).norm() < 1e-12);
    }

    #[test]
    fn roots_of_quadratic() {
        // u^2 - 3u + 1
        let p = Poly::from_coeffs(vec![c(1.0), c(-3.0), c(1.0)]);
        let r = poly_roots(&p);
        let s5 = 5f64.sqrt();
        assert!((r[0] - c((3.0 - s5) / 2.0)).norm() < 1e-14);
        assert!((r[1] - c((3.0 + s5) / 2.0)).norm() < 1e-14);
    }

    #[test]
    fn least_squares_consistent_system() {
        let a = CMat::from_row_slice(3, 2, &[c(1.0), c(0.0), c(0.0), c(1.0), c(1.0), c(1.0)]);
        let b = CVec::from_vec(vec![c(1.0), c(2.0), c(3.0)]);
        let (x, r) = least_squares(&a, &b);
        assert!(r < 1e-12);
        assert!((x[0] - c(1.0)).norm() < 1e-12 && (x[1] - c(2.0)).norm() < 1e-12);
    }
}
