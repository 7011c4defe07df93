//! Divisor inversion: linear interpolation cuts, the two-index Weierstrass
//! functions evaluated at Abel images, and recovery of divisor coordinates
//! from sigma derivatives via a norm polynomial.

use crate::basis::{DifferentialBasis, Kind};
use crate::curve::Curve;
use crate::poly::CPoly;
use crate::sigma::SigmaFunction;
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Coefficients of the interpolation function cutting a `k`-point divisor:
/// solves `phihat_k(P_j) + sum_{m<k} c_m phihat_m(P_j) = 0` for the `c_m`.
/// Fails when the points form a special divisor (singular system).
pub fn mu_coefficients(
    cur: &Curve,
    basis: &DifferentialBasis,
    pts: &[(Complex64, Complex64)],
) -> Result<Vec<Complex64>> {
    let k = pts.len();
    if k == 0 || k >= basis.phihat.len() {
        return Err(Error::InvalidParams(format!(
            "interpolation needs 1..{} points, got {k}",
            basis.phihat.len()
        )));
    }
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    let mut rhs = DVector::<Complex64>::zeros(k);
    for (j, &(x, y)) in pts.iter().enumerate() {
        for (col, mon) in basis.phihat[..k].iter().enumerate() {
            m[(j, col)] = mon.eval(cur, x, y);
        }
        rhs[j] = -basis.phihat[k].eval(cur, x, y);
    }
    let svd = m.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if !(smin > 1e-10 * smax) {
        return Err(Error::Numerical(format!(
            "special divisor: interpolation system has condition {:.2e}",
            smax / smin
        )));
    }
    let sol = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(sol.as_slice().to_vec())
}

/// The right-hand sides predicted by sigma derivatives: the negated
/// two-index functions `-wp(g, k+1)` evaluated at `u`, for `k = 0..g`.
pub fn wp_coefficients(sf: &SigmaFunction<'_>, u: &[Complex64]) -> Result<Vec<Complex64>> {
    let g = u.len();
    let (s, grad, hess) = sf.eval_full(u)?;
    if s.norm() < 1e-300 {
        return Err(Error::Numerical(
            "sigma vanishes at the requested point".into(),
        ));
    }
    Ok((0..g)
        .map(|k| -(grad[g - 1] * grad[k] - s * hess[(g - 1, k)]) / (s * s))
        .collect())
}

/// Largest relative disagreement between interpolation coefficients and the
/// sigma-derivative prediction at `u`.
pub fn jacobi_residual(
    sf: &SigmaFunction<'_>,
    u: &[Complex64],
    coeffs: &[Complex64],
) -> Result<f64> {
    let pred = wp_coefficients(sf, u)?;
    let scale = coeffs
        .iter()
        .map(|c| c.norm())
        .fold(1.0f64, f64::max);
    Ok(pred
        .iter()
        .zip(coeffs)
        .map(|(p, c)| (p - c).norm() / scale)
        .fold(0.0, f64::max))
}

/// The norm of the interpolation function `mu = phihat_k + sum c_m phihat_m`
/// down to the base: a univariate polynomial whose roots include every
/// x-coordinate of the cut divisor. Writing `mu = A(x) + B(x) y + C(x) y2`
/// with `y2` the second coordinate function, the norm is
/// `A^3 + B^3 f_r + C^3 f_s - 3 A B C m` where `f_r = y^3`, `f_s = y2^3`,
/// and `m = y y2`.
pub fn norm_polynomial(
    cur: &Curve,
    basis: &DifferentialBasis,
    coeffs: &[Complex64],
) -> CPoly {
    let k = coeffs.len();
    let mut a = CPoly::zero();
    let mut b = CPoly::zero();
    let mut c = CPoly::zero();
    let mut add = |mon: &crate::basis::Mon, w: Complex64| {
        let mut xa = vec![Complex64::new(0.0, 0.0); mon.a + 1];
        xa[mon.a] = w;
        let xa = CPoly::from_coeffs(xa);
        match mon.kind {
            Kind::One => a = a.add(&xa),
            Kind::Product => a = a.add(&xa.mul(&cur.krs)),
            Kind::Y => b = b.add(&xa),
            Kind::YSecond => c = c.add(&xa),
        }
    };
    for (m, &w) in basis.phihat[..k].iter().zip(coeffs) {
        add(m, w);
    }
    add(&basis.phihat[k], Complex64::new(1.0, 0.0));
    let f_r = &cur.f;
    let f_s = cur.krs.mul(&cur.ks);
    let a3 = a.mul(&a).mul(&a);
    let b3 = b.mul(&b).mul(&b).mul(f_r);
    let c3 = c.mul(&c).mul(&c).mul(&f_s);
    let cross = a.mul(&b).mul(&c).mul(&cur.krs).scale(Complex64::new(-3.0, 0.0));
    a3.add(&b3).add(&c3).add(&cross).trimmed()
}

/// X-coordinates cut by the interpolation function with the given
/// coefficients: the divisor coordinates are among these roots.
pub fn recover_divisor_x(
    cur: &Curve,
    basis: &DifferentialBasis,
    coeffs: &[Complex64],
) -> Vec<Complex64> {
    norm_polynomial(cur, basis, coeffs).roots()
}

/// Residuals of the rank-one stratum identities at a point `u` on the
/// `k`-stratum, given the interpolation coefficients of its `k`-point
/// divisor: first the gradient-ratio defect
/// `max_i |grad_i / grad_k - c_i|` over `i < k`, then the size of the
/// gradient entries beyond index `k` relative to `|grad_k|`.
pub fn stratum_ratio_residuals(
    sf: &SigmaFunction<'_>,
    u: &[Complex64],
    coeffs: &[Complex64],
) -> Result<(f64, f64)> {
    let g = u.len();
    let k = coeffs.len();
    let (_, grad, _) = sf.eval_full(u)?;
    let pivot = grad[k];
    if pivot.norm() < 1e-300 {
        return Err(Error::Numerical(
            "pivot derivative vanishes on the stratum".into(),
        ));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(1.0f64, f64::max);
    let ratio = (0..k)
        .map(|i| (grad[i] / pivot - coeffs[i]).norm() / scale)
        .fold(0.0, f64::max);
    let higher = grad[k + 1..g]
        .iter()
        .map(|d| d.norm() / pivot.norm())
        .fold(0.0, f64::max);
    Ok((ratio, higher))
}
