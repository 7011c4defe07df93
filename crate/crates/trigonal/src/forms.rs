//! Two-point kernels on the curve: the rational kernel with a simple pole,
//! the symmetric 2-form of the second kind, and differentials of the third
//! kind.
//!
//! All functions return *scalar coefficients*: a 1-form in the first point is
//! reported as its coefficient with respect to `dx_P`, a 2-form as the
//! coefficient of `dx_P dx_Q`.

use crate::basis::DifferentialBasis;
use crate::curve::Curve;
use num_complex::Complex64;

/// Rational kernel with a simple pole along the diagonal: as `P -> Q` on the
/// same sheet it behaves like `1/(x_P - x_Q)`, while at the two other points
/// of the fiber over `x_Q` its numerator vanishes, so it stays finite there.
/// Scalar with respect to `dx_P`.
pub fn sigma_kernel(
    cur: &Curve,
    xp: Complex64,
    yp: Complex64,
    xq: Complex64,
    yq: Complex64,
) -> Complex64 {
    let ysp = cur.ysecond(xp, yp);
    let ysq = cur.ysecond(xq, yq);
    (yp * ysp + yp * ysq + yq * ysp) / (3.0 * (xp - xq) * yp * ysp)
}

/// Derivative of [`sigma_kernel`] in the second point (with `y_Q` moving
/// along the curve). Scalar with respect to `dx_P dx_Q`.
pub fn dq_sigma_kernel(
    cur: &Curve,
    xp: Complex64,
    yp: Complex64,
    xq: Complex64,
    yq: Complex64,
) -> Complex64 {
    let ysp = cur.ysecond(xp, yp);
    let ysq = cur.ysecond(xq, yq);
    let n = yp * ysp + yp * ysq + yq * ysp;
    let dn = yp * cur.dysecond(xq, yq) + cur.dy(xq, yq) * ysp;
    let dx = xp - xq;
    dn / (3.0 * dx * yp * ysp) + n / (3.0 * dx * dx * yp * ysp)
}

/// The symmetric fundamental 2-form of the second kind: the diagonal-pole
/// kernel derivative plus the pairing of first- and second-kind
/// differentials. Scalar with respect to `dx_P dx_Q`.
pub fn omega_pair(
    cur: &Curve,
    basis: &DifferentialBasis,
    xp: Complex64,
    yp: Complex64,
    xq: Complex64,
    yq: Complex64,
) -> Complex64 {
    let mut tot = dq_sigma_kernel(cur, xp, yp, xq, yq);
    for i in 0..basis.genus() {
        tot += basis.nu1(cur, i, xp, yp) * basis.nu2(cur, i, xq, yq);
    }
    tot
}

/// Polynomial-valued numerator of the 2-form:
/// `F = Omega * 9 (x_P - x_Q)^2 (y y_second)(P) (y y_second)(Q)`.
pub fn f_two_point(
    cur: &Curve,
    basis: &DifferentialBasis,
    xp: Complex64,
    yp: Complex64,
    xq: Complex64,
    yq: Complex64,
) -> Complex64 {
    let m_p = yp * cur.ysecond(xp, yp);
    let m_q = yq * cur.ysecond(xq, yq);
    let dx = xp - xq;
    omega_pair(cur, basis, xp, yp, xq, yq) * 9.0 * dx * dx * m_p * m_q
}

/// Closed form of [`f_two_point`] assembled directly from the curve
/// polynomials and the second-kind numerators, with no kernel division:
///
/// `F = 3 m(x_P) m(x_Q)
///    + y_P ys_Q [3 m(x_Q) + (x_P - x_Q) W_s(x_Q)]
///    + ys_P y_Q [3 m(x_Q) + (x_P - x_Q) W_r(x_Q)]
///    + (x_P - x_Q)^2 sum_i phihat_i(P) H_i(Q)`
///
/// where `H_i` is the second-kind numerator (the polynomial `h_i` times the
/// complementary `y`-factor).
pub fn f_closed_form(
    cur: &Curve,
    basis: &DifferentialBasis,
    xp: Complex64,
    yp: Complex64,
    xq: Complex64,
    yq: Complex64,
) -> Complex64 {
    use crate::basis::Kind;
    let ysp = cur.ysecond(xp, yp);
    let ysq = cur.ysecond(xq, yq);
    let m_p = cur.krs_eval(xp);
    let m_q = cur.krs_eval(xq);
    let dx = xp - xq;
    let mut tot = 3.0 * m_p * m_q
        + yp * ysq * (3.0 * m_q + dx * cur.w_s.eval(xq))
        + ysp * yq * (3.0 * m_q + dx * cur.w_r.eval(xq));
    for i in 0..basis.genus() {
        let h = basis.hs[i].eval(xq);
        let numerator = match basis.phihat[i].kind {
            Kind::Y => h * ysq,
            Kind::YSecond => h * yq,
            _ => unreachable!(),
        };
        tot += dx * dx * basis.phihat[i].eval(cur, xp, yp) * numerator;
    }
    tot
}

/// Differential of the third kind with residue `+1` at `P_1` and `-1` at
/// `P_2` (and holomorphic elsewhere in the affine chart away from its poles).
/// Scalar with respect to `dx_P`.
pub fn third_kind(
    cur: &Curve,
    xp: Complex64,
    yp: Complex64,
    p1: (Complex64, Complex64),
    p2: (Complex64, Complex64),
) -> Complex64 {
    sigma_kernel(cur, xp, yp, p1.0, p1.1) - sigma_kernel(cur, xp, yp, p2.0, p2.1)
}
