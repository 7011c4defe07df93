//! Path integration on the triple cover: analytic continuation of the sheet
//! along paths in the `x`-plane and adaptive Gauss–Legendre integration of
//! differential vectors along polylines.

use crate::curve::Curve;
use crate::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

const GLN: usize = 16;

/// 16-point Gauss–Legendre nodes and weights on `[-1, 1]`, computed once by
/// Newton iteration on the Legendre polynomial.
pub fn gl_nodes() -> &'static ([f64; GLN], [f64; GLN]) {
    static NODES: OnceLock<([f64; GLN], [f64; GLN])> = OnceLock::new();
    NODES.get_or_init(|| {
        let n = GLN;
        let mut xs = [0.0; GLN];
        let mut ws = [0.0; GLN];
        for i in 1..=n {
            let mut x = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let mut p0 = 1.0;
                let mut p1 = 0.0;
                for j in 1..=n {
                    let jf = j as f64;
                    let p = ((2.0 * jf - 1.0) * x * p0 - (jf - 1.0) * p1) / jf;
                    p1 = p0;
                    p0 = p;
                }
                dp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
                let dx = p0 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            xs[i - 1] = x;
            ws[i - 1] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

/// Continue the sheet value `y` from `(z0, y0)` to `z1` along the straight
/// segment between them. Steps adaptively: a step is accepted only when the
/// derivative-predicted value singles out one lift decisively and the curve
/// polynomial has not changed so much that a branch point may have been
/// crossed unnoticed.
pub fn continue_y(cur: &Curve, z0: Complex64, y0: Complex64, z1: Complex64) -> Result<Complex64> {
    let mut z = z0;
    let mut y = y0;
    let mut f0 = cur.f_eval(z);
    let mut h: f64 = 1.0;
    while z != z1 {
        let frac = h.min(1.0);
        let zn = if frac >= 1.0 { z1 } else { z + (z1 - z) * frac };
        let step = zn - z;
        let fn_ = cur.f_eval(zn);
        let ypred = y + cur.dy(z, y) * step;
        let lifts = cur.lifts(zn);
        let mut best = 0;
        for k in 1..3 {
            if (lifts[k] - ypred).norm() < (lifts[best] - ypred).norm() {
                best = k;
            }
        }
        let mut sep = f64::INFINITY;
        for a in 0..3 {
            for b in (a + 1)..3 {
                sep = sep.min((lifts[a] - lifts[b]).norm());
            }
        }
        if (lifts[best] - ypred).norm() < 0.25 * sep && (fn_ - f0).norm() < 0.8 * f0.norm() {
            y = lifts[best];
            z = zn;
            f0 = fn_;
            h = (h * 2.0).min(1.0);
        } else {
            h *= 0.5;
            if h < 1e-12 {
                return Err(Error::ContinuationStuck(z));
            }
        }
    }
    Ok(y)
}

/// Continue the sheet along a polyline.
pub fn continue_path(cur: &Curve, pts: &[Complex64], y0: Complex64) -> Result<Complex64> {
    let mut y = y0;
    for w in pts.windows(2) {
        y = continue_y(cur, w[0], y, w[1])?;
    }
    Ok(y)
}

fn gl_pass<F>(
    cur: &Curve,
    za: Complex64,
    zb: Complex64,
    ya: Complex64,
    fvec: &F,
) -> Result<(Vec<Complex64>, Complex64)>
where
    F: Fn(Complex64, Complex64) -> Vec<Complex64>,
{
    let (xs, ws) = gl_nodes();
    let mut y = ya;
    let mut zprev = za;
    let mut out: Vec<Complex64> = Vec::new();
    for (k, &xi) in xs.iter().enumerate() {
        let t = 0.5 * (xi + 1.0);
        let z = za + (zb - za) * t;
        y = continue_y(cur, zprev, y, z)?;
        zprev = z;
        let vals = fvec(z, y);
        if k == 0 {
            out = vec![Complex64::new(0.0, 0.0); vals.len()];
        }
        for (o, v) in out.iter_mut().zip(vals) {
            *o += ws[k] * v;
        }
    }
    let yb = continue_y(cur, zprev, y, zb)?;
    let half = (zb - za) * 0.5;
    for o in out.iter_mut() {
        *o *= half;
    }
    Ok((out, yb))
}

/// Integrate a vector of scalar differential coefficients (with respect to
/// `dx`) along a straight segment, starting on the sheet of `ya`. Adaptive
/// bisection: each interval is accepted when one Gauss pass over the whole
/// interval agrees with the sum of passes over its halves. Returns the
/// integral vector and the sheet value at the endpoint.
pub fn integrate_segment<F>(
    cur: &Curve,
    za: Complex64,
    zb: Complex64,
    ya: Complex64,
    fvec: &F,
    tol: f64,
    depth: usize,
) -> Result<(Vec<Complex64>, Complex64)>
where
    F: Fn(Complex64, Complex64) -> Vec<Complex64>,
{
    let (whole, _) = gl_pass(cur, za, zb, ya, fvec)?;
    let zm = 0.5 * (za + zb);
    let (left, ym) = gl_pass(cur, za, zm, ya, fvec)?;
    let (right, yb) = gl_pass(cur, zm, zb, ym, fvec)?;
    let err = whole
        .iter()
        .zip(left.iter().zip(right.iter()))
        .map(|(w, (l, r))| (w - l - r).norm())
        .fold(0.0, f64::max);
    if err < tol || depth > 24 {
        let sum: Vec<Complex64> = left.iter().zip(right.iter()).map(|(l, r)| l + r).collect();
        return Ok((sum, yb));
    }
    let sub_tol = (tol * 0.6).max(2e-14);
    let (l, ym) = integrate_segment(cur, za, zm, ya, fvec, sub_tol, depth + 1)?;
    let (r, yb) = integrate_segment(cur, zm, zb, ym, fvec, sub_tol, depth + 1)?;
    let sum: Vec<Complex64> = l.iter().zip(r.iter()).map(|(a, b)| a + b).collect();
    Ok((sum, yb))
}

/// Integrate along a polyline.
pub fn integrate_polyline<F>(
    cur: &Curve,
    pts: &[Complex64],
    y0: Complex64,
    fvec: &F,
    tol: f64,
) -> Result<(Vec<Complex64>, Complex64)>
where
    F: Fn(Complex64, Complex64) -> Vec<Complex64>,
{
    let mut tot: Option<Vec<Complex64>> = None;
    let mut y = y0;
    for w in pts.windows(2) {
        let (v, ynew) = integrate_segment(cur, w[0], w[1], y, fvec, tol, 0)?;
        y = ynew;
        match &mut tot {
            None => tot = Some(v),
            Some(t) => {
                for (a, b) in t.iter_mut().zip(v) {
                    *a += b;
                }
            }
        }
    }
    Ok((tot.unwrap_or_default(), y))
}

/// Vertices of a circular loop around `center`, starting at angle `t0`,
/// winding `turns` times counterclockwise.
pub fn circle_pts(
    center: Complex64,
    rad: f64,
    t0: f64,
    nseg: usize,
    turns: usize,
) -> Vec<Complex64> {
    let total = nseg * turns;
    (0..=total)
        .map(|k| {
            let ang = t0 + 2.0 * std::f64::consts::PI * turns as f64 * k as f64 / total as f64;
            center + Complex64::from_polar(rad, ang)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn curve_g2() -> Curve {
        Curve::new(1, 2, vec![c(0.9, 0.1), c(-0.2, 0.75), c(-1.1, -0.4)]).unwrap()
    }

    #[test]
    fn gauss_nodes_integrate_polynomials_exactly() {
        let (xs, ws) = gl_nodes();
        // 16-point rule is exact through degree 31
        for deg in [0usize, 5, 16, 31] {
            let got: f64 = xs
                .iter()
                .zip(ws.iter())
                .map(|(&x, &w)| w * x.powi(deg as i32))
                .sum();
            let want = if deg % 2 == 0 {
                2.0 / (deg as f64 + 1.0)
            } else {
                0.0
            };
            assert!((got - want).abs() < 1e-14, "degree {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn continuation_is_trivial_along_a_branch_free_path() {
        let cur = curve_g2();
        let z0 = c(3.0, 0.0);
        let y0 = cur.lifts(z0)[0];
        // a path far from all branch points that returns to its start
        let pts = circle_pts(c(6.0, 0.0), 1.5, 0.3, 24, 1);
        let y0b = continue_y(&cur, z0, y0, pts[0]).unwrap();
        let y1 = continue_path(&cur, &pts, y0b).unwrap();
        assert!((y1 - y0b).norm() < 1e-9 * (1.0 + y0b.norm()));
    }

    #[test]
    fn loop_around_one_simple_branch_point_permutes_sheets_with_order_three() {
        let cur = curve_g2();
        let b = cur.bs[0]; // simple zero of the curve polynomial's cubed part
        let rad = 0.3;
        let pts = circle_pts(b, rad, 0.0, 24, 1);
        let y0 = cur.lifts(pts[0])[0];
        let mut y = y0;
        let mut count = 0;
        loop {
            y = continue_path(&cur, &pts, y).unwrap();
            count += 1;
            if (y - y0).norm() < 1e-8 * (1.0 + y0.norm()) {
                break;
            }
            assert!(count < 4, "monodromy order exceeded 3");
        }
        assert_eq!(count, 3, "single loop should have order exactly 3");
    }

    #[test]
    fn loop_around_the_doubled_branch_point_also_has_order_three() {
        let cur = curve_g2();
        let b = cur.bs[2];
        let pts = circle_pts(b, 0.25, 1.0, 24, 1);
        let y0 = cur.lifts(pts[0])[1];
        let y1 = continue_path(&cur, &pts, y0).unwrap();
        assert!(
            (y1 - y0).norm() > 1e-3,
            "one loop must move the sheet"
        );
        let y2 = continue_path(&cur, &pts, y1).unwrap();
        let y3 = continue_path(&cur, &pts, y2).unwrap();
        assert!((y3 - y0).norm() < 1e-8 * (1.0 + y0.norm()));
    }

    #[test]
    fn segment_integration_reproduces_polynomial_antiderivatives() {
        let cur = curve_g2();
        let za = c(2.5, 1.0);
        let zb = c(4.0, -2.0);
        let ya = cur.lifts(za)[0];
        let fv = |x: Complex64, _y: Complex64| vec![Complex64::new(1.0, 0.0), x, x * x];
        let (v, _) = integrate_segment(&cur, za, zb, ya, &fv, 1e-12, 0).unwrap();
        assert!((v[0] - (zb - za)).norm() < 1e-12);
        assert!((v[1] - (zb * zb - za * za) * 0.5).norm() < 1e-12);
        assert!((v[2] - (zb * zb * zb - za * za * za) / 3.0).norm() < 1e-11);
    }

    #[test]
    fn closed_loop_integral_of_a_simple_pole_gives_the_residue() {
        let cur = curve_g2();
        let b = cur.bs[1];
        let pts = circle_pts(b, 0.35, 0.2, 24, 1);
        let y0 = cur.lifts(pts[0])[0];
        let fv = |x: Complex64, _y: Complex64| vec![1.0 / (x - b)];
        let (v, _) = integrate_polyline(&cur, &pts, y0, &fv, 1e-12).unwrap();
        let want = c(0.0, 2.0 * std::f64::consts::PI);
        assert!((v[0] - want).norm() < 1e-10, "residue loop gave {}", v[0]);
    }

    #[test]
    fn contractible_loop_of_a_holomorphic_differential_vanishes() {
        let cur = curve_g2();
        let basis = crate::basis::DifferentialBasis::new(&cur).unwrap();
        // a loop enclosing no branch point
        let pts = circle_pts(c(2.2, 2.2), 0.6, 0.0, 24, 1);
        let y0 = cur.lifts(pts[0])[2];
        let fv = |x: Complex64, y: Complex64| {
            (0..cur.genus()).map(|i| basis.nu1(&cur, i, x, y)).collect()
        };
        let (v, yend) = integrate_polyline(&cur, &pts, y0, &fv, 1e-12).unwrap();
        assert!((yend - y0).norm() < 1e-9);
        for vi in v {
            assert!(vi.norm() < 1e-10);
        }
    }
}
