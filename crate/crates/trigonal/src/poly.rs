//! Dense univariate polynomials over the complex numbers, plus the two
//! divided-difference expansions used to assemble the fundamental 2-form.
//!
//! Coefficients are stored in ascending order: `coeffs[k]` multiplies `x^k`.

use num_complex::Complex64;
use std::collections::BTreeMap;

/// A polynomial with complex coefficients, ascending powers.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    /// `coeffs[k]` is the coefficient of `x^k`. No trailing zeros are trimmed
    /// automatically; use [`CPoly::trimmed`] when degree matters.
    pub coeffs: Vec<Complex64>,
}

impl CPoly {
    /// The zero polynomial.
    pub fn zero() -> Self {
        CPoly { coeffs: vec![] }
    }

    /// The constant polynomial `1`.
    pub fn one() -> Self {
        CPoly {
            coeffs: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Build from coefficients in ascending order.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        CPoly { coeffs }
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, &ci) in c.iter().enumerate() {
                next[i + 1] += ci;
                next[i] -= r * ci;
            }
            c = next;
        }
        CPoly { coeffs: c }
    }

    /// Degree as `coeffs.len() - 1` after trimming trailing zeros; `None` for 0.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs
            .iter()
            .rposition(|c| c.norm_sqr() != 0.0)
    }

    /// Copy with trailing zero coefficients removed.
    pub fn trimmed(&self) -> Self {
        match self.degree() {
            None => CPoly::zero(),
            Some(d) => CPoly {
                coeffs: self.coeffs[..=d].to_vec(),
            },
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let mut v = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            v = v * x + c;
        }
        v
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return CPoly::zero();
        }
        CPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        }
    }

    /// Product of two polynomials.
    pub fn mul(&self, other: &CPoly) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return CPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.norm_sqr() == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CPoly { coeffs: out }
    }

    /// Sum of two polynomials.
    pub fn add(&self, other: &CPoly) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &CPoly, k: usize| p.coeffs.get(k).copied().unwrap_or_default();
        CPoly {
            coeffs: (0..n).map(|k| get(self, k) + get(other, k)).collect(),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        CPoly {
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    /// All complex roots, by simultaneous Aberth-Ehrlich iteration followed
    /// by a Newton polish. Suited to the small degrees used here.
    pub fn roots(&self) -> Vec<Complex64> {
        let p = self.trimmed();
        let n = match p.degree() {
            None | Some(0) => return vec![],
            Some(n) => n,
        };
        let an = p.coeffs[n];
        // Cauchy bound on root magnitudes
        let bound = 1.0
            + p.coeffs[..n]
                .iter()
                .map(|c| (c / an).norm())
                .fold(0.0, f64::max);
        let mut zs: Vec<Complex64> = (0..n)
            .map(|k| {
                Complex64::from_polar(
                    0.6 * bound,
                    2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.41,
                )
            })
            .collect();
        let dp = p.derivative();
        for _ in 0..300 {
            let mut shift_max = 0.0f64;
            let mut ws = Vec::with_capacity(n);
            for i in 0..n {
                let pv = p.eval(zs[i]);
                let dv = dp.eval(zs[i]);
                let newton = if dv.norm() > 1e-300 {
                    pv / dv
                } else {
                    Complex64::new(1e-8, 1e-8)
                };
                let mut rep = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    if j != i {
                        rep += 1.0 / (zs[i] - zs[j]);
                    }
                }
                let den = 1.0 - newton * rep;
                let w = if den.norm() > 1e-300 { newton / den } else { newton };
                ws.push(w);
            }
            for i in 0..n {
                zs[i] -= ws[i];
                shift_max = shift_max.max(ws[i].norm() / (1.0 + zs[i].norm()));
            }
            if shift_max < 1e-14 {
                break;
            }
        }
        for z in zs.iter_mut() {
            for _ in 0..3 {
                let dv = dp.eval(*z);
                if dv.norm() > 1e-300 {
                    *z -= p.eval(*z) / dv;
                }
            }
        }
        zs
    }
}

/// A polynomial in two variables `(x_p, x_q)`, stored sparsely: the key
/// `(a, b)` carries the coefficient of `x_p^a x_q^b`. `BTreeMap` keeps the
/// iteration order deterministic.
pub type TwoPoly = BTreeMap<(usize, usize), Complex64>;

/// Evaluate a [`TwoPoly`] at `(x_p, x_q)`.
pub fn two_poly_eval(p: &TwoPoly, xp: Complex64, xq: Complex64) -> Complex64 {
    let mut tot = Complex64::new(0.0, 0.0);
    for (&(a, b), &c) in p {
        tot += c * xp.powu(a as u32) * xq.powu(b as u32);
    }
    tot
}

/// First divided difference of a univariate polynomial:
/// `(p(x_p) - p(x_q)) / (x_p - x_q)`, expanded as a polynomial in both
/// variables. For a single power `x^k` this is `sum_{a+b=k-1} x_p^a x_q^b`.
pub fn dd1(p: &CPoly) -> TwoPoly {
    let mut out = TwoPoly::new();
    for (j, &cj) in p.coeffs.iter().enumerate() {
        if cj.norm_sqr() == 0.0 {
            continue;
        }
        for a in 0..j {
            *out.entry((a, j - 1 - a)).or_default() += cj;
        }
    }
    out
}

/// Second divided difference of a univariate polynomial with respect to the
/// second variable:
/// `(p(x_p) - p(x_q) - (x_p - x_q) p'(x_q)) / (x_p - x_q)^2`.
/// For a single power `x^k` this is
/// `sum_{a=0}^{k-2} (k-1-a) x_p^a x_q^{k-2-a}`.
pub fn dd2(p: &CPoly) -> TwoPoly {
    let mut out = TwoPoly::new();
    for (j, &cj) in p.coeffs.iter().enumerate() {
        if cj.norm_sqr() == 0.0 {
            continue;
        }
        for a in 0..j.saturating_sub(1) {
            *out.entry((a, j - 2 - a)).or_default() += cj * (j - 1 - a) as f64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn roots_build_monic_polynomial() {
        let roots = [c(1.0, 0.0), c(-2.0, 1.0), c(0.5, -0.5)];
        let p = CPoly::from_roots(&roots);
        assert_eq!(p.degree(), Some(3));
        for &r in &roots {
            assert!(p.eval(r).norm() < 1e-12, "root not annihilated");
        }
        // leading coefficient is 1
        assert!((p.coeffs[3] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn root_finder_recovers_scattered_roots() {
        let roots = [
            c(1.0, 0.0),
            c(-2.0, 1.0),
            c(0.5, -0.5),
            c(0.0, 2.2),
            c(-0.3, -1.7),
            c(3.1, 0.4),
            c(-1.4, 0.0),
        ];
        let p = CPoly::from_roots(&roots).scale(c(0.7, -1.3));
        let found = p.roots();
        assert_eq!(found.len(), roots.len());
        for &r in &roots {
            let nearest = found
                .iter()
                .map(|z| (z - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(nearest < 1e-9, "root {r} missed by {nearest:.2e}");
        }
    }

    #[test]
    fn derivative_and_mul_are_consistent() {
        // (p*q)' = p'q + pq' at sample points
        let p = CPoly::from_coeffs(vec![c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0)]);
        let q = CPoly::from_roots(&[c(2.0, 1.0), c(-1.0, 0.0)]);
        let lhs = p.mul(&q).derivative();
        let rhs = p.derivative().mul(&q).add(&p.mul(&q.derivative()));
        for k in 0..8 {
            let x = c(0.3 * k as f64 - 1.1, 0.2 * k as f64);
            assert!((lhs.eval(x) - rhs.eval(x)).norm() < 1e-10);
        }
    }

    #[test]
    fn dd1_matches_difference_quotient() {
        let p = CPoly::from_roots(&[c(0.4, 0.2), c(-1.0, 0.5), c(2.0, -1.0), c(0.0, 1.5)]);
        let xp = c(1.3, -0.4);
        let xq = c(-0.7, 0.9);
        let direct = (p.eval(xp) - p.eval(xq)) / (xp - xq);
        let expanded = two_poly_eval(&dd1(&p), xp, xq);
        assert!((direct - expanded).norm() < 1e-11);
    }

    #[test]
    fn dd2_matches_taylor_remainder_quotient() {
        let p = CPoly::from_roots(&[c(0.4, 0.2), c(-1.0, 0.5), c(2.0, -1.0), c(0.0, 1.5)]);
        let dp = p.derivative();
        let xp = c(1.3, -0.4);
        let xq = c(-0.7, 0.9);
        let direct = (p.eval(xp) - p.eval(xq) - (xp - xq) * dp.eval(xq)) / ((xp - xq) * (xp - xq));
        let expanded = two_poly_eval(&dd2(&p), xp, xq);
        assert!((direct - expanded).norm() < 1e-11);
    }

    #[test]
    fn dd2_of_power_has_stated_coefficients() {
        // For x^4: coefficients (3-a) on x_p^a x_q^{2-a}
        let p = CPoly::from_coeffs(vec![
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(1.0, 0.0),
        ]);
        let d = dd2(&p);
        assert_eq!(d.len(), 3);
        assert!((d[&(0, 2)] - c(3.0, 0.0)).norm() < 1e-15);
        assert!((d[&(1, 1)] - c(2.0, 0.0)).norm() < 1e-15);
        assert!((d[&(2, 0)] - c(1.0, 0.0)).norm() < 1e-15);
    }
}
