//! Weight-ordered monomial bases on the curve and the differentials of the
//! first and second kind.
//!
//! Two monomial streams matter:
//!
//! * the *affine* stream `phi`: monomials `x^a`, `x^a y`, `x^a y_second`
//!   ordered by pole order at infinity (these are the orders of the
//!   numerical semigroup), and
//! * the *dual* stream `phi_hat`: monomials `x^a y`, `x^a y_second`,
//!   `x^a y y_second` ordered by pole order (the orders form the shifted
//!   sequence produced by [`crate::semigroup::Semigroup::nth_hat`]).
//!
//! The first `g` dual monomials are the numerators of the holomorphic
//! differentials `nu1_i = phi_hat_{i-1} dx / (3 y y_second)`. The second-kind
//! differentials `nu2_i` have numerators `h_i(x)` times the complementary
//! `y`-factor; the raw `h_i` come from divided differences of the curve data,
//! and a final exact correction makes the last row's numerator a pure
//! monomial, which is what the two-point expansion of the fundamentalform
//! requires. The correction is recorded as a symmetric matrix `s_corr` so the
//! second-kind periods can be kept consistent.

use crate::curve::Curve;
use crate::poly::{dd1, dd2, CPoly};
use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// Which `y`-factor a basis monomial carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    /// No `y` factor: plain `x^a` (affine stream only).
    One,
    /// `x^a y`.
    Y,
    /// `x^a y_second`.
    YSecond,
    /// `x^a y y_second` (dual stream only).
    Product,
}

impl Kind {
    /// The complementary single-`y` kind (`Y <-> YSecond`).
    pub fn partner(self) -> Kind {
        match self {
            Kind::Y => Kind::YSecond,
            Kind::YSecond => Kind::Y,
            other => other,
        }
    }
}

/// A monomial `x^a * (y-factor)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mon {
    /// Power of `x`.
    pub a: usize,
    /// The `y`-factor.
    pub kind: Kind,
}

impl Mon {
    /// Pole order at infinity for the given curve type.
    pub fn weight(&self, rhat: usize, shat: usize) -> usize {
        3 * self.a
            + match self.kind {
                Kind::One => 0,
                Kind::Y => rhat,
                Kind::YSecond => shat,
                Kind::Product => rhat + shat,
            }
    }

    /// Evaluate at a point `(x, y)` of the curve.
    pub fn eval(&self, cur: &Curve, x: Complex64, y: Complex64) -> Complex64 {
        let xa = x.powu(self.a as u32);
        match self.kind {
            Kind::One => xa,
            Kind::Y => xa * y,
            Kind::YSecond => xa * cur.ysecond(x, y),
            Kind::Product => xa * y * cur.ysecond(x, y),
        }
    }
}

/// First `n` monomials of the affine stream, ordered by pole order.
pub fn phi_stream(cur: &Curve, n: usize) -> Vec<Mon> {
    let (rhat, shat) = (cur.sg.rhat, cur.sg.shat);
    let mut items: Vec<(usize, Mon)> = Vec::new();
    for a in 0..=n {
        items.push((3 * a, Mon { a, kind: Kind::One }));
        items.push((3 * a + rhat, Mon { a, kind: Kind::Y }));
        items.push((
            3 * a + shat,
            Mon {
                a,
                kind: Kind::YSecond,
            },
        ));
    }
    items.sort_by_key(|&(w, _)| w);
    items.into_iter().take(n).map(|(_, m)| m).collect()
}

/// First `n` monomials of the dual stream, ordered by pole order.
pub fn phi_hat_stream(cur: &Curve, n: usize) -> Vec<Mon> {
    let (rhat, shat) = (cur.sg.rhat, cur.sg.shat);
    let mut items: Vec<(usize, Mon)> = Vec::new();
    for a in 0..=n {
        items.push((3 * a + rhat, Mon { a, kind: Kind::Y }));
        items.push((
            3 * a + shat,
            Mon {
                a,
                kind: Kind::YSecond,
            },
        ));
        items.push((
            3 * a + rhat + shat,
            Mon {
                a,
                kind: Kind::Product,
            },
        ));
    }
    items.sort_by_key(|&(w, _)| w);
    items.into_iter().take(n).map(|(_, m)| m).collect()
}

/// The differential bases of a curve: holomorphic differentials, raw and
/// corrected second-kind differentials, and the correction matrix.
#[derive(Debug, Clone)]
pub struct DifferentialBasis {
    /// The first `g + 3` dual monomials (indices `0..g` are the numerators
    /// of the holomorphic differentials).
    pub phihat: Vec<Mon>,
    /// Numerator polynomials `h_i` of the corrected second-kind
    /// differentials, one per holomorphic index.
    pub hs: Vec<CPoly>,
    /// Symmetric correction matrix applied to the raw divided-difference
    /// numerators; only the last row/column can be nonzero. The same matrix
    /// shifts the second-kind period matrices and the quadratic form of the
    /// sigma function.
    pub s_corr: Vec<Vec<Complex64>>,
}

impl DifferentialBasis {
    /// Build the basis data for a curve.
    pub fn new(cur: &Curve) -> Result<Self> {
        let g = cur.genus();
        let phihat = phi_hat_stream(cur, g + 3);
        let basis_g = &phihat[..g];
        for m in basis_g {
            if m.kind == Kind::Product {
                return Err(Error::SecondKindSplit(
                    "holomorphic range contains a product monomial".into(),
                ));
            }
        }

        // Raw numerators from divided differences of the curve data:
        // dd1 of W_r minus three times dd2 of k_r k_s, split across the
        // holomorphic monomials.
        let mut d1 = dd1(&cur.w_r);
        for (key, c) in dd2(&cur.krs) {
            *d1.entry(key).or_default() -= 3.0 * c;
        }
        let find = |a: usize, kind: Kind| -> Option<usize> {
            basis_g.iter().position(|m| m.a == a && m.kind == kind)
        };
        let mut hs_maps: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); g];
        for (&(a, b), &c) in &d1 {
            if let Some(i) = find(b, Kind::YSecond) {
                *hs_maps[i].entry(a).or_default() += c;
            } else if let Some(i) = find(a, Kind::Y) {
                *hs_maps[i].entry(b).or_default() -= c;
            } else {
                return Err(Error::SecondKindSplit(format!(
                    "term x_p^{a} x_q^{b} fits no basis slot"
                )));
            }
        }

        // Exact last-row normalization. The two-point expansion requires the
        // corrected numerator of the last row to be the pure monomial whose
        // pole order continues the dual stream; the raw numerator can differ
        // by a combination of lower basis monomials of the complementary
        // kind, and moving that difference into the correction matrix keeps
        // the full 2-form symmetric.
        let last = basis_g[g - 1];
        let target = phihat[g];
        if target.kind != last.kind.partner() {
            return Err(Error::SecondKindSplit(
                "stream does not alternate at the holomorphic boundary".into(),
            ));
        }
        let mut s_corr = vec![vec![Complex64::new(0.0, 0.0); g]; g];
        {
            let hmap = &mut hs_maps[g - 1];
            let lead = hmap.get(&target.a).copied().unwrap_or_default();
            if (lead - Complex64::new(1.0, 0.0)).norm() > 1e-9 {
                return Err(Error::SecondKindSplit(format!(
                    "last-row leading coefficient {lead} is not 1"
                )));
            }
            if hmap.keys().any(|&p| p > target.a) {
                return Err(Error::SecondKindSplit(
                    "last-row numerator exceeds the expected degree".into(),
                ));
            }
            let defect: Vec<(usize, Complex64)> = hmap
                .iter()
                .filter(|&(&p, c)| p != target.a && c.norm() > 0.0)
                .map(|(&p, &c)| (p, c))
                .collect();
            for (p, c) in defect {
                let j = find(p, target.kind).ok_or_else(|| {
                    Error::SecondKindSplit(format!(
                        "defect power x^{p} matches no basis slot of the partner kind"
                    ))
                })?;
                s_corr[g - 1][j] = -c;
                s_corr[j][g - 1] = -c;
            }
            // snap the last row to the pure monomial
            hmap.clear();
            hmap.insert(target.a, Complex64::new(1.0, 0.0));
        }
        // apply the symmetric counterpart: row j gains s_corr[j][g-1] times
        // the monomial of the last holomorphic slot
        for j in 0..g.saturating_sub(1) {
            let sc = s_corr[j][g - 1];
            if sc.norm() > 0.0 {
                if basis_g[j].kind != last.kind.partner() {
                    return Err(Error::SecondKindSplit(
                        "correction pairs rows of equal kind".into(),
                    ));
                }
                *hs_maps[j].entry(last.a).or_default() += sc;
            }
        }

        let hs = hs_maps
            .into_iter()
            .map(|m| {
                let deg = m.keys().max().copied().unwrap_or(0);
                let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
                for (p, c) in m {
                    coeffs[p] = c;
                }
                CPoly::from_coeffs(coeffs)
            })
            .collect();

        Ok(DifferentialBasis {
            phihat,
            hs,
            s_corr,
        })
    }

    /// Number of holomorphic differentials.
    pub fn genus(&self) -> usize {
        self.hs.len()
    }

    /// Scalar coefficient (with respect to `dx`) of the `i`-th holomorphic
    /// differential at a point, `i = 0..g`:
    /// `nu1_i = phi_hat_i dx / (3 y y_second)`.
    pub fn nu1(&self, cur: &Curve, i: usize, x: Complex64, y: Complex64) -> Complex64 {
        let ysec = cur.ysecond(x, y);
        self.phihat[i].eval(cur, x, y) / (3.0 * y * ysec)
    }

    /// Scalar coefficient of the corrected `i`-th second-kind differential.
    /// Its numerator is `h_i(x)` times the `y`-factor complementary to the
    /// `i`-th holomorphic monomial.
    pub fn nu2(&self, cur: &Curve, i: usize, x: Complex64, y: Complex64) -> Complex64 {
        let ysec = cur.ysecond(x, y);
        let h = self.hs[i].eval(x);
        let num = match self.phihat[i].kind {
            Kind::Y => h * ysec,
            Kind::YSecond => h * y,
            _ => unreachable!("holomorphic monomials carry a single y factor"),
        };
        num / (3.0 * y * ysec)
    }

    /// Exponent `e_i` of the deck action on the `i`-th holomorphic
    /// differential: pulling back along `(x, y) -> (x, zeta y)` multiplies
    /// `nu1_i` by `zeta^{e_i}`.
    pub fn zeta_exponent(&self, i: usize) -> u32 {
        match self.phihat[i].kind {
            Kind::Y => 1,
            Kind::YSecond => 2,
            _ => 0,
        }
    }
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

    fn curve_g4() -> Curve {
        Curve::new(
            2,
            3,
            vec![
                c(1.0, 0.0),
                c(-0.5, 0.8),
                c(0.2, -0.9),
                c(-1.2, -0.3),
                c(0.6, 1.1),
            ],
        )
        .unwrap()
    }

    #[test]
    fn monomial_relations_close_the_ring() {
        let cur = curve_g2();
        let x = c(0.7, -1.3);
        let y = cur.lifts(x)[0];
        let ys = cur.ysecond(x, y);
        // y^2 = k_r y_second, y_second^2 = k_s y, y y_second = k_r k_s
        assert!((y * y - cur.kr.eval(x) * ys).norm() < 1e-11);
        assert!((ys * ys - cur.ks.eval(x) * y).norm() < 1e-11);
        assert!((y * ys - cur.krs_eval(x)).norm() < 1e-11);
    }

    #[test]
    fn affine_stream_orders_match_semigroup() {
        let cur = curve_g2();
        let phis = phi_stream(&cur, 8);
        for (i, m) in phis.iter().enumerate() {
            assert_eq!(
                m.weight(cur.sg.rhat, cur.sg.shat),
                cur.sg.nth(i),
                "affine monomial {i}"
            );
        }
        // explicit start: 1, x, y, y_second, x^2, xy for weights 0,3,4,5,6,7
        assert_eq!(phis[0], Mon { a: 0, kind: Kind::One });
        assert_eq!(phis[1], Mon { a: 1, kind: Kind::One });
        assert_eq!(phis[2], Mon { a: 0, kind: Kind::Y });
        assert_eq!(phis[3], Mon { a: 0, kind: Kind::YSecond });
    }

    #[test]
    fn dual_stream_orders_match_shifted_sequence() {
        for cur in [curve_g2(), curve_g4()] {
            let hats = phi_hat_stream(&cur, 9);
            for (i, m) in hats.iter().enumerate() {
                assert_eq!(
                    m.weight(cur.sg.rhat, cur.sg.shat),
                    cur.sg.nth_hat(i),
                    "dual monomial {i}"
                );
            }
        }
        // genus-2 curve: y, y_second, xy, xy_second, y*y_second, x^2 y
        let cur = curve_g2();
        let hats = phi_hat_stream(&cur, 6);
        assert_eq!(hats[0], Mon { a: 0, kind: Kind::Y });
        assert_eq!(hats[1], Mon { a: 0, kind: Kind::YSecond });
        assert_eq!(hats[2], Mon { a: 1, kind: Kind::Y });
        assert_eq!(hats[3], Mon { a: 1, kind: Kind::YSecond });
        assert_eq!(hats[4], Mon { a: 0, kind: Kind::Product });
        assert_eq!(hats[5], Mon { a: 2, kind: Kind::Y });
    }

    #[test]
    fn genus_two_numerators_and_correction() {
        let cur = curve_g2();
        let basis = DifferentialBasis::new(&cur).unwrap();
        let b3 = cur.bs[2];
        // corrected numerators: h_1 = 2x - b3, h_2 = x
        let h1 = &basis.hs[0];
        assert!((h1.coeffs[1] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((h1.coeffs[0] + b3).norm() < 1e-12);
        let h2 = &basis.hs[1];
        assert_eq!(h2.degree(), Some(1));
        assert!((h2.coeffs[1] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(h2.coeffs[0].norm() < 1e-14);
        // correction matrix: single symmetric off-diagonal entry -b3
        assert!((basis.s_corr[0][1] + b3).norm() < 1e-12);
        assert!((basis.s_corr[1][0] + b3).norm() < 1e-12);
        assert!(basis.s_corr[0][0].norm() < 1e-14);
        assert!(basis.s_corr[1][1].norm() < 1e-14);
    }

    #[test]
    fn genus_one_needs_no_correction() {
        let cur = Curve::new(0, 2, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let basis = DifferentialBasis::new(&cur).unwrap();
        assert_eq!(basis.genus(), 1);
        for row in &basis.s_corr {
            for e in row {
                assert!(e.norm() < 1e-14);
            }
        }
        // the single numerator is the pure monomial continuing the stream
        assert_eq!(basis.hs[0].degree(), Some(0));
        assert!((basis.hs[0].coeffs[0] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn genus_four_correction_occupies_expected_slots() {
        let cur = curve_g4();
        let basis = DifferentialBasis::new(&cur).unwrap();
        let g = 4;
        // last row numerator is the pure monomial x^2
        let hlast = &basis.hs[g - 1];
        assert_eq!(hlast.degree(), Some(2));
        assert!((hlast.coeffs[2] - c(1.0, 0.0)).norm() < 1e-12);
        assert!(hlast.coeffs[0].norm() < 1e-14 && hlast.coeffs[1].norm() < 1e-14);
        // corrections sit against the two Y-kind holomorphic slots (indices
        // 0 and 2), and nowhere else
        for i in 0..g {
            for j in 0..g {
                let v = basis.s_corr[i][j].norm();
                let expected = (i == g - 1 && (j == 0 || j == 2))
                    || (j == g - 1 && (i == 0 || i == 2));
                if expected {
                    assert!(v > 1e-10, "slot ({i},{j}) should be nonzero");
                } else {
                    assert!(v < 1e-14, "slot ({i},{j}) should vanish");
                }
            }
        }
        // symmetry
        for i in 0..g {
            for j in 0..g {
                assert!((basis.s_corr[i][j] - basis.s_corr[j][i]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn holomorphic_differentials_are_finite_at_infinity() {
        for cur in [curve_g2(), curve_g4()] {
            let basis = DifferentialBasis::new(&cur).unwrap();
            let chart = cur.infinity_chart(64);
            let g = cur.genus();
            let weights = cur.sg.u_weights();
            // nu1_i * dx/dt ~ t^{wt(u_{i+1}) - 1}: evaluate at two radii and
            // confirm the scaling exponent
            let t1 = c(0.05, 0.013);
            let t2 = t1 * 0.5;
            for i in 0..g {
                let val = |t: Complex64| {
                    let x = chart.x(t);
                    let y = chart.y(t);
                    let dxdt = -3.0 / (t * t * t * t);
                    basis.nu1(&cur, i, x, y) * dxdt
                };
                let v1 = val(t1);
                let v2 = val(t2);
                let order = (v1 / v2).norm().ln() / (t1.norm() / t2.norm()).ln();
                let expected = (weights[i] - 1) as f64;
                assert!(
                    (order - expected).abs() < 0.05,
                    "differential {i}: vanishing order {order} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn first_differential_vanishes_simply_at_the_doubled_branch_point() {
        // On the genus-2 curve the first holomorphic differential has
        // divisor B + infinity, where B sits over the doubled branch point.
        let cur = curve_g2();
        let basis = DifferentialBasis::new(&cur).unwrap();
        let b = cur.bs[2];
        // local chart x = b + tau^3; nu1_1 * dx/dtau ~ tau
        let val = |tau: Complex64| {
            let x = b + tau * tau * tau;
            let y = cur.lifts(x)[0];
            let dxdtau = 3.0 * tau * tau;
            basis.nu1(&cur, 0, x, y) * dxdtau
        };
        let t1 = c(1e-3, 0.4e-3);
        let v1 = val(t1);
        let v2 = val(t1 * 0.5);
        let order = (v1 / v2).norm().ln() / 2.0f64.ln();
        assert!((order - 1.0).abs() < 0.02, "vanishing order {order}");
    }

    #[test]
    fn deck_action_scales_differentials_by_cube_roots() {
        let cur = curve_g4();
        let basis = DifferentialBasis::new(&cur).unwrap();
        let zeta = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let x = c(1.4, 0.8);
        let y = cur.lifts(x)[1];
        for i in 0..cur.genus() {
            let before = basis.nu1(&cur, i, x, y);
            let after = basis.nu1(&cur, i, x, cur.deck(y));
            let expected = before * zeta.powu(basis.zeta_exponent(i));
            assert!(
                (after - expected).norm() < 1e-12 * (1.0 + before.norm()),
                "differential {i}"
            );
        }
    }
}
