//! The cyclic trigonal curve `y^3 = k_r(x)^2 k_s(x)` and its sheet structure.
//!
//! The defining data is a pair `(r, s)` and `r + s` distinct branch points:
//! the first `s` of them are the roots of `k_s`, the last `r` the roots of
//! `k_r`. The three sheets over a generic `x` are the cube roots of
//! `k_r(x)^2 k_s(x)`; the second coordinate function is
//! `y_second = k_r k_s / y`, so that `y * y_second = k_r k_s` and
//! `y_second^2 = k_r k_s^2 / y ...` etc. The point at infinity is totally
//! ramified, with local parameter `t` such that `x = t^{-3}`.

use crate::poly::CPoly;
use crate::semigroup::Semigroup;
use crate::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// JSON-friendly description of a curve: `r`, `s`, and the branch points as
/// `[re, im]` pairs (first `s` entries are simple roots, last `r` are the
/// doubled roots).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveConfig {
    /// Count of doubled branch points.
    pub r: usize,
    /// Count of simple branch points.
    pub s: usize,
    /// Branch points as `[re, im]` pairs, length `r + s`.
    pub branch_points: Vec<[f64; 2]>,
}

/// A concrete trigonal curve with numerical branch points.
#[derive(Debug, Clone)]
pub struct Curve {
    /// Semigroup data of the point at infinity.
    pub sg: Semigroup,
    /// All branch points; the first `s` are roots of `k_s`, the rest of `k_r`.
    pub bs: Vec<Complex64>,
    /// Multiplicity of each branch point inside `f = k_r^2 k_s` (1 or 2).
    pub mult: Vec<u32>,
    /// `k_s` as a monic polynomial.
    pub ks: CPoly,
    /// `k_r` as a monic polynomial.
    pub kr: CPoly,
    /// The product `k_r k_s` (the function `y * y_second`).
    pub krs: CPoly,
    /// The defining right-hand side `f = k_r^2 k_s`.
    pub f: CPoly,
    /// `W_r = 2 k_r' k_s + k_r k_s'`, the numerator of `3 m y' / y`.
    pub w_r: CPoly,
    /// `W_s = k_r' k_s + 2 k_r k_s'`, the analogous numerator for the
    /// second coordinate function.
    pub w_s: CPoly,
}

impl Curve {
    /// Build a curve, validating the parameter pair and the branch points.
    pub fn new(r: usize, s: usize, bs: Vec<Complex64>) -> Result<Self> {
        let sg = Semigroup::new(r, s)?;
        if bs.len() != r + s {
            return Err(Error::InvalidParams(format!(
                "expected {} branch points, got {}",
                r + s,
                bs.len()
            )));
        }
        for i in 0..bs.len() {
            for j in (i + 1)..bs.len() {
                if (bs[i] - bs[j]).norm() < 1e-12 {
                    return Err(Error::InvalidParams(format!(
                        "branch points {i} and {j} coincide"
                    )));
                }
            }
        }
        let ks = CPoly::from_roots(&bs[..s]);
        let kr = CPoly::from_roots(&bs[s..]);
        let krs = kr.mul(&ks);
        let f = kr.mul(&kr).mul(&ks);
        let w_r = kr
            .derivative()
            .mul(&ks)
            .scale(Complex64::new(2.0, 0.0))
            .add(&kr.mul(&ks.derivative()));
        let w_s = kr
            .derivative()
            .mul(&ks)
            .add(&kr.mul(&ks.derivative()).scale(Complex64::new(2.0, 0.0)));
        let mult = (0..r + s).map(|j| if j < s { 1 } else { 2 }).collect();
        Ok(Curve {
            sg,
            bs,
            mult,
            ks,
            kr,
            krs,
            f,
            w_r,
            w_s,
        })
    }

    /// Genus of the curve.
    pub fn genus(&self) -> usize {
        self.sg.genus
    }

    /// Build from a JSON-friendly config.
    pub fn from_config(cfg: &CurveConfig) -> Result<Self> {
        let bs = cfg
            .branch_points
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Curve::new(cfg.r, cfg.s, bs)
    }

    /// Export the defining data.
    pub fn config(&self) -> CurveConfig {
        CurveConfig {
            r: self.sg.r,
            s: self.sg.s,
            branch_points: self.bs.iter().map(|b| [b.re, b.im]).collect(),
        }
    }

    /// `f(x) = k_r(x)^2 k_s(x)` evaluated in factored form, which stays
    /// accurate near the branch points.
    pub fn f_eval(&self, x: Complex64) -> Complex64 {
        let mut v = Complex64::new(1.0, 0.0);
        for (b, &m) in self.bs.iter().zip(&self.mult) {
            let d = x - b;
            v *= if m == 1 { d } else { d * d };
        }
        v
    }

    /// `k_r(x) k_s(x)` in factored form.
    pub fn krs_eval(&self, x: Complex64) -> Complex64 {
        self.bs.iter().map(|&b| x - b).product()
    }

    /// Logarithmic derivative `f'(x)/f(x) = sum_j m_j / (x - b_j)`.
    pub fn f_log_derivative(&self, x: Complex64) -> Complex64 {
        self.bs
            .iter()
            .zip(&self.mult)
            .map(|(&b, &m)| Complex64::new(m as f64, 0.0) / (x - b))
            .sum()
    }

    /// The three lifts of `x`, sorted by complex argument of `y` for a
    /// deterministic sheet labelling.
    pub fn lifts(&self, x: Complex64) -> [Complex64; 3] {
        let f = self.f_eval(x);
        let y0 = f.powf(1.0 / 3.0);
        let z = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut ys = [y0, y0 * z, y0 * z * z];
        ys.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        ys
    }

    /// The second coordinate function `y_second = k_r k_s / y` at a lift.
    pub fn ysecond(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.krs_eval(x) / y
    }

    /// Derivative `dy/dx` on a sheet: `y' = y f'/(3 f)`.
    pub fn dy(&self, x: Complex64, y: Complex64) -> Complex64 {
        y * self.f_log_derivative(x) / 3.0
    }

    /// Derivative of the second coordinate on a sheet:
    /// `y_second' = ((k_r k_s)' - y_second y') / y`.
    pub fn dysecond(&self, x: Complex64, y: Complex64) -> Complex64 {
        let ys = self.ysecond(x, y);
        (self.krs.derivative().eval(x) - ys * self.dy(x, y)) / y
    }

    /// Relative residual of the curve equation at `(x, y)`.
    pub fn on_curve_residual(&self, x: Complex64, y: Complex64) -> f64 {
        let f = self.f_eval(x);
        (y * y * y - f).norm() / (1.0 + f.norm())
    }

    /// The deck transformation generating the cyclic cover:
    /// `(x, y) -> (x, zeta y)` with `zeta = exp(2 pi i / 3)`.
    pub fn deck(&self, y: Complex64) -> Complex64 {
        y * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0)
    }

    /// Series data of the chart at infinity. `nterms` counts powers of
    /// `w = t^3`; 48-80 terms cover all uses in this crate.
    pub fn infinity_chart(&self, nterms: usize) -> InfinityChart {
        let n = nterms;
        let rhat = self.sg.rhat;
        // f(x) = x^{rhat} (1 + a_{rhat-1} x^{-1} + ...) so in w = t^3 the
        // unit factor has coefficients f[rhat - k].
        let fco: Vec<Complex64> = (0..n)
            .map(|k| {
                if k <= rhat {
                    self.f.coeffs.get(rhat - k).copied().unwrap_or_default()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        // log of the unit series, then scale by 1/3, then exp: cube root.
        let lg = series_log(&fco);
        let third: Vec<Complex64> = lg.iter().map(|&c| c / 3.0).collect();
        let unit_y = series_exp(&third);
        // y_second = krs / y: krs has degree r+s, unit coefficients krs[r+s-k]
        let deg_krs = self.sg.r + self.sg.s;
        let krsco: Vec<Complex64> = (0..n)
            .map(|k| {
                if k <= deg_krs {
                    self.krs.coeffs.get(deg_krs - k).copied().unwrap_or_default()
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        let inv_unit_y = series_inverse(&unit_y);
        let unit_ysecond = series_mul(&krsco, &inv_unit_y, n);
        InfinityChart {
            rhat,
            shat: self.sg.shat,
            unit_y,
            unit_ysecond,
        }
    }
}

/// Series expansion of the curve near the point at infinity in the local
/// parameter `t` with `x = t^{-3}` exactly. The `y` functions are
/// `t^{-rhat}` resp. `t^{-shat}` times unit power series in `w = t^3`.
#[derive(Debug, Clone)]
pub struct InfinityChart {
    /// Pole order of `y` at infinity.
    pub rhat: usize,
    /// Pole order of `y_second` at infinity.
    pub shat: usize,
    /// Unit series (in `w = t^3`) of `t^{rhat} y`.
    pub unit_y: Vec<Complex64>,
    /// Unit series (in `w = t^3`) of `t^{shat} y_second`.
    pub unit_ysecond: Vec<Complex64>,
}

impl InfinityChart {
    /// `x(t) = t^{-3}`.
    pub fn x(&self, t: Complex64) -> Complex64 {
        1.0 / (t * t * t)
    }

    /// `y(t)` on the distinguished sheet of the chart.
    pub fn y(&self, t: Complex64) -> Complex64 {
        let w = t * t * t;
        horner(&self.unit_y, w) * t.powi(-(self.rhat as i32))
    }

    /// `y_second(t)` on the distinguished sheet of the chart.
    pub fn ysecond(&self, t: Complex64) -> Complex64 {
        let w = t * t * t;
        horner(&self.unit_ysecond, w) * t.powi(-(self.shat as i32))
    }
}

fn horner(c: &[Complex64], x: Complex64) -> Complex64 {
    let mut v = Complex64::new(0.0, 0.0);
    for &ck in c.iter().rev() {
        v = v * x + ck;
    }
    v
}

/// `log` of a power series with constant term 1 (same length).
pub fn series_log(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut lg = vec![Complex64::new(0.0, 0.0); n];
    for k in 1..n {
        let mut acc = a[k];
        for j in 1..k {
            acc -= lg[j] * a[k - j] * (j as f64 / k as f64);
        }
        lg[k] = acc;
    }
    lg
}

/// `exp` of a power series with constant term 0 (same length).
pub fn series_exp(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    e[0] = Complex64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += a[j] * e[k - j] * j as f64;
        }
        e[k] = acc / k as f64;
    }
    e
}

/// Reciprocal of a power series with constant term 1 (same length).
pub fn series_inverse(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    let mut inv = vec![Complex64::new(0.0, 0.0); n];
    inv[0] = Complex64::new(1.0, 0.0);
    for k in 1..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=k {
            acc += a[j] * inv[k - j];
        }
        inv[k] = -acc;
    }
    inv
}

/// Product of two power series, truncated to `n` terms.
pub fn series_mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (i, &ai) in a.iter().enumerate().take(n) {
        if ai.norm_sqr() == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}
