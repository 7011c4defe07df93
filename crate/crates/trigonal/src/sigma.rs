//! Multidimensional theta functions and the sigma function.
//!
//! The sigma function is assembled from a theta function with characteristic:
//! `sigma(u) = c exp(-u^T kappa u / 2) theta[delta](om1^{-1} u / 2; tau)`.
//! The characteristic is found by demanding that sigma vanish on images of
//! `(g-1)`-tuples under the shifted Abel map, and the constant `c` is fixed
//! so the leading term of the expansion at the base point is the Schur
//! polynomial of the Weierstrass gap sequence, with coefficient one.

use crate::basis::DifferentialBasis;
use crate::curve::Curve;
use crate::periods::{AbelMap, PeriodData};
use crate::semigroup::SchurPoly;
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Theta function with half-integer characteristic, with batched partial
/// derivatives: one lattice sweep evaluates every requested derivative.
///
/// `d1` is the argument shift (each entry 0 or 1/2), `d2` the index shift.
/// Each entry of `orders` lists coordinate indices to differentiate in, so
/// `[]` is the plain value, `[k]` is `d/dz_k`, `[k, l]` a second partial.
/// The sum is `sum_n exp(i pi m^T tau m + 2 pi i m^T (z + d1))` over
/// `m = n + d2`, and each derivative in `z_k` multiplies the term by
/// `2 pi i m_k`.
pub fn theta_char(
    d1: &[f64],
    d2: &[f64],
    z: &[Complex64],
    tau: &DMatrix<Complex64>,
    orders: &[Vec<usize>],
    tol: f64,
) -> Result<Vec<Complex64>> {
    let g = z.len();
    if d1.len() != g || d2.len() != g || tau.nrows() != g || tau.ncols() != g {
        return Err(Error::InvalidParams("theta dimension mismatch".into()));
    }
    let mut im_tau = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            im_tau[(i, j)] = tau[(i, j)].im;
        }
    }
    let eig = im_tau.clone().symmetric_eigen();
    let lam_min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if lam_min <= 0.0 {
        return Err(Error::Numerical(
            "theta period matrix has non-positive imaginary part".into(),
        ));
    }
    // center the summation box on the peak of the Gaussian envelope
    let rhs = nalgebra::DVector::<f64>::from_iterator(g, z.iter().map(|w| -w.im));
    let cen = im_tau
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("singular imaginary part in theta".into()))?;
    let max_order = orders.iter().map(|o| o.len()).max().unwrap_or(0);
    let radius = (-tol.ln()).max(1.0).sqrt() / (std::f64::consts::PI * lam_min).sqrt()
        + 2.5
        + 0.35 * max_order as f64;
    let lo: Vec<i64> = (0..g)
        .map(|k| (cen[k] - d2[k] - radius).ceil() as i64)
        .collect();
    let hi: Vec<i64> = (0..g)
        .map(|k| (cen[k] - d2[k] + radius).floor() as i64)
        .collect();
    for k in 0..g {
        if hi[k] < lo[k] {
            return Err(Error::Numerical("empty theta summation box".into()));
        }
    }

    let two_pi_i = Complex64::new(0.0, TWO_PI);
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    let mut acc = vec![Complex64::new(0.0, 0.0); orders.len()];
    let mut n: Vec<i64> = lo.clone();
    let mut m = vec![0.0f64; g];
    'sweep: loop {
        for k in 0..g {
            m[k] = n[k] as f64 + d2[k];
        }
        let mut quad = Complex64::new(0.0, 0.0);
        for k in 0..g {
            // diagonal plus twice the upper triangle (tau is symmetric)
            quad += tau[(k, k)] * m[k] * m[k];
            for l in (k + 1)..g {
                quad += 2.0 * tau[(k, l)] * m[k] * m[l];
            }
        }
        let mut lin = Complex64::new(0.0, 0.0);
        for k in 0..g {
            lin += (z[k] + d1[k]) * m[k];
        }
        let term = (i_pi * quad + two_pi_i * lin).exp();
        for (slot, order) in acc.iter_mut().zip(orders) {
            let mut fac = Complex64::new(1.0, 0.0);
            for &k in order {
                fac *= two_pi_i * m[k];
            }
            *slot += fac * term;
        }
        // odometer increment over the box
        for k in 0..g {
            n[k] += 1;
            if n[k] <= hi[k] {
                continue 'sweep;
            }
            n[k] = lo[k];
        }
        break;
    }
    Ok(acc)
}

/// The derivative orders used by a full (value, gradient, Hessian) sweep.
fn full_orders(g: usize) -> Vec<Vec<usize>> {
    let mut orders = vec![vec![]];
    for k in 0..g {
        orders.push(vec![k]);
    }
    for i in 0..g {
        for j in i..g {
            orders.push(vec![i, j]);
        }
    }
    orders
}

/// The sigma function of a curve, with first and second derivatives.
pub struct SigmaFunction<'a> {
    pub cur: &'a Curve,
    pub basis: &'a DifferentialBasis,
    pub periods: &'a PeriodData,
    /// Quadratic form `et1 om1^{-1}` in the exponential prefactor.
    pub kappa: DMatrix<Complex64>,
    /// Argument shift of the theta characteristic (entries 0 or 1/2).
    pub d1: Vec<f64>,
    /// Index shift of the theta characteristic (entries 0 or 1/2).
    pub d2: Vec<f64>,
    /// Normalizing constant fixing the Schur leading coefficient to one.
    pub c: Complex64,
    /// Expansion base point (minus the branch-divisor translation).
    pub u0: Vec<Complex64>,
    /// Schur polynomial of the gap sequence: the leading part at `u0`.
    pub schur: SchurPoly,
    theta_tol: f64,
}

impl<'a> SigmaFunction<'a> {
    /// Determine the characteristic and normalization for a curve.
    pub fn new(
        cur: &'a Curve,
        basis: &'a DifferentialBasis,
        periods: &'a PeriodData,
        abel: &AbelMap<'_>,
    ) -> Result<Self> {
        let g = cur.genus();
        let theta_tol = 1e-12;
        // the quadratic prefactor
        let kappa = &periods.et1 * &periods.om1i;
        let mut asym = 0.0f64;
        for i in 0..g {
            for j in 0..g {
                asym = asym.max((kappa[(i, j)] - kappa[(j, i)]).norm());
            }
        }
        if asym > 1e-6 {
            return Err(Error::Numerical(format!(
                "quadratic prefactor asymmetry {asym:.2e}"
            )));
        }

        // sample arguments where sigma must vanish: shifted Abel images of
        // (g-1)-tuples of points
        let nsamples = if g == 1 { 1 } else { 12 + 4 * g };
        let mut args: Vec<Vec<Complex64>> = Vec::with_capacity(nsamples);
        let mut rng = ChaCha8Rng::seed_from_u64(0x7269_676f);
        let centroid = cur.bs.iter().sum::<Complex64>() / cur.bs.len() as f64;
        let scale = cur
            .bs
            .iter()
            .map(|b| (b - centroid).norm())
            .fold(0.0, f64::max)
            + 0.5;
        let mut attempts = 0;
        while args.len() < nsamples {
            attempts += 1;
            if attempts > 60 * nsamples {
                return Err(Error::Numerical(
                    "could not sample enough points for the characteristic search".into(),
                ));
            }
            let mut pts: Vec<(Complex64, Complex64)> = Vec::with_capacity(g - 1);
            let mut bad = false;
            for _ in 0..g.saturating_sub(1) {
                let mut found = None;
                for _ in 0..40 {
                    let rho = scale * rng.gen_range(0.55..1.9);
                    let th = rng.gen_range(0.0..TWO_PI);
                    let x = centroid + Complex64::from_polar(rho, th);
                    if cur.bs.iter().any(|b| (x - b).norm() < 0.12 * scale) {
                        continue;
                    }
                    let lifts = cur.lifts(x);
                    let y = lifts[rng.gen_range(0..3usize)];
                    found = Some((x, y));
                    break;
                }
                match found {
                    Some(p) => pts.push(p),
                    None => {
                        bad = true;
                        break;
                    }
                }
            }
            if bad {
                continue;
            }
            match abel.w_s(&pts) {
                Ok(u) => {
                    let v = half_om1i_times(periods, &u);
                    args.push(v);
                }
                Err(_) => continue, // path strayed too close to a branch point
            }
        }

        // score every half-integer characteristic on the samples
        let ncand = 1usize << (2 * g);
        let value_order = [vec![]];
        let mut best: Option<(f64, usize)> = None;
        let mut second = f64::INFINITY;
        let mut scores = vec![0.0f64; ncand];
        for cand in 0..ncand {
            let (d1, d2) = unpack_characteristic(cand, g);
            let mut worst = 0.0f64;
            for v in &args {
                let th = theta_char(&d1, &d2, v, &periods.tau, &value_order, theta_tol)?;
                worst = worst.max(th[0].norm());
            }
            scores[cand] = worst;
        }
        let norm = scores.iter().cloned().fold(0.0, f64::max).max(1e-300);
        for (cand, s) in scores.iter().enumerate() {
            let rel = s / norm;
            match best {
                None => best = Some((rel, cand)),
                Some((b, _)) if rel < b => {
                    second = best.unwrap().0;
                    best = Some((rel, cand));
                }
                Some(_) => second = second.min(rel),
            }
        }
        let (best_score, best_cand) = best.expect("at least one characteristic");
        if best_score > 1e-5 || second < 100.0 * best_score {
            return Err(Error::DeltaAmbiguous(format!(
                "characteristic search: best {best_score:.3e}, runner-up {second:.3e}"
            )));
        }
        let (d1, d2) = unpack_characteristic(best_cand, g);

        // normalize so the expansion at u0 starts with the Schur polynomial
        let schur = cur.sg.schur_polynomial();
        let u0: Vec<Complex64> = abel.shift.iter().map(|s| -s).collect();
        let mut sf = SigmaFunction {
            cur,
            basis,
            periods,
            kappa,
            d1,
            d2,
            c: Complex64::new(1.0, 0.0),
            u0: u0.clone(),
            schur,
            theta_tol,
        };
        let (alpha, coef) = sf.schur.min_degree_monomial();
        let (_, grad, hess) = sf.eval_full(&u0)?;
        let idx: Vec<usize> = alpha
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect();
        let deriv = match idx.len() {
            1 => grad[idx[0]],
            2 => hess[(idx[0], idx[1])],
            n => {
                return Err(Error::Numerical(format!(
                    "calibration derivative of order {n} not supported"
                )))
            }
        };
        if deriv.norm() < 1e-300 {
            return Err(Error::Numerical(
                "vanishing calibration derivative".into(),
            ));
        }
        let fact: f64 = alpha
            .iter()
            .map(|&e| (1..=e as u64).product::<u64>() as f64)
            .product();
        sf.c = Complex64::new(coef * fact, 0.0) / deriv;
        Ok(sf)
    }

    fn theta_arg(&self, u: &[Complex64]) -> Vec<Complex64> {
        half_om1i_times(self.periods, u)
    }

    /// Value of sigma.
    pub fn eval(&self, u: &[Complex64]) -> Result<Complex64> {
        let v = self.theta_arg(u);
        let th = theta_char(
            &self.d1,
            &self.d2,
            &v,
            &self.periods.tau,
            &[vec![]],
            self.theta_tol,
        )?;
        Ok(self.c * self.gauss_prefactor(u) * th[0])
    }

    /// Value and gradient of sigma.
    pub fn eval_grad(&self, u: &[Complex64]) -> Result<(Complex64, Vec<Complex64>)> {
        let (s, grad, _) = self.eval_full(u)?;
        Ok((s, grad))
    }

    /// Value, gradient, and Hessian of sigma in one theta sweep.
    pub fn eval_full(
        &self,
        u: &[Complex64],
    ) -> Result<(Complex64, Vec<Complex64>, DMatrix<Complex64>)> {
        let g = u.len();
        let v = self.theta_arg(u);
        let orders = full_orders(g);
        let th = theta_char(
            &self.d1,
            &self.d2,
            &v,
            &self.periods.tau,
            &orders,
            self.theta_tol,
        )?;
        let th0 = th[0];
        let thk = &th[1..1 + g];
        // unpack the packed upper-triangular second derivatives
        let mut thkl = DMatrix::<Complex64>::zeros(g, g);
        let mut pos = 1 + g;
        for i in 0..g {
            for j in i..g {
                thkl[(i, j)] = th[pos];
                thkl[(j, i)] = th[pos];
                pos += 1;
            }
        }
        let pref = self.c * self.gauss_prefactor(u);
        let ku: Vec<Complex64> = (0..g)
            .map(|i| (0..g).map(|j| self.kappa[(i, j)] * u[j]).sum())
            .collect();
        // chain rule through v = om1^{-1} u / 2
        let dv = |k: usize, i: usize| 0.5 * self.periods.om1i[(k, i)];
        let sig = pref * th0;
        let mut grad = Vec::with_capacity(g);
        for i in 0..g {
            let mut t = -ku[i] * th0;
            for k in 0..g {
                t += dv(k, i) * thk[k];
            }
            grad.push(pref * t);
        }
        let mut hess = DMatrix::<Complex64>::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                let mut t = (ku[i] * ku[j] - self.kappa[(i, j)]) * th0;
                for k in 0..g {
                    t -= ku[i] * dv(k, j) * thk[k];
                    t -= ku[j] * dv(k, i) * thk[k];
                    for l in 0..g {
                        t += dv(k, i) * dv(l, j) * thkl[(k, l)];
                    }
                }
                hess[(i, j)] = pref * t;
            }
        }
        Ok((sig, grad, hess))
    }

    fn gauss_prefactor(&self, u: &[Complex64]) -> Complex64 {
        let g = u.len();
        let mut q = Complex64::new(0.0, 0.0);
        for i in 0..g {
            for j in 0..g {
                q += u[i] * self.kappa[(i, j)] * u[j];
            }
        }
        (-0.5 * q).exp()
    }

    /// The two-index Weierstrass-type function built from sigma:
    /// `(sigma_i sigma_j - sigma sigma_ij) / sigma^2`.
    pub fn wp(&self, i: usize, j: usize, u: &[Complex64]) -> Result<Complex64> {
        let (s, grad, hess) = self.eval_full(u)?;
        Ok((grad[i] * grad[j] - s * hess[(i, j)]) / (s * s))
    }

    /// Relative defect of the transformation law under a lattice vector
    /// `ell = 2 om1 l1 + 2 om2 l2`.
    pub fn quasi_periodicity_residual(
        &self,
        u: &[Complex64],
        l1: &[i64],
        l2: &[i64],
    ) -> Result<f64> {
        let g = u.len();
        let ell: Vec<Complex64> = (0..g)
            .map(|j| {
                (0..g)
                    .map(|k| {
                        2.0 * self.periods.om1[(j, k)] * l1[k] as f64
                            + 2.0 * self.periods.om2[(j, k)] * l2[k] as f64
                    })
                    .sum()
            })
            .collect();
        let upl: Vec<Complex64> = u.iter().zip(&ell).map(|(a, b)| a + b).collect();
        let mid: Vec<Complex64> = u.iter().zip(&ell).map(|(a, b)| a + 0.5 * b).collect();
        // pairing of the midpoint with the second-kind periods of ell
        let mut lval = Complex64::new(0.0, 0.0);
        for j in 0..g {
            let mut etl = Complex64::new(0.0, 0.0);
            for k in 0..g {
                etl += self.periods.et1[(j, k)] * l1[k] as f64
                    + self.periods.et2[(j, k)] * l2[k] as f64;
            }
            lval += 2.0 * mid[j] * etl;
        }
        let mut phase = 0.0f64;
        for k in 0..g {
            phase += 2.0 * (l1[k] as f64 * self.d2[k] - l2[k] as f64 * self.d1[k]);
            phase += (l1[k] * l2[k]) as f64;
        }
        let chi = Complex64::new(0.0, std::f64::consts::PI * phase).exp();
        let lhs = self.eval(&upl)?;
        let rhs = self.eval(u)? * (-lval).exp() * chi;
        let denom = lhs.norm().max(rhs.norm()).max(1e-300);
        Ok((lhs - rhs).norm() / denom)
    }

    /// Relative deviation of the rescaled sigma from its Schur leading term:
    /// evaluates at `u0 + (eps^{w_i} a_i)` and compares
    /// `sigma / eps^{|Lambda|}` with the Schur polynomial at `a`.
    pub fn schur_leading_residual(&self, a: &[Complex64], eps: f64) -> Result<f64> {
        let wts = self.cur.sg.u_weights();
        let u: Vec<Complex64> = self
            .u0
            .iter()
            .zip(a.iter().zip(&wts))
            .map(|(u0, (ai, &w))| u0 + ai * eps.powi(w as i32))
            .collect();
        let lead = self.eval(&u)? / eps.powi(self.schur.total_weight as i32);
        let target = self.schur.eval(a);
        Ok((lead - target).norm() / target.norm().max(1.0))
    }

    /// Derivative of order `order` of `t -> sigma(u + t e_last)` at `t = 0`,
    /// by a Cauchy integral over a circle of the given radius.
    pub fn last_coordinate_derivative(
        &self,
        u: &[Complex64],
        order: usize,
        radius: f64,
    ) -> Result<Complex64> {
        let g = u.len();
        let n = 64usize;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let t = Complex64::from_polar(radius, TWO_PI * k as f64 / n as f64);
            let mut up = u.to_vec();
            up[g - 1] += t;
            let s = self.eval(&up)?;
            acc += s * t.powi(-(order as i32));
        }
        let fact: f64 = (1..=order as u64).product::<u64>() as f64;
        Ok(acc * fact / n as f64)
    }

    /// First order whose Taylor contribution at the probe radius dominates:
    /// the vanishing order of sigma along the last coordinate direction.
    pub fn vanishing_order_along_last(
        &self,
        u: &[Complex64],
        max_order: usize,
        radius: f64,
    ) -> Result<usize> {
        let mut contrib = Vec::with_capacity(max_order + 1);
        for ell in 0..=max_order {
            let d = self.last_coordinate_derivative(u, ell, radius)?;
            let fact: f64 = (1..=ell as u64).product::<u64>() as f64;
            contrib.push(d.norm() * radius.powi(ell as i32) / fact);
        }
        let peak = contrib.iter().cloned().fold(0.0, f64::max).max(1e-300);
        for (ell, c) in contrib.iter().enumerate() {
            if *c > 1e-6 * peak {
                return Ok(ell);
            }
        }
        Ok(max_order + 1)
    }
}

fn half_om1i_times(periods: &PeriodData, u: &[Complex64]) -> Vec<Complex64> {
    let g = u.len();
    (0..g)
        .map(|k| {
            0.5 * (0..g)
                .map(|i| periods.om1i[(k, i)] * u[i])
                .sum::<Complex64>()
        })
        .collect()
}

fn unpack_characteristic(cand: usize, g: usize) -> (Vec<f64>, Vec<f64>) {
    let bit = |k: usize| -> f64 {
        if cand >> k & 1 == 1 {
            0.5
        } else {
            0.0
        }
    };
    let d1 = (0..g).map(&bit).collect();
    let d2 = (g..2 * g).map(&bit).collect();
    (d1, d2)
}
