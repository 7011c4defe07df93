//! Period matrices and the Abel map.
//!
//! Homology is generated by "dumbbell" loops: a loop around one branch point,
//! a connector, and a loop around a second branch point, wound so the total
//! monodromy closes up on the triple cover. Pairwise intersection numbers of
//! all candidate loops are reduced to a symplectic basis over the integers;
//! integrating the first- and second-kind differentials over the basis gives
//! the four period matrices. The Abel map integrates the holomorphic
//! differentials from the point at infinity: a truncated series handles the
//! leg near infinity, adaptive quadrature the rest, and a local-frame
//! construction the final approach to a branch point.

use crate::basis::{DifferentialBasis, Kind};
use crate::contour::{circle_pts, continue_path, continue_y, gl_nodes, integrate_polyline};
use crate::curve::{series_inverse, Curve};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

const ZETA_ANGLE: f64 = 2.0 * std::f64::consts::PI / 3.0;

fn zeta_pow(k: u32) -> Complex64 {
    Complex64::from_polar(1.0, ZETA_ANGLE * (k % 3) as f64)
}

/// A closed loop on the cover: encircles branch point `i` once and branch
/// point `j` as many times as monodromy requires, starting on sheet `sheet0`.
#[derive(Debug, Clone)]
pub struct Cycle {
    pub i: usize,
    pub j: usize,
    pub sheet0: usize,
    pub pts: Vec<Complex64>,
}

impl Cycle {
    /// Build the loop for branch pair `(i, j)`. `ordinal` and `ncand` jitter
    /// the radii and starting angles so distinct candidate loops intersect
    /// transversally.
    pub fn new(cur: &Curve, i: usize, j: usize, sheet0: usize, ordinal: usize, ncand: usize) -> Self {
        let bs = &cur.bs;
        let n = bs.len();
        let mindist = |k: usize| -> f64 {
            (0..n)
                .filter(|&m| m != k)
                .map(|m| (bs[k] - bs[m]).norm())
                .fold(f64::INFINITY, f64::min)
        };
        let jig = 1.0 + 0.13 * (ordinal + 1) as f64 / (ncand + 1) as f64;
        let ri = 0.21 * mindist(i) * jig;
        let rj = 0.23 * mindist(j) * jig;
        let rot = 0.11 * (ordinal + 1) as f64 / (ncand + 1) as f64;
        let u = (bs[j] - bs[i]) / (bs[j] - bs[i]).norm();
        let twist = Complex64::from_polar(1.0, rot);
        let si = bs[i] + ri * u * twist;
        let sj = bs[j] - rj * u * twist;
        let mi = cur.mult[i] as usize;
        let mj = cur.mult[j] as usize;
        let turns = if (mi + mj) % 3 == 0 { 1 } else { 2 };
        let th_i = (si - bs[i]).arg();
        let th_j = (sj - bs[j]).arg();
        let mut pts = circle_pts(bs[i], ri, th_i, 24, 1);
        pts.push(sj);
        pts.extend_from_slice(&circle_pts(bs[j], rj, th_j, 24, turns)[1..]);
        pts.push(si);
        Cycle { i, j, sheet0, pts }
    }

    /// Sheet value at the starting vertex.
    pub fn start_y(&self, cur: &Curve) -> Complex64 {
        cur.lifts(self.pts[0])[self.sheet0]
    }

    /// Verify the loop returns to its starting sheet.
    pub fn check_closed(&self, cur: &Curve) -> Result<()> {
        let y0 = self.start_y(cur);
        let y1 = continue_path(cur, &self.pts, y0)?;
        if (y1 - y0).norm() < 1e-8 * (1.0 + y0.norm()) {
            Ok(())
        } else {
            Err(Error::CycleNotClosed(self.i, self.j, self.sheet0))
        }
    }
}

/// Sheet value at every vertex of a cycle, by continuation from the start.
fn cycle_sheet_values(cur: &Curve, cyc: &Cycle) -> Result<Vec<Complex64>> {
    let mut ys = vec![cyc.start_y(cur)];
    for w in cyc.pts.windows(2) {
        let y = continue_y(cur, w[0], *ys.last().unwrap(), w[1])?;
        ys.push(y);
    }
    Ok(ys)
}

/// Strict interior crossing of two segments, if any: returns `(t, u)` with
/// the crossing at `a1 + t (a2 - a1) = b1 + u (b2 - b1)`.
fn seg_intersect(
    a1: Complex64,
    a2: Complex64,
    b1: Complex64,
    b2: Complex64,
) -> Option<(f64, f64)> {
    let d1 = a2 - a1;
    let d2 = b2 - b1;
    let den = d1.re * d2.im - d1.im * d2.re;
    if den.abs() < 1e-14 * d1.norm() * d2.norm() {
        return None;
    }
    let dx = b1 - a1;
    let t = (dx.re * d2.im - dx.im * d2.re) / den;
    let u = (dx.re * d1.im - dx.im * d1.re) / den;
    if 1e-9 < t && t < 1.0 - 1e-9 && 1e-9 < u && u < 1.0 - 1e-9 {
        Some((t, u))
    } else {
        None
    }
}

/// Signed intersection number of two cycles on the cover. A planar crossing
/// of the projections counts only when both loops pass through it on the
/// same sheet; the sign is the orientation of the crossing.
pub fn intersection_number(
    cur: &Curve,
    a: &Cycle,
    ay: &[Complex64],
    b: &Cycle,
    by: &[Complex64],
) -> Result<i64> {
    let mut total = 0i64;
    for ia in 0..a.pts.len() - 1 {
        let (a1, a2) = (a.pts[ia], a.pts[ia + 1]);
        for ib in 0..b.pts.len() - 1 {
            let (b1, b2) = (b.pts[ib], b.pts[ib + 1]);
            if let Some((t, u)) = seg_intersect(a1, a2, b1, b2) {
                let p = a1 + t * (a2 - a1);
                let ya = continue_y(cur, a1, ay[ia], p)?;
                let yb = continue_y(cur, b1, by[ib], b1 + u * (b2 - b1))?;
                let lifts = cur.lifts(p);
                let mut sep = f64::INFINITY;
                for x in 0..3 {
                    for yy in (x + 1)..3 {
                        sep = sep.min((lifts[x] - lifts[yy]).norm());
                    }
                }
                if (ya - yb).norm() < 0.3 * sep {
                    let d1 = a2 - a1;
                    let d2 = b2 - b1;
                    let sgn = d1.re * d2.im - d1.im * d2.re;
                    total += if sgn > 0.0 { 1 } else { -1 };
                }
            }
        }
    }
    Ok(total)
}

/// Reduce an integer antisymmetric matrix to symplectic normal form:
/// returns `(u, a)` with `u * s * u^T = a`, `a` block-diagonal with blocks
/// `[[0, d], [-d, 0]]` followed by zeros.
pub fn symplectic_reduce(s: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let m = s.len();
    let mut a: Vec<Vec<i64>> = s.to_vec();
    let mut u: Vec<Vec<i64>> = (0..m)
        .map(|i| (0..m).map(|j| i64::from(i == j)).collect())
        .collect();

    // congruence operations keeping u * s * u^T = a
    fn swap(a: &mut [Vec<i64>], u: &mut [Vec<i64>], i: usize, j: usize) {
        if i == j {
            return;
        }
        a.swap(i, j);
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        u.swap(i, j);
    }
    fn rowop(a: &mut [Vec<i64>], u: &mut [Vec<i64>], i: usize, j: usize, q: i64) {
        if q == 0 {
            return;
        }
        let m = a.len();
        for k in 0..m {
            a[i][k] += q * a[j][k];
        }
        for k in 0..m {
            a[k][i] += q * a[k][j];
        }
        for k in 0..m {
            u[i][k] += q * u[j][k];
        }
    }

    let mut pos = 0;
    while pos + 1 < m {
        // smallest nonzero entry in the active block
        let mut best: Option<(usize, usize)> = None;
        for i in pos..m {
            for j in pos..m {
                if a[i][j] != 0
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((i, j)) = best else { break };
        swap(&mut a, &mut u, pos, i);
        let j = if j == pos { i } else { j };
        swap(&mut a, &mut u, pos + 1, j);
        if a[pos][pos + 1] < 0 {
            swap(&mut a, &mut u, pos, pos + 1);
        }
        // make every entry of the two pivot rows divisible by the pivot
        'reduce: loop {
            let d = a[pos][pos + 1];
            debug_assert!(d > 0);
            for k in pos + 2..m {
                if a[pos][k].rem_euclid(d) != 0 {
                    let q = a[pos][k].div_euclid(d);
                    rowop(&mut a, &mut u, k, pos + 1, -q);
                    swap(&mut a, &mut u, pos + 1, k);
                    if a[pos][pos + 1] < 0 {
                        swap(&mut a, &mut u, pos, pos + 1);
                    }
                    continue 'reduce;
                }
                if a[pos + 1][k].rem_euclid(d) != 0 {
                    let q = a[pos + 1][k].div_euclid(d);
                    rowop(&mut a, &mut u, k, pos, q);
                    swap(&mut a, &mut u, pos, k);
                    if a[pos][pos + 1] < 0 {
                        swap(&mut a, &mut u, pos, pos + 1);
                    }
                    continue 'reduce;
                }
            }
            break;
        }
        // clear the pivot rows beyond the block
        let d = a[pos][pos + 1];
        for k in pos + 2..m {
            let q = a[pos][k] / d;
            rowop(&mut a, &mut u, k, pos + 1, -q);
            let q2 = a[pos + 1][k] / d;
            rowop(&mut a, &mut u, k, pos, q2);
        }
        pos += 2;
    }

    // verify the congruence
    for i in 0..m {
        for j in 0..m {
            let mut acc = 0i64;
            for p in 0..m {
                for q in 0..m {
                    acc += u[i][p] * s[p][q] * u[j][q];
                }
            }
            if acc != a[i][j] {
                return Err(Error::SymplecticReduction(
                    "congruence verification failed".into(),
                ));
            }
        }
    }
    Ok((u, a))
}

/// The four period matrices of a curve, in the convention that column `k` of
/// `2 om1` is the vector of first-kind integrals over the `k`-th primary
/// loop, and similarly `om2` for the conjugate loops and `et1`, `et2` for
/// the second-kind differentials.
#[derive(Debug, Clone)]
pub struct PeriodData {
    pub genus: usize,
    pub om1: DMatrix<Complex64>,
    pub om2: DMatrix<Complex64>,
    pub et1: DMatrix<Complex64>,
    pub et2: DMatrix<Complex64>,
    /// Inverse of `om1`.
    pub om1i: DMatrix<Complex64>,
    /// Normalized period matrix `om1^{-1} om2`; symmetric with positive
    /// definite imaginary part.
    pub tau: DMatrix<Complex64>,
    /// Largest entry of `|tau - tau^T|` (diagnostic).
    pub tau_asymmetry: f64,
}

impl PeriodData {
    /// Largest entry of `M J M^T - 2 pi i J` where `M` collects all four
    /// doubled period matrices; zero in exact arithmetic.
    pub fn legendre_residual(&self) -> f64 {
        let g = self.genus;
        let n = 2 * g;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = 2.0 * self.om1[(i, j)];
                m[(i, j + g)] = 2.0 * self.om2[(i, j)];
                m[(i + g, j)] = 2.0 * self.et1[(i, j)];
                m[(i + g, j + g)] = 2.0 * self.et2[(i, j)];
            }
        }
        let mut jm = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..g {
            jm[(i, g + i)] = Complex64::new(-1.0, 0.0);
            jm[(g + i, i)] = Complex64::new(1.0, 0.0);
        }
        let lhs = &m * &jm * m.transpose();
        let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((lhs[(i, j)] - two_pi_i * jm[(i, j)]).norm());
            }
        }
        worst
    }

    /// Real coordinates of a vector in the period lattice basis: solves
    /// `2 om1 l' + 2 om2 l'' = v` over the reals.
    pub fn lattice_coords(&self, v: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        let g = self.genus;
        let n = 2 * g;
        let mut m = DMatrix::<f64>::zeros(n, n);
        let mut rhs = nalgebra::DVector::<f64>::zeros(n);
        for i in 0..g {
            for j in 0..g {
                m[(i, j)] = (2.0 * self.om1[(i, j)]).re;
                m[(i, g + j)] = (2.0 * self.om2[(i, j)]).re;
                m[(g + i, j)] = (2.0 * self.om1[(i, j)]).im;
                m[(g + i, g + j)] = (2.0 * self.om2[(i, j)]).im;
            }
            rhs[i] = v[i].re;
            rhs[g + i] = v[i].im;
        }
        let sol = m.lu().solve(&rhs).expect("period lattice basis is real-nondegenerate");
        (sol.as_slice()[..g].to_vec(), sol.as_slice()[g..].to_vec())
    }

    /// Distance of a vector from the period lattice, measured as the largest
    /// deviation of its lattice coordinates from integers.
    pub fn lattice_residual(&self, v: &[Complex64]) -> f64 {
        let (l1, l2) = self.lattice_coords(v);
        l1.iter()
            .chain(l2.iter())
            .map(|x| (x - x.round()).abs())
            .fold(0.0, f64::max)
    }
}

/// Construct the homology basis and integrate the differentials.
pub fn build_periods(cur: &Curve, basis: &DifferentialBasis) -> Result<PeriodData> {
    let g = cur.genus();
    let n = cur.bs.len();
    let mut cands: Vec<Cycle> = Vec::new();
    let npairs = n * (n - 1) / 2;
    let ncand = npairs * 3;
    let mut ordinal = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            for sheet in 0..3 {
                let cyc = Cycle::new(cur, i, j, sheet, ordinal, ncand);
                ordinal += 1;
                cyc.check_closed(cur)?;
                cands.push(cyc);
            }
        }
    }
    let m = cands.len();
    let mut sheet_vals = Vec::with_capacity(m);
    for cyc in &cands {
        sheet_vals.push(cycle_sheet_values(cur, cyc)?);
    }
    let mut s = vec![vec![0i64; m]; m];
    for a in 0..m {
        for b in (a + 1)..m {
            let v = intersection_number(cur, &cands[a], &sheet_vals[a], &cands[b], &sheet_vals[b])?;
            s[a][b] = v;
            s[b][a] = -v;
        }
    }
    let (u, areduced) = symplectic_reduce(&s)?;
    let mut alphas: Vec<&Vec<i64>> = Vec::new();
    let mut betas: Vec<&Vec<i64>> = Vec::new();
    let mut pos = 0;
    while pos + 1 < m && areduced[pos][pos + 1] != 0 {
        let d = areduced[pos][pos + 1];
        if d != 1 {
            return Err(Error::SymplecticReduction(format!(
                "elementary divisor {d} at block {pos}"
            )));
        }
        alphas.push(&u[pos]);
        betas.push(&u[pos + 1]);
        pos += 2;
    }
    if alphas.len() != g {
        return Err(Error::SymplecticReduction(format!(
            "symplectic rank {} but genus {g}",
            alphas.len()
        )));
    }

    // integrate all differentials over each candidate loop once
    let fvec = |x: Complex64, y: Complex64| -> Vec<Complex64> {
        let mut out = Vec::with_capacity(2 * g);
        for i in 0..g {
            out.push(basis.nu1(cur, i, x, y));
        }
        for i in 0..g {
            out.push(basis.nu2(cur, i, x, y));
        }
        out
    };
    let mut per_cand: Vec<Vec<Complex64>> = Vec::with_capacity(m);
    for cyc in &cands {
        let (v, _) = integrate_polyline(cur, &cyc.pts, cyc.start_y(cur), &fvec, 1e-11)?;
        per_cand.push(v);
    }
    let combo = |coefs: &[i64]| -> Vec<Complex64> {
        (0..2 * g)
            .map(|j| {
                (0..m)
                    .map(|k| coefs[k] as f64 * per_cand[k][j])
                    .sum::<Complex64>()
            })
            .collect()
    };
    let mut om1 = DMatrix::<Complex64>::zeros(g, g);
    let mut om2 = om1.clone();
    let mut et1 = om1.clone();
    let mut et2 = om1.clone();
    for idx in 0..g {
        let va = combo(alphas[idx]);
        let vb = combo(betas[idx]);
        for j in 0..g {
            om1[(j, idx)] = va[j] / 2.0;
            om2[(j, idx)] = vb[j] / 2.0;
            et1[(j, idx)] = va[g + j] / 2.0;
            et2[(j, idx)] = vb[g + j] / 2.0;
        }
    }
    let om1i = om1
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Numerical("primary period matrix is singular".into()))?;
    let tau = &om1i * &om2;
    let mut tau_asymmetry = 0.0f64;
    for i in 0..g {
        for j in 0..g {
            tau_asymmetry = tau_asymmetry.max((tau[(i, j)] - tau[(j, i)]).norm());
        }
    }
    if tau_asymmetry > 1e-6 {
        return Err(Error::Numerical(format!(
            "normalized period matrix asymmetry {tau_asymmetry:.2e}"
        )));
    }
    // positive definite imaginary part
    let mut im_sym = DMatrix::<f64>::zeros(g, g);
    for i in 0..g {
        for j in 0..g {
            im_sym[(i, j)] = 0.5 * (tau[(i, j)].im + tau[(j, i)].im);
        }
    }
    let eig = im_sym.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&e| e <= 0.0) {
        return Err(Error::Numerical(
            "imaginary part of the normalized period matrix is not positive definite".into(),
        ));
    }

    Ok(PeriodData {
        genus: g,
        om1,
        om2,
        et1,
        et2,
        om1i,
        tau,
        tau_asymmetry,
    })
}

/// Abel map with base point at infinity: series tail near infinity plus
/// numeric legs, with deck rotations to reach a prescribed lift and a
/// local-frame leg to reach branch points.
pub struct AbelMap<'a> {
    pub cur: &'a Curve,
    pub basis: &'a DifferentialBasis,
    x0: Complex64,
    y_x0: Complex64,
    tails: Vec<Complex64>,
    /// Abel image of the truncated branch divisor: the sum of the map over
    /// all doubled branch points. This is the translation entering the
    /// shifted map `w_s`.
    pub shift: Vec<Complex64>,
}

impl<'a> AbelMap<'a> {
    pub fn new(cur: &'a Curve, basis: &'a DifferentialBasis) -> Result<Self> {
        let g = cur.genus();
        const NTERMS: usize = 72;
        let chart = cur.infinity_chart(NTERMS);
        let maxb = cur.bs.iter().map(|b| b.norm()).fold(0.0, f64::max) + 1.0;
        let t0 = (0.12 / maxb).powf(1.0 / 3.0);
        let mut tails = Vec::with_capacity(g);
        for i in 0..g {
            let mon = basis.phihat[i];
            let (e, ser) = match mon.kind {
                Kind::Y => (cur.sg.shat, &chart.unit_ysecond),
                Kind::YSecond => (cur.sg.rhat, &chart.unit_y),
                _ => unreachable!(),
            };
            let inv_ser = series_inverse(ser);
            // integrand in t: -t^{e - 3a - 4} * sum_k inv_ser[k] t^{3k};
            // antiderivative evaluated at t0
            let lead = e as i64 - 3 * mon.a as i64 - 4;
            let mut tot = Complex64::new(0.0, 0.0);
            for (k, coef) in inv_ser.iter().enumerate() {
                let p = lead + 3 * k as i64;
                if p < 0 {
                    if coef.norm() > 1e-30 {
                        return Err(Error::Numerical(
                            "divergent exponent in the infinity tail".into(),
                        ));
                    }
                    continue;
                }
                tot += -coef * t0.powi(p as i32 + 1) / (p as f64 + 1.0);
            }
            tails.push(tot);
        }
        let x0 = Complex64::new(t0.powi(-3), 0.0);
        let y_x0 = chart.y(Complex64::new(t0, 0.0));
        let mut map = AbelMap {
            cur,
            basis,
            x0,
            y_x0,
            tails,
            shift: vec![Complex64::new(0.0, 0.0); g],
        };
        // the translation vector: image of the doubled branch points
        let mut shift = vec![Complex64::new(0.0, 0.0); g];
        for j in cur.sg.s..cur.bs.len() {
            let v = map.branch_point(cur.bs[j])?;
            for (a, b) in shift.iter_mut().zip(v) {
                *a += b;
            }
        }
        map.shift = shift;
        Ok(map)
    }

    fn nu1_vec(&self) -> impl Fn(Complex64, Complex64) -> Vec<Complex64> + '_ {
        let g = self.cur.genus();
        move |x, y| (0..g).map(|i| self.basis.nu1(self.cur, i, x, y)).collect()
    }

    /// Integral from infinity to whichever lift over `x_t` the standard
    /// bent path reaches; returns the integral vector and that lift.
    pub fn reached(&self, x_t: Complex64, bend: f64) -> Result<(Vec<Complex64>, Complex64)> {
        let mid = 0.5 * (self.x0 + x_t) + Complex64::new(0.0, 0.9) * (self.x0 - x_t).norm() * bend;
        let (v, yend) = integrate_polyline(
            self.cur,
            &[self.x0, mid, x_t],
            self.y_x0,
            &self.nu1_vec(),
            1e-11,
        )?;
        let tot: Vec<Complex64> = self.tails.iter().zip(v).map(|(t, a)| t + a).collect();
        Ok((tot, yend))
    }

    /// Integral from infinity to the specific lift `(x_t, y_t)`: the reached
    /// sheet is corrected by a deck rotation, under which the `i`-th
    /// coordinate scales by the cube root of unity to the power `k e_i`.
    pub fn to_lift(&self, x_t: Complex64, y_t: Complex64) -> Result<Vec<Complex64>> {
        let (v, yend) = self.reached(x_t, 0.15)?;
        for k in 0..3u32 {
            if (y_t - yend * zeta_pow(k)).norm() < 1e-8 * (1.0 + y_t.norm()) {
                return Ok((0..v.len())
                    .map(|i| v[i] * zeta_pow(k * self.basis.zeta_exponent(i)))
                    .collect());
            }
        }
        Err(Error::SheetMismatch(y_t))
    }

    /// Integral from infinity to the branch point over `x = b`. The last leg
    /// runs in the local frame `x = b + c (1 - t)^3`, so the vanishing
    /// offset is never formed by subtracting nearly equal quantities.
    pub fn branch_point(&self, b: Complex64) -> Result<Vec<Complex64>> {
        let cur = self.cur;
        let g = cur.genus();
        let n = cur.bs.len();
        let jn = (0..n)
            .min_by(|&a, &c| {
                (cur.bs[a] - b)
                    .norm()
                    .partial_cmp(&(cur.bs[c] - b).norm())
                    .unwrap()
            })
            .expect("curve has branch points");
        if (cur.bs[jn] - b).norm() > 1e-12 {
            return Err(Error::InvalidParams(format!(
                "{b} is not a branch point of the curve"
            )));
        }
        let m_r = cur.mult[jn] as usize;
        let others: Vec<Complex64> = (0..n).filter(|&k| k != jn).map(|k| cur.bs[k]).collect();
        let mults: Vec<usize> = (0..n)
            .filter(|&k| k != jn)
            .map(|k| cur.mult[k] as usize)
            .collect();
        let mind = others.iter().map(|o| (b - o).norm()).fold(f64::INFINITY, f64::min);
        let centroid = others.iter().sum::<Complex64>() / others.len() as f64;
        let direction = (b - centroid) / (b - centroid).norm();
        let x_near = b + 0.25 * mind * direction;
        let (v1, y_near) = self.reached(x_near, 0.15)?;
        let c = x_near - b;
        let c_r = c.powu(m_r as u32).powf(1.0 / 3.0);

        let raw_root = |t: f64| -> Complex64 {
            let x = b + c * (1.0 - t).powi(3);
            let mut rest = Complex64::new(1.0, 0.0);
            for (o, &mm) in others.iter().zip(&mults) {
                rest *= (x - o).powu(mm as u32);
            }
            rest.powf(1.0 / 3.0)
        };

        // deterministic branch of the cube root along the leg: track the
        // continuity offset on a fine grid
        const M: usize = 512;
        let mut offs = [0u32; M + 1];
        let mut prev = raw_root(0.0);
        for j in 1..=M {
            let rr = raw_root(j as f64 / M as f64);
            let mut bestk = 0u32;
            let mut bestd = f64::INFINITY;
            for k in 0..3u32 {
                let d = (rr * zeta_pow(k) - prev).norm();
                if d < bestd {
                    bestd = d;
                    bestk = k;
                }
            }
            offs[j] = bestk;
            prev = rr * zeta_pow(bestk);
        }

        let leg_point = |t: f64, phase: Complex64| -> (Complex64, Complex64, Complex64) {
            let one_m = 1.0 - t;
            let x = b + c * one_m.powi(3);
            let idx = ((t * M as f64).round() as usize).min(M);
            let root = raw_root(t) * zeta_pow(offs[idx]);
            let y_r = phase * c_r * one_m.powi(m_r as i32) * root;
            let mut rest_rs = Complex64::new(1.0, 0.0);
            for o in &others {
                rest_rs *= x - o;
            }
            let y_s = c * one_m.powi(3) * rest_rs / y_r;
            (x, y_r, y_s)
        };

        // fix the sheet at the junction with the numeric leg
        let (_, yr0, _) = leg_point(0.0, Complex64::new(1.0, 0.0));
        let mut phase = Complex64::new(1.0, 0.0);
        let mut bestd = f64::INFINITY;
        for k in 0..3u32 {
            let d = (yr0 * zeta_pow(k) - y_near).norm();
            if d < bestd {
                bestd = d;
                phase = zeta_pow(k);
            }
        }
        if (yr0 * phase - y_near).norm() > 1e-7 * (1.0 + y_near.norm()) {
            return Err(Error::SheetMismatch(y_near));
        }

        let fvals = |t: f64| -> Vec<Complex64> {
            let (x, y_r, y_s) = leg_point(t, phase);
            (0..g)
                .map(|i| {
                    let mon = self.basis.phihat[i];
                    let num = x.powu(mon.a as u32)
                        * match mon.kind {
                            Kind::Y => y_r,
                            Kind::YSecond => y_s,
                            _ => unreachable!(),
                        };
                    num / (3.0 * y_r * y_s)
                })
                .collect()
        };
        let branch_gl = |ta: f64, tb: f64| -> Vec<Complex64> {
            let (xs, ws) = gl_nodes();
            let mut tot = vec![Complex64::new(0.0, 0.0); g];
            for (&xi, &wi) in xs.iter().zip(ws.iter()) {
                let t = ta + (tb - ta) * 0.5 * (xi + 1.0);
                let vals = fvals(t);
                let wfac = wi * (-3.0 * c * (1.0 - t).powi(2)) * (tb - ta) * 0.5;
                for (acc, v) in tot.iter_mut().zip(vals) {
                    *acc += v * wfac;
                }
            }
            tot
        };
        fn adapt(
            gl: &dyn Fn(f64, f64) -> Vec<Complex64>,
            ta: f64,
            tb: f64,
            tol: f64,
            depth: usize,
        ) -> Vec<Complex64> {
            let whole = gl(ta, tb);
            let tm = 0.5 * (ta + tb);
            let left = gl(ta, tm);
            let right = gl(tm, tb);
            let err = whole
                .iter()
                .zip(left.iter().zip(right.iter()))
                .map(|(w, (l, r))| (w - l - r).norm())
                .fold(0.0, f64::max);
            if err < tol || depth > 12 {
                return left.iter().zip(right.iter()).map(|(l, r)| l + r).collect();
            }
            let lt = (tol * 0.6).max(2e-14);
            let l = adapt(gl, ta, tm, lt, depth + 1);
            let r = adapt(gl, tm, tb, lt, depth + 1);
            l.iter().zip(r.iter()).map(|(a, b)| a + b).collect()
        }
        let tot = adapt(&branch_gl, 0.0, 1.0, 1e-12, 0);
        Ok(v1.iter().zip(tot).map(|(a, b)| a + b).collect())
    }

    /// The shifted Abel sum of a tuple of specific lifts: the translation
    /// vector plus the sum of the map over the points.
    pub fn w_s(&self, pts: &[(Complex64, Complex64)]) -> Result<Vec<Complex64>> {
        let mut tot = self.shift.clone();
        for &(x, y) in pts {
            let v = self.to_lift(x, y)?;
            for (a, b) in tot.iter_mut().zip(v) {
                *a += b;
            }
        }
        Ok(tot)
    }
}

/// Reduce a genus-1 normalized period to the standard fundamental domain
/// (`|Re| <= 1/2`, `|tau| >= 1`).
pub fn sl2_reduce(mut t: Complex64) -> Complex64 {
    for _ in 0..256 {
        t.re -= t.re.round();
        if t.norm() < 1.0 - 1e-12 {
            t = -1.0 / t;
        } else {
            break;
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn genus1() -> (Curve, DifferentialBasis) {
        let cur = Curve::new(0, 2, vec![c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let basis = DifferentialBasis::new(&cur).unwrap();
        (cur, basis)
    }

    fn genus2() -> (Curve, DifferentialBasis) {
        let cur = Curve::new(1, 2, vec![c(0.9, 0.1), c(-0.2, 0.75), c(-1.1, -0.4)]).unwrap();
        let basis = DifferentialBasis::new(&cur).unwrap();
        (cur, basis)
    }

    #[test]
    fn symplectic_reduction_normalizes_a_small_form() {
        // a rank-4 antisymmetric form with nontrivial content
        let s: Vec<Vec<i64>> = vec![
            vec![0, 2, 1, 0, 1],
            vec![-2, 0, 0, 1, 0],
            vec![-1, 0, 0, 3, -1],
            vec![0, -1, -3, 0, 0],
            vec![-1, 0, 1, 0, 0],
        ];
        let (u, a) = symplectic_reduce(&s).unwrap();
        // block structure: pairs then zeros
        let mut pos = 0;
        let mut pairs = 0;
        while pos + 1 < 5 && a[pos][pos + 1] != 0 {
            assert_eq!(a[pos][pos + 1], -a[pos + 1][pos]);
            pairs += 1;
            pos += 2;
        }
        assert!(pairs >= 1);
        for i in pos..5 {
            for j in 0..5 {
                assert_eq!(a[i][j], 0, "tail row {i} not cleared");
            }
        }
        // determinant of u is +-1 (unimodular): check via integer Gaussian
        // elimination on a copy over rationals is overkill; instead verify
        // that u * s * u^T equals a, which symplectic_reduce already did,
        // and that the first block is the standard one after normalization.
        assert!(a[0][1] > 0);
        let _ = u;
    }

    #[test]
    fn genus_one_periods_give_the_equianharmonic_modulus() {
        let (cur, basis) = genus1();
        let pd = build_periods(&cur, &basis).unwrap();
        assert_eq!(pd.genus, 1);
        assert!(pd.legendre_residual() < 1e-8, "{}", pd.legendre_residual());
        let tau = sl2_reduce(pd.tau[(0, 0)]);
        let target = Complex64::from_polar(1.0, std::f64::consts::PI / 3.0);
        // the curve has an order-3 symmetry, so the reduced modulus is the
        // corner of the fundamental domain (up to the boundary identification
        // Re = -1/2 ~ +1/2)
        let alt = target - 1.0;
        let d = (tau - target).norm().min((tau - alt).norm());
        assert!(d < 1e-8, "reduced modulus {tau}");
    }

    #[test]
    fn genus_two_periods_satisfy_the_bilinear_relation() {
        let (cur, basis) = genus2();
        let pd = build_periods(&cur, &basis).unwrap();
        assert_eq!(pd.genus, 2);
        assert!(pd.tau_asymmetry < 1e-8, "{}", pd.tau_asymmetry);
        assert!(pd.legendre_residual() < 1e-7, "{}", pd.legendre_residual());
    }

    #[test]
    fn abel_sum_over_a_fiber_is_a_lattice_vector() {
        let (cur, basis) = genus2();
        let pd = build_periods(&cur, &basis).unwrap();
        let abel = AbelMap::new(&cur, &basis).unwrap();
        let x = c(1.4, 0.65);
        let mut tot = vec![Complex64::new(0.0, 0.0); 2];
        for y in cur.lifts(x) {
            let v = abel.to_lift(x, y).unwrap();
            for (a, b) in tot.iter_mut().zip(v) {
                *a += b;
            }
        }
        // the fiber over any x is linearly equivalent to three times the
        // point at infinity, so the Abel sum lies in the lattice
        let resid = pd.lattice_residual(&tot);
        assert!(resid < 1e-6, "fiber sum lattice residual {resid}");
    }

    #[test]
    fn deck_rotated_target_agrees_with_an_independent_path() {
        let (cur, basis) = genus2();
        let pd = build_periods(&cur, &basis).unwrap();
        let abel = AbelMap::new(&cur, &basis).unwrap();
        // probe for an x where two different bends reach different sheets
        for &xre in &[1.7, -2.1, 0.8] {
            let x = c(xre, if xre > 0.0 { 0.9 } else { 0.3 });
            let (_, ya) = abel.reached(x, 0.15).unwrap();
            let (vb, yb) = abel.reached(x, -0.45).unwrap();
            if (ya - yb).norm() > 1e-6 {
                let pred = abel.to_lift(x, yb).unwrap();
                let diff: Vec<Complex64> =
                    pred.iter().zip(vb.iter()).map(|(p, d)| p - d).collect();
                let resid = pd.lattice_residual(&diff);
                assert!(resid < 1e-6, "deck rotation residual {resid}");
                return;
            }
        }
        panic!("no probe point separated the sheets");
    }

    #[test]
    fn branch_divisor_relation_holds_in_the_jacobian() {
        // twice the doubled branch points plus the simple ones is the
        // divisor of a rational function, so its Abel image is a lattice
        // vector
        let (cur, basis) = genus2();
        let pd = build_periods(&cur, &basis).unwrap();
        let abel = AbelMap::new(&cur, &basis).unwrap();
        let mut tot = vec![Complex64::new(0.0, 0.0); 2];
        for (j, &b) in cur.bs.iter().enumerate() {
            let v = abel.branch_point(b).unwrap();
            let mult = cur.mult[j] as f64;
            for (a, w) in tot.iter_mut().zip(v) {
                *a += mult * w;
            }
        }
        let resid = pd.lattice_residual(&tot);
        assert!(resid < 1e-6, "branch relation residual {resid}");
    }

    #[test]
    fn genus_one_branch_abel_images_sum_to_a_lattice_vector() {
        let (cur, basis) = genus1();
        let pd = build_periods(&cur, &basis).unwrap();
        let abel = AbelMap::new(&cur, &basis).unwrap();
        assert!(abel.shift[0].norm() < 1e-12, "no doubled points here");
        let va = abel.branch_point(cur.bs[0]).unwrap();
        let vb = abel.branch_point(cur.bs[1]).unwrap();
        let tot = vec![va[0] + vb[0]];
        let resid = pd.lattice_residual(&tot);
        assert!(resid < 1e-6, "residual {resid}");
    }

    #[test]
    fn fundamental_domain_reduction_is_idempotent_and_equivalent() {
        let t = c(0.37, 1.9);
        let r = sl2_reduce(t);
        assert!((sl2_reduce(r) - r).norm() < 1e-12);
        assert!(r.im > 0.0);
        assert!(r.re.abs() <= 0.5 + 1e-12);
        assert!(r.norm() >= 1.0 - 1e-12);
    }
}
