//! Combinatorics of the numerical semigroup `<3, 2r+s, r+2s>`.
//!
//! For integers `0 <= r < s` with `s - r` not divisible by 3, the three
//! generators `3`, `rhat = 2r+s`, `shat = r+2s` generate a numerical
//! semigroup of genus `g = r+s-1`. This module exposes its members and gaps,
//! the associated Young diagram and weights, the Frobenius characteristics of
//! the truncated diagrams (which drive the vanishing-stratum index sets), and
//! the Schur polynomial attached to the gap sequence.

use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;

/// The numerical semigroup `<3, 2r+s, r+2s>` together with cached
/// combinatorial data derived from its gap sequence.
#[derive(Debug, Clone)]
pub struct Semigroup {
    /// Number of branch points entering the squared factor of the curve.
    pub r: usize,
    /// Number of branch points entering the simple factor of the curve.
    pub s: usize,
    /// Generator `2r + s`.
    pub rhat: usize,
    /// Generator `r + 2s`.
    pub shat: usize,
    /// Genus `r + s - 1`, which equals the number of gaps.
    pub genus: usize,
    /// Gaps in increasing order.
    pub gaps: Vec<usize>,
    /// Young diagram (partition) `Lambda`, weakly decreasing.
    pub lambda: Vec<usize>,
}

impl Semigroup {
    /// Validate `(r, s)` and build the semigroup data.
    pub fn new(r: usize, s: usize) -> Result<Self> {
        if s <= r {
            return Err(Error::InvalidParams(format!(
                "require s > r >= 0, got r={r}, s={s}"
            )));
        }
        if (s + 2 * r) % 3 == 0 {
            // s - r = s + 2r (mod 3)
            return Err(Error::InvalidParams(format!(
                "require s - r not divisible by 3, got r={r}, s={s}"
            )));
        }
        if r + s < 2 {
            return Err(Error::InvalidParams(
                "require r + s >= 2 (positive genus)".into(),
            ));
        }
        let rhat = 2 * r + s;
        let shat = r + 2 * s;
        let genus = r + s - 1;
        let mut gaps: Vec<usize> = (1..=3 * genus)
            .filter(|&n| !member_of(n, rhat, shat))
            .collect();
        gaps.sort_unstable();
        debug_assert_eq!(gaps.len(), genus, "gap count must equal genus");
        // Partition: lambda_i = w_{g+1-i} - (g-i) with gaps w ascending.
        let lambda: Vec<usize> = (0..genus)
            .map(|i| gaps[genus - 1 - i] - (genus - 1 - i))
            .collect();
        Ok(Semigroup {
            r,
            s,
            rhat,
            shat,
            genus,
            gaps,
            lambda,
        })
    }

    /// Membership test.
    pub fn contains(&self, n: usize) -> bool {
        member_of(n, self.rhat, self.shat)
    }

    /// The `i`-th member of the semigroup, 0-indexed (so `nth(0) == 0`).
    pub fn nth(&self, i: usize) -> usize {
        let mut count = 0;
        let mut n = 0;
        loop {
            if self.contains(n) {
                if count == i {
                    return n;
                }
                count += 1;
            }
            n += 1;
        }
    }

    /// The `i`-th element (0-indexed) of the weight sequence of the extended
    /// monomial stream: the sorted union of `3a + rhat`, `3a + shat`,
    /// `3a + rhat + shat` over `a >= 0`.
    pub fn nth_hat(&self, i: usize) -> usize {
        let mut vals: Vec<usize> = (0..=i + 1)
            .flat_map(|a| {
                [
                    3 * a + self.rhat,
                    3 * a + self.shat,
                    3 * a + self.rhat + self.shat,
                ]
            })
            .collect();
        vals.sort_unstable();
        vals[i]
    }

    /// Weights of the Jacobian variables: `wt(u_i) = lambda_i + (g - i)` for
    /// `i = 1..g` (1-based), i.e. the gap sequence read in decreasing order.
    pub fn u_weights(&self) -> Vec<usize> {
        (0..self.genus)
            .map(|i| self.lambda[i] + (self.genus - 1 - i))
            .collect()
    }

    /// Total number of boxes of the Young diagram.
    pub fn lambda_weight(&self) -> usize {
        self.lambda.iter().sum()
    }

    /// Data of the truncated diagram `Lambda^{[k]} = (Lambda_{k+1}, ..)`
    /// for each stratum level `k = 0..g-1` (and the trivial `k = g`).
    pub fn stratum(&self, k: usize) -> Result<StratumData> {
        let g = self.genus;
        if k > g {
            return Err(Error::InvalidParams(format!("stratum level {k} > genus {g}")));
        }
        let trunc: Vec<usize> = self.lambda[k..].to_vec();
        let chars = frobenius_chars(&trunc);
        let n_k = chars.len();
        let n_cap: usize = chars.iter().map(|&(a, b)| a + b + 1).sum();
        // Index set: for each diagonal box find l in {k+1..g} (1-based) with
        // lambda_l + g - l = a_i + b_i + 1; the first one is l = k+1.
        let mut sharp = Vec::with_capacity(n_k);
        for (i, &(a, b)) in chars.iter().enumerate() {
            let target = a + b + 1;
            let mut found = None;
            for l in (k + 1)..=g {
                if self.lambda[l - 1] + g - l == target && !sharp.contains(&l) {
                    found = Some(l);
                    break;
                }
            }
            let l = found.ok_or_else(|| {
                Error::InvalidParams(format!(
                    "no index matches diagonal box {i} of truncated diagram at level {k}"
                ))
            })?;
            if i == 0 && l != k + 1 {
                return Err(Error::InvalidParams(format!(
                    "first matched index {l} is not k+1 = {}",
                    k + 1
                )));
            }
            sharp.push(l);
        }
        Ok(StratumData {
            k,
            n_k,
            n_cap,
            chars,
            sharp,
        })
    }

    /// The Schur polynomial attached to the diagram, in variables
    /// `u_1, ..., u_g` with the substitution `T_{wt(u_i)} = u_i` and all
    /// other power-sum slots set to zero.
    pub fn schur_polynomial(&self) -> SchurPoly {
        schur_from_lambda(&self.lambda, &self.u_weights())
    }
}

fn member_of(n: usize, rhat: usize, shat: usize) -> bool {
    // Classes mod 3: 0 is always representable by 3a; the class of rhat
    // first appears at rhat; the class of shat first appears at shat.
    match n % 3 {
        0 => true,
        m if m == rhat % 3 => n >= rhat,
        _ => n >= shat,
    }
}

/// Whether a generator sequence is telescopic: with `d_i = gcd(a_1..a_i)`,
/// each `a_i / d_i` must lie in the semigroup generated by
/// `a_1/d_{i-1}, ..., a_{i-1}/d_{i-1}`.
pub fn is_telescopic(gens: &[usize]) -> bool {
    if gens.is_empty() || gens[0] == 0 {
        return false;
    }
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    let mut d_prev = gens[0];
    for i in 1..gens.len() {
        let d_i = gcd(d_prev, gens[i]);
        let scaled: Vec<usize> = gens[..i].iter().map(|&a| a / d_prev).collect();
        if !generated_contains(&scaled, gens[i] / d_i) {
            return false;
        }
        d_prev = d_i;
    }
    true
}

/// Membership of `n` in the numerical semigroup generated by `gens`
/// (gcd of `gens` need not be 1; only values up to `n` matter).
fn generated_contains(gens: &[usize], n: usize) -> bool {
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    for &a in gens {
        if a == 0 || a > n {
            continue;
        }
        for v in a..=n {
            if reachable[v - a] {
                reachable[v] = true;
            }
        }
    }
    reachable[n]
}

/// Frobenius characteristics and index sets of one truncated diagram.
#[derive(Debug, Clone)]
pub struct StratumData {
    /// Stratum level (number of leading rows removed from the diagram).
    pub k: usize,
    /// Rank: length of the main diagonal of the truncated diagram. All sigma
    /// partials of order below `n_k` vanish on the corresponding stratum.
    pub n_k: usize,
    /// Sum of hook lengths of the diagonal boxes; the vanishing order of
    /// sigma along the last variable direction on the stratum.
    pub n_cap: usize,
    /// Frobenius characteristics `(a_i, b_i)`: boxes below / to the right of
    /// the `i`-th diagonal box.
    pub chars: Vec<(usize, usize)>,
    /// 1-based derivative index set attached to the stratum (the first entry
    /// is always `k + 1`).
    pub sharp: Vec<usize>,
}

impl StratumData {
    /// The variant index set with the first entry replaced by `i`
    /// (valid for `1 <= i <= k+1`).
    pub fn sharp_variant(&self, i: usize) -> Vec<usize> {
        let mut v = self.sharp.clone();
        if !v.is_empty() {
            v[0] = i;
        }
        v
    }
}

/// Frobenius characteristics of a partition (weakly decreasing, possibly
/// empty): for each diagonal box `(i,i)` the pair `(a_i, b_i)` of box counts
/// strictly below and strictly to the right.
pub fn frobenius_chars(partition: &[usize]) -> Vec<(usize, usize)> {
    let mut chars = Vec::new();
    let conj = conjugate_partition(partition);
    let mut i = 0;
    while i < partition.len() && partition[i] > i {
        let b = partition[i] - i - 1;
        let a = conj[i] - i - 1;
        chars.push((a, b));
        i += 1;
    }
    chars
}

fn conjugate_partition(partition: &[usize]) -> Vec<usize> {
    let m = partition.first().copied().unwrap_or(0);
    (1..=m)
        .map(|c| partition.iter().filter(|&&p| p >= c).count())
        .collect()
}

/// A polynomial in the Jacobian variables `u_1..u_g`, sparse over monomials.
/// Keys are exponent vectors of length `g`; values are real coefficients.
#[derive(Debug, Clone)]
pub struct SchurPoly {
    /// Monomial map: exponent vector -> coefficient.
    pub monomials: BTreeMap<Vec<u32>, f64>,
    /// Number of variables.
    pub nvars: usize,
    /// Weight of each variable (used by the weighted-scaling checks).
    pub weights: Vec<usize>,
    /// Total weighted degree (number of diagram boxes).
    pub total_weight: usize,
}

impl SchurPoly {
    /// Evaluate at a complex point.
    pub fn eval(&self, u: &[Complex64]) -> Complex64 {
        let mut tot = Complex64::new(0.0, 0.0);
        for (exps, &c) in &self.monomials {
            let mut term = Complex64::new(c, 0.0);
            for (i, &e) in exps.iter().enumerate() {
                term *= u[i].powu(e);
            }
            tot += term;
        }
        tot
    }

    /// The monomial of smallest total degree (ties broken by the
    /// lexicographically smallest exponent vector), returned as
    /// `(exponents, coefficient)`. Used to calibrate the sigma-function
    /// normalization from a single mixed partial derivative.
    pub fn min_degree_monomial(&self) -> (Vec<u32>, f64) {
        let mut best: Option<(&Vec<u32>, f64)> = None;
        for (exps, &c) in &self.monomials {
            let deg: u32 = exps.iter().sum();
            match best {
                None => best = Some((exps, c)),
                Some((be, _)) => {
                    let bdeg: u32 = be.iter().sum();
                    if deg < bdeg {
                        best = Some((exps, c));
                    }
                }
            }
        }
        let (e, c) = best.expect("Schur polynomial is never empty");
        (e.clone(), c)
    }
}

/// Build the Schur polynomial of a partition in the variables `u_i`
/// carrying the given weights: complete homogeneous pieces are generated by
/// the Newton recursion `m h_m = sum_k p_k h_{m-k}` from power sums
/// `p_k = k u_i` when `k` equals the weight of `u_i` (zero otherwise), and
/// the polynomial is the Jacobi-Trudi determinant `det(h_{lambda_i - i + j})`.
pub fn schur_from_lambda(lambda: &[usize], weights: &[usize]) -> SchurPoly {
    let nvars = weights.len();
    type P = BTreeMap<Vec<u32>, f64>;
    let zero = P::new();
    let mut one = P::new();
    one.insert(vec![0u32; nvars], 1.0);

    let add_into = |acc: &mut P, other: &P, scale: f64| {
        for (e, &c) in other {
            let entry = acc.entry(e.clone()).or_insert(0.0);
            *entry += c * scale;
            if entry.abs() < 1e-14 {
                acc.remove(e);
            }
        }
    };
    let mul = |a: &P, b: &P| -> P {
        let mut out = P::new();
        for (ea, &ca) in a {
            for (eb, &cb) in b {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                *out.entry(e).or_insert(0.0) += ca * cb;
            }
        }
        out.retain(|_, c| c.abs() > 1e-14);
        out
    };

    // p_k as monomial maps
    let max_h = lambda.first().copied().unwrap_or(0) + lambda.len();
    let mut p: Vec<P> = vec![zero.clone(); max_h + 1];
    for (i, &w) in weights.iter().enumerate() {
        if w <= max_h {
            let mut e = vec![0u32; nvars];
            e[i] = 1;
            let mut m = P::new();
            m.insert(e, w as f64);
            p[w] = m;
        }
    }
    // h_m by Newton's identity
    let mut h: Vec<P> = Vec::with_capacity(max_h + 1);
    h.push(one.clone());
    for m in 1..=max_h {
        let mut acc = P::new();
        for k in 1..=m {
            if p[k].is_empty() {
                continue;
            }
            let prod = mul(&p[k], &h[m - k]);
            add_into(&mut acc, &prod, 1.0);
        }
        let mut hm = P::new();
        add_into(&mut hm, &acc, 1.0 / m as f64);
        h.push(hm);
    }
    // Jacobi-Trudi determinant via permutation expansion (partitions here
    // are short, so n! stays tiny).
    let n = lambda.len();
    let entry = |i: usize, j: usize| -> &P {
        // h_{lambda_i - i + j}, 1-based i, j
        let idx = lambda[i - 1] as isize - i as isize + j as isize;
        if idx < 0 || idx as usize > max_h {
            &zero
        } else {
            &h[idx as usize]
        }
    };
    let mut result = P::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    permute_det(&mut perm, 0, 1.0, &mut |perm, sign| {
        let mut prod = one.clone();
        for i in 1..=n {
            prod = mul(&prod, entry(i, perm[i - 1]));
            if prod.is_empty() {
                break;
            }
        }
        add_into(&mut result, &prod, sign);
    });

    let total_weight = lambda.iter().sum();
    SchurPoly {
        monomials: result,
        nvars,
        weights: weights.to_vec(),
        total_weight,
    }
}

/// Enumerate permutations with signs (Heap's algorithm, recursive flavor).
fn permute_det(perm: &mut Vec<usize>, k: usize, sign: f64, f: &mut impl FnMut(&[usize], f64)) {
    let n = perm.len();
    if k == n {
        f(perm, sign);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        let s = if i == k { sign } else { -sign };
        permute_det(perm, k + 1, s, f);
        perm.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Semigroup::new(2, 2).is_err()); // s must exceed r
        assert!(Semigroup::new(1, 4).is_err()); // s - r divisible by 3
        assert!(Semigroup::new(0, 1).is_err()); // genus zero
        assert!(Semigroup::new(1, 2).is_ok());
    }

    #[test]
    fn genus_two_case_has_expected_gaps_and_diagram() {
        let sg = Semigroup::new(1, 2).unwrap();
        assert_eq!(sg.rhat, 4);
        assert_eq!(sg.shat, 5);
        assert_eq!(sg.genus, 2);
        assert_eq!(sg.gaps, vec![1, 2]);
        assert_eq!(sg.lambda, vec![1, 1]);
        assert_eq!(sg.u_weights(), vec![2, 1]);
        // members: 0, 3, 4, 5, 6, ...
        assert_eq!(sg.nth(0), 0);
        assert_eq!(sg.nth(1), 3);
        assert_eq!(sg.nth(2), 4);
        assert_eq!(sg.nth(3), 5);
        assert_eq!(sg.nth(4), 6);
    }

    #[test]
    fn genus_four_case_has_expected_gaps_and_diagram() {
        let sg = Semigroup::new(2, 3).unwrap();
        assert_eq!((sg.rhat, sg.shat), (7, 8));
        assert_eq!(sg.genus, 4);
        assert_eq!(sg.gaps, vec![1, 2, 4, 5]);
        assert_eq!(sg.lambda, vec![2, 2, 1, 1]);
        assert_eq!(sg.u_weights(), vec![5, 4, 2, 1]);
    }

    #[test]
    fn genus_one_case_reduces_to_two_three() {
        let sg = Semigroup::new(0, 2).unwrap();
        assert_eq!((sg.rhat, sg.shat), (2, 4));
        assert_eq!(sg.genus, 1);
        assert_eq!(sg.gaps, vec![1]);
        assert_eq!(sg.lambda, vec![1]);
        // <3, 2, 4> = <2, 3>: contains every integer >= 2
        assert!(sg.contains(2));
        assert!(sg.contains(3));
        assert!(!sg.contains(1));
    }

    #[test]
    fn extended_weight_sequence_for_genus_two() {
        let sg = Semigroup::new(1, 2).unwrap();
        // streams: {4,7,10,...}, {5,8,11,...}, {9,12,...} -> 4,5,7,8,9,10,...
        let got: Vec<usize> = (0..6).map(|i| sg.nth_hat(i)).collect();
        assert_eq!(got, vec![4, 5, 7, 8, 9, 10]);
        // first entry is rhat; the g-th entry (index g-1) is 3g - 1
        assert_eq!(sg.nth_hat(0), sg.rhat);
        assert_eq!(sg.nth_hat(sg.genus - 1), 3 * sg.genus - 1);
        // beyond the gap range: nth_hat(i) = g + r + s + i
        for i in sg.genus..8 {
            assert_eq!(sg.nth_hat(i), sg.genus + sg.r + sg.s + i);
        }
    }

    #[test]
    fn u_weights_match_pole_order_complement() {
        // wt(u_i) = rhat + shat - 3 - nth_hat(i-1)
        for (r, s) in [(1usize, 2usize), (2, 3), (0, 2), (1, 3), (3, 4)] {
            let sg = Semigroup::new(r, s).unwrap();
            let w = sg.u_weights();
            for i in 0..sg.genus {
                assert_eq!(w[i], sg.rhat + sg.shat - 3 - sg.nth_hat(i));
            }
        }
    }

    #[test]
    fn telescopic_recognizes_known_cases() {
        // <3, rhat, shat> is telescopic exactly when r = 0.
        let sg = Semigroup::new(0, 2).unwrap();
        assert!(is_telescopic(&[3, sg.rhat, sg.shat]));
        let sg = Semigroup::new(1, 2).unwrap();
        assert!(!is_telescopic(&[3, sg.rhat, sg.shat]));
        let sg = Semigroup::new(2, 3).unwrap();
        assert!(!is_telescopic(&[3, sg.rhat, sg.shat]));
        // classical telescopic example and a known non-telescopic sequence
        assert!(is_telescopic(&[4, 6, 13]));
        assert!(!is_telescopic(&[6, 13, 14, 15, 16]));
    }

    #[test]
    fn stratum_data_genus_two() {
        let sg = Semigroup::new(1, 2).unwrap();
        let s0 = sg.stratum(0).unwrap();
        // full diagram (1,1): one diagonal box, a_1 = 1, b_1 = 0, N_0 = 2
        assert_eq!(s0.n_k, 1);
        assert_eq!(s0.chars, vec![(1, 0)]);
        assert_eq!(s0.n_cap, 2);
        assert_eq!(s0.sharp, vec![1]);
        let s1 = sg.stratum(1).unwrap();
        // truncated diagram (1): N_1 = 1, index set {2}
        assert_eq!(s1.n_k, 1);
        assert_eq!(s1.n_cap, 1);
        assert_eq!(s1.sharp, vec![2]);
        assert_eq!(s1.sharp_variant(1), vec![1]);
    }

    #[test]
    fn stratum_data_genus_four() {
        let sg = Semigroup::new(2, 3).unwrap();
        let s0 = sg.stratum(0).unwrap();
        // diagram (2,2,1,1): two diagonal boxes; chars (3,1) and (0,0)
        assert_eq!(s0.n_k, 2);
        assert_eq!(s0.chars, vec![(3, 1), (0, 0)]);
        assert_eq!(s0.n_cap, 6);
        assert_eq!(s0.sharp, vec![1, 4]);
        // every deeper stratum here has rank 1
        for k in 1..4 {
            let st = sg.stratum(k).unwrap();
            assert_eq!(st.n_k, 1, "rank at level {k}");
            assert_eq!(st.sharp, vec![k + 1]);
        }
        // vanishing orders along the last variable: N_1 = 4, N_2 = 2, N_3 = 1
        assert_eq!(sg.stratum(1).unwrap().n_cap, 4);
        assert_eq!(sg.stratum(2).unwrap().n_cap, 2);
        assert_eq!(sg.stratum(3).unwrap().n_cap, 1);
    }

    #[test]
    fn schur_polynomial_genus_one_and_two() {
        let sg = Semigroup::new(0, 2).unwrap();
        let sp = sg.schur_polynomial();
        // S = u_1
        assert_eq!(sp.monomials.len(), 1);
        assert!((sp.monomials[&vec![1u32]] - 1.0).abs() < 1e-12);

        let sg = Semigroup::new(1, 2).unwrap();
        let sp = sg.schur_polynomial();
        // S = u_2^2/2 - u_1
        assert_eq!(sp.monomials.len(), 2);
        assert!((sp.monomials[&vec![0u32, 2]] - 0.5).abs() < 1e-12);
        assert!((sp.monomials[&vec![1u32, 0]] + 1.0).abs() < 1e-12);
        let (exps, coeff) = sp.min_degree_monomial();
        assert_eq!(exps, vec![1, 0]);
        assert!((coeff + 1.0).abs() < 1e-12);
    }

    /// Independent oracle: the ratio-of-alternants definition
    /// `s_lambda(t) = det(t_i^{lambda_j + n - j}) / det(t_i^{j-1})`,
    /// evaluated at random points `t`, must agree with our polynomial after
    /// substituting the power sums `T_k = (1/k) sum_i t_i^k` for the
    /// variables of matching weight.
    #[test]
    fn schur_polynomial_matches_ratio_of_alternants() {
        for (r, s) in [(1usize, 2usize), (2, 3), (1, 3)] {
            let sg = Semigroup::new(r, s).unwrap();
            let sp = sg.schur_polynomial();
            let g = sg.genus;
            let lambda = &sg.lambda;
            // deterministic pseudo-random sample points
            let ts: Vec<Complex64> = (0..g)
                .map(|i| {
                    c(
                        0.4 + 0.31 * (i as f64 + 1.0).sin(),
                        0.2 - 0.23 * (2.0 * i as f64 + 0.7).cos(),
                    )
                })
                .collect();
            // numerator and denominator determinants
            let det = |m: &Vec<Vec<Complex64>>| -> Complex64 {
                // small LU-free Laplace expansion
                fn go(m: &[Vec<Complex64>], cols: &mut Vec<usize>) -> Complex64 {
                    let row = m.len() - cols.len();
                    if cols.is_empty() {
                        return Complex64::new(1.0, 0.0);
                    }
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (pos, &col) in cols.clone().iter().enumerate() {
                        let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
                        let mut rest: Vec<usize> =
                            cols.iter().copied().filter(|&x| x != col).collect();
                        acc += m[row][col] * sign * go(m, &mut rest);
                    }
                    acc
                }
                let mut cols: Vec<usize> = (0..m.len()).collect();
                go(m, &mut cols)
            };
            let num: Vec<Vec<Complex64>> = ts
                .iter()
                .map(|&t| {
                    (1..=g)
                        .map(|j| t.powu((lambda[j - 1] + g - j) as u32))
                        .collect()
                })
                .collect();
            let den: Vec<Vec<Complex64>> = ts
                .iter()
                .map(|&t| (1..=g).map(|j| t.powu((g - j) as u32)).collect())
                .collect();
            let oracle = det(&num) / det(&den);
            // substitute power sums
            let u: Vec<Complex64> = sp
                .weights
                .iter()
                .map(|&w| {
                    ts.iter().map(|&t| t.powu(w as u32)).sum::<Complex64>() / w as f64
                })
                .collect();
            let ours = sp.eval(&u);
            assert!(
                (ours - oracle).norm() < 1e-9 * (1.0 + oracle.norm()),
                "(r,s)=({r},{s}): {ours} vs {oracle}"
            );
        }
    }

    #[test]
    fn schur_polynomial_is_weighted_homogeneous() {
        let sg = Semigroup::new(2, 3).unwrap();
        let sp = sg.schur_polynomial();
        let u: Vec<Complex64> = vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.7, -0.3), c(0.1, 0.9)];
        let eps = 0.73;
        let scaled: Vec<Complex64> = u
            .iter()
            .zip(&sp.weights)
            .map(|(&ui, &w)| ui * Complex64::new(eps, 0.0).powu(w as u32))
            .collect();
        let lhs = sp.eval(&scaled);
        let rhs = sp.eval(&u) * Complex64::new(eps, 0.0).powu(sp.total_weight as u32);
        assert!((lhs - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn genus_four_min_degree_monomial_is_quadratic() {
        let sg = Semigroup::new(2, 3).unwrap();
        let sp = sg.schur_polynomial();
        let (exps, coeff) = sp.min_degree_monomial();
        let deg: u32 = exps.iter().sum();
        assert_eq!(deg, 2, "expected a quadratic monomial, got {exps:?}");
        // its weighted degree must be the diagram weight
        let wdeg: usize = exps
            .iter()
            .zip(&sp.weights)
            .map(|(&e, &w)| e as usize * w)
            .sum();
        assert_eq!(wdeg, sp.total_weight);
        assert!(coeff.abs() > 1e-12);
    }
}
