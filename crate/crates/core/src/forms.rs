//! Component arrays for tensors at the origin of a homogeneous space,
//! expressed in an orthonormal frame: alternating forms and totally
//! symmetric 3-tensors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// A tensor on the frame that skew endomorphisms act on by derivations.
pub trait FrameTensor: Clone {
    /// Dimension of the underlying vector space.
    fn dim(&self) -> usize;

    /// Derivation action `(A t)(X_1, ..) = -sum_s t(.., A X_s, ..)`.
    fn act(&self, a: &DMatrix<f64>) -> Self;

    fn max_abs(&self) -> f64;
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// All strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Lexicographic rank of a strictly increasing index list.
fn combination_rank(n: usize, combo: &[usize]) -> usize {
    let k = combo.len();
    let mut rank = 0;
    let mut prev: usize = 0;
    for (i, &c) in combo.iter().enumerate() {
        let start = if i == 0 { 0 } else { prev + 1 };
        for j in start..c {
            rank += binomial(n - 1 - j, k - 1 - i);
        }
        prev = c;
    }
    rank
}

/// Sort `idx` and return the permutation sign, or `None` on a repeated index.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, f64)> {
    let mut v = idx.to_vec();
    let mut sign = 1.0;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            } else if v[j] == v[j + 1] {
                return None;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, sign))
}

/// Alternating `k`-form on `R^n`; `coeffs[r]` is `omega(e_I)` for the `r`-th
/// increasing multi-index `I`, so `e_1 ^ e_2` has component 1 on `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AltForm {
    n: usize,
    k: usize,
    coeffs: Vec<f64>,
}

impl AltForm {
    pub fn zero(n: usize, k: usize) -> Self {
        assert!(k <= n, "form degree exceeds dimension");
        AltForm {
            n,
            k,
            coeffs: vec![0.0; binomial(n, k)],
        }
    }

    /// The constant 0-form.
    pub fn constant(n: usize, value: f64) -> Self {
        let mut f = Self::zero(n, 0);
        f.coeffs[0] = value;
        f
    }

    /// `e_{i_1} ^ ... ^ e_{i_k}` (zero-based, any order).
    pub fn basis(n: usize, idx: &[usize]) -> Self {
        let mut f = Self::zero(n, idx.len());
        f.add_component(idx, 1.0);
        f
    }

    pub fn from_components(n: usize, k: usize, comps: &[(&[usize], f64)]) -> Self {
        let mut f = Self::zero(n, k);
        for (idx, v) in comps {
            f.add_component(idx, *v);
        }
        f
    }

    /// Build from a coefficient vector in lexicographic multi-index order.
    pub fn from_coeffs(n: usize, k: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), binomial(n, k));
        AltForm { n, k, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `omega(e_{i_1}, .., e_{i_k})` for arbitrary indices.
    pub fn component(&self, idx: &[usize]) -> f64 {
        assert_eq!(idx.len(), self.k);
        match sort_with_sign(idx) {
            Some((sorted, sign)) => sign * self.coeffs[combination_rank(self.n, &sorted)],
            None => 0.0,
        }
    }

    pub fn add_component(&mut self, idx: &[usize], value: f64) {
        assert_eq!(idx.len(), self.k);
        if let Some((sorted, sign)) = sort_with_sign(idx) {
            let r = combination_rank(self.n, &sorted);
            self.coeffs[r] += sign * value;
        }
    }

    /// Non-negligible components as (increasing indices, value).
    pub fn terms(&self, tol: f64) -> Vec<(Vec<usize>, f64)> {
        combinations(self.n, self.k)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, v)| v.abs() > tol)
            .map(|(c, v)| (c, *v))
            .collect()
    }

    /// Evaluate on `k` vectors.
    pub fn evaluate(&self, vectors: &[DVector<f64>]) -> f64 {
        assert_eq!(vectors.len(), self.k);
        let mut total = 0.0;
        for (combo, &c) in combinations(self.n, self.k).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let minor = DMatrix::from_fn(self.k, self.k, |r, s| vectors[s][combo[r]]);
            total += c * minor.determinant();
        }
        total
    }

    pub fn wedge(&self, other: &AltForm) -> AltForm {
        assert_eq!(self.n, other.n);
        let mut out = AltForm::zero(self.n, self.k + other.k);
        let left = combinations(self.n, self.k);
        let right = combinations(other.n, other.k);
        for (a, &ca) in left.iter().zip(&self.coeffs) {
            if ca == 0.0 {
                continue;
            }
            for (b, &cb) in right.iter().zip(&other.coeffs) {
                if cb == 0.0 {
                    continue;
                }
                let joined: Vec<usize> = a.iter().chain(b.iter()).copied().collect();
                out.add_component(&joined, ca * cb);
            }
        }
        out
    }

    /// Interior product `v _| omega`.
    pub fn interior(&self, v: &DVector<f64>) -> AltForm {
        assert!(self.k > 0, "interior product of a 0-form");
        let mut out = AltForm::zero(self.n, self.k - 1);
        for combo in combinations(self.n, self.k - 1) {
            let mut idx = Vec::with_capacity(self.k);
            idx.push(0);
            idx.extend_from_slice(&combo);
            let mut acc = 0.0;
            for (i, &vi) in v.iter().enumerate() {
                if vi != 0.0 {
                    idx[0] = i;
                    acc += vi * self.component(&idx);
                }
            }
            out.add_component(&combo, acc);
        }
        out
    }

    /// Hodge star for the frame metric and orientation `e_1 ^ .. ^ e_n`.
    pub fn hodge(&self) -> AltForm {
        let mut out = AltForm::zero(self.n, self.n - self.k);
        for (combo, &c) in combinations(self.n, self.k).iter().zip(&self.coeffs) {
            if c == 0.0 {
                continue;
            }
            let complement: Vec<usize> = (0..self.n).filter(|i| !combo.contains(i)).collect();
            let full: Vec<usize> = combo.iter().chain(complement.iter()).copied().collect();
            let (_, sign) = sort_with_sign(&full).expect("disjoint index sets");
            out.add_component(&complement, sign * c);
        }
        out
    }

    /// The skew matrix corresponding to a 2-form under `e_i ^ e_j <-> E_ij`.
    pub fn to_skew_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.k, 2, "only 2-forms correspond to skew matrices");
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let c = self.component(&[i, j]);
                m[(j, i)] = c;
                m[(i, j)] = -c;
            }
        }
        m
    }

    pub fn from_skew_matrix(m: &DMatrix<f64>) -> AltForm {
        let n = m.nrows();
        let mut f = AltForm::zero(n, 2);
        for i in 0..n {
            for j in (i + 1)..n {
                f.add_component(&[i, j], 0.5 * (m[(j, i)] - m[(i, j)]));
            }
        }
        f
    }

    pub fn as_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coeffs)
    }

    /// Matrix of the derivation action of `a` on `Lambda^k` in the
    /// lexicographic basis.
    pub fn action_matrix(n: usize, k: usize, a: &DMatrix<f64>) -> DMatrix<f64> {
        let combos = combinations(n, k);
        let mut m = DMatrix::zeros(combos.len(), combos.len());
        for (c, combo) in combos.iter().enumerate() {
            let image = AltForm::basis(n, combo).act(a);
            m.set_column(c, &image.as_vector());
        }
        m
    }
}

impl FrameTensor for AltForm {
    fn dim(&self) -> usize {
        self.n
    }

    fn act(&self, a: &DMatrix<f64>) -> AltForm {
        let mut out = AltForm::zero(self.n, self.k);
        if self.k == 0 {
            return out;
        }
        for combo in combinations(self.n, self.k) {
            let mut acc = 0.0;
            let mut idx = combo.clone();
            for s in 0..self.k {
                let orig = combo[s];
                for m in 0..self.n {
                    let am = a[(m, orig)];
                    if am != 0.0 {
                        idx[s] = m;
                        acc -= am * self.component(&idx);
                    }
                }
                idx[s] = orig;
            }
            out.add_component(&combo, acc);
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Add for &AltForm {
    type Output = AltForm;
    fn add(self, rhs: &AltForm) -> AltForm {
        assert_eq!((self.n, self.k), (rhs.n, rhs.k));
        AltForm {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &AltForm {
    type Output = AltForm;
    fn sub(self, rhs: &AltForm) -> AltForm {
        self + &(-rhs)
    }
}

impl Neg for &AltForm {
    type Output = AltForm;
    fn neg(self) -> AltForm {
        self * -1.0
    }
}

impl Mul<f64> for &AltForm {
    type Output = AltForm;
    fn mul(self, s: f64) -> AltForm {
        AltForm {
            n: self.n,
            k: self.k,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }
}

impl fmt::Display for AltForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms(1e-12);
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (idx, v)) in terms.iter().enumerate() {
            let label: String = idx.iter().map(|i| (i + 1).to_string()).collect();
            if n == 0 {
                write!(f, "{v} e{label}")?;
            } else if *v < 0.0 {
                write!(f, " - {} e{label}", -v)?;
            } else {
                write!(f, " + {v} e{label}")?;
            }
        }
        Ok(())
    }
}

/// Totally symmetric 3-tensor stored once per index multiset `i <= j <= k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymTensor3 {
    n: usize,
    coeffs: Vec<f64>,
}

fn sym_rank(n: usize, mut idx: [usize; 3]) -> usize {
    idx.sort_unstable();
    // multisets of size 3 from n elements, lexicographic
    let mut rank = 0;
    let mut lo = 0;
    for (pos, &v) in idx.iter().enumerate() {
        let remaining = 2 - pos;
        for j in lo..v {
            rank += binomial(n - j + remaining - 1, remaining);
        }
        lo = v;
    }
    rank
}

impl SymTensor3 {
    pub fn zero(n: usize) -> Self {
        SymTensor3 {
            n,
            coeffs: vec![0.0; binomial(n + 2, 3)],
        }
    }

    /// All index multisets `i <= j <= k` in storage order.
    pub fn multi_indices(n: usize) -> Vec<[usize; 3]> {
        let mut out = Vec::with_capacity(binomial(n + 2, 3));
        for i in 0..n {
            for j in i..n {
                for k in j..n {
                    out.push([i, j, k]);
                }
            }
        }
        out
    }

    pub fn from_coeffs(n: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), binomial(n + 2, 3));
        SymTensor3 { n, coeffs }
    }

    /// Polarize a cubic given as monomials `(i, j, k) -> coefficient of
    /// x_i x_j x_k`: each component is the coefficient divided by the number
    /// of distinct orderings of its index multiset.
    pub fn polarize(n: usize, monomials: &[([usize; 3], f64)]) -> Self {
        let mut t = Self::zero(n);
        for &(idx, c) in monomials {
            let mut s = idx;
            s.sort_unstable();
            let multiplicity = if s[0] == s[2] {
                1.0
            } else if s[0] == s[1] || s[1] == s[2] {
                3.0
            } else {
                6.0
            };
            t.coeffs[sym_rank(n, s)] += c / multiplicity;
        }
        t
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.coeffs[sym_rank(self.n, [i, j, k])]
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        let r = sym_rank(self.n, [i, j, k]);
        self.coeffs[r] = v;
    }

    /// `T(v, v, v)`.
    pub fn cubic(&self, v: &DVector<f64>) -> f64 {
        self.contract(v).iter().enumerate().fold(0.0, |acc, (flat, m)| {
            let (i, j) = (flat % self.n, flat / self.n);
            acc + m * v[i] * v[j]
        })
    }

    /// The symmetric matrix `(T_v)_ij = sum_k T_ijk v_k`.
    pub fn contract(&self, v: &DVector<f64>) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| {
            (0..self.n).map(|k| self.get(i, j, k) * v[k]).sum()
        })
    }

    /// `max_k |sum_i T_iik|`.
    pub fn trace_residual(&self) -> f64 {
        (0..self.n)
            .map(|k| (0..self.n).map(|i| self.get(i, i, k)).sum::<f64>().abs())
            .fold(0.0, f64::max)
    }

    /// `|T_v^2 v - g(v, v) v|_max` for one vector.
    pub fn reconstruction_residual(&self, v: &DVector<f64>) -> f64 {
        let tv = self.contract(v);
        let lhs = &tv * (&tv * v);
        (lhs - v * v.norm_squared()).amax()
    }

    pub fn as_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coeffs)
    }

    pub fn scaled(&self, s: f64) -> Self {
        SymTensor3 {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn action_matrix(n: usize, a: &DMatrix<f64>) -> DMatrix<f64> {
        let size = binomial(n + 2, 3);
        let mut m = DMatrix::zeros(size, size);
        for c in 0..size {
            let mut e = SymTensor3::zero(n);
            e.coeffs[c] = 1.0;
            m.set_column(c, &e.act(a).as_vector());
        }
        m
    }
}

impl FrameTensor for SymTensor3 {
    fn dim(&self) -> usize {
        self.n
    }

    fn act(&self, a: &DMatrix<f64>) -> SymTensor3 {
        let n = self.n;
        let mut out = SymTensor3::zero(n);
        for [i, j, k] in Self::multi_indices(n) {
            let mut acc = 0.0;
            for m in 0..n {
                acc -= a[(m, i)] * self.get(m, j, k)
                    + a[(m, j)] * self.get(i, m, k)
                    + a[(m, k)] * self.get(i, j, m);
            }
            out.set(i, j, k, acc);
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Sub for &SymTensor3 {
    type Output = SymTensor3;
    fn sub(self, rhs: &SymTensor3) -> SymTensor3 {
        SymTensor3 {
            n: self.n,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::elementary;

    #[test]
    fn combination_rank_matches_enumeration() {
        for n in 0..7 {
            for k in 0..=n {
                for (r, c) in combinations(n, k).iter().enumerate() {
                    assert_eq!(combination_rank(n, c), r);
                }
            }
        }
    }

    #[test]
    fn sym_rank_matches_enumeration() {
        for (r, idx) in SymTensor3::multi_indices(5).iter().enumerate() {
            assert_eq!(sym_rank(5, *idx), r);
        }
        assert_eq!(SymTensor3::multi_indices(5).len(), 35);
    }

    #[test]
    fn wedge_and_component_signs() {
        let e1 = AltForm::basis(5, &[0]);
        let e2 = AltForm::basis(5, &[1]);
        let w = e2.wedge(&e1);
        assert_eq!(w.component(&[0, 1]), -1.0);
        assert_eq!(w.component(&[1, 0]), 1.0);
        assert_eq!(w.component(&[1, 1]), 0.0);
    }

    #[test]
    fn hodge_of_e123_is_e45() {
        let h = AltForm::basis(5, &[0, 1, 2]).hodge();
        assert_eq!(h, AltForm::basis(5, &[3, 4]));
        // ** = 1 in odd dimension with Euclidean signature
        let w = AltForm::from_components(5, 3, &[(&[0, 3, 4], 2.0), (&[1, 2, 4], -1.0)]);
        assert_eq!(w.hodge().hodge(), w);
    }

    #[test]
    fn action_of_elementary_on_one_form() {
        // E_ab e_a = e_b and the dual action agrees on 1-forms
        let a = elementary(5, 0, 1);
        let out = AltForm::basis(5, &[0]).act(&a);
        assert_eq!(out, AltForm::basis(5, &[1]));
    }

    #[test]
    fn skew_matrix_correspondence() {
        let f = AltForm::basis(5, &[1, 2]);
        assert_eq!(f.to_skew_matrix(), elementary(5, 1, 2));
        assert_eq!(AltForm::from_skew_matrix(&elementary(5, 3, 4)), AltForm::basis(5, &[3, 4]));
    }

    #[test]
    fn interior_product() {
        let w = AltForm::basis(5, &[0, 1, 2]);
        let mut v = DVector::zeros(5);
        v[1] = 1.0;
        assert_eq!(w.interior(&v), &AltForm::basis(5, &[0, 2]) * -1.0);
    }

    #[test]
    fn evaluate_matches_components() {
        let w = AltForm::from_components(4, 2, &[(&[0, 1], 2.0), (&[2, 3], -1.0)]);
        let e = |i: usize| {
            let mut v = DVector::zeros(4);
            v[i] = 1.0;
            v
        };
        assert_eq!(w.evaluate(&[e(1), e(0)]), -2.0);
        assert_eq!(w.evaluate(&[e(2), e(3)]), -1.0);
    }
}
