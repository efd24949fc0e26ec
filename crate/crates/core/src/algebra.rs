//! Lie algebras by structure constants, reductive splittings with an
//! orthonormal frame, and small representation-theoretic utilities.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{AltForm, SymTensor3};
use crate::linalg::{self, canonical_basis, commutator, least_squares, null_space, RANK_CUTOFF};

/// Default tolerance for residual checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Real Lie algebra given by `c[i][j][k]`, the coefficient of `b_k` in
/// `[b_i, b_j]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LieAlgebra {
    labels: Vec<String>,
    /// Flattened `c[i][j][k]` at `(i * n + j) * n + k`.
    constants: Vec<f64>,
}

impl LieAlgebra {
    /// Wrap raw constants without checking them; see [`LieAlgebra::validate`].
    pub fn from_raw(labels: Vec<String>, constants: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInput("Lie algebra must have positive dimension".into()));
        }
        if constants.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n * n,
                found: constants.len(),
            });
        }
        Ok(LieAlgebra { labels, constants })
    }

    /// Build from `[b_i, b_j] = sum value b_k` triplets; the entry for
    /// `[b_j, b_i]` is filled in by antisymmetry.
    pub fn from_triplets(labels: Vec<String>, triplets: &[(usize, usize, usize, f64)]) -> Result<Self> {
        let n = labels.len();
        let mut c = vec![0.0; n * n * n];
        for &(i, j, k, v) in triplets {
            if i >= n || j >= n || k >= n {
                return Err(Error::InvalidInput(format!(
                    "structure constant index ({i}, {j}, {k}) out of range for dimension {n}"
                )));
            }
            if i == j && v != 0.0 {
                return Err(Error::InvalidInput(format!("nonzero self-bracket [{}, {}]", labels[i], labels[i])));
            }
            c[(i * n + j) * n + k] += v;
            c[(j * n + i) * n + k] -= v;
        }
        Self::from_raw(labels, c)
    }

    /// Structure constants of the span of linearly independent matrices,
    /// closed under the commutator.
    pub fn from_matrix_basis(labels: Vec<String>, basis: &[DMatrix<f64>]) -> Result<Self> {
        let n = basis.len();
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        let cols: Vec<DVector<f64>> = basis.iter().map(linalg::flatten).collect();
        let mut stacked = DMatrix::zeros(cols.first().map_or(0, |c| c.len()), n);
        for (k, col) in cols.iter().enumerate() {
            stacked.set_column(k, col);
        }
        if linalg::rank(&stacked, RANK_CUTOFF) != n {
            return Err(Error::InvalidInput("matrix basis is linearly dependent".into()));
        }
        let mut c = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                let br = linalg::flatten(&commutator(&basis[i], &basis[j]));
                let ls = least_squares(&stacked, &br, RANK_CUTOFF);
                if ls.residual > 1e-10 * (1.0 + br.amax()) {
                    return Err(Error::invariant(
                        format!("[{}, {}] leaves the span of the matrix basis", labels[i], labels[j]),
                        ls.residual,
                        1e-10,
                    ));
                }
                for k in 0..n {
                    c[(i * n + j) * n + k] = ls.solution[k];
                }
            }
        }
        Self::from_raw(labels, c)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        let n = self.dim();
        self.constants[(i * n + j) * n + k]
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    /// Nonzero constants `(i, j, k, value)` with `i < j`.
    pub fn triplets(&self) -> Vec<(usize, usize, usize, f64)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    let v = self.c(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `[x, y]` in coordinates.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
        let n = self.dim();
        for v in [x, y] {
            if v.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
        }
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.c(i, j, k);
                }
            }
        }
        out
    }

    /// `[b_i, b_j]` in coordinates.
    pub fn basis_bracket(&self, i: usize, j: usize) -> DVector<f64> {
        let n = self.dim();
        DVector::from_iterator(n, (0..n).map(|k| self.c(i, j, k)))
    }

    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.dim();
        let mut r: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    r = r.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        r
    }

    /// Largest violation of the cyclic Jacobi sum over all index quadruples.
    pub fn jacobi_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s: f64 = (0..n)
                            .map(|m| {
                                self.c(i, j, m) * self.c(m, k, l)
                                    + self.c(j, k, m) * self.c(m, i, l)
                                    + self.c(k, i, m) * self.c(m, j, l)
                            })
                            .sum();
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    /// Check antisymmetry and the Jacobi identity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let a = self.antisymmetry_residual();
        if a > tol {
            return Err(Error::invariant("structure constants are not antisymmetric", a, tol));
        }
        let j = self.jacobi_residual();
        if j > tol {
            return Err(Error::invariant("Jacobi identity fails", j, tol));
        }
        Ok(())
    }

    /// Constants in a new basis whose vectors are the columns of `p`
    /// (old coordinates), relabelled with `labels`.
    pub fn change_basis(&self, p: &DMatrix<f64>, labels: Vec<String>) -> Result<LieAlgebra> {
        let n = self.dim();
        if p.shape() != (n, n) || labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.ncols(),
            });
        }
        let p_inv = p
            .clone()
            .try_inverse()
            .filter(|_| linalg::rank(p, RANK_CUTOFF) == n)
            .ok_or_else(|| Error::InvalidInput("change of basis is singular".into()))?;
        let cols: Vec<DVector<f64>> = (0..n).map(|a| p.column(a).into_owned()).collect();
        let mut c = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                let br = self.bracket_unchecked(&cols[a], &cols[b]);
                let coords = &p_inv * br;
                for k in 0..n {
                    c[(a * n + b) * n + k] = coords[k];
                }
            }
        }
        LieAlgebra::from_raw(labels, c)
    }

    /// Killing form `B(b_i, b_j) = tr(ad b_i ad b_j)`.
    pub fn killing_form(&self) -> DMatrix<f64> {
        let ads: Vec<DMatrix<f64>> = (0..self.dim()).map(|i| self.ad(i)).collect();
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| (&ads[i] * &ads[j]).trace())
    }

    /// Matrix of `ad b_i`; column `j` holds `[b_i, b_j]`.
    pub fn ad(&self, i: usize) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |k, j| self.c(i, j, k))
    }

    /// Render a coordinate vector with basis labels, e.g. `a3 + 2 b3`.
    pub fn describe(&self, v: &DVector<f64>) -> String {
        describe_combination(&self.labels, v)
    }
}

pub(crate) fn describe_combination(labels: &[String], v: &DVector<f64>) -> String {
    let mut s = String::new();
    for (k, &x) in v.iter().enumerate() {
        if x.abs() < 1e-12 {
            continue;
        }
        let mag = x.abs();
        let coef = if (mag - 1.0).abs() < 1e-12 {
            String::new()
        } else {
            format!("{} ", fmt_short(mag))
        };
        if s.is_empty() {
            if x < 0.0 {
                s.push('-');
            }
        } else {
            s.push_str(if x < 0.0 { " - " } else { " + " });
        }
        s.push_str(&coef);
        s.push_str(&labels[k]);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

fn fmt_short(x: f64) -> String {
    let s = format!("{x:.6}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A reductive homogeneous space `g = h + m` at the origin, with a
/// block-diagonal invariant metric on `m` and the derived orthonormal frame.
///
/// The frame vector `e_a` is the `a`-th listed basis vector of `m` divided by
/// the square root of its summand's scale.
#[derive(Debug, Clone)]
pub struct ReductiveSpace {
    algebra: LieAlgebra,
    h_basis: Vec<Vec<f64>>,
    m_summands: Vec<Vec<usize>>,
    scales: Vec<f64>,
    /// `g` in the basis (h basis, frame of m).
    adapted: LieAlgebra,
    isotropy: Vec<DMatrix<f64>>,
}

impl PartialEq for ReductiveSpace {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra
            && self.h_basis == other.h_basis
            && self.m_summands == other.m_summands
            && self.scales == other.scales
    }
}

impl ReductiveSpace {
    /// Validate the splitting and derive frame brackets and isotropy.
    ///
    /// `m_summands` lists basis indices of `g`; `h_basis` are coordinate
    /// vectors. Errors name the first violating bracket.
    pub fn build(
        algebra: LieAlgebra,
        h_basis: Vec<DVector<f64>>,
        m_summands: Vec<Vec<usize>>,
        scales: Vec<f64>,
        tol: f64,
    ) -> Result<Self> {
        let dim = algebra.dim();
        if scales.len() != m_summands.len() {
            return Err(Error::DimensionMismatch {
                expected: m_summands.len(),
                found: scales.len(),
            });
        }
        if let Some(bad) = scales.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(format!("metric scale must be positive, got {bad}")));
        }
        for h in &h_basis {
            if h.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.len(),
                });
            }
        }
        let m_index: Vec<usize> = m_summands.iter().flatten().copied().collect();
        let mut seen = vec![false; dim];
        for &i in &m_index {
            if i >= dim {
                return Err(Error::InvalidInput(format!("m index {i} out of range for dimension {dim}")));
            }
            if seen[i] {
                return Err(Error::InvalidInput(format!("m index {i} listed twice")));
            }
            seen[i] = true;
        }
        if m_summands.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidInput("empty m summand".into()));
        }
        if h_basis.len() + m_index.len() != dim {
            return Err(Error::InvalidInput(format!(
                "dim h + dim m = {} + {} does not match dim g = {dim}",
                h_basis.len(),
                m_index.len()
            )));
        }
        let labels = algebra.labels();
        let h_names: Vec<String> = h_basis.iter().map(|h| algebra.describe(h)).collect();

        // h closed under the bracket
        let nh = h_basis.len();
        let mut h_mat = DMatrix::zeros(dim, nh);
        for (c, h) in h_basis.iter().enumerate() {
            h_mat.set_column(c, h);
        }
        if nh > 0 && linalg::rank(&h_mat, RANK_CUTOFF) != nh {
            return Err(Error::InvalidInput("h basis is linearly dependent".into()));
        }
        for a in 0..nh {
            for b in (a + 1)..nh {
                let br = algebra.bracket_unchecked(&h_basis[a], &h_basis[b]);
                let ls = least_squares(&h_mat, &br, RANK_CUTOFF);
                if ls.residual > tol {
                    return Err(Error::invariant(
                        format!("h is not a subalgebra: [{}, {}] leaves h", h_names[a], h_names[b]),
                        ls.residual,
                        tol,
                    ));
                }
            }
        }

        // [h, m] inside m: no coordinates outside the m indices
        for (a, h) in h_basis.iter().enumerate() {
            for &i in &m_index {
                let mut e = DVector::zeros(dim);
                e[i] = 1.0;
                let br = algebra.bracket_unchecked(h, &e);
                let off = (0..dim).filter(|k| !seen[*k]).map(|k| br[k].abs()).fold(0.0, f64::max);
                if off > tol {
                    return Err(Error::invariant(
                        format!(
                            "not reductive: [{}, {}] = {} leaves m",
                            h_names[a],
                            labels[i],
                            algebra.describe(&br)
                        ),
                        off,
                        tol,
                    ));
                }
            }
        }

        let mut p = DMatrix::zeros(dim, dim);
        let mut adapted_labels = Vec::with_capacity(dim);
        for (c, h) in h_basis.iter().enumerate() {
            p.set_column(c, h);
            adapted_labels.push(if nh == 1 { "e0".to_string() } else { format!("h{}", c + 1) });
        }
        let mut frame_scale = Vec::with_capacity(m_index.len());
        for (s, summand) in m_summands.iter().enumerate() {
            for &i in summand {
                frame_scale.push(1.0 / scales[s].sqrt());
                let col = nh + frame_scale.len() - 1;
                p[(i, col)] = *frame_scale.last().expect("just pushed");
                adapted_labels.push(format!("e{}", frame_scale.len()));
            }
        }
        if linalg::rank(&p, RANK_CUTOFF) != dim {
            return Err(Error::InvalidInput("h and m are not complementary".into()));
        }
        let adapted = algebra.change_basis(&p, adapted_labels)?;
        let n = m_index.len();
        let isotropy: Vec<DMatrix<f64>> = (0..nh)
            .map(|h| DMatrix::from_fn(n, n, |r, a| adapted.c(h, nh + a, nh + r)))
            .collect();

        let summand_of: Vec<usize> = m_summands
            .iter()
            .enumerate()
            .flat_map(|(s, idx)| std::iter::repeat_n(s, idx.len()))
            .collect();
        for (h, iso) in isotropy.iter().enumerate() {
            let skew = linalg::skew_residual(iso);
            if skew > tol {
                return Err(Error::invariant(
                    format!("isotropy of {} is not skew for the metric", h_names[h]),
                    skew,
                    tol,
                ));
            }
            for r in 0..n {
                for a in 0..n {
                    if summand_of[r] != summand_of[a] && iso[(r, a)].abs() > tol {
                        return Err(Error::invariant(
                            format!(
                                "isotropy of {} mixes summands: [{}, e{}] has an e{} component",
                                h_names[h],
                                h_names[h],
                                a + 1,
                                r + 1
                            ),
                            iso[(r, a)].abs(),
                            tol,
                        ));
                    }
                }
            }
        }

        Ok(ReductiveSpace {
            algebra,
            h_basis: h_basis.iter().map(|h| h.iter().copied().collect()).collect(),
            m_summands,
            scales,
            adapted,
            isotropy,
        })
    }

    /// Dimension of `m`.
    pub fn dim(&self) -> usize {
        self.adapted.dim() - self.h_dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h_basis.len()
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn h_basis(&self) -> Vec<DVector<f64>> {
        self.h_basis.iter().map(|h| DVector::from_column_slice(h)).collect()
    }

    pub fn m_summands(&self) -> &[Vec<usize>] {
        &self.m_summands
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// The algebra in the basis (h basis, e_1, .., e_n).
    pub fn adapted(&self) -> &LieAlgebra {
        &self.adapted
    }

    /// Isotropy matrices `d lambda(h_a)` on `m` in the frame.
    pub fn isotropy(&self) -> &[DMatrix<f64>] {
        &self.isotropy
    }

    /// Index of the summand containing frame vector `a`.
    pub fn summand_of(&self, a: usize) -> usize {
        let mut acc = 0;
        for (s, idx) in self.m_summands.iter().enumerate() {
            acc += idx.len();
            if a < acc {
                return s;
            }
        }
        panic!("frame index {a} out of range");
    }

    /// `g([e_i, e_j]_m, e_k)`.
    #[inline]
    pub fn bm(&self, i: usize, j: usize, k: usize) -> f64 {
        let nh = self.h_dim();
        self.adapted.c(nh + i, nh + j, nh + k)
    }

    /// Coefficient of the `h`-th h basis vector in `[e_i, e_j]`.
    #[inline]
    pub fn bh(&self, i: usize, j: usize, h: usize) -> f64 {
        let nh = self.h_dim();
        self.adapted.c(nh + i, nh + j, h)
    }

    /// `[x, y]_m` for frame-coordinate vectors.
    pub fn bracket_m(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim();
        let mut out = DVector::zeros(n);
        for i in 0..n {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..n {
                let w = x[i] * y[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..n {
                    out[k] += w * self.bm(i, j, k);
                }
            }
        }
        out
    }

    /// Frame coordinates of `e_a`.
    pub fn frame_vector(&self, a: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v[a] = 1.0;
        v
    }

    /// Largest `|(A . t)|` over all isotropy generators.
    pub fn invariance_residual<T: crate::forms::FrameTensor>(&self, t: &T) -> f64 {
        self.isotropy.iter().map(|a| t.act(a).max_abs()).fold(0.0, f64::max)
    }

    /// Residual of the isotropy being a representation of h.
    pub fn isotropy_homomorphism_residual(&self) -> f64 {
        let nh = self.h_dim();
        let mut worst: f64 = 0.0;
        for a in 0..nh {
            for b in 0..nh {
                let lhs = commutator(&self.isotropy[a], &self.isotropy[b]);
                let mut rhs = DMatrix::zeros(self.dim(), self.dim());
                for c in 0..nh {
                    rhs += &self.isotropy[c] * self.adapted.c(a, b, c);
                }
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }
}

/// Basis of the isotropy-invariant alternating `k`-forms on `m`.
pub fn invariant_forms(space: &ReductiveSpace, k: usize) -> Result<Vec<AltForm>> {
    let n = space.dim();
    if k > n {
        return Err(Error::InvalidInput(format!("form degree {k} exceeds dim m = {n}")));
    }
    let size = crate::forms::binomial(n, k);
    let mut stacked = DMatrix::zeros(size * space.h_dim(), size);
    for (h, iso) in space.isotropy().iter().enumerate() {
        stacked
            .view_mut((h * size, 0), (size, size))
            .copy_from(&AltForm::action_matrix(n, k, iso));
    }
    let basis = canonical_basis(&null_space(&stacked, RANK_CUTOFF), 1e-12);
    Ok((0..basis.ncols())
        .map(|c| AltForm::from_coeffs(n, k, basis.column(c).iter().copied().collect()))
        .collect())
}

/// Basis of the isotropy-invariant symmetric 3-tensors on `m`.
pub fn invariant_symmetric_cubics(generators: &[DMatrix<f64>], n: usize) -> Vec<SymTensor3> {
    let size = crate::forms::binomial(n + 2, 3);
    let mut stacked = DMatrix::zeros(size * generators.len(), size);
    for (h, a) in generators.iter().enumerate() {
        stacked
            .view_mut((h * size, 0), (size, size))
            .copy_from(&SymTensor3::action_matrix(n, a));
    }
    let basis = canonical_basis(&null_space(&stacked, RANK_CUTOFF), 1e-12);
    (0..basis.ncols())
        .map(|c| SymTensor3::from_coeffs(n, basis.column(c).iter().copied().collect()))
        .collect()
}

/// Images of a Lie algebra's basis as skew matrices.
#[derive(Debug, Clone)]
pub struct Representation {
    pub generators: Vec<DMatrix<f64>>,
    pub algebra: LieAlgebra,
}

impl Representation {
    pub fn new(algebra: LieAlgebra, generators: Vec<DMatrix<f64>>) -> Result<Self> {
        if generators.len() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                found: generators.len(),
            });
        }
        let n = generators.first().map_or(0, |g| g.nrows());
        if generators.iter().any(|g| g.shape() != (n, n)) {
            return Err(Error::InvalidInput("generators must be square of equal size".into()));
        }
        Ok(Representation { generators, algebra })
    }

    /// `max |[rho(a), rho(b)] - rho([a, b])|`.
    pub fn homomorphism_residual(&self) -> f64 {
        let d = self.algebra.dim();
        let mut worst: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let mut rhs = DMatrix::zeros(self.module_dim(), self.module_dim());
                for c in 0..d {
                    rhs += &self.generators[c] * self.algebra.c(a, b, c);
                }
                let lhs = commutator(&self.generators[a], &self.generators[b]);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    pub fn module_dim(&self) -> usize {
        self.generators.first().map_or(0, |g| g.nrows())
    }

    /// Dimension of the space of matrices commuting with every generator.
    pub fn commutant_dimension(&self) -> usize {
        commutant_dimension(&self.generators, self.module_dim())
    }
}

/// Dimension of `{M : [M, a] = 0 for all a in generators}` on `R^n`.
pub fn commutant_dimension(generators: &[DMatrix<f64>], n: usize) -> usize {
    let n2 = n * n;
    let mut stacked = DMatrix::zeros(n2 * generators.len(), n2);
    for (g, a) in generators.iter().enumerate() {
        for col in 0..n2 {
            let mut m = DMatrix::zeros(n, n);
            m[(col / n, col % n)] = 1.0;
            let img = linalg::flatten(&commutator(&m, a));
            stacked.view_mut((g * n2, col), (n2, 1)).copy_from(&img);
        }
    }
    null_space(&stacked, RANK_CUTOFF).ncols()
}

/// The standard so(3) constants `[b_1, b_2] = b_3` and cyclic.
pub fn so3_algebra(labels: [&str; 3]) -> LieAlgebra {
    LieAlgebra::from_triplets(
        labels.iter().map(|s| s.to_string()).collect(),
        &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
    )
    .expect("valid so(3) constants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::elementary;

    fn unit(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn so3_is_valid() {
        let g = so3_algebra(["s1", "s2", "s3"]);
        g.validate(1e-12).unwrap();
        assert_eq!(g.bracket(&unit(3, 0), &unit(3, 1)).unwrap(), unit(3, 2));
    }

    #[test]
    fn one_sided_perturbation_breaks_jacobi() {
        let g = so3_algebra(["s1", "s2", "s3"]);
        let mut c = g.constants().to_vec();
        c[2] += 0.1; // c[0][1][2]
        let bad = LieAlgebra::from_raw(g.labels().to_vec(), c).unwrap();
        assert!(bad.jacobi_residual() > 0.05);
        assert!(bad.validate(1e-9).is_err());
    }

    #[test]
    fn bracket_rejects_wrong_length() {
        let g = so3_algebra(["s1", "s2", "s3"]);
        let err = g.bracket(&unit(4, 0), &unit(3, 0)).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 3, found: 4 });
    }

    #[test]
    fn matrix_basis_recovers_so3() {
        let mats = vec![elementary(3, 1, 2), elementary(3, 2, 0), elementary(3, 0, 1)];
        let g = LieAlgebra::from_matrix_basis(vec!["s1".into(), "s2".into(), "s3".into()], &mats).unwrap();
        let reference = so3_algebra(["s1", "s2", "s3"]);
        let diff = g
            .constants()
            .iter()
            .zip(reference.constants())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-14);
    }

    #[test]
    fn commutant_of_zero_rep_is_everything() {
        assert_eq!(commutant_dimension(&[DMatrix::zeros(5, 5)], 5), 25);
    }

    #[test]
    fn describe_combination_formats() {
        let g = so3_algebra(["a", "b", "c"]);
        let v = DVector::from_vec(vec![1.0, 0.0, -2.0]);
        assert_eq!(g.describe(&v), "a - 2 c");
    }
}
