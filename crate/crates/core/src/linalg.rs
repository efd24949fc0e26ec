//! Small dense linear-algebra helpers: SVD-based null spaces, ranks and
//! least-squares solves, plus the skew-matrix conventions used throughout.
//!
//! The elementary skew endomorphism `E_ij` sends `e_i` to `e_j` and `e_j` to
//! `-e_i`; as a matrix it has `+1` at row `j`, column `i` and `-1` at row `i`,
//! column `j`. All indices here are zero-based.

use nalgebra::{DMatrix, DVector};

/// Relative singular-value cutoff used for every rank decision.
pub const RANK_CUTOFF: f64 = 1e-8;

/// Singular values below this absolute floor are treated as zero even when
/// the whole matrix is tiny.
const ABSOLUTE_FLOOR: f64 = 1e-300;

struct FullSvd {
    u: DMatrix<f64>,
    singular: Vec<f64>,
    v_t: DMatrix<f64>,
    max: f64,
}

/// SVD with a full right factor: wide matrices are padded with zero rows so
/// that `v_t` is square.
fn full_svd(a: &DMatrix<f64>) -> FullSvd {
    let (m, n) = a.shape();
    let padded = if m < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), (m, n)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(true, true);
    let singular: Vec<f64> = svd.singular_values.iter().copied().collect();
    let max = singular.iter().copied().fold(0.0, f64::max);
    FullSvd {
        u: svd.u.expect("u requested"),
        singular,
        v_t: svd.v_t.expect("v_t requested"),
        max,
    }
}

fn threshold(max: f64, rel_cutoff: f64) -> f64 {
    (max * rel_cutoff).max(ABSOLUTE_FLOOR)
}

/// Orthonormal basis of the null space of `a`, one basis vector per column.
pub fn null_space(a: &DMatrix<f64>, rel_cutoff: f64) -> DMatrix<f64> {
    let n = a.ncols();
    if n == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 {
        return DMatrix::identity(n, n);
    }
    let svd = full_svd(a);
    let thr = threshold(svd.max, rel_cutoff);
    let rows: Vec<usize> = (0..n).filter(|&r| svd.singular[r] <= thr).collect();
    let mut out = DMatrix::zeros(n, rows.len());
    for (c, &r) in rows.iter().enumerate() {
        for k in 0..n {
            out[(k, c)] = svd.v_t[(r, k)];
        }
    }
    out
}

/// Numerical rank with the given relative cutoff.
pub fn rank(a: &DMatrix<f64>, rel_cutoff: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let svd = full_svd(a);
    let thr = threshold(svd.max, rel_cutoff);
    svd.singular.iter().filter(|&&s| s > thr).count()
}

/// Minimum-norm least-squares solution of `a x = b` together with the
/// residual of that solution and the null space of `a`.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub solution: DVector<f64>,
    /// `max |a x - b|` at the returned solution.
    pub residual: f64,
    pub null_space: DMatrix<f64>,
}

pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>, rel_cutoff: f64) -> LeastSquares {
    let (m, n) = a.shape();
    assert_eq!(m, b.len(), "right-hand side length must match row count");
    if n == 0 {
        let residual = b.amax();
        return LeastSquares {
            solution: DVector::zeros(0),
            residual,
            null_space: DMatrix::zeros(0, 0),
        };
    }
    let svd = full_svd(a);
    let thr = threshold(svd.max, rel_cutoff);
    let mut b_pad = DVector::zeros(svd.u.nrows());
    b_pad.rows_mut(0, m).copy_from(b);
    let mut x = DVector::zeros(n);
    let mut null_rows = Vec::new();
    for r in 0..n {
        let s = svd.singular[r];
        if s > thr {
            let coeff = svd.u.column(r).dot(&b_pad) / s;
            for k in 0..n {
                x[k] += coeff * svd.v_t[(r, k)];
            }
        } else {
            null_rows.push(r);
        }
    }
    let mut null = DMatrix::zeros(n, null_rows.len());
    for (c, &r) in null_rows.iter().enumerate() {
        for k in 0..n {
            null[(k, c)] = svd.v_t[(r, k)];
        }
    }
    let residual = if m == 0 { 0.0 } else { (a * &x - b).amax() };
    LeastSquares {
        solution: x,
        residual,
        null_space: null,
    }
}

/// Orthonormal basis (Euclidean) of the span of the given vectors.
pub fn orthonormal_span(vectors: &[DVector<f64>], rel_cutoff: f64) -> Vec<DVector<f64>> {
    let Some(first) = vectors.first() else {
        return Vec::new();
    };
    let dim = first.len();
    let mut m = DMatrix::zeros(dim, vectors.len());
    for (c, v) in vectors.iter().enumerate() {
        m.set_column(c, v);
    }
    let svd = m.svd(true, false);
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let thr = threshold(max, rel_cutoff);
    let u = svd.u.expect("u requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&r| svd.singular_values[r] > thr)
        .collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    idx.into_iter().map(|r| u.column(r).into_owned()).collect()
}

/// Reduced column-echelon form of a basis (columns of `basis`): the result
/// spans the same space and does not depend on which basis was passed in.
pub fn canonical_basis(basis: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let mut rows = basis.transpose();
    let (m, n) = rows.shape();
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row == m {
            break;
        }
        let (best, val) = (pivot_row..m)
            .map(|r| (r, rows[(r, col)].abs()))
            .fold((pivot_row, -1.0), |acc, x| if x.1 > acc.1 + tol { x } else { acc });
        if val <= tol {
            continue;
        }
        rows.swap_rows(pivot_row, best);
        let p = rows[(pivot_row, col)];
        for c in 0..n {
            rows[(pivot_row, c)] /= p;
        }
        for r in 0..m {
            if r != pivot_row {
                let f = rows[(r, col)];
                if f != 0.0 {
                    for c in 0..n {
                        rows[(r, c)] -= f * rows[(pivot_row, c)];
                    }
                }
            }
        }
        pivot_row += 1;
    }
    let mut out = rows.rows(0, pivot_row).transpose();
    out.iter_mut().for_each(|x| {
        if x.abs() < tol {
            *x = 0.0;
        }
    });
    out
}

/// The elementary skew matrix `E_ij` (zero-based indices).
pub fn elementary(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(j, i)] += 1.0;
    m[(i, j)] -= 1.0;
    m
}

/// Matrix commutator `ab - ba`.
pub fn commutator(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a * b - b * a
}

/// `max |a + a^T|`.
pub fn skew_residual(a: &DMatrix<f64>) -> f64 {
    (a + a.transpose()).amax()
}

/// Inner product `<a, b> = 1/2 tr(a^T b)` on matrices, for which the `E_ij`
/// (i < j) are orthonormal.
pub fn skew_inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    0.5 * a.component_mul(b).sum()
}

/// Coordinates of a skew matrix in the basis `E_ij`, i < j, lexicographic.
pub fn skew_to_vec(a: &DMatrix<f64>) -> DVector<f64> {
    let n = a.nrows();
    let mut out = DVector::zeros(n * (n - 1) / 2);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            out[k] = a[(j, i)];
            k += 1;
        }
    }
    out
}

/// Inverse of [`skew_to_vec`].
pub fn vec_to_skew(n: usize, v: &DVector<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            m[(j, i)] = v[k];
            m[(i, j)] = -v[k];
            k += 1;
        }
    }
    m
}

/// Basis `E_ij`, i < j, of `so(n)`.
pub fn so_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(elementary(n, i, j));
        }
    }
    out
}

/// Flatten a matrix row-major into a vector.
pub fn flatten(a: &DMatrix<f64>) -> DVector<f64> {
    let (r, c) = a.shape();
    DVector::from_iterator(r * c, (0..r).flat_map(|i| (0..c).map(move |j| a[(i, j)])))
}
