//! Invariant metric connections through Wang's correspondence: an invariant
//! connection is an equivariant linear map `Lambda: m -> so(m)`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::algebra::ReductiveSpace;
use crate::error::{Error, Result};
use crate::forms::{AltForm, FrameTensor};
use crate::linalg::{self, commutator, least_squares, null_space, orthonormal_span, RANK_CUTOFF};

/// Residual below which the joint characteristic-connection system counts
/// as consistent.
pub const EXISTENCE_TOL: f64 = 1e-7;

/// `Lambda(e_a)` for every frame vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionMap {
    maps: Vec<DMatrix<f64>>,
}

impl ConnectionMap {
    pub fn zero(n: usize) -> Self {
        ConnectionMap {
            maps: vec![DMatrix::zeros(n, n); n],
        }
    }

    pub fn from_matrices(maps: Vec<DMatrix<f64>>) -> Result<Self> {
        let n = maps.len();
        if let Some(bad) = maps.iter().find(|m| m.shape() != (n, n)) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: bad.nrows(),
            });
        }
        Ok(ConnectionMap { maps })
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// `Lambda(e_a)`.
    pub fn get(&self, a: usize) -> &DMatrix<f64> {
        &self.maps[a]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.maps
    }

    /// `Lambda(x)` for a frame-coordinate vector.
    pub fn apply(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let n = self.dim();
        let mut out = DMatrix::zeros(n, n);
        for (a, m) in self.maps.iter().enumerate() {
            if x[a] != 0.0 {
                out += m * x[a];
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.maps.iter().map(|m| m.amax()).fold(0.0, f64::max)
    }

    pub fn skew_residual(&self) -> f64 {
        self.maps.iter().map(linalg::skew_residual).fold(0.0, f64::max)
    }

    /// `max |Lambda(A x) - [A, Lambda(x)]|` over isotropy generators `A`
    /// and frame vectors `x`.
    pub fn equivariance_residual(&self, space: &ReductiveSpace) -> f64 {
        let mut worst: f64 = 0.0;
        for iso in space.isotropy() {
            for a in 0..self.dim() {
                let lhs = self.apply(&iso.column(a).into_owned());
                let rhs = commutator(iso, &self.maps[a]);
                worst = worst.max((lhs - rhs).amax());
            }
        }
        worst
    }

    pub fn max_difference(&self, other: &ConnectionMap) -> f64 {
        self.maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| (a - b).amax())
            .fold(0.0, f64::max)
    }
}

/// `T[i][j][k] = g(T(e_i, e_j), e_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Torsion {
    n: usize,
    t: Vec<f64>,
}

impl Torsion {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[(i * self.n + j) * self.n + k]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn max_abs(&self) -> f64 {
        self.t.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `max |T[i][j][k] + T[i][k][j]|`: zero iff `T` is a 3-form, since
    /// antisymmetry in the first pair holds by construction.
    pub fn skew_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst
                        .max((self.get(i, j, k) + self.get(i, k, j)).abs())
                        .max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    pub fn is_totally_antisymmetric(&self, tol: f64) -> bool {
        self.skew_residual() < tol
    }

    /// The 3-form with components `T[i][j][k]`, `i < j < k`.
    pub fn to_form(&self) -> AltForm {
        let n = self.n;
        let mut f = AltForm::zero(n, 3);
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    f.add_component(&[i, j, k], self.get(i, j, k));
                }
            }
        }
        f
    }

    pub fn from_form(form: &AltForm) -> Self {
        let n = form.dim();
        let mut t = vec![0.0; n * n * n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t[(i * n + j) * n + k] = form.component(&[i, j, k]);
                }
            }
        }
        Torsion { n, t }
    }
}

/// `T(X, Y) = Lambda(X) Y - Lambda(Y) X - [X, Y]_m` on the frame.
pub fn torsion(space: &ReductiveSpace, map: &ConnectionMap) -> Torsion {
    let n = space.dim();
    let mut t = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                t[(i * n + j) * n + k] = map.get(i)[(k, j)] - map.get(j)[(k, i)] - space.bm(i, j, k);
            }
        }
    }
    Torsion { n, t }
}

/// Check that `target` spans a subalgebra of skew matrices on `m`.
fn validate_target(target: &[DMatrix<f64>], n: usize, tol: f64) -> Result<()> {
    for t in target {
        if t.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: t.nrows(),
            });
        }
        let s = linalg::skew_residual(t);
        if s > tol {
            return Err(Error::InvalidInput(format!("target element is not skew (residual {s:.3e})")));
        }
    }
    if target.is_empty() {
        return Ok(());
    }
    let mut span = DMatrix::zeros(n * n, target.len());
    for (c, t) in target.iter().enumerate() {
        span.set_column(c, &linalg::flatten(t));
    }
    for a in 0..target.len() {
        for b in (a + 1)..target.len() {
            let br = linalg::flatten(&commutator(&target[a], &target[b]));
            let ls = least_squares(&span, &br, RANK_CUTOFF);
            if ls.residual > tol * (1.0 + br.amax()) {
                return Err(Error::InvalidInput(format!(
                    "target is not a subalgebra: bracket of elements {} and {} leaves the span (residual {:.3e})",
                    a + 1,
                    b + 1,
                    ls.residual
                )));
            }
        }
    }
    Ok(())
}

/// Rows of the equivariance system for unknowns `x[a * nt + t]`, the
/// coefficient of `target[t]` in `Lambda(e_a)`.
fn equivariance_rows(space: &ReductiveSpace, target: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n = space.dim();
    let nt = target.len();
    let per_iso = n * n * n;
    let mut rows = DMatrix::zeros(per_iso * space.h_dim(), n * nt);
    for (h, iso) in space.isotropy().iter().enumerate() {
        let brackets: Vec<DMatrix<f64>> = target.iter().map(|t| commutator(iso, t)).collect();
        for a in 0..n {
            for r in 0..n {
                for q in 0..n {
                    let row = h * per_iso + (a * n + r) * n + q;
                    for b in 0..n {
                        let w = iso[(b, a)];
                        if w != 0.0 {
                            for (t, tm) in target.iter().enumerate() {
                                rows[(row, b * nt + t)] += w * tm[(r, q)];
                            }
                        }
                    }
                    for t in 0..nt {
                        rows[(row, a * nt + t)] -= brackets[t][(r, q)];
                    }
                }
            }
        }
    }
    rows
}

fn assemble(target: &[DMatrix<f64>], n: usize, x: &DVector<f64>) -> ConnectionMap {
    let nt = target.len();
    let maps = (0..n)
        .map(|a| {
            let mut m = DMatrix::zeros(n, n);
            for (t, tm) in target.iter().enumerate() {
                m += tm * x[a * nt + t];
            }
            m
        })
        .collect();
    ConnectionMap { maps }
}

/// Basis of the equivariant maps with values in `target` (all of `so(m)`
/// when `None`). An empty basis means only the zero map is equivariant.
pub fn equivariant_wang_maps(
    space: &ReductiveSpace,
    target: Option<&[DMatrix<f64>]>,
    tol: f64,
) -> Result<Vec<ConnectionMap>> {
    let n = space.dim();
    let full;
    let target = match target {
        Some(t) => t,
        None => {
            full = linalg::so_basis(n);
            &full
        }
    };
    validate_target(target, n, tol)?;
    if target.is_empty() {
        return Ok(Vec::new());
    }
    let rows = equivariance_rows(space, target);
    let ns = crate::linalg::canonical_basis(&null_space(&rows, RANK_CUTOFF), 1e-12);
    Ok((0..ns.ncols())
        .map(|c| assemble(target, n, &ns.column(c).into_owned()))
        .collect())
}

/// A metric connection with totally skew torsion and values in the target
/// subalgebra.
#[derive(Debug, Clone)]
pub struct CharacteristicConnection {
    pub map: ConnectionMap,
    pub torsion: Torsion,
    /// False when other solutions exist; they differ by `free_directions`.
    pub unique: bool,
    pub free_directions: Vec<ConnectionMap>,
}

/// Outcome of the joint equivariance and skew-torsion solve.
#[derive(Debug, Clone)]
pub struct CharacteristicSearch {
    /// Max residual of the best least-squares solution.
    pub residual: f64,
    pub solution: Option<CharacteristicConnection>,
}

impl CharacteristicSearch {
    pub fn exists(&self) -> bool {
        self.solution.is_some()
    }
}

/// Solve for an equivariant `Lambda` with values in `target` whose torsion is
/// a 3-form. Inconsistency of the system is a result, not an error.
pub fn characteristic_connection(
    space: &ReductiveSpace,
    target: &[DMatrix<f64>],
    tol: f64,
) -> Result<CharacteristicSearch> {
    let n = space.dim();
    validate_target(target, n, tol)?;
    let nt = target.len();
    let eq = equivariance_rows(space, target);
    let skew_rows = n * n * n;
    let mut a = DMatrix::zeros(eq.nrows() + skew_rows, n * nt);
    a.view_mut((0, 0), (eq.nrows(), n * nt)).copy_from(&eq);
    let mut b = DVector::zeros(eq.nrows() + skew_rows);
    // T[i][j][k] + T[i][k][j] = 0 with T[i][j][k] = L_i[k][j] - L_j[k][i] - bm[i][j][k]
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let row = eq.nrows() + (i * n + j) * n + k;
                for (t, tm) in target.iter().enumerate() {
                    a[(row, i * nt + t)] += tm[(k, j)] + tm[(j, k)];
                    a[(row, j * nt + t)] -= tm[(k, i)];
                    a[(row, k * nt + t)] -= tm[(j, i)];
                }
                b[row] = space.bm(i, j, k) + space.bm(i, k, j);
            }
        }
    }
    let ls = least_squares(&a, &b, RANK_CUTOFF);
    if ls.residual >= EXISTENCE_TOL {
        return Ok(CharacteristicSearch {
            residual: ls.residual,
            solution: None,
        });
    }
    let map = assemble(target, n, &ls.solution);
    let t = torsion(space, &map);
    let free_directions: Vec<ConnectionMap> = (0..ls.null_space.ncols())
        .map(|c| assemble(target, n, &ls.null_space.column(c).into_owned()))
        .filter(|m| m.max_abs() > RANK_CUTOFF)
        .collect();
    Ok(CharacteristicSearch {
        residual: ls.residual,
        solution: Some(CharacteristicConnection {
            map,
            torsion: t,
            unique: free_directions.is_empty(),
            free_directions,
        }),
    })
}

/// `R(e_i, e_j)` for all ordered pairs.
#[derive(Debug, Clone)]
pub struct Curvature {
    n: usize,
    r: Vec<DMatrix<f64>>,
}

impl Curvature {
    pub fn get(&self, i: usize, j: usize) -> &DMatrix<f64> {
        &self.r[i * self.n + j]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// All `R(e_i, e_j)` with `i < j`.
    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), &DMatrix<f64>)> {
        let n = self.n;
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| ((i, j), self.get(i, j))))
    }

    /// Ricci contraction `Ric(x, y) = sum_i g(R(e_i, x) y, e_i)`.
    pub fn ricci(&self) -> DMatrix<f64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |j, k| (0..n).map(|i| self.get(i, j)[(i, k)]).sum())
    }
}

/// `R(X, Y) = [Lambda X, Lambda Y] - Lambda([X, Y]_m) - lambda([X, Y]_h)`.
pub fn curvature(space: &ReductiveSpace, map: &ConnectionMap) -> Curvature {
    let n = space.dim();
    let mut r = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut m = commutator(map.get(i), map.get(j));
            for k in 0..n {
                let c = space.bm(i, j, k);
                if c != 0.0 {
                    m -= map.get(k) * c;
                }
            }
            for (h, iso) in space.isotropy().iter().enumerate() {
                let c = space.bh(i, j, h);
                if c != 0.0 {
                    m -= iso * c;
                }
            }
            r.push(m);
        }
    }
    Curvature { n, r }
}

/// Holonomy algebra: curvature endomorphisms closed under brackets with each
/// other and with the image of `Lambda`. Orthonormal for `1/2 tr(A^T B)`.
pub fn holonomy_algebra(space: &ReductiveSpace, map: &ConnectionMap) -> Vec<DMatrix<f64>> {
    let n = space.dim();
    let curv = curvature(space, map);
    let mut gens: Vec<DVector<f64>> = curv.pairs().map(|(_, m)| linalg::skew_to_vec(m)).collect();
    let mut basis = orthonormal_span(&gens, RANK_CUTOFF);
    loop {
        let mats: Vec<DMatrix<f64>> = basis.iter().map(|v| linalg::vec_to_skew(n, v)).collect();
        gens = basis.clone();
        for m in &mats {
            for l in map.matrices() {
                gens.push(linalg::skew_to_vec(&commutator(l, m)));
            }
            for m2 in &mats {
                gens.push(linalg::skew_to_vec(&commutator(m, m2)));
            }
        }
        let next = orthonormal_span(&gens, RANK_CUTOFF);
        if next.len() == basis.len() {
            break;
        }
        basis = next;
    }
    let mut out = DMatrix::zeros(n * (n - 1) / 2, basis.len());
    for (c, v) in basis.iter().enumerate() {
        out.set_column(c, v);
    }
    let canon = crate::linalg::canonical_basis(&out, 1e-12);
    let canon_vecs: Vec<DVector<f64>> = (0..canon.ncols()).map(|c| canon.column(c).into_owned()).collect();
    // Gram-Schmidt on the canonical basis keeps the output independent of
    // the iteration order.
    let mut ortho: Vec<DVector<f64>> = Vec::new();
    for v in canon_vecs {
        let mut w = v.clone();
        for u in &ortho {
            w -= u * u.dot(&v);
        }
        let norm = w.norm();
        if norm > RANK_CUTOFF {
            ortho.push(w / norm);
        }
    }
    ortho.iter().map(|v| linalg::vec_to_skew(n, v)).collect()
}

/// Max distance of each matrix from the span of `subalgebra`.
pub fn containment_residual(mats: &[DMatrix<f64>], subalgebra: &[DMatrix<f64>]) -> f64 {
    if mats.is_empty() {
        return 0.0;
    }
    let vecs: Vec<DVector<f64>> = subalgebra.iter().map(linalg::skew_to_vec).collect();
    let onb = orthonormal_span(&vecs, RANK_CUTOFF);
    mats.iter()
        .map(|m| {
            let v = linalg::skew_to_vec(m);
            let mut w = v.clone();
            for u in &onb {
                w -= u * u.dot(&v);
            }
            w.amax()
        })
        .fold(0.0, f64::max)
}

/// `nabla_{e_i} t` for every frame direction. For invariant tensors this is
/// the derivation action of `Lambda(e_i)`; with `check = Some(tol)` a
/// non-invariant tensor is rejected.
pub fn covariant_derivative<T: FrameTensor>(
    space: &ReductiveSpace,
    map: &ConnectionMap,
    tensor: &T,
    check: Option<f64>,
) -> Result<Vec<T>> {
    if tensor.dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: tensor.dim(),
        });
    }
    if let Some(tol) = check {
        let res = space.invariance_residual(tensor);
        if res > tol {
            return Err(Error::NotInvariant {
                what: "tensor".into(),
                residual: res,
            });
        }
    }
    Ok(map.matrices().iter().map(|l| tensor.act(l)).collect())
}

/// `d omega` of an invariant form:
/// `d omega(X_0, .., X_k) = sum_{i<j} (-1)^{i+j} omega([X_i, X_j]_m, X_0, .. ^i .. ^j ..)`.
pub fn exterior_derivative(space: &ReductiveSpace, omega: &AltForm, tol: f64) -> Result<AltForm> {
    let n = space.dim();
    if omega.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: omega.dim(),
        });
    }
    if omega.degree() == n {
        return Err(Error::InvalidInput(format!("d of a top-degree form on a {n}-dimensional space")));
    }
    let res = space.invariance_residual(omega);
    if res > tol {
        return Err(Error::NotInvariant {
            what: format!("{}-form", omega.degree()),
            residual: res,
        });
    }
    Ok(exterior_derivative_unchecked(space, omega))
}

pub(crate) fn exterior_derivative_unchecked(space: &ReductiveSpace, omega: &AltForm) -> AltForm {
    let n = space.dim();
    let k = omega.degree();
    let mut out = AltForm::zero(n, k + 1);
    if k == 0 {
        return out;
    }
    for idx in crate::forms::combinations(n, k + 1) {
        let mut acc = 0.0;
        for i in 0..=k {
            for j in (i + 1)..=k {
                let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                let mut args = Vec::with_capacity(k);
                args.push(0);
                args.extend(idx.iter().enumerate().filter(|(l, _)| *l != i && *l != j).map(|(_, v)| *v));
                for c in 0..n {
                    let b = space.bm(idx[i], idx[j], c);
                    if b != 0.0 {
                        args[0] = c;
                        acc += sign * b * omega.component(&args);
                    }
                }
            }
        }
        out.add_component(&idx, acc);
    }
    out
}

/// `delta T = -sum_i e_i _| nabla^g_{e_i} T` for the Levi-Civita map.
pub fn torsion_divergence(space: &ReductiveSpace, levi_civita: &ConnectionMap, t: &AltForm) -> AltForm {
    let n = space.dim();
    let mut out = AltForm::zero(n, t.degree() - 1);
    for i in 0..n {
        let d = t.act(levi_civita.get(i));
        out = &out - &d.interior(&space.frame_vector(i));
    }
    out
}

/// True iff `T(X, Y, Z) = -g([X, Y]_m, Z)` on the frame.
pub fn is_naturally_reductive(space: &ReductiveSpace, t: &Torsion, tol: f64) -> bool {
    naturally_reductive_residual(space, t) < tol
}

pub fn naturally_reductive_residual(space: &ReductiveSpace, t: &Torsion) -> f64 {
    let n = space.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                worst = worst.max((t.get(i, j, k) + space.bm(i, j, k)).abs());
            }
        }
    }
    worst
}

/// Split of a 3-form, through its Hodge dual in `so(5)`, into the part in a
/// subalgebra and the orthogonal rest.
#[derive(Debug, Clone, Serialize)]
pub struct TorsionType {
    /// Coefficients of the subalgebra part in the given subalgebra basis.
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub in_subalgebra: DMatrix<f64>,
    #[serde(skip)]
    pub complement: DMatrix<f64>,
}

impl TorsionType {
    /// Recover the 3-form from both parts.
    pub fn reconstruct(&self) -> AltForm {
        AltForm::from_skew_matrix(&(&self.in_subalgebra + &self.complement)).hodge()
    }
}

pub fn torsion_type_decomposition(t: &AltForm, subalgebra: &[DMatrix<f64>], tol: f64) -> Result<TorsionType> {
    if t.dim() != 5 || t.degree() != 3 {
        return Err(Error::InvalidInput("torsion type needs a 3-form in dimension 5".into()));
    }
    if subalgebra.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "subalgebra must be 3-dimensional, got {} generators",
            subalgebra.len()
        )));
    }
    validate_target(subalgebra, 5, tol)?;
    let a = t.hodge().to_skew_matrix();
    let gram = DMatrix::from_fn(3, 3, |i, j| linalg::skew_inner(&subalgebra[i], &subalgebra[j]));
    let rhs = DVector::from_iterator(3, subalgebra.iter().map(|x| linalg::skew_inner(x, &a)));
    let coeffs = gram
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::InvalidInput("subalgebra generators are dependent".into()))?;
    let mut part = DMatrix::zeros(5, 5);
    for (c, x) in coeffs.iter().zip(subalgebra) {
        part += x * *c;
    }
    Ok(TorsionType {
        coefficients: coeffs.iter().copied().collect(),
        complement: &a - &part,
        in_subalgebra: part,
    })
}
