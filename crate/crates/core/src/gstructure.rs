//! The invariant cubic of an irreducible SO(3) structure, its nearly
//! integrable condition, and invariant almost contact metric structures.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::algebra::{invariant_symmetric_cubics, ReductiveSpace};
use crate::connection::exterior_derivative;
use crate::error::{Error, Result};
use crate::forms::{AltForm, FrameTensor, SymTensor3};
use crate::linalg::{self, commutator, least_squares, null_space, RANK_CUTOFF};
use crate::riemannian::levi_civita;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Totally symmetric trace-free cubic with `Y_v^2 v = g(v, v) v`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Upsilon(pub SymTensor3);

impl Upsilon {
    pub fn tensor(&self) -> &SymTensor3 {
        &self.0
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.0.get(i, j, k)
    }

    pub fn cubic(&self, v: &DVector<f64>) -> f64 {
        self.0.cubic(v)
    }

    pub fn trace_residual(&self) -> f64 {
        self.0.trace_residual()
    }

    /// Max reconstruction defect over the given vectors.
    pub fn reconstruction_residual(&self, vectors: &[DVector<f64>]) -> f64 {
        vectors
            .iter()
            .map(|v| self.0.reconstruction_residual(v))
            .fold(0.0, f64::max)
    }

    /// Max `|(A . Y)|` over `generators`.
    pub fn invariance_residual(&self, generators: &[DMatrix<f64>]) -> f64 {
        generators.iter().map(|a| self.0.act(a).max_abs()).fold(0.0, f64::max)
    }
}

/// The cubic
/// `x1^3 + 3/2 x1 (x2^2 + x3^2 - 2 x4^2 - 2 x5^2) + 3 sqrt3/2 (x2^2 - x3^2) x5 - 3 sqrt3 x2 x3 x4`,
/// polarized.
pub fn standard_upsilon() -> Upsilon {
    Upsilon(SymTensor3::polarize(
        5,
        &[
            ([0, 0, 0], 1.0),
            ([0, 1, 1], 1.5),
            ([0, 2, 2], 1.5),
            ([0, 3, 3], -3.0),
            ([0, 4, 4], -3.0),
            ([1, 1, 4], 1.5 * SQRT3),
            ([2, 2, 4], -1.5 * SQRT3),
            ([1, 2, 3], -3.0 * SQRT3),
        ],
    ))
}

/// The invariant cubic of a 3-dimensional subalgebra of so(5), normalized so
/// that `Y_v^2 v = |v|^2 v` and the first nonzero `Y(e_i, e_i, e_i)` is positive.
pub fn upsilon_from_subalgebra(subalgebra: &[DMatrix<f64>], tol: f64) -> Result<Upsilon> {
    if subalgebra.len() != 3 || subalgebra.iter().any(|a| a.shape() != (5, 5)) {
        return Err(Error::InvalidInput("expected three 5x5 generators".into()));
    }
    let mut span = DMatrix::zeros(25, 3);
    for (c, a) in subalgebra.iter().enumerate() {
        span.set_column(c, &linalg::flatten(a));
    }
    if linalg::rank(&span, RANK_CUTOFF) != 3 {
        return Err(Error::InvalidInput("generators are linearly dependent".into()));
    }
    for a in 0..3 {
        for b in (a + 1)..3 {
            let br = linalg::flatten(&commutator(&subalgebra[a], &subalgebra[b]));
            let ls = least_squares(&span, &br, RANK_CUTOFF);
            if ls.residual > tol * (1.0 + br.amax()) {
                return Err(Error::InvalidInput("generators do not span a subalgebra".into()));
            }
        }
    }
    let cubics = invariant_symmetric_cubics(subalgebra, 5);
    if cubics.len() != 1 {
        return Err(Error::NoUniqueInvariantCubic { dim: cubics.len() });
    }
    let raw = &cubics[0];
    let v = DVector::from_element(5, 1.0);
    let tv = raw.contract(&v);
    let r = (&tv * (&tv * &v)).dot(&v) / v.norm_squared().powi(2);
    if r <= 0.0 {
        return Err(Error::invariant("invariant cubic is degenerate", r.abs(), tol));
    }
    let mut scale = 1.0 / r.sqrt();
    for i in 0..5 {
        let c = raw.get(i, i, i);
        if c.abs() > RANK_CUTOFF {
            if c < 0.0 {
                scale = -scale;
            }
            break;
        }
    }
    Ok(Upsilon(raw.scaled(scale)))
}

/// `max |Sym(nabla^g Y)|`, the full symmetrization over all four slots of
/// `(nabla^g_{e_i} Y)(e_j, e_k, e_l)`. Zero iff `(nabla^g_v Y)(v, v, v) = 0`.
pub fn nearly_integrable_defect(space: &ReductiveSpace, upsilon: &Upsilon, tol: f64) -> Result<f64> {
    if space.dim() != 5 {
        return Err(Error::DimensionMismatch {
            expected: 5,
            found: space.dim(),
        });
    }
    let res = space.invariance_residual(upsilon.tensor());
    if res > tol {
        return Err(Error::NotInvariant {
            what: "Upsilon".into(),
            residual: res,
        });
    }
    let lc = levi_civita(space)?;
    let d: Vec<SymTensor3> = lc.matrices().iter().map(|l| upsilon.tensor().act(l)).collect();
    let mut worst: f64 = 0.0;
    for i in 0..5 {
        for j in i..5 {
            for k in j..5 {
                for l in k..5 {
                    let s = 0.25 * (d[i].get(j, k, l) + d[j].get(i, k, l) + d[k].get(i, j, l) + d[l].get(i, j, k));
                    worst = worst.max(s.abs());
                }
            }
        }
    }
    Ok(worst)
}

/// Almost contact metric structure `(xi, eta, phi)` with fundamental form
/// `F(X, Y) = g(X, phi Y)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostContact {
    /// Sign pattern of `phi` on the 2-plane blocks after the first, e.g. `+`.
    pub label: String,
    #[serde(skip)]
    pub xi: DVector<f64>,
    pub eta: AltForm,
    #[serde(skip)]
    pub phi: DMatrix<f64>,
    pub fundamental: AltForm,
}

impl AlmostContact {
    fn new(label: String, xi: DVector<f64>, phi: DMatrix<f64>) -> Self {
        let n = xi.len();
        let mut eta = AltForm::zero(n, 1);
        for (i, &x) in xi.iter().enumerate() {
            eta.add_component(&[i], x);
        }
        let mut fundamental = AltForm::zero(n, 2);
        for i in 0..n {
            for j in (i + 1)..n {
                fundamental.add_component(&[i, j], phi[(i, j)]);
            }
        }
        AlmostContact {
            label,
            xi,
            eta,
            phi,
            fundamental,
        }
    }

    /// `max |phi^2 + Id - eta (x) xi|`.
    pub fn structure_residual(&self) -> f64 {
        let n = self.xi.len();
        (&self.phi * &self.phi + DMatrix::identity(n, n) - &self.xi * self.xi.transpose()).amax()
    }

    /// `max |g(phi X, phi Y) - g(X, Y) + eta(X) eta(Y)|` on the frame.
    pub fn compatibility_residual(&self) -> f64 {
        let n = self.xi.len();
        (self.phi.transpose() * &self.phi - DMatrix::identity(n, n) + &self.xi * self.xi.transpose()).amax()
    }
}

fn first_significant_sign(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    for r in 0..n {
        for c in (r + 1)..n {
            if m[(r, c)].abs() > 1e-6 {
                return m[(r, c)].signum();
            }
        }
    }
    1.0
}

/// Invariant almost contact metric structures on a space with a single
/// invariant line. Each 2-plane block `J_b` of the commutant is oriented
/// like `E_ij` (`i < j`); the structures are `phi = -J_1 +- J_2 +- ..` and
/// are labelled by the signs after the first.
pub fn invariant_almost_contact(space: &ReductiveSpace, tol: f64) -> Result<Vec<AlmostContact>> {
    let n = space.dim();
    let iso = space.isotropy();
    let mut stacked = DMatrix::zeros(n * iso.len(), n);
    for (h, a) in iso.iter().enumerate() {
        stacked.view_mut((h * n, 0), (n, n)).copy_from(a);
    }
    let fixed = if iso.is_empty() {
        DMatrix::identity(n, n)
    } else {
        null_space(&stacked, RANK_CUTOFF)
    };
    match fixed.ncols() {
        0 => return Ok(Vec::new()),
        1 => {}
        d => {
            return Err(Error::InvalidInput(format!(
                "invariant vectors span {d} dimensions; a unique Reeb direction is required"
            )))
        }
    }
    let mut xi = fixed.column(0).into_owned();
    if let Some(first) = xi.iter().find(|x| x.abs() > 1e-9) {
        if *first < 0.0 {
            xi = -xi;
        }
    }
    xi /= xi.norm();
    for x in xi.iter_mut() {
        if x.abs() < 1e-14 {
            *x = 0.0;
        }
    }

    // skew phi with phi xi = 0 commuting with the isotropy
    let basis = linalg::so_basis(n);
    let nb = basis.len();
    let mut rows = DMatrix::zeros(n * n * iso.len() + n, nb);
    for (t, e) in basis.iter().enumerate() {
        for (h, a) in iso.iter().enumerate() {
            let c = commutator(e, a);
            for r in 0..n {
                for q in 0..n {
                    rows[(h * n * n + r * n + q, t)] = c[(r, q)];
                }
            }
        }
        let ex = e * &xi;
        for r in 0..n {
            rows[(n * n * iso.len() + r, t)] = ex[r];
        }
    }
    let commutant = null_space(&rows, RANK_CUTOFF);
    if commutant.ncols() == 0 {
        return Ok(Vec::new());
    }
    // a generic element of the commutant separates its 2-plane blocks
    let mut generic = DMatrix::zeros(n, n);
    for c in 0..commutant.ncols() {
        let w = 1.0 + 0.618_033_988_75 * (c as f64 + 1.0).sqrt();
        for t in 0..nb {
            generic += &basis[t] * (commutant[(t, c)] * w);
        }
    }
    let sq = &generic * &generic;
    let eig = SymmetricEigen::new(sq.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = eig.eigenvalues.amax().max(1e-300);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        let lam = eig.eigenvalues[i];
        match groups.last_mut() {
            Some(g) if (eig.eigenvalues[g[0]] - lam).abs() < 1e-8 * scale => g.push(i),
            _ => groups.push(vec![i]),
        }
    }
    let mut blocks: Vec<DMatrix<f64>> = Vec::new();
    for g in groups {
        let lam = eig.eigenvalues[g[0]];
        if lam.abs() < 1e-8 * scale {
            if g.len() > 1 {
                // kernel beyond xi: no almost complex structure on xi-perp
                return Ok(Vec::new());
            }
            continue;
        }
        let mut proj = DMatrix::zeros(n, n);
        for &i in &g {
            let v = eig.eigenvectors.column(i);
            proj += v * v.transpose();
        }
        let j = &generic * proj / (-lam).sqrt();
        let j = &j * first_significant_sign(&j) * -1.0;
        blocks.push(j);
    }
    // order blocks by their leading frame index
    blocks.sort_by_key(|b| {
        (0..n)
            .find(|&i| b.column(i).amax() > 1e-6)
            .unwrap_or(n)
    });
    let nblocks = blocks.len();
    let mut out = Vec::new();
    for mask in 0..(1usize << nblocks.saturating_sub(1)) {
        let mut phi = -&blocks[0];
        let mut label = String::new();
        for (b, jb) in blocks.iter().enumerate().skip(1) {
            let plus = mask & (1 << (b - 1)) == 0;
            label.push(if plus { '+' } else { '-' });
            phi += if plus { jb.clone() } else { -jb };
        }
        phi.iter_mut().for_each(|x| {
            if x.abs() < 1e-14 {
                *x = 0.0;
            }
        });
        let acs = AlmostContact::new(label, xi.clone(), phi);
        let res = acs.structure_residual().max(acs.compatibility_residual());
        if res > tol {
            return Err(Error::invariant("constructed almost contact structure is inconsistent", res, tol));
        }
        out.push(acs);
    }
    Ok(out)
}

/// Nijenhuis tensor `N[i][j][k] = g(N(e_i, e_j), e_k)` of an invariant
/// almost contact structure.
#[derive(Debug, Clone, Serialize)]
pub struct Nijenhuis {
    n: usize,
    #[serde(skip)]
    values: Vec<f64>,
    pub max_abs: f64,
    /// `max |N[i][j][k] + N[i][k][j]|`.
    pub skew_residual: f64,
    pub zero: bool,
    pub totally_antisymmetric: bool,
}

impl Nijenhuis {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[(i * self.n + j) * self.n + k]
    }

    pub fn to_form(&self) -> AltForm {
        let mut f = AltForm::zero(self.n, 3);
        for idx in crate::forms::combinations(self.n, 3) {
            f.add_component(&idx, self.get(idx[0], idx[1], idx[2]));
        }
        f
    }
}

/// `N(X, Y) = [phi X, phi Y] - phi [X, phi Y] - phi [phi X, Y] + phi^2 [X, Y] + d eta(X, Y) xi`
/// with m-projected brackets.
pub fn nijenhuis(space: &ReductiveSpace, acs: &AlmostContact, tol: f64) -> Result<Nijenhuis> {
    let n = space.dim();
    let deta = exterior_derivative(space, &acs.eta, tol)?;
    let phi = &acs.phi;
    let phi2 = phi * phi;
    let mut values = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let x = space.frame_vector(i);
            let y = space.frame_vector(j);
            let px = phi * &x;
            let py = phi * &y;
            let v = space.bracket_m(&px, &py) - phi * space.bracket_m(&x, &py) - phi * space.bracket_m(&px, &y)
                + &phi2 * space.bracket_m(&x, &y)
                + &acs.xi * deta.component(&[i, j]);
            for k in 0..n {
                values[(i * n + j) * n + k] = v[k];
            }
        }
    }
    let max_abs = values.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let mut skew: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                skew = skew.max((values[(i * n + j) * n + k] + values[(i * n + k) * n + j]).abs());
            }
        }
    }
    Ok(Nijenhuis {
        n,
        values,
        max_abs,
        skew_residual: skew,
        zero: max_abs < tol,
        totally_antisymmetric: skew < tol,
    })
}

/// `max |2F - d eta|`; zero for a Sasaki structure.
pub fn sasaki_defect(space: &ReductiveSpace, acs: &AlmostContact, tol: f64) -> Result<f64> {
    let deta = exterior_derivative(space, &acs.eta, tol)?;
    Ok((&(&acs.fundamental * 2.0) - &deta).max_abs())
}

/// Torsion of the characteristic connection of an invariant almost contact
/// structure, `eta ^ d eta + N - eta ^ (xi _| N)` when `N` is a 3-form and
/// `dF = 0`; `None` otherwise.
pub fn contact_characteristic_torsion(space: &ReductiveSpace, acs: &AlmostContact, tol: f64) -> Result<Option<AltForm>> {
    let nij = nijenhuis(space, acs, tol)?;
    if !nij.totally_antisymmetric {
        return Ok(None);
    }
    let df = exterior_derivative(space, &acs.fundamental, tol)?;
    if df.max_abs() > tol {
        return Ok(None);
    }
    let deta = exterior_derivative(space, &acs.eta, tol)?;
    let mut t = acs.eta.wedge(&deta);
    if !nij.zero {
        let nf = nij.to_form();
        t = &(&t + &nf) - &acs.eta.wedge(&nf.interior(&acs.xi));
    }
    Ok(Some(t))
}
