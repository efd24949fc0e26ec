//! Built-in homogeneous spaces and subalgebra bases.
//!
//! Each space is built twice: from matrix realizations of the ambient Lie
//! algebra, and from a hard-coded commutator table in the orthonormal frame.
//! Construction fails if the two disagree.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{so3_algebra, LieAlgebra, ReductiveSpace, Representation};
use crate::error::{Error, Result};
use crate::linalg::elementary;

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Agreement required between the matrix route and the frame table.
const TABLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Vir24,
    VTilde24,
    Wir,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Vir24, Family::VTilde24, Family::Wir];

    pub fn name(self) -> &'static str {
        match self {
            Family::Vir24 => "vir24",
            Family::VTilde24 => "vtilde24",
            Family::Wir => "wir",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Family::Vir24 => "SO(3)xSO(3)/SO(2)_ir with metric diag(alpha, beta, beta, gamma, gamma)",
            Family::VTilde24 => "SO(2,1)xSO(3)/SO(2)_ir with metric diag(alpha, beta, beta, gamma, gamma)",
            Family::Wir => "R x (SL(2,R) |x R^2)/SO(2)_ir with embedding parameter mu",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vir24" => Ok(Family::Vir24),
            "vtilde24" => Ok(Family::VTilde24),
            "wir" => Ok(Family::Wir),
            other => Err(Error::InvalidInput(format!(
                "unknown space '{other}' (expected vir24, vtilde24 or wir)"
            ))),
        }
    }
}

/// Metric scales of the summands `n`, `m_1`, `m_2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Params {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("gamma", gamma)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Params { alpha, beta, gamma })
    }

    pub fn max_scale(&self) -> f64 {
        self.alpha.max(self.beta).max(self.gamma)
    }

    pub fn scaled(&self, c: f64) -> Self {
        Params {
            alpha: self.alpha * c,
            beta: self.beta * c,
            gamma: self.gamma * c,
        }
    }
}

/// A catalog space with bound parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CatalogId {
    pub family: Family,
    pub params: Params,
    /// Embedding parameter; only used by [`Family::Wir`].
    pub mu: Option<f64>,
}

impl CatalogId {
    pub fn vir24(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(CatalogId {
            family: Family::Vir24,
            params: Params::new(alpha, beta, gamma)?,
            mu: None,
        })
    }

    pub fn vtilde24(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Ok(CatalogId {
            family: Family::VTilde24,
            params: Params::new(alpha, beta, gamma)?,
            mu: None,
        })
    }

    pub fn wir(alpha: f64, beta: f64, gamma: f64, mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidInput(format!("mu must be finite, got {mu}")));
        }
        Ok(CatalogId {
            family: Family::Wir,
            params: Params::new(alpha, beta, gamma)?,
            mu: Some(mu),
        })
    }

    /// The constraint whose zero set carries a characteristic connection.
    pub fn constraint(&self) -> f64 {
        let Params { alpha, beta, gamma } = self.params;
        match self.family {
            Family::Vir24 => alpha * beta + 4.0 * gamma * alpha - 25.0 * beta * gamma,
            Family::VTilde24 => -alpha * beta + 4.0 * gamma * alpha + 25.0 * beta * gamma,
            Family::Wir => {
                let mu = self.mu.unwrap_or(0.0);
                SQRT3 * gamma * mu * mu - (alpha * gamma).sqrt() * mu + gamma * SQRT3
            }
        }
    }

    /// The so(3)_ir copy the space's structure reduces to.
    pub fn structure_subalgebra(&self) -> [DMatrix<f64>; 3] {
        let b = so3ir_bases();
        match self.family {
            Family::Vir24 | Family::VTilde24 => b.x,
            Family::Wir => b.y,
        }
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = (a.nrows(), b.nrows());
    let mut out = DMatrix::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((n, n), (m, m)).copy_from(b);
    out
}

/// The standard basis `s_1 = E_23, s_2 = E_31, s_3 = E_12` of so(3).
pub fn so3_standard() -> [DMatrix<f64>; 3] {
    [elementary(3, 1, 2), elementary(3, 2, 0), elementary(3, 0, 1)]
}

/// Basis `a_1, a_2, a_3` of so(2,1) with `[a_1, a_2] = -a_3`, `[a_2, a_3] = a_1`.
pub fn so21_basis() -> [DMatrix<f64>; 3] {
    [
        DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, -1.0, 0.0]),
        DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
        DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ]
}

/// Three bases of 3-dimensional subalgebras of so(5).
#[derive(Debug, Clone)]
pub struct So3Bases {
    /// Irreducible embedding `X_i = rho(s_i)`.
    pub x: [DMatrix<f64>; 3],
    /// Second irreducible copy, adapted to the W^ir isotropy; `Y_3 = X_3`.
    pub y: [DMatrix<f64>; 3],
    /// Standard block embedding on the first three coordinates.
    pub st: [DMatrix<f64>; 3],
    /// The same `s_i` as 3x3 matrices.
    pub s: [DMatrix<f64>; 3],
}

pub fn so3ir_bases() -> So3Bases {
    let e = |i: usize, j: usize| elementary(5, i - 1, j - 1);
    let x1 = e(1, 3) * SQRT3 + e(4, 2) + e(5, 3);
    let x2 = e(2, 1) * SQRT3 + e(3, 4) + e(5, 2);
    let x3 = e(2, 3) + e(4, 5) * 2.0;
    let y1 = e(1, 2) * -SQRT3 + e(3, 5) + e(2, 4);
    let y2 = e(1, 3) * -SQRT3 + e(2, 5) - e(3, 4);
    So3Bases {
        x: [x1, x2, x3.clone()],
        y: [y1, y2, x3],
        st: [e(2, 3), e(3, 1), e(1, 2)],
        s: so3_standard(),
    }
}

/// Isotropy representation of SU(3)/SO(3) on the five-dimensional
/// complement, as three matrices satisfying the so(3) relations.
pub fn su3_isotropy() -> Representation {
    let e = |i: usize, j: usize| elementary(5, i - 1, j - 1);
    let l1 = e(1, 2) + e(3, 4) - e(3, 5) * SQRT3;
    let l2 = e(1, 3) * -1.0 + e(2, 4) + e(2, 5) * SQRT3;
    let l3 = e(1, 4) * -2.0 + e(2, 3);
    Representation::new(so3_algebra(["a1", "a2", "a3"]), vec![l1, l2, l3]).expect("three 5x5 generators")
}

/// The roots `(mu_+, mu_-)` of `sqrt(3) gamma mu^2 - sqrt(alpha gamma) mu + sqrt(3) gamma = 0`.
pub fn wir_admissible_mu(alpha: f64, gamma: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && gamma > 0.0) {
        return Err(Error::InvalidInput("alpha and gamma must be positive".into()));
    }
    let disc = alpha - 12.0 * gamma;
    if disc < -1e-12 * alpha {
        return Err(Error::NoAdmissibleEmbedding { alpha, gamma });
    }
    let root = disc.max(0.0).sqrt();
    let denom = 2.0 * (3.0 * gamma).sqrt();
    Ok(((alpha.sqrt() + root) / denom, (alpha.sqrt() - root) / denom))
}

/// so(3) + so(3) (or so(2,1) + so(3)) in the adapted basis
/// `a3 + 2 b3, b3 - 2 a3, a1, a2, b1, b2`.
fn twisted_stiefel_algebra(noncompact: bool) -> Result<LieAlgebra> {
    static COMPACT: OnceLock<Result<LieAlgebra>> = OnceLock::new();
    static NONCOMPACT: OnceLock<Result<LieAlgebra>> = OnceLock::new();
    let cell = if noncompact { &NONCOMPACT } else { &COMPACT };
    cell.get_or_init(|| twisted_stiefel_uncached(noncompact)).clone()
}

fn twisted_stiefel_uncached(noncompact: bool) -> Result<LieAlgebra> {
    let z = DMatrix::zeros(3, 3);
    let a = if noncompact { so21_basis() } else { so3_standard() };
    let b = so3_standard();
    let mats: Vec<DMatrix<f64>> = a
        .iter()
        .map(|m| block_diag(m, &z))
        .chain(b.iter().map(|m| block_diag(&z, m)))
        .collect();
    let raw = LieAlgebra::from_matrix_basis(labels(&["a1", "a2", "a3", "b1", "b2", "b3"]), &mats)?;
    let mut p = DMatrix::zeros(6, 6);
    // columns: new basis vectors in (a1, a2, a3, b1, b2, b3) coordinates
    p[(2, 0)] = 1.0;
    p[(5, 0)] = 2.0;
    p[(5, 1)] = 1.0;
    p[(2, 1)] = -2.0;
    p[(0, 2)] = 1.0;
    p[(1, 3)] = 1.0;
    p[(3, 4)] = 1.0;
    p[(4, 5)] = 1.0;
    raw.change_basis(&p, labels(&["a3+2b3", "b3-2a3", "a1", "a2", "b1", "b2"]))
}

/// R + (sl(2,R) |x R^2) as 4x4 matrices in the basis `X, E+, E-, 1, (1,0), (0,1)`.
fn wir_raw() -> Result<LieAlgebra> {
    let m = |r: f64, a: [f64; 4], v: [f64; 2]| {
        let mut out = DMatrix::zeros(4, 4);
        out[(0, 0)] = r;
        out[(1, 1)] = a[0];
        out[(1, 2)] = a[1];
        out[(2, 1)] = a[2];
        out[(2, 2)] = a[3];
        out[(1, 3)] = v[0];
        out[(2, 3)] = v[1];
        out
    };
    let raw_basis = vec![
        m(0.0, [1.0, 0.0, 0.0, -1.0], [0.0, 0.0]), // X
        m(0.0, [0.0, 1.0, 0.0, 0.0], [0.0, 0.0]),  // E+
        m(0.0, [0.0, 0.0, 1.0, 0.0], [0.0, 0.0]),  // E-
        m(1.0, [0.0; 4], [0.0, 0.0]),              // 1
        m(0.0, [0.0; 4], [1.0, 0.0]),              // (1,0)
        m(0.0, [0.0; 4], [0.0, 1.0]),              // (0,1)
    ];
    LieAlgebra::from_matrix_basis(labels(&["X", "E+", "E-", "1", "v1", "v2"]), &raw_basis)
}

/// R + (sl(2,R) |x R^2) in the basis `E+ - E- + mu, 1 - mu (E+ - E-), (0,1), (1,0), E+ + E-, X`.
fn wir_algebra(mu: f64) -> Result<LieAlgebra> {
    static RAW: OnceLock<Result<LieAlgebra>> = OnceLock::new();
    let raw = RAW.get_or_init(wir_raw).clone()?;
    let cols: [[f64; 6]; 6] = [
        [0.0, 1.0, -1.0, mu, 0.0, 0.0],
        [0.0, -mu, mu, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 1.0, 0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    ];
    let p = DMatrix::from_fn(6, 6, |r, c| cols[c][r]);
    raw.change_basis(&p, labels(&["E+-E-+mu", "1-mu(E+-E-)", "v2", "v1", "E++E-", "X"]))
}

/// Frame commutator table `(i, j, k, value)` for `[e_i, e_j] = value e_k`,
/// index 0 being the isotropy generator `e_0`.
pub fn frame_table(id: &CatalogId) -> Vec<(usize, usize, usize, f64)> {
    let Params { alpha, beta, gamma } = id.params;
    let (sa, sg) = (alpha.sqrt(), gamma.sqrt());
    let mut t = vec![(0, 2, 3, 1.0), (0, 3, 2, -1.0), (0, 4, 5, 2.0), (0, 5, 4, -2.0)];
    match id.family {
        Family::Vir24 | Family::VTilde24 => {
            let s = if id.family == Family::Vir24 { 1.0 } else { -1.0 };
            t.extend([
                (1, 2, 3, -2.0 / sa),
                (1, 3, 2, 2.0 / sa),
                (1, 4, 5, 1.0 / sa),
                (1, 5, 4, -1.0 / sa),
                (2, 3, 0, s / (5.0 * beta)),
                (2, 3, 1, -s * 2.0 * sa / (5.0 * beta)),
                (4, 5, 0, 2.0 / (5.0 * gamma)),
                (4, 5, 1, sa / (5.0 * gamma)),
            ]);
        }
        Family::Wir => {
            let mu = id.mu.unwrap_or(0.0);
            let q = 2.0 / (gamma * (mu * mu + 1.0));
            t.extend([
                (1, 2, 3, -mu / sa),
                (1, 3, 2, mu / sa),
                (1, 4, 5, -2.0 * mu / sa),
                (1, 5, 4, 2.0 * mu / sa),
                (2, 4, 3, -1.0 / sg),
                (2, 5, 2, 1.0 / sg),
                (3, 4, 2, -1.0 / sg),
                (3, 5, 3, -1.0 / sg),
                (4, 5, 1, q * mu * sa),
                (4, 5, 0, -q),
            ]);
        }
    }
    t
}

/// The reductive space for a catalog entry, cross-checked against its
/// frame table.
pub fn make_space(id: &CatalogId) -> Result<ReductiveSpace> {
    let algebra = match id.family {
        Family::Vir24 => twisted_stiefel_algebra(false)?,
        Family::VTilde24 => twisted_stiefel_algebra(true)?,
        Family::Wir => {
            let mu = id
                .mu
                .ok_or_else(|| Error::InvalidInput("wir needs an embedding parameter mu".into()))?;
            wir_algebra(mu)?
        }
    };
    let mut h = DVector::zeros(6);
    h[0] = 1.0;
    let Params { alpha, beta, gamma } = id.params;
    let space = ReductiveSpace::build(
        algebra,
        vec![h],
        vec![vec![1], vec![2, 3], vec![4, 5]],
        vec![alpha, beta, gamma],
        crate::algebra::DEFAULT_TOL,
    )?;
    let table = LieAlgebra::from_triplets(space.adapted().labels().to_vec(), &frame_table(id))?;
    let diff = table
        .constants()
        .iter()
        .zip(space.adapted().constants())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let scale = table.constants().iter().fold(1.0, |m: f64, v| m.max(v.abs()));
    if diff > TABLE_TOL * scale {
        return Err(Error::invariant(
            format!("{} frame brackets disagree with the commutator table", id.family),
            diff,
            TABLE_TOL * scale,
        ));
    }
    Ok(space)
}
