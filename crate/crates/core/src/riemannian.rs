//! Levi-Civita connection, Ricci curvature and Einstein metrics in the
//! block-diagonal families.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::ReductiveSpace;
use crate::catalog::{make_space, CatalogId, Family, Params};
use crate::connection::{curvature, torsion, ConnectionMap};
use crate::error::{Error, Result};
use crate::linalg::{self, least_squares, RANK_CUTOFF};

/// Required agreement of the two Levi-Civita constructions.
pub const LC_CROSS_CHECK_TOL: f64 = 1e-10;

/// `Lambda(x)_{zy} = 1/2 g([x, y]_m, z) + 1/2 (g([z, x]_m, y) + g([z, y]_m, x))`.
pub fn levi_civita_koszul(space: &ReductiveSpace) -> ConnectionMap {
    let n = space.dim();
    let maps = (0..n)
        .map(|x| {
            DMatrix::from_fn(n, n, |z, y| {
                0.5 * space.bm(x, y, z) + 0.5 * (space.bm(z, x, y) + space.bm(z, y, x))
            })
        })
        .collect();
    ConnectionMap::from_matrices(maps).expect("square maps")
}

/// The unique skew `Lambda` with vanishing torsion, by a linear solve.
pub fn levi_civita_solve(space: &ReductiveSpace) -> ConnectionMap {
    let n = space.dim();
    let basis = linalg::so_basis(n);
    let nb = basis.len();
    let mut a = DMatrix::zeros(n * n * n, n * nb);
    let mut b = DVector::zeros(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let row = (i * n + j) * n + k;
                for (t, e) in basis.iter().enumerate() {
                    a[(row, i * nb + t)] += e[(k, j)];
                    a[(row, j * nb + t)] -= e[(k, i)];
                }
                b[row] = space.bm(i, j, k);
            }
        }
    }
    let ls = least_squares(&a, &b, RANK_CUTOFF);
    let maps = (0..n)
        .map(|x| {
            let mut m = DMatrix::zeros(n, n);
            for (t, e) in basis.iter().enumerate() {
                m += e * ls.solution[x * nb + t];
            }
            m
        })
        .collect();
    ConnectionMap::from_matrices(maps).expect("square maps")
}

/// Levi-Civita map, built both ways and cross-checked.
pub fn levi_civita(space: &ReductiveSpace) -> Result<ConnectionMap> {
    let koszul = levi_civita_koszul(space);
    let solved = levi_civita_solve(space);
    let scale = 1.0 + koszul.max_abs();
    let diff = koszul.max_difference(&solved);
    if diff > LC_CROSS_CHECK_TOL * scale {
        return Err(Error::invariant(
            "Levi-Civita constructions disagree",
            diff,
            LC_CROSS_CHECK_TOL * scale,
        ));
    }
    let t = torsion(space, &koszul).max_abs();
    if t > LC_CROSS_CHECK_TOL * scale {
        return Err(Error::invariant("Levi-Civita map has torsion", t, LC_CROSS_CHECK_TOL * scale));
    }
    Ok(koszul)
}

/// Ricci tensor of the Levi-Civita connection in the frame.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ricci {
    #[serde(skip)]
    pub matrix: DMatrix<f64>,
}

impl Ricci {
    pub fn diagonal(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().copied().collect()
    }

    pub fn scalar(&self) -> f64 {
        self.matrix.trace()
    }

    pub fn symmetry_residual(&self) -> f64 {
        (&self.matrix - self.matrix.transpose()).amax()
    }

    pub fn off_diagonal(&self) -> f64 {
        let n = self.matrix.nrows();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.matrix[(i, j)].abs());
                }
            }
        }
        worst
    }

    /// `max |Ric - kappa g|`.
    pub fn einstein_residual(&self, kappa: f64) -> f64 {
        let n = self.matrix.nrows();
        (&self.matrix - DMatrix::identity(n, n) * kappa).amax()
    }
}

pub fn ricci(space: &ReductiveSpace) -> Result<Ricci> {
    let lc = levi_civita(space)?;
    Ok(Ricci {
        matrix: curvature(space, &lc).ricci(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EinsteinSolution {
    pub kappa: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Branches of the closed-form roots for beta and gamma; absent for the
    /// generic solver.
    pub branch: Option<(Branch, Branch)>,
    /// `max |Ric - kappa g|` at the solution.
    pub residual: f64,
}

impl EinsteinSolution {
    pub fn scalar(&self) -> f64 {
        5.0 * self.kappa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EinsteinMethod {
    ClosedForm,
    Generic,
}

#[derive(Debug, Clone, Serialize)]
pub struct EinsteinOutcome {
    pub method: EinsteinMethod,
    pub solutions: Vec<EinsteinSolution>,
}

/// Number of sign-change samples of the branch residual.
const KAPPA_SAMPLES: usize = 10_000;

/// V^ir closed-form roots `beta = (5 +- sqrt(25 - 8 alpha kappa)) / (10 kappa)`
/// and `gamma = (5 +- sqrt(25 - 2 alpha kappa)) / (10 kappa)`.
fn vir_branch_roots(alpha: f64, kappa: f64, bb: Branch, gb: Branch) -> Option<(f64, f64)> {
    let db = 25.0 - 8.0 * alpha * kappa;
    let dg = 25.0 - 2.0 * alpha * kappa;
    if db < 0.0 || dg < 0.0 {
        return None;
    }
    Some((
        (5.0 + bb.sign() * db.sqrt()) / (10.0 * kappa),
        (5.0 + gb.sign() * dg.sqrt()) / (10.0 * kappa),
    ))
}

/// Residual of `Ric(e_1, e_1) = kappa` along a branch.
fn vir_branch_residual(alpha: f64, kappa: f64, bb: Branch, gb: Branch) -> Option<f64> {
    let (beta, gamma) = vir_branch_roots(alpha, kappa, bb, gb)?;
    if beta <= 0.0 || gamma <= 0.0 {
        return None;
    }
    Some(2.0 * alpha / (25.0 * beta * beta) + alpha / (50.0 * gamma * gamma) - kappa)
}

fn refine_root(f: impl Fn(f64) -> Option<f64>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut flo = f(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Some(mid);
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi {
            break;
        }
    }
    // Newton polish with a central-difference slope
    let mut x = 0.5 * (lo + hi);
    for _ in 0..50 {
        let fx = f(x)?;
        let h = 1e-7 * x.max(1e-12);
        let slope = (f(x + h)? - f(x - h)?) / (2.0 * h);
        if slope == 0.0 {
            break;
        }
        let step = fx / slope;
        let next = x - step;
        if next <= 0.0 || next.is_nan() || (next - x).abs() > (hi - lo).max(1e-9) * 10.0 {
            break;
        }
        x = next;
        if step.abs() < 1e-12 * x {
            break;
        }
    }
    Some(x)
}

fn vir_closed_form(alpha: f64, tol: f64) -> Result<Vec<EinsteinSolution>> {
    let kmax = 25.0 / (8.0 * alpha);
    let kmin = 1e-6 / alpha;
    let mut out = Vec::new();
    for bb in [Branch::Plus, Branch::Minus] {
        for gb in [Branch::Plus, Branch::Minus] {
            let f = |k: f64| vir_branch_residual(alpha, k, bb, gb);
            let grid: Vec<f64> = (0..KAPPA_SAMPLES)
                .map(|s| kmin + (kmax - kmin) * s as f64 / (KAPPA_SAMPLES - 1) as f64)
                .collect();
            let mut prev: Option<(f64, f64)> = None;
            for &k in &grid {
                let Some(fk) = f(k) else {
                    prev = None;
                    continue;
                };
                if let Some((kp, fp)) = prev {
                    let crosses = (fp < 0.0) != (fk < 0.0) || fk == 0.0;
                    if crosses {
                        if let Some(root) = refine_root(f, kp, k) {
                            if let Some(sol) = validate_vir(alpha, root, bb, gb, tol)? {
                                out.push(sol);
                            }
                        }
                    }
                }
                prev = Some((k, fk));
            }
        }
    }
    out.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
    out.dedup_by(|a, b| (a.kappa - b.kappa).abs() < 1e-9 * b.kappa && a.branch == b.branch);
    Ok(out)
}

fn validate_vir(alpha: f64, kappa: f64, bb: Branch, gb: Branch, tol: f64) -> Result<Option<EinsteinSolution>> {
    let Some((beta, gamma)) = vir_branch_roots(alpha, kappa, bb, gb) else {
        return Ok(None);
    };
    let space = make_space(&CatalogId::vir24(alpha, beta, gamma)?)?;
    let ric = ricci(&space)?;
    let residual = ric.einstein_residual(kappa);
    if residual >= tol * (1.0 + kappa.abs()) {
        return Ok(None);
    }
    Ok(Some(EinsteinSolution {
        kappa,
        alpha,
        beta,
        gamma,
        branch: Some((bb, gb)),
        residual,
    }))
}

/// Einstein metrics in a catalog family at fixed `alpha` (and `mu` for
/// W^ir). V^ir reduces to one scalar equation per branch; the other
/// families use a multistart Gauss-Newton solve on `(beta, gamma, kappa)`.
pub fn einstein_solve(family: Family, alpha: f64, mu: Option<f64>, tol: f64) -> Result<EinsteinOutcome> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    match family {
        Family::Vir24 => Ok(EinsteinOutcome {
            method: EinsteinMethod::ClosedForm,
            solutions: vir_closed_form(alpha, tol)?,
        }),
        Family::VTilde24 | Family::Wir => Ok(EinsteinOutcome {
            method: EinsteinMethod::Generic,
            solutions: generic_solve(family, alpha, mu.unwrap_or(1.0), tol)?,
        }),
    }
}

const MULTISTARTS: usize = 48;
const GENERIC_SEED: u64 = 0x5eed;

fn family_id(family: Family, params: Params, mu: f64) -> Result<CatalogId> {
    match family {
        Family::Vir24 => CatalogId::vir24(params.alpha, params.beta, params.gamma),
        Family::VTilde24 => CatalogId::vtilde24(params.alpha, params.beta, params.gamma),
        Family::Wir => CatalogId::wir(params.alpha, params.beta, params.gamma, mu),
    }
}

/// Residual vector `Ric - kappa g` (upper triangle) relative to `max |Ric|`,
/// in log-coordinates for beta and gamma.
fn generic_residual(family: Family, alpha: f64, mu: f64, x: &DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let params = Params::new(alpha, x[0].exp(), x[1].exp())?;
    let space = make_space(&family_id(family, params, mu)?)?;
    let m = &curvature(&space, &levi_civita_koszul(&space)).ricci();
    let n = m.nrows();
    let scale = m.amax().max(f64::MIN_POSITIVE);
    let mut r = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let target = if i == j { x[2] } else { 0.0 };
            r.push((m[(i, j)] - target) / scale);
        }
    }
    Ok((DVector::from_vec(r), scale))
}

/// One damped Gauss-Newton run from `(ln beta, ln gamma)`; returns
/// `(beta, gamma, kappa)` when it converges.
fn generic_run(family: Family, alpha: f64, mu: f64, start: (f64, f64), tol: f64) -> Result<Option<(f64, f64, f64)>> {
    let mut x = DVector::from_vec(vec![alpha.ln() + start.0, alpha.ln() + start.1, 0.0]);
    // start kappa at the mean diagonal Ricci value
    {
        let params = Params::new(alpha, x[0].exp(), x[1].exp())?;
        let ric = ricci(&make_space(&family_id(family, params, mu)?)?)?;
        x[2] = ric.scalar() / 5.0;
    }
    let mut lambda = 1e-3;
    let (mut r, _) = generic_residual(family, alpha, mu, &x)?;
    for _ in 0..60 {
        let mut jac = DMatrix::zeros(r.len(), 3);
        for p in 0..3 {
            let h = 1e-6 * (1.0 + x[p].abs());
            let mut xp = x.clone();
            xp[p] += h;
            let (rp, _) = generic_residual(family, alpha, mu, &xp)?;
            jac.set_column(p, &((rp - &r) / h));
        }
        let jt = jac.transpose();
        let lhs = &jt * &jac + DMatrix::identity(3, 3) * lambda;
        let Some(step) = lhs.lu().solve(&(-&jt * &r)) else {
            break;
        };
        let cand = &x + &step;
        if cand[0].abs() > alpha.ln().abs() + 12.0 || cand[1].abs() > alpha.ln().abs() + 12.0 {
            break;
        }
        let (rc, _) = generic_residual(family, alpha, mu, &cand)?;
        if rc.norm() < r.norm() {
            x = cand;
            r = rc;
            lambda = (lambda * 0.3).max(1e-12);
            if step.norm() < 1e-14 {
                break;
            }
        } else {
            lambda *= 10.0;
            if lambda > 1e8 {
                break;
            }
        }
    }
    Ok((r.amax() < tol).then(|| (x[0].exp(), x[1].exp(), x[2])))
}

fn generic_solve(family: Family, alpha: f64, mu: f64, tol: f64) -> Result<Vec<EinsteinSolution>> {
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_SEED);
    let starts: Vec<(f64, f64)> = (0..MULTISTARTS)
        .map(|_| (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)))
        .collect();
    let runs = starts
        .par_iter()
        .map(|&s| generic_run(family, alpha, mu, s, tol))
        .collect::<Result<Vec<_>>>()?;
    let mut found: Vec<EinsteinSolution> = Vec::new();
    for (beta, gamma, kappa) in runs.into_iter().flatten() {
        if found.iter().any(|s| (s.kappa - kappa).abs() < 1e-6 * (1.0 + kappa.abs())) {
            continue;
        }
        let ric = ricci(&make_space(&family_id(family, Params::new(alpha, beta, gamma)?, mu)?)?)?;
        found.push(EinsteinSolution {
            kappa,
            alpha,
            beta,
            gamma,
            branch: None,
            residual: ric.einstein_residual(kappa),
        });
    }
    found.sort_by(|a, b| a.kappa.total_cmp(&b.kappa));
    Ok(found)
}
