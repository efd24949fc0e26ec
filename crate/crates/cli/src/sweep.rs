//! Parameter sweeps over a catalog family.

use rayon::prelude::*;
use so3ir_core::catalog::{make_space, so3ir_bases, CatalogId, Family};
use so3ir_core::connection::characteristic_connection;
use so3ir_core::gstructure::{invariant_almost_contact, sasaki_defect};
use so3ir_core::riemannian::ricci;

use crate::render::{Cell, Table};
use crate::{catalog_id, parse_mu, CliError, MuChoice, Query, Result, SweepArgs};

pub const MAX_POINTS: usize = 1_000_000;

/// `lo:hi:n`, `n` evenly spaced values including both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn parse(s: &str) -> Result<Axis> {
        let bad = |why: &str| CliError::Input(format!("grid axis '{s}': {why}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(bad("expected lo:hi:n"));
        };
        let num = |p: &str| p.trim().parse::<f64>().ok().filter(|v| v.is_finite());
        let (Some(lo), Some(hi)) = (num(lo), num(hi)) else {
            return Err(bad("bounds must be finite numbers"));
        };
        let n: usize = n.trim().parse().map_err(|_| bad("n must be a non-negative integer"))?;
        if lo > hi {
            return Err(bad("lo exceeds hi"));
        }
        Ok(Axis { lo, hi, n })
    }

    pub fn values(&self) -> Vec<f64> {
        match self.n {
            0 => Vec::new(),
            1 => vec![self.lo],
            n => (0..n)
                .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

pub fn grid_points(axes: [Axis; 3]) -> Result<Vec<[f64; 3]>> {
    let count = axes
        .iter()
        .try_fold(1usize, |acc, a| acc.checked_mul(a.n))
        .filter(|&c| c <= MAX_POINTS)
        .ok_or_else(|| CliError::Input(format!("grid has more than {MAX_POINTS} points")))?;
    let [a, b, g] = axes.map(|x| x.values());
    let mut out = Vec::with_capacity(count);
    for &x in &a {
        for &y in &b {
            for &z in &g {
                out.push([x, y, z]);
            }
        }
    }
    Ok(out)
}

fn header(family: Family, query: Query) -> Vec<String> {
    let mut h = vec!["alpha", "beta", "gamma"];
    if family == Family::Wir {
        h.push("mu");
    }
    h.extend(match query {
        Query::Existence => ["constraint", "residual", "exists"].as_slice(),
        Query::Sasaki => ["sasaki_plus", "sasaki_minus", "sasaki"].as_slice(),
        Query::Einstein => ["scalar", "einstein_residual", "einstein"].as_slice(),
    });
    h.into_iter().map(String::from).collect()
}

fn row(family: Family, query: Query, p: [f64; 3], mu: Option<MuChoice>, tol: f64) -> Result<Vec<Cell>> {
    let mut cells: Vec<Cell> = p.iter().map(|&x| Cell::Num(x)).collect();
    let id = match catalog_id(family, p, mu) {
        Ok(id) => id,
        // no admissible embedding at this point
        Err(CliError::Core(so3ir_core::Error::NoAdmissibleEmbedding { .. })) => {
            cells.extend(std::iter::repeat_n(Cell::Empty, 4));
            return Ok(cells);
        }
        Err(e) => return Err(e),
    };
    if let Some(m) = id.mu {
        cells.push(Cell::Num(m));
    }
    let space = make_space(&id)?;
    match query {
        Query::Existence => {
            let sub = structure(&id);
            let search = characteristic_connection(&space, &sub, tol)?;
            cells.extend([Cell::Num(id.constraint()), Cell::Num(search.residual), Cell::Bool(search.exists())]);
        }
        Query::Sasaki => {
            let acs = invariant_almost_contact(&space, tol)?;
            let d: Vec<f64> = acs.iter().map(|c| sasaki_defect(&space, c, tol)).collect::<std::result::Result<_, _>>()?;
            let (plus, minus) = (d.first().copied(), d.get(1).copied());
            cells.push(plus.map_or(Cell::Empty, Cell::Num));
            cells.push(minus.map_or(Cell::Empty, Cell::Num));
            cells.push(Cell::Bool(d.iter().any(|x| *x < tol)));
        }
        Query::Einstein => {
            let ric = ricci(&space)?;
            let kappa = ric.scalar() / space.dim() as f64;
            let res = ric.einstein_residual(kappa);
            cells.extend([
                Cell::Num(ric.scalar()),
                Cell::Num(res),
                Cell::Bool(res < tol * kappa.abs().max(1.0)),
            ]);
        }
    }
    Ok(cells)
}

fn structure(id: &CatalogId) -> [nalgebra::DMatrix<f64>; 3] {
    match id.family {
        Family::Wir => so3ir_bases().y,
        _ => so3ir_bases().x,
    }
}

/// Evaluate the query at every grid point. Rows come out in grid order
/// (alpha slowest, gamma fastest) regardless of thread count.
pub fn sweep(family: Family, query: Query, axes: [Axis; 3], mu: Option<MuChoice>, tol: f64) -> Result<Table> {
    let mu = match (family, mu) {
        (Family::Wir, None) => Some(MuChoice::Auto),
        (_, m) => m,
    };
    let points = grid_points(axes)?;
    let rows = points
        .par_iter()
        .map(|&p| row(family, query, p, mu, tol))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        header: header(family, query),
        rows,
    })
}

pub fn run(args: &SweepArgs, tol: f64) -> Result<Table> {
    let family: Family = args.space.parse()?;
    let axis = |explicit: &Option<String>, name: &str| -> Result<Axis> {
        match (explicit, &args.grid) {
            (Some(s), _) | (None, Some(s)) => Axis::parse(s),
            (None, None) => Err(CliError::Input(format!("no range for {name}: give --grid or --{name}"))),
        }
    };
    let axes = [axis(&args.alpha, "alpha")?, axis(&args.beta, "beta")?, axis(&args.gamma, "gamma")?];
    let mu = args.mu.as_deref().map(parse_mu).transpose()?;
    sweep(family, args.query, axes, mu, tol)
}
