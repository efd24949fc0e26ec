//! The analysis pipeline behind `so3ir analyze`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use so3ir_core::catalog::{make_space, so3ir_bases, wir_admissible_mu, CatalogId, Family};
use so3ir_core::connection::{
    characteristic_connection, containment_residual, covariant_derivative, exterior_derivative, holonomy_algebra,
    naturally_reductive_residual, torsion_divergence, EXISTENCE_TOL,
};
use so3ir_core::gstructure::{
    contact_characteristic_torsion, invariant_almost_contact, nearly_integrable_defect, nijenhuis, sasaki_defect,
    upsilon_from_subalgebra,
};
use so3ir_core::riemannian::{einstein_solve, levi_civita, ricci};
use so3ir_core::{AltForm, FrameTensor, ReductiveSpace, SpaceDefinition};

use crate::Result;

/// A computed quantity and the tolerance its flag was decided with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Measured {
    pub value: f64,
    pub tol: f64,
}

impl Measured {
    fn new(value: f64, tol: f64) -> Self {
        Measured { value, tol }
    }

    pub fn is_zero(&self) -> bool {
        self.value.abs() < self.tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    /// Frame indices, 1-based, e.g. `e123`.
    pub index: String,
    pub value: f64,
}

/// Nonzero components of a form; smaller ones are dropped at `tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terms {
    pub tol: f64,
    pub terms: Vec<Term>,
}

impl Terms {
    fn of(form: &AltForm, tol: f64) -> Self {
        let sep = if form.dim() > 9 { "," } else { "" };
        let terms = form
            .terms(tol)
            .into_iter()
            .map(|(idx, value)| Term {
                index: format!("e{}", idx.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(sep)),
                value,
            })
            .collect();
        Terms { tol, terms }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceInfo {
    /// Catalog family name, or the file the space was read from.
    pub source: String,
    pub family: Option<Family>,
    pub params: Option<[f64; 3]>,
    pub mu: Option<f64>,
    /// Both admissible embedding parameters of wir, larger first.
    pub mu_roots: Option<[f64; 2]>,
    pub dim: usize,
    pub algebra_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol: f64,
    pub existence: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicBlock {
    /// `x` or `y`: the so(3)_ir copy the connection takes values in.
    pub target: String,
    /// Value of the defining constraint of a catalog family.
    pub constraint: Option<f64>,
    pub exists: bool,
    pub residual: Measured,
    pub unique: Option<bool>,
    /// `max |Lambda|`.
    pub connection_max: Option<Measured>,
    pub torsion: Option<Terms>,
    pub parallel: Option<bool>,
    pub nabla_torsion_max: Option<Measured>,
    pub holonomy_dim: Option<usize>,
    /// Orthonormal holonomy basis, each element as a 2-form.
    pub holonomy_basis: Vec<Terms>,
    pub naturally_reductive: Option<bool>,
    pub naturally_reductive_residual: Option<Measured>,
    pub torsion_divergence: Option<Measured>,
    pub torsion_differential: Option<Terms>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EinsteinPoint {
    pub kappa: f64,
    pub beta: f64,
    pub gamma: f64,
    pub scalar: f64,
    pub branch: Option<String>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannianBlock {
    pub ricci_diagonal: Vec<f64>,
    pub ricci_off_diagonal: Measured,
    pub scalar: f64,
    pub holonomy_dim: usize,
    /// `max |Ric - (Scal / n) g|`.
    pub einstein_residual: Measured,
    pub einstein: bool,
    /// Einstein metrics of the family at this alpha; absent for file spaces.
    pub einstein_solutions: Option<Vec<EinsteinPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContactBlock {
    pub label: String,
    pub eta: Terms,
    pub fundamental: Terms,
    pub nijenhuis_max: Measured,
    pub normal: bool,
    pub nijenhuis_totally_antisymmetric: bool,
    pub sasaki_defect: Measured,
    pub fundamental_differential: Measured,
    /// Characteristic torsion of the contact structure, when it exists.
    pub contact_torsion: Option<Terms>,
    /// Contact torsion minus the characteristic torsion of the block above.
    pub difference: Option<Terms>,
    pub matches_characteristic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GStructureBlock {
    pub upsilon: String,
    pub nearly_integrable_defect: Measured,
    pub contact: Vec<ContactBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub space: SpaceInfo,
    pub tolerances: Tolerances,
    pub characteristic: Option<CharacteristicBlock>,
    pub riemannian: RiemannianBlock,
    pub g_structure: Option<GStructureBlock>,
}

pub fn to_value(r: &AnalysisReport) -> serde_json::Value {
    serde_json::to_value(r).expect("report serializes")
}

pub fn analyze_catalog(id: &CatalogId, tol: f64) -> Result<AnalysisReport> {
    let space = make_space(id)?;
    let p = id.params;
    let mu_roots = match id.family {
        Family::Wir => wir_admissible_mu(p.alpha, p.gamma).ok().map(|(a, b)| [a, b]),
        _ => None,
    };
    let info = SpaceInfo {
        source: id.family.name().to_string(),
        family: Some(id.family),
        params: Some([p.alpha, p.beta, p.gamma]),
        mu: id.mu,
        mu_roots,
        dim: space.dim(),
        algebra_labels: space.algebra().labels().to_vec(),
    };
    let target = match id.family {
        Family::Wir => "y",
        _ => "x",
    };
    let solutions = einstein_solve(id.family, p.alpha, id.mu, tol)?
        .solutions
        .into_iter()
        .map(|s| EinsteinPoint {
            kappa: s.kappa,
            beta: s.beta,
            gamma: s.gamma,
            scalar: s.scalar(),
            branch: s.branch.map(|(b, g)| format!("{}{}", sign(b), sign(g))),
            residual: s.residual,
        })
        .collect();
    assemble(&space, info, Some((target, id.structure_subalgebra())), Some(id.constraint()), Some(solutions), tol)
}

fn sign(b: so3ir_core::riemannian::Branch) -> &'static str {
    match b {
        so3ir_core::riemannian::Branch::Plus => "+",
        so3ir_core::riemannian::Branch::Minus => "-",
    }
}

/// Analyze a space read from a file. Both so(3)_ir copies contain the
/// standard isotropy line; the copy is the first one carrying a
/// characteristic connection, else the first containing the isotropy.
/// Without either the G-structure blocks are absent.
pub fn analyze_definition(def: &SpaceDefinition, source: &str, tol: f64) -> Result<AnalysisReport> {
    let space = def.build(tol)?;
    let info = SpaceInfo {
        source: source.to_string(),
        family: None,
        params: None,
        mu: None,
        mu_roots: None,
        dim: space.dim(),
        algebra_labels: def.labels.clone(),
    };
    let mut target = None;
    if space.dim() == 5 {
        let b = so3ir_bases();
        let candidates: Vec<_> = [("x", b.x), ("y", b.y)]
            .into_iter()
            .filter(|(_, t)| containment_residual(space.isotropy(), t) < tol)
            .collect();
        for (name, t) in &candidates {
            if characteristic_connection(&space, t, tol)?.exists() {
                target = Some((*name, t.clone()));
                break;
            }
        }
        target = target.or_else(|| candidates.into_iter().next());
    }
    assemble(&space, info, target, None, None, tol)
}

fn assemble(
    space: &ReductiveSpace,
    info: SpaceInfo,
    target: Option<(&str, [DMatrix<f64>; 3])>,
    constraint: Option<f64>,
    einstein_solutions: Option<Vec<EinsteinPoint>>,
    tol: f64,
) -> Result<AnalysisReport> {
    let lc = levi_civita(space)?;
    let ric = ricci(space)?;
    let n = space.dim() as f64;
    let kappa = ric.scalar() / n;
    let einstein_residual = Measured::new(ric.einstein_residual(kappa), tol * kappa.abs().max(1.0));
    let riemannian = RiemannianBlock {
        ricci_diagonal: ric.diagonal(),
        ricci_off_diagonal: Measured::new(ric.off_diagonal(), tol),
        scalar: ric.scalar(),
        holonomy_dim: holonomy_algebra(space, &lc).len(),
        einstein: einstein_residual.is_zero(),
        einstein_residual,
        einstein_solutions,
    };

    let mut characteristic = None;
    let mut g_structure = None;
    if let Some((name, sub)) = target {
        let search = characteristic_connection(space, &sub, tol)?;
        let mut block = CharacteristicBlock {
            target: name.to_string(),
            constraint,
            exists: search.exists(),
            residual: Measured::new(search.residual, EXISTENCE_TOL),
            unique: None,
            connection_max: None,
            torsion: None,
            parallel: None,
            nabla_torsion_max: None,
            holonomy_dim: None,
            holonomy_basis: Vec::new(),
            naturally_reductive: None,
            naturally_reductive_residual: None,
            torsion_divergence: None,
            torsion_differential: None,
        };
        let mut char_torsion = None;
        if let Some(c) = &search.solution {
            let t = c.torsion.to_form();
            let nabla = covariant_derivative(space, &c.map, &t, Some(tol))?;
            let nabla_max = Measured::new(nabla.iter().map(|d| d.max_abs()).fold(0.0, f64::max), tol);
            let hol = holonomy_algebra(space, &c.map);
            let nr = Measured::new(naturally_reductive_residual(space, &c.torsion), tol);
            block.unique = Some(c.unique);
            block.connection_max = Some(Measured::new(c.map.max_abs(), tol));
            block.torsion = Some(Terms::of(&t, tol));
            block.parallel = Some(nabla_max.is_zero());
            block.nabla_torsion_max = Some(nabla_max);
            block.holonomy_dim = Some(hol.len());
            block.holonomy_basis = hol.iter().map(|h| Terms::of(&AltForm::from_skew_matrix(h), tol)).collect();
            block.naturally_reductive = Some(nr.is_zero());
            block.naturally_reductive_residual = Some(nr);
            block.torsion_divergence = Some(Measured::new(torsion_divergence(space, &lc, &t).max_abs(), tol));
            block.torsion_differential = Some(Terms::of(&exterior_derivative(space, &t, tol)?, tol));
            char_torsion = Some(t);
        }
        characteristic = Some(block);

        let upsilon = upsilon_from_subalgebra(&sub, tol)?;
        let defect = Measured::new(nearly_integrable_defect(space, &upsilon, tol)?, tol);
        let structures = match invariant_almost_contact(space, tol) {
            Ok(s) => s,
            Err(e) if e.is_input_error() => Vec::new(),
            Err(e) => return Err(e.into()),
        };
        let contact = structures
            .iter()
            .map(|acs| {
                let nij = nijenhuis(space, acs, tol)?;
                let tc = contact_characteristic_torsion(space, acs, tol)?;
                let difference = match (&tc, &char_torsion) {
                    (Some(a), Some(b)) => Some(a - b),
                    _ => None,
                };
                Ok(ContactBlock {
                    label: acs.label.clone(),
                    eta: Terms::of(&acs.eta, tol),
                    fundamental: Terms::of(&acs.fundamental, tol),
                    nijenhuis_max: Measured::new(nij.max_abs, tol),
                    normal: nij.zero,
                    nijenhuis_totally_antisymmetric: nij.totally_antisymmetric,
                    sasaki_defect: Measured::new(sasaki_defect(space, acs, tol)?, tol),
                    fundamental_differential: Measured::new(
                        exterior_derivative(space, &acs.fundamental, tol)?.max_abs(),
                        tol,
                    ),
                    contact_torsion: tc.as_ref().map(|f| Terms::of(f, tol)),
                    matches_characteristic: difference.as_ref().map(|d| d.max_abs() < tol),
                    difference: difference.as_ref().map(|d| Terms::of(d, tol)),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        g_structure = Some(GStructureBlock {
            upsilon: name.to_string(),
            nearly_integrable_defect: defect,
            contact,
        });
    }

    Ok(AnalysisReport {
        space: info,
        tolerances: Tolerances {
            tol,
            existence: EXISTENCE_TOL,
        },
        characteristic,
        riemannian,
        g_structure,
    })
}
