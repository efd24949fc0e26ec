use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use so3ir_core::catalog::{make_space, so3ir_bases, wir_admissible_mu, CatalogId};
use so3ir_core::connection::{characteristic_connection, exterior_derivative};
use so3ir_core::gstructure::{
    contact_characteristic_torsion, invariant_almost_contact, nearly_integrable_defect, nijenhuis, sasaki_defect,
    standard_upsilon, upsilon_from_subalgebra,
};
use so3ir_core::linalg::elementary;
use so3ir_core::{AltForm, Error, FrameTensor, ReductiveSpace, SymTensor3, Upsilon};

const TOL: f64 = 1e-9;
const SQRT3: f64 = 1.732_050_807_568_877_2;

fn vir(a: f64, b: f64, g: f64) -> ReductiveSpace {
    make_space(&CatalogId::vir24(a, b, g).unwrap()).unwrap()
}

fn random_vectors(n: usize, seed: u64) -> Vec<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| DVector::from_iterator(5, (0..5).map(|_| rng.gen_range(-2.0..2.0))))
        .collect()
}

fn check_axioms(u: &Upsilon, tol: f64) {
    let t = u.tensor();
    for (i, j, k) in [(0, 1, 2), (1, 3, 4), (4, 4, 0)] {
        let v = t.get(i, j, k);
        for p in [(i, k, j), (j, i, k), (j, k, i), (k, i, j), (k, j, i)] {
            assert_eq!(t.get(p.0, p.1, p.2), v);
        }
    }
    assert!(u.trace_residual() < tol);
    let vs = random_vectors(100, 7);
    let scale = vs.iter().map(|v| v.norm_squared() * v.norm()).fold(1.0, f64::max);
    assert!(u.reconstruction_residual(&vs) < tol * scale);
}

#[test]
fn upsilon_axioms_and_polynomial() {
    let u = standard_upsilon();
    check_axioms(&u, 1e-12);
    for v in random_vectors(20, 3) {
        let x = |i: usize| v[i];
        let poly = x(0).powi(3)
            + 1.5 * x(0) * (x(1).powi(2) + x(2).powi(2) - 2.0 * x(3).powi(2) - 2.0 * x(4).powi(2))
            + 1.5 * SQRT3 * (x(1).powi(2) - x(2).powi(2)) * x(4)
            - 3.0 * SQRT3 * x(1) * x(2) * x(3);
        assert!((u.cubic(&v) - poly).abs() < 1e-12 * (1.0 + poly.abs()));
    }
}

#[test]
fn upsilon_from_subalgebras() {
    let b = so3ir_bases();
    let ux = upsilon_from_subalgebra(&b.x, TOL).unwrap();
    assert!((ux.tensor() - standard_upsilon().tensor()).max_abs() < 1e-10);
    let uy = upsilon_from_subalgebra(&b.y, TOL).unwrap();
    check_axioms(&uy, 1e-10);
    assert!(uy.invariance_residual(&b.y) < 1e-10);
    assert!((uy.tensor() - ux.tensor()).max_abs() > 0.1);
    assert!(matches!(
        upsilon_from_subalgebra(&b.st, TOL),
        Err(Error::NoUniqueInvariantCubic { .. })
    ));
    let not_closed = [elementary(5, 0, 1), elementary(5, 1, 2), elementary(5, 3, 4)];
    assert!(matches!(upsilon_from_subalgebra(&not_closed, TOL), Err(Error::InvalidInput(_))));
}

#[test]
fn nearly_integrable_examples() {
    let u = standard_upsilon();
    assert!(nearly_integrable_defect(&vir(5.0, 1.0, 1.0), &u, TOL).unwrap() < TOL);
    assert!(nearly_integrable_defect(&vir(1.0, 1.0, 1.0), &u, TOL).unwrap() > 0.01);
    let vt = make_space(&CatalogId::vtilde24(125.0, 5.0, 1.0).unwrap()).unwrap();
    assert!(nearly_integrable_defect(&vt, &u, TOL).unwrap() < TOL);
    let skewed = Upsilon(SymTensor3::polarize(5, &[([1, 1, 1], 1.0)]));
    assert!(matches!(
        nearly_integrable_defect(&vir(5.0, 1.0, 1.0), &skewed, TOL),
        Err(Error::NotInvariant { .. })
    ));
}

#[test]
fn nearly_integrable_iff_characteristic_connection() {
    let u = standard_upsilon();
    let x = so3ir_bases().x;
    // values in [0.2, 5] containing several rays through (5, 1, 1)
    let axis = [0.2, 0.25, 0.4, 0.5, 1.0, 1.25, 2.0, 2.5, 4.0, 5.0];
    let mut hits = 0;
    for &a in &axis {
        for &b in &axis {
            for &g in &axis {
                let id = CatalogId::vir24(a, b, g).unwrap();
                let s = make_space(&id).unwrap();
                let ni = nearly_integrable_defect(&s, &u, TOL).unwrap() < 1e-7;
                let on = id.constraint().abs() < 1e-7 * id.params.max_scale();
                assert_eq!(ni, on, "({a}, {b}, {g})");
                assert_eq!(ni, characteristic_connection(&s, &x, TOL).unwrap().exists());
                hits += usize::from(on);
            }
        }
    }
    assert!(hits > 0);
}

#[test]
fn vir_contact_structures() {
    let (a, b, g) = (2.0, 0.7, 1.1);
    let s = vir(a, b, g);
    let acs = invariant_almost_contact(&s, TOL).unwrap();
    assert_eq!(acs.len(), 2);
    let e23 = elementary(5, 1, 2);
    let e45 = elementary(5, 3, 4);
    assert!((&acs[0].phi - (&e45 - &e23)).amax() < 1e-12);
    assert!((&acs[1].phi - (-&e45 - &e23)).amax() < 1e-12);
    for c in &acs {
        assert!(c.structure_residual() < 1e-12 && c.compatibility_residual() < 1e-12);
        assert!(nijenhuis(&s, c, TOL).unwrap().zero);
        assert!(exterior_derivative(&s, &c.fundamental, TOL).unwrap().max_abs() < 1e-10);
    }
}

#[test]
fn contact_torsion_matches_characteristic_torsion() {
    let x = so3ir_bases().x;
    for (a, b, g) in [(5.0, 1.0, 1.0), (25.0 / 36.0, 1.0 / 6.0, 1.0 / 12.0), (25.0 / 3.0, 2.0, 1.0)] {
        let s = vir(a, b, g);
        let t = characteristic_connection(&s, &x, TOL).unwrap().solution.unwrap().torsion.to_form();
        for c in invariant_almost_contact(&s, TOL).unwrap() {
            let tc = contact_characteristic_torsion(&s, &c, TOL).unwrap().unwrap();
            let deta = exterior_derivative(&s, &c.eta, TOL).unwrap();
            assert!((&tc - &c.eta.wedge(&deta)).max_abs() < 1e-12);
            assert!((&tc - &t).max_abs() < TOL);
        }
    }
}

#[test]
fn sasaki_locus() {
    let bs: Vec<f64> = (1..=8).map(|i| i as f64 / 8.0).collect();
    let alphas: Vec<f64> = bs.iter().map(|b| 25.0 * b * b).collect();
    let gammas: Vec<f64> = bs.iter().map(|b| b / 2.0).collect();
    for &a in &alphas {
        for &b in &bs {
            for &g in &gammas {
                let s = vir(a, b, g);
                let acs = invariant_almost_contact(&s, TOL).unwrap();
                let plus = sasaki_defect(&s, &acs[0], TOL).unwrap();
                let minus = sasaki_defect(&s, &acs[1], TOL).unwrap();
                let on = (a - 25.0 * b * b).abs() < 1e-9 * a && (a - 100.0 * g * g).abs() < 1e-9 * a;
                assert_eq!(plus < TOL, on, "({a}, {b}, {g}) defect {plus}");
                assert!(minus > 0.1);
            }
        }
    }
    let s = vir(25.0 / 36.0, 1.0 / 6.0, 1.0 / 12.0);
    let acs = invariant_almost_contact(&s, TOL).unwrap();
    assert!(sasaki_defect(&s, &acs[0], TOL).unwrap() < TOL);
    assert!(nearly_integrable_defect(&s, &standard_upsilon(), TOL).unwrap() < TOL);
}

#[test]
fn wir_contact_structures() {
    let (a, g) = (30.0, 2.0);
    let (_, mu) = wir_admissible_mu(a, g).unwrap();
    let s = make_space(&CatalogId::wir(a, 0.6, g, mu).unwrap()).unwrap();
    let acs = invariant_almost_contact(&s, TOL).unwrap();
    assert_eq!(acs.len(), 2);
    assert!(!nijenhuis(&s, &acs[0], TOL).unwrap().totally_antisymmetric);
    assert!(contact_characteristic_torsion(&s, &acs[0], TOL).unwrap().is_none());
    assert!(nijenhuis(&s, &acs[1], TOL).unwrap().zero);
    let tm = contact_characteristic_torsion(&s, &acs[1], TOL).unwrap().unwrap();
    let c = 2.0 * SQRT3 / g.sqrt();
    let want = AltForm::from_components(5, 3, &[(&[0, 3, 4], -c)]);
    assert!((&tm - &want).max_abs() < TOL);
    let t = characteristic_connection(&s, &so3ir_bases().y, TOL).unwrap().solution.unwrap().torsion.to_form();
    let gap = AltForm::from_components(5, 3, &[(&[0, 1, 2], c)]);
    assert!((&(&tm - &t) - &gap).max_abs() < TOL);
}

#[test]
fn wir_upsilon_choice_matters() {
    let (_, mu) = wir_admissible_mu(12.0, 1.0).unwrap();
    let s = make_space(&CatalogId::wir(12.0, 1.0, 1.0, mu).unwrap()).unwrap();
    let b = so3ir_bases();
    let uy = upsilon_from_subalgebra(&b.y, TOL).unwrap();
    assert!(nearly_integrable_defect(&s, &uy, TOL).unwrap() < TOL);
    assert!(nearly_integrable_defect(&s, &standard_upsilon(), TOL).unwrap() > 1.0);
}
