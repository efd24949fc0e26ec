use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use so3ir_core::algebra::{commutant_dimension, so3_algebra};
use so3ir_core::catalog::{make_space, so3_standard, so3ir_bases, su3_isotropy, wir_admissible_mu, CatalogId};
use so3ir_core::linalg::{commutator, elementary};
use so3ir_core::{invariant_forms, AltForm, Error, FrameTensor, LieAlgebra, ReductiveSpace};

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn unit(n: usize, i: usize) -> DVector<f64> {
    let mut v = DVector::zeros(n);
    v[i] = 1.0;
    v
}

fn close(a: &DVector<f64>, b: &DVector<f64>, tol: f64) -> bool {
    (a - b).amax() < tol
}

fn e(i: usize, j: usize) -> DMatrix<f64> {
    elementary(5, i - 1, j - 1)
}

#[test]
fn vir_frame_brackets() {
    for (a, b, g) in [(5.0, 1.0, 1.0), (2.0, 0.3, 4.0)] {
        let s = make_space(&CatalogId::vir24(a, b, g).unwrap()).unwrap();
        let ad = s.adapted();
        assert!(close(&ad.basis_bracket(0, 4), &(unit(6, 5) * 2.0), 1e-12));
        assert!(close(&ad.basis_bracket(1, 4), &(unit(6, 5) / a.sqrt()), 1e-12));
    }
    let s = make_space(&CatalogId::vir24(5.0, 1.0, 1.0).unwrap()).unwrap();
    let want = unit(6, 0) / 5.0 - unit(6, 1) * (2.0 * 5f64.sqrt() / 5.0);
    assert!(close(&s.adapted().basis_bracket(2, 3), &want, 1e-12));
    let x = DVector::from_vec(vec![0.3, -1.0, 2.0, 0.5, 0.0, 1.5]);
    assert!(s.adapted().bracket(&x, &x).unwrap().amax() < 1e-15);
}

#[test]
fn wir_e4_e5_bracket() {
    let (a, b, g, mu) = (3.0, 2.0, 0.7, 0.8);
    let s = make_space(&CatalogId::wir(a, b, g, mu).unwrap()).unwrap();
    let q = 2.0 / (g * (mu * mu + 1.0));
    let want = (unit(6, 1) * (mu * a.sqrt()) - unit(6, 0)) * q;
    assert!(close(&s.adapted().basis_bracket(4, 5), &want, 1e-12));
}

#[test]
fn vtilde_flips_m1_signs() {
    let v = make_space(&CatalogId::vir24(2.0, 0.5, 1.5).unwrap()).unwrap();
    let w = make_space(&CatalogId::vtilde24(2.0, 0.5, 1.5).unwrap()).unwrap();
    let bv = v.adapted().basis_bracket(2, 3);
    let bw = w.adapted().basis_bracket(2, 3);
    assert!(close(&bv, &-bw, 1e-12));
    assert!(close(&v.adapted().basis_bracket(4, 5), &w.adapted().basis_bracket(4, 5), 1e-12));
}

#[test]
fn jacobi_on_catalog_and_perturbation() {
    for id in [
        CatalogId::vir24(1.0, 2.0, 3.0).unwrap(),
        CatalogId::vtilde24(1.0, 2.0, 3.0).unwrap(),
        CatalogId::wir(20.0, 2.0, 1.0, 0.4).unwrap(),
    ] {
        let s = make_space(&id).unwrap();
        assert!(s.algebra().jacobi_residual() < 1e-12);
        assert!(s.adapted().jacobi_residual() < 1e-12);
    }
    let so3 = so3_algebra(["s1", "s2", "s3"]);
    let mut c = so3.constants().to_vec();
    c[2] += 0.1;
    let bad = LieAlgebra::from_raw(so3.labels().to_vec(), c).unwrap();
    assert!(bad.jacobi_residual() > 0.05);
}

#[test]
fn isotropy_is_x3() {
    let x3 = &e(2, 3) + &(e(4, 5) * 2.0);
    for s in [
        make_space(&CatalogId::vir24(1.0, 1.0, 1.0).unwrap()).unwrap(),
        make_space(&CatalogId::wir(12.0, 1.0, 1.0, 1.0).unwrap()).unwrap(),
        make_space(&CatalogId::wir(12.0, 1.0, 1.0, -3.0).unwrap()).unwrap(),
    ] {
        assert!((&s.isotropy()[0] - &x3).amax() < 1e-12);
    }
}

#[test]
fn reductivity_violation_is_reported() {
    // h = <a1> with a complement containing b3 - 2 a3 + a1, which ad(a1) does not preserve
    let z = DMatrix::zeros(3, 3);
    let blk = |a: &DMatrix<f64>, b: &DMatrix<f64>| {
        let mut out = DMatrix::zeros(6, 6);
        out.view_mut((0, 0), (3, 3)).copy_from(a);
        out.view_mut((3, 3), (3, 3)).copy_from(b);
        out
    };
    let s = so3_standard();
    let (a1, a2, a3) = (blk(&s[0], &z), blk(&s[1], &z), blk(&s[2], &z));
    let (b1, b2, b3) = (blk(&z, &s[0]), blk(&z, &s[1]), blk(&z, &s[2]));
    let mats = vec![
        a1.clone(),
        &a3 + &(&b3 * 2.0),
        &(&b3 - &(&a3 * 2.0)) + &a1,
        a2,
        b1,
        b2,
    ];
    let labels = ["a1", "a3+2b3", "b3-2a3+a1", "a2", "b1", "b2"].map(String::from).to_vec();
    let g = LieAlgebra::from_matrix_basis(labels, &mats).unwrap();
    let err = ReductiveSpace::build(g, vec![unit(6, 0)], vec![vec![1], vec![2], vec![3], vec![4, 5]], vec![1.0; 4], 1e-9)
        .unwrap_err();
    match err {
        Error::Invariant { what, .. } => assert!(what.contains("not reductive") && what.contains("a2"), "{what}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn non_positive_scale_rejected() {
    let s = make_space(&CatalogId::vir24(1.0, 1.0, 1.0).unwrap()).unwrap();
    let r = ReductiveSpace::build(
        s.algebra().clone(),
        vec![unit(6, 0)],
        vec![vec![1], vec![2, 3], vec![4, 5]],
        vec![1.0, 0.0, 1.0],
        1e-9,
    );
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}

#[test]
fn commutant_dimensions() {
    let su3 = su3_isotropy();
    assert!(su3.homomorphism_residual() < 1e-12);
    assert_eq!(su3.commutant_dimension(), 1);
    let l3 = &(e(1, 4) * -2.0) + &e(2, 3);
    assert!((&su3.generators[2] - &l3).amax() < 1e-15);
    assert_eq!(commutant_dimension(&[], 5), 25);
    let mut st = Vec::new();
    for m in so3_standard() {
        let mut big = DMatrix::zeros(5, 5);
        big.view_mut((0, 0), (3, 3)).copy_from(&m);
        st.push(big);
    }
    assert!(commutant_dimension(&st, 5) >= 2);
}

#[test]
fn invariant_form_counts() {
    let s = make_space(&CatalogId::vir24(2.0, 1.0, 3.0).unwrap()).unwrap();
    let three = invariant_forms(&s, 3).unwrap();
    assert_eq!(three.len(), 2);
    let e123 = AltForm::basis(5, &[0, 1, 2]);
    let e145 = AltForm::basis(5, &[0, 3, 4]);
    for f in &three {
        let r = f - &(&(&e123 * f.component(&[0, 1, 2])) + &(&e145 * f.component(&[0, 3, 4])));
        assert!(r.max_abs() < 1e-10);
        assert!(s.invariance_residual(f) < 1e-10);
    }
    assert_eq!(invariant_forms(&s, 0).unwrap().len(), 1);
    let one = invariant_forms(&s, 1).unwrap();
    assert_eq!(one.len(), 1);
    assert!((one[0].component(&[0]).abs() - 1.0).abs() < 1e-12);
}

#[test]
fn invariant_form_count_stable_under_h_rescaling() {
    let s = make_space(&CatalogId::vir24(2.0, 1.0, 3.0).unwrap()).unwrap();
    let flipped = ReductiveSpace::build(
        s.algebra().clone(),
        vec![unit(6, 0) * -2.0],
        s.m_summands().to_vec(),
        s.scales().to_vec(),
        1e-9,
    )
    .unwrap();
    for k in 0..=5 {
        assert_eq!(invariant_forms(&s, k).unwrap().len(), invariant_forms(&flipped, k).unwrap().len());
    }
}

#[test]
fn so3ir_bases_relations() {
    let b = so3ir_bases();
    let x1 = &(&(e(1, 3) * SQRT3) + &e(4, 2)) + &e(5, 3);
    assert!((&b.x[0] - &x1).amax() < 1e-15);
    let y1 = &(&(e(1, 2) * -SQRT3) + &e(3, 5)) + &e(2, 4);
    assert!((&b.y[0] - &y1).amax() < 1e-15);
    let x3 = &e(2, 3) + &(e(4, 5) * 2.0);
    assert!((&b.x[2] - &x3).amax() < 1e-15);
    assert!((&b.y[2] - &x3).amax() < 1e-15);
    for t in [&b.x, &b.y] {
        assert!((commutator(&t[0], &t[1]) - &t[2]).amax() < 1e-14);
    }
}

#[test]
fn admissible_mu() {
    let (p, m) = wir_admissible_mu(12.0, 1.0).unwrap();
    assert!((p - 1.0).abs() < 1e-12 && (m - 1.0).abs() < 1e-12);
    let (p, m) = wir_admissible_mu(28.0, 1.0).unwrap();
    assert!((p - (7f64.sqrt() + 2.0) / SQRT3).abs() < 1e-12);
    assert!((m - (7f64.sqrt() - 2.0) / SQRT3).abs() < 1e-12);
    assert!((p * m - 1.0).abs() < 1e-10);
    assert!(matches!(wir_admissible_mu(1.0, 1.0), Err(Error::NoAdmissibleEmbedding { .. })));
}

fn pos() -> impl Strategy<Value = f64> {
    0.05f64..20.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn catalog_spaces_are_valid(a in pos(), b in pos(), g in pos(), mu in -3.0f64..3.0) {
        for id in [
            CatalogId::vir24(a, b, g).unwrap(),
            CatalogId::vtilde24(a, b, g).unwrap(),
            CatalogId::wir(a, b, g, mu).unwrap(),
        ] {
            let s = make_space(&id).unwrap();
            prop_assert!(s.adapted().jacobi_residual() < 1e-10 * (1.0 + s.adapted().constants().iter().fold(0.0f64, |m, v| m.max(v.abs()))).powi(2));
            prop_assert!(s.isotropy_homomorphism_residual() < 1e-10);
        }
    }

    #[test]
    fn bracket_is_antisymmetric(xs in prop::collection::vec(-1.0f64..1.0, 12), a in pos(), b in pos(), g in pos()) {
        let s = make_space(&CatalogId::vir24(a, b, g).unwrap()).unwrap();
        let x = DVector::from_column_slice(&xs[..6]);
        let y = DVector::from_column_slice(&xs[6..]);
        let alg = s.adapted();
        let sum = alg.bracket(&x, &y).unwrap() + alg.bracket(&y, &x).unwrap();
        prop_assert!(sum.amax() < 1e-12);
    }

    #[test]
    fn wir_mu_roots_obey_vieta(g in 0.05f64..5.0, extra in 0.0f64..50.0) {
        let a = 12.0 * g + extra;
        let (p, m) = wir_admissible_mu(a, g).unwrap();
        prop_assert!((p * m - 1.0).abs() < 1e-10);
        prop_assert!((p + m - (a / (3.0 * g)).sqrt()).abs() < 1e-10);
        let id = CatalogId::wir(a, 1.0, g, m).unwrap();
        prop_assert!(id.constraint().abs() < 1e-9 * a);
    }
}
