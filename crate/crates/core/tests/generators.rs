mod common;

use abscomp::bloch2::{in_s, strict_noncommuting_criterion};
use abscomp::compat::{decompose_triple, definition_residual, is_abs_compatible};
use abscomp::generators::{
    generate, haar_unitary, random_ac_pair, random_non_ac_pair, random_positive_contraction, random_s_element,
    GenClass, GenConfig,
};
use abscomp::linalg::hermitian_eig;
use abscomp::{Contraction, Matrix};

use common::pol;

const SAMPLES: u64 = 10_000;

#[test]
fn haar_columns_have_unit_norm() {
    for seed in 0..20 {
        let u = haar_unitary::<f64>(5, seed);
        for j in 0..5 {
            let norm: f64 = u.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((norm - 1.0).abs() < 1e-13);
        }
        assert!((&(&u.adjoint() * &u) - &Matrix::identity(5)).frobenius_norm() < 1e-12);
    }
}

#[test]
fn single_matrix_classes_hold_on_every_sample() {
    let p = pol();
    for s in 0..SAMPLES {
        let n = 1 + (s as usize % 4);
        let cfg = GenConfig::new(GenClass::Generic, n, 1).unwrap().with_stream(s);
        let g = random_positive_contraction::<f64>(&cfg).unwrap();
        let es = hermitian_eig(g.hermitian()).unwrap();
        assert!(es.min() >= -1e-12 && es.max() <= 1.0 + 1e-12);

        let strict = random_positive_contraction::<f64>(&GenConfig { class: GenClass::Strict, ..cfg }).unwrap();
        assert!(strict.is_strict(&p));
        let proj = random_positive_contraction::<f64>(&GenConfig { class: GenClass::Projection, ..cfg }).unwrap();
        assert!(proj.idempotency_residual() <= 1e-12);

        let x = random_s_element::<f64>(s);
        assert!(in_s(x.matrix(), &p));
        assert_eq!(x.matrix().trace().re, 1.0);
    }
}

#[test]
fn pair_classes_hold_their_structure() {
    let p = pol();
    for s in 0..500 {
        let cfg = GenConfig::new(GenClass::AcPairM2, 2, 2).unwrap().with_stream(s);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        assert!(strict_noncommuting_criterion(&a, &b, &p).unwrap());

        let n = 1 + (s as usize % 5);
        let cfg = GenConfig::new(GenClass::NonstrictAcPair, n, 2).unwrap().with_stream(s);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        assert!(!a.is_strict(&p));
        assert!(decompose_triple(&a, &b, &p).is_ok());

        let cfg = GenConfig::new(GenClass::CommutingAcPair, n, 2).unwrap().with_stream(s);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        assert!(a.is_strict(&p) && a.matrix().commutator_norm(b.matrix()) < 1e-12);
        assert!(is_abs_compatible(&a, &b, &p).unwrap());
    }
}

#[test]
fn identical_configs_give_identical_outputs() {
    for class in GenClass::ALL {
        let n = match class {
            GenClass::SElement | GenClass::AcPairM2 => 2,
            _ => 4,
        };
        let cfg = GenConfig::new(class, n, 99).unwrap().with_stream(5);
        let (x1, y1) = generate::<f64>(&cfg).unwrap();
        let (x2, y2) = generate::<f64>(&cfg).unwrap();
        assert_eq!(x1.matrix(), x2.matrix(), "{class}");
        assert_eq!(y1.map(|m| m.matrix().clone()), y2.map(|m| m.matrix().clone()), "{class}");
    }
}

#[test]
fn negative_sampling_stays_clear_of_the_threshold() {
    let p = pol();
    for s in 0..300 {
        let n = 1 + (s as usize % 5);
        let cfg = GenConfig::new(GenClass::Generic, n, 4).unwrap().with_stream(s);
        let (a, b) = random_non_ac_pair::<f64>(&cfg).unwrap();
        assert!(definition_residual(a.hermitian(), b.hermitian()).unwrap() > 10.0 * p.eq_tol);
    }
}

#[test]
fn independent_strict_2x2_with_off_unit_trace_are_incompatible() {
    let p = pol();
    let a = Contraction::from_real(&[&[0.3, 0.1], &[0.1, 0.5]], &p).unwrap();
    let b = Contraction::from_real(&[&[0.6, -0.2], &[-0.2, 0.2]], &p).unwrap();
    assert!(!is_abs_compatible(&a, &b, &p).unwrap());
    let half = Contraction::diag(&[0.5, 0.5]);
    assert!(!is_abs_compatible(&half, &half, &p).unwrap());
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(GenConfig::new(GenClass::AcPairMn, 5, 0).is_err());
    assert!(GenConfig::new(GenClass::SElement, 3, 0).is_err());
    assert!("bogus".parse::<GenClass>().is_err());
}
