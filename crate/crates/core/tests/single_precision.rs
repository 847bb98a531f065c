use abscomp::blockdecomp::{decompose_strict_pair, reconstruct};
use abscomp::compat::{compatibility_report, is_abs_compatible};
use abscomp::generators::{random_ac_pair, random_non_ac_pair, GenClass, GenConfig};
use abscomp::{Contraction32, Tolerances32};

#[test]
fn f32_pipeline_classifies_generated_pairs() {
    let pol = Tolerances32::default();
    for s in 0..50 {
        let cfg = GenConfig::new(GenClass::NonstrictAcPair, 3, 8).unwrap().with_stream(s);
        let (a, b): (Contraction32, Contraction32) = random_ac_pair(&cfg).unwrap();
        let r = compatibility_report(&a, &b, &pol).unwrap();
        assert!(r.verdict && r.all_agree(), "stream {s}: {r:?}");

        let cfg = GenConfig::new(GenClass::Generic, 3, 8).unwrap().with_stream(s);
        let (a, b): (Contraction32, Contraction32) = random_non_ac_pair(&cfg).unwrap();
        assert!(!is_abs_compatible(&a, &b, &pol).unwrap());
    }
}

#[test]
fn f32_block_factorization_roundtrips() {
    let pol = Tolerances32::default();
    for s in 0..20 {
        let cfg = GenConfig::new(GenClass::AcPairMn, 4, 8).unwrap().with_stream(s);
        let (a, b): (Contraction32, Contraction32) = random_ac_pair(&cfg).unwrap();
        let pb = decompose_strict_pair(&a, &b, &pol).unwrap();
        let (ra, rb) = reconstruct(&pb);
        assert!((&ra - a.matrix()).frobenius_norm() < 1e-4);
        assert!((&rb - b.matrix()).frobenius_norm() < 1e-4);
    }
}
