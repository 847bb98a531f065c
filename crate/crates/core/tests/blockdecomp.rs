mod common;

use abscomp::blockdecomp::{
    assignment_score, decompose_strict_pair, exhaustive, hungarian, nonzero_diagonal_permutation, reconstruct,
    PairedBlocks,
};
use abscomp::generators::{haar_unitary, random_ac_pair, stream_rng, GenClass, GenConfig};
use abscomp::{Contraction, Error, Matrix};
use proptest::prelude::*;

use common::pol;

fn m2_pair(stream: u64) -> (Contraction, Contraction) {
    let cfg = GenConfig::new(GenClass::AcPairM2, 2, 77).unwrap().with_stream(stream);
    random_ac_pair(&cfg).unwrap()
}

/// Unitary invariants of a 2x2 pair: traces, determinants and `tr(ab)`.
fn invariants(a: &Contraction, b: &Contraction) -> [f64; 5] {
    let (am, bm) = (a.matrix(), b.matrix());
    [am.trace().re, bm.trace().re, am.det().re, bm.det().re, (am * bm).trace().re]
}

#[test]
fn hidden_pairs_are_recovered_up_to_order_and_unitary() {
    let p = pol();
    let (a1, b1) = m2_pair(1);
    let (a2, b2) = m2_pair(2);
    let q = haar_unitary::<f64>(4, 11);
    let a = Contraction::direct_sum(&[&a1, &a2]).conjugate_by(&q);
    let b = Contraction::direct_sum(&[&b1, &b2]).conjugate_by(&q);

    let pb = decompose_strict_pair(&a, &b, &p).unwrap();
    assert_eq!(pb.k(), 2);
    assert!(pb.flagged.is_empty());
    let (ra, rb) = reconstruct(&pb);
    assert!((&ra - a.matrix()).frobenius_norm() < 1e-8);
    assert!((&rb - b.matrix()).frobenius_norm() < 1e-8);

    let want = [invariants(&a1, &b1), invariants(&a2, &b2)];
    let got: Vec<[f64; 5]> = pb.pairs.iter().map(|(x, y)| invariants(x, y)).collect();
    let close = |x: &[f64; 5], y: &[f64; 5]| x.iter().zip(y).all(|(u, v)| (u - v).abs() < 1e-8);
    let direct = close(&got[0], &want[0]) && close(&got[1], &want[1]);
    let swapped = close(&got[0], &want[1]) && close(&got[1], &want[0]);
    assert!(direct || swapped, "recovered {got:?}, expected {want:?}");
}

#[test]
fn frame_residuals_vanish_for_generated_pairs() {
    let p = pol();
    for i in 0..20 {
        let cfg = GenConfig::new(GenClass::AcPairMn, 6, 5).unwrap().with_stream(i);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        let pb = decompose_strict_pair(&a, &b, &p).unwrap();
        let f = pb.frame.as_ref().unwrap();
        let r = f.residuals;
        for (name, v) in [
            ("off_diagonal_sum", r.off_diagonal_sum),
            ("row_gram", r.row_gram),
            ("column_gram", r.column_gram),
            ("intertwining", r.intertwining),
            ("complementary_diagonals", r.complementary_diagonals),
            ("cluster_leak", r.cluster_leak),
            ("normality", r.normality),
            ("block_leak", r.block_leak),
        ] {
            assert!(v < 1e-8, "{name} = {v:e} on stream {i}");
        }
        assert_eq!(f.k, 3);
        assert!(pb.unitarity_residual() < 1e-10);
    }
}

#[test]
fn permuting_pairs_with_matching_w_gives_same_matrices() {
    let p = pol();
    let cfg = GenConfig::new(GenClass::AcPairMn, 6, 9).unwrap();
    let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
    let pb = decompose_strict_pair(&a, &b, &p).unwrap();
    let order = [2usize, 0, 1];
    let rows: Vec<usize> = order.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    // Row permutation of w = column permutation of w*.
    let w = pb.w.adjoint().select_columns(&rows).adjoint();
    let permuted = PairedBlocks {
        w,
        pairs: order.iter().map(|&i| pb.pairs[i].clone()).collect(),
        flagged: vec![],
        frame: None,
    };
    let (ra, rb) = reconstruct(&pb);
    let (pa, pbm) = reconstruct(&permuted);
    assert!((&ra - &pa).frobenius_norm() < 1e-12);
    assert!((&rb - &pbm).frobenius_norm() < 1e-12);
}

#[test]
fn guard_errors() {
    let p = pol();
    let strict3 = Contraction::diag(&[0.3, 0.4, 0.6]);
    let other3 = Contraction::diag(&[0.5, 0.2, 0.7]);
    assert!(matches!(decompose_strict_pair(&strict3, &other3, &p), Err(Error::NotCompatible { .. })));
    let (a, _) = m2_pair(3);
    assert_eq!(decompose_strict_pair(&a, &Contraction::identity(2), &p).unwrap_err(), Error::NotStrict);
}

#[test]
fn max_product_assignment_matches_all_24_permutations() {
    let mut rng = stream_rng(3, 0);
    use rand::Rng;
    for _ in 0..20 {
        let s = Matrix::from_fn(4, 4, |_, _| num_complex::Complex::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let sigma = nonzero_diagonal_permutation(&s, &pol()).unwrap();
        let product = |sg: &[usize]| (0..4).map(|c| s[(sg[c], c)].norm()).product::<f64>();
        let mut best = 0.0f64;
        let mut perm = [0usize, 1, 2, 3];
        permutations(&mut perm, 0, &mut |sg| best = best.max(product(sg)));
        assert!((product(&sigma) - best).abs() <= 1e-12 * best);
    }
}

fn permutations(p: &mut [usize; 4], i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permutations(p, i + 1, f);
        p.swap(i, j);
    }
}

proptest! {
    #[test]
    fn hungarian_agrees_with_exhaustive_on_log_weights(k in 2usize..8, vals in prop::collection::vec(0.01f64..3.0, 64)) {
        let w: Vec<Vec<f64>> = (0..k).map(|r| (0..k).map(|c| vals[r * 8 + c].ln()).collect()).collect();
        let e = exhaustive(&w);
        let h = hungarian(&w);
        prop_assert!((assignment_score(&w, &e) - assignment_score(&w, &h)).abs() < 1e-9);
    }

    #[test]
    fn roundtrip_holds_for_any_stream(stream in 0u64..10_000, half in 1usize..4) {
        let cfg = GenConfig::new(GenClass::AcPairMn, 2 * half, 123).unwrap().with_stream(stream);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        let pb = decompose_strict_pair(&a, &b, &pol()).unwrap();
        let (ra, rb) = reconstruct(&pb);
        prop_assert!((&ra - a.matrix()).frobenius_norm() < 1e-8);
        prop_assert!((&rb - b.matrix()).frobenius_norm() < 1e-8);
    }
}
