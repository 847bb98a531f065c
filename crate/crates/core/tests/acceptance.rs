//! Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.

mod common;

use std::time::{Duration, Instant};

use abscomp::bloch2::{
    director_sphere_residual, in_s, partner, sample_ellipsoid, spheroid_params, strict_noncommuting_criterion,
    BlochPoint, Branch, StrictParam,
};
use abscomp::blockdecomp::{decompose_strict_pair, reconstruct};
use abscomp::compat::{
    check_block_characterization, commutes_within_compat, compatibility_report, decompose_triple, definition_residual,
    is_abs_compatible,
};
use abscomp::generators::{
    haar_unitary_with, random_ac_pair, random_s_element, stream_rng, GenClass, GenConfig,
};
use abscomp::linalg::{hermitian_eig, jordan, Hermitian};
use abscomp::order::{Corner, PositiveContraction};
use abscomp::{Contraction, Matrix, Point};
use rand::Rng;

use common::{mixed_corpus, pol};

const SEED: u64 = 20_240_611;

const AC_RESIDUAL_MAX: f64 = 1e-8;
const NON_AC_RESIDUAL_MIN: f64 = 1e-7;
const CERTIFICATE_RESIDUAL_MAX: f64 = 1e-8;
const DET_MIN: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const JORDAN_DET_MAX: f64 = 1e-10;
const TRACE_SHIFT: f64 = 0.01;
const SCALED_RESIDUAL_MIN: f64 = 1e-4;
const RADIAL_FACTOR: f64 = 1.05;
const RECONSTRUCTION_MAX: f64 = 1e-8;
const LEAKAGE_MAX: f64 = 1e-9;
const PROJECTION_DEFECT_MAX: f64 = 1e-8;
const SPHERE_RESIDUAL_MAX: f64 = 1e-10;
const IDEMPOTENCY_MAX: f64 = 1e-9;

struct Outcome {
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    limit: Option<Duration>,
}

fn run(name: &'static str, limit: Option<u64>, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (pass, detail) = f();
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let in_time = limit.is_none_or(|l| elapsed <= l);
    Outcome { name, pass: pass && in_time, detail, elapsed, limit }
}

fn criterion_equivalence() -> (bool, String) {
    let p = pol();
    let (mut total, mut disagree, mut wrong) = (0, 0, 0);
    let (mut max_ac, mut min_non) = (0.0f64, f64::INFINITY);
    for n in 2..=5 {
        for (a, b, expected) in mixed_corpus(n, SEED, 500) {
            let r = compatibility_report(&a, &b, &p).unwrap();
            total += 1;
            if !r.all_agree() {
                disagree += 1;
            }
            if expected {
                max_ac = max_ac.max(r.residual_def);
                wrong += usize::from(r.residual_def >= AC_RESIDUAL_MAX);
            } else {
                min_non = min_non.min(r.residual_def);
                wrong += usize::from(r.residual_def <= NON_AC_RESIDUAL_MIN);
            }
        }
    }
    (
        disagree == 0 && wrong == 0,
        format!("pairs={total} disagreements={disagree} misclassified={wrong} max_ac_residual={max_ac:.2e} min_non_ac_residual={min_non:.2e}"),
    )
}

fn block_certificate() -> (bool, String) {
    let p = pol();
    let (mut total, mut mismatch, mut worst) = (0, 0, 0.0f64);
    for n in 2..=5 {
        for (a, b, _) in mixed_corpus(n, SEED, 500) {
            let cert = check_block_characterization(&a, &b, &p).unwrap();
            let verdict = is_abs_compatible(&a, &b, &p).unwrap();
            total += 1;
            mismatch += usize::from(cert.passes != verdict);
            if verdict {
                worst = worst.max(cert.residuals.max());
            }
        }
    }
    (
        mismatch == 0 && worst < CERTIFICATE_RESIDUAL_MAX,
        format!("pairs={total} verdict_mismatches={mismatch} max_ac_block_residual={worst:.2e}"),
    )
}

/// A partner whose eigenvalues leave room for a trace shift of `TRACE_SHIFT`.
fn roomy_partner_pair(seed: u64) -> (Contraction, Contraction) {
    let mut s = seed;
    loop {
        let a = random_s_element::<f64>(s);
        s = s.wrapping_add(1_000_003);
        let param = StrictParam::from_contraction(&a, &pol()).unwrap();
        let branch = if s.is_multiple_of(2) { Branch::Low } else { Branch::High };
        let Ok(b) = partner(&param, branch).or_else(|_| partner(&param, Branch::Low)).or_else(|_| partner(&param, Branch::High))
        else {
            continue;
        };
        if b.eigen().min() > 2.0 * TRACE_SHIFT {
            return (a, b);
        }
    }
}

fn strict_2x2_conditions() -> (bool, String) {
    let p = pol();
    let (mut bad, mut still_ac, mut criterion_fail) = (0, 0, 0);
    for i in 0..200u64 {
        let (a, b) = roomy_partner_pair(SEED + i);
        let (am, bm) = (a.matrix(), b.matrix());
        let jd = jordan(a.hermitian(), b.hermitian()).unwrap().det().re.abs();
        let ok = am.det().re > DET_MIN
            && bm.det().re > DET_MIN
            && (am.trace().re - 1.0).abs() < TRACE_TOL
            && (bm.trace().re - 1.0).abs() < TRACE_TOL
            && jd < JORDAN_DET_MAX;
        bad += usize::from(!ok);
        criterion_fail += usize::from(!strict_noncommuting_criterion(&a, &b, &p).unwrap());
        let shift = if i % 2 == 0 { TRACE_SHIFT } else { -TRACE_SHIFT };
        let shifted = &b.matrix().clone() + &Matrix::scalar_identity(2, shift);
        let shifted = PositiveContraction::from_matrix(shifted, &p).unwrap();
        still_ac += usize::from(is_abs_compatible(&a, &shifted, &p).unwrap());
    }
    (
        bad == 0 && still_ac == 0 && criterion_fail == 0,
        format!("pairs=200 condition_failures={bad} criterion_failures={criterion_fail} shifted_still_compatible={still_ac}"),
    )
}

fn partner_spheroid() -> (bool, String) {
    let p = pol();
    let mut rng = stream_rng(SEED, 4);
    let (mut samples, mut excluded, mut bad_on, mut bad_off) = (0, 0, 0, 0);
    let (mut max_on, mut min_off) = (0.0f64, f64::INFINITY);
    for i in 0..50u64 {
        let a = random_s_element::<f64>(SEED + 31 * i);
        let param = StrictParam::from_contraction(&a, &p).unwrap();
        let sp = spheroid_params(&param).unwrap();
        let mut taken = 0;
        while taken < 64 {
            let u = (1.0 - 2.0 * rng.random::<f64>()).acos();
            let v = rng.random_range(0.0..std::f64::consts::TAU);
            let b = match sample_ellipsoid(&param, u, v) {
                Ok(b) => b,
                Err(_) => {
                    excluded += 1;
                    continue;
                }
            };
            taken += 1;
            samples += 1;
            let r = definition_residual(a.hermitian(), b.hermitian()).unwrap();
            max_on = max_on.max(r);
            bad_on += usize::from(r >= AC_RESIDUAL_MAX);

            let pt = sp.surface_point(u, v).scaled_from(&Point::center(), RADIAL_FACTOR);
            let r_off = definition_residual(a.hermitian(), &pt.to_matrix()).unwrap();
            min_off = min_off.min(r_off);
            bad_off += usize::from(r_off <= SCALED_RESIDUAL_MIN);
        }
    }
    (
        bad_on == 0 && bad_off == 0,
        format!(
            "samples={samples} excluded={excluded} on_failures={bad_on} off_failures={bad_off} max_on_residual={max_on:.2e} min_off_residual={min_off:.2e}"
        ),
    )
}

fn strict_pair_roundtrip() -> (bool, String) {
    let p = pol();
    let (mut failures, mut worst, mut flagged) = (0, 0.0f64, 0);
    for n in [4, 6, 8] {
        for i in 0..100u64 {
            let cfg = GenConfig::new(GenClass::AcPairMn, n, SEED).unwrap().with_stream(i);
            let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
            let Ok(pb) = decompose_strict_pair(&a, &b, &p) else {
                failures += 1;
                continue;
            };
            let (ra, rb) = reconstruct(&pb);
            let err = (&ra - a.matrix()).frobenius_norm().max((&rb - b.matrix()).frobenius_norm());
            worst = worst.max(err);
            flagged += pb.flagged.len();
            let blocks_ok = pb.pairs.iter().all(|(x, y)| {
                in_s(x.matrix(), &p) && in_s(y.matrix(), &p) && is_abs_compatible(x, y, &p).unwrap()
            });
            failures += usize::from(err >= RECONSTRUCTION_MAX || !blocks_ok);
        }
    }
    (
        failures == 0 && flagged == 0,
        format!("pairs=300 failures={failures} flagged_blocks={flagged} max_reconstruction_error={worst:.2e}"),
    )
}

fn nonstrict_structure() -> (bool, String) {
    let p = pol();
    let (mut failures, mut disagree, mut nonstrict) = (0, 0, 0);
    let (mut worst_leak, mut worst_corner) = (0.0f64, 0.0f64);
    for i in 0..200u64 {
        let n = 2 + (i as usize % 5);
        let cfg = GenConfig::new(GenClass::NonstrictAcPair, n, SEED).unwrap().with_stream(i);
        let (a, b) = random_ac_pair::<f64>(&cfg).unwrap();
        nonstrict += usize::from(!a.is_strict(&p));
        let Ok(t) = decompose_triple(&a, &b, &p) else {
            failures += 1;
            continue;
        };
        worst_leak = worst_leak.max(t.leakage);
        worst_corner = worst_corner.max(t.corner_residual);
        failures += usize::from(t.leakage >= LEAKAGE_MAX || t.corner_residual > p.eq_tol);
        let direct = a.matrix().commutator_norm(b.matrix()) <= p.eq_tol;
        disagree += usize::from(commutes_within_compat(&a, &b, &p).unwrap() != direct);
    }
    (
        failures == 0 && disagree == 0 && nonstrict == 200,
        format!(
            "pairs=200 non_strict={nonstrict} failures={failures} commutation_disagreements={disagree} max_leakage={worst_leak:.2e} max_corner_residual={worst_corner:.2e}"
        ),
    )
}

fn strict_commuting_projection() -> (bool, String) {
    let p = pol();
    let mut rng = stream_rng(SEED, 7);
    let (mut found, mut rejected, mut worst) = (0, 0, 0.0f64);
    let mut rejected_were_projections = 0;
    while found < 100 {
        let n = rng.random_range(1..=5);
        let u = haar_unitary_with::<f64, _>(n, &mut rng);
        let alphas: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..0.95)).collect();
        let mixed = rng.random::<bool>();
        let betas: Vec<f64> = (0..n)
            .map(|_| if mixed && rng.random::<f64>() < 0.5 { rng.random_range(0.05..0.95) } else { f64::from(rng.random::<bool>()) })
            .collect();
        let a = PositiveContraction::from_spectrum(&alphas, &u);
        let b = PositiveContraction::from_spectrum(&betas, &u);
        if is_abs_compatible(&a, &b, &p).unwrap() {
            found += 1;
            worst = worst.max(b.idempotency_residual());
        } else {
            rejected += 1;
            rejected_were_projections += usize::from(b.idempotency_residual() < PROJECTION_DEFECT_MAX);
        }
    }
    (
        worst < PROJECTION_DEFECT_MAX && rejected_were_projections == 0,
        format!("compatible=100 incompatible_commuting={rejected} max_idempotency_defect={worst:.2e}"),
    )
}

fn invariance() -> (bool, String) {
    let p = pol();
    let mut rng = stream_rng(SEED, 8);
    let verdict = |a: &Contraction, b: &Contraction| is_abs_compatible(a, b, &p).unwrap();
    let (mut sym, mut comp, mut unit, mut corner, mut dsum) = (0, 0, 0, 0, 0);
    let corpus: Vec<_> = (2..=5).flat_map(|n| mixed_corpus(n, SEED + 8, 125)).collect();
    assert_eq!(corpus.len(), 1000);
    for (a, b, _) in &corpus {
        let v = verdict(a, b);
        sym += usize::from(v != verdict(b, a));
        comp += usize::from(v != verdict(&a.complement(), &b.complement()));
        let u = haar_unitary_with::<f64, _>(a.n(), &mut rng);
        unit += usize::from(v != verdict(&a.conjugate_by(&u), &b.conjugate_by(&u)));

        let m = a.n();
        let big = m + rng.random_range(1..=3);
        let basis = haar_unitary_with::<f64, _>(big, &mut rng).select_columns(&(0..m).collect::<Vec<_>>());
        let c = Corner::from_basis(basis);
        corner += usize::from(v != verdict(&c.embed(a), &c.embed(b)));
    }
    for pair in corpus.chunks(2) {
        let [(a1, b1, _), (a2, b2, _)] = pair else { unreachable!() };
        let both = verdict(a1, b1) && verdict(a2, b2);
        let u = haar_unitary_with::<f64, _>(a1.n() + a2.n(), &mut rng);
        let a = PositiveContraction::direct_sum(&[a1, a2]).conjugate_by(&u);
        let b = PositiveContraction::direct_sum(&[b1, b2]).conjugate_by(&u);
        dsum += usize::from(both != verdict(&a, &b));
    }
    let total = sym + comp + unit + corner + dsum;
    (
        total == 0,
        format!(
            "pairs=1000 symmetry={sym} complement={comp} unitary={unit} corner={corner} direct_sum={dsum} (violations)"
        ),
    )
}

fn director_sphere() -> (bool, String) {
    let mut rng = stream_rng(SEED, 9);
    let mut worst_sphere = 0.0f64;
    for _ in 0..100 {
        let v = haar_unitary_with::<f64, _>(2, &mut rng).select_columns(&[0]);
        let proj = &v * &v.adjoint();
        worst_sphere = worst_sphere.max(director_sphere_residual(&BlochPoint::of_matrix(&proj)).abs());
    }
    let mut worst_idem = 0.0f64;
    for _ in 0..100 {
        let theta = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let pt = BlochPoint::new(0.5 + 0.5 * theta.cos(), 0.5 * theta.sin() * phi.cos(), 0.5 * theta.sin() * phi.sin());
        let m: Hermitian = pt.to_matrix();
        let defect = (&(m.matrix() * m.matrix()) - m.matrix()).frobenius_norm();
        worst_idem = worst_idem.max(defect);
    }
    (
        worst_sphere < SPHERE_RESIDUAL_MAX && worst_idem < IDEMPOTENCY_MAX,
        format!("projections=100 max_sphere_residual={worst_sphere:.2e} points=100 max_idempotency_defect={worst_idem:.2e}"),
    )
}

#[test]
fn acceptance_criteria() {
    let outcomes = [
        run("criterion-equivalence", Some(10), criterion_equivalence),
        run("block-certificate", None, block_certificate),
        run("strict-2x2-conditions", Some(2), strict_2x2_conditions),
        run("partner-spheroid", Some(5), partner_spheroid),
        run("strict-pair-roundtrip", Some(30), strict_pair_roundtrip),
        run("nonstrict-structure", None, nonstrict_structure),
        run("strict-commuting-projection", None, strict_commuting_projection),
        run("invariance", None, invariance),
        run("director-sphere", None, director_sphere),
    ];
    for (i, o) in outcomes.iter().enumerate() {
        let limit = o.limit.map_or(String::new(), |l| format!(" limit={}s", l.as_secs()));
        println!(
            "[{}] {}. {}: {} time={:.2}s{}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.name,
            o.detail,
            o.elapsed.as_secs_f64(),
            limit
        );
    }
    let failed: Vec<_> = outcomes.iter().filter(|o| !o.pass).map(|o| o.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn generated_hermitian_spectra_stay_in_unit_interval() {
    for (a, b, _) in mixed_corpus(3, SEED, 20) {
        for x in [&a, &b] {
            let es = hermitian_eig(x.hermitian()).unwrap();
            assert!(es.min() >= -1e-12 && es.max() <= 1.0 + 1e-12);
        }
    }
}
