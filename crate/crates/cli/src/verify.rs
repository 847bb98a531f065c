//! Randomized property suites over generated corpora.
//!
//! Each trial draws from its own generator stream, so the outcome depends only
//! on `(seed, trial)` and trials may run in parallel. Results are merged in
//! trial order by a single reducer.

use std::fmt;
use std::time::Instant;

use abscomp::bloch2::{partner, sample_ellipsoid, spheroid_params, strict_noncommuting_criterion, Branch, StrictParam};
use abscomp::blockdecomp::{decompose_strict_pair, reconstruct};
use abscomp::compat::{check_block_characterization, compatibility_report, definition_residual, is_abs_compatible};
use abscomp::generators::{random_ac_pair, random_non_ac_pair, random_s_element, stream_rng, GenClass, GenConfig};
use abscomp::linalg::jordan;
use abscomp::{Contraction, Matrix, Point, Tolerances};
use clap::ValueEnum;
use rand::Rng;
use rayon::prelude::*;

use crate::error::CliResult;
use crate::io::MatrixFile;
use crate::report::RunReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Agreement of the four compatibility criteria.
    Criteria,
    /// Block certificate verdict against the definition.
    BlockCertificate,
    /// Determinant, trace and Jordan-product conditions for 2x2 partners.
    Strict2x2,
    /// Partner spheroid samples and their radial pushes.
    Ellipsoid,
    /// Strict pair factorization round trip.
    BlockDecomposition,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 5] =
        [Suite::Criteria, Suite::BlockCertificate, Suite::Strict2x2, Suite::Ellipsoid, Suite::BlockDecomposition];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Criteria => "criteria",
            Suite::BlockCertificate => "block-certificate",
            Suite::Strict2x2 => "strict-2x2",
            Suite::Ellipsoid => "ellipsoid",
            Suite::BlockDecomposition => "block-decomposition",
            Suite::All => "all",
        }
    }

    pub fn expand(self) -> Vec<Suite> {
        if self == Suite::All {
            Self::CONCRETE.to_vec()
        } else {
            vec![self]
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub suite: Suite,
    pub trials: u64,
    pub seed: u64,
    pub parallel: bool,
    /// Perturb every pair that should be compatible; used as a negative control.
    pub inject_perturbation: bool,
}

#[derive(Clone, Debug)]
pub struct Violation {
    pub suite: Suite,
    pub trial: u64,
    pub reason: String,
    pub a: Matrix,
    pub b: Matrix,
}

/// Pinned thresholds of the suites.
const AC_MAX: f64 = 1e-8;
const NON_AC_MIN: f64 = 1e-7;
const RECONSTRUCTION_MAX: f64 = 1e-8;
const DET_MIN: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-12;
const TRACE_SHIFT: f64 = 0.01;
const RADIAL_FACTOR: f64 = 1.05;
const SCALED_MIN: f64 = 1e-4;
const SAMPLES_PER_ELEMENT: usize = 8;
const PERTURBATION: f64 = 1e-3;

struct Trial<'a> {
    suite: Suite,
    index: u64,
    seed: u64,
    inject: bool,
    pol: &'a Tolerances,
}

type TrialResult = CliResult<Option<Violation>>;

impl Trial<'_> {
    fn fail(&self, reason: impl Into<String>, a: &Contraction, b: &Contraction) -> TrialResult {
        Ok(Some(Violation {
            suite: self.suite,
            trial: self.index,
            reason: reason.into(),
            a: a.matrix().clone(),
            b: b.matrix().clone(),
        }))
    }

    /// Blends `b` toward the projection onto the first basis vector when
    /// injection is on; the blend stays a contraction but leaves any
    /// compatible configuration.
    fn maybe_perturb(&self, b: Contraction) -> CliResult<Contraction> {
        if !self.inject {
            return Ok(b);
        }
        let n = b.n();
        let e11 = Matrix::from_fn(n, n, |i, j| num_complex::Complex::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0));
        let m = &b.matrix().scale(1.0 - PERTURBATION) + &e11.scale(PERTURBATION);
        Ok(Contraction::from_matrix(m, self.pol)?)
    }

    fn ac_pair(&self) -> CliResult<(Contraction, Contraction)> {
        let n = 2 + (self.index % 4) as usize;
        let mut classes = vec![GenClass::NonstrictAcPair, GenClass::CommutingAcPair];
        match n {
            2 => classes.push(GenClass::AcPairM2),
            _ if n.is_multiple_of(2) => classes.push(GenClass::AcPairMn),
            _ => {}
        }
        let class = classes[(self.index / 4) as usize % classes.len()];
        let cfg = GenConfig::new(class, n, self.seed)?.with_stream(self.index);
        let (a, b) = random_ac_pair(&cfg)?;
        Ok((a, self.maybe_perturb(b)?))
    }

    fn non_ac_pair(&self) -> CliResult<(Contraction, Contraction)> {
        let n = 2 + (self.index % 4) as usize;
        let cfg = GenConfig::new(GenClass::Generic, n, self.seed ^ 0x5bd1_e995)?.with_stream(self.index);
        Ok(random_non_ac_pair(&cfg)?)
    }

    fn run(&self) -> TrialResult {
        match self.suite {
            Suite::Criteria => self.criteria(),
            Suite::BlockCertificate => self.block_certificate(),
            Suite::Strict2x2 => self.strict_2x2(),
            Suite::Ellipsoid => self.ellipsoid(),
            Suite::BlockDecomposition => self.block_decomposition(),
            Suite::All => unreachable!("expanded before running"),
        }
    }

    fn criteria(&self) -> TrialResult {
        let (a, b) = self.ac_pair()?;
        let r = compatibility_report(&a, &b, self.pol)?;
        if !r.all_agree() {
            return self.fail(format!("criteria disagree on compatible sample: {:?}", r.verdicts()), &a, &b);
        }
        if r.residual_def >= AC_MAX {
            return self.fail(format!("compatible sample has residual {:e}", r.residual_def), &a, &b);
        }
        let (a, b) = self.non_ac_pair()?;
        let r = compatibility_report(&a, &b, self.pol)?;
        if !r.all_agree() {
            return self.fail(format!("criteria disagree on incompatible sample: {:?}", r.verdicts()), &a, &b);
        }
        if r.residual_def <= NON_AC_MIN {
            return self.fail(format!("incompatible sample has residual {:e}", r.residual_def), &a, &b);
        }
        Ok(None)
    }

    fn block_certificate(&self) -> TrialResult {
        let (a, b) = self.ac_pair()?;
        let (c, d) = self.non_ac_pair()?;
        for (a, b, expected) in [(a, b, true), (c, d, false)] {
            let cert = check_block_characterization(&a, &b, self.pol)?;
            let verdict = is_abs_compatible(&a, &b, self.pol)?;
            if cert.passes != verdict || verdict != expected {
                return self.fail(
                    format!("certificate={} definition={} expected={}", cert.passes, verdict, expected),
                    &a,
                    &b,
                );
            }
        }
        Ok(None)
    }

    fn strict_2x2(&self) -> TrialResult {
        let mut rng = stream_rng(self.seed, self.index);
        let (a, b) = loop {
            let a = random_s_element::<f64>(rng.random());
            let param = StrictParam::from_contraction(&a, self.pol)?;
            let branch = if rng.random::<bool>() { Branch::Low } else { Branch::High };
            if let Ok(b) = partner(&param, branch) {
                if b.eigen().min() > 2.0 * TRACE_SHIFT {
                    break (a, b);
                }
            }
        };
        let b = self.maybe_perturb(b)?;
        let (am, bm) = (a.matrix(), b.matrix());
        let jd = jordan(a.hermitian(), b.hermitian())?.det().re.abs();
        let conditions = am.det().re > DET_MIN
            && bm.det().re > DET_MIN
            && (am.trace().re - 1.0).abs() < TRACE_TOL
            && (bm.trace().re - 1.0).abs() < TRACE_TOL
            && jd < DET_MIN;
        if !conditions || !strict_noncommuting_criterion(&a, &b, self.pol)? || !is_abs_compatible(&a, &b, self.pol)? {
            return self.fail(format!("partner conditions fail (|det(a∘b)| = {jd:e})"), &a, &b);
        }
        let shift = if self.index.is_multiple_of(2) { TRACE_SHIFT } else { -TRACE_SHIFT };
        let shifted = Contraction::from_matrix(bm + &Matrix::scalar_identity(2, shift), self.pol)?;
        if is_abs_compatible(&a, &shifted, self.pol)? {
            return self.fail("trace-shifted partner is still compatible", &a, &shifted);
        }
        Ok(None)
    }

    fn ellipsoid(&self) -> TrialResult {
        let mut rng = stream_rng(self.seed, self.index);
        let a = random_s_element::<f64>(rng.random());
        let param = StrictParam::from_contraction(&a, self.pol)?;
        let sp = spheroid_params(&param)?;
        let mut taken = 0;
        while taken < SAMPLES_PER_ELEMENT {
            let u = (1.0 - 2.0 * rng.random::<f64>()).acos();
            let v = rng.random_range(0.0..std::f64::consts::TAU);
            let Ok(b) = sample_ellipsoid(&param, u, v) else { continue };
            taken += 1;
            let b = self.maybe_perturb(b)?;
            let r = definition_residual(a.hermitian(), b.hermitian())?;
            if r >= AC_MAX {
                return self.fail(format!("spheroid sample has residual {r:e}"), &a, &b);
            }
            let pt = sp.surface_point(u, v).scaled_from(&Point::center(), RADIAL_FACTOR);
            let off = pt.to_matrix();
            let r = definition_residual(a.hermitian(), &off)?;
            if r <= SCALED_MIN {
                let off = Contraction::from_matrix(off.into_matrix(), self.pol)?;
                return self.fail(format!("pushed sample has residual {r:e}"), &a, &off);
            }
        }
        Ok(None)
    }

    fn block_decomposition(&self) -> TrialResult {
        let n = [4, 6, 8][(self.index % 3) as usize];
        let cfg = GenConfig::new(GenClass::AcPairMn, n, self.seed)?.with_stream(self.index);
        let (a, b) = random_ac_pair::<f64>(&cfg)?;
        let b = self.maybe_perturb(b)?;
        let pb = match decompose_strict_pair(&a, &b, self.pol) {
            Ok(pb) => pb,
            Err(e) => return self.fail(format!("factorization failed: {e}"), &a, &b),
        };
        let (ra, rb) = reconstruct(&pb);
        let err = (&ra - a.matrix()).frobenius_norm().max((&rb - b.matrix()).frobenius_norm());
        if err >= RECONSTRUCTION_MAX || !pb.flagged.is_empty() {
            return self.fail(format!("reconstruction error {err:e}, flagged {:?}", pb.flagged), &a, &b);
        }
        Ok(None)
    }
}

#[derive(Clone, Debug, Default)]
pub struct SuiteSummary {
    pub trials: u64,
    pub violations: Vec<Violation>,
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions, pol: &Tolerances) -> CliResult<SuiteSummary> {
    let trial = |index: u64| {
        Trial { suite, index, seed: opts.seed, inject: opts.inject_perturbation, pol }.run()
    };
    let results: Vec<TrialResult> = if opts.parallel {
        (0..opts.trials).into_par_iter().map(trial).collect()
    } else {
        (0..opts.trials).map(trial).collect()
    };
    let mut summary = SuiteSummary { trials: opts.trials, violations: Vec::new() };
    for r in results {
        if let Some(v) = r? {
            summary.violations.push(v);
        }
    }
    Ok(summary)
}

/// Runs the selected suites and returns the report and the total violation count.
pub fn verify(opts: &VerifyOptions, pol: &Tolerances) -> CliResult<(RunReport, usize)> {
    let start = Instant::now();
    let mut r = RunReport::new("verify", pol);
    r.push("suite", opts.suite)
        .push("trials", opts.trials)
        .push("seed", opts.seed)
        .flag("parallel", opts.parallel)
        .flag("inject_perturbation", opts.inject_perturbation);
    let mut total = 0;
    let mut first: Option<Violation> = None;
    for suite in opts.suite.expand() {
        let t = Instant::now();
        let s = run_suite(suite, opts, pol)?;
        r.push(format!("{suite}.violations"), s.violations.len());
        r.push(format!("{suite}.elapsed_ms"), format!("{:.3}", t.elapsed().as_secs_f64() * 1e3));
        total += s.violations.len();
        if first.is_none() {
            first = s.violations.into_iter().next();
        }
    }
    r.push("violations", total);
    if let Some(v) = first {
        let dump = |m: &Matrix| serde_json::to_string(&MatrixFile::from_matrix(m)).expect("finite floats serialize");
        r.push("counterexample.suite", v.suite)
            .push("counterexample.trial", v.trial)
            .push("counterexample.reason", v.reason)
            .push("counterexample.a", dump(&v.a))
            .push("counterexample.b", dump(&v.b));
    }
    r.elapsed(start.elapsed());
    Ok((r, total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(suite: Suite, inject: bool) -> VerifyOptions {
        VerifyOptions { suite, trials: 12, seed: 3, parallel: false, inject_perturbation: inject }
    }

    #[test]
    fn clean_runs_have_no_violations() {
        let pol = Tolerances::default();
        let (_, total) = verify(&opts(Suite::All, false), &pol).unwrap();
        assert_eq!(total, 0);
    }

    #[test]
    fn injection_is_detected_by_every_suite() {
        let pol = Tolerances::default();
        for suite in Suite::CONCRETE {
            let s = run_suite(suite, &opts(suite, true), &pol).unwrap();
            assert!(!s.violations.is_empty(), "{suite}");
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let pol = Tolerances::default();
        let seq = run_suite(Suite::Criteria, &opts(Suite::Criteria, true), &pol).unwrap();
        let par = run_suite(Suite::Criteria, &VerifyOptions { parallel: true, ..opts(Suite::Criteria, true) }, &pol).unwrap();
        let trials = |s: &SuiteSummary| s.violations.iter().map(|v| v.trial).collect::<Vec<_>>();
        assert_eq!(trials(&seq), trials(&par));
    }
}
