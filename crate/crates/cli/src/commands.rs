use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use abscomp::bloch2::{classify_pair_2x2, in_s, partner, Branch, PairClass, StrictParam};
use abscomp::blockdecomp::{decompose_strict_pair, reconstruct};
use abscomp::compat::{
    check_block_characterization, commutes_within_compat, compatibility_report, is_abs_compatible,
    refine_decomposition, CompatibilityReport, DegenerateCase,
};
use abscomp::generators::{generate, GenClass, GenConfig};
use abscomp::{Contraction, Error, Tolerances};

use crate::error::{CliError, CliResult};
use crate::io::{read_contraction, render_matrix, write_matrix};
use crate::mesh::{spheroid_mesh, write_mesh};
use crate::report::RunReport;

pub const EXIT_HOLDS: u8 = 0;
pub const EXIT_FAILS: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// Result of a command: exit code, an optional report and optional raw output.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: u8,
    pub report: Option<RunReport>,
    pub stdout: Option<String>,
}

impl Outcome {
    fn report(code: u8, report: RunReport) -> Self {
        Self { code, report: Some(report), stdout: None }
    }
}

fn verdict_code(holds: bool) -> u8 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn read_pair(a: &Path, b: &Path, pol: &Tolerances) -> CliResult<(Contraction, Contraction)> {
    let x = read_contraction(a, pol)?;
    let y = read_contraction(b, pol)?;
    if x.n() != y.n() {
        return Err(Error::DimensionMismatch { expected: x.n(), found: y.n() }.into());
    }
    Ok((x, y))
}

fn push_criteria(r: &mut RunReport, c: &CompatibilityReport) {
    r.flag("verdict", c.verdict)
        .num("residual_def", c.residual_def)
        .flag("criterion_b", c.criterion_b.holds)
        .num("criterion_b_residual", c.criterion_b.residual)
        .flag("criterion_c", c.criterion_c.holds)
        .num("criterion_c_min_eig_first", c.criterion_c.min_eig_first)
        .num("criterion_c_min_eig_second", c.criterion_c.min_eig_second)
        .num("criterion_c_product_residual", c.criterion_c.product_residual)
        .flag("criterion_d", c.criterion_d.holds)
        .num("criterion_d_min_eig_first", c.criterion_d.min_eig_first)
        .num("criterion_d_min_eig_second", c.criterion_d.min_eig_second)
        .num("criterion_d_product_residual", c.criterion_d.product_residual)
        .flag("criteria_agree", c.all_agree());
}

pub fn check(a: &Path, b: &Path, pol: &Tolerances) -> CliResult<Outcome> {
    let start = Instant::now();
    let (x, y) = read_pair(a, b, pol)?;
    let c = compatibility_report(&x, &y, pol)?;
    let mut r = RunReport::new("check", pol);
    r.push("n", x.n());
    push_criteria(&mut r, &c);
    r.elapsed(start.elapsed());
    Ok(Outcome::report(verdict_code(c.verdict), r))
}

pub fn report(a: &Path, b: &Path, pol: &Tolerances) -> CliResult<Outcome> {
    let start = Instant::now();
    let (x, y) = read_pair(a, b, pol)?;
    let c = compatibility_report(&x, &y, pol)?;
    let cert = check_block_characterization(&x, &y, pol)?;
    let mut r = RunReport::new("report", pol);
    r.push("n", x.n());
    push_criteria(&mut r, &c);
    let case = match cert.case {
        DegenerateCase::P1Zero => "p1-zero",
        DegenerateCase::P1One => "p1-one",
        DegenerateCase::Generic => "generic",
    };
    let res = &cert.residuals;
    r.push("certificate_case", case)
        .push("certificate_p1_rank", cert.p1.rank())
        .flag("certificate_passes", cert.passes)
        .num("certificate_off_diagonal_sum", res.off_diagonal_sum)
        .num("certificate_upper_square", res.upper_square)
        .num("certificate_upper_commutator", res.upper_commutator)
        .num("certificate_lower_square", res.lower_square)
        .num("certificate_lower_commutator", res.lower_commutator)
        .num("certificate_intertwine_a", res.intertwine_a)
        .num("certificate_intertwine_b", res.intertwine_b)
        .push("certificate_orthogonality", res.orthogonality.map_or("none".to_string(), crate::report::sci))
        .flag("a_strict", x.is_strict(pol))
        .flag("b_strict", y.is_strict(pol))
        .num("commutator_norm", x.matrix().commutator_norm(y.matrix()));
    r.elapsed(start.elapsed());
    Ok(Outcome::report(verdict_code(c.verdict), r))
}

fn is_trivial(x: &Contraction, pol: &Tolerances) -> bool {
    let n = x.n();
    let zero = Contraction::zeros(n);
    let one = Contraction::identity(n);
    (x.matrix() - zero.matrix()).frobenius_norm() <= pol.eq_tol || (x.matrix() - one.matrix()).frobenius_norm() <= pol.eq_tol
}

pub fn classify(a: &Path, b: &Path, pol: &Tolerances) -> CliResult<Outcome> {
    let start = Instant::now();
    let (x, y) = read_pair(a, b, pol)?;
    let mut r = RunReport::new("classify", pol);
    r.push("n", x.n());
    let compatible = is_abs_compatible(&x, &y, pol)?;
    r.flag("verdict", compatible);

    if is_trivial(&x, pol) || is_trivial(&y, pol) {
        r.push("class", "trivial");
    } else if x.n() == 2 {
        let class = classify_pair_2x2(&x, &y, pol)?;
        r.push("class", class.tag());
        match class {
            PairClass::NotCompatible { residual } => {
                r.num("residual_def", residual);
            }
            PairClass::CommutingStrict { alpha, beta, .. } => {
                r.num("alpha", alpha).num("beta", beta);
            }
            PairClass::NonStrictCase1 { lambda, mu, complemented, .. } => {
                r.num("lambda", lambda).num("mu", mu).flag("complemented", complemented);
            }
            PairClass::NonStrictCase2 { t, lambda, complemented, .. }
            | PairClass::NonStrictCase3 { t, lambda, complemented, .. } => {
                r.num("t", t).num("lambda", lambda).flag("complemented", complemented);
            }
            PairClass::StrictNonCommuting { a, b } => {
                r.num("a_t", a.t).num("a_alpha_re", a.alpha.re).num("a_alpha_im", a.alpha.im);
                r.num("b_t", b.t).num("b_alpha_re", b.alpha.re).num("b_alpha_im", b.alpha.im);
            }
        }
    } else if !compatible {
        r.push("class", "not-compatible");
    } else if x.is_strict(pol) && y.is_strict(pol) {
        match decompose_strict_pair(&x, &y, pol) {
            Ok(pb) => {
                r.push("class", "strict-decomposable").push("k", pb.k()).push("flagged_blocks", pb.flagged.len());
            }
            Err(e) => {
                r.push("class", "strict-undecomposed").push("decomposition_error", e);
            }
        }
    } else {
        let f = refine_decomposition(&x, &y, pol)?;
        let t = &f.triple;
        r.push("class", "non-strict")
            .push("s_rank", t.s().rank())
            .push("strict_range_rank", t.strict_range().rank())
            .push("null_rank", t.n().rank())
            .num("leakage", t.leakage)
            .num("corner_residual", t.corner_residual)
            .flag("commuting", commutes_within_compat(&x, &y, pol)?);
    }
    r.elapsed(start.elapsed());
    Ok(Outcome::report(verdict_code(compatible), r))
}

fn ensure_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub fn decompose(a: &Path, b: &Path, out_dir: &Path, pol: &Tolerances) -> CliResult<Outcome> {
    let start = Instant::now();
    let (x, y) = read_pair(a, b, pol)?;
    let mut r = RunReport::new("decompose", pol);
    r.push("n", x.n());
    if !is_abs_compatible(&x, &y, pol)? {
        r.flag("verdict", false);
        r.elapsed(start.elapsed());
        return Ok(Outcome::report(EXIT_FAILS, r));
    }
    r.flag("verdict", true);
    ensure_dir(out_dir)?;
    let mut written: Vec<PathBuf> = Vec::new();
    let mut put = |name: String, m: &abscomp::Matrix| -> CliResult<()> {
        let path = out_dir.join(name);
        write_matrix(&path, m)?;
        written.push(path);
        Ok(())
    };

    if x.is_strict(pol) && y.is_strict(pol) {
        let pb = decompose_strict_pair(&x, &y, pol)?;
        let (ra, rb) = reconstruct(&pb);
        put("w.json".into(), &pb.w)?;
        for (i, (ai, bi)) in pb.pairs.iter().enumerate() {
            put(format!("pair_{i}_a.json"), ai.matrix())?;
            put(format!("pair_{i}_b.json"), bi.matrix())?;
        }
        let err = (&ra - x.matrix()).frobenius_norm().max((&rb - y.matrix()).frobenius_norm());
        r.push("kind", "strict-blocks")
            .push("k", pb.k())
            .num("reconstruction_error", err)
            .num("unitarity_residual", pb.unitarity_residual())
            .push("flagged_blocks", format!("{:?}", pb.flagged));
    } else {
        let f = refine_decomposition(&x, &y, pol)?;
        let t = &f.triple;
        put("s_a.json".into(), t.s().matrix())?;
        put("strict_range.json".into(), t.strict_range().matrix())?;
        put("n_a.json".into(), t.n().matrix())?;
        put("b1.json".into(), t.b1.matrix())?;
        put("b2.json".into(), t.b2.matrix())?;
        put("b3.json".into(), t.b3.matrix())?;
        let (ra, rb) = f.reassembly_residuals(&x, &y);
        r.push("kind", "frame-triple")
            .num("leakage", t.leakage)
            .num("corner_residual", t.corner_residual)
            .num("reassembly_residual_a", ra)
            .num("reassembly_residual_b", rb)
            .flag("commuting", f.e_b2_vanishes());
    }
    let names: Vec<String> = written.iter().map(|p| p.display().to_string()).collect();
    r.push("files", names.join(","));
    r.elapsed(start.elapsed());
    Ok(Outcome::report(EXIT_HOLDS, r))
}

fn read_strict_param(a: &Path, pol: &Tolerances) -> CliResult<StrictParam> {
    let x = read_contraction(a, pol)?;
    if x.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: x.n() }.into());
    }
    Ok(StrictParam::from_contraction(&x, pol)?)
}

pub fn ellipsoid(a: &Path, grid: (usize, usize), out: Option<&Path>, pol: &Tolerances) -> CliResult<Outcome> {
    let start = Instant::now();
    let param = read_strict_param(a, pol)?;
    let rows = spheroid_mesh(&param, grid.0, grid.1, pol)?;
    let Some(path) = out else {
        let mut buf = Vec::new();
        write_mesh(&rows, &mut buf)?;
        return Ok(Outcome { code: EXIT_HOLDS, report: None, stdout: Some(String::from_utf8_lossy(&buf).into_owned()) });
    };
    let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
    write_mesh(&rows, file)?;
    let surface = rows.iter().filter(|r| r.kind == "surface");
    let worst = surface.clone().map(|r| r.residual.abs()).fold(0.0, f64::max);
    let mut r = RunReport::new("ellipsoid", pol);
    r.push("grid", format!("{}x{}", grid.0, grid.1))
        .push("rows", rows.len())
        .num("max_surface_residual", worst)
        .push("excluded_rows", rows.iter().filter(|r| r.excluded_extremity).count())
        .push("out", path.display());
    r.elapsed(start.elapsed());
    Ok(Outcome::report(EXIT_HOLDS, r))
}

pub fn partner_cmd(a: &Path, branch: Branch, out: Option<&Path>, pol: &Tolerances) -> CliResult<Outcome> {
    let param = read_strict_param(a, pol)?;
    let b = partner(&param, branch)?;
    match out {
        Some(path) => {
            write_matrix(path, b.matrix())?;
            let mut r = RunReport::new("partner", pol);
            r.push("branch", if branch == Branch::Low { "low" } else { "high" }).push("out", path.display());
            Ok(Outcome::report(EXIT_HOLDS, r))
        }
        None => Ok(Outcome { code: EXIT_HOLDS, report: None, stdout: Some(render_matrix(b.matrix())) }),
    }
}

/// Checks the class postcondition of a generated sample.
fn postcondition(cfg: &GenConfig, x: &Contraction, y: Option<&Contraction>, pol: &Tolerances) -> CliResult<bool> {
    Ok(match (cfg.class, y) {
        (GenClass::Strict, _) => x.is_strict(pol),
        (GenClass::Projection, _) => x.idempotency_residual() <= pol.eq_tol,
        (GenClass::SElement, _) => in_s(x.matrix(), pol),
        (GenClass::Generic, _) => true,
        (_, Some(y)) => is_abs_compatible(x, y, pol)?,
        (_, None) => false,
    })
}

pub fn gen(cfg: &GenConfig, out_dir: &Path, pol: &Tolerances) -> CliResult<Outcome> {
    let (x, y) = generate::<f64>(cfg)?;
    if !postcondition(cfg, &x, y.as_ref(), pol)? {
        return Err(CliError::Usage(format!("generated sample violates the {} postcondition", cfg.class)));
    }
    ensure_dir(out_dir)?;
    let mut files = vec![out_dir.join("a.json")];
    write_matrix(&files[0], x.matrix())?;
    if let Some(y) = &y {
        files.push(out_dir.join("b.json"));
        write_matrix(&files[1], y.matrix())?;
    }
    let mut r = RunReport::new("gen", pol);
    r.push("class", cfg.class)
        .push("n", cfg.n)
        .push("seed", cfg.seed)
        .push("stream", cfg.stream)
        .push("margin", cfg.margin)
        .push("files", files.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(","));
    Ok(Outcome::report(EXIT_HOLDS, r))
}
