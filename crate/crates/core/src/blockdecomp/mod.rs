//! Factorization of a strict compatible pair in M_n into a unitary conjugate
//! of a direct sum of 2x2 compatible pairs.

mod assignment;
mod simdiag;

pub use assignment::{assignment_score, exhaustive, hungarian, nonzero_diagonal_permutation, EXHAUSTIVE_LIMIT};
pub use simdiag::simultaneous_diagonalize;

use log::debug;

use crate::bloch2::in_s;
use crate::compat::{definition_residual, is_abs_compatible};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, jordan, ComplexMatrix, Hermitian, TolerancePolicy};
use crate::order::PositiveContraction;
use crate::scalar::Real;

/// Intermediate data of the factorization, kept for inspection.
#[derive(Clone, Debug)]
pub struct IntermediateFrame<T = f64> {
    /// Rank of the range projection of `a∘b`.
    pub k: usize,
    /// Diagonals of the compressed blocks after `u1 ⊕ u2` (and the permutation).
    pub d1: Vec<T>,
    pub d2: Vec<T>,
    pub e1: Vec<T>,
    pub e2: Vec<T>,
    pub s12: ComplexMatrix<T>,
    /// `sigma[i]` is the original first-block index moved to position `i`.
    pub sigma: Vec<usize>,
    pub u1: ComplexMatrix<T>,
    pub u2: ComplexMatrix<T>,
    pub v: ComplexMatrix<T>,
    pub residuals: FrameResiduals<T>,
}

/// Norms of the identities the factorization relies on; all vanish in exact arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FrameResiduals<T = f64> {
    /// `b12 + a12` in the range frame of `a∘b`.
    pub off_diagonal_sum: T,
    /// `s12 s12* − (1 − D1)(1 − E1)`.
    pub row_gram: T,
    /// `s12* s12 − D2 E2`.
    pub column_gram: T,
    /// `s12 − D1 s12 − s12 D2` and the same with `E`.
    pub intertwining: T,
    /// `max |α_i + α_{k+i} − 1|, |β_i + β_{k+i} − 1|`.
    pub complementary_diagonals: T,
    /// `max |(α_i − α_j) s_ij|, |(β_i − β_j) s_ij|`.
    pub cluster_leak: T,
    /// `s12 s12* − s12* s12`.
    pub normality: T,
    /// Off-block-diagonal mass of the conjugated pair.
    pub block_leak: T,
}

/// `a = w* (a_1 ⊕ … ⊕ a_k) w`, `b = w* (b_1 ⊕ … ⊕ b_k) w`.
#[derive(Clone, Debug)]
pub struct PairedBlocks<T = f64> {
    pub w: ComplexMatrix<T>,
    pub pairs: Vec<(PositiveContraction<T>, PositiveContraction<T>)>,
    /// Indices of pairs that fail S-membership or compatibility within tolerance.
    pub flagged: Vec<usize>,
    pub frame: Option<IntermediateFrame<T>>,
}

impl<T: Real> PairedBlocks<T> {
    pub fn k(&self) -> usize {
        self.pairs.len()
    }

    /// `‖w* w − 1‖_F`.
    pub fn unitarity_residual(&self) -> T {
        let n = self.w.n();
        (&(&self.w.adjoint() * &self.w) - &ComplexMatrix::identity(n)).frobenius_norm()
    }
}

/// `(w* (⊕ a_i) w, w* (⊕ b_i) w)`.
pub fn reconstruct<T: Real>(pb: &PairedBlocks<T>) -> (ComplexMatrix<T>, ComplexMatrix<T>) {
    let a_blocks: Vec<&ComplexMatrix<T>> = pb.pairs.iter().map(|(a, _)| a.matrix()).collect();
    let b_blocks: Vec<&ComplexMatrix<T>> = pb.pairs.iter().map(|(_, b)| b.matrix()).collect();
    let a = ComplexMatrix::direct_sum(&a_blocks).compress(&pb.w);
    let b = ComplexMatrix::direct_sum(&b_blocks).compress(&pb.w);
    (a, b)
}

/// Factor a strict compatible pair. Checks run in the order: strictness,
/// compatibility, parity of `n`, rank of `a∘b`.
pub fn decompose_strict_pair<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<PairedBlocks<T>> {
    a.matrix().ensure_same_shape(b.matrix())?;
    if !a.is_strict(pol) || !b.is_strict(pol) {
        return Err(Error::NotStrict);
    }
    if !is_abs_compatible(a, b, pol)? {
        let residual = definition_residual(a.hermitian(), b.hermitian())?;
        return Err(Error::NotCompatible { residual: residual.as_f64() });
    }
    let n = a.n();
    if n % 2 == 1 {
        return Err(Error::OddDimension { n });
    }
    let k = n / 2;

    let ab = jordan(a.hermitian(), b.hermitian())?;
    let es = hermitian_eig(&ab)?;
    let band = pol.rank_band(n, es.spectral_radius());
    let rank = es.values.iter().filter(|&&l| l.abs() > band).count();
    if rank != k {
        return Err(Error::RankMismatch { rank, expected: k });
    }

    // Q = [range of a∘b | kernel of a∘b]; eigenvalues are ascending.
    let q = es.vectors.select_columns(&(k..n).chain(0..k).collect::<Vec<_>>());
    let aq = a.hermitian().compress(&q);
    let bq = b.hermitian().compress(&q);
    let off_diagonal_sum = (&aq.block(0, k, k, k) + &bq.block(0, k, k, k)).frobenius_norm();

    let u1 = simultaneous_diagonalize(&[&aq.block(0, 0, k, k), &bq.block(0, 0, k, k)], pol)?;
    let u2 = simultaneous_diagonalize(&[&aq.block(k, k, k, k), &bq.block(k, k, k, k)], pol)?;
    let s12_raw = &(&u1.adjoint() * &aq.block(0, k, k, k)) * &u2;
    let sigma = nonzero_diagonal_permutation(&s12_raw, pol)?;
    let u1 = u1.select_columns(&sigma);
    let u = ComplexMatrix::direct_sum(&[&u1, &u2]);

    let au = aq.conjugate_by(&u);
    let bu = bq.conjugate_by(&u);
    let (d1m, e1m) = (au.block(0, 0, k, k), bu.block(0, 0, k, k));
    let (d2m, e2m) = (au.block(k, k, k, k), bu.block(k, k, k, k));
    let s12 = au.block(0, k, k, k);
    let residuals = frame_residuals(&d1m, &d2m, &e1m, &e2m, &s12, off_diagonal_sum);

    let v = simultaneous_diagonalize(&[&d1m, &e1m, &s12], pol)?;
    let vv = ComplexMatrix::direct_sum(&[&v, &v]);
    let interleave: Vec<usize> = (0..k).flat_map(|i| [i, k + i]).collect();
    let perm = ComplexMatrix::<T>::identity(n).select_columns(&interleave);
    let big_w = &(&(&q * &u) * &vv) * &perm;

    let a0 = a.hermitian().compress(&big_w);
    let b0 = b.hermitian().compress(&big_w);
    let block_leak = block_off_diagonal(&a0).max(block_off_diagonal(&b0));
    let residuals = FrameResiduals { block_leak, ..residuals };
    log_residuals(&residuals);

    let mut pairs = Vec::with_capacity(k);
    let mut flagged = Vec::new();
    for i in 0..k {
        let ai = PositiveContraction::new(Hermitian::symmetrize(&a0.block(2 * i, 2 * i, 2, 2)), pol)?;
        let bi = PositiveContraction::new(Hermitian::symmetrize(&b0.block(2 * i, 2 * i, 2, 2)), pol)?;
        let ok = in_s(ai.matrix(), pol) && in_s(bi.matrix(), pol) && is_abs_compatible(&ai, &bi, pol)?;
        if !ok {
            debug!("block {i} fails membership or compatibility");
            flagged.push(i);
        }
        pairs.push((ai, bi));
    }

    let diag = |m: &ComplexMatrix<T>| m.real_diagonal();
    let frame = IntermediateFrame {
        k,
        d1: diag(&d1m),
        d2: diag(&d2m),
        e1: diag(&e1m),
        e2: diag(&e2m),
        s12,
        sigma,
        u1,
        u2,
        v,
        residuals,
    };
    Ok(PairedBlocks { w: big_w.adjoint(), pairs, flagged, frame: Some(frame) })
}

fn frame_residuals<T: Real>(
    d1: &ComplexMatrix<T>,
    d2: &ComplexMatrix<T>,
    e1: &ComplexMatrix<T>,
    e2: &ComplexMatrix<T>,
    s12: &ComplexMatrix<T>,
    off_diagonal_sum: T,
) -> FrameResiduals<T> {
    let k = s12.n();
    let one = ComplexMatrix::<T>::identity(k);
    let s_adj = s12.adjoint();
    let ss_star = s12 * &s_adj;
    let s_star_s = &s_adj * s12;
    let row_gram = (&ss_star - &(&(&one - d1) * &(&one - e1))).frobenius_norm();
    let column_gram = (&s_star_s - &(d2 * e2)).frobenius_norm();
    let inter_a = (&(s12 - &(d1 * s12)) - &(s12 * d2)).frobenius_norm();
    let inter_b = (&(s12 - &(e1 * s12)) - &(s12 * e2)).frobenius_norm();

    let (al, be) = (d1.real_diagonal(), e1.real_diagonal());
    let (al2, be2) = (d2.real_diagonal(), e2.real_diagonal());
    let mut complementary = T::zero();
    let mut cluster = T::zero();
    for i in 0..k {
        complementary = complementary.max((al[i] + al2[i] - T::one()).abs()).max((be[i] + be2[i] - T::one()).abs());
        for j in 0..k {
            let s = s12[(i, j)].norm();
            cluster = cluster.max((al[i] - al[j]).abs() * s).max((be[i] - be[j]).abs() * s);
        }
    }
    FrameResiduals {
        off_diagonal_sum,
        row_gram,
        column_gram,
        intertwining: inter_a.max(inter_b),
        complementary_diagonals: complementary,
        cluster_leak: cluster,
        normality: (&ss_star - &s_star_s).frobenius_norm(),
        block_leak: T::zero(),
    }
}

fn block_off_diagonal<T: Real>(m: &ComplexMatrix<T>) -> T {
    let mut acc = T::zero();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if i / 2 != j / 2 {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn log_residuals<T: Real>(r: &FrameResiduals<T>) {
    debug!(
        "block factorization residuals: b12+a12={:e} row_gram={:e} column_gram={:e} intertwining={:e} \
         complementary={:e} cluster_leak={:e} normality={:e} block_leak={:e}",
        r.off_diagonal_sum.as_f64(),
        r.row_gram.as_f64(),
        r.column_gram.as_f64(),
        r.intertwining.as_f64(),
        r.complementary_diagonals.as_f64(),
        r.cluster_leak.as_f64(),
        r.normality.as_f64(),
        r.block_leak.as_f64(),
    );
}
