//! Seeded random factories for the structured input classes.
//!
//! Every draw comes from `ChaCha8Rng` seeded with `GenConfig::seed` and placed
//! on stream `GenConfig::stream`, so a `(seed, stream)` pair reproduces the
//! same output on every platform and trials can be generated in parallel.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bloch2::{in_s, sample_ellipsoid, BlochPoint, StrictParam};
use crate::compat::definition_residual;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, TolerancePolicy};
use crate::order::PositiveContraction;
use crate::scalar::Real;

/// Attempts allowed to rejection loops before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GenClass {
    /// Spectrum uniform in `[0, 1]`.
    Generic,
    /// Spectrum uniform in `(δ, 1−δ)`.
    Strict,
    /// Orthogonal projection of random rank.
    Projection,
    /// Element of S (2x2, unit trace, positive determinant, not `½·1`).
    SElement,
    /// Strict non-commuting compatible pair in M_2.
    AcPairM2,
    /// Strict compatible pair in M_n, n even.
    AcPairMn,
    /// Compatible pair whose first member has eigenvalues 0 or 1.
    NonstrictAcPair,
    /// Strict `a` with a commuting compatible `b`.
    CommutingAcPair,
}

impl GenClass {
    pub const ALL: [GenClass; 8] = [
        GenClass::Generic,
        GenClass::Strict,
        GenClass::Projection,
        GenClass::SElement,
        GenClass::AcPairM2,
        GenClass::AcPairMn,
        GenClass::NonstrictAcPair,
        GenClass::CommutingAcPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GenClass::Generic => "generic",
            GenClass::Strict => "strict",
            GenClass::Projection => "projection",
            GenClass::SElement => "s_element",
            GenClass::AcPairM2 => "ac_pair_m2",
            GenClass::AcPairMn => "ac_pair_mn",
            GenClass::NonstrictAcPair => "nonstrict_ac_pair",
            GenClass::CommutingAcPair => "commuting_ac_pair",
        }
    }

    pub fn is_pair(self) -> bool {
        matches!(
            self,
            GenClass::AcPairM2 | GenClass::AcPairMn | GenClass::NonstrictAcPair | GenClass::CommutingAcPair
        )
    }
}

impl fmt::Display for GenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GenClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        GenClass::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::InvalidConfig { reason: format!("unknown class '{s}'") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    /// Independent stream index (one per trial).
    pub stream: u64,
    pub n: usize,
    /// Spectral margin `δ` kept from 0 and 1 by strict classes.
    pub margin: f64,
    pub class: GenClass,
}

impl GenConfig {
    pub const DEFAULT_MARGIN: f64 = 0.05;

    pub fn new(class: GenClass, n: usize, seed: u64) -> Result<Self> {
        let cfg = Self { seed, stream: 0, n, margin: Self::DEFAULT_MARGIN, class };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_stream(self, stream: u64) -> Self {
        Self { stream, ..self }
    }

    pub fn with_margin(self, margin: f64) -> Result<Self> {
        let cfg = Self { margin, ..self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::InvalidConfig { reason });
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !(self.margin > 0.0 && self.margin < 0.5) {
            return bad(format!("margin {} outside (0, 1/2)", self.margin));
        }
        match self.class {
            GenClass::SElement | GenClass::AcPairM2 if self.n != 2 => bad(format!("class {} needs n = 2", self.class)),
            GenClass::AcPairMn if self.n % 2 == 1 => bad(format!("class {} needs even n, got {}", self.class, self.n)),
            _ => Ok(()),
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        stream_rng(self.seed, self.stream)
    }
}

/// `ChaCha8Rng` seeded from `seed` and positioned on stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn lit<T: Real>(x: f64) -> T {
    T::lit(x)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(lit(re * std::f64::consts::FRAC_1_SQRT_2), lit(im * std::f64::consts::FRAC_1_SQRT_2))
}

/// Haar-distributed unitary from a fixed seed.
pub fn haar_unitary<T: Real>(n: usize, seed: u64) -> ComplexMatrix<T> {
    haar_unitary_with(n, &mut stream_rng(seed, 0))
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// `diag(R)` moved into `Q`.
pub fn haar_unitary_with<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix<T> {
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian::<T, R>(rng));
    let mut cols: Vec<Vec<Complex<T>>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        // Re-orthogonalize twice for stability.
        for _ in 0..2 {
            for i in 0..j {
                let proj: Complex<T> = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).fold(Complex::new(T::zero(), T::zero()), |s, x| s + x);
                let (head, tail) = cols.split_at_mut(j);
                for (z, q) in tail[0].iter_mut().zip(&head[i]) {
                    *z -= *q * proj;
                }
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    lit(rng.random_range(lo..hi))
}

/// Random positive contraction of class `Generic`, `Strict` or `Projection`
/// (other classes fall back to `Generic`).
pub fn random_positive_contraction<T: Real>(cfg: &GenConfig) -> Result<PositiveContraction<T>> {
    cfg.validate()?;
    Ok(positive_contraction_with(cfg, &mut cfg.rng()))
}

fn positive_contraction_with<T: Real, R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> PositiveContraction<T> {
    let n = cfg.n;
    let values: Vec<T> = match cfg.class {
        GenClass::Strict => (0..n).map(|_| uniform(rng, cfg.margin, 1.0 - cfg.margin)).collect(),
        GenClass::Projection => {
            let rank = rng.random_range(0..=n);
            (0..n).map(|i| if i < rank { T::one() } else { T::zero() }).collect()
        }
        _ => (0..n).map(|_| uniform(rng, 0.0, 1.0)).collect(),
    };
    let u = haar_unitary_with(n, rng);
    PositiveContraction::from_spectrum(&values, &u)
}

/// Random element of S, kept at relative distance `margin` from the boundary.
pub fn random_s_element<T: Real>(seed: u64) -> PositiveContraction<T> {
    s_element_with(GenConfig::DEFAULT_MARGIN, &mut stream_rng(seed, 0)).contraction()
}

fn s_element_with<T: Real, R: Rng + ?Sized>(margin: f64, rng: &mut R) -> StrictParam<T> {
    loop {
        let t: f64 = rng.random_range(margin..1.0 - margin);
        let r = (1.0 - margin) * rng.random::<f64>().sqrt() * (t * (1.0 - t)).sqrt();
        let phase = rng.random_range(0.0..std::f64::consts::TAU);
        let alpha = Complex::from_polar(lit::<T>(r), lit(phase));
        if let Ok(p) = StrictParam::new(lit(t), alpha) {
            if p.alpha.norm() > lit(1e-6) {
                return p;
            }
        }
    }
}

/// Strict non-commuting compatible pair in M_2: `a ∈ S` and `b` a point on the
/// partner spheroid of `a`, away from its extremities and from the boundary of S.
fn ac_pair_m2_with<T: Real, R: Rng + ?Sized>(margin: f64, rng: &mut R) -> Result<(PositiveContraction<T>, PositiveContraction<T>)> {
    let pol = TolerancePolicy::<T>::default();
    for _ in 0..MAX_ATTEMPTS {
        let a = s_element_with::<T, R>(margin, rng);
        let u = (1.0 - 2.0 * rng.random::<f64>()).acos();
        let v = rng.random_range(0.0..std::f64::consts::TAU);
        let Ok(b) = sample_ellipsoid(&a, lit(u), lit(v)) else { continue };
        let floor = lit::<T>(margin * margin);
        if in_s(b.matrix(), &pol) && b.eigen().min() > floor && b.eigen().max() < T::one() - floor {
            return Ok((a.contraction(), b));
        }
    }
    Err(Error::ResamplingExhausted { attempts: MAX_ATTEMPTS })
}

/// Random compatible pair of the class in `cfg`.
pub fn random_ac_pair<T: Real>(cfg: &GenConfig) -> Result<(PositiveContraction<T>, PositiveContraction<T>)> {
    cfg.validate()?;
    let rng = &mut cfg.rng();
    let n = cfg.n;
    match cfg.class {
        GenClass::AcPairM2 => ac_pair_m2_with(cfg.margin, rng),
        GenClass::AcPairMn => {
            let mut blocks = Vec::with_capacity(n / 2);
            for _ in 0..n / 2 {
                blocks.push(ac_pair_m2_with::<T, _>(cfg.margin, rng)?);
            }
            let q = haar_unitary_with::<T, _>(n, rng);
            Ok(conjugated_sum(&blocks, &q))
        }
        GenClass::NonstrictAcPair => {
            // a = 0 ⊕ 1 ⊕ (strict 2x2 blocks), b = b0 ⊕ b1 ⊕ (partners); at least
            // one eigenvalue of a is 0 or 1.
            let strict_blocks = rng.random_range(0..=(n - 1) / 2);
            let rest = n - 2 * strict_blocks;
            let zeros = rng.random_range(0..=rest);
            let mut blocks: Vec<(PositiveContraction<T>, PositiveContraction<T>)> = Vec::new();
            let generic_cfg = GenConfig { class: GenClass::Generic, ..*cfg };
            if zeros > 0 {
                let b0 = positive_contraction_with::<T, _>(&GenConfig { n: zeros, ..generic_cfg }, rng);
                blocks.push((PositiveContraction::zeros(zeros), b0));
            }
            if rest > zeros {
                let b1 = positive_contraction_with::<T, _>(&GenConfig { n: rest - zeros, ..generic_cfg }, rng);
                blocks.push((PositiveContraction::identity(rest - zeros), b1));
            }
            for _ in 0..strict_blocks {
                blocks.push(ac_pair_m2_with::<T, _>(cfg.margin, rng)?);
            }
            let q = haar_unitary_with::<T, _>(n, rng);
            Ok(conjugated_sum(&blocks, &q))
        }
        GenClass::CommutingAcPair => {
            let values: Vec<T> = (0..n).map(|_| uniform(rng, cfg.margin, 1.0 - cfg.margin)).collect();
            let bits: Vec<T> = (0..n).map(|_| if rng.random::<bool>() { T::one() } else { T::zero() }).collect();
            let u = haar_unitary_with::<T, _>(n, rng);
            Ok((PositiveContraction::from_spectrum(&values, &u), PositiveContraction::from_spectrum(&bits, &u)))
        }
        other => Err(Error::InvalidConfig { reason: format!("class {other} does not produce pairs") }),
    }
}

fn conjugated_sum<T: Real>(
    blocks: &[(PositiveContraction<T>, PositiveContraction<T>)],
    q: &ComplexMatrix<T>,
) -> (PositiveContraction<T>, PositiveContraction<T>) {
    let a_parts: Vec<&PositiveContraction<T>> = blocks.iter().map(|(a, _)| a).collect();
    let b_parts: Vec<&PositiveContraction<T>> = blocks.iter().map(|(_, b)| b).collect();
    (
        PositiveContraction::direct_sum(&a_parts).conjugate_by(q),
        PositiveContraction::direct_sum(&b_parts).conjugate_by(q),
    )
}

/// Random pair that is not compatible, with `residual_def > 10·eq_tol`.
///
/// Alternates between three sources: independent generic contractions, a
/// compatible pair whose second member is blended with a generic contraction,
/// and (in M_2) a spheroid partner pushed radially outward by 5%.
pub fn random_non_ac_pair<T: Real>(cfg: &GenConfig) -> Result<(PositiveContraction<T>, PositiveContraction<T>)> {
    let base = GenConfig { class: GenClass::Generic, ..*cfg };
    base.validate()?;
    let pol = TolerancePolicy::<T>::default();
    let threshold = lit::<T>(10.0) * pol.eq_tol;
    let rng = &mut cfg.rng();
    let n = cfg.n;
    for attempt in 0..MAX_ATTEMPTS {
        let (a, b) = match (attempt + cfg.stream as usize) % 3 {
            0 => (positive_contraction_with::<T, _>(&base, rng), positive_contraction_with::<T, _>(&base, rng)),
            1 if n >= 2 => {
                let pair_cfg = GenConfig { class: GenClass::NonstrictAcPair, ..*cfg };
                let inner = GenConfig { stream: rng.random(), ..pair_cfg };
                let (a, b) = random_ac_pair::<T>(&inner)?;
                let c = positive_contraction_with::<T, _>(&base, rng);
                let eps: T = uniform(rng, 0.05, 0.3);
                let mixed = &b.matrix().scale(T::one() - eps) + &c.matrix().scale(eps);
                (a, PositiveContraction::from_matrix(mixed, &pol)?)
            }
            2 if n == 2 => {
                let (a, b) = ac_pair_m2_with::<T, _>(cfg.margin, rng)?;
                let pt = BlochPoint::of_matrix(b.matrix()).scaled_from(&BlochPoint::center(), lit(1.05));
                if !pt.in_punctured_ball() {
                    continue;
                }
                (a, PositiveContraction::new(pt.to_matrix(), &pol)?)
            }
            _ => continue,
        };
        if definition_residual(a.hermitian(), b.hermitian())? > threshold {
            return Ok((a, b));
        }
    }
    Err(Error::ResamplingExhausted { attempts: MAX_ATTEMPTS })
}

/// Dispatch on `cfg.class`: single-matrix classes return `(x, None)`.
pub fn generate<T: Real>(cfg: &GenConfig) -> Result<(PositiveContraction<T>, Option<PositiveContraction<T>>)> {
    cfg.validate()?;
    match cfg.class {
        GenClass::SElement => Ok((s_element_with::<T, _>(cfg.margin, &mut cfg.rng()).contraction(), None)),
        c if c.is_pair() => random_ac_pair(cfg).map(|(a, b)| (a, Some(b))),
        _ => random_positive_contraction(cfg).map(|x| (x, None)),
    }
}
