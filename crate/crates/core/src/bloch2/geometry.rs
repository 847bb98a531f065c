use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Hermitian, TolerancePolicy};
use crate::order::PositiveContraction;
use crate::scalar::Real;

/// Points within this Euclidean distance of a major-axis extremity are
/// rejected by the spheroid sampler.
pub const EXTREMITY_EXCLUSION_RADIUS: f64 = 1e-6;

/// Coordinates `(x, y, z)` of the trace-one Hermitian `[[x, y+iz], [y−iz, 1−x]]`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochPoint<T = f64> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Real> BlochPoint<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn center() -> Self {
        Self::new(T::half(), T::zero(), T::zero())
    }

    /// Reads the coordinates off a 2x2 matrix (only the first row is used).
    pub fn of_matrix(c: &ComplexMatrix<T>) -> Self {
        Self::new(c[(0, 0)].re, c[(0, 1)].re, c[(0, 1)].im)
    }

    pub fn to_matrix(&self) -> Hermitian<T> {
        let off = Complex::new(self.y, self.z);
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => Complex::new(self.x, T::zero()),
            (1, 1) => Complex::new(T::one() - self.x, T::zero()),
            (0, 1) => off,
            _ => off.conj(),
        });
        Hermitian::symmetrize(&m)
    }

    pub fn distance(&self, other: &Self) -> T {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// `center + factor·(self − center)`.
    pub fn scaled_from(&self, center: &Self, factor: T) -> Self {
        Self::new(
            center.x + factor * (self.x - center.x),
            center.y + factor * (self.y - center.y),
            center.z + factor * (self.z - center.z),
        )
    }

    /// `0 < (x−½)² + y² + z² < ¼`, the punctured open ball that images S.
    pub fn in_punctured_ball(&self) -> bool {
        let r2 = self.distance(&Self::center()).powi(2);
        r2 > T::zero() && r2 < T::lit(0.25)
    }
}

/// `x² + y² + z² − x`; zero exactly on the rank-one projections.
pub fn director_sphere_residual<T: Real>(pt: &BlochPoint<T>) -> T {
    pt.x * pt.x + pt.y * pt.y + pt.z * pt.z - pt.x
}

/// Membership in S: trace one, determinant in `(0, ¼)`, not `½·1`.
pub fn in_s<T: Real>(c: &ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> bool {
    if c.rows() != 2 || c.cols() != 2 {
        return false;
    }
    let tr = c.trace();
    let det = c.det();
    let half = ComplexMatrix::scalar_identity(2, T::half());
    let off_center = (c - &half).frobenius_norm() > pol.eq_tol;
    (tr.re - T::one()).abs() <= pol.eq_tol
        && tr.im.abs() <= pol.eq_tol
        && c.hermitian_defect() <= pol.eq_tol
        && det.re > pol.eq_tol
        && det.re < T::lit(0.25) - pol.eq_tol
        && off_center
}

/// `(t, α)` describing `[[t, α], [ᾱ, 1−t]]` with `|α|² < t(1−t)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrictParam<T = f64> {
    pub t: T,
    pub alpha: Complex<T>,
}

impl<T: Real> StrictParam<T> {
    pub fn new(t: T, alpha: Complex<T>) -> Result<Self> {
        let p = Self { t, alpha };
        let ok = t > T::zero() && t < T::one() && alpha.norm_sqr() < t * (T::one() - t);
        let center = t == T::half() && alpha.norm_sqr() == T::zero();
        if ok && !center {
            Ok(p)
        } else {
            Err(Error::NotInS)
        }
    }

    /// Reads `(t, α)` from an element of S.
    pub fn from_matrix(c: &ComplexMatrix<T>, pol: &TolerancePolicy<T>) -> Result<Self> {
        if !in_s(c, pol) {
            return Err(Error::NotInS);
        }
        Self::new(c[(0, 0)].re, c[(0, 1)])
    }

    pub fn from_contraction(c: &PositiveContraction<T>, pol: &TolerancePolicy<T>) -> Result<Self> {
        Self::from_matrix(c.matrix(), pol)
    }

    pub fn k(&self) -> T {
        self.alpha.norm()
    }

    /// `arg α`, taken as 0 when `α = 0`.
    pub fn theta(&self) -> T {
        if self.alpha.norm_sqr() == T::zero() {
            T::zero()
        } else {
            self.alpha.arg()
        }
    }

    /// `det = t(1−t) − |α|²`.
    pub fn det(&self) -> T {
        self.t * (T::one() - self.t) - self.alpha.norm_sqr()
    }

    pub fn point(&self) -> BlochPoint<T> {
        BlochPoint::new(self.t, self.alpha.re, self.alpha.im)
    }

    /// The point of `1 − a`.
    pub fn complement_point(&self) -> BlochPoint<T> {
        BlochPoint::new(T::one() - self.t, -self.alpha.re, -self.alpha.im)
    }

    pub fn matrix(&self) -> Hermitian<T> {
        self.point().to_matrix()
    }

    pub fn contraction(&self) -> PositiveContraction<T> {
        let pol = TolerancePolicy::default();
        PositiveContraction::new(self.matrix(), &pol).expect("elements of S are contractions")
    }
}

/// Bloch points of `a`, `1 − a` and of the two spectral projections of `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochFrame<T = f64> {
    pub a_pt: BlochPoint<T>,
    pub a_prime_pt: BlochPoint<T>,
    pub p_a_pt: BlochPoint<T>,
    pub p_a_prime_pt: BlochPoint<T>,
    pub lambda1: T,
    pub lambda2: T,
}

pub fn bloch_frame<T: Real>(a: &StrictParam<T>) -> Result<BlochFrame<T>> {
    let disc = (T::one() - T::lit(4.0) * a.det()).max(T::zero()).sqrt();
    if disc <= T::epsilon() {
        return Err(Error::NotInS);
    }
    let lambda1 = T::half() * (T::one() + disc);
    let lambda2 = T::half() * (T::one() - disc);
    let gap = lambda1 - lambda2;
    let (re, im) = (a.alpha.re, a.alpha.im);
    Ok(BlochFrame {
        a_pt: a.point(),
        a_prime_pt: a.complement_point(),
        p_a_pt: BlochPoint::new((a.t - lambda2) / gap, re / gap, im / gap),
        p_a_prime_pt: BlochPoint::new((lambda1 - a.t) / gap, -re / gap, -im / gap),
        lambda1,
        lambda2,
    })
}

/// The prolate spheroid of partners of `a`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpheroidParams<T = f64> {
    pub center: BlochPoint<T>,
    pub semi_major: T,
    pub semi_minor: T,
    pub eccentricity: T,
    pub d: T,
    pub foci: (BlochPoint<T>, BlochPoint<T>),
    pub extremities: (BlochPoint<T>, BlochPoint<T>),
    pub cos_phi: T,
    pub sin_phi: T,
    pub phi: T,
    pub theta: T,
}

pub fn spheroid_params<T: Real>(a: &StrictParam<T>) -> Result<SpheroidParams<T>> {
    let frame = bloch_frame(a)?;
    let d = a.det();
    let ecc = (T::one() - T::lit(4.0) * d).sqrt();
    let cos_phi = (T::one() - T::two() * a.t) / ecc;
    let sin_phi = T::two() * a.k() / ecc;
    Ok(SpheroidParams {
        center: BlochPoint::center(),
        semi_major: T::half(),
        semi_minor: d.sqrt(),
        eccentricity: ecc,
        d,
        foci: (frame.a_pt, frame.a_prime_pt),
        extremities: (frame.p_a_pt, frame.p_a_prime_pt),
        cos_phi,
        sin_phi,
        phi: sin_phi.atan2(cos_phi),
        theta: a.theta(),
    })
}

impl<T: Real> SpheroidParams<T> {
    /// Surface point for polar angle `u` and azimuth `v` in the rotated frame.
    /// `u = 0` and `u = π` are the two extremities.
    pub fn surface_point(&self, u: T, v: T) -> BlochPoint<T> {
        let s = self.semi_minor;
        let big_u = T::half() * self.cos_phi + T::half() * u.cos();
        let big_v = T::half() * self.sin_phi + s * u.sin() * v.cos();
        let big_z = s * u.sin() * v.sin();
        let x = big_u * self.cos_phi + big_v * self.sin_phi;
        let y_rot = -big_u * self.sin_phi + big_v * self.cos_phi;
        let (st, ct) = self.theta.sin_cos();
        BlochPoint::new(x, y_rot * ct - big_z * st, y_rot * st + big_z * ct)
    }

    /// Distance to the nearer major-axis extremity.
    pub fn extremity_distance(&self, pt: &BlochPoint<T>) -> T {
        pt.distance(&self.extremities.0).min(pt.distance(&self.extremities.1))
    }

    pub fn is_excluded(&self, pt: &BlochPoint<T>) -> bool {
        self.extremity_distance(pt) <= T::lit(EXTREMITY_EXCLUSION_RADIUS)
    }
}

/// `d(pt, ã) + d(pt, ã′) − 1`.
pub fn ellipsoid_residual<T: Real>(a: &StrictParam<T>, pt: &BlochPoint<T>) -> T {
    pt.distance(&a.point()) + pt.distance(&a.complement_point()) - T::one()
}

/// Polynomial form of the spheroid equation,
/// `4t(1−t)x² + y² + z² − 4ϱ² + 4(1−2t)xϱ − 4t(1−t)x − 2(1−2t)ϱ + k²`
/// with `ϱ = Re α · y + Im α · z`.
pub fn polynomial_residual<T: Real>(a: &StrictParam<T>, pt: &BlochPoint<T>) -> T {
    let t = a.t;
    let four = T::lit(4.0);
    let tt = t * (T::one() - t);
    let l = T::one() - T::two() * t;
    let rho = a.alpha.re * pt.y + a.alpha.im * pt.z;
    four * tt * pt.x * pt.x + pt.y * pt.y + pt.z * pt.z - four * rho * rho + four * l * pt.x * rho
        - four * tt * pt.x
        - T::two() * l * rho
        + a.alpha.norm_sqr()
}

/// Which root of the partner equation to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `s = |α|² / t`.
    Low,
    /// `s = 1 − |α|² / (1 − t)`.
    High,
}

impl std::str::FromStr for Branch {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "low" => Ok(Branch::Low),
            "high" => Ok(Branch::High),
            other => Err(format!("unknown branch '{other}' (expected low or high)")),
        }
    }
}

/// The non-commuting partner `[[s, −α], [−ᾱ, 1−s]]` of `a = [[t, α], [ᾱ, 1−t]]`.
pub fn partner<T: Real>(a: &StrictParam<T>, branch: Branch) -> Result<PositiveContraction<T>> {
    let k2 = a.alpha.norm_sqr();
    if k2 == T::zero() {
        return Err(Error::AlphaZero);
    }
    let s = match branch {
        Branch::Low => {
            if a.t <= k2 {
                return Err(Error::BranchInvalid { branch: "low", requirement: "t > |alpha|^2" });
            }
            k2 / a.t
        }
        Branch::High => {
            if T::one() - a.t <= k2 {
                return Err(Error::BranchInvalid { branch: "high", requirement: "1 - t > |alpha|^2" });
            }
            T::one() - k2 / (T::one() - a.t)
        }
    };
    let pt = BlochPoint::new(s, -a.alpha.re, -a.alpha.im);
    PositiveContraction::new(pt.to_matrix(), &TolerancePolicy::default())
}

/// The partner at spheroid parameters `(u, v)`.
pub fn sample_ellipsoid<T: Real>(a: &StrictParam<T>, u: T, v: T) -> Result<PositiveContraction<T>> {
    let sp = spheroid_params(a)?;
    let pt = sp.surface_point(u, v);
    if sp.is_excluded(&pt) {
        return Err(Error::ExtremityExcluded);
    }
    PositiveContraction::new(pt.to_matrix(), &TolerancePolicy::default())
}

/// Conditions of the 2x2 criterion for strict non-commuting compatible pairs:
/// positive determinants, unit traces and a singular Jordan product.
pub fn strict_noncommuting_criterion<T: Real>(
    a: &PositiveContraction<T>,
    b: &PositiveContraction<T>,
    pol: &TolerancePolicy<T>,
) -> Result<bool> {
    a.matrix().ensure_same_shape(b.matrix())?;
    if a.n() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: a.n() });
    }
    let ab = crate::linalg::jordan(a.hermitian(), b.hermitian())?;
    let dets_positive = a.matrix().det().re > pol.eq_tol && b.matrix().det().re > pol.eq_tol;
    let traces_one =
        (a.matrix().trace().re - T::one()).abs() <= pol.eq_tol && (b.matrix().trace().re - T::one()).abs() <= pol.eq_tol;
    let singular = ab.det().re.abs() <= pol.eq_tol;
    Ok(dets_positive && traces_one && singular)
}
