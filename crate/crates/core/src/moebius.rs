//! 2×2 complex Möbius maps acting on the Riemann sphere and on the
//! upper half-space model of hyperbolic 3-space.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for `|tr| = 2` and "trace is real" decisions.
pub const CLASSIFY_TOL: f64 = 1e-10;

/// Determinants below this magnitude are refused by [`MoebiusMap::normalize`].
pub const SINGULAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum MoebiusError {
    #[error("matrix is numerically singular (|det| = {0:e})")]
    NearSingular(f64),
    #[error("isometry is {0:?}, not loxodromic")]
    NotLoxodromic(IsometryClass),
}

/// A point of the sphere at infinity `ℂ ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex64),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<Complex64> {
        match self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Chordal-free comparison: two finite points within `tol`, or both infinite.
    pub fn approx_eq(self, other: BoundaryPoint, tol: f64) -> bool {
        match (self, other) {
            (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => true,
            (BoundaryPoint::Finite(a), BoundaryPoint::Finite(b)) => (a - b).norm() <= tol,
            _ => false,
        }
    }
}

impl From<Complex64> for BoundaryPoint {
    fn from(z: Complex64) -> Self {
        BoundaryPoint::Finite(z)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Finite(z) => write!(f, "{z}"),
            BoundaryPoint::Infinity => f.write_str("∞"),
        }
    }
}

/// A point `(z, t)` of upper half-space, `t > 0` the Euclidean height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperHalfSpacePoint {
    pub z: Complex64,
    pub t: f64,
}

impl UpperHalfSpacePoint {
    pub fn new(z: Complex64, t: f64) -> Self {
        debug_assert!(t > 0.0, "height must be positive, got {t}");
        Self { z, t }
    }

    /// The point at height 1 over the origin.
    pub fn apex() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 1.0)
    }
}

/// Hyperbolic distance in the upper half-space model.
///
/// Evaluated as `2 asinh(‖Δ‖ / (2√(t₁t₂)))`, which agrees with
/// `cosh d = 1 + (|Δz|² + Δt²)/(2 t₁ t₂)` but keeps full relative
/// precision for nearby points.
pub fn hyperbolic_distance(p: UpperHalfSpacePoint, q: UpperHalfSpacePoint) -> f64 {
    let dz = (p.z - q.z).norm();
    let dt = p.t - q.t;
    let chord = dz.hypot(dt);
    2.0 * (chord / (2.0 * (p.t * q.t).sqrt())).asinh()
}

/// An oriented geodesic of ℍ³, given by its two ideal endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicLine {
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IsometryClass {
    Identity,
    Parabolic,
    Elliptic,
    Loxodromic,
}

/// Matrix `[[a, b], [c, d]]` representing `z ↦ (az + b)/(cz + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl MoebiusMap {
    /// Builds the matrix as given, without normalizing.
    pub const fn from_entries(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Self { a, b, c, d }
    }

    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        Self::from_entries(a, b, c, d).normalize()
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::from_entries(one, zero, zero, one)
    }

    /// The parabolic translation `z ↦ z + tau`.
    pub fn translation(tau: Complex64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self::from_entries(one, tau, Complex64::new(0.0, 0.0), one)
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Rescales to determinant 1 using the principal square root of `det`.
    ///
    /// The representative is only defined up to sign in PSL₂(ℂ); callers
    /// should only rely on sign-invariant quantities.
    pub fn normalize(&self) -> Result<Self, MoebiusError> {
        let det = self.det();
        let mag = det.norm();
        if !(mag >= SINGULAR_TOL) {
            return Err(MoebiusError::NearSingular(mag));
        }
        let s = det.sqrt();
        Ok(Self::from_entries(self.a / s, self.b / s, self.c / s, self.d / s))
    }

    /// Matrix product `self · rhs`, renormalized.
    pub fn compose(&self, rhs: &MoebiusMap) -> MoebiusMap {
        let prod = Self::from_entries(
            self.a * rhs.a + self.b * rhs.c,
            self.a * rhs.b + self.b * rhs.d,
            self.c * rhs.a + self.d * rhs.c,
            self.c * rhs.b + self.d * rhs.d,
        );
        // The product of two unimodular matrices is unimodular, so this
        // only corrects rounding drift.
        prod.normalize().unwrap_or(prod)
    }

    /// Inverse of a determinant-1 matrix.
    pub fn inverse(&self) -> MoebiusMap {
        Self::from_entries(self.d, -self.b, -self.c, self.a)
    }

    /// `self` composed with itself `n` times; negative `n` uses the inverse.
    pub fn power(&self, n: i64) -> MoebiusMap {
        let base = if n < 0 { self.inverse() } else { *self };
        (0..n.unsigned_abs()).fold(MoebiusMap::identity(), |acc, _| acc.compose(&base))
    }

    pub fn apply_boundary(&self, p: BoundaryPoint) -> BoundaryPoint {
        let zero = Complex64::new(0.0, 0.0);
        match p {
            BoundaryPoint::Infinity => {
                if self.c == zero {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == zero {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Poincaré extension of the map to upper half-space.
    pub fn apply_h3(&self, p: UpperHalfSpacePoint) -> UpperHalfSpacePoint {
        let UpperHalfSpacePoint { z, t } = p;
        let w = self.c * z + self.d;
        let den = w.norm_sqr() + self.c.norm_sqr() * t * t;
        let num = (self.a * z + self.b) * w.conj() + self.a * self.c.conj() * t * t;
        UpperHalfSpacePoint { z: num / den, t: t / den }
    }

    pub fn classify(&self) -> IsometryClass {
        let tr = self.trace();
        let real = tr.im.abs() <= CLASSIFY_TOL;
        if real && (tr.re.abs() - 2.0).abs() <= CLASSIFY_TOL {
            let one = Complex64::new(1.0, 0.0);
            let sign = tr.re.signum();
            let off_identity = (self.a - one * sign).norm()
                + (self.d - one * sign).norm()
                + self.b.norm()
                + self.c.norm();
            if off_identity <= CLASSIFY_TOL {
                IsometryClass::Identity
            } else {
                IsometryClass::Parabolic
            }
        } else if real && tr.re.abs() < 2.0 {
            IsometryClass::Elliptic
        } else {
            IsometryClass::Loxodromic
        }
    }

    /// Complex translation length `L` with `2 cosh(L/2) = ±tr`,
    /// `Re L > 0` and `Im L ∈ (−π, π]`.
    pub fn complex_length(&self) -> Result<Complex64, MoebiusError> {
        match self.classify() {
            IsometryClass::Loxodromic => Ok(complex_length_from_trace(self.trace())),
            other => Err(MoebiusError::NotLoxodromic(other)),
        }
    }

    /// The two fixed points on the sphere at infinity, i.e. the ends of
    /// the axis.
    pub fn fixed_points(&self) -> Result<GeodesicLine, MoebiusError> {
        let class = self.classify();
        if class != IsometryClass::Loxodromic {
            return Err(MoebiusError::NotLoxodromic(class));
        }
        let zero = Complex64::new(0.0, 0.0);
        if self.c == zero {
            // z ↦ (a z + b)/d fixes ∞ and b/(d − a).
            let finite = self.b / (self.d - self.a);
            return Ok(GeodesicLine {
                start: BoundaryPoint::Finite(finite),
                end: BoundaryPoint::Infinity,
            });
        }
        // c z² + (d − a) z − b = 0
        let half = (self.a - self.d) / (self.c * 2.0);
        let disc = (half * half + self.b / self.c).sqrt();
        let (big, small) = stable_roots(half, disc, self.b / self.c * -1.0);
        Ok(GeodesicLine {
            start: BoundaryPoint::Finite(small),
            end: BoundaryPoint::Finite(big),
        })
    }
}

impl fmt::Display for MoebiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Roots `half ± disc` of a monic quadratic with constant term `product`,
/// larger-magnitude root first. The smaller one is recovered from the
/// product so it keeps relative precision.
pub(crate) fn stable_roots(half: Complex64, disc: Complex64, product: Complex64) -> (Complex64, Complex64) {
    let big = if (half.conj() * disc).re >= 0.0 { half + disc } else { half - disc };
    if big.norm() == 0.0 {
        return (big, big);
    }
    (big, product / big)
}

pub(crate) fn complex_length_from_trace(tr: Complex64) -> Complex64 {
    let mut l = (tr / 2.0).acosh() * 2.0;
    if l.re < 0.0 {
        l = -l;
    }
    // Fold the imaginary part into (−π, π]; the ± ambiguity of the trace
    // shifts it by 2π.
    let two_pi = 2.0 * PI;
    let mut im = l.im.rem_euclid(two_pi);
    if im > PI {
        im -= two_pi;
    }
    Complex64::new(l.re, im)
}
