//! Cusp data: the translation lattice on the horosphere at height 1, the
//! offset of the second bumping-point lift, and the normalizing constant
//! of the isometry carrying the horosphere over 0 to the one at ∞.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::RationalCusp;
use crate::moebius::{hyperbolic_distance, MoebiusMap, UpperHalfSpacePoint};

/// `|Im(t_β / t_α)|` below this is treated as a collinear lattice.
pub const DEGENERATE_LATTICE_TOL: f64 = 1e-12;

/// `|c|` below this is rejected.
pub const ZERO_C_TOL: f64 = 1e-12;

/// Machine-readable rejection reasons for cusp data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InvalidReason {
    BothOffsetsZero,
    DegenerateLattice,
    ZeroC,
    NonFinite,
}

impl InvalidReason {
    pub fn code(self) -> &'static str {
        match self {
            InvalidReason::BothOffsetsZero => "BothOffsetsZero",
            InvalidReason::DegenerateLattice => "DegenerateLattice",
            InvalidReason::ZeroC => "ZeroC",
            InvalidReason::NonFinite => "NonFinite",
        }
    }
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CuspError {
    #[error("invalid cusp data: {0}")]
    Invalid(InvalidReason),
}

/// Coordinates `(x, y)` of a point `x·t_α + y·t_β` of the boundary plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LatticeCoords {
    pub x: f64,
    pub y: f64,
}

impl LatticeCoords {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_zero(&self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftKind {
    A,
    B,
}

/// Label of a lift of the bumping point on the horosphere at height 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftLabel {
    pub p: i64,
    pub q: i64,
    pub kind: LiftKind,
}

/// Complete geometric input for one cusp.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspData {
    pub name: String,
    pub t_alpha: Complex64,
    pub t_beta: Complex64,
    pub x0: f64,
    pub y0: f64,
    pub c: Complex64,
    rational: Option<RationalCusp>,
}

impl CuspData {
    /// Validates and builds cusp data. Offsets are reduced into `[0, 1)`.
    pub fn new(
        name: impl Into<String>,
        t_alpha: Complex64,
        t_beta: Complex64,
        x0: f64,
        y0: f64,
        c: Complex64,
    ) -> Result<Self, CuspError> {
        let finite = [t_alpha.re, t_alpha.im, t_beta.re, t_beta.im, x0, y0, c.re, c.im]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(CuspError::Invalid(InvalidReason::NonFinite));
        }
        let x0 = reduce_unit(x0);
        let y0 = reduce_unit(y0);
        if x0 == 0.0 && y0 == 0.0 {
            return Err(CuspError::Invalid(InvalidReason::BothOffsetsZero));
        }
        if t_alpha.norm() == 0.0 || (t_beta / t_alpha).im.abs() < DEGENERATE_LATTICE_TOL {
            return Err(CuspError::Invalid(InvalidReason::DegenerateLattice));
        }
        if c.norm() < ZERO_C_TOL {
            return Err(CuspError::Invalid(InvalidReason::ZeroC));
        }
        Ok(Self { name: name.into(), t_alpha, t_beta, x0, y0, c, rational: None })
    }

    /// Builds cusp data from exact rational inputs; floating-point fields
    /// are the nearest doubles.
    pub fn from_rational(name: impl Into<String>, rational: RationalCusp) -> Result<Self, CuspError> {
        let rational = rational.reduced();
        let f = rational.to_f64();
        let mut cusp = Self::new(name, f.t_alpha, f.t_beta, f.x0, f.y0, f.c)?;
        if rational.offsets_both_zero() {
            return Err(CuspError::Invalid(InvalidReason::BothOffsetsZero));
        }
        // Offsets may round to zero in f64 only if they are tiny; keep the
        // exact values authoritative.
        cusp.rational = Some(rational);
        Ok(cusp)
    }

    /// Exact rational form of the inputs: the parsed literals when
    /// available, otherwise the exact binary value of each double.
    pub fn rational(&self) -> RationalCusp {
        match &self.rational {
            Some(r) => r.clone(),
            None => RationalCusp::from_f64(self.t_alpha, self.t_beta, self.x0, self.y0, self.c),
        }
    }

    pub fn has_literal_rationals(&self) -> bool {
        self.rational.is_some()
    }

    /// `b_{0,0} = x₀ t_α + y₀ t_β`.
    pub fn b00(&self) -> Complex64 {
        self.t_alpha * self.x0 + self.t_beta * self.y0
    }

    /// `Im(conj(t_α) · t_β)`, the signed area of the fundamental cell.
    pub fn cell_area(&self) -> f64 {
        (self.t_alpha.conj() * self.t_beta).im
    }

    pub fn parabolic_a(&self) -> MoebiusMap {
        MoebiusMap::translation(self.t_alpha)
    }

    pub fn parabolic_b(&self) -> MoebiusMap {
        MoebiusMap::translation(self.t_beta)
    }

    /// `[[c·b₀₀, −1/c], [c, 0]]`, sending `0 ↦ ∞ ↦ b₀₀`.
    pub fn canonical_g(&self) -> MoebiusMap {
        MoebiusMap::from_entries(self.c * self.b00(), -self.c.inv(), self.c, Complex64::new(0.0, 0.0))
    }

    pub fn to_lattice_coords(&self, z: Complex64) -> LatticeCoords {
        let (ta, tb) = (self.t_alpha, self.t_beta);
        let det = ta.re * tb.im - ta.im * tb.re;
        LatticeCoords {
            x: (z.re * tb.im - z.im * tb.re) / det,
            y: (ta.re * z.im - ta.im * z.re) / det,
        }
    }

    pub fn from_lattice_coords(&self, v: LatticeCoords) -> Complex64 {
        self.t_alpha * v.x + self.t_beta * v.y
    }

    /// `a_{p,q} = p t_α + q t_β` or `b_{p,q} = (p + x₀) t_α + (q + y₀) t_β`.
    pub fn lift_position(&self, label: LiftLabel) -> Complex64 {
        let (p, q) = (label.p as f64, label.q as f64);
        match label.kind {
            LiftKind::A => self.t_alpha * p + self.t_beta * q,
            LiftKind::B => self.t_alpha * (p + self.x0) + self.t_beta * (q + self.y0),
        }
    }

    /// Half the distance from `A₀₀ = (0, 1)` to the nearest other lift of
    /// the bumping point among those on the horosphere at height 1 with
    /// `|p|, |q| ≤ search_range` and their preimages under `g` on the
    /// horosphere over 0. The ball of this radius about `A₀₀` is closer to
    /// `A₀₀` than to any of those lifts.
    pub fn nearest_lift_gap(&self, search_range: u32) -> f64 {
        let r = i64::from(search_range.max(1));
        let apex = UpperHalfSpacePoint::apex();
        let g_inv = self.canonical_g().inverse();
        let mut best = f64::INFINITY;
        for p in -r..=r {
            for q in -r..=r {
                for kind in [LiftKind::A, LiftKind::B] {
                    let on_top = UpperHalfSpacePoint::new(self.lift_position(LiftLabel { p, q, kind }), 1.0);
                    for lift in [on_top, g_inv.apply_h3(on_top)] {
                        let d = hyperbolic_distance(apex, lift);
                        // A₀₀ itself appears as a₀₀ and as g⁻¹(B₀₀).
                        if d > 1e-9 && d < best {
                            best = d;
                        }
                    }
                }
            }
        }
        0.5 * best
    }
}

fn reduce_unit(v: f64) -> f64 {
    let r = v.rem_euclid(1.0);
    // rem_euclid can return 1.0 for tiny negative inputs.
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    pub(crate) fn square() -> CuspData {
        CuspData::new("square", c(1.0, 0.0), c(0.0, 1.0), 0.5, 0.5, c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn validation_reasons() {
        let err = CuspData::new("z", c(1.0, 0.0), c(0.0, 1.0), 0.0, 0.0, c(1.0, 0.0)).unwrap_err();
        assert_eq!(err, CuspError::Invalid(InvalidReason::BothOffsetsZero));
        let err = CuspData::new("z", c(1.0, 0.0), c(2.0, 0.0), 0.5, 0.5, c(1.0, 0.0)).unwrap_err();
        assert_eq!(err, CuspError::Invalid(InvalidReason::DegenerateLattice));
        let err = CuspData::new("z", c(1.0, 0.0), c(0.0, 1.0), 0.5, 0.5, c(0.0, 0.0)).unwrap_err();
        assert_eq!(err, CuspError::Invalid(InvalidReason::ZeroC));
        // Offsets of exactly 1 reduce to 0.
        let err = CuspData::new("z", c(1.0, 0.0), c(0.0, 1.0), 1.0, 0.0, c(1.0, 0.0)).unwrap_err();
        assert_eq!(err, CuspError::Invalid(InvalidReason::BothOffsetsZero));
    }

    #[test]
    fn offsets_reduced_mod_one() {
        let cusp = CuspData::new("r", c(1.0, 0.0), c(0.0, 1.0), 1.25, -0.5, c(1.0, 0.0)).unwrap();
        assert_eq!((cusp.x0, cusp.y0), (0.25, 0.5));
    }

    #[test]
    fn parabolic_generators() {
        let cusp = square();
        assert_eq!(cusp.parabolic_a(), MoebiusMap::translation(c(1.0, 0.0)));
        assert_eq!(cusp.parabolic_a().classify(), crate::moebius::IsometryClass::Parabolic);
        let ab = cusp.parabolic_a().compose(&cusp.parabolic_b());
        let ba = cusp.parabolic_b().compose(&cusp.parabolic_a());
        for (x, y) in ab.entries().iter().zip(ba.entries()) {
            assert_abs_diff_eq!((x - y).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn canonical_g_square() {
        let g = square().canonical_g();
        assert_eq!(g.entries(), [c(0.5, 0.5), c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(g.det(), c(1.0, 0.0));
    }

    #[test]
    fn lattice_coordinates() {
        let cusp = CuspData::new("skew", c(1.0, 0.0), c(0.3, 1.1), 0.4, 0.6, c(1.0, 0.0)).unwrap();
        assert_eq!(cusp.to_lattice_coords(cusp.t_alpha), LatticeCoords::new(1.0, 0.0));
        assert_eq!(cusp.to_lattice_coords(c(0.0, 0.0)), LatticeCoords::new(0.0, 0.0));
        let v = cusp.to_lattice_coords(cusp.b00());
        assert_abs_diff_eq!(v.x, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(v.y, 0.6, epsilon = 1e-15);
    }

    #[test]
    fn lift_positions() {
        let cusp = square();
        let a = |p, q| cusp.lift_position(LiftLabel { p, q, kind: LiftKind::A });
        let b = |p, q| cusp.lift_position(LiftLabel { p, q, kind: LiftKind::B });
        assert_eq!(a(0, 0), c(0.0, 0.0));
        assert_eq!(b(0, 0), cusp.b00());
        for (p, q) in [(3, -2), (-7, 11), (0, 5)] {
            assert_abs_diff_eq!((b(p, q) - a(p, q) - cusp.b00()).norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn square_gap() {
        let cusp = square();
        let eps = cusp.nearest_lift_gap(4);
        assert_abs_diff_eq!(eps, 0.5 * 1.25f64.acosh(), epsilon = 1e-14);
        let e2 = cusp.nearest_lift_gap(2);
        let e8 = cusp.nearest_lift_gap(8);
        assert!(eps > 0.0);
        assert!(e8 <= eps && eps <= e2);
        assert_eq!(e2, e8);
    }
}
