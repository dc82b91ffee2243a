//! The family `g_{p,q} = a^p b^q g` and the geometry of each member's axis:
//! its endpoints, where it crosses the horosphere at height 1, and the lifts
//! of the short and long arcs.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp::{CuspData, LiftKind, LiftLabel};
use crate::moebius::{
    complex_length_from_trace, stable_roots, BoundaryPoint, GeodesicLine, IsometryClass, MoebiusMap,
    UpperHalfSpacePoint, CLASSIFY_TOL,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyIndex {
    pub p: i64,
    pub q: i64,
}

impl FamilyIndex {
    pub const fn new(p: i64, q: i64) -> Self {
        Self { p, q }
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("trace is ±2: the member is parabolic and has no axis")]
    ParabolicDegenerate,
    #[error("trace is real in (−2, 2): the member is elliptic")]
    EllipticDegenerate,
    #[error("axis radius ≤ 1: the axis does not cross the horosphere at height 1")]
    AxisTooLow,
}

/// Axis endpoints, labelled so that `|z_minus| ≤ |z_plus|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisGeometry {
    pub z_minus: Complex64,
    pub z_plus: Complex64,
    pub center: Complex64,
    pub radius: f64,
}

impl AxisGeometry {
    pub fn from_endpoints(a: Complex64, b: Complex64) -> Self {
        let (z_minus, z_plus) = if a.norm() <= b.norm() { (a, b) } else { (b, a) };
        Self {
            z_minus,
            z_plus,
            center: (z_minus + z_plus) * 0.5,
            radius: (z_plus - z_minus).norm() * 0.5,
        }
    }

    /// Unit vector from `z_minus` towards `z_plus`.
    pub fn direction(&self) -> Complex64 {
        let w = self.z_plus - self.z_minus;
        w / w.norm()
    }

    pub fn line(&self) -> GeodesicLine {
        GeodesicLine { start: self.z_minus.into(), end: self.z_plus.into() }
    }
}

/// Crossing points with the horosphere at height 1 and the derived arc lifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArcLifts {
    /// Boundary coordinate of the crossing nearer `z_minus`.
    pub c_pq: Complex64,
    /// Boundary coordinate of the crossing nearer `z_plus`.
    pub d_pq: Complex64,
    /// `(g⁻¹(D), C)`: the lift of the arc outside the cusp neighbourhood.
    pub short_lift: [UpperHalfSpacePoint; 2],
    /// `(C, D)`: the lift of the arc inside the cusp neighbourhood.
    pub long_lift: [UpperHalfSpacePoint; 2],
}

/// Everything computed for one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicRecord {
    pub index: FamilyIndex,
    pub map: MoebiusMap,
    pub trace: Complex64,
    pub b_pq: Complex64,
    pub length: Option<Complex64>,
    pub axis: Option<AxisGeometry>,
    pub arcs: Result<ArcLifts, FamilyError>,
}

impl GeodesicRecord {
    pub fn arcs(&self) -> Result<&ArcLifts, FamilyError> {
        self.arcs.as_ref().map_err(|e| *e)
    }

    pub fn is_degenerate(&self) -> bool {
        self.arcs.is_err()
    }
}

/// `b_{p,q}`.
pub fn b_pq(cusp: &CuspData, idx: FamilyIndex) -> Complex64 {
    cusp.lift_position(LiftLabel { p: idx.p, q: idx.q, kind: LiftKind::B })
}

/// Closed form `[[c·b_{p,q}, −1/c], [c, 0]]`.
pub fn family_element(cusp: &CuspData, idx: FamilyIndex) -> MoebiusMap {
    MoebiusMap::from_entries(cusp.c * b_pq(cusp, idx), -cusp.c.inv(), cusp.c, Complex64::new(0.0, 0.0))
}

/// `a^p b^q g` by repeated composition.
pub fn family_element_by_composition(cusp: &CuspData, idx: FamilyIndex) -> MoebiusMap {
    cusp.parabolic_a()
        .power(idx.p)
        .compose(&cusp.parabolic_b().power(idx.q))
        .compose(&cusp.canonical_g())
}

/// Endpoints `b/2 ± √((b/2)² − 1/c²)` of the axis of the member with
/// translation part `b` and trace `c·b`.
pub fn axis_of(b: Complex64, c: Complex64) -> Result<AxisGeometry, FamilyError> {
    let tr = c * b;
    if tr.im.abs() <= CLASSIFY_TOL {
        if (tr.re.abs() - 2.0).abs() <= CLASSIFY_TOL {
            return Err(FamilyError::ParabolicDegenerate);
        }
        if tr.re.abs() < 2.0 {
            return Err(FamilyError::EllipticDegenerate);
        }
    }
    let half = b * 0.5;
    let inv_c_sq = (c * c).inv();
    let disc = (half * half - inv_c_sq).sqrt();
    let (big, small) = stable_roots(half, disc, inv_c_sq);
    Ok(AxisGeometry::from_endpoints(small, big))
}

/// The two points where the axis meets the horosphere at height 1.
pub fn horosphere_crossings(axis: &AxisGeometry) -> Result<(Complex64, Complex64), FamilyError> {
    if !(axis.radius > 1.0) {
        return Err(FamilyError::AxisTooLow);
    }
    let r = axis.radius;
    let u = axis.direction();
    // center ∓ √(r²−1)·u, written relative to the nearer endpoint so small
    // crossings keep their relative precision.
    let gap = ((r - 1.0) * (r + 1.0)).sqrt();
    let inset = 1.0 / (r + gap);
    Ok((axis.z_minus + u * inset, axis.z_plus - u * inset))
}

/// Short and long arc lifts from the crossing points.
pub fn arc_decomposition(map: &MoebiusMap, c_pq: Complex64, d_pq: Complex64) -> ArcLifts {
    let big_c = UpperHalfSpacePoint::new(c_pq, 1.0);
    let big_d = UpperHalfSpacePoint::new(d_pq, 1.0);
    ArcLifts {
        c_pq,
        d_pq,
        short_lift: [map.inverse().apply_h3(big_d), big_c],
        long_lift: [big_c, big_d],
    }
}

/// The vertical geodesic `{0, ∞}` that the axes accumulate on.
pub fn limit_axis() -> GeodesicLine {
    GeodesicLine { start: BoundaryPoint::Finite(Complex64::new(0.0, 0.0)), end: BoundaryPoint::Infinity }
}

pub fn build_record(cusp: &CuspData, idx: FamilyIndex) -> GeodesicRecord {
    let map = family_element(cusp, idx);
    let b = b_pq(cusp, idx);
    let trace = cusp.c * b;
    let axis = axis_of(b, cusp.c);
    let length = match map.classify() {
        IsometryClass::Loxodromic if axis.is_ok() => Some(complex_length_from_trace(trace)),
        _ => None,
    };
    let arcs = axis
        .and_then(|ax| horosphere_crossings(&ax))
        .map(|(c_pq, d_pq)| arc_decomposition(&map, c_pq, d_pq));
    GeodesicRecord { index: idx, map, trace, b_pq: b, length, axis: axis.ok(), arcs }
}
