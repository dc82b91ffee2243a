//! Embeddedness of the two arcs of a family member.
//!
//! The long arc self-intersects exactly when its projected segment on the
//! horosphere at height 1 contains two points differing by a lattice
//! translation, i.e. when `t·v` is a nonzero lattice point for some
//! `t ∈ (0, 1]`, `v` the segment's translation in lattice coordinates.
//! The short arc is embedded when its lift stays in a ball about `A₀₀`
//! that is closer to `A₀₀` than to every other lift of the bumping point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cusp::{CuspData, LatticeCoords};
use crate::exact;
use crate::family::{FamilyError, GeodesicRecord};
use crate::moebius::{hyperbolic_distance, UpperHalfSpacePoint};

/// Candidate tolerance used to propose lattice vectors for exact confirmation.
pub const EXACT_CANDIDATE_TOL: f64 = 1e-6;

/// Residuals in `[tol, NEAR_BAND_FACTOR·tol)` are reported as near-threshold.
pub const NEAR_BAND_FACTOR: f64 = 10.0;

/// A lattice point `(m, n) ≈ t·v` with `t ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeWitness {
    pub m: i64,
    pub n: i64,
    pub t: f64,
    /// `|t·v − (m, n)|` in lattice coordinates.
    pub residual: f64,
}

impl LatticeWitness {
    /// Re-checks the witness invariant against `v` without any search.
    pub fn holds_for(&self, v: LatticeCoords, tol: f64) -> bool {
        (self.m, self.n) != (0, 0)
            && self.t > 0.0
            && self.t <= 1.0
            && (self.t * v.x - self.m as f64).hypot(self.t * v.y - self.n as f64) < tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimplicityVerdict {
    Simple,
    LongArcNonsimple(LatticeWitness),
    ShortArcUnverified { distance: f64, epsilon: f64 },
    AxisTooLow,
}

impl SimplicityVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            SimplicityVerdict::Simple => "Simple",
            SimplicityVerdict::LongArcNonsimple(_) => "LongArcNonsimple",
            SimplicityVerdict::ShortArcUnverified { .. } => "ShortArcUnverified",
            SimplicityVerdict::AxisTooLow => "AxisTooLow",
        }
    }

    pub fn is_simple(&self) -> bool {
        matches!(self, SimplicityVerdict::Simple)
    }

    pub fn witness(&self) -> Option<LatticeWitness> {
        match self {
            SimplicityVerdict::LongArcNonsimple(w) => Some(*w),
            _ => None,
        }
    }
}

impl fmt::Display for SimplicityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Translation `d − c` of the long-arc projection, in lattice coordinates.
pub fn long_arc_vector(record: &GeodesicRecord, cusp: &CuspData) -> Result<LatticeCoords, FamilyError> {
    let arcs = record.arcs()?;
    Ok(cusp.to_lattice_coords(arcs.d_pq - arcs.c_pq))
}

/// Outcome of the structured lattice scan along a segment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LatticeScan {
    /// Every lattice point within tolerance, in increasing `t`.
    pub hits: Vec<LatticeWitness>,
    /// Smallest residual seen among the per-column nearest lattice points.
    pub closest: Option<LatticeWitness>,
}

fn best_parameter(v: LatticeCoords, m: i64, n: i64) -> Option<(f64, f64)> {
    let len_sq = v.x * v.x + v.y * v.y;
    let (mf, nf) = (m as f64, n as f64);
    let proj = (mf * v.x + nf * v.y) / len_sq;
    if !(proj > 0.0) {
        return None;
    }
    let t = proj.min(1.0);
    Some((t, (t * v.x - mf).hypot(t * v.y - nf)))
}

/// Walks the integer columns (or rows) crossed by the segment from 0 to `v`
/// and tests the nearest lattice point in each.
///
/// Along the dominant axis every witness has an integer coordinate `k`
/// with `0 < k ≤ ⌈|major| + tol⌉`; for `tol < ½` the other coordinate must
/// be the rounding of `k·minor/major`.
pub fn lattice_scan(v: LatticeCoords, tol: f64) -> LatticeScan {
    let mut scan = LatticeScan::default();
    if v.is_zero() || !v.x.is_finite() || !v.y.is_finite() {
        return scan;
    }
    let x_major = v.x.abs() >= v.y.abs();
    let (major, minor) = if x_major { (v.x, v.y) } else { (v.y, v.x) };
    let slope = minor / major;
    let sign = major.signum() as i64;
    let steps = (major.abs() + tol).ceil() as i64;
    for k in 1..=steps {
        let a = sign * k;
        let b = (a as f64 * slope).round() as i64;
        let (m, n) = if x_major { (a, b) } else { (b, a) };
        let Some((t, residual)) = best_parameter(v, m, n) else { continue };
        let w = LatticeWitness { m, n, t, residual };
        if scan.closest.is_none_or(|c| residual < c.residual) {
            scan.closest = Some(w);
        }
        if residual < tol {
            scan.hits.push(w);
        }
    }
    scan
}

/// First lattice witness along the segment, if any.
pub fn long_arc_nonsimple(v: LatticeCoords, tol: f64) -> Option<LatticeWitness> {
    lattice_scan(v, tol).hits.first().copied()
}

/// Largest distance from `A₀₀` to either end of the short-arc lift.
pub fn short_arc_distance(record: &GeodesicRecord) -> Result<f64, FamilyError> {
    let apex = UpperHalfSpacePoint::apex();
    let [a, b] = record.arcs()?.short_lift;
    Ok(hyperbolic_distance(apex, a).max(hyperbolic_distance(apex, b)))
}

/// Both ends of the short-arc lift lie in the open ball of radius
/// `epsilon` about `A₀₀`; by convexity so does the whole lift. `false`
/// means unverified, not self-intersecting.
pub fn short_arc_r_close(record: &GeodesicRecord, epsilon: f64) -> bool {
    short_arc_distance(record).is_ok_and(|d| d < epsilon)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub tol: f64,
    pub epsilon: f64,
    /// Decide the lattice test in exact rational arithmetic.
    pub exact: bool,
}

impl CheckOptions {
    pub fn new(tol: f64, epsilon: f64) -> Self {
        Self { tol, epsilon, exact: false }
    }

    pub fn exact(mut self, on: bool) -> Self {
        self.exact = on;
        self
    }
}

/// A verdict with the measurements that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Assessment {
    pub verdict: SimplicityVerdict,
    pub vector: Option<LatticeCoords>,
    pub short_distance: Option<f64>,
    /// No witness was declared but some lattice point came within
    /// `NEAR_BAND_FACTOR·tol`.
    pub near_threshold: bool,
}

/// Combines already-measured quantities into a verdict. Two records with the
/// same vector and short-arc distance always receive the same verdict.
pub fn decide(witness: Option<LatticeWitness>, short_distance: f64, epsilon: f64) -> SimplicityVerdict {
    match witness {
        Some(w) => SimplicityVerdict::LongArcNonsimple(w),
        None if short_distance < epsilon => SimplicityVerdict::Simple,
        None => SimplicityVerdict::ShortArcUnverified { distance: short_distance, epsilon },
    }
}

fn exact_witness(record: &GeodesicRecord, cusp: &CuspData, v: LatticeCoords) -> Option<LatticeWitness> {
    let rc = cusp.rational();
    let (p, q) = (record.index.p, record.index.q);
    lattice_scan(v, EXACT_CANDIDATE_TOL).hits.into_iter().find(|w| {
        exact::check_alignment(&rc, p, q, w.m, w.n).is_some_and(|a| a.is_witness())
    })
}

pub fn assess(record: &GeodesicRecord, cusp: &CuspData, opts: &CheckOptions) -> Assessment {
    let (Ok(v), Ok(dist)) = (long_arc_vector(record, cusp), short_arc_distance(record)) else {
        return Assessment {
            verdict: SimplicityVerdict::AxisTooLow,
            vector: None,
            short_distance: None,
            near_threshold: false,
        };
    };
    let (witness, near_threshold) = if opts.exact {
        (exact_witness(record, cusp, v), false)
    } else {
        let scan = lattice_scan(v, opts.tol);
        let near = scan.hits.is_empty()
            && scan.closest.is_some_and(|c| c.residual < NEAR_BAND_FACTOR * opts.tol);
        (scan.hits.first().copied(), near)
    };
    Assessment {
        verdict: decide(witness, dist, opts.epsilon),
        vector: Some(v),
        short_distance: Some(dist),
        near_threshold,
    }
}

pub fn verdict(record: &GeodesicRecord, cusp: &CuspData, epsilon: f64, tol: f64) -> SimplicityVerdict {
    assess(record, cusp, &CheckOptions::new(tol, epsilon)).verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{build_record, FamilyIndex};
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn v(x: f64, y: f64) -> LatticeCoords {
        LatticeCoords::new(x, y)
    }

    #[test]
    fn witness_examples() {
        let w = long_arc_nonsimple(v(1.5, 0.0), 1e-9).unwrap();
        assert_eq!((w.m, w.n), (1, 0));
        assert_abs_diff_eq!(w.t, 2.0 / 3.0, epsilon = 1e-15);

        assert!(long_arc_nonsimple(v(0.5, 0.3), 1e-9).is_none());

        let w = long_arc_nonsimple(v(1.2, 1.2), 1e-9).unwrap();
        assert_eq!((w.m, w.n), (1, 1));
        assert_abs_diff_eq!(w.t, 5.0 / 6.0, epsilon = 1e-15);
    }

    #[test]
    fn witness_signs_and_axes() {
        let w = long_arc_nonsimple(v(0.0, -2.5), 1e-9).unwrap();
        assert!(long_arc_nonsimple(v(-0.2, -2.5), 1e-9).is_none());
        assert_eq!((w.m, w.n), (0, -1));
        let w = long_arc_nonsimple(v(-3.0, 1.5), 1e-9).unwrap();
        assert_eq!((w.m, w.n), (-2, 1));
        // t = 1 is admissible.
        let w = long_arc_nonsimple(v(1.0, 0.0), 1e-9).unwrap();
        assert_eq!(w.t, 1.0);
        assert!(long_arc_nonsimple(v(0.0, 0.0), 1e-9).is_none());
        assert!(long_arc_nonsimple(v(0.999, 0.0), 1e-9).is_none());
    }

    #[test]
    fn witness_invariant_recheck() {
        let vv = v(4.2, 2.1);
        let w = long_arc_nonsimple(vv, 1e-9).unwrap();
        assert!(w.holds_for(vv, 1e-9));
        assert!(!LatticeWitness { m: 0, n: 0, t: 0.5, residual: 0.0 }.holds_for(vv, 1e-9));
    }

    #[test]
    fn near_miss_reported() {
        let scan = lattice_scan(v(2.0 + 3e-9, 0.0 + 4e-9), 1e-9);
        // (2, 0) at t = 1 misses by ~4e-9; (1, 0) at t ≈ ½ by ~2e-9.
        assert!(scan.hits.is_empty());
        assert!(scan.closest.unwrap().residual < 1e-8);
    }

    #[test]
    fn decide_depends_only_on_measurements() {
        let w = LatticeWitness { m: 1, n: 0, t: 0.5, residual: 0.0 };
        assert_eq!(decide(Some(w), 10.0, 0.1), SimplicityVerdict::LongArcNonsimple(w));
        assert_eq!(decide(None, 0.05, 0.1), SimplicityVerdict::Simple);
        assert_eq!(
            decide(None, 0.2, 0.1),
            SimplicityVerdict::ShortArcUnverified { distance: 0.2, epsilon: 0.1 }
        );
    }

    fn square() -> CuspData {
        CuspData::new("square", Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 0.5, 0.5, Complex64::new(1.0, 0.0))
            .unwrap()
    }

    #[test]
    fn large_q0_members_are_simple() {
        let cusp = square();
        let eps = cusp.nearest_lift_gap(4);
        for p in [60, 200, -150] {
            let rec = build_record(&cusp, FamilyIndex::new(p, 0));
            assert_eq!(verdict(&rec, &cusp, eps, 1e-9), SimplicityVerdict::Simple, "p = {p}");
        }
    }

    #[test]
    fn short_arc_ball_test() {
        let cusp = square();
        let rec = build_record(&cusp, FamilyIndex::new(200, 0));
        let d = short_arc_distance(&rec).unwrap();
        assert!(short_arc_r_close(&rec, 2.0 * d));
        assert!(!short_arc_r_close(&rec, 0.5 * d));
    }

    #[test]
    fn vertical_members_are_nonsimple() {
        let cusp = CuspData::new("half", Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), 0.0, 0.5, Complex64::new(1.0, 0.0))
            .unwrap();
        let eps = cusp.nearest_lift_gap(4);
        for exact in [false, true] {
            let opts = CheckOptions::new(1e-9, eps).exact(exact);
            let rec = build_record(&cusp, FamilyIndex::new(0, 5));
            let a = assess(&rec, &cusp, &opts);
            let w = a.verdict.witness().expect("witness");
            assert_eq!((w.m, w.n), (0, 1));
            assert!(w.residual < 1e-12);
            assert!(w.holds_for(a.vector.unwrap(), 1e-12));
        }
    }
}
