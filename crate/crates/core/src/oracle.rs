//! Independent checks of the long-arc lattice test.
//!
//! [`oracle_lattice_box`] searches every lattice point in a box, with no use
//! of the segment's slope. [`oracle_sampled_torus`] follows the geometric
//! argument directly: it pairs points of the long-arc lift at equal height,
//! projects them to the torus and looks for a coincidence.

use crate::cusp::{CuspData, LatticeCoords};
use crate::family::{FamilyError, GeodesicRecord};
use crate::simplicity::LatticeWitness;

/// Smallest box that contains every lattice point the segment `0 → v` can reach.
pub fn default_box(v: LatticeCoords) -> i64 {
    (v.x.abs().ceil() + v.y.abs().ceil()) as i64 + 1
}

/// Exhaustive search over `[−box, box]² \ {0}` for a lattice point within
/// `tol` of the segment `{t·v : t ∈ (0, 1]}`. Returns the hit with the
/// smallest `t`.
pub fn oracle_lattice_box(v: LatticeCoords, box_size: i64, tol: f64) -> Option<LatticeWitness> {
    oracle_lattice_rect(v, (-box_size, box_size), (-box_size, box_size), tol)
}

/// The segment's bounding rectangle grown by one in every direction; it
/// holds every lattice point within distance 1 of the segment.
pub fn segment_rect(v: LatticeCoords) -> ((i64, i64), (i64, i64)) {
    let span = |x: f64| (x.min(0.0).floor() as i64 - 1, x.max(0.0).ceil() as i64 + 1);
    (span(v.x), span(v.y))
}

/// Exhaustive search over the rectangle `ms × ns`, excluding the origin.
pub fn oracle_lattice_rect(v: LatticeCoords, ms: (i64, i64), ns: (i64, i64), tol: f64) -> Option<LatticeWitness> {
    let len_sq = v.x * v.x + v.y * v.y;
    if !(len_sq > 0.0) {
        return None;
    }
    let mut best: Option<LatticeWitness> = None;
    for m in ms.0..=ms.1 {
        for n in ns.0..=ns.1 {
            if m == 0 && n == 0 {
                continue;
            }
            let (mf, nf) = (m as f64, n as f64);
            let t = ((mf * v.x + nf * v.y) / len_sq).min(1.0);
            if !(t > 0.0) {
                continue;
            }
            let dx = t * v.x - mf;
            let dy = t * v.y - nf;
            let residual = (dx * dx + dy * dy).sqrt();
            if residual < tol && best.is_none_or(|b| t < b.t) {
                best = Some(LatticeWitness { m, n, t, residual });
            }
        }
    }
    best
}

fn wrap(x: f64) -> f64 {
    x - x.floor()
}

/// Distance on the unit torus between the images of two lattice-coordinate points.
fn torus_distance(a: LatticeCoords, b: LatticeCoords) -> f64 {
    let dx = wrap(a.x) - wrap(b.x);
    let dy = wrap(a.y) - wrap(b.y);
    (dx - dx.round()).hypot(dy - dy.round())
}

/// Height above the boundary of the point of the long-arc lift lying over `z`.
fn lift_height(record: &GeodesicRecord, z: num_complex::Complex64) -> f64 {
    let axis = record.axis.expect("record with arcs has an axis");
    (axis.radius * axis.radius - (z - axis.center).norm_sqr()).max(0.0).sqrt()
}

/// Samples `samples` pairs of points on the long-arc lift that are mirror
/// images about its apex, projects them to the torus and reports whether
/// some pair can be brought into coincidence within `tol`.
///
/// Pair `k` sits at parameters `s` and `1 − s` along the projected segment
/// with `s = k / (2·samples)`. When two projected points are within one
/// sample spacing of a coincidence, the pair is moved to the exact
/// parameter at which their difference is the nearest lattice vector and
/// re-tested there. Detection is complete once `samples` exceeds the
/// segment length in lattice units.
pub fn oracle_sampled_torus(
    record: &GeodesicRecord,
    cusp: &CuspData,
    samples: usize,
    tol: f64,
) -> Result<bool, FamilyError> {
    let arcs = record.arcs()?;
    let start = cusp.to_lattice_coords(arcs.c_pq);
    let end = cusp.to_lattice_coords(arcs.d_pq);
    let v = LatticeCoords::new(end.x - start.x, end.y - start.y);
    let len = v.norm();
    if !(len > 0.0) || samples < 1 {
        return Ok(false);
    }
    let at = |s: f64| LatticeCoords::new(start.x + s * v.x, start.y + s * v.y);
    let gate = len / samples as f64 + tol;
    let len_sq = len * len;
    for k in 0..samples {
        let s = 0.5 * k as f64 / samples as f64;
        let (lo, hi) = (at(s), at(1.0 - s));
        if torus_distance(lo, hi) >= gate {
            continue;
        }
        let m = (hi.x - lo.x).round();
        let n = (hi.y - lo.y).round();
        if m == 0.0 && n == 0.0 {
            continue;
        }
        let t = ((m * v.x + n * v.y) / len_sq).min(1.0);
        if !(t > 0.0) {
            continue;
        }
        let s_star = 0.5 * (1.0 - t);
        let (lo, hi) = (at(s_star), at(1.0 - s_star));
        debug_assert!({
            let z_lo = cusp.from_lattice_coords(lo);
            let z_hi = cusp.from_lattice_coords(hi);
            (lift_height(record, z_lo) - lift_height(record, z_hi)).abs() < 1e-6 * (1.0 + len)
        });
        if torus_distance(lo, hi) < tol {
            return Ok(true);
        }
    }
    Ok(false)
}
