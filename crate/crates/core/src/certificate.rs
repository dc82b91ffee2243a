//! Certificate that the one-parameter subfamily `g_{p,0}` (or `g_{0,q}`
//! when the `t_β`-offset vanishes) consists of simple closed geodesics
//! beyond an explicit threshold.
//!
//! For every scanned index the certificate records both embeddedness
//! tests, the two independent lattice oracles, and the lattice-coordinate
//! size of the crossing points against `δ = min{y/2, (1 − y)/2}`. Once
//! both crossing coordinates are below `δ`, the translation `d − c` has
//! its relevant coordinate strictly inside `(0, 1)`, so the segment cannot
//! reach a nonzero lattice point.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::batch::{map_indices, Execution};
use crate::cusp::{CuspData, CuspError, LatticeCoords};
use crate::exact::{parse_rational, GaussRational, RationalCusp};
use crate::family::{build_record, FamilyIndex, GeodesicRecord};
use crate::oracle::{oracle_lattice_rect, oracle_sampled_torus, segment_rect};
use crate::simplicity::{assess, CheckOptions, SimplicityVerdict};

pub const TOOL_VERSION: &str = concat!("geoknot ", env!("CARGO_PKG_VERSION"));

const CLAIM: &str = "Every scanned member with |index| > P has an embedded long arc and an embedded short arc, \
so it is a geodesic knot; the tail bound extends this to all |index| > P, an infinite family of geodesic knots.";

/// Which lattice coordinate carries the nonzero offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coordinate {
    /// Scan `g_{p,0}`, test `t_β`-coordinates against `y₀`.
    Beta,
    /// `y₀ = 0`: scan `g_{0,q}`, test `t_α`-coordinates against `x₀`.
    Alpha,
}

impl Coordinate {
    pub fn of(self, v: LatticeCoords) -> f64 {
        match self {
            Coordinate::Beta => v.y,
            Coordinate::Alpha => v.x,
        }
    }

    pub fn index(self, k: i64) -> FamilyIndex {
        match self {
            Coordinate::Beta => FamilyIndex::new(k, 0),
            Coordinate::Alpha => FamilyIndex::new(0, k),
        }
    }
}

/// Exact cusp inputs, as rational literals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateInput {
    pub name: String,
    pub t_alpha: [String; 2],
    pub t_beta: [String; 2],
    pub x0: String,
    pub y0: String,
    pub c: [String; 2],
}

impl CertificateInput {
    pub fn from_cusp(cusp: &CuspData) -> Self {
        let rc = cusp.rational();
        let pair = |g: &GaussRational| [g.re.to_string(), g.im.to_string()];
        Self {
            name: cusp.name.clone(),
            t_alpha: pair(&rc.t_alpha),
            t_beta: pair(&rc.t_beta),
            x0: rc.x0.to_string(),
            y0: rc.y0.to_string(),
            c: pair(&rc.c),
        }
    }

    pub fn to_cusp(&self) -> Result<CuspData, VerifyError> {
        let r = |s: &String| parse_rational(s).ok_or_else(|| VerifyError::BadInput(s.clone()));
        let g = |p: &[String; 2]| Ok::<_, VerifyError>(GaussRational::new(r(&p[0])?, r(&p[1])?));
        let rc = RationalCusp {
            t_alpha: g(&self.t_alpha)?,
            t_beta: g(&self.t_beta)?,
            x0: r(&self.x0)?,
            y0: r(&self.y0)?,
            c: g(&self.c)?,
        };
        Ok(CuspData::from_rational(self.name.clone(), rc)?)
    }
}

/// Everything checked for one scanned index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexCheck {
    pub index: i64,
    pub p: i64,
    pub q: i64,
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<[i64; 2]>,
    /// `|coordinate of c_pq|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c_coord: Option<f64>,
    /// `|coordinate of d_pq − b_pq|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_minus_b_coord: Option<f64>,
    /// Coordinate of `d_pq − c_pq`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub translation_coord: Option<f64>,
    /// Coordinate bound `(|z₋| + r − √(r² − 1))` shared by both crossings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub short_distance: Option<f64>,
    pub delta_ok: bool,
    pub bound_decreasing: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub box_oracle_nonsimple: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torus_oracle_nonsimple: Option<bool>,
    pub passes: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateQ0 {
    pub claim: String,
    pub tool_version: String,
    pub used_coordinate: Coordinate,
    pub y0_effective: f64,
    pub delta: f64,
    #[serde(rename = "P")]
    pub p_threshold: i64,
    pub scan_limit: i64,
    pub epsilon: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_range: Option<u32>,
    pub tol: f64,
    pub exact: bool,
    pub samples: usize,
    pub tail_bound_at_limit: f64,
    pub tail_bound_note: String,
    pub input: CertificateInput,
    pub checks: Vec<IndexCheck>,
}

impl CertificateQ0 {
    pub fn tail(&self) -> impl Iterator<Item = &IndexCheck> {
        let p = self.p_threshold;
        self.checks.iter().filter(move |c| c.index.abs() > p)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("no threshold below the scan limit {scan_limit}: index {last_failure} fails")]
    ScanInsufficient { scan_limit: i64, last_failure: i64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("certificate input literal {0:?} is not a rational number")]
    BadInput(String),
    #[error(transparent)]
    Cusp(#[from] CuspError),
    #[error("delta {found} does not equal min(y/2, (1 - y)/2) = {expected}")]
    Delta { found: f64, expected: f64 },
    #[error("epsilon {found} does not match the lift gap {expected} at range {range}")]
    Epsilon { found: f64, expected: f64, range: u32 },
    #[error("index {0} lies beyond P but is not recorded as passing")]
    TailNotSimple(i64),
    #[error("index {index}: recorded {field} does not match recomputation")]
    Mismatch { index: i64, field: &'static str },
    #[error("recorded {0} does not match recomputation")]
    Header(&'static str),
    #[error("recomputation failed: {0}")]
    Certify(#[from] CertifyError),
}

pub fn delta_for(y: f64) -> f64 {
    (0.5 * y).min(0.5 * (1.0 - y))
}

/// Which coordinate to test, and its offset.
pub fn effective_offset(cusp: &CuspData) -> (Coordinate, f64) {
    if cusp.y0 > 0.0 {
        (Coordinate::Beta, cusp.y0)
    } else {
        (Coordinate::Alpha, cusp.x0)
    }
}

/// Bound on `|z|`-to-coordinate conversion: `|coord(z)| ≤ factor·|z|`.
fn coordinate_factor(cusp: &CuspData, coord: Coordinate) -> f64 {
    let other = match coord {
        Coordinate::Beta => cusp.t_alpha,
        Coordinate::Alpha => cusp.t_beta,
    };
    other.norm() / cusp.cell_area().abs()
}

fn check_index(
    cusp: &CuspData,
    coord: Coordinate,
    delta: f64,
    factor: f64,
    k: i64,
    opts: &CheckOptions,
    samples: usize,
) -> (IndexCheck, Option<f64>) {
    let record: GeodesicRecord = build_record(cusp, coord.index(k));
    let a = assess(&record, cusp, opts);
    let mut check = IndexCheck {
        index: k,
        p: record.index.p,
        q: record.index.q,
        verdict: a.verdict.label().to_string(),
        witness: a.verdict.witness().map(|w| [w.m, w.n]),
        c_coord: None,
        d_minus_b_coord: None,
        translation_coord: None,
        tail_bound: None,
        short_distance: a.short_distance,
        delta_ok: false,
        bound_decreasing: false,
        box_oracle_nonsimple: None,
        torus_oracle_nonsimple: None,
        passes: false,
    };
    let (Ok(arcs), Some(axis), Some(v)) = (record.arcs(), record.axis, a.vector) else {
        return (check, None);
    };
    let lc = |z: Complex64| coord.of(cusp.to_lattice_coords(z));
    let c_coord = lc(arcs.c_pq).abs();
    let dmb = lc(arcs.d_pq - record.b_pq).abs();
    let r = axis.radius;
    let bound = factor * (axis.z_minus.norm() + 1.0 / (r + ((r - 1.0) * (r + 1.0)).sqrt()));
    let (ms, ns) = segment_rect(v);
    let box_hit = oracle_lattice_rect(v, ms, ns, opts.tol).is_some();
    let torus_hit = oracle_sampled_torus(&record, cusp, samples, opts.tol).unwrap_or(false);
    check.c_coord = Some(c_coord);
    check.d_minus_b_coord = Some(dmb);
    check.translation_coord = Some(coord.of(v));
    check.tail_bound = Some(bound);
    check.delta_ok = c_coord < delta && dmb < delta && bound < delta;
    check.box_oracle_nonsimple = Some(box_hit);
    check.torus_oracle_nonsimple = Some(torus_hit);
    check.passes = matches!(a.verdict, SimplicityVerdict::Simple) && check.delta_ok && !box_hit && !torus_hit;
    (check, Some(bound))
}

/// Scans `|index| ≤ scan_limit` and returns the least threshold `P` beyond
/// which every index passes every check, or `ScanInsufficient`.
pub fn certify_q0(
    cusp: &CuspData,
    scan_limit: i64,
    opts: &CheckOptions,
    samples: usize,
    mode: Execution,
) -> Result<CertificateQ0, CertifyError> {
    let scan_limit = scan_limit.max(1);
    let (coord, y_eff) = effective_offset(cusp);
    let delta = delta_for(y_eff);
    let factor = coordinate_factor(cusp, coord);

    let ks: Vec<FamilyIndex> = (-scan_limit..=scan_limit).map(|k| FamilyIndex::new(k, 0)).collect();
    let results = map_indices(&ks, mode, |i| check_index(cusp, coord, delta, factor, i.p, opts, samples));

    // The bound must not grow as |k| increases along either direction.
    let mut checks: Vec<IndexCheck> = Vec::with_capacity(results.len());
    let center = scan_limit as usize;
    for (pos, (check, bound)) in results.iter().enumerate() {
        let mut check = check.clone();
        let toward_zero = if pos > center { pos - 1 } else if pos < center { pos + 1 } else { pos };
        check.bound_decreasing = match (bound, results[toward_zero].1) {
            (Some(b), Some(prev)) => pos == center || *b <= prev,
            (Some(_), None) => true,
            _ => false,
        };
        check.passes &= check.bound_decreasing;
        checks.push(check);
    }

    let p_threshold = checks.iter().filter(|c| !c.passes).map(|c| c.index.abs()).max().unwrap_or(0);
    if p_threshold >= scan_limit {
        return Err(CertifyError::ScanInsufficient { scan_limit, last_failure: p_threshold });
    }
    let at_limit = checks
        .iter()
        .filter(|c| c.index.abs() == scan_limit)
        .filter_map(|c| c.tail_bound)
        .fold(0.0, f64::max);
    let coord_name = match coord {
        Coordinate::Beta => "t_beta",
        Coordinate::Alpha => "t_alpha",
    };
    let scanned = match coord {
        Coordinate::Beta => "g(p,0)",
        Coordinate::Alpha => "g(0,q) (offset along t_beta is zero, roles of alpha and beta swapped)",
    };
    let note = format!(
        "Scanned family {scanned}. For {} <= |index| <= {scan_limit} the {coord_name}-coordinate bound \
         |z-| + (r - sqrt(r^2 - 1)), scaled by {factor:.17e}, dominates both |coord(c)| and |coord(d - b)|, \
         is non-increasing in |index| and stays below delta = {delta}; at |index| = {scan_limit} it equals {at_limit:e}. \
         Since |z-| = 1/(|c|^2 |z+|) and the radius r grow without bound with |index|, the bound keeps decreasing \
         beyond the scan, so every member with |index| > P has translation coordinate in (y - 2 delta, y + 2 delta) within (0, 1).",
        p_threshold + 1
    );
    Ok(CertificateQ0 {
        claim: CLAIM.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        used_coordinate: coord,
        y0_effective: y_eff,
        delta,
        p_threshold,
        scan_limit,
        epsilon: opts.epsilon,
        epsilon_range: None,
        tol: opts.tol,
        exact: opts.exact,
        samples,
        tail_bound_at_limit: at_limit,
        tail_bound_note: note,
        input: CertificateInput::from_cusp(cusp),
        checks,
    })
}

/// Re-derives every recorded check from the embedded inputs and compares.
pub fn verify_certificate(cert: &CertificateQ0) -> Result<(), VerifyError> {
    let cusp = cert.input.to_cusp()?;
    let (coord, y_eff) = effective_offset(&cusp);
    let expected_delta = delta_for(y_eff);
    if cert.delta != expected_delta {
        return Err(VerifyError::Delta { found: cert.delta, expected: expected_delta });
    }
    if cert.used_coordinate != coord {
        return Err(VerifyError::Header("used_coordinate"));
    }
    if let Some(range) = cert.epsilon_range {
        let gap = cusp.nearest_lift_gap(range);
        if cert.epsilon != gap {
            return Err(VerifyError::Epsilon { found: cert.epsilon, expected: gap, range });
        }
    }
    if let Some(bad) = cert.tail().find(|c| !c.passes || c.verdict != "Simple") {
        return Err(VerifyError::TailNotSimple(bad.index));
    }
    let opts = CheckOptions::new(cert.tol, cert.epsilon).exact(cert.exact);
    let fresh = certify_q0(&cusp, cert.scan_limit, &opts, cert.samples, Execution::default())?;
    if fresh.p_threshold != cert.p_threshold {
        return Err(VerifyError::Header("P"));
    }
    if fresh.checks.len() != cert.checks.len() {
        return Err(VerifyError::Header("checks"));
    }
    for (a, b) in fresh.checks.iter().zip(&cert.checks) {
        let field = if a.index != b.index || a.p != b.p || a.q != b.q {
            Some("index")
        } else if a.verdict != b.verdict || a.witness != b.witness {
            Some("verdict")
        } else if a.passes != b.passes || a.delta_ok != b.delta_ok || a.bound_decreasing != b.bound_decreasing {
            Some("pass flags")
        } else if a.box_oracle_nonsimple != b.box_oracle_nonsimple || a.torus_oracle_nonsimple != b.torus_oracle_nonsimple {
            Some("oracle results")
        } else if a != b {
            Some("measurements")
        } else {
            None
        };
        if let Some(field) = field {
            return Err(VerifyError::Mismatch { index: b.index, field });
        }
    }
    if fresh.tail_bound_at_limit != cert.tail_bound_at_limit {
        return Err(VerifyError::Header("tail_bound_at_limit"));
    }
    Ok(())
}
