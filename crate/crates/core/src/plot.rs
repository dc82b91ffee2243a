//! Static SVG of the horosphere at height 1: lattice lifts of the bumping
//! point and the projected long-arc segments, coloured by verdict.

use std::fmt::Write;

use num_complex::Complex64;

use crate::batch::Evaluation;
use crate::cusp::{CuspData, LiftKind, LiftLabel};
use crate::simplicity::SimplicityVerdict;

const WIDTH: f64 = 960.0;
const MARGIN: f64 = 40.0;

fn colour(v: &SimplicityVerdict) -> &'static str {
    match v {
        SimplicityVerdict::Simple => "#1f77b4",
        SimplicityVerdict::LongArcNonsimple(_) => "#d62728",
        SimplicityVerdict::ShortArcUnverified { .. } => "#ff7f0e",
        SimplicityVerdict::AxisTooLow => "#7f7f7f",
    }
}

struct Frame {
    min: Complex64,
    scale: f64,
    height: f64,
}

impl Frame {
    fn fit(points: &[Complex64]) -> Self {
        let (mut lo, mut hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
        for z in points {
            lo.re = lo.re.min(z.re);
            lo.im = lo.im.min(z.im);
            hi.re = hi.re.max(z.re);
            hi.im = hi.im.max(z.im);
        }
        let pad = 0.5;
        lo -= Complex64::new(pad, pad);
        hi += Complex64::new(pad, pad);
        let span = hi - lo;
        let scale = (WIDTH - 2.0 * MARGIN) / span.re.max(span.im);
        Self { min: lo, scale, height: span.im * scale + 2.0 * MARGIN }
    }

    fn map(&self, z: Complex64) -> (f64, f64) {
        let x = MARGIN + (z.re - self.min.re) * self.scale;
        let y = self.height - MARGIN - (z.im - self.min.im) * self.scale;
        (x, y)
    }

    fn contains(&self, z: Complex64) -> bool {
        let (x, y) = self.map(z);
        (0.0..=WIDTH).contains(&x) && (0.0..=self.height).contains(&y)
    }
}

/// Renders the segments `c_pq → d_pq` of every evaluated member, together with the lattice points `a_{p,q}` (filled) and `b_{p,q}`
/// (hollow) inside the frame. A witness of a nonsimple segment is marked
/// at `c_pq + m t_α + n t_β`. Members whose axis stays below the
/// horosphere are drawn dashed along the projected axis `z₋ → z₊`.
pub fn render_svg(cusp: &CuspData, evals: &[Evaluation]) -> String {
    let segments: Vec<(&Evaluation, Complex64, Complex64)> = evals
        .iter()
        .filter_map(|e| match (e.record.arcs(), e.record.axis) {
            (Ok(a), _) => Some((e, a.c_pq, a.d_pq)),
            (Err(_), Some(ax)) => Some((e, ax.z_minus, ax.z_plus)),
            (Err(_), None) => None,
        })
        .collect();
    let ends: Vec<Complex64> = segments.iter().flat_map(|(_, c, d)| [*c, *d]).collect();
    let frame = Frame::fit(&ends);

    let mut svg = String::new();
    let h = frame.height;
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{h:.0}" viewBox="0 0 {WIDTH:.0} {h:.0}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(svg, "<title>{}: projected long arcs on the cusp horosphere</title>", escape(&cusp.name)).unwrap();

    // Enough lattice translates to cover the frame.
    let corners = [frame.min, frame.min + Complex64::new(WIDTH, h) / frame.scale];
    let reach = corners
        .iter()
        .map(|&z| cusp.to_lattice_coords(z))
        .flat_map(|v| [v.x.abs(), v.y.abs()])
        .fold(0.0f64, f64::max)
        .ceil() as i64
        + 2;
    let reach = reach.min(400);
    svg.push_str("<g id=\"lattice\">\n");
    for p in -reach..=reach {
        for q in -reach..=reach {
            for kind in [LiftKind::A, LiftKind::B] {
                let z = cusp.lift_position(LiftLabel { p, q, kind });
                if !frame.contains(z) {
                    continue;
                }
                let (x, y) = frame.map(z);
                let fill = if kind == LiftKind::A { "black" } else { "none" };
                writeln!(
                    svg,
                    r#"<circle class="lift-{}" cx="{x:.3}" cy="{y:.3}" r="2.5" fill="{fill}" stroke="black" stroke-width="0.8"/>"#,
                    if kind == LiftKind::A { "a" } else { "b" }
                )
                .unwrap();
            }
        }
    }
    svg.push_str("</g>\n<g id=\"segments\">\n");
    for (e, c, d) in &segments {
        let (x1, y1) = frame.map(*c);
        let (x2, y2) = frame.map(*d);
        let verdict = &e.assessment.verdict;
        let dash = if e.record.arcs.is_err() { r#" stroke-dasharray="4 3""# } else { "" };
        writeln!(
            svg,
            r#"<line class="segment" data-p="{}" data-q="{}" data-verdict="{}" x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{}" stroke-width="1.5"{dash}/>"#,
            e.record.index.p,
            e.record.index.q,
            verdict.label(),
            colour(verdict)
        )
        .unwrap();
        if let Some(w) = verdict.witness() {
            let hit = *c + cusp.t_alpha * w.m as f64 + cusp.t_beta * w.n as f64;
            let (x, y) = frame.map(hit);
            writeln!(
                svg,
                r#"<circle class="witness" data-m="{}" data-n="{}" cx="{x:.3}" cy="{y:.3}" r="5" fill="none" stroke="{}" stroke-width="2"/>"#,
                w.m,
                w.n,
                colour(verdict)
            )
            .unwrap();
        }
    }
    svg.push_str("</g>\n</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
