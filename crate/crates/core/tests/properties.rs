mod common;

use approx::assert_relative_eq;
use common::{c, naive_distance, naive_roots, solve_coords};
use geoknot::cusp::LatticeCoords;
use geoknot::io::{read_results_from, write_results_to, ResultRow};
use geoknot::moebius::hyperbolic_distance;
use geoknot::oracle::{default_box, oracle_lattice_box};
use geoknot::simplicity::{assess, long_arc_nonsimple, short_arc_distance};
use geoknot::{
    build_record, BoundaryPoint, CheckOptions, Complex64, CuspData, FamilyIndex, IsometryClass, MoebiusMap,
    SimplicityVerdict, UpperHalfSpacePoint,
};
use proptest::prelude::*;

fn cplx(r: f64) -> impl Strategy<Value = Complex64> {
    (-r..r, -r..r).prop_map(|(a, b)| c(a, b))
}

fn unimodular() -> impl Strategy<Value = MoebiusMap> {
    (cplx(3.0), cplx(3.0), cplx(3.0), cplx(3.0))
        .prop_filter("well conditioned", |(a, b, cc, d)| (a * d - b * cc).norm() > 1e-2)
        .prop_map(|(a, b, cc, d)| MoebiusMap::new(a, b, cc, d).unwrap())
        .prop_filter("moderate entries", |m| m.entries().iter().all(|e| e.norm() < 50.0))
}

fn cusp() -> impl Strategy<Value = CuspData> {
    (0.5f64..2.0, -0.3f64..0.3, -1.0f64..1.0, 0.5f64..2.0, 0.0f64..1.0, 0.0f64..1.0, 0.0f64..std::f64::consts::TAU)
        .prop_filter("offset not both zero", |t| t.4 > 1e-3 || t.5 > 1e-3)
        .prop_map(|(ar, ai, br, bi, x0, y0, th)| {
            CuspData::new("random", c(ar, ai), c(br, bi), x0, y0, Complex64::from_polar(1.0, th)).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn normalize_gives_unit_determinant(a in cplx(10.0), b in cplx(10.0), cc in cplx(10.0), d in cplx(10.0)) {
        let det = a * d - b * cc;
        prop_assume!(det.norm() >= 1e-6);
        let m = MoebiusMap::new(a, b, cc, d).unwrap();
        prop_assert!((m.det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn compose_matches_sequential_action(m1 in unimodular(), m2 in unimodular(), z in cplx(4.0)) {
        let inner = m2.apply_boundary(BoundaryPoint::Finite(z));
        let outer = match inner {
            BoundaryPoint::Finite(w) => m1.apply_boundary(BoundaryPoint::Finite(w)),
            BoundaryPoint::Infinity => m1.apply_boundary(inner),
        };
        let direct = m1.compose(&m2).apply_boundary(BoundaryPoint::Finite(z));
        // Skip configurations near a pole of either map.
        if let (BoundaryPoint::Finite(u), BoundaryPoint::Finite(v)) = (outer, direct) {
            prop_assume!(u.norm() < 1e4 && inner.finite().is_some_and(|w| w.norm() < 1e4));
            prop_assert!((u - v).norm() < 1e-9 * (1.0 + u.norm()), "{u} vs {v}");
        }
    }

    #[test]
    fn h3_action_is_isometric(m in unimodular(), z1 in cplx(2.0), z2 in cplx(2.0), t1 in 0.2f64..3.0, t2 in 0.2f64..3.0) {
        let p = UpperHalfSpacePoint::new(z1, t1);
        let q = UpperHalfSpacePoint::new(z2, t2);
        let before = hyperbolic_distance(p, q);
        let after = hyperbolic_distance(m.apply_h3(p), m.apply_h3(q));
        prop_assert!((before - after).abs() < 1e-10 * (1.0 + before), "{before} vs {after}");
    }

    #[test]
    fn distance_matches_cosh_formula(z1 in cplx(2.0), z2 in cplx(2.0), t1 in 0.2f64..3.0, t2 in 0.2f64..3.0) {
        let d = hyperbolic_distance(UpperHalfSpacePoint::new(z1, t1), UpperHalfSpacePoint::new(z2, t2));
        let naive = naive_distance(z1, t1, z2, t2);
        prop_assume!(naive > 1e-4);
        prop_assert!((d - naive).abs() < 1e-9 * (1.0 + naive));
    }

    #[test]
    fn loxodromic_fixed_points_are_fixed(m in unimodular()) {
        prop_assume!(m.classify() == IsometryClass::Loxodromic);
        let tr = m.trace();
        prop_assume!((tr * tr - 4.0).norm() > 1e-3);
        let line = m.fixed_points().unwrap();
        for p in [line.start, line.end] {
            let image = m.apply_boundary(p);
            match (p, image) {
                (BoundaryPoint::Finite(z), BoundaryPoint::Finite(w)) =>
                    prop_assert!((z - w).norm() < 1e-9 * (1.0 + z.norm()), "{z} -> {w}"),
                (BoundaryPoint::Infinity, BoundaryPoint::Infinity) => {}
                _ => prop_assert!(false, "{p:?} -> {image:?}"),
            }
        }
    }

    #[test]
    fn vieta_on_family_shape(b in cplx(20.0), th in 0.0f64..std::f64::consts::TAU, r in 0.5f64..2.0) {
        let cc = Complex64::from_polar(r, th);
        let m = MoebiusMap::new(cc * b, -1.0 / cc, cc, c(0.0, 0.0)).unwrap();
        prop_assume!(m.classify() == IsometryClass::Loxodromic);
        let line = m.fixed_points().unwrap();
        let (z1, z2) = (line.start.finite().unwrap(), line.end.finite().unwrap());
        let scale = 1.0 + b.norm();
        prop_assert!((z1 + z2 - b).norm() < 1e-10 * scale);
        prop_assert!((z1 * z2 - 1.0 / (cc * cc)).norm() < 1e-10 * scale);
        let (n1, n2) = naive_roots(b, cc);
        let close = |u: Complex64, v: Complex64| (u - v).norm() < 1e-6 * scale;
        prop_assert!((close(z1, n1) && close(z2, n2)) || (close(z1, n2) && close(z2, n1)));
    }

    #[test]
    fn lattice_coordinates_round_trip(cu in cusp(), z in cplx(50.0)) {
        let v = cu.to_lattice_coords(z);
        let (x, y) = solve_coords(&cu, z);
        prop_assert!((v.x - x).abs() < 1e-9 * (1.0 + x.abs()) && (v.y - y).abs() < 1e-9 * (1.0 + y.abs()));
        let back = cu.from_lattice_coords(v);
        prop_assert!((back - z).norm() < 1e-12 * (1.0 + z.norm()));
    }

    #[test]
    fn canonical_g_is_unimodular(cu in cusp()) {
        prop_assert!((cu.canonical_g().det() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn lift_gap_non_increasing(cu in cusp()) {
        let gaps: Vec<f64> = (1..=4).map(|k| cu.nearest_lift_gap(k)).collect();
        prop_assert!(gaps.iter().all(|g| *g > 0.0));
        prop_assert!(gaps.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn scan_matches_box_oracle(x in -30.0f64..30.0, y in -30.0f64..30.0) {
        let v = LatticeCoords::new(x, y);
        let a = long_arc_nonsimple(v, 1e-9);
        let b = oracle_lattice_box(v, default_box(v), 1e-9);
        prop_assert_eq!(a.map(|w| (w.m, w.n)), b.map(|w| (w.m, w.n)));
    }

    #[test]
    fn scan_matches_box_oracle_on_lattice_directions(m in -12i64..12, n in -12i64..12, k in 1u32..6, stretch in 1.0f64..3.0) {
        prop_assume!(m != 0 || n != 0);
        let s = stretch / k as f64;
        let v = LatticeCoords::new(m as f64 * s, n as f64 * s);
        let a = long_arc_nonsimple(v, 1e-9);
        let b = oracle_lattice_box(v, default_box(v), 1e-9);
        prop_assert_eq!(a.is_some(), b.is_some());
        if let Some(w) = a {
            prop_assert!((w.t * v.x - w.m as f64).hypot(w.t * v.y - w.n as f64) < 1e-9);
            prop_assert!(w.t > 0.0 && w.t <= 1.0);
        }
    }

    #[test]
    fn family_trace_and_axis(cu in cusp(), p in -50i64..=50, q in -50i64..=50) {
        let rec = build_record(&cu, FamilyIndex::new(p, q));
        let b = rec.b_pq;
        let scale = 1.0 + b.norm();
        prop_assert!((rec.map.trace() - cu.c * b).norm() < 1e-10 * scale);
        if let Some(ax) = rec.axis {
            prop_assert!((ax.z_minus + ax.z_plus - b).norm() < 1e-10 * scale);
            prop_assert!((ax.z_minus * ax.z_plus - 1.0 / (cu.c * cu.c)).norm() < 1e-10 * scale);
            prop_assert!(ax.z_minus.norm() <= ax.z_plus.norm());
        }
        if let Ok(arcs) = rec.arcs() {
            let ax = rec.axis.unwrap();
            for z in [arcs.c_pq, arcs.d_pq] {
                let h2 = ax.radius * ax.radius - (z - ax.center).norm_sqr();
                prop_assert!((h2 - 1.0).abs() < 1e-9 * ax.radius * ax.radius);
            }
        }
        prop_assert!(rec.map.apply_boundary(BoundaryPoint::Finite(c(0.0, 0.0))).is_infinite());
        let at_inf = rec.map.apply_boundary(BoundaryPoint::Infinity).finite().unwrap();
        prop_assert!((at_inf - b).norm() < 1e-10 * scale);
    }

    #[test]
    fn simple_verdicts_are_sound(cu in cusp(), p in -40i64..=40, q in -40i64..=40) {
        let rec = build_record(&cu, FamilyIndex::new(p, q));
        let opts = CheckOptions::new(1e-9, cu.nearest_lift_gap(3));
        let a = assess(&rec, &cu, &opts);
        match a.verdict {
            SimplicityVerdict::Simple => {
                let v = a.vector.unwrap();
                prop_assert!(oracle_lattice_box(v, default_box(v), 1e-9).is_none());
                prop_assert!(short_arc_distance(&rec).unwrap() < opts.epsilon);
            }
            SimplicityVerdict::LongArcNonsimple(w) => prop_assert!(w.holds_for(a.vector.unwrap(), 1e-9)),
            SimplicityVerdict::ShortArcUnverified { distance, epsilon } => prop_assert!(distance >= epsilon),
            SimplicityVerdict::AxisTooLow => prop_assert!(rec.arcs().is_err()),
        }
    }

    #[test]
    fn results_csv_round_trip(cu in cusp(), p in -30i64..=30, q in -30i64..=30) {
        let opts = CheckOptions::new(1e-9, cu.nearest_lift_gap(2));
        let rows: Vec<ResultRow> = [(p, q), (q, p), (p, -q)]
            .into_iter()
            .map(|(p, q)| geoknot::evaluate(&cu, FamilyIndex::new(p, q), &opts))
            .map(|e| ResultRow::from_evaluation(&e, opts.epsilon))
            .collect();
        let mut buf = Vec::new();
        write_results_to(&rows, &mut buf).unwrap();
        let mut back = read_results_from(buf.as_slice()).unwrap();
        let mut sorted = rows.clone();
        sorted.sort_by_key(|r| (r.p, r.q));
        back.sort_by_key(|r| (r.p, r.q));
        prop_assert_eq!(back, sorted);
    }
}

#[test]
fn radius_eventually_increasing_along_q0() {
    for cu in common::datasets() {
        let radii: Vec<f64> = (20..200).map(|p| build_record(&cu, FamilyIndex::new(p, 0)).axis.unwrap().radius).collect();
        assert!(radii.windows(2).all(|w| w[1] > w[0]), "{}", cu.name);
        let radii: Vec<f64> = (20..200).map(|p| build_record(&cu, FamilyIndex::new(-p, 0)).axis.unwrap().radius).collect();
        assert!(radii.windows(2).all(|w| w[1] > w[0]), "{}", cu.name);
    }
}

#[test]
fn complex_length_grows_logarithmically() {
    let cu = common::square();
    let lens: Vec<f64> = [10, 20, 40, 80]
        .iter()
        .map(|&p| build_record(&cu, FamilyIndex::new(p, 0)).length.unwrap().re)
        .collect();
    for w in lens.windows(2) {
        // Doubling |trace| adds about 2 ln 2 to the length.
        assert_relative_eq!(w[1] - w[0], 2.0 * 2f64.ln(), epsilon = 0.05);
    }
}
