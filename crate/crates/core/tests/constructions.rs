//! Construction-level properties: Apollonius enumeration, the tangent
//! lemmas on random configurations, cross-method agreement, and the
//! Euclidean limit of the inversive pipeline.

mod common;

use common::{euclid_malfatti_of_circles, random_external_triple, random_sides, rng};
use malfatti::apollonius::gergonne_enumerate;
use malfatti::cycles::{
    build_cycle, common_tangent_geodesics, common_tangent_segment_lengths, embed_triangle,
    subtended_angle, tangent_length_point_cycle, Cycle, GeodesicTangentKind,
};
use malfatti::disk::{
    circle_from_center_radius, exp_from, foot_on_geodesic, geodesic_at, hyp_distance,
    initial_direction, HPoint,
};
use malfatti::geom::{Circle, GenCircle, Vec2};
use malfatti::inversive::intersect;
use malfatti::schellbach::{solve_triangle, TriangleSides};
use malfatti::steiner::steiner_triangle;
use rand::Rng;

const TOL: f64 = 1e-10;

#[test]
fn apollonius_enumeration_finds_exactly_eight() {
    let mut rng = rng(0x4001);
    for case in 0..30 {
        let [c1, c2, c3] = random_external_triple(&mut rng);
        let sols = gergonne_enumerate(&c1, &c2, &c3, TOL);
        assert_eq!(sols.len(), 8, "case {case}: got {}", sols.len());
        for sol in &sols {
            assert!(sol.residual < 1e-9, "case {case}: residual {}", sol.residual);
            for (touch, given) in sol.touch_points.iter().zip([&c1, &c2, &c3]) {
                let off = (touch.dist(given.center) - given.r).abs();
                assert!(off < 1e-9, "case {case}: touch point off by {off}");
            }
        }
    }
}

#[test]
fn symmetric_triple_reproduces_the_closed_form_radii() {
    // Three unit circles centered on an equilateral triangle of side 4:
    // the two concentric solutions have radii 4/sqrt(3) -/+ 1.
    let d = 4.0 / 3.0f64.sqrt();
    let at = |deg: f64| Vec2::from_angle(deg.to_radians()) * d;
    let c1 = Circle::new(at(90.0), 1.0);
    let c2 = Circle::new(at(210.0), 1.0);
    let c3 = Circle::new(at(330.0), 1.0);
    let sols = gergonne_enumerate(&c1, &c2, &c3, TOL);
    assert_eq!(sols.len(), 8);
    for want in [d - 1.0, d + 1.0] {
        let hit = sols.iter().any(|s| {
            s.circle
                .as_circle()
                .is_some_and(|c| (c.r - want).abs() < 1e-12 && c.center.norm() < 1e-12)
        });
        assert!(hit, "missing concentric solution of radius {want}");
    }
}

fn random_circle_cycle(
    rng: &mut rand_chacha::ChaCha8Rng,
    center_span: f64,
    r_lo: f64,
    r_hi: f64,
) -> (Cycle, HPoint, f64) {
    let center = loop {
        let v = Vec2::new(
            rng.gen_range(-center_span..center_span),
            rng.gen_range(-center_span..center_span),
        );
        if v.norm() < center_span {
            break HPoint::from_vec(v).unwrap();
        }
    };
    let r = rng.gen_range(r_lo..r_hi);
    let cycle = build_cycle(
        GenCircle::Circle(circle_from_center_radius(center, r).unwrap()),
        TOL,
    )
    .unwrap();
    (cycle, center, r)
}

#[test]
fn tangent_lengths_compose_along_common_tangents() {
    // For any point on a common tangent geodesic, the sum or the difference
    // of its two tangent lengths equals the tangent segment between the
    // touch points, depending on whether the point lies between them.
    let mut rng = rng(0x4002);
    let mut checked = 0usize;
    while checked < 50 {
        let (c1, o1, r1) = random_circle_cycle(&mut rng, 0.35, 0.15, 0.5);
        let (c2, o2, r2) = random_circle_cycle(&mut rng, 0.35, 0.15, 0.5);
        if hyp_distance(o1, o2) < r1 + r2 + 0.1 {
            continue;
        }
        checked += 1;
        let segments = common_tangent_segment_lengths(&c1, &c2, TOL).unwrap();
        let tangents = common_tangent_geodesics(&c1, &c2, TOL).unwrap();
        assert!(tangents.len() >= 2, "expected common tangents");
        for (t, kind) in &tangents {
            let f1 = foot_on_geodesic(o1, &t.carrier, TOL).unwrap();
            let f2 = foot_on_geodesic(o2, &t.carrier, TOL).unwrap();
            let seg = hyp_distance(f1, f2);
            let want = match kind {
                GeodesicTangentKind::Outer => segments.outer,
                GeodesicTangentKind::Inner => segments.inner.expect("disjoint circles"),
            };
            assert!(
                (seg - want).abs() < 1e-9,
                "segment length mismatch {}",
                (seg - want).abs()
            );
            let dir = t.carrier.tangent_at(f1.v()).normalized();
            for step in [-1.1, -0.4, 0.3, 0.8] {
                let p = exp_from(f1, dir, step);
                let t1 = tangent_length_point_cycle(p, &c1, TOL).unwrap();
                let t2 = tangent_length_point_cycle(p, &c2, TOL).unwrap();
                let res = (t1 + t2 - seg).abs().min(((t1 - t2).abs() - seg).abs());
                assert!(res < 1e-9, "tangent composition residual {res}");
            }
        }
    }
}

fn axis_point(u: f64) -> HPoint {
    HPoint::new((u / 2.0).tanh(), 0.0).unwrap()
}

#[test]
fn equal_cut_segments_give_equal_cross_tangents() {
    // Two circles cutting equal-length segments from a geodesic: the
    // tangent length from the extreme point of either segment to the other
    // circle is the same on both sides, and where the tangents drawn at the
    // extreme points meet, both circles subtend the same angle.
    let mut rng = rng(0x4003);
    let mut met = 0usize;
    for _ in 0..200 {
        let h: f64 = rng.gen_range(0.15..0.4);
        let g1: f64 = rng.gen_range(0.08..0.35);
        let g2: f64 = rng.gen_range(0.08..0.35);
        let u1: f64 = rng.gen_range(0.1..0.5);
        let u2: f64 = rng.gen_range(0.1..0.5);
        let m1 = -(h + g1);
        let m2 = h + g2;
        let o1 = exp_from(axis_point(m1), Vec2::new(0.0, 1.0), u1);
        let o2 = exp_from(axis_point(m2), Vec2::new(0.0, 1.0), u2);
        let a_end = axis_point(m1 - h);
        let d_end = axis_point(m2 + h);
        let r1 = hyp_distance(o1, a_end);
        let r2 = hyp_distance(o2, d_end);
        let c1 = build_cycle(
            GenCircle::Circle(circle_from_center_radius(o1, r1).unwrap()),
            TOL,
        )
        .unwrap();
        let c2 = build_cycle(
            GenCircle::Circle(circle_from_center_radius(o2, r2).unwrap()),
            TOL,
        )
        .unwrap();

        let ta = tangent_length_point_cycle(a_end, &c2, TOL).unwrap();
        let td = tangent_length_point_cycle(d_end, &c1, TOL).unwrap();
        assert!((ta - td).abs() < 1e-9, "cross tangents differ by {}", (ta - td).abs());

        let ga = geodesic_at(a_end, initial_direction(a_end, o1).unwrap().perp()).unwrap();
        let gd = geodesic_at(d_end, initial_direction(d_end, o2).unwrap().perp()).unwrap();
        if let Ok(pts) = intersect(&ga, &gd, TOL) {
            if let Some(p) = pts.into_iter().find(|p| p.norm() < 1.0 - 1e-9) {
                let hp = HPoint::from_vec(p).unwrap();
                let d1 = hyp_distance(hp, o1);
                let d2 = hyp_distance(hp, o2);
                if d1 > r1 && d2 > r2 {
                    met += 1;
                    let an1 = subtended_angle(r1, d1, TOL).unwrap();
                    let an2 = subtended_angle(r2, d2, TOL).unwrap();
                    assert!(
                        (an1 - an2).abs() < 1e-9,
                        "subtended angles differ by {}",
                        (an1 - an2).abs()
                    );
                }
            }
        }
    }
    assert!(met >= 100, "tangent meeting point rarely in the model: {met}/200");
}

#[test]
fn the_two_pipelines_agree_on_random_triangles() {
    let mut rng = rng(0x4004);
    for case in 0..20 {
        let (a, b, c) = random_sides(&mut rng, 0.3, 2.2, 0.05);
        let (tri, _, analytic) = solve_triangle(&TriangleSides { a, b, c }, TOL).unwrap();
        let sys = steiner_triangle(&tri, TOL).unwrap();
        for (cycle, reference) in sys.cycles.iter().zip(&analytic) {
            let (center, radius) = cycle.center_radius().unwrap();
            let dc = hyp_distance(center, reference.center);
            let dr = (radius - reference.radius).abs();
            assert!(dc < 1e-7, "case {case}: centers differ by {dc}");
            assert!(dr < 1e-7, "case {case}: radii differ by {dr}");
        }
        for cert in sys.mutual.iter().chain(sys.given_contacts.iter().flatten()) {
            assert!(cert.residual < 1e-8, "case {case}: certificate residual {}", cert.residual);
        }
    }
}

#[test]
fn tiny_clusters_match_the_euclidean_construction() {
    // With all content within ~1e-2 of the disk center, curvature effects
    // drop below 1e-6 and the inversive pipeline must land on the Euclidean
    // solution of the same carrier configuration.
    let mut rng = rng(0x4005);
    for case in 0..5 {
        let delta = 0.01;
        let mut given = Vec::new();
        for k in 0..3 {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0 + rng.gen_range(-0.2..0.2);
            let center = exp_from(HPoint::ORIGIN, Vec2::from_angle(angle), delta);
            let r = rng.gen_range(0.002..0.004);
            given.push(
                build_cycle(
                    GenCircle::Circle(circle_from_center_radius(center, r).unwrap()),
                    TOL,
                )
                .unwrap(),
            );
        }
        let given: [Cycle; 3] = given.try_into().unwrap();
        let sys = malfatti::steiner::steiner_cycles(&given, TOL).unwrap();

        let carriers: [Circle; 3] = [
            sys.cycles[0].carrier.as_circle().unwrap(),
            sys.cycles[1].carrier.as_circle().unwrap(),
            sys.cycles[2].carrier.as_circle().unwrap(),
        ];
        let given_carriers: [Circle; 3] = [
            given[0].carrier.as_circle().unwrap(),
            given[1].carrier.as_circle().unwrap(),
            given[2].carrier.as_circle().unwrap(),
        ];
        let euclid = euclid_malfatti_of_circles(&given_carriers, &carriers)
            .expect("Euclidean Malfatti iteration converged");
        for (got, want) in carriers.iter().zip(&euclid) {
            let drift = got.center.dist(want.center) + (got.r - want.r).abs();
            assert!(drift < 1e-6, "case {case}: Euclidean drift {drift}");
        }
    }
}

#[test]
fn triangle_route_and_enumeration_cross_validate() {
    // The three Malfatti circles of a triangle solve an Apollonius problem
    // for each other: every output is among the eight tangent circles of
    // the two other outputs and its nearest side reflection... kept simple:
    // each output circle is tangent to the other two within kernel accuracy.
    let tri = embed_triangle(1.0, 1.3, 1.7, TOL).unwrap();
    let sys = steiner_triangle(&tri, TOL).unwrap();
    for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
        let a = sys.cycles[i].carrier.as_circle().unwrap();
        let b = sys.cycles[j].carrier.as_circle().unwrap();
        let gap = (a.center.dist(b.center) - a.r - b.r).abs();
        assert!(gap < 1e-10, "outputs {i}{j} not externally tangent: {gap}");
    }
}
