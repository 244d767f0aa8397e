//! Randomized property suites for the inversive kernel.

mod common;

use common::{carrier_gap, euclid_tangency_gap, rng};
use malfatti::geom::{Circle, GenCircle, Line, Vec2};
use malfatti::inversive::{
    polar, pole, power_of_point, similitude_centers, InversiveMap,
};
use rand::Rng;

fn random_point(rng: &mut rand_chacha::ChaCha8Rng) -> Vec2 {
    Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
}

fn random_inversion(rng: &mut rand_chacha::ChaCha8Rng) -> InversiveMap {
    InversiveMap::Inversion {
        center: random_point(rng),
        power: rng.gen_range(0.1..4.0),
    }
}

/// Distance from a point to the nearest point of a carrier.
fn clearance(p: Vec2, g: &GenCircle) -> f64 {
    match g {
        GenCircle::Circle(c) => (p.dist(c.center) - c.r).abs(),
        GenCircle::Line(l) => l.signed_dist(p).abs(),
    }
}

#[test]
fn inversion_is_an_involution_on_points() {
    let mut rng = rng(0x1001);
    for _ in 0..1000 {
        let map = random_inversion(&mut rng);
        let InversiveMap::Inversion { center, .. } = map else { unreachable!() };
        let p = loop {
            let p = random_point(&mut rng);
            if p.dist(center) > 0.05 {
                break p;
            }
        };
        let once = map.apply_point(p).unwrap();
        let twice = map.apply_point(once).unwrap();
        assert!(twice.dist(p) < 1e-10, "involution drift {}", twice.dist(p));
    }
}

#[test]
fn inversion_is_an_involution_on_carriers() {
    let mut rng = rng(0x1002);
    for case in 0..1000 {
        let map = random_inversion(&mut rng);
        let InversiveMap::Inversion { center, .. } = map else { unreachable!() };
        let g = if case % 3 == 0 {
            GenCircle::Line(Line::new(
                Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)),
                rng.gen_range(-1.5..1.5),
            ))
        } else {
            GenCircle::Circle(Circle::new(random_point(&mut rng), rng.gen_range(0.2..1.5)))
        };
        // Keep the inversion center clear of the carrier so the image stays
        // bounded and the round trip is well-conditioned.
        if clearance(center, &g) < 0.1 {
            continue;
        }
        let image = map.apply(&g, 1e-12);
        let back = map.apply(&image, 1e-12);
        let gap = carrier_gap(&g, &back);
        assert!(gap < 1e-10, "carrier involution gap {gap} on case {case}");
    }
}

#[test]
fn inversion_preserves_tangency() {
    let mut rng = rng(0x1003);
    for case in 0..1000 {
        // Two externally tangent circles by construction.
        let c1 = Circle::new(random_point(&mut rng), rng.gen_range(0.2..1.0));
        let dir = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        let r2 = rng.gen_range(0.2..1.0);
        let c2 = Circle::new(c1.center + dir * (c1.r + r2), r2);
        let g1 = GenCircle::Circle(c1);
        let g2 = GenCircle::Circle(c2);
        let map = random_inversion(&mut rng);
        let InversiveMap::Inversion { center, .. } = map else { unreachable!() };
        if clearance(center, &g1) < 0.1 || clearance(center, &g2) < 0.1 {
            continue;
        }
        let i1 = map.apply(&g1, 1e-12);
        let i2 = map.apply(&g2, 1e-12);
        let gap = euclid_tangency_gap(&i1, &i2);
        assert!(gap < 1e-9, "image tangency gap {gap} on case {case}");
    }
}

#[test]
fn monge_external_centers_are_collinear() {
    let mut rng = rng(0x1004);
    for case in 0..1000 {
        // Pairwise distinct radii keep all external centers finite.
        let mut circles = [Circle::new(Vec2::ZERO, 1.0); 3];
        loop {
            for (k, slot) in circles.iter_mut().enumerate() {
                *slot = Circle::new(random_point(&mut rng), 0.3 + 0.5 * k as f64 + rng.gen_range(0.0..0.2));
            }
            let apart = [(0, 1), (1, 2), (2, 0)]
                .iter()
                .all(|&(i, j)| circles[i].center.dist(circles[j].center) > 0.3);
            if apart {
                break;
            }
        }
        let mut pts = [Vec2::ZERO; 3];
        for (k, (i, j)) in [(0usize, 1usize), (1, 2), (2, 0)].into_iter().enumerate() {
            let centers = similitude_centers(&circles[i], &circles[j], 1e-12).unwrap();
            pts[k] = centers.external.finite().expect("distinct radii");
        }
        let axis = Line::through(pts[0], pts[1]);
        let res = axis.signed_dist(pts[2]).abs();
        assert!(res < 1e-10, "Monge residual {res} on case {case}");
    }
}

#[test]
fn pole_and_polar_round_trip() {
    let mut rng = rng(0x1005);
    for case in 0..1000 {
        let c = Circle::new(random_point(&mut rng), rng.gen_range(0.3..2.0));
        let dir = Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        let d = c.r * rng.gen_range(0.1..10.0);
        if (d - c.r).abs() < 1e-3 {
            continue; // a point on the circle is its own polar contact
        }
        let p = c.center + dir * d;
        let line = polar(p, &c, 1e-12).unwrap();
        let back = pole(&line, &c, 1e-12).unwrap();
        assert!(back.dist(p) < 1e-10, "round-trip drift {} on case {case}", back.dist(p));
    }
}

#[test]
fn power_vanishes_exactly_on_the_circle() {
    let mut rng = rng(0x1006);
    for _ in 0..1000 {
        let c = Circle::new(random_point(&mut rng), rng.gen_range(0.2..2.0));
        let on = c.center + Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * c.r;
        let scale = c.center.norm() + c.r;
        assert!(power_of_point(on, &c).abs() < 1e-12 * scale * scale);
        // And is bounded away from zero at a point off the circle.
        let off = c.center + Vec2::from_angle(rng.gen_range(0.0..std::f64::consts::TAU)) * (1.5 * c.r);
        assert!(power_of_point(off, &c).abs() > 1e-6);
    }
}
