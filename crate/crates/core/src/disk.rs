//! Poincaré disk model of the hyperbolic plane, curvature -1.
//!
//! Points live strictly inside the unit circle; geodesics are carried by
//! diameters and by circles orthogonal to the unit circle. The metric is
//! `2 |dx| / (1 - |x|^2)`.

use crate::geom::{solve2, Circle, GenCircle, Line, Vec2};
use crate::inversive::{intersect, power_of_point, InversiveMap};
use thiserror::Error;

/// Points closer to the boundary than this are rejected: the chart loses
/// roughly half the mantissa there and certified results become meaningless.
pub const MODEL_BOUNDARY_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum DiskError {
    #[error("point at Euclidean norm {norm} is outside the model")]
    PointOutsideModel { norm: f64 },
    #[error("carrier is not strictly contained in the model")]
    CarrierNotInDisk,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
}

/// A point of the hyperbolic plane in disk coordinates, validated to be
/// strictly inside the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HPoint(Vec2);

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<HPoint, DiskError> {
        HPoint::from_vec(Vec2::new(x, y))
    }

    pub fn from_vec(v: Vec2) -> Result<HPoint, DiskError> {
        let n = v.norm();
        if n < 1.0 - MODEL_BOUNDARY_EPS {
            Ok(HPoint(v))
        } else {
            Err(DiskError::PointOutsideModel { norm: n })
        }
    }

    pub fn v(&self) -> Vec2 {
        self.0
    }

    pub const ORIGIN: HPoint = HPoint(Vec2::ZERO);
}

/// Hyperbolic distance between two model points.
///
/// Evaluated as `2 asinh sqrt(t)` with
/// `t = |p-q|^2 / ((1-|p|^2)(1-|q|^2))`, which stays fully accurate for
/// nearby points where the classical `acosh` form loses half the digits.
pub fn hyp_distance(p: HPoint, q: HPoint) -> f64 {
    let (p, q) = (p.v(), q.v());
    let t = (p - q).norm2() / ((1.0 - p.norm2()) * (1.0 - q.norm2()));
    2.0 * t.sqrt().asinh()
}

/// Disk automorphism `z -> (z - a)/(1 - conj(a) z)` taking `a` to the origin.
/// Its differential at `a` is a positive real scalar, so directions at the
/// base point are preserved.
fn translate_to_origin(a: Vec2, z: Vec2) -> Vec2 {
    let one = Vec2::new(1.0, 0.0);
    (z - a).cdiv(one - a.conj().cmul(z))
}

/// Inverse of [`translate_to_origin`]: `w -> (w + a)/(1 + conj(a) w)`.
fn translate_from_origin(a: Vec2, w: Vec2) -> Vec2 {
    let one = Vec2::new(1.0, 0.0);
    (w + a).cdiv(one + a.conj().cmul(w))
}

/// Unit tangent direction at `p` of the geodesic ray from `p` to `q`.
pub fn initial_direction(p: HPoint, q: HPoint) -> Result<Vec2, DiskError> {
    let w = translate_to_origin(p.v(), q.v());
    if w.norm() == 0.0 {
        return Err(DiskError::DegenerateInput("coincident points"));
    }
    Ok(w.normalized())
}

/// Point reached from `p` by travelling hyperbolic distance `t` along the
/// geodesic with initial unit direction `dir`.
pub fn exp_from(p: HPoint, dir: Vec2, t: f64) -> HPoint {
    let w = dir * (t / 2.0).tanh();
    HPoint(translate_from_origin(p.v(), w))
}

/// Hyperbolic midpoint of a segment.
pub fn hyp_midpoint(p: HPoint, q: HPoint) -> Result<HPoint, DiskError> {
    let d = hyp_distance(p, q);
    if d == 0.0 {
        return Ok(p);
    }
    Ok(exp_from(p, initial_direction(p, q)?, d / 2.0))
}

/// Carrier of the geodesic through two distinct points: a diameter when they
/// are collinear with the origin, otherwise the circle through both that is
/// orthogonal to the unit circle.
pub fn geodesic_through(p: HPoint, q: HPoint) -> Result<GenCircle, DiskError> {
    let (p, q) = (p.v(), q.v());
    let chord = q - p;
    if chord.norm() < 1e-15 {
        return Err(DiskError::DegenerateInput("coincident points"));
    }
    // Orthogonality to the unit circle forces o . x = (1 + |x|^2)/2 for
    // every carrier point x.
    match solve2(
        p.x,
        p.y,
        q.x,
        q.y,
        (1.0 + p.norm2()) / 2.0,
        (1.0 + q.norm2()) / 2.0,
    ) {
        Some(o) => {
            let r2 = o.norm2() - 1.0;
            if r2 <= 0.0 {
                return Err(DiskError::DegenerateInput("points too close to origin line"));
            }
            Ok(GenCircle::Circle(Circle::new(o, r2.sqrt())))
        }
        None => {
            // p, q and the origin are collinear: a diameter.
            let n = chord.perp();
            Ok(GenCircle::Line(Line::new(n, n.dot(p))))
        }
    }
}

/// Carrier of the geodesic through `p` with unit tangent direction `dir`.
pub fn geodesic_at(p: HPoint, dir: Vec2) -> Result<GenCircle, DiskError> {
    let pv = p.v();
    if dir.norm() == 0.0 {
        return Err(DiskError::DegenerateInput("zero direction"));
    }
    match solve2(
        dir.x,
        dir.y,
        pv.x,
        pv.y,
        pv.dot(dir),
        (1.0 + pv.norm2()) / 2.0,
    ) {
        Some(o) => {
            let r2 = o.norm2() - 1.0;
            if r2 <= 0.0 {
                return Err(DiskError::DegenerateInput("direction through origin"));
            }
            Ok(GenCircle::Circle(Circle::new(o, r2.sqrt())))
        }
        None => {
            // Radial direction: the geodesic is a diameter.
            let n = dir.perp();
            Ok(GenCircle::Line(Line::new(n, n.dot(pv))))
        }
    }
}

/// Signed hyperbolic distance from a model point to a geodesic carrier,
/// negative strictly inside a circle carrier (respectively on the negative
/// side of a line carrier).
pub fn signed_dist_to_geodesic(p: Vec2, g: &GenCircle) -> f64 {
    let denom = 1.0 - p.norm2();
    match g {
        GenCircle::Circle(c) => (power_of_point(p, c) / (c.r * denom)).asinh(),
        GenCircle::Line(l) => (2.0 * l.signed_dist(p) / denom).asinh(),
    }
}

/// Unsigned hyperbolic distance from a model point to a geodesic carrier.
pub fn dist_to_geodesic(p: Vec2, g: &GenCircle) -> f64 {
    signed_dist_to_geodesic(p, g).abs()
}

/// Hyperbolic reflection of a point in a geodesic: inversion in the carrier.
pub fn reflect_in_geodesic(p: Vec2, g: &GenCircle) -> Vec2 {
    match g {
        GenCircle::Circle(c) => {
            let m = InversiveMap::Inversion {
                center: c.center,
                power: c.r * c.r,
            };
            m.apply_point(p).expect("model point differs from carrier center")
        }
        GenCircle::Line(l) => l.reflect(p),
    }
}

/// Foot of the hyperbolic perpendicular from `p` onto the geodesic `g`.
pub fn foot_on_geodesic(p: HPoint, g: &GenCircle, tol: f64) -> Result<HPoint, DiskError> {
    let pv = p.v();
    let mirrored = reflect_in_geodesic(pv, g);
    if pv.dist(mirrored) <= tol {
        return Ok(p);
    }
    let perp = geodesic_through(p, HPoint::from_vec(mirrored)?)?;
    let pts = intersect(&perp, g, tol).map_err(|_| DiskError::DegenerateInput("carrier overlap"))?;
    pts.into_iter()
        .find(|q| q.norm() < 1.0 - MODEL_BOUNDARY_EPS)
        .map(HPoint)
        .ok_or(DiskError::DegenerateInput("perpendicular misses the carrier in the model"))
}

/// Euclidean carrier of the hyperbolic circle with given center and radius.
pub fn circle_from_center_radius(center: HPoint, r_h: f64) -> Result<Circle, DiskError> {
    if r_h <= 0.0 {
        return Err(DiskError::DegenerateInput("nonpositive radius"));
    }
    let c = center.v();
    let u = c.norm();
    let dir = if u == 0.0 { Vec2::new(1.0, 0.0) } else { c / u };
    // Diameter endpoints along the radial direction, mapped through the
    // 1D chart s = 2 artanh(t).
    let s = 2.0 * u.atanh();
    let t_far = ((s + r_h) / 2.0).tanh();
    let t_near = ((s - r_h) / 2.0).tanh();
    if t_far >= 1.0 - MODEL_BOUNDARY_EPS {
        return Err(DiskError::CarrierNotInDisk);
    }
    Ok(Circle::new(
        dir * ((t_far + t_near) / 2.0),
        (t_far - t_near) / 2.0,
    ))
}

/// Hyperbolic center and radius of a carrier circle strictly inside the
/// model. Inverse of [`circle_from_center_radius`].
pub fn carrier_to_center_radius(c: &Circle) -> Result<(HPoint, f64), DiskError> {
    let u = c.center.norm();
    if u + c.r >= 1.0 - MODEL_BOUNDARY_EPS {
        return Err(DiskError::CarrierNotInDisk);
    }
    let dir = if u == 0.0 {
        Vec2::new(1.0, 0.0)
    } else {
        c.center / u
    };
    let s_far = 2.0 * (u + c.r).atanh();
    let s_near = 2.0 * (u - c.r).atanh();
    let mid = (s_far + s_near) / 2.0;
    let r_h = (s_far - s_near) / 2.0;
    Ok((HPoint(dir * (mid / 2.0).tanh()), r_h))
}
