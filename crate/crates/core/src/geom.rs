//! Euclidean primitives for the chart plane.
//!
//! Everything downstream (the inversive kernel, the disk model, the
//! constructions) manipulates plain Euclidean circles and lines in the
//! coordinate plane of the model, so these types deliberately stay small and
//! copyable.

use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point or direction in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the wedge product; positive when `o` is counterclockwise of `self`.
    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn dist(self, o: Vec2) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction. The caller guarantees `self != 0`.
    pub fn normalized(self) -> Vec2 {
        let n = self.norm();
        debug_assert!(n > 0.0, "normalizing zero vector");
        self / n
    }

    /// Rotation by +90 degrees.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn from_angle(t: f64) -> Vec2 {
        Vec2::new(t.cos(), t.sin())
    }

    /// Complex multiplication, reading (x, y) as x + iy.
    pub fn cmul(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x * o.x - self.y * o.y, self.x * o.y + self.y * o.x)
    }

    /// Complex conjugate.
    pub fn conj(self) -> Vec2 {
        Vec2::new(self.x, -self.y)
    }

    /// Complex division. The caller guarantees `o != 0`.
    pub fn cdiv(self, o: Vec2) -> Vec2 {
        let d = o.norm2();
        debug_assert!(d > 0.0, "complex division by zero");
        self.cmul(o.conj()) / d
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// An oriented line `{ p : normal . p = offset }` with unit normal.
///
/// The orientation (sign of the normal) distinguishes the two half planes:
/// [`Line::signed_dist`] is positive on the side the normal points into.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub normal: Vec2,
    pub offset: f64,
}

impl Line {
    /// Builds a line from any nonzero normal, normalizing it.
    pub fn new(normal: Vec2, offset: f64) -> Line {
        let n = normal.norm();
        debug_assert!(n > 0.0, "line with zero normal");
        Line {
            normal: normal / n,
            offset: offset / n,
        }
    }

    /// Line through two distinct points.
    pub fn through(p: Vec2, q: Vec2) -> Line {
        let n = (q - p).perp();
        Line::new(n, n.dot(p))
    }

    pub fn signed_dist(&self, p: Vec2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Orthogonal projection of `p` onto the line.
    pub fn foot(&self, p: Vec2) -> Vec2 {
        p - self.normal * self.signed_dist(p)
    }

    /// Unit direction along the line.
    pub fn direction(&self) -> Vec2 {
        self.normal.perp()
    }

    /// Mirror image of `p` across the line.
    pub fn reflect(&self, p: Vec2) -> Vec2 {
        p - self.normal * (2.0 * self.signed_dist(p))
    }

    /// Same line with both representations `(n, d)` and `(-n, -d)` mapped to
    /// a single canonical one, for deduplication and stable output ordering.
    pub fn canonical(&self) -> Line {
        let flip = self.normal.y < 0.0 || (self.normal.y == 0.0 && self.normal.x < 0.0);
        if flip {
            Line {
                normal: -self.normal,
                offset: -self.offset,
            }
        } else {
            *self
        }
    }
}

/// A Euclidean circle with strictly positive radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Vec2,
    pub r: f64,
}

impl Circle {
    pub fn new(center: Vec2, r: f64) -> Circle {
        debug_assert!(r > 0.0, "circle with nonpositive radius");
        Circle { center, r }
    }

    pub fn point_at(&self, t: f64) -> Vec2 {
        self.center + Vec2::from_angle(t) * self.r
    }
}

/// A circle or a line; inversive maps do not preserve the distinction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GenCircle {
    Circle(Circle),
    Line(Line),
}

impl GenCircle {
    pub fn as_circle(&self) -> Option<Circle> {
        match self {
            GenCircle::Circle(c) => Some(*c),
            GenCircle::Line(_) => None,
        }
    }

    pub fn as_line(&self) -> Option<Line> {
        match self {
            GenCircle::Line(l) => Some(*l),
            GenCircle::Circle(_) => None,
        }
    }

    /// Unsigned distance from `p` to the point set.
    pub fn dist_to(&self, p: Vec2) -> f64 {
        match self {
            GenCircle::Circle(c) => (p.dist(c.center) - c.r).abs(),
            GenCircle::Line(l) => l.signed_dist(p).abs(),
        }
    }

    /// Unit tangent direction of the carrier at a point assumed to lie on it.
    pub fn tangent_at(&self, p: Vec2) -> Vec2 {
        match self {
            GenCircle::Circle(c) => (p - c.center).perp().normalized(),
            GenCircle::Line(l) => l.direction(),
        }
    }

    /// Nearest point of the carrier to `p`.
    pub fn project(&self, p: Vec2) -> Vec2 {
        match self {
            GenCircle::Circle(c) => {
                let d = p - c.center;
                let n = d.norm();
                if n == 0.0 {
                    c.center + Vec2::new(c.r, 0.0)
                } else {
                    c.center + d * (c.r / n)
                }
            }
            GenCircle::Line(l) => l.foot(p),
        }
    }
}

/// Circle (or line, when the points are collinear within `tol`) through three
/// distinct points. Returns `None` when two of the points coincide.
pub fn through_three_points(p1: Vec2, p2: Vec2, p3: Vec2, tol: f64) -> Option<GenCircle> {
    let u = p2 - p1;
    let v = p3 - p1;
    let scale = u.norm().max(v.norm());
    if u.norm() < tol || v.norm() < tol || p2.dist(p3) < tol {
        return None;
    }
    // Twice the signed triangle area, relative to the configuration scale.
    let area2 = u.cross(v);
    if area2.abs() < tol * scale * scale {
        return Some(GenCircle::Line(Line::through(p1, p3)));
    }
    // Perpendicular bisectors: u . o = (p1 + p2)/2 . u and v . o = (p1 + p3)/2 . v.
    let det = u.cross(v);
    let r1 = (p1 + p2).dot(u) / 2.0;
    let r2 = (p1 + p3).dot(v) / 2.0;
    let ox = (r1 * v.y - r2 * u.y) / det;
    let oy = (r2 * u.x - r1 * v.x) / det;
    let o = Vec2::new(ox, oy);
    Some(GenCircle::Circle(Circle::new(o, o.dist(p1))))
}

/// Solves a 2x2 linear system `[[a, b], [c, d]] x = (e, f)`.
/// Returns `None` when the determinant vanishes relative to the entries.
pub fn solve2(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64) -> Option<Vec2> {
    let det = a * d - b * c;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some(Vec2::new((e * d - b * f) / det, (a * f - e * c) / det))
}
