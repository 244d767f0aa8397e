//! Inversive kernel: powers, inversions, similitude, poles and polars,
//! radical centers, common tangents and pairwise intersections.
//!
//! These are the Euclidean ingredients of Steiner-style constructions. All
//! maps here act on [`GenCircle`], since inversion freely exchanges circles
//! and lines.

use crate::geom::{solve2, Circle, GenCircle, Line, Vec2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("point coincides with the inversion center")]
    PointAtCenter,
    #[error("circles are identical within tolerance")]
    IdenticalCircles,
    #[error("circles are concentric, radical axis undefined")]
    ConcentricCircles,
    #[error("circle centers are collinear or coincident, radical center undefined")]
    CollinearCenters,
    #[error("line passes through the circle center, pole undefined")]
    LineThroughCenter,
    #[error("point is the circle center, polar undefined")]
    PointIsCenter,
    #[error("sign selection does not yield collinear similitude centers")]
    InadmissibleSigns,
    #[error("similitude centers are degenerate for this configuration")]
    DegenerateCenters,
    #[error("objects coincide within tolerance")]
    CoincidentObjects,
    #[error("configuration is degenerate: {0}")]
    DegenerateConfiguration(&'static str),
}

/// Power of a point with respect to a circle: `|p - o|^2 - r^2`.
///
/// Negative inside, zero on the circle, positive outside; it is the quantity
/// all inversive bookkeeping below is built on.
pub fn power_of_point(p: Vec2, c: &Circle) -> f64 {
    (p - c.center).norm2() - c.r * c.r
}

/// An orientation-reversing circle automorphism of the inversive plane:
/// inversion in a circle (the power may be negative, giving an
/// anti-inversion) or reflection in a line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InversiveMap {
    /// `p -> center + power * (p - center) / |p - center|^2`, power nonzero.
    Inversion { center: Vec2, power: f64 },
    Reflection { axis: Line },
}

impl InversiveMap {
    pub fn apply_point(&self, p: Vec2) -> Result<Vec2, KernelError> {
        match self {
            InversiveMap::Inversion { center, power } => {
                let d = p - *center;
                let n2 = d.norm2();
                if n2 == 0.0 {
                    return Err(KernelError::PointAtCenter);
                }
                Ok(*center + d * (power / n2))
            }
            InversiveMap::Reflection { axis } => Ok(axis.reflect(p)),
        }
    }

    /// Image of a circle or line. Total: a circle through the inversion
    /// center becomes a line and vice versa.
    pub fn apply(&self, g: &GenCircle, tol: f64) -> GenCircle {
        match self {
            InversiveMap::Reflection { axis } => match g {
                GenCircle::Circle(c) => GenCircle::Circle(Circle::new(axis.reflect(c.center), c.r)),
                GenCircle::Line(l) => {
                    let p = l.foot(Vec2::ZERO);
                    let q = p + l.direction();
                    GenCircle::Line(Line::through(axis.reflect(p), axis.reflect(q)))
                }
            },
            InversiveMap::Inversion { center, power } => {
                let e = *center;
                let k = *power;
                match g {
                    GenCircle::Circle(c) => {
                        let s = power_of_point(e, c);
                        let scale2 = (e - c.center).norm2() + c.r * c.r;
                        if s.abs() <= tol * scale2.max(1.0) {
                            // Carrier through the center: image is the line
                            // through the image of the antipode of e on c,
                            // perpendicular to the center join.
                            let u = c.center - e;
                            let a_img = e + u * (k / (2.0 * c.r * c.r));
                            GenCircle::Line(Line::new(u, u.dot(a_img)))
                        } else {
                            let q = k / s;
                            GenCircle::Circle(Circle::new(
                                e + (c.center - e) * q,
                                (q * c.r).abs(),
                            ))
                        }
                    }
                    GenCircle::Line(l) => {
                        let h = l.signed_dist(e);
                        if h.abs() <= tol {
                            GenCircle::Line(*l)
                        } else {
                            // Line not through the center: image circle has
                            // the center image of the foot and e as diameter.
                            let o = e - l.normal * (k / (2.0 * h));
                            GenCircle::Circle(Circle::new(o, (k / (2.0 * h)).abs()))
                        }
                    }
                }
            }
        }
    }

    /// The fixed-point set, when real: the reference circle of a positive
    /// inversion or the axis of a reflection.
    pub fn reference(&self) -> Option<GenCircle> {
        match self {
            InversiveMap::Inversion { center, power } if *power > 0.0 => Some(GenCircle::Circle(
                Circle::new(*center, power.sqrt()),
            )),
            InversiveMap::Inversion { .. } => None,
            InversiveMap::Reflection { axis } => Some(GenCircle::Line(*axis)),
        }
    }
}

/// One of the two centers of similitude; the external one escapes to
/// infinity for equal radii, in which case only its direction survives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimCenter {
    Finite(Vec2),
    AtInfinity(Vec2),
}

impl SimCenter {
    pub fn finite(&self) -> Option<Vec2> {
        match self {
            SimCenter::Finite(p) => Some(*p),
            SimCenter::AtInfinity(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilitudeCenters {
    pub external: SimCenter,
    pub internal: Vec2,
}

/// External and internal centers of similitude of two circles.
pub fn similitude_centers(
    c1: &Circle,
    c2: &Circle,
    tol: f64,
) -> Result<SimilitudeCenters, KernelError> {
    let d = c1.center.dist(c2.center);
    if d <= tol && (c1.r - c2.r).abs() <= tol {
        return Err(KernelError::IdenticalCircles);
    }
    let internal = (c1.center * c2.r + c2.center * c1.r) / (c1.r + c2.r);
    let external = if (c1.r - c2.r).abs() <= tol {
        SimCenter::AtInfinity((c2.center - c1.center).normalized())
    } else {
        SimCenter::Finite((c1.center * c2.r - c2.center * c1.r) / (c2.r - c1.r))
    };
    Ok(SimilitudeCenters { external, internal })
}

/// The inversive map exchanging two circles with disjoint closed interiors:
/// an inversion centered at the external similitude center, or a reflection
/// when the radii agree.
pub fn antisimilitude_map(
    c1: &Circle,
    c2: &Circle,
    tol: f64,
) -> Result<InversiveMap, KernelError> {
    let d = c1.center.dist(c2.center);
    if d <= tol && (c1.r - c2.r).abs() <= tol {
        return Err(KernelError::IdenticalCircles);
    }
    if d < c1.r + c2.r - tol {
        return Err(KernelError::DegenerateConfiguration(
            "closed interiors overlap",
        ));
    }
    swap_map(
        &GenCircle::Circle(*c1),
        &GenCircle::Circle(*c2),
        None,
        tol,
    )
}

/// Generalization of [`antisimilitude_map`] to any two distinct circles or
/// lines: returns an inversive map exchanging them, preferring one whose
/// reference cycle is real (so that it separates the two objects when they
/// are disjoint or nested).
///
/// When both objects are crossing lines there are two candidate reflections;
/// `hint` selects the axis that separates the two hinted sample points.
pub fn swap_map(
    a: &GenCircle,
    b: &GenCircle,
    hint: Option<(Vec2, Vec2)>,
    tol: f64,
) -> Result<InversiveMap, KernelError> {
    match (a, b) {
        (GenCircle::Circle(c1), GenCircle::Circle(c2)) => {
            let d = c1.center.dist(c2.center);
            if d <= tol && (c1.r - c2.r).abs() <= tol {
                return Err(KernelError::IdenticalCircles);
            }
            if (c1.r - c2.r).abs() <= tol {
                let n = c2.center - c1.center;
                let mid = (c1.center + c2.center) / 2.0;
                return Ok(InversiveMap::Reflection {
                    axis: Line::new(n, n.dot(mid)),
                });
            }
            let ratio = c2.r / c1.r;
            let e_ext = (c1.center * c2.r - c2.center * c1.r) / (c2.r - c1.r);
            let k_ext = power_of_point(e_ext, c1) * ratio;
            if k_ext > tol * tol {
                return Ok(InversiveMap::Inversion {
                    center: e_ext,
                    power: k_ext,
                });
            }
            let e_int = (c1.center * c2.r + c2.center * c1.r) / (c1.r + c2.r);
            let k_int = -power_of_point(e_int, c1) * ratio;
            if k_int > tol * tol {
                return Ok(InversiveMap::Inversion {
                    center: e_int,
                    power: k_int,
                });
            }
            // Crossing circles: fall back to whichever center is off both
            // carriers, accepting a negative power.
            if k_ext.abs() > tol * tol {
                Ok(InversiveMap::Inversion {
                    center: e_ext,
                    power: k_ext,
                })
            } else if k_int.abs() > tol * tol {
                Ok(InversiveMap::Inversion {
                    center: e_int,
                    power: k_int,
                })
            } else {
                Err(KernelError::DegenerateConfiguration(
                    "circles tangent at both similitude centers",
                ))
            }
        }
        (GenCircle::Line(l1), GenCircle::Line(l2)) => {
            let cross = l1.normal.cross(l2.normal);
            // Align orientations so the normals agree up to the crossing angle.
            let (n2, d2) = if l1.normal.dot(l2.normal) >= 0.0 {
                (l2.normal, l2.offset)
            } else {
                (-l2.normal, -l2.offset)
            };
            if cross.abs() <= tol {
                if (l1.offset - d2).abs() <= tol {
                    return Err(KernelError::IdenticalCircles);
                }
                return Ok(InversiveMap::Reflection {
                    axis: Line::new(l1.normal + n2, (l1.offset + d2) / 2.0),
                });
            }
            // Crossing lines: two angle bisectors, both exchange the lines.
            let axis_sum = Line::new(l1.normal + n2, 0.0);
            let axis_diff = Line::new(l1.normal - n2, 0.0);
            let v = solve2(
                l1.normal.x,
                l1.normal.y,
                n2.x,
                n2.y,
                l1.offset,
                d2,
            )
            .ok_or(KernelError::DegenerateConfiguration("ill-conditioned line pair"))?;
            let through = |ax: Line| Line::new(ax.normal, ax.normal.dot(v));
            let (sum_l, diff_l) = (through(axis_sum), through(axis_diff));
            match hint {
                Some((p, q)) => {
                    let pick = |ax: &Line| ax.signed_dist(p) * ax.signed_dist(q) < 0.0;
                    if pick(&sum_l) && !pick(&diff_l) {
                        Ok(InversiveMap::Reflection { axis: sum_l })
                    } else if pick(&diff_l) && !pick(&sum_l) {
                        Ok(InversiveMap::Reflection { axis: diff_l })
                    } else {
                        // Ambiguous hint: prefer the bisector of the smaller angle.
                        Ok(InversiveMap::Reflection { axis: diff_l })
                    }
                }
                None => Ok(InversiveMap::Reflection { axis: diff_l }),
            }
        }
        (GenCircle::Circle(c), GenCircle::Line(l)) | (GenCircle::Line(l), GenCircle::Circle(c)) => {
            let h = l.signed_dist(c.center);
            let sgn = if h >= 0.0 { 1.0 } else { -1.0 };
            // Inversion centered at the point of the circle farthest from the
            // line, with the power that maps the carrier onto the line.
            let e = c.center + l.normal * (sgn * c.r);
            let k = 2.0 * c.r * (c.r + h.abs());
            Ok(InversiveMap::Inversion { center: e, power: k })
        }
    }
}

/// Radical axis of two non-concentric circles: the locus of equal power.
pub fn radical_axis(c1: &Circle, c2: &Circle, tol: f64) -> Result<Line, KernelError> {
    let n = c2.center - c1.center;
    if n.norm() <= tol {
        return Err(KernelError::ConcentricCircles);
    }
    let d = (c2.center.norm2() - c2.r * c2.r - c1.center.norm2() + c1.r * c1.r) / 2.0;
    Ok(Line::new(n, d))
}

/// Radical center of three circles with non-collinear centers.
pub fn radical_center(
    c1: &Circle,
    c2: &Circle,
    c3: &Circle,
    tol: f64,
) -> Result<Vec2, KernelError> {
    let a12 = radical_axis(c1, c2, tol).map_err(|_| KernelError::CollinearCenters)?;
    let a13 = radical_axis(c1, c3, tol).map_err(|_| KernelError::CollinearCenters)?;
    solve2(
        a12.normal.x,
        a12.normal.y,
        a13.normal.x,
        a13.normal.y,
        a12.offset,
        a13.offset,
    )
    .ok_or(KernelError::CollinearCenters)
}

/// Pole of a line with respect to a circle.
pub fn pole(l: &Line, c: &Circle, tol: f64) -> Result<Vec2, KernelError> {
    let h = l.signed_dist(c.center);
    if h.abs() <= tol {
        return Err(KernelError::LineThroughCenter);
    }
    Ok(c.center - l.normal * (c.r * c.r / h))
}

/// Polar line of a point with respect to a circle.
pub fn polar(p: Vec2, c: &Circle, tol: f64) -> Result<Line, KernelError> {
    let n = p - c.center;
    if n.norm() <= tol {
        return Err(KernelError::PointIsCenter);
    }
    Ok(Line::new(n, n.dot(c.center) + c.r * c.r))
}

/// Choice of similitude center for one circle pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSign {
    External,
    Internal,
}

/// An axis of similitude of three circles. `signs` selects the center used
/// for the pairs `(c1,c2)`, `(c2,c3)`, `(c3,c1)` in that order; by Monge's
/// theorem the selection is consistent exactly when the number of external
/// choices is odd.
pub fn similitude_axis(
    c1: &Circle,
    c2: &Circle,
    c3: &Circle,
    signs: [PairSign; 3],
    tol: f64,
) -> Result<Line, KernelError> {
    let externals = signs.iter().filter(|s| **s == PairSign::External).count();
    if externals != 1 && externals != 3 {
        return Err(KernelError::InadmissibleSigns);
    }
    let pairs = [(c1, c2), (c2, c3), (c3, c1)];
    let mut pts = Vec::with_capacity(3);
    for (sign, (a, b)) in signs.iter().zip(pairs.iter()) {
        let sc = similitude_centers(a, b, tol)?;
        let p = match sign {
            PairSign::Internal => sc.internal,
            PairSign::External => sc
                .external
                .finite()
                .ok_or(KernelError::DegenerateCenters)?,
        };
        pts.push(p);
    }
    axis_through_collinear(&pts, tol)
}

/// Fits the line through the two most separated of three supposedly
/// collinear points and verifies the third lies on it.
pub(crate) fn axis_through_collinear(pts: &[Vec2], tol: f64) -> Result<Line, KernelError> {
    assert_eq!(pts.len(), 3);
    let d01 = pts[0].dist(pts[1]);
    let d12 = pts[1].dist(pts[2]);
    let d02 = pts[0].dist(pts[2]);
    let (i, j, k) = if d01 >= d12 && d01 >= d02 {
        (0, 1, 2)
    } else if d12 >= d01 && d12 >= d02 {
        (1, 2, 0)
    } else {
        (0, 2, 1)
    };
    if pts[i].dist(pts[j]) <= tol {
        return Err(KernelError::DegenerateCenters);
    }
    let line = Line::through(pts[i], pts[j]);
    let scale = pts[i].dist(pts[j]).max(1.0);
    if line.signed_dist(pts[k]).abs() > 1e-7 * scale {
        return Err(KernelError::DegenerateCenters);
    }
    Ok(line)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangentKind {
    /// Both circles on the same side.
    Outer,
    /// Circles on opposite sides.
    Inner,
}

/// Tangent lines through an external or boundary point of a circle.
pub fn tangent_lines_from_point(p: Vec2, c: &Circle, tol: f64) -> Vec<Line> {
    let d = p.dist(c.center);
    if d < c.r - tol {
        return Vec::new();
    }
    if (d - c.r).abs() <= tol {
        let n = p - c.center;
        return vec![Line::new(n, n.dot(p))];
    }
    let theta = (c.center - p).angle();
    let beta = (c.r / d).clamp(-1.0, 1.0).asin();
    [theta + beta, theta - beta]
        .iter()
        .map(|t| {
            let u = Vec2::from_angle(*t);
            let n = u.perp();
            Line::new(n, n.dot(p))
        })
        .collect()
}

/// Common tangent lines of two circles, classified as outer or inner.
///
/// Counts follow the classical case analysis: 0 for nested circles, 1 at
/// internal tangency, 2 for crossing circles, 3 at external tangency, 4 for
/// disjoint ones. Results are deterministic: canonicalized and sorted.
pub fn common_tangents(
    c1: &Circle,
    c2: &Circle,
    tol: f64,
) -> Result<Vec<(Line, TangentKind)>, KernelError> {
    let d = c1.center.dist(c2.center);
    if d <= tol && (c1.r - c2.r).abs() <= tol {
        return Err(KernelError::IdenticalCircles);
    }
    let mut out: Vec<(Line, TangentKind)> = Vec::new();
    let rdiff = (c1.r - c2.r).abs();
    let rsum = c1.r + c2.r;

    if d > rdiff + tol {
        if rdiff <= tol {
            // Equal radii: outer tangents are parallel to the center join.
            let n = (c2.center - c1.center).normalized().perp();
            out.push((Line::new(n, n.dot(c1.center) + c1.r), TangentKind::Outer));
            out.push((Line::new(n, n.dot(c1.center) - c1.r), TangentKind::Outer));
        } else {
            let sc = similitude_centers(c1, c2, tol)?;
            let e = sc.external.finite().expect("unequal radii");
            for l in tangent_lines_from_point(e, c1, tol) {
                out.push((l, TangentKind::Outer));
            }
        }
    } else if (d - rdiff).abs() <= tol && d > tol {
        // Internal tangency: the merged outer tangent at the touch point.
        let u = (c2.center - c1.center).normalized();
        let s = if c1.r >= c2.r { 1.0 } else { -1.0 };
        let t = c1.center + u * (s * c1.r);
        out.push((Line::new(u * s, (u * s).dot(t)), TangentKind::Outer));
    }

    if d > rsum + tol {
        let sc = similitude_centers(c1, c2, tol)?;
        for l in tangent_lines_from_point(sc.internal, c1, tol) {
            out.push((l, TangentKind::Inner));
        }
    } else if (d - rsum).abs() <= tol {
        // External tangency: the merged inner tangent at the touch point.
        let u = (c2.center - c1.center).normalized();
        let t = c1.center + u * c1.r;
        out.push((Line::new(u, u.dot(t)), TangentKind::Inner));
    }

    let mut canon: Vec<(Line, TangentKind)> = out
        .into_iter()
        .map(|(l, k)| (l.canonical(), k))
        .collect();
    canon.sort_by(|a, b| {
        let ka = matches!(a.1, TangentKind::Inner) as u8;
        let kb = matches!(b.1, TangentKind::Inner) as u8;
        ka.cmp(&kb)
            .then(a.0.normal.angle().partial_cmp(&b.0.normal.angle()).unwrap())
            .then(a.0.offset.partial_cmp(&b.0.offset).unwrap())
    });
    Ok(canon)
}

fn carrier_residual(g: &GenCircle, p: Vec2) -> (f64, Vec2) {
    match g {
        GenCircle::Circle(c) => {
            let v = p - c.center;
            let n = v.norm();
            if n == 0.0 {
                (-c.r, Vec2::ZERO)
            } else {
                (n - c.r, v / n)
            }
        }
        GenCircle::Line(l) => (l.signed_dist(p), l.normal),
    }
}

/// Newton polish of a computed crossing point. The closed forms in
/// [`intersect`] difference squared radii, which costs about `r^2 * eps` of
/// absolute accuracy; against near-diametral geodesic carriers (radius 1e4
/// and beyond) that dwarfs the `r * eps` floor the unsquared residuals
/// reach. Near-grazing crossings are left alone: their correction system is
/// singular and the closed form is already as good as the data allows.
fn polish_crossing(a: &GenCircle, b: &GenCircle, mut p: Vec2) -> Vec2 {
    for _ in 0..3 {
        let (fa, ga) = carrier_residual(a, p);
        let (fb, gb) = carrier_residual(b, p);
        if ga.cross(gb).abs() < 2e-2 {
            return p;
        }
        let Some(step) = solve2(ga.x, ga.y, gb.x, gb.y, fa, fb) else {
            return p;
        };
        p = p - step;
        if step.norm() <= 1e-15 * (1.0 + p.norm()) {
            break;
        }
    }
    p
}

/// Intersection points of two carriers. Near-tangent configurations whose
/// discriminant is within `tol` (scaled) collapse to a single point, so the
/// single-point answer locates the touch point only to about `sqrt(tol)`.
pub fn intersect(a: &GenCircle, b: &GenCircle, tol: f64) -> Result<Vec<Vec2>, KernelError> {
    match (a, b) {
        (GenCircle::Circle(c1), GenCircle::Circle(c2)) => {
            let d = c1.center.dist(c2.center);
            if d <= tol {
                if (c1.r - c2.r).abs() <= tol {
                    return Err(KernelError::CoincidentObjects);
                }
                return Ok(Vec::new());
            }
            let along = (d * d + c1.r * c1.r - c2.r * c2.r) / (2.0 * d);
            let h2 = c1.r * c1.r - along * along;
            let band = tol * (c1.r + c2.r + d);
            let u = (c2.center - c1.center) / d;
            if h2 < -band {
                Ok(Vec::new())
            } else if h2 <= band {
                Ok(vec![c1.center + u * along])
            } else {
                let h = h2.sqrt();
                let base = c1.center + u * along;
                Ok(vec![
                    polish_crossing(a, b, base + u.perp() * h),
                    polish_crossing(a, b, base - u.perp() * h),
                ])
            }
        }
        (GenCircle::Line(l), GenCircle::Circle(c)) | (GenCircle::Circle(c), GenCircle::Line(l)) => {
            let h = l.signed_dist(c.center);
            let disc = c.r * c.r - h * h;
            let band = tol * (c.r + h.abs());
            if disc < -band {
                Ok(Vec::new())
            } else if disc <= band {
                Ok(vec![c.center - l.normal * h])
            } else {
                let f = c.center - l.normal * h;
                let t = disc.sqrt();
                Ok(vec![
                    polish_crossing(a, b, f + l.direction() * t),
                    polish_crossing(a, b, f - l.direction() * t),
                ])
            }
        }
        (GenCircle::Line(l1), GenCircle::Line(l2)) => {
            let det = l1.normal.cross(l2.normal);
            if det.abs() <= tol {
                let aligned = if l1.normal.dot(l2.normal) >= 0.0 {
                    l2.offset
                } else {
                    -l2.offset
                };
                if (l1.offset - aligned).abs() <= tol {
                    return Err(KernelError::CoincidentObjects);
                }
                return Ok(Vec::new());
            }
            let p = solve2(
                l1.normal.x,
                l1.normal.y,
                l2.normal.x,
                l2.normal.y,
                l1.offset,
                l2.offset,
            )
            .ok_or(KernelError::DegenerateConfiguration("parallel lines"))?;
            Ok(vec![p])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::DEFAULT_TOLERANCE as TOL;

    fn unit() -> Circle {
        Circle::new(Vec2::ZERO, 1.0)
    }

    #[test]
    fn power_outside_inside_on() {
        assert_eq!(power_of_point(Vec2::new(2.0, 0.0), &unit()), 3.0);
        assert!(power_of_point(Vec2::new(0.3, 0.0), &unit()) < 0.0);
        assert!(power_of_point(Vec2::new(0.0, 1.0), &unit()).abs() < 1e-15);
    }

    #[test]
    fn inversion_moves_point_along_ray() {
        let j = InversiveMap::Inversion {
            center: Vec2::ZERO,
            power: 1.0,
        };
        let q = j.apply_point(Vec2::new(0.5, 0.0)).unwrap();
        assert!(q.dist(Vec2::new(2.0, 0.0)) < 1e-15);
        assert_eq!(j.apply_point(Vec2::ZERO), Err(KernelError::PointAtCenter));
    }

    #[test]
    fn inversion_of_offset_circle() {
        let j = InversiveMap::Inversion {
            center: Vec2::ZERO,
            power: 1.0,
        };
        let img = j.apply(&GenCircle::Circle(Circle::new(Vec2::new(3.0, 0.0), 1.0)), TOL);
        let c = img.as_circle().unwrap();
        assert!(c.center.dist(Vec2::new(0.375, 0.0)) < 1e-15);
        assert!((c.r - 0.125).abs() < 1e-15);
    }

    #[test]
    fn inversion_exchanges_circle_through_center_and_line() {
        let j = InversiveMap::Inversion {
            center: Vec2::ZERO,
            power: 2.0,
        };
        // Circle through the origin.
        let c = GenCircle::Circle(Circle::new(Vec2::new(1.0, 0.0), 1.0));
        let img = j.apply(&c, TOL);
        let l = img.as_line().expect("circle through center maps to line");
        // x = 1 under power-2 inversion of that circle.
        assert!(l.signed_dist(Vec2::new(1.0, 5.0)).abs() < 1e-14);
        let back = j.apply(&img, TOL);
        let c2 = back.as_circle().unwrap();
        assert!(c2.center.dist(Vec2::new(1.0, 0.0)) < 1e-14);
        assert!((c2.r - 1.0).abs() < 1e-14);
    }

    #[test]
    fn similitude_centers_match_hand_example() {
        let c1 = unit();
        let c2 = Circle::new(Vec2::new(4.0, 0.0), 3.0);
        let sc = similitude_centers(&c1, &c2, TOL).unwrap();
        assert!(sc.external.finite().unwrap().dist(Vec2::new(-2.0, 0.0)) < 1e-14);
        assert!(sc.internal.dist(Vec2::new(1.0, 0.0)) < 1e-14);
    }

    #[test]
    fn antisimilitude_of_disjoint_circles() {
        let c1 = unit();
        let c2 = Circle::new(Vec2::new(6.0, 0.0), 2.0);
        match antisimilitude_map(&c1, &c2, TOL).unwrap() {
            InversiveMap::Inversion { center, power } => {
                assert!(center.dist(Vec2::new(-6.0, 0.0)) < 1e-12);
                assert!((power - 70.0).abs() < 1e-10);
            }
            InversiveMap::Reflection { .. } => panic!("expected inversion"),
        }
        // And it actually swaps the circles.
        let m = antisimilitude_map(&c1, &c2, TOL).unwrap();
        let img = m.apply(&GenCircle::Circle(c1), TOL).as_circle().unwrap();
        assert!(img.center.dist(c2.center) < 1e-12);
        assert!((img.r - c2.r).abs() < 1e-12);
    }

    #[test]
    fn antisimilitude_rejects_overlap() {
        let c1 = unit();
        let c2 = Circle::new(Vec2::new(1.0, 0.0), 1.0);
        assert!(matches!(
            antisimilitude_map(&c1, &c2, TOL),
            Err(KernelError::DegenerateConfiguration(_))
        ));
    }

    #[test]
    fn swap_map_handles_nested_circles() {
        let c1 = unit();
        let c2 = Circle::new(Vec2::new(0.2, 0.0), 2.0);
        let m = swap_map(
            &GenCircle::Circle(c1),
            &GenCircle::Circle(c2),
            None,
            TOL,
        )
        .unwrap();
        let img = m.apply(&GenCircle::Circle(c1), TOL).as_circle().unwrap();
        assert!(img.center.dist(c2.center) < 1e-12);
        assert!((img.r - c2.r).abs() < 1e-12);
        // The reference cycle is real for nested circles.
        assert!(m.reference().is_some());
    }

    #[test]
    fn swap_map_circle_and_line() {
        let c = Circle::new(Vec2::new(0.0, 2.0), 1.0);
        let l = Line::new(Vec2::new(0.0, 1.0), 0.0);
        let m = swap_map(&GenCircle::Circle(c), &GenCircle::Line(l), None, TOL).unwrap();
        let img = m.apply(&GenCircle::Circle(c), TOL);
        let il = img.as_line().expect("circle should map onto the line");
        assert!(il.signed_dist(Vec2::new(3.0, 0.0)).abs() < 1e-12);
        let back = m.apply(&GenCircle::Line(l), TOL).as_circle().unwrap();
        assert!(back.center.dist(c.center) < 1e-12);
        assert!((back.r - c.r).abs() < 1e-12);
    }

    #[test]
    fn swap_map_crossing_lines_uses_hint() {
        let l1 = Line::new(Vec2::new(0.0, 1.0), 0.0);
        let l2 = Line::new(Vec2::new(1.0, 0.0), 0.0);
        let p = Vec2::new(1.0, 0.2);
        let q = Vec2::new(0.2, 1.0);
        let m = swap_map(
            &GenCircle::Line(l1),
            &GenCircle::Line(l2),
            Some((p, q)),
            TOL,
        )
        .unwrap();
        match m {
            InversiveMap::Reflection { axis } => {
                assert!(axis.signed_dist(p) * axis.signed_dist(q) < 0.0);
                let img = m.apply(&GenCircle::Line(l1), TOL).as_line().unwrap();
                assert!(img.signed_dist(Vec2::new(0.0, 7.0)).abs() < 1e-12);
            }
            _ => panic!("expected reflection"),
        }
    }

    #[test]
    fn radical_center_of_symmetric_triple() {
        let c1 = Circle::new(Vec2::new(0.0, 0.0), 1.0);
        let c2 = Circle::new(Vec2::new(4.0, 0.0), 1.0);
        let c3 = Circle::new(Vec2::new(2.0, 3.0), 1.0);
        let p = radical_center(&c1, &c2, &c3, TOL).unwrap();
        for c in [&c1, &c2, &c3] {
            assert!((power_of_point(p, c) - power_of_point(p, &c1)).abs() < 1e-12);
        }
        assert!((p.x - 2.0).abs() < 1e-13);
    }

    #[test]
    fn pole_of_vertical_line() {
        let l = Line::new(Vec2::new(1.0, 0.0), 2.0);
        let p = pole(&l, &unit(), TOL).unwrap();
        assert!(p.dist(Vec2::new(0.5, 0.0)) < 1e-15);
        // Round trip through the polar.
        let back = polar(p, &unit(), TOL).unwrap().canonical();
        assert!(back.normal.dist(l.normal) < 1e-14);
        assert!((back.offset - l.offset).abs() < 1e-14);
    }

    #[test]
    fn similitude_axis_sign_rules() {
        let c1 = Circle::new(Vec2::new(0.0, 0.0), 1.0);
        let c2 = Circle::new(Vec2::new(6.0, 0.0), 2.0);
        let c3 = Circle::new(Vec2::new(2.0, 5.0), 0.7);
        use PairSign::*;
        assert!(similitude_axis(&c1, &c2, &c3, [External, External, External], TOL).is_ok());
        assert!(similitude_axis(&c1, &c2, &c3, [External, Internal, Internal], TOL).is_ok());
        assert_eq!(
            similitude_axis(&c1, &c2, &c3, [External, External, Internal], TOL),
            Err(KernelError::InadmissibleSigns)
        );
        assert_eq!(
            similitude_axis(&c1, &c2, &c3, [Internal, Internal, Internal], TOL),
            Err(KernelError::InadmissibleSigns)
        );
    }

    #[test]
    fn common_tangent_counts_by_configuration() {
        let base = unit();
        let mk = |x: f64, r: f64| Circle::new(Vec2::new(x, 0.0), r);
        // Nested, internally tangent, crossing, externally tangent, disjoint.
        assert!(common_tangents(&base, &mk(0.2, 0.5), TOL).unwrap().is_empty());
        assert_eq!(common_tangents(&base, &mk(0.5, 0.5), TOL).unwrap().len(), 1);
        assert_eq!(common_tangents(&base, &mk(1.0, 0.5), TOL).unwrap().len(), 2);
        assert_eq!(common_tangents(&base, &mk(1.5, 0.5), TOL).unwrap().len(), 3);
        assert_eq!(common_tangents(&base, &mk(3.0, 0.5), TOL).unwrap().len(), 4);
        // Every reported tangent touches both circles.
        for (l, _) in common_tangents(&base, &mk(3.0, 0.5), TOL).unwrap() {
            assert!((l.signed_dist(base.center).abs() - base.r).abs() < 1e-12);
            assert!((l.signed_dist(Vec2::new(3.0, 0.0)).abs() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn equal_radius_outer_tangents_are_parallel() {
        let c1 = unit();
        let c2 = Circle::new(Vec2::new(5.0, 0.0), 1.0);
        let ts = common_tangents(&c1, &c2, TOL).unwrap();
        let outers: Vec<_> = ts
            .iter()
            .filter(|(_, k)| *k == TangentKind::Outer)
            .collect();
        assert_eq!(outers.len(), 2);
        assert!(outers[0].0.normal.cross(outers[1].0.normal).abs() < 1e-14);
    }

    #[test]
    fn intersect_collapses_near_tangency() {
        let c1 = GenCircle::Circle(unit());
        let c2 = GenCircle::Circle(Circle::new(Vec2::new(2.0, 0.0), 1.0));
        let pts = intersect(&c1, &c2, TOL).unwrap();
        assert_eq!(pts.len(), 1);
        assert!(pts[0].dist(Vec2::new(1.0, 0.0)) < 1e-9);
        let far = GenCircle::Circle(Circle::new(Vec2::new(5.0, 0.0), 1.0));
        assert!(intersect(&c1, &far, TOL).unwrap().is_empty());
        assert_eq!(
            intersect(&c1, &c1, TOL),
            Err(KernelError::CoincidentObjects)
        );
    }

    #[test]
    fn intersect_line_circle_both_points_on_both() {
        let l = GenCircle::Line(Line::new(Vec2::new(0.0, 1.0), 0.5));
        let c = GenCircle::Circle(unit());
        let pts = intersect(&l, &c, TOL).unwrap();
        assert_eq!(pts.len(), 2);
        for p in pts {
            assert!((p.norm() - 1.0).abs() < 1e-14);
            assert!((p.y - 0.5).abs() < 1e-14);
        }
    }
}
