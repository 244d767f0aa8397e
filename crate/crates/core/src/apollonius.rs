//! Tangent circles to three given objects.
//!
//! Two independent routes are provided. [`gergonne_apollonius`] is the
//! classical construction: radical center, axis of similitude, poles, and
//! the near/far intersection points they cut on each circle. The algebraic
//! route [`tangent_circles_to_three`] eliminates the tangency system
//! directly through the substitution `w = |o|^2 - rho^2`, which makes every
//! tangency condition linear in `(o, rho, w)`; it also admits lines and
//! points as targets, so circles through a point reduce to it.
//!
//! Everything here is flat plane geometry on carriers. Hyperbolic meaning
//! is restored by the callers at classification and certification time.

use crate::cycles::quadratic_roots;
use crate::geom::{through_three_points, Circle, GenCircle, Line, Vec2};
use crate::inversive::{
    common_tangents, intersect, pole, radical_center, similitude_centers, InversiveMap,
    KernelError, PairSign, SimCenter,
};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ApolloniusError {
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("the selected intersection points yield no common tangent circle")]
    NoSuchTangentCircle,
    #[error("no circle satisfies the requested constraints")]
    NoSolutionForConstraints,
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// How a solution touches one given circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TangencyOrientation {
    /// Touching from outside: closed disks meet in the single touch point.
    External,
    /// One disk contains the other.
    Internal,
}

/// Choice of intersection point on a given circle, measured from the
/// radical center along the line through the pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearFar {
    Near,
    Far,
}

/// A fully specified Gergonne selection: similitude center per pair
/// (for the pairs `(c1,c2)`, `(c2,c3)`, `(c3,c1)`) and a near/far choice on
/// each circle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ApolloniusSelection {
    pub axis: [PairSign; 3],
    pub points: [NearFar; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApolloniusSolution {
    pub circle: GenCircle,
    pub selection: ApolloniusSelection,
    pub orientations: [TangencyOrientation; 3],
    pub touch_points: [Vec2; 3],
    /// Largest tangency residual against the three inputs.
    pub residual: f64,
}

/// Tangency residual, orientation, and touch point of a candidate against
/// one given circle.
pub(crate) fn tangency_data(sol: &GenCircle, given: &Circle) -> (f64, TangencyOrientation, Vec2) {
    match sol {
        GenCircle::Circle(s) => {
            let d = s.center.dist(given.center);
            if d < 1e-300 {
                return (f64::INFINITY, TangencyOrientation::Internal, given.center);
            }
            let ext = (d - (s.r + given.r)).abs();
            let int = (d - (s.r - given.r).abs()).abs();
            let u = (given.center - s.center) / d;
            if ext <= int {
                (ext, TangencyOrientation::External, s.center + u * s.r)
            } else if s.r >= given.r {
                (int, TangencyOrientation::Internal, s.center + u * s.r)
            } else {
                (int, TangencyOrientation::Internal, s.center - u * s.r)
            }
        }
        GenCircle::Line(l) => {
            let h = l.signed_dist(given.center);
            (
                (h.abs() - given.r).abs(),
                TangencyOrientation::External,
                given.center - l.normal * h,
            )
        }
    }
}

/// An axis of similitude, allowing the equal-radii limit where the all
/// external axis recedes to infinity (its pole w.r.t. any circle is then
/// the circle's center).
enum Axis {
    Finite(Line),
    AtInfinity,
}

fn axis_of_similitude(
    c: &[&Circle; 3],
    signs: [PairSign; 3],
    tol: f64,
) -> Result<Axis, ApolloniusError> {
    let externals = signs.iter().filter(|s| **s == PairSign::External).count();
    if externals % 2 == 0 {
        return Err(KernelError::InadmissibleSigns.into());
    }
    let pairs = [(0usize, 1usize), (1, 2), (2, 0)];
    let mut finite: Vec<Vec2> = Vec::new();
    let mut dirs: Vec<Vec2> = Vec::new();
    for (k, (i, j)) in pairs.into_iter().enumerate() {
        let sc = similitude_centers(c[i], c[j], tol)?;
        match signs[k] {
            PairSign::Internal => finite.push(sc.internal),
            PairSign::External => match sc.external {
                SimCenter::Finite(p) => finite.push(p),
                SimCenter::AtInfinity(d) => dirs.push(d),
            },
        }
    }
    let scale: f64 = c.iter().map(|k| k.center.norm() + k.r).fold(1.0, f64::max);
    let collinear_tol = 1e-7 * scale;
    match finite.len() {
        3 => {
            // Line through the two most separated centers; the third must
            // agree (Monge's theorem, numerically enforced).
            let mut best = (0usize, 1usize, 0.0f64);
            for (i, j) in pairs {
                let d = finite[i].dist(finite[j]);
                if d > best.2 {
                    best = (i, j, d);
                }
            }
            if best.2 <= tol {
                return Err(ApolloniusError::DegenerateConfiguration(
                    "similitude centers coincide",
                ));
            }
            let axis = Line::through(finite[best.0], finite[best.1]);
            let third = 3 - best.0 - best.1;
            if axis.signed_dist(finite[third]).abs() > collinear_tol {
                return Err(ApolloniusError::DegenerateConfiguration(
                    "similitude centers are not collinear",
                ));
            }
            Ok(Axis::Finite(axis))
        }
        2 => {
            if finite[0].dist(finite[1]) <= tol {
                return Err(ApolloniusError::DegenerateConfiguration(
                    "similitude centers coincide",
                ));
            }
            let axis = Line::through(finite[0], finite[1]);
            for d in &dirs {
                if axis.normal.dot(*d).abs() > collinear_tol {
                    return Err(ApolloniusError::DegenerateConfiguration(
                        "axis direction mismatch at infinity",
                    ));
                }
            }
            Ok(Axis::Finite(axis))
        }
        1 => {
            let d = dirs[0];
            for other in &dirs[1..] {
                if d.cross(*other).abs() > collinear_tol {
                    return Err(ApolloniusError::DegenerateConfiguration(
                        "directions at infinity disagree",
                    ));
                }
            }
            let n = d.perp();
            Ok(Axis::Finite(Line::new(n, n.dot(finite[0]))))
        }
        _ => Ok(Axis::AtInfinity),
    }
}

/// Gergonne's construction for one fully specified selection.
///
/// The radical center is joined to the pole of the similitude axis with
/// respect to each circle; that line cuts the circle in a near and a far
/// point. The circle through the three selected points is returned exactly
/// when it is tangent to all three inputs. On the all-external axis the
/// near points select the outward touching circle and the far points the
/// circle containing all three inputs.
pub fn gergonne_apollonius(
    c1: &Circle,
    c2: &Circle,
    c3: &Circle,
    sel: &ApolloniusSelection,
    tol: f64,
) -> Result<ApolloniusSolution, ApolloniusError> {
    let circles = [c1, c2, c3];
    let rc = radical_center(c1, c2, c3, tol)?;
    let axis = axis_of_similitude(&circles, sel.axis, tol)?;
    let scale: f64 = circles
        .iter()
        .map(|k| k.center.norm() + k.r)
        .fold(1.0, f64::max);

    let mut picked = [Vec2::ZERO; 3];
    for i in 0..3 {
        let pl = match &axis {
            Axis::Finite(l) => pole(l, circles[i], tol).map_err(|_| {
                ApolloniusError::DegenerateConfiguration("similitude axis through a center")
            })?,
            // Pole of the line at infinity.
            Axis::AtInfinity => circles[i].center,
        };
        if pl.dist(rc) <= tol.max(1e-12 * scale) {
            return Err(ApolloniusError::DegenerateConfiguration(
                "pole coincides with the radical center",
            ));
        }
        let ray = Line::through(rc, pl);
        let hits = intersect(
            &GenCircle::Line(ray),
            &GenCircle::Circle(*circles[i]),
            tol,
        )?;
        let chosen = match (hits.len(), sel.points[i]) {
            (2, NearFar::Near) | (2, NearFar::Far) => {
                let (a, b) = (hits[0], hits[1]);
                let near_first = a.dist(rc) <= b.dist(rc);
                match (sel.points[i], near_first) {
                    (NearFar::Near, true) | (NearFar::Far, false) => a,
                    _ => b,
                }
            }
            (1, _) => hits[0],
            _ => return Err(ApolloniusError::NoSuchTangentCircle),
        };
        picked[i] = chosen;
    }

    let circle = through_three_points(picked[0], picked[1], picked[2], tol)
        .ok_or(ApolloniusError::NoSuchTangentCircle)?;

    let mut orientations = [TangencyOrientation::External; 3];
    let mut touch_points = [Vec2::ZERO; 3];
    let mut residual = 0.0f64;
    for i in 0..3 {
        let (res, orient, touch) = tangency_data(&circle, circles[i]);
        orientations[i] = orient;
        touch_points[i] = touch;
        residual = residual.max(res);
    }
    if residual > (1e-8 * scale).max(tol) {
        return Err(ApolloniusError::NoSuchTangentCircle);
    }
    Ok(ApolloniusSolution {
        circle,
        selection: *sel,
        orientations,
        touch_points,
        residual,
    })
}

const ADMISSIBLE_AXES: [[PairSign; 3]; 4] = {
    use PairSign::{External as E, Internal as I};
    [[E, E, E], [E, I, I], [I, E, I], [I, I, E]]
};

/// All tangent circles found by scanning every admissible Gergonne
/// selection (four axes, eight near/far choices each). Generic mutually
/// external inputs produce exactly eight distinct circles. Deterministic
/// order: by radius, then center.
pub fn gergonne_enumerate(c1: &Circle, c2: &Circle, c3: &Circle, tol: f64) -> Vec<ApolloniusSolution> {
    let mut out: Vec<ApolloniusSolution> = Vec::new();
    let scale: f64 = [c1, c2, c3]
        .iter()
        .map(|k| k.center.norm() + k.r)
        .fold(1.0, f64::max);
    let close = |a: &GenCircle, b: &GenCircle| -> bool {
        match (a, b) {
            (GenCircle::Circle(x), GenCircle::Circle(y)) => {
                x.center.dist(y.center) <= 1e-6 * scale && (x.r - y.r).abs() <= 1e-6 * scale
            }
            (GenCircle::Line(x), GenCircle::Line(y)) => {
                let x = x.canonical();
                let y = y.canonical();
                (x.normal - y.normal).norm() <= 1e-9 && (x.offset - y.offset).abs() <= 1e-6 * scale
            }
            _ => false,
        }
    };
    for axis in ADMISSIBLE_AXES {
        for bits in 0..8u8 {
            let pick = |b: bool| if b { NearFar::Far } else { NearFar::Near };
            let sel = ApolloniusSelection {
                axis,
                points: [pick(bits & 1 != 0), pick(bits & 2 != 0), pick(bits & 4 != 0)],
            };
            if let Ok(sol) = gergonne_apollonius(c1, c2, c3, &sel, tol) {
                if !out.iter().any(|s| close(&s.circle, &sol.circle)) {
                    out.push(sol);
                }
            }
        }
    }
    out.sort_by(|a, b| {
        let key = |g: &GenCircle| match g {
            GenCircle::Circle(c) => (0u8, c.r, c.center.x, c.center.y),
            GenCircle::Line(l) => {
                let l = l.canonical();
                (1u8, l.offset, l.normal.x, l.normal.y)
            }
        };
        key(&a.circle).partial_cmp(&key(&b.circle)).unwrap()
    });
    out
}

/// A tangency or incidence target for the algebraic enumerator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentTarget {
    Circle {
        circle: Circle,
        orientation: TangencyOrientation,
    },
    /// `side` is the required sign of `n.o - offset` relative to the sought
    /// radius: `n.o - offset = side * rho`, so `+1` places the circle on the
    /// normal side of the line.
    Line { line: Line, side: f64 },
    /// Zero-radius circle: the solution passes through the point.
    Point(Vec2),
}

/// Reduced row echelon form of a 3x4 system with right-hand side, returning
/// a particular solution and the one-dimensional null direction. `None`
/// when the coefficient rank drops below 3.
fn solve_3x4_family(rows: &[[f64; 5]; 3]) -> Option<([f64; 4], [f64; 4])> {
    let mut m = *rows;
    let scale = m
        .iter()
        .flat_map(|r| r[..4].iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    let mut pivot_cols = [usize::MAX; 3];
    let mut used = [false; 4];
    for step in 0..3 {
        // Full pivoting over the remaining columns keeps the reduction
        // stable when a target makes one unknown drop out.
        let mut best = (step, 0usize, 0.0f64);
        for r in step..3 {
            for c in 0..4 {
                if !used[c] && m[r][c].abs() > best.2 {
                    best = (r, c, m[r][c].abs());
                }
            }
        }
        if best.2 < 1e-11 * scale {
            return None;
        }
        m.swap(step, best.0);
        let pc = best.1;
        pivot_cols[step] = pc;
        used[pc] = true;
        let inv = 1.0 / m[step][pc];
        for v in m[step].iter_mut() {
            *v *= inv;
        }
        for r in 0..3 {
            if r != step {
                let f = m[r][pc];
                if f != 0.0 {
                    for c in 0..5 {
                        m[r][c] -= f * m[step][c];
                    }
                }
            }
        }
    }
    let free = (0..4).find(|c| !used[*c]).expect("one free column");
    let mut particular = [0.0f64; 4];
    let mut null = [0.0f64; 4];
    null[free] = 1.0;
    for step in 0..3 {
        let pc = pivot_cols[step];
        particular[pc] = m[step][4];
        null[pc] = -m[step][free];
    }
    Some((particular, null))
}

/// All circles (positive radius) satisfying three tangency or incidence
/// targets, by elimination in `(o, rho, w)` with `w = |o|^2 - rho^2`. Each
/// target contributes one linear row; the quadratic relation then leaves at
/// most two solutions per orientation choice. Deterministic order: by
/// radius, then center.
pub fn tangent_circles_to_three(targets: &[TangentTarget; 3], tol: f64) -> Vec<Circle> {
    // Unknown order: (ox, oy, rho, w).
    let mut rows = [[0.0f64; 5]; 3];
    let mut scale = 1.0f64;
    for (row, t) in rows.iter_mut().zip(targets.iter()) {
        match t {
            TangentTarget::Circle { circle, orientation } => {
                let sigma = match orientation {
                    TangencyOrientation::External => 1.0,
                    TangencyOrientation::Internal => -1.0,
                };
                *row = [
                    -2.0 * circle.center.x,
                    -2.0 * circle.center.y,
                    -2.0 * sigma * circle.r,
                    1.0,
                    circle.r * circle.r - circle.center.norm2(),
                ];
                scale = scale.max(circle.center.norm() + circle.r);
            }
            TangentTarget::Line { line, side } => {
                *row = [line.normal.x, line.normal.y, -side, 0.0, line.offset];
                scale = scale.max(line.offset.abs());
            }
            TangentTarget::Point(p) => {
                *row = [-2.0 * p.x, -2.0 * p.y, 0.0, 1.0, -p.norm2()];
                scale = scale.max(p.norm());
            }
        }
    }
    let Some((base, dir)) = solve_3x4_family(&rows) else {
        return Vec::new();
    };
    // Substitute the family into w = |o|^2 - rho^2.
    let a = dir[0] * dir[0] + dir[1] * dir[1] - dir[2] * dir[2];
    let b = 2.0 * (base[0] * dir[0] + base[1] * dir[1] - base[2] * dir[2]) - dir[3];
    let c = base[0] * base[0] + base[1] * base[1] - base[2] * base[2] - base[3];
    let mut out: Vec<Circle> = Vec::new();
    for t in quadratic_roots(a, b, c) {
        let ox = base[0] + t * dir[0];
        let oy = base[1] + t * dir[1];
        let rho = base[2] + t * dir[2];
        if !(rho.is_finite() && rho > tol) {
            continue;
        }
        let cand = Circle::new(Vec2::new(ox, oy), rho);
        // Guard against rank-deficient noise with a direct residual check.
        let ok = targets.iter().all(|tg| match tg {
            TangentTarget::Circle { circle, .. } => {
                tangency_data(&GenCircle::Circle(cand), circle).0 <= 1e-7 * scale.max(rho)
            }
            TangentTarget::Line { line, .. } => {
                (line.signed_dist(cand.center).abs() - rho).abs() <= 1e-7 * scale.max(rho)
            }
            TangentTarget::Point(p) => {
                (p.dist(cand.center) - rho).abs() <= 1e-7 * scale.max(rho)
            }
        });
        if ok {
            out.push(cand);
        }
    }
    out.sort_by(|x, y| {
        (x.r, x.center.x, x.center.y)
            .partial_cmp(&(y.r, y.center.x, y.center.y))
            .unwrap()
    });
    out.dedup_by(|x, y| x.center.dist(y.center) <= 1e-9 * scale && (x.r - y.r).abs() <= 1e-9 * scale);
    out
}

/// Algebraic twin of [`gergonne_enumerate`]: scans the eight orientation
/// triples. Kept separate so the two routes can validate each other.
pub fn tangent_circles_enumerate(
    c1: &Circle,
    c2: &Circle,
    c3: &Circle,
    tol: f64,
) -> Vec<(Circle, [TangencyOrientation; 3])> {
    use TangencyOrientation::{External, Internal};
    let mut out: Vec<(Circle, [TangencyOrientation; 3])> = Vec::new();
    for bits in 0..8u8 {
        let orient = |b: bool| if b { Internal } else { External };
        let tri = [orient(bits & 1 != 0), orient(bits & 2 != 0), orient(bits & 4 != 0)];
        let targets = [
            TangentTarget::Circle { circle: *c1, orientation: tri[0] },
            TangentTarget::Circle { circle: *c2, orientation: tri[1] },
            TangentTarget::Circle { circle: *c3, orientation: tri[2] },
        ];
        for cand in tangent_circles_to_three(&targets, tol) {
            if !out
                .iter()
                .any(|(c, _)| c.center.dist(cand.center) <= 1e-7 && (c.r - cand.r).abs() <= 1e-7)
            {
                out.push((cand, tri));
            }
        }
    }
    out.sort_by(|(x, _), (y, _)| {
        (x.r, x.center.x, x.center.y)
            .partial_cmp(&(y.r, y.center.x, y.center.y))
            .unwrap()
    });
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointTangentSolution {
    pub circle: GenCircle,
    pub orientations: [TangencyOrientation; 2],
    pub touch_points: [Vec2; 2],
    /// Max of the incidence residual at the point and the two tangency
    /// residuals.
    pub residual: f64,
}

/// All circles through `p` tangent to `k1` and `k2`, via inversion at `p`:
/// the sought circles become the common tangent lines of the two image
/// circles (an image is itself a line when `p` lies on that given circle,
/// in which case tangency at infinity means parallelism).
pub fn apollonius_through_point_all(
    p: Vec2,
    k1: &Circle,
    k2: &Circle,
    tol: f64,
) -> Result<Vec<PointTangentSolution>, ApolloniusError> {
    let scale = (k1.center.norm() + k1.r)
        .max(k2.center.norm() + k2.r)
        .max(p.norm())
        .max(1.0);
    for k in [k1, k2] {
        if p.dist(k.center) < k.r - tol {
            return Err(ApolloniusError::NoSolutionForConstraints);
        }
    }
    let j = InversiveMap::Inversion { center: p, power: 1.0 };
    let img1 = j.apply(&GenCircle::Circle(*k1), tol);
    let img2 = j.apply(&GenCircle::Circle(*k2), tol);

    let mut lines: Vec<Line> = Vec::new();
    match (&img1, &img2) {
        (GenCircle::Circle(a), GenCircle::Circle(b)) => {
            for (l, _) in common_tangents(a, b, tol)? {
                lines.push(l);
            }
        }
        (GenCircle::Circle(a), GenCircle::Line(m)) | (GenCircle::Line(m), GenCircle::Circle(a)) => {
            // Tangent to the circle and parallel to the line.
            let h = m.normal.dot(a.center);
            lines.push(Line::new(m.normal, h - a.r));
            lines.push(Line::new(m.normal, h + a.r));
        }
        (GenCircle::Line(_), GenCircle::Line(_)) => {
            return Err(ApolloniusError::DegenerateConfiguration(
                "both circles pass through the point",
            ));
        }
    }

    let mut out = Vec::new();
    for l in lines {
        let sol = j.apply(&GenCircle::Line(l), tol);
        let incidence = match &sol {
            GenCircle::Circle(c) => (p.dist(c.center) - c.r).abs(),
            GenCircle::Line(l) => l.signed_dist(p).abs(),
        };
        let (r1, o1, t1) = tangency_data(&sol, k1);
        let (r2, o2, t2) = tangency_data(&sol, k2);
        let residual = incidence.max(r1).max(r2);
        if residual <= 1e-8 * scale {
            out.push(PointTangentSolution {
                circle: sol,
                orientations: [o1, o2],
                touch_points: [t1, t2],
                residual,
            });
        }
    }
    out.sort_by(|a, b| {
        let key = |g: &GenCircle| match g {
            GenCircle::Circle(c) => (0u8, c.r, c.center.x, c.center.y),
            GenCircle::Line(l) => {
                let l = l.canonical();
                (1u8, l.offset, l.normal.x, l.normal.y)
            }
        };
        key(&a.circle).partial_cmp(&key(&b.circle)).unwrap()
    });
    Ok(out)
}

/// The circle through `p` tangent to `k1` and `k2` with the requested
/// orientations. Several matches (non-generic) resolve to the smallest
/// radius; none is `NoSolutionForConstraints`.
pub fn apollonius_through_point(
    p: Vec2,
    k1: &Circle,
    k2: &Circle,
    orientations: [TangencyOrientation; 2],
    tol: f64,
) -> Result<PointTangentSolution, ApolloniusError> {
    let all = apollonius_through_point_all(p, k1, k2, tol)?;
    all.into_iter()
        .find(|s| s.orientations == orientations)
        .ok_or(ApolloniusError::NoSolutionForConstraints)
}
