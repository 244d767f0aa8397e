//! Cycles of the hyperbolic plane: circles, paracycles, hypercycles and
//! geodesics, represented by their Euclidean carriers in the disk chart.
//!
//! A hypercycle (equidistant curve) has two branches; the carrier given at
//! construction holds one of them and the reflection of that carrier across
//! the base geodesic holds the other. Tangency is certified at the carrier
//! level: the model is conformal, so Euclidean tangency of carriers at an
//! interior point is exactly hyperbolic tangency of the cycles there.

use crate::disk::{
    carrier_to_center_radius, circle_from_center_radius, dist_to_geodesic, exp_from,
    geodesic_at, geodesic_through, hyp_distance, hyp_midpoint, initial_direction,
    signed_dist_to_geodesic, DiskError, HPoint, MODEL_BOUNDARY_EPS,
};
use crate::geom::{Circle, GenCircle, Line, Vec2};
use crate::inversive::{intersect, InversiveMap, KernelError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CycleError {
    #[error("carrier does not meet the open model disk")]
    CarrierOutsideModel,
    #[error("point lies inside the circle, no tangent exists")]
    PointInsideCircle,
    #[error("circles are nested, no common tangent exists")]
    NestedCircles,
    #[error("operation requires a different cycle kind: {0}")]
    UnsupportedKind(&'static str),
    #[error("side lengths violate the triangle inequality")]
    ViolatedTriangleInequality,
    #[error("the three geodesics do not bound a region")]
    NoBoundedRegion,
    #[error("constructed object failed tangency certification: {0}")]
    CertificationFailed(&'static str),
    #[error("degenerate configuration: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleKind {
    /// Compact distance circle around an interior center.
    Circle,
    /// Horocycle: carrier internally tangent to the model boundary.
    Paracycle,
    /// Equidistant curve of a geodesic, two branches.
    Hypercycle,
    /// Distance-zero hypercycle.
    Geodesic,
}

/// Which branch of a cycle a tangency lives on. Only hypercycles have a
/// second branch distinct from the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchTag {
    Carrier,
    SecondBranch,
}

/// Equidistant-curve data carried by hypercycles and geodesics.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercycleParts {
    /// The geodesic the cycle is equidistant from.
    pub base: GenCircle,
    /// Common distance of both branches to the base; zero for geodesics.
    pub distance: f64,
    /// Carrier of the other branch: the reflection of the main carrier
    /// across the base. Equals the carrier itself for geodesics.
    pub second_branch: GenCircle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle {
    pub carrier: GenCircle,
    pub kind: CycleKind,
    /// Present exactly for hypercycles and geodesics.
    pub hyper: Option<HypercycleParts>,
}

impl Cycle {
    /// Branch carriers in certification order.
    pub fn branches(&self) -> Vec<(BranchTag, GenCircle)> {
        match (&self.kind, &self.hyper) {
            (CycleKind::Hypercycle, Some(h)) => vec![
                (BranchTag::Carrier, self.carrier),
                (BranchTag::SecondBranch, h.second_branch),
            ],
            _ => vec![(BranchTag::Carrier, self.carrier)],
        }
    }

    /// A point of the cycle inside the model.
    pub fn representative_point(&self) -> Vec2 {
        self.carrier.project(Vec2::ZERO)
    }

    /// Hyperbolic center and radius, defined for proper circles only.
    pub fn center_radius(&self) -> Result<(HPoint, f64), CycleError> {
        match (&self.kind, &self.carrier) {
            (CycleKind::Circle, GenCircle::Circle(c)) => Ok(carrier_to_center_radius(c)?),
            _ => Err(CycleError::UnsupportedKind("hyperbolic center requires a circle")),
        }
    }
}

/// Classification of a circle carrier by its position against the model
/// boundary. Total: carriers that do not meet the open disk are classified
/// by what they become after inversion in the boundary (which maps them onto
/// in-model carriers without changing the cycle they determine).
pub fn classify_carrier(c: &Circle, tol: f64) -> CycleKind {
    let rho = c.center.norm();
    let r = c.r;
    // Scale-aware orthogonality test: a carrier of radius r stores its
    // defect against the boundary only to about r^2 * eps, so huge
    // near-diametral geodesic carriers need the band widened accordingly.
    if (rho * rho - 1.0 - r * r).abs() <= 2.0 * tol * (1.0 + r * r) {
        return CycleKind::Geodesic;
    }
    // Tangent to the boundary, from inside or outside, on either side.
    if rho > tol && ((rho + r - 1.0).abs() <= tol || (rho - r - 1.0).abs() <= tol
        || (r - rho - 1.0).abs() <= tol)
    {
        return CycleKind::Paracycle;
    }
    if rho > (r - 1.0).abs() + tol && rho < r + 1.0 - tol {
        return CycleKind::Hypercycle;
    }
    CycleKind::Circle
}

/// Builds the cycle determined by a carrier that meets the open disk.
/// Rejects carriers entirely outside the model; see [`canonical_cycle`] for
/// the lifting constructor that accepts those too.
pub fn build_cycle(carrier: GenCircle, tol: f64) -> Result<Cycle, CycleError> {
    match carrier {
        GenCircle::Line(l) => {
            if l.offset.abs() <= tol {
                let parts = HypercycleParts {
                    base: carrier,
                    distance: 0.0,
                    second_branch: carrier,
                };
                return Ok(Cycle {
                    carrier,
                    kind: CycleKind::Geodesic,
                    hyper: Some(parts),
                });
            }
            if l.offset.abs() >= 1.0 - tol {
                return Err(CycleError::CarrierOutsideModel);
            }
            hypercycle_from_carrier(carrier, tol)
        }
        GenCircle::Circle(c) => {
            let rho = c.center.norm();
            let r = c.r;
            // Same scale-aware orthogonality band as [`classify_carrier`].
            if (rho * rho - 1.0 - r * r).abs() <= 2.0 * tol * (1.0 + r * r) {
                let parts = HypercycleParts {
                    base: carrier,
                    distance: 0.0,
                    second_branch: carrier,
                };
                return Ok(Cycle {
                    carrier,
                    kind: CycleKind::Geodesic,
                    hyper: Some(parts),
                });
            }
            if rho + r <= 1.0 - tol {
                return Ok(Cycle {
                    carrier,
                    kind: CycleKind::Circle,
                    hyper: None,
                });
            }
            if (rho + r - 1.0).abs() <= tol && rho > tol {
                return Ok(Cycle {
                    carrier,
                    kind: CycleKind::Paracycle,
                    hyper: None,
                });
            }
            if rho > (r - 1.0).abs() + tol && rho < r + 1.0 - tol {
                return hypercycle_from_carrier(carrier, tol);
            }
            Err(CycleError::CarrierOutsideModel)
        }
    }
}

/// Builds the cycle determined by any non-degenerate carrier, inverting
/// carriers that miss the open disk across the model boundary first. The
/// inverted carrier determines the same cycle.
pub fn canonical_cycle(carrier: GenCircle, tol: f64) -> Result<Cycle, CycleError> {
    match build_cycle(carrier, tol) {
        Err(CycleError::CarrierOutsideModel) => {
            let j = InversiveMap::Inversion {
                center: Vec2::ZERO,
                power: 1.0,
            };
            build_cycle(j.apply(&carrier, tol), tol)
        }
        other => other,
    }
}

fn hypercycle_from_carrier(carrier: GenCircle, tol: f64) -> Result<Cycle, CycleError> {
    let unit = GenCircle::Circle(Circle::new(Vec2::ZERO, 1.0));
    let ideals = intersect(&carrier, &unit, tol)?;
    if ideals.len() != 2 {
        return Err(CycleError::Degenerate("hypercycle carrier must cross the boundary twice"));
    }
    let (u1, u2) = (ideals[0].normalized(), ideals[1].normalized());
    let base = if (u1 + u2).norm() <= tol {
        // Antipodal ideal points: the base is a diameter.
        let n = (u2 - u1).perp();
        GenCircle::Line(Line::new(n, 0.0))
    } else {
        // Orthogonal circle through both ideal points: o . u = 1 for each.
        let o = crate::geom::solve2(u1.x, u1.y, u2.x, u2.y, 1.0, 1.0)
            .ok_or(CycleError::Degenerate("coincident ideal points"))?;
        let r2 = o.norm2() - 1.0;
        if r2 <= 0.0 {
            return Err(CycleError::Degenerate("base carrier collapsed"));
        }
        GenCircle::Circle(Circle::new(o, r2.sqrt()))
    };
    // The second branch is the mirror image of the carrier across the base.
    let second = match base {
        GenCircle::Circle(bc) => InversiveMap::Inversion {
            center: bc.center,
            power: bc.r * bc.r,
        }
        .apply(&carrier, tol),
        GenCircle::Line(bl) => InversiveMap::Reflection { axis: bl }.apply(&carrier, tol),
    };
    let rep = carrier.project(Vec2::ZERO);
    let distance = dist_to_geodesic(rep, &base);
    Ok(Cycle {
        carrier,
        kind: CycleKind::Hypercycle,
        hyper: Some(HypercycleParts {
            base,
            distance,
            second_branch: second,
        }),
    })
}

/// A certified tangency: a common point strictly inside the model, the
/// common unit tangent direction there, and the numerical residual of the
/// tangency conditions. `branches` records which branch of each cycle the
/// contact lies on (for the first and second argument respectively).
#[derive(Debug, Clone, PartialEq)]
pub struct TangencyCertificate {
    pub point: HPoint,
    pub tangent_dir: Vec2,
    pub residual: f64,
    pub branches: (BranchTag, BranchTag),
}

/// Euclidean tangency gap of two carriers together with the would-be touch
/// point. `None` for line pairs (lines never touch) and for coincident
/// carriers (the same curve is not tangent to itself).
pub(crate) fn carrier_tangency(a: &GenCircle, b: &GenCircle) -> Option<(Vec2, f64)> {
    if carriers_close(a, b, 1e-9) {
        return None;
    }
    match (a, b) {
        (GenCircle::Circle(c1), GenCircle::Circle(c2)) => {
            let d = c1.center.dist(c2.center);
            if d < 1e-300 {
                return None;
            }
            let ext = (d - (c1.r + c2.r)).abs();
            let int = (d - (c1.r - c2.r).abs()).abs();
            let u = (c2.center - c1.center) / d;
            if ext <= int {
                Some((c1.center + u * c1.r, ext))
            } else {
                let s = if c1.r >= c2.r { 1.0 } else { -1.0 };
                Some((c1.center + u * (s * c1.r), int))
            }
        }
        (GenCircle::Circle(c), GenCircle::Line(l)) | (GenCircle::Line(l), GenCircle::Circle(c)) => {
            let h = l.signed_dist(c.center);
            let s = if h >= 0.0 { 1.0 } else { -1.0 };
            Some((c.center - l.normal * (s * c.r), (h.abs() - c.r).abs()))
        }
        (GenCircle::Line(_), GenCircle::Line(_)) => None,
    }
}

/// First tangency certificate of two cycles within `tol`, scanning branch
/// pairs in carrier-first order, or `None` when the cycles do not touch
/// inside the model.
pub fn cycles_touching(a: &Cycle, b: &Cycle, tol: f64) -> Option<TangencyCertificate> {
    cycles_touching_all(a, b, tol).into_iter().next()
}

/// All distinct tangency certificates of two cycles within `tol`. Hypercycle
/// pairs can touch on several branch combinations; points closer than the
/// certification tolerance are reported once.
pub fn cycles_touching_all(a: &Cycle, b: &Cycle, tol: f64) -> Vec<TangencyCertificate> {
    let mut found: Vec<TangencyCertificate> = Vec::new();
    for (tag_a, ga) in a.branches() {
        for (tag_b, gb) in b.branches() {
            let Some((p, gap)) = carrier_tangency(&ga, &gb) else {
                continue;
            };
            if gap > tol {
                continue;
            }
            let Ok(point) = HPoint::from_vec(p) else {
                continue;
            };
            let ua = ga.tangent_at(p);
            let ub = gb.tangent_at(p);
            let dir_gap = 1.0 - ua.dot(ub).abs();
            let residual = gap.max(dir_gap);
            if found
                .iter()
                .any(|c| c.point.v().dist(p) <= tol.max(1e-9))
            {
                continue;
            }
            found.push(TangencyCertificate {
                point,
                tangent_dir: ua,
                residual,
                branches: (tag_a, tag_b),
            });
        }
    }
    found
}

/// Hyperbolic length of the tangent segment from an exterior point to a
/// circle: `cosh d = cosh r cosh t` with `d` the center distance.
pub fn tangent_length_point_cycle(p: HPoint, c: &Cycle, tol: f64) -> Result<f64, CycleError> {
    let (center, r) = c.center_radius()?;
    let d = hyp_distance(p, center);
    if d < r - tol {
        return Err(CycleError::PointInsideCircle);
    }
    let ratio = (d.cosh() / r.cosh()).max(1.0);
    Ok(ratio.acosh())
}

/// Angle subtended by a circle of radius `r` seen from hyperbolic distance
/// `d >= r` from its center: `sin(theta/2) = sinh r / sinh d`.
pub fn subtended_angle(r: f64, d: f64, tol: f64) -> Result<f64, CycleError> {
    if d < r - tol {
        return Err(CycleError::PointInsideCircle);
    }
    let s = (r.sinh() / d.sinh()).clamp(0.0, 1.0);
    Ok(2.0 * s.asin())
}

/// Common tangent segment lengths of two circles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentSegments {
    /// Between the touch points of a common tangent with both circles on
    /// the same side. Defined whenever the circles are not nested.
    pub outer: f64,
    /// Between the touch points of a separating common tangent. `None`
    /// when the circles overlap.
    pub inner: Option<f64>,
}

/// Lengths of the common tangent segments of two circles:
/// `cosh D = cosh r1 cosh r2 cosh t -/+ sinh r1 sinh r2` for the outer and
/// inner segment respectively, `D` the center distance.
pub fn common_tangent_segment_lengths(
    c1: &Cycle,
    c2: &Cycle,
    tol: f64,
) -> Result<TangentSegments, CycleError> {
    let (o1, r1) = c1.center_radius()?;
    let (o2, r2) = c2.center_radius()?;
    let d = hyp_distance(o1, o2);
    if d < (r1 - r2).abs() - tol {
        return Err(CycleError::NestedCircles);
    }
    let cc = r1.cosh() * r2.cosh();
    let ss = r1.sinh() * r2.sinh();
    let outer = ((d.cosh() + ss) / cc).max(1.0).acosh();
    let inner_arg = (d.cosh() - ss) / cc;
    let inner = if inner_arg >= 1.0 - tol {
        Some(inner_arg.max(1.0).acosh())
    } else {
        None
    };
    Ok(TangentSegments { outer, inner })
}

/// Same-side/opposite-side classification of a common tangent geodesic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeodesicTangentKind {
    Outer,
    Inner,
}

/// Common tangent geodesics of two disjoint-or-crossing circles, found by
/// solving for carriers simultaneously orthogonal to the boundary and
/// tangent to both circle carriers, then certified. Deterministic order.
pub fn common_tangent_geodesics(
    c1: &Cycle,
    c2: &Cycle,
    tol: f64,
) -> Result<Vec<(Cycle, GeodesicTangentKind)>, CycleError> {
    let (h1, _) = c1.center_radius()?;
    let (h2, _) = c2.center_radius()?;
    let k1 = c1.carrier.as_circle().expect("circle kind checked");
    let k2 = c2.carrier.as_circle().expect("circle kind checked");

    let mut candidates: Vec<GenCircle> = Vec::new();

    // Touching circles: the collapsed tangent at the touch point is a
    // double root of the quadric intersection below, which roundoff only
    // locates to about sqrt(eps). Build it directly, and first, so the
    // dedup pass keeps this accurate copy instead of a quadratic root.
    if let Some((touch, gap)) = carrier_tangency(&c1.carrier, &c2.carrier) {
        if gap <= tol.max(1e-9) * 10.0 && touch.norm() < 1.0 - MODEL_BOUNDARY_EPS {
            let dir = (k2.center - k1.center).perp();
            if dir.norm() > 0.0 {
                if let (Ok(hp), dir) = (HPoint::from_vec(touch), dir.normalized()) {
                    if let Ok(g) = geodesic_at(hp, dir) {
                        candidates.push(g);
                    }
                }
            }
        }
    }

    // Candidate carriers in inversive coordinates: a geodesic carrier is
    // a (|x|^2 + 1) - 2 b . x = 0 with |b|^2 - a^2 = 1, where a = 0 gives a
    // diameter with unit normal b and a != 0 the orthogonal circle with
    // center b/a and radius 1/|a|. Tangency to the carrier of circle i
    // (center c_i, radius r_i) is linear in (b, a):
    //   b . c_i - a (1 + |c_i|^2 - r_i^2) / 2 = s_i r_i,  s_i in {+1, -1}.
    // Every coefficient stays O(1) even for tangents passing near the
    // chart origin; parameterizing by (center, radius) instead loses those
    // roots to a degenerate quadratic, since their centers run to infinity.
    for s1 in [1.0, -1.0] {
        for s2 in [1.0, -1.0] {
            let rows = [
                [
                    k1.center.x,
                    k1.center.y,
                    -0.5 * (1.0 + k1.center.norm2() - k1.r * k1.r),
                    s1 * k1.r,
                ],
                [
                    k2.center.x,
                    k2.center.y,
                    -0.5 * (1.0 + k2.center.norm2() - k2.r * k2.r),
                    s2 * k2.r,
                ],
            ];
            for (base, dir) in affine_solutions_2x3(&rows) {
                // Coordinates (b_x, b_y, a); intersect the solution line
                // with the normalization quadric |b|^2 - a^2 = 1.
                let qa = dir[0] * dir[0] + dir[1] * dir[1] - dir[2] * dir[2];
                let qb = 2.0 * (base[0] * dir[0] + base[1] * dir[1] - base[2] * dir[2]);
                let qc = base[0] * base[0] + base[1] * base[1] - base[2] * base[2] - 1.0;
                for t in quadratic_roots(qa, qb, qc) {
                    let b = Vec2::new(base[0] + t * dir[0], base[1] + t * dir[1]);
                    let a = base[2] + t * dir[2];
                    if b.norm() == 0.0 {
                        continue;
                    }
                    // Near-coincident tangents (near-isosceles data) leave
                    // the roots conditioned only to about eps over their
                    // separation, so an exactly diametral tangent can come
                    // back with |a| up to ~1e-11. Snapping below 1e-9
                    // absorbs that noise and misplaces a genuinely
                    // non-diametral carrier by at most 5e-10.
                    if a.abs() <= 1e-9 * b.norm() {
                        candidates.push(GenCircle::Line(Line::new(b.normalized(), 0.0)));
                    } else {
                        let o = Vec2::new(b.x / a, b.y / a);
                        candidates.push(GenCircle::Circle(Circle::new(o, 1.0 / a.abs())));
                    }
                }
            }
        }
    }

    let mut out: Vec<(Cycle, GeodesicTangentKind)> = Vec::new();
    for cand in candidates {
        // Certify tangency to both circles at interior points.
        let Ok(g) = build_cycle(cand, tol) else { continue };
        if g.kind != CycleKind::Geodesic {
            continue;
        }
        let cert_tol = tol.max(1e-9) * 10.0;
        if cycles_touching(&g, c1, cert_tol).is_none() || cycles_touching(&g, c2, cert_tol).is_none()
        {
            continue;
        }
        if out.iter().any(|(prev, _)| carriers_close(&prev.carrier, &g.carrier, 1e-8)) {
            continue;
        }
        let sd1 = signed_dist_to_geodesic(h1.v(), &g.carrier);
        let sd2 = signed_dist_to_geodesic(h2.v(), &g.carrier);
        let kind = if sd1 * sd2 >= 0.0 {
            GeodesicTangentKind::Outer
        } else {
            GeodesicTangentKind::Inner
        };
        out.push((g, kind));
    }
    out.sort_by(|a, b| {
        let ka = matches!(a.1, GeodesicTangentKind::Inner) as u8;
        let kb = matches!(b.1, GeodesicTangentKind::Inner) as u8;
        ka.cmp(&kb).then_with(|| carrier_sort_key(&a.0.carrier)
            .partial_cmp(&carrier_sort_key(&b.0.carrier))
            .unwrap())
    });
    Ok(out)
}

fn carrier_sort_key(g: &GenCircle) -> (f64, f64, f64) {
    match g {
        GenCircle::Circle(c) => (0.0, c.center.x, c.center.y),
        GenCircle::Line(l) => {
            let c = l.canonical();
            (1.0, c.normal.angle(), c.offset)
        }
    }
}

pub(crate) fn carriers_close(a: &GenCircle, b: &GenCircle, tol: f64) -> bool {
    match (a, b) {
        (GenCircle::Circle(c1), GenCircle::Circle(c2)) => {
            // Relative band: large carriers reproduce only to r * eps, so an
            // absolute comparison would keep near-duplicates of them.
            let scale = 1.0 + c1.r.min(c2.r);
            c1.center.dist(c2.center) <= tol * scale && (c1.r - c2.r).abs() <= tol * scale
        }
        (GenCircle::Line(l1), GenCircle::Line(l2)) => {
            let (l1, l2) = (l1.canonical(), l2.canonical());
            l1.normal.dist(l2.normal) <= tol && (l1.offset - l2.offset).abs() <= tol
        }
        _ => false,
    }
}

/// Affine solution set of a 2-equation, 3-unknown linear system given as
/// rows `[a, b, c | d]`: returns `(base, direction)` pairs describing
/// `base + t * direction`. Empty when the system is (numerically) rank
/// deficient.
fn affine_solutions_2x3(rows: &[[f64; 4]; 2]) -> Vec<([f64; 3], [f64; 3])> {
    // Choose the pivot column pair with the largest 2x2 determinant.
    let det = |i: usize, j: usize| rows[0][i] * rows[1][j] - rows[0][j] * rows[1][i];
    let pairs = [(0usize, 1usize), (0, 2), (1, 2)];
    let (mut best, mut best_det) = ((0usize, 1usize), 0.0f64);
    for (i, j) in pairs {
        if det(i, j).abs() > best_det.abs() {
            best = (i, j);
            best_det = det(i, j);
        }
    }
    let scale: f64 = rows
        .iter()
        .flat_map(|r| r[..3].iter())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if best_det.abs() <= 1e-13 * scale * scale {
        return Vec::new();
    }
    let (i, j) = best;
    let k = 3 - i - j; // the free column
    // Solve the pivot pair for the free variable set to 0 and to 1.
    let solve_for = |free_val: f64| -> [f64; 3] {
        let r1 = rows[0][3] - rows[0][k] * free_val;
        let r2 = rows[1][3] - rows[1][k] * free_val;
        let xi = (r1 * rows[1][j] - rows[0][j] * r2) / best_det;
        let xj = (rows[0][i] * r2 - r1 * rows[1][i]) / best_det;
        let mut out = [0.0; 3];
        out[i] = xi;
        out[j] = xj;
        out[k] = free_val;
        out
    };
    let base = solve_for(0.0);
    let one = solve_for(1.0);
    let dir = [one[0] - base[0], one[1] - base[1], one[2] - base[2]];
    vec![(base, dir)]
}

/// Real roots of `a t^2 + b t + c`, degenerating gracefully to the linear
/// case. Deterministic order (smaller root first).
pub(crate) fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        return Vec::new();
    }
    if a.abs() <= 1e-14 * scale {
        if b.abs() <= 1e-14 * scale {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    let sq = disc.sqrt();
    // Citardauq for the small root to avoid cancellation.
    let q = -(b + b.signum() * sq) / 2.0;
    let (r1, r2) = if q == 0.0 {
        (0.0, 0.0)
    } else {
        (q / a, c / q)
    };
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if (lo - hi).abs() <= 1e-14 * (1.0 + lo.abs() + hi.abs()) {
        vec![lo]
    } else {
        vec![lo, hi]
    }
}

/// Vertex labels of a triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    A,
    B,
    C,
}

/// A hyperbolic triangle with its vertices in the model and its side
/// lengths; `side_a` is opposite vertex `A`, and so on.
#[derive(Debug, Clone, PartialEq)]
pub struct HTriangle {
    pub va: HPoint,
    pub vb: HPoint,
    pub vc: HPoint,
    pub side_a: f64,
    pub side_b: f64,
    pub side_c: f64,
}

impl HTriangle {
    pub fn vertex(&self, v: Vertex) -> HPoint {
        match v {
            Vertex::A => self.va,
            Vertex::B => self.vb,
            Vertex::C => self.vc,
        }
    }

    /// Geodesic carrier of the side opposite the given vertex.
    pub fn side_opposite(&self, v: Vertex) -> Result<GenCircle, CycleError> {
        let (p, q) = match v {
            Vertex::A => (self.vb, self.vc),
            Vertex::B => (self.vc, self.va),
            Vertex::C => (self.va, self.vb),
        };
        Ok(geodesic_through(p, q)?)
    }
}

/// Embeds a triangle with prescribed side lengths into the model: `A` at
/// the origin, `B` on the positive x-axis at distance `c`, `C` in the upper
/// half plane at distance `b` from `A` (side `a` joins `B` and `C`).
pub fn embed_triangle(a: f64, b: f64, c: f64, tol: f64) -> Result<HTriangle, CycleError> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) {
        return Err(CycleError::ViolatedTriangleInequality);
    }
    if a + tol >= b + c || b + tol >= a + c || c + tol >= a + b {
        return Err(CycleError::ViolatedTriangleInequality);
    }
    let cos_alpha = (b.cosh() * c.cosh() - a.cosh()) / (b.sinh() * c.sinh());
    if !(-1.0..=1.0).contains(&cos_alpha) {
        return Err(CycleError::ViolatedTriangleInequality);
    }
    let alpha = cos_alpha.acos();
    let va = HPoint::ORIGIN;
    let vb = HPoint::new((c / 2.0).tanh(), 0.0)?;
    let vc = exp_from(va, Vec2::from_angle(alpha), b);
    let tri = HTriangle {
        va,
        vb,
        vc,
        side_a: a,
        side_b: b,
        side_c: c,
    };
    debug_assert!((hyp_distance(tri.vb, tri.vc) - a).abs() < 1e-9 * (1.0 + a));
    Ok(tri)
}

/// Interior angle bisector at a vertex, as a geodesic cycle.
pub fn angle_bisector(t: &HTriangle, v: Vertex, tol: f64) -> Result<Cycle, CycleError> {
    let (p, q, r) = match v {
        Vertex::A => (t.va, t.vb, t.vc),
        Vertex::B => (t.vb, t.vc, t.va),
        Vertex::C => (t.vc, t.va, t.vb),
    };
    let u1 = initial_direction(p, q)?;
    let u2 = initial_direction(p, r)?;
    let sum = u1 + u2;
    if sum.norm() <= tol {
        return Err(CycleError::Degenerate("straight angle at vertex"));
    }
    let carrier = geodesic_at(p, sum.normalized())?;
    build_cycle(carrier, tol)
}

/// Result of an incircle construction: the circle and one certificate per
/// bounding geodesic.
#[derive(Debug, Clone)]
pub struct Incircle {
    pub circle: Cycle,
    pub center: HPoint,
    pub radius: f64,
    pub contacts: [TangencyCertificate; 3],
}

/// Newton iteration driving the three signed distances to a common value.
/// Signs are fixed by the hint; returns the equalized point and the common
/// (positive) distance.
pub(crate) fn equal_distance_point(
    gs: &[GenCircle; 3],
    hint: Vec2,
    tol: f64,
) -> Option<(Vec2, f64)> {
    let signs: Vec<f64> = gs
        .iter()
        .map(|g| signed_dist_to_geodesic(hint, g).signum())
        .collect();
    let f = |p: Vec2| -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, g) in gs.iter().enumerate() {
            out[i] = signs[i] * signed_dist_to_geodesic(p, g);
        }
        out
    };
    let mut p = hint;
    for _ in 0..60 {
        let v = f(p);
        let r1 = v[0] - v[2];
        let r2 = v[1] - v[2];
        if r1.abs().max(r2.abs()) < 1e-14 {
            break;
        }
        let h = 1e-7;
        let vx = f(p + Vec2::new(h, 0.0));
        let vy = f(p + Vec2::new(0.0, h));
        let j11 = (vx[0] - vx[2] - r1) / h;
        let j12 = (vy[0] - vy[2] - r1) / h;
        let j21 = (vx[1] - vx[2] - r2) / h;
        let j22 = (vy[1] - vy[2] - r2) / h;
        let step = crate::geom::solve2(j11, j12, j21, j22, r1, r2)?;
        let mut next = p - step;
        // Stay inside the chart; the equalized point of a bounded region is
        // interior, so pulling back toward the hint is safe.
        while next.norm() >= 1.0 - MODEL_BOUNDARY_EPS {
            next = (next + p) / 2.0;
        }
        if (next - p).norm() < 1e-15 {
            p = next;
            break;
        }
        p = next;
    }
    let v = f(p);
    let spread = (v[0] - v[2]).abs().max((v[1] - v[2]).abs());
    if spread > tol.max(1e-12) * 100.0 {
        return None;
    }
    let r = (v[0] + v[1] + v[2]) / 3.0;
    if r <= 0.0 {
        return None;
    }
    Some((p, r))
}

/// Inscribed circle of the bounded region cut out by three pairwise
/// intersecting geodesics, with tangency certificates.
pub fn incircle_of_geodesics(
    g1: &Cycle,
    g2: &Cycle,
    g3: &Cycle,
    tol: f64,
) -> Result<Incircle, CycleError> {
    for g in [g1, g2, g3] {
        if g.kind != CycleKind::Geodesic {
            return Err(CycleError::UnsupportedKind("incircle requires geodesics"));
        }
    }
    let v12 = in_model_intersection(&g1.carrier, &g2.carrier, tol)?;
    let v13 = in_model_intersection(&g1.carrier, &g3.carrier, tol)?;
    let v23 = in_model_intersection(&g2.carrier, &g3.carrier, tol)?;
    // Hint: midpoint of a median, strictly interior to the geodesically
    // convex region. The Euclidean corner centroid can land outside when a
    // bounding geodesic bulges far into the chart.
    let m = hyp_midpoint(HPoint::from_vec(v12)?, HPoint::from_vec(v13)?)?;
    let hint = hyp_midpoint(HPoint::from_vec(v23)?, m)?.v();
    let carriers = [g1.carrier, g2.carrier, g3.carrier];
    let (center_v, radius) =
        equal_distance_point(&carriers, hint, tol).ok_or(CycleError::NoBoundedRegion)?;
    let center = HPoint::from_vec(center_v)?;
    let circle = build_cycle(
        GenCircle::Circle(circle_from_center_radius(center, radius)?),
        tol,
    )?;
    let cert_tol = tol.max(1e-9);
    let mut contacts = Vec::with_capacity(3);
    for g in [g1, g2, g3] {
        contacts.push(
            cycles_touching(&circle, g, cert_tol)
                .ok_or(CycleError::CertificationFailed("incircle contact"))?,
        );
    }
    let contacts: [TangencyCertificate; 3] = contacts.try_into().expect("three contacts");
    Ok(Incircle {
        circle,
        center,
        radius,
        contacts,
    })
}

/// The unique in-model intersection point of two geodesic carriers.
pub(crate) fn in_model_intersection(
    a: &GenCircle,
    b: &GenCircle,
    tol: f64,
) -> Result<Vec2, CycleError> {
    let pts = intersect(a, b, tol)?;
    pts.into_iter()
        .find(|p| p.norm() < 1.0 - MODEL_BOUNDARY_EPS)
        .ok_or(CycleError::NoBoundedRegion)
}
