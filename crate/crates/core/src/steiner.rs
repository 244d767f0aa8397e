//! Steiner's construction of the Malfatti configuration, in two forms:
//! [`steiner_triangle`] inscribes the three circles into a hyperbolic
//! triangle through sub-incircles and their second internal tangents;
//! [`steiner_cycles`] extends the construction to three arbitrary
//! non-overlapping cycles through inversive swap maps and Apollonius steps.
//!
//! The cycle pipeline runs entirely on carriers in the embedding plane;
//! hyperbolic meaning (cycle kinds, in-model touch points) is restored only
//! when the outputs are classified and every tangency is certified.

use crate::apollonius::{
    apollonius_through_point_all, tangent_circles_to_three, ApolloniusError, TangencyOrientation,
    TangentTarget,
};
use crate::cycles::{
    angle_bisector, build_cycle, carrier_tangency, carriers_close, common_tangent_geodesics,
    cycles_touching, equal_distance_point, in_model_intersection, incircle_of_geodesics, Cycle,
    CycleError, GeodesicTangentKind, HTriangle, TangencyCertificate, Vertex,
};
use crate::disk::{
    circle_from_center_radius, dist_to_geodesic, exp_from, hyp_distance, initial_direction,
    DiskError, HPoint,
};
use crate::geom::{Circle, GenCircle, Vec2};
use crate::inversive::{intersect, power_of_point, swap_map, InversiveMap, KernelError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SteinerError {
    #[error("the interiors of the given cycles overlap")]
    OverlappingInteriors,
    #[error("second internal tangents fail to concur, residual {residual:e}")]
    ConcurrencyFailure { residual: f64 },
    #[error("no Apollonius candidate passes the side filters: {0}")]
    SelectionExhausted(&'static str),
    #[error("construction invariant failed: {0}")]
    InvariantViolated(&'static str),
    #[error(transparent)]
    Cycle(#[from] CycleError),
    #[error(transparent)]
    Apollonius(#[from] ApolloniusError),
    #[error(transparent)]
    Disk(#[from] DiskError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// One entry in the ordered construction record.
#[derive(Debug, Clone)]
pub enum TraceEntry {
    Carrier { label: String, carrier: GenCircle },
    CycleObj { label: String, cycle: Cycle },
    Point { label: String, point: Vec2 },
    Map { label: String, map: InversiveMap },
    /// A named tangency or incidence residual.
    Check { label: String, residual: f64, tolerance: f64 },
}

/// Ordered record of every intermediate object, plus typed handles to the
/// pieces the verification layer consumes.
#[derive(Debug, Clone, Default)]
pub struct SteinerTrace {
    pub entries: Vec<TraceEntry>,
    /// The three given cycles (side geodesics in the triangle case).
    pub given: Vec<Cycle>,
    /// Auxiliary circle carriers, indexed like the given cycles: the
    /// sub-incircles of the triangle case, the step-2 circles otherwise.
    /// `aux_carriers[j]` touches `given[j]` at `touch_on_given[j]`.
    pub aux_carriers: Vec<GenCircle>,
    /// Common tangent carriers indexed by output pair (0,1), (1,2), (2,0);
    /// `tangent_carriers[p]` touches both outputs of pair `p` and passes
    /// through `touch_on_given[third(p)]`.
    pub tangent_carriers: Vec<GenCircle>,
    /// Touch point of `aux_carriers[j]` on `given[j]` (the points named
    /// I, E, G in the triangle case, the through points otherwise).
    pub touch_on_given: Vec<Vec2>,
    /// Concurrency point of the second internal tangents (triangle case).
    pub concurrency: Option<Vec2>,
    /// Swap maps per pair (cycle case).
    pub swap_maps: Vec<InversiveMap>,
}

impl SteinerTrace {
    fn carrier(&mut self, label: &str, carrier: GenCircle) {
        self.entries.push(TraceEntry::Carrier { label: label.to_string(), carrier });
    }
    fn cycle(&mut self, label: &str, cycle: &Cycle) {
        self.entries.push(TraceEntry::CycleObj { label: label.to_string(), cycle: cycle.clone() });
    }
    fn point(&mut self, label: &str, point: Vec2) {
        self.entries.push(TraceEntry::Point { label: label.to_string(), point });
    }
    fn map(&mut self, label: &str, map: &InversiveMap) {
        self.entries.push(TraceEntry::Map { label: label.to_string(), map: map.clone() });
    }
    fn check(&mut self, label: &str, residual: f64, tolerance: f64) {
        self.entries.push(TraceEntry::Check { label: label.to_string(), residual, tolerance });
    }
}

/// The solved configuration: three cycles, each touching the other two and
/// two of the three given cycles, with certificates for every touching.
#[derive(Debug, Clone)]
pub struct MalfattiCycleSystem {
    pub cycles: [Cycle; 3],
    /// Mutual tangencies for the output pairs (0,1), (1,2), (2,0).
    pub mutual: [TangencyCertificate; 3],
    /// Contacts of output `j` with its two assigned given cycles, in
    /// assignment order.
    pub given_contacts: [[TangencyCertificate; 2]; 3],
    /// Output `j` touches the given cycles `given_assignment[j]`; the
    /// realized matching is always `[[1,2],[2,0],[0,1]]`.
    pub given_assignment: [[usize; 2]; 3],
    pub trace: SteinerTrace,
}

/// Pairs of indices used throughout, in certificate order.
pub(crate) const PAIRS: [(usize, usize); 3] = [(0, 1), (1, 2), (2, 0)];

fn third(p: usize) -> usize {
    3 - PAIRS[p].0 - PAIRS[p].1
}

/// Numeric mismatch between two carriers, zero when they coincide.
fn carrier_mismatch(a: &GenCircle, b: &GenCircle) -> f64 {
    match (a, b) {
        (GenCircle::Circle(x), GenCircle::Circle(y)) => {
            x.center.dist(y.center) + (x.r - y.r).abs()
        }
        (GenCircle::Line(x), GenCircle::Line(y)) => {
            let x = x.canonical();
            let y = y.canonical();
            ((x.normal - y.normal).norm() + (x.offset - y.offset).abs())
                .min((x.normal + y.normal).norm() + (x.offset + y.offset).abs())
        }
        _ => f64::INFINITY,
    }
}

/// Sign-valued side function: power for circles, signed distance for lines.
fn side_value(g: &GenCircle, p: Vec2) -> f64 {
    match g {
        GenCircle::Circle(c) => power_of_point(p, c),
        GenCircle::Line(l) => l.signed_dist(p),
    }
}

/// A deterministic in-model point on a carrier.
fn sample_on(g: &GenCircle) -> Vec2 {
    g.project(Vec2::ZERO)
}

// ---------------------------------------------------------------------------
// Triangle pipeline
// ---------------------------------------------------------------------------

/// Geometric deviation of carrier `a` from carrier `b`, probed at in-model
/// points of `a`. Robust where near-diameter geodesics flip between line
/// and large-circle representations.
fn probe_mismatch(a: &GenCircle, b: &GenCircle) -> f64 {
    [Vec2::ZERO, Vec2::new(0.41, 0.23), Vec2::new(-0.31, -0.37)]
        .into_iter()
        .map(|q| b.dist_to(a.project(q)))
        .fold(0.0, f64::max)
}

/// The second internal common tangent of two sub-incircles, i.e. the one
/// distinct from the angle bisector both circles touch. For isosceles
/// configurations the two circles touch each other on the bisector and the
/// two internal tangents collapse onto it; the bisector itself is then the
/// correct (double) tangent.
fn second_internal_tangent(
    w1: &Cycle,
    w2: &Cycle,
    bisector: &Cycle,
    tol: f64,
) -> Result<Cycle, SteinerError> {
    let all = common_tangent_geodesics(w1, w2, tol)?;
    let mut inner: Vec<&Cycle> = all
        .iter()
        .filter(|(_, k)| *k == GeodesicTangentKind::Inner)
        .map(|(c, _)| c)
        .collect();
    if inner.is_empty() {
        return Err(SteinerError::InvariantViolated(
            "sub-incircles have no internal tangent",
        ));
    }
    inner.sort_by(|a, b| {
        probe_mismatch(&a.carrier, &bisector.carrier)
            .total_cmp(&probe_mismatch(&b.carrier, &bisector.carrier))
    });
    let nearest = probe_mismatch(&inner[0].carrier, &bisector.carrier);
    let farthest = probe_mismatch(&inner[inner.len() - 1].carrier, &bisector.carrier);
    // Both internal tangents collapse onto the bisector when the circles
    // touch each other on it (isosceles data); the bisector itself is then
    // the tangent.
    if farthest < 1e-7 {
        return Ok(bisector.clone());
    }
    if nearest > 1e-7 {
        return Err(SteinerError::InvariantViolated(
            "neither internal tangent reproduces the bisector",
        ));
    }
    Ok(inner[inner.len() - 1].clone())
}

/// Equal-distance circle inside the region bounded by three geodesics,
/// hinted along the segment from `vertex` to `k`, then verified against a
/// fourth geodesic. Returns center, radius and the fourth residual.
fn quad_incircle(
    vertex: HPoint,
    k: HPoint,
    bound: [&Cycle; 3],
    fourth: &Cycle,
    tol: f64,
) -> Result<(HPoint, f64, f64), SteinerError> {
    let carriers = [bound[0].carrier, bound[1].carrier, bound[2].carrier];
    let dist = hyp_distance(vertex, k);
    let dir = initial_direction(vertex, k)?;
    let mut best: Option<(HPoint, f64, f64)> = None;
    for frac in [0.5, 0.35, 0.65, 0.2, 0.8] {
        let hint = exp_from(vertex, dir, frac * dist).v();
        let Some((c, r)) = equal_distance_point(&carriers, hint, tol) else {
            continue;
        };
        let center = HPoint::from_vec(c)?;
        let res4 = (dist_to_geodesic(c, &fourth.carrier) - r).abs();
        if best.as_ref().map_or(true, |b| res4 < b.2) {
            best = Some((center, r, res4));
        }
        if res4 <= 1e-9 {
            break;
        }
    }
    let (center, r, res4) = best.ok_or(CycleError::NoBoundedRegion)?;
    if res4 > 1e-8 {
        return Err(SteinerError::InvariantViolated(
            "quadrilateral incircle misses its fourth side",
        ));
    }
    Ok((center, r, res4))
}

/// Steiner's construction inside a triangle: inscribe circles in the three
/// sub-triangles cut by the angle bisectors, draw the second internal
/// tangent of each pair, obtain the concurrency point `K`, and inscribe a
/// circle into each of the three quadrilaterals so formed.
pub fn steiner_triangle(t: &HTriangle, tol: f64) -> Result<MalfattiCycleSystem, SteinerError> {
    let mut trace = SteinerTrace::default();
    let cert_tol = tol.max(1e-8);

    // Given objects: the side geodesics, indexed a, b, c.
    let sides = [
        build_cycle(t.side_opposite(Vertex::A)?, tol)?,
        build_cycle(t.side_opposite(Vertex::B)?, tol)?,
        build_cycle(t.side_opposite(Vertex::C)?, tol)?,
    ];
    for (s, name) in sides.iter().zip(["side a", "side b", "side c"]) {
        trace.carrier(name, s.carrier);
    }

    let bis = [
        angle_bisector(t, Vertex::A, tol)?,
        angle_bisector(t, Vertex::B, tol)?,
        angle_bisector(t, Vertex::C, tol)?,
    ];
    for (b, name) in bis.iter().zip(["bisector A", "bisector B", "bisector C"]) {
        trace.carrier(name, b.carrier);
    }
    let incenter = in_model_intersection(&bis[0].carrier, &bis[1].carrier, tol)?;
    let inc_res = dist_to_geodesic(incenter, &bis[2].carrier);
    trace.point("incenter", incenter);
    trace.check("bisector concurrency", inc_res, 1e-9);
    if inc_res > 1e-9 {
        return Err(SteinerError::InvariantViolated("bisectors fail to concur"));
    }

    // Sub-incircles, indexed by the side they sit on: aux[0] lives in the
    // sub-triangle over side a.
    let aux = [
        incircle_of_geodesics(&sides[0], &bis[1], &bis[2], tol)?,
        incircle_of_geodesics(&sides[1], &bis[2], &bis[0], tol)?,
        incircle_of_geodesics(&sides[2], &bis[0], &bis[1], tol)?,
    ];
    for (w, name) in aux.iter().zip(["sub-incircle A", "sub-incircle B", "sub-incircle C"]) {
        trace.cycle(name, &w.circle);
        for c in &w.contacts {
            trace.check(&format!("{name} contact"), c.residual, cert_tol);
        }
    }

    // Second internal tangents: tangent_carriers[p] joins the outputs of
    // pair p and is the second tangent of the opposite pair of
    // sub-incircles; tangent at vertex V pairs the two sub-incircles that
    // flank the bisector at V.
    let tangent_of = |v: usize| -> Result<Cycle, SteinerError> {
        let (i, j) = ((v + 1) % 3, (v + 2) % 3);
        second_internal_tangent(&aux[i].circle, &aux[j].circle, &bis[v], tol)
    };
    let t_a = tangent_of(0)?;
    let t_b = tangent_of(1)?;
    let t_c = tangent_of(2)?;
    // Pair order (0,1), (1,2), (2,0) wants the tangents at C, A, B.
    let tangents = [t_c, t_a, t_b];
    for (tv, name) in tangents.iter().zip(["tangent at C", "tangent at A", "tangent at B"]) {
        trace.carrier(name, tv.carrier);
    }

    // Concurrency point K.
    let k = in_model_intersection(&tangents[0].carrier, &tangents[1].carrier, tol)?;
    let conc = dist_to_geodesic(k, &tangents[2].carrier);
    trace.point("K", k);
    trace.check("tangent concurrency at K", conc, 1e-8);
    if conc > 1e-8 {
        return Err(SteinerError::ConcurrencyFailure { residual: conc });
    }
    let k_point = HPoint::from_vec(k)?;

    // Crossings with the guaranteed sides: the tangent at vertex V meets
    // the opposite side inside the side segment, at the touch point of that
    // side's sub-incircle.
    let mut touch_on_given = Vec::with_capacity(3);
    for v in 0..3 {
        let tangent = &tangents[(v + 1) % 3]; // tangent at vertex v
        let hit = in_model_intersection(&tangent.carrier, &sides[v].carrier, tol)?;
        let (p, q) = match v {
            0 => (t.vb, t.vc),
            1 => (t.vc, t.va),
            2 => (t.va, t.vb),
            _ => unreachable!(),
        };
        let hp = HPoint::from_vec(hit)?;
        let side_len = [t.side_a, t.side_b, t.side_c][v];
        let betweenness =
            (hyp_distance(p, hp) + hyp_distance(hp, q) - side_len).abs();
        let names = ["I", "E", "G"];
        trace.point(names[v], hit);
        trace.check(&format!("{} lies inside its side", names[v]), betweenness, 1e-8);
        if betweenness > 1e-8 {
            return Err(SteinerError::InvariantViolated(
                "tangent crossing falls outside the side segment",
            ));
        }
        // The crossing is the sub-incircle's touch point with the side.
        let aux_touch = aux[v]
            .contacts
            .iter()
            .map(|c| c.point.v().dist(hit))
            .fold(f64::INFINITY, f64::min);
        trace.check(&format!("{} is the sub-incircle touch point", names[v]), aux_touch, 1e-7);
        touch_on_given.push(hit);
    }

    // Malfatti circle at each vertex: inscribed in the quadrilateral cut
    // off by the two adjacent sides and the tangents at the other two
    // vertices. Solve on three bounds, verify the fourth.
    let mut outputs: Vec<Cycle> = Vec::with_capacity(3);
    for v in 0..3 {
        let (i, j) = ((v + 1) % 3, (v + 2) % 3);
        // Tangents at vertices i and j, as pair-indexed entries.
        let tng_i = &tangents[(i + 1) % 3];
        let tng_j = &tangents[(j + 1) % 3];
        let (center, radius, res4) = quad_incircle(
            t.vertex([Vertex::A, Vertex::B, Vertex::C][v]),
            k_point,
            [&sides[i], &sides[j], tng_i],
            tng_j,
            tol,
        )?;
        let names = ["m_A", "m_B", "m_C"];
        trace.check(&format!("{} fourth tangency", names[v]), res4, 1e-8);
        let cycle = build_cycle(
            GenCircle::Circle(circle_from_center_radius(center, radius)?),
            tol,
        )?;
        trace.cycle(names[v], &cycle);
        outputs.push(cycle);
    }
    let cycles: [Cycle; 3] = outputs.try_into().expect("three outputs");

    trace.given = sides.to_vec();
    trace.aux_carriers = aux.iter().map(|w| w.circle.carrier).collect();
    trace.tangent_carriers = tangents.iter().map(|c| c.carrier).collect();
    trace.touch_on_given = touch_on_given;
    trace.concurrency = Some(k);

    let given_cycles = trace.given.clone();
    certify_system(cycles, &given_cycles, trace, cert_tol)
}

// ---------------------------------------------------------------------------
// Cycle pipeline
// ---------------------------------------------------------------------------

/// Pairwise admissibility of the given cycles: carriers must not cross
/// inside the model, and compact cycles (circles, paracycles) must be
/// honestly disjoint in the plane.
fn reject_overlap(given: &[Cycle; 3], tol: f64) -> Result<(), SteinerError> {
    use crate::cycles::CycleKind;
    for (i, j) in PAIRS {
        let (a, b) = (&given[i], &given[j]);
        if carriers_close(&a.carrier, &b.carrier, tol.max(1e-12)) {
            return Err(SteinerError::OverlappingInteriors);
        }
        match intersect(&a.carrier, &b.carrier, tol) {
            Ok(pts) => {
                if pts.iter().any(|p| p.norm() < 1.0 - 1e-9) {
                    return Err(SteinerError::OverlappingInteriors);
                }
            }
            Err(KernelError::CoincidentObjects) => {
                return Err(SteinerError::OverlappingInteriors)
            }
            Err(_) => {}
        }
        let compact = |c: &Cycle| {
            matches!(c.kind, CycleKind::Circle | CycleKind::Paracycle)
        };
        if compact(a) && compact(b) {
            let (ca, cb) = (
                a.carrier.as_circle().expect("compact carrier"),
                b.carrier.as_circle().expect("compact carrier"),
            );
            let d = ca.center.dist(cb.center);
            if d < (ca.r - cb.r).abs() + tol || d < ca.r + cb.r - tol {
                return Err(SteinerError::OverlappingInteriors);
            }
        }
    }
    Ok(())
}

/// Tangency target that keeps the sought circle on the side of `g` where
/// the sample points live.
fn side_target(g: &GenCircle, sample: Vec2) -> TangentTarget {
    match g {
        GenCircle::Circle(c) => TangentTarget::Circle {
            circle: *c,
            orientation: if power_of_point(sample, c) > 0.0 {
                TangencyOrientation::External
            } else {
                TangencyOrientation::Internal
            },
        },
        GenCircle::Line(l) => TangentTarget::Line {
            line: *l,
            side: if l.signed_dist(sample) >= 0.0 { 1.0 } else { -1.0 },
        },
    }
}

/// Target for touching a given cycle "from outside", i.e. from the region
/// occupied by the other two given cycles.
fn external_target(
    g: &GenCircle,
    others: [Vec2; 2],
) -> Result<TangentTarget, SteinerError> {
    let s0 = side_value(g, others[0]);
    let s1 = side_value(g, others[1]);
    if s0 * s1 <= 0.0 {
        return Err(SteinerError::SelectionExhausted(
            "given cycles straddle another given cycle",
        ));
    }
    Ok(side_target(g, others[0]))
}

/// True when the candidate lies wholly on the same side of `g` as `sample`.
fn same_side(cand: &Circle, g: &GenCircle, sample: Vec2) -> bool {
    match g {
        GenCircle::Line(l) => l.signed_dist(cand.center) * l.signed_dist(sample) > 0.0,
        GenCircle::Circle(rc) => {
            let sc = power_of_point(cand.center, rc);
            let ss = power_of_point(sample, rc);
            // Inside the reference circle the candidate must not contain it.
            sc * ss > 0.0 && (ss > 0.0 || cand.r < rc.r)
        }
    }
}

/// Orientation options for touching one carrier, used when a step does not
/// prescribe the side.
fn free_targets(g: &GenCircle) -> Vec<TangentTarget> {
    match g {
        GenCircle::Circle(c) => vec![
            TangentTarget::Circle { circle: *c, orientation: TangencyOrientation::External },
            TangentTarget::Circle { circle: *c, orientation: TangencyOrientation::Internal },
        ],
        GenCircle::Line(l) => vec![
            TangentTarget::Line { line: *l, side: 1.0 },
            TangentTarget::Line { line: *l, side: -1.0 },
        ],
    }
}

/// Steiner's construction for three cycles given by their carriers:
/// (1) swap map per pair, (2) auxiliary circle per cycle touching the two
/// reference cycles on its side, (3) tangent cycle through each auxiliary
/// touch point, (4) the Malfatti cycle for each index as the common
/// touching cycle of two tangent cycles and two given cycles.
pub fn steiner_cycles(given: &[Cycle; 3], tol: f64) -> Result<MalfattiCycleSystem, SteinerError> {
    let mut trace = SteinerTrace::default();
    let cert_tol = tol.max(1e-8);
    reject_overlap(given, tol)?;

    let carriers = [given[0].carrier, given[1].carrier, given[2].carrier];
    let samples = [
        sample_on(&carriers[0]),
        sample_on(&carriers[1]),
        sample_on(&carriers[2]),
    ];

    // Step 1: swap maps and their reference cycles.
    let mut refs: Vec<GenCircle> = Vec::with_capacity(3);
    let mut maps: Vec<InversiveMap> = Vec::with_capacity(3);
    for (i, j) in PAIRS {
        let map = swap_map(&carriers[i], &carriers[j], Some((samples[i], samples[j])), tol)?;
        let name = format!("swap map {}{}", i + 1, j + 1);
        trace.map(&name, &map);
        let mismatch = carrier_mismatch(&map.apply(&carriers[i], tol), &carriers[j]);
        trace.check(&format!("{name} exchanges the pair"), mismatch, 1e-8);
        if mismatch > 1e-8 {
            return Err(SteinerError::InvariantViolated("swap map fails to exchange the pair"));
        }
        let reference = map.reference().ok_or(SteinerError::SelectionExhausted(
            "swap map has no real reference cycle",
        ))?;
        // The reference cycle separates the pair.
        let sep = side_value(&reference, samples[i]) * side_value(&reference, samples[j]);
        trace.check(
            &format!("reference {}{} separates the pair", i + 1, j + 1),
            sep.max(0.0),
            tol.max(1e-12),
        );
        if sep >= 0.0 {
            return Err(SteinerError::InvariantViolated(
                "swap reference fails to separate the pair",
            ));
        }
        trace.carrier(&format!("inversion cycle {}{}", i + 1, j + 1), reference);
        refs.push(reference);
        maps.push(map);
    }

    // Step 2: auxiliary circle per given cycle.
    let mut aux: Vec<Circle> = Vec::with_capacity(3);
    let mut touch_on_given: Vec<Vec2> = Vec::with_capacity(3);
    for j in 0..3 {
        let p_prev = (j + 2) % 3; // pair (j-1, j)
        let p_next = j; // pair (j, j+1)
        let t1 = side_target(&refs[p_prev], samples[j]);
        let t2 = side_target(&refs[p_next], samples[j]);
        let t3 = external_target(&carriers[j], [samples[(j + 1) % 3], samples[(j + 2) % 3]])?;
        let cands = tangent_circles_to_three(&[t1, t2, t3], tol);
        let chosen = cands
            .into_iter()
            .find(|c| {
                same_side(c, &refs[p_prev], samples[j]) && same_side(c, &refs[p_next], samples[j])
            })
            .ok_or(SteinerError::SelectionExhausted("auxiliary circle"))?;
        let (touch, gap) = carrier_tangency(&GenCircle::Circle(chosen), &carriers[j])
            .ok_or(SteinerError::InvariantViolated("auxiliary circle misses its cycle"))?;
        trace.carrier(&format!("auxiliary k_{}", j + 1), GenCircle::Circle(chosen));
        trace.point(&format!("P_{}", j + 1), touch);
        trace.check(&format!("k_{} touches its cycle", j + 1), gap, 1e-8);
        if gap > 1e-8 {
            return Err(SteinerError::InvariantViolated("auxiliary tangency failed"));
        }
        aux.push(chosen);
        touch_on_given.push(touch);
    }

    // Step 3: candidate tangent cycles per pair, through the opposite
    // auxiliary touch point. Internal-style candidates come first in the
    // scan order: mixed orientations, then touch points close together
    // (the collapsed tangent of a touching pair has coincident touch
    // points).
    let mut line_candidates: Vec<Vec<GenCircle>> = Vec::with_capacity(3);
    for (p, (i, j)) in PAIRS.into_iter().enumerate() {
        let through = touch_on_given[third(p)];
        let mut cands = apollonius_through_point_all(through, &aux[i], &aux[j], tol)
            .map_err(|_| SteinerError::SelectionExhausted("tangent cycle through point"))?;
        let key = |c: &crate::apollonius::PointTangentSolution| {
            (
                (c.orientations[0] == c.orientations[1]) as u8,
                c.touch_points[0].dist(c.touch_points[1]),
            )
        };
        cands.sort_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
        });
        if cands.is_empty() {
            return Err(SteinerError::SelectionExhausted("tangent cycle through point"));
        }
        line_candidates.push(cands.into_iter().map(|c| c.circle).collect());
    }

    // Step 4 with a global assignment scan: for each combination of
    // tangent-cycle candidates, solve for the three Malfatti cycles on
    // {l_prev, l_next, c_i} and verify the fourth tangency to c_k; the
    // first fully certified combination wins.
    let mut combos: Vec<[usize; 3]> = Vec::new();
    for a in 0..line_candidates[0].len() {
        for b in 0..line_candidates[1].len() {
            for c in 0..line_candidates[2].len() {
                combos.push([a, b, c]);
            }
        }
    }
    let mut last_failure = SteinerError::SelectionExhausted("Malfatti cycle assignment");
    for combo in combos {
        let lines: [&GenCircle; 3] = [
            &line_candidates[0][combo[0]],
            &line_candidates[1][combo[1]],
            &line_candidates[2][combo[2]],
        ];
        let (outputs, fourth_residuals) = match finish_from_lines(&carriers, samples, lines, tol)
        {
            Ok(v) => v,
            Err(e) => {
                last_failure = e;
                continue;
            }
        };
        let mut attempt = trace.clone();
        for (p, (i, j)) in PAIRS.into_iter().enumerate() {
            attempt.carrier(&format!("tangent cycle l_{}{}", i + 1, j + 1), *lines[p]);
            let through = touch_on_given[third(p)];
            let inc = match lines[p] {
                GenCircle::Circle(c) => (through.dist(c.center) - c.r).abs(),
                GenCircle::Line(l) => l.signed_dist(through).abs(),
            };
            attempt.check(
                &format!("l_{}{} passes through P_{}", i + 1, j + 1, third(p) + 1),
                inc,
                1e-8,
            );
        }
        for (j, cy) in outputs.iter().enumerate() {
            attempt.cycle(&format!("m_{}", j + 1), cy);
            attempt.check(&format!("m_{} fourth tangency", j + 1), fourth_residuals[j], 1e-8);
        }
        attempt.given = given.to_vec();
        attempt.aux_carriers = aux.iter().map(|c| GenCircle::Circle(*c)).collect();
        attempt.tangent_carriers = lines.iter().map(|g| **g).collect();
        attempt.touch_on_given = touch_on_given.clone();
        attempt.swap_maps = maps.clone();
        match certify_system(outputs, given, attempt, cert_tol) {
            Ok(sys) => return Ok(sys),
            Err(e) => last_failure = e,
        }
    }
    Err(last_failure)
}

/// Step 4 for one choice of tangent cycles: build all three Malfatti
/// cycles or report why the choice fails.
fn finish_from_lines(
    carriers: &[GenCircle; 3],
    samples: [Vec2; 3],
    lines: [&GenCircle; 3],
    tol: f64,
) -> Result<([Cycle; 3], [f64; 3]), SteinerError> {
    let mut outputs: Vec<Cycle> = Vec::with_capacity(3);
    let mut fourth = [0.0f64; 3];
    for j in 0..3 {
        let (i, k) = ((j + 1) % 3, (j + 2) % 3);
        let l_prev = lines[(j + 2) % 3]; // pair (j-1, j)
        let l_next = lines[j]; // pair (j, j+1)
        let t_given = external_target(&carriers[i], [samples[j], samples[k]])?;
        let mut best: Option<(Circle, f64)> = None;
        for o1 in free_targets(l_prev) {
            for o2 in free_targets(l_next) {
                for cand in tangent_circles_to_three(&[o1, o2, t_given], tol) {
                    // Must touch the fourth cycle too, from the right side.
                    let Some((_, gap)) = carrier_tangency(&GenCircle::Circle(cand), &carriers[k])
                    else {
                        continue;
                    };
                    if gap > 1e-8 {
                        continue;
                    }
                    let side_k = side_value(&carriers[k], cand.center)
                        * side_value(&carriers[k], samples[j]);
                    if side_k <= 0.0 {
                        continue;
                    }
                    // Skip degenerate echoes of the inputs.
                    if carriers
                        .iter()
                        .any(|c| carrier_mismatch(&GenCircle::Circle(cand), c) < 1e-7)
                    {
                        continue;
                    }
                    if best.as_ref().map_or(true, |(b, _)| cand.r < b.r) {
                        best = Some((cand, gap));
                    }
                }
            }
        }
        let (circle, gap) =
            best.ok_or(SteinerError::SelectionExhausted("Malfatti cycle candidates"))?;
        fourth[j] = gap;
        outputs.push(build_cycle(GenCircle::Circle(circle), tol)?);
    }
    Ok((outputs.try_into().expect("three outputs"), fourth))
}

/// Certify every touching of a finished system and assemble the result.
fn certify_system(
    cycles: [Cycle; 3],
    given: &[Cycle],
    trace: SteinerTrace,
    cert_tol: f64,
) -> Result<MalfattiCycleSystem, SteinerError> {
    let mut trace = trace;
    // The solution consists of three distinct cycles, none of them echoing
    // a given cycle.
    for (i, j) in PAIRS {
        if carrier_mismatch(&cycles[i].carrier, &cycles[j].carrier) < 1e-7 {
            return Err(SteinerError::InvariantViolated("output cycles coincide"));
        }
    }
    for c in &cycles {
        if given.iter().any(|g| carrier_mismatch(&c.carrier, &g.carrier) < 1e-7) {
            return Err(SteinerError::InvariantViolated("output echoes a given cycle"));
        }
    }
    let mut mutual: Vec<TangencyCertificate> = Vec::with_capacity(3);
    for (i, j) in PAIRS {
        let cert = cycles_touching(&cycles[i], &cycles[j], cert_tol).ok_or(
            CycleError::CertificationFailed("mutual tangency of Malfatti cycles"),
        )?;
        trace.check(
            &format!("mutual contact {}{}", i + 1, j + 1),
            cert.residual,
            cert_tol,
        );
        mutual.push(cert);
    }
    let assignment = [[1usize, 2], [2, 0], [0, 1]];
    let mut contacts: Vec<[TangencyCertificate; 2]> = Vec::with_capacity(3);
    for j in 0..3 {
        let mut pair = Vec::with_capacity(2);
        for &g in &assignment[j] {
            let cert = cycles_touching(&cycles[j], &given[g], cert_tol).ok_or(
                CycleError::CertificationFailed("contact with a given cycle"),
            )?;
            trace.check(
                &format!("m_{} touches given {}", j + 1, g + 1),
                cert.residual,
                cert_tol,
            );
            pair.push(cert);
        }
        contacts.push(pair.try_into().expect("two contacts"));
    }
    Ok(MalfattiCycleSystem {
        cycles,
        mutual: mutual.try_into().expect("three certificates"),
        given_contacts: contacts.try_into().expect("three contact pairs"),
        given_assignment: assignment,
        trace,
    })
}
