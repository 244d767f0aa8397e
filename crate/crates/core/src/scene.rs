//! Scene files: a line-oriented `key=value` description of a problem
//! instance. One line per statement, `#` starts a comment. A scene is
//! either one `triangle` line or exactly three `cycle` lines, plus an
//! optional `tol=<eps>` override:
//!
//! ```text
//! # equilateral triangle, side 1
//! triangle a=1 b=1 c=1
//! ```
//!
//! ```text
//! cycle kind=circle center=(0.2,0) r=0.3
//! cycle kind=paracycle ideal=135 r=0.25
//! cycle kind=hypercycle from=-30 to=-150 dist=0.4 side=1
//! tol=1e-8
//! ```
//!
//! Circle descriptors give the hyperbolic center (disk coordinates) and
//! hyperbolic radius. Paracycles give the ideal point as a boundary angle
//! in degrees and the Euclidean radius of the carrier. Hypercycles give the
//! ideal endpoints of the base geodesic as boundary angles, the hyperbolic
//! distance from the base, and which branch: `side=1` lies to the left of
//! the base traversed from `from` to `to`, `side=-1` to the right.

use crate::cycles::{build_cycle, Cycle, CycleError};
use crate::disk::{circle_from_center_radius, exp_from, HPoint};
use crate::geom::{solve2, through_three_points, Circle, GenCircle, Line, Vec2};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SceneError {
    #[error("scene:{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("scene:{line}:{column}: {message}")]
    Semantic {
        line: usize,
        column: usize,
        message: String,
    },
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> SceneError {
    SceneError::Syntax { line, column, message: message.into() }
}

fn semantic(line: usize, column: usize, message: impl Into<String>) -> SceneError {
    SceneError::Semantic { line, column, message: message.into() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CycleSpec {
    /// Hyperbolic center and radius.
    Circle { center: Vec2, radius: f64 },
    /// Ideal point (boundary angle, degrees) and Euclidean carrier radius.
    Paracycle { ideal_deg: f64, radius: f64 },
    /// Base geodesic by ideal endpoints (boundary angles, degrees),
    /// hyperbolic distance, and branch side relative to from->to travel.
    Hypercycle {
        from_deg: f64,
        to_deg: f64,
        distance: f64,
        side: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneMode {
    Triangle { a: f64, b: f64, c: f64 },
    Cycles([CycleSpec; 3]),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub mode: SceneMode,
    pub tolerance: Option<f64>,
}

/// A token with the 1-based column of its first byte.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

struct KeyValues<'a> {
    line: usize,
    entries: Vec<(usize, &'a str, &'a str)>,
    used: Vec<bool>,
}

impl<'a> KeyValues<'a> {
    fn parse(line_no: usize, tokens: &[(usize, &'a str)]) -> Result<KeyValues<'a>, SceneError> {
        let mut entries = Vec::new();
        for &(col, tok) in tokens {
            let Some((k, v)) = tok.split_once('=') else {
                return Err(syntax(line_no, col, format!("expected key=value, found `{tok}`")));
            };
            if k.is_empty() || v.is_empty() {
                return Err(syntax(line_no, col, format!("expected key=value, found `{tok}`")));
            }
            if entries.iter().any(|&(_, key, _)| key == k) {
                return Err(semantic(line_no, col, format!("duplicate key `{k}`")));
            }
            entries.push((col, k, v));
        }
        let used = vec![false; entries.len()];
        Ok(KeyValues { line: line_no, entries, used })
    }

    fn take(&mut self, key: &str) -> Option<(usize, &'a str)> {
        for (i, &(col, k, v)) in self.entries.iter().enumerate() {
            if k == key {
                self.used[i] = true;
                return Some((col, v));
            }
        }
        None
    }

    fn number(&mut self, key: &str) -> Result<f64, SceneError> {
        let (col, raw) = self
            .take(key)
            .ok_or_else(|| syntax(self.line, 1, format!("missing key `{key}`")))?;
        raw.parse::<f64>()
            .map_err(|_| syntax(self.line, col, format!("`{raw}` is not a number")))
            .and_then(|v| {
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(semantic(self.line, col, format!("`{key}` must be finite")))
                }
            })
    }

    fn number_or(&mut self, key: &str, default: f64) -> Result<f64, SceneError> {
        match self.take(key) {
            None => Ok(default),
            Some((col, raw)) => raw
                .parse::<f64>()
                .map_err(|_| syntax(self.line, col, format!("`{raw}` is not a number"))),
        }
    }

    fn point(&mut self, key: &str) -> Result<(usize, Vec2), SceneError> {
        let (col, raw) = self
            .take(key)
            .ok_or_else(|| syntax(self.line, 1, format!("missing key `{key}`")))?;
        let inner = raw
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| syntax(self.line, col, format!("`{raw}` is not a point `(x,y)`")))?;
        let (xs, ys) = inner
            .split_once(',')
            .ok_or_else(|| syntax(self.line, col, format!("`{raw}` is not a point `(x,y)`")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| syntax(self.line, col, format!("`{s}` is not a number")))
        };
        Ok((col, Vec2::new(parse(xs)?, parse(ys)?)))
    }

    fn finish(&self) -> Result<(), SceneError> {
        for (i, &(col, k, _)) in self.entries.iter().enumerate() {
            if !self.used[i] {
                return Err(semantic(self.line, col, format!("unknown key `{k}`")));
            }
        }
        Ok(())
    }
}

pub fn parse_scene(text: &str) -> Result<Scene, SceneError> {
    let mut triangle: Option<SceneMode> = None;
    let mut cycles: Vec<CycleSpec> = Vec::new();
    let mut tolerance = None;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens = tokenize(content);
        let Some(&(col0, head)) = tokens.first() else { continue };
        match head {
            "triangle" => {
                if triangle.is_some() {
                    return Err(semantic(line_no, col0, "a scene holds exactly one triangle"));
                }
                let mut kv = KeyValues::parse(line_no, &tokens[1..])?;
                let a = kv.number("a")?;
                let b = kv.number("b")?;
                let c = kv.number("c")?;
                kv.finish()?;
                if !(a > 0.0 && b > 0.0 && c > 0.0) {
                    return Err(semantic(line_no, col0, "side lengths must be positive"));
                }
                if a >= b + c || b >= c + a || c >= a + b {
                    return Err(semantic(
                        line_no,
                        col0,
                        format!("sides a={a} b={b} c={c} violate the triangle inequality"),
                    ));
                }
                triangle = Some(SceneMode::Triangle { a, b, c });
            }
            "cycle" => {
                let mut kv = KeyValues::parse(line_no, &tokens[1..])?;
                let (kind_col, kind) = kv
                    .take("kind")
                    .ok_or_else(|| syntax(line_no, col0, "cycle line needs kind=..."))?;
                let spec = match kind {
                    "circle" => {
                        let (ccol, center) = kv.point("center")?;
                        let radius = kv.number("r")?;
                        if center.norm() >= 1.0 {
                            return Err(semantic(
                                line_no,
                                ccol,
                                "hyperbolic center must lie inside the unit disk",
                            ));
                        }
                        if radius <= 0.0 {
                            return Err(semantic(line_no, ccol, "radius must be positive"));
                        }
                        CycleSpec::Circle { center, radius }
                    }
                    "paracycle" => {
                        let ideal_deg = kv.number("ideal")?;
                        let radius = kv.number("r")?;
                        if !(radius > 0.0 && radius < 1.0) {
                            return Err(semantic(
                                line_no,
                                kind_col,
                                "paracycle carrier radius must lie in (0, 1)",
                            ));
                        }
                        CycleSpec::Paracycle { ideal_deg, radius }
                    }
                    "hypercycle" => {
                        let from_deg = kv.number("from")?;
                        let to_deg = kv.number("to")?;
                        let distance = kv.number("dist")?;
                        let side = kv.number_or("side", 1.0)?;
                        if side != 1.0 && side != -1.0 {
                            return Err(semantic(line_no, kind_col, "side must be 1 or -1"));
                        }
                        if distance < 0.0 {
                            return Err(semantic(line_no, kind_col, "dist must be nonnegative"));
                        }
                        let gap = ((from_deg - to_deg).rem_euclid(360.0)).min(
                            (to_deg - from_deg).rem_euclid(360.0),
                        );
                        if gap < 1e-9 {
                            return Err(semantic(
                                line_no,
                                kind_col,
                                "base endpoints must be distinct ideal points",
                            ));
                        }
                        CycleSpec::Hypercycle { from_deg, to_deg, distance, side }
                    }
                    other => {
                        return Err(semantic(
                            line_no,
                            kind_col,
                            format!("unknown cycle kind `{other}`"),
                        ));
                    }
                };
                kv.finish()?;
                cycles.push(spec);
            }
            tok if tok.starts_with("tol=") => {
                let raw = &tok[4..];
                let v: f64 = raw
                    .parse()
                    .map_err(|_| syntax(line_no, col0, format!("`{raw}` is not a number")))?;
                if !(v > 0.0 && v.is_finite()) {
                    return Err(semantic(line_no, col0, "tol must be a positive number"));
                }
                tolerance = Some(v);
            }
            other => {
                return Err(syntax(line_no, col0, format!("unknown directive `{other}`")));
            }
        }
    }

    match (triangle, cycles.len()) {
        (Some(mode), 0) => Ok(Scene { mode, tolerance }),
        (None, 3) => {
            let arr: [CycleSpec; 3] = [cycles[0], cycles[1], cycles[2]];
            Ok(Scene { mode: SceneMode::Cycles(arr), tolerance })
        }
        (Some(_), n) if n > 0 => Err(semantic(
            last_line,
            1,
            "a scene is either one triangle or three cycles, not both",
        )),
        (None, n) => Err(semantic(
            last_line.max(1),
            1,
            format!("a cycle scene needs exactly three cycle lines, found {n}"),
        )),
        (Some(_), _) => unreachable!(),
    }
}

fn ideal_point(deg: f64) -> Vec2 {
    Vec2::from_angle(deg.to_radians())
}

/// Carrier of the geodesic with the two given ideal endpoints: the circle
/// orthogonal to the model boundary through both, or a diameter when they
/// are antipodal.
fn geodesic_between_ideals(p1: Vec2, p2: Vec2) -> GenCircle {
    // Orthogonality |o|^2 = r^2 + 1 with |p_i| = 1 reduces to o.p_i = 1.
    match solve2(p1.x, p1.y, p2.x, p2.y, 1.0, 1.0) {
        Some(o) => GenCircle::Circle(Circle::new(o, (o.norm2() - 1.0).max(0.0).sqrt())),
        None => {
            let n = (p2 - p1).perp();
            GenCircle::Line(Line::new(n, n.dot(p1)))
        }
    }
}

impl CycleSpec {
    /// Builds the model object the descriptor denotes.
    pub fn realize(&self, tol: f64) -> Result<Cycle, CycleError> {
        match *self {
            CycleSpec::Circle { center, radius } => {
                let c = HPoint::from_vec(center)?;
                let carrier = circle_from_center_radius(c, radius)?;
                build_cycle(GenCircle::Circle(carrier), tol)
            }
            CycleSpec::Paracycle { ideal_deg, radius } => {
                let u = ideal_point(ideal_deg);
                let carrier = Circle::new(u * (1.0 - radius), radius);
                build_cycle(GenCircle::Circle(carrier), tol)
            }
            CycleSpec::Hypercycle { from_deg, to_deg, distance, side } => {
                let p1 = ideal_point(from_deg);
                let p2 = ideal_point(to_deg);
                let base = geodesic_between_ideals(p1, p2);
                if distance == 0.0 {
                    return build_cycle(base, tol);
                }
                let apex = base.project(Vec2::ZERO);
                let tangent = match &base {
                    GenCircle::Circle(c) => (apex - c.center).perp(),
                    GenCircle::Line(l) => l.direction(),
                };
                // Orient travel from p1 toward p2; side=1 walks to its left.
                let travel = if tangent.dot(p2 - p1) >= 0.0 { tangent } else { -tangent };
                let normal = travel.perp().normalized() * side;
                let start = HPoint::from_vec(apex)?;
                let branch_point = exp_from(start, normal, distance);
                let carrier = through_three_points(p1, p2, branch_point.v(), 1e-12)
                    .ok_or(CycleError::Degenerate("hypercycle branch through ideal points"))?;
                build_cycle(carrier, tol)
            }
        }
    }
}

/// Realizes all three descriptors of a cycles scene.
pub fn realize_cycles(specs: &[CycleSpec; 3], tol: f64) -> Result<[Cycle; 3], CycleError> {
    Ok([
        specs[0].realize(tol)?,
        specs[1].realize(tol)?,
        specs[2].realize(tol)?,
    ])
}
