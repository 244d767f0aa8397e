//! Scene execution: dispatch to the trigonometric and constructive
//! pipelines, assemble the deterministic report and figure, and reduce all
//! residuals to a single pass/fail verdict for the process exit status.
//!
//! Tolerances: the numeric kernel always runs at [`crate::DEFAULT_TOLERANCE`];
//! the acceptance gate applied to certificate residuals defaults to 1e-8
//! (the certification gate of the constructions) and can be overridden per
//! scene (`tol=`) or per invocation (`--tol`). Cross-method agreement is
//! gated at `max(accept, 1e-7)`.

use crate::cycles::{Cycle, CycleError, TangencyCertificate};
use crate::disk::hyp_distance;
use crate::geom::{GenCircle, Vec2};
use crate::hart::{hart_verify, VerificationMode, VerificationReport};
use crate::inversive::PairSign;
use crate::render::render_svg;
use crate::report::{describe_certificate, describe_cycle, fmt_num, fmt_point, ReportDoc};
use crate::scene::{realize_cycles, CycleSpec, Scene, SceneMode};
use crate::schellbach::{analytic_circles, solve, SchellbachError, TriangleSides};
use crate::steiner::{steiner_cycles, steiner_triangle, MalfattiCycleSystem, SteinerError, PAIRS};
use crate::{apollonius, cycles, DEFAULT_TOLERANCE};

/// Exit codes shared by the library driver and the binary.
pub const EXIT_RESIDUAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Acceptance gate override (CLI `--tol`); beats the scene's `tol=`.
    pub tolerance: Option<f64>,
    /// Append the eight-fold Apollonius enumeration to the report.
    pub enumerate_apollonius: bool,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: String,
    pub svg: String,
    /// True exactly when every gated residual passed.
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub exit_code: i32,
    pub message: String,
}

impl std::fmt::Display for RunFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for RunFailure {}

fn precondition(message: impl Into<String>) -> RunFailure {
    RunFailure { exit_code: EXIT_PRECONDITION, message: message.into() }
}

fn numerical(message: impl Into<String>) -> RunFailure {
    RunFailure { exit_code: EXIT_NUMERICAL, message: message.into() }
}

impl From<SteinerError> for RunFailure {
    fn from(e: SteinerError) -> RunFailure {
        match e {
            SteinerError::OverlappingInteriors => precondition(format!("precondition: {e}")),
            other => numerical(format!("construction failed: {other}")),
        }
    }
}

impl From<SchellbachError> for RunFailure {
    fn from(e: SchellbachError) -> RunFailure {
        numerical(format!("trigonometric solver failed: {e}"))
    }
}

impl From<CycleError> for RunFailure {
    fn from(e: CycleError) -> RunFailure {
        match e {
            CycleError::ViolatedTriangleInequality => precondition(format!("precondition: {e}")),
            other => numerical(format!("cycle construction failed: {other}")),
        }
    }
}

/// Collects gated residuals so the verdict and the report agree exactly.
struct Gatekeeper {
    accept: f64,
    failed: bool,
}

impl Gatekeeper {
    fn new(accept: f64) -> Gatekeeper {
        Gatekeeper { accept, failed: false }
    }

    fn judge(&mut self, residual: f64, gate: f64) -> &'static str {
        if residual <= gate {
            "pass"
        } else {
            self.failed = true;
            "FAIL"
        }
    }

    fn cert_line(&mut self, cert: &TangencyCertificate) -> String {
        let verdict = self.judge(cert.residual, self.accept);
        format!("{} ({verdict})", describe_certificate(cert))
    }
}

fn echo_spec(spec: &CycleSpec) -> String {
    match *spec {
        CycleSpec::Circle { center, radius } => {
            format!("kind=circle center={} r={}", fmt_point(center), fmt_num(radius))
        }
        CycleSpec::Paracycle { ideal_deg, radius } => {
            format!("kind=paracycle ideal={} r={}", fmt_num(ideal_deg), fmt_num(radius))
        }
        CycleSpec::Hypercycle { from_deg, to_deg, distance, side } => format!(
            "kind=hypercycle from={} to={} dist={} side={}",
            fmt_num(from_deg),
            fmt_num(to_deg),
            fmt_num(distance),
            fmt_num(side)
        ),
    }
}

fn certificate_section(
    doc: &mut ReportDoc,
    gk: &mut Gatekeeper,
    sys: &MalfattiCycleSystem,
) {
    doc.section("certificates");
    for (p, (i, j)) in PAIRS.into_iter().enumerate() {
        doc.kv(
            &format!("mutual {}-{}", i + 1, j + 1),
            gk.cert_line(&sys.mutual[p]),
        );
    }
    for (j, pair) in sys.given_assignment.iter().enumerate() {
        for (slot, &g) in pair.iter().enumerate() {
            doc.kv(
                &format!("contact m{}-g{}", j + 1, g + 1),
                gk.cert_line(&sys.given_contacts[j][slot]),
            );
        }
    }
}

fn hart_section(doc: &mut ReportDoc, gk: &mut Gatekeeper, report: &VerificationReport) {
    doc.section("hart verification");
    doc.kv(
        "mode",
        match report.mode {
            VerificationMode::Full => "full",
            VerificationMode::CarrierLevel => "carrier-level",
        },
    );
    if let Some(note) = &report.note {
        doc.kv("note", note);
    }
    for check in &report.checks {
        let verdict = gk.judge(check.residual, check.tolerance);
        doc.kv(
            &format!("check: {}", check.name),
            format!("{} ({verdict})", fmt_num(check.residual)),
        );
    }
}

fn touch_points(sys: &MalfattiCycleSystem) -> Vec<Vec2> {
    let mut pts: Vec<Vec2> = sys.mutual.iter().map(|c| c.point.v()).collect();
    for pair in &sys.given_contacts {
        for cert in pair {
            pts.push(cert.point.v());
        }
    }
    pts
}

fn sign_letters(signs: &[PairSign; 3]) -> String {
    signs
        .iter()
        .map(|s| match s {
            PairSign::External => 'E',
            PairSign::Internal => 'I',
        })
        .collect()
}

fn apollonius_section(doc: &mut ReportDoc, given: &[Cycle; 3], tol: f64) {
    doc.section("apollonius enumeration");
    let circles: Vec<_> = given.iter().filter_map(|c| c.carrier.as_circle()).collect();
    if circles.len() != 3 {
        doc.kv("note", "not applicable: a given carrier is not a circle");
        return;
    }
    let sols = apollonius::gergonne_enumerate(&circles[0], &circles[1], &circles[2], tol);
    doc.kv("count", sols.len().to_string());
    for (i, sol) in sols.iter().enumerate() {
        let carrier = match &sol.circle {
            GenCircle::Circle(c) => {
                format!("circle center={} r={}", fmt_point(c.center), fmt_num(c.r))
            }
            GenCircle::Line(l) => {
                let l = l.canonical();
                format!("line normal={} offset={}", fmt_point(l.normal), fmt_num(l.offset))
            }
        };
        doc.kv(
            &format!("solution {}", i + 1),
            format!(
                "signs={} {} residual={}",
                sign_letters(&sol.selection.axis),
                carrier,
                fmt_num(sol.residual)
            ),
        );
    }
}

fn verdict_section(doc: &mut ReportDoc, gk: &Gatekeeper) -> bool {
    doc.section("verdict");
    doc.kv("passed", if gk.failed { "false" } else { "true" });
    !gk.failed
}

/// Runs a parsed scene end to end. The returned report and figure are
/// byte-deterministic for identical inputs; `passed` mirrors the report's
/// verdict section.
pub fn run(scene: &Scene, opts: &RunOptions) -> Result<RunOutput, RunFailure> {
    let kernel = DEFAULT_TOLERANCE;
    let accept = opts.tolerance.or(scene.tolerance).unwrap_or(1e-8);
    if !(accept > 0.0 && accept.is_finite()) {
        return Err(precondition("acceptance tolerance must be positive"));
    }
    let mut doc = ReportDoc::new();
    let mut gk = Gatekeeper::new(accept);

    match &scene.mode {
        SceneMode::Triangle { a, b, c } => {
            doc.section("scene");
            doc.kv("mode", "triangle");
            doc.kv_num("a", *a);
            doc.kv_num("b", *b);
            doc.kv_num("c", *c);
            doc.kv_num("acceptance", accept);

            let sides = TriangleSides { a: *a, b: *b, c: *c };
            let sol = solve(&sides)?;
            let tri = cycles::embed_triangle(*a, *b, *c, kernel)?;
            let analytic = analytic_circles(&tri, &sol, kernel)?;
            let sys = steiner_triangle(&tri, kernel)?;

            doc.section("triangle solution");
            doc.kv_num("s", sol.derived.s);
            doc.kv_num("l", sol.derived.l);
            doc.kv_num("m", sol.derived.m);
            doc.kv_num("n", sol.derived.n);
            doc.kv_num("phi", sol.aux.phi);
            doc.kv_num("chi", sol.aux.chi);
            doc.kv_num("psi", sol.aux.psi);
            doc.kv_num("lambda", sol.subsidiary.lam);
            doc.kv_num("mu", sol.subsidiary.mu);
            doc.kv_num("nu", sol.subsidiary.nu);
            doc.kv_num("eta+zeta", sol.pair_sums.eta_zeta);
            doc.kv_num("zeta+xi", sol.pair_sums.zeta_xi);
            doc.kv_num("xi+eta", sol.pair_sums.xi_eta);
            doc.kv_num("xi", sol.xi);
            doc.kv_num("eta", sol.eta);
            doc.kv_num("zeta", sol.zeta);
            doc.kv_num("x", sol.x);
            doc.kv_num("y", sol.y);
            doc.kv_num("z", sol.z);
            // The solver keeps signed defects; gate their magnitudes.
            for (i, r) in sol.residuals.iter().enumerate() {
                let verdict = gk.judge(r.abs(), accept);
                doc.kv(
                    &format!("fundamental residual {}", i + 1),
                    format!("{} ({verdict})", fmt_num(*r)),
                );
            }
            for (i, r) in sol.difference_residuals.iter().enumerate() {
                let verdict = gk.judge(r.abs(), accept);
                doc.kv(
                    &format!("difference residual {}", i + 1),
                    format!("{} ({verdict})", fmt_num(*r)),
                );
            }
            doc.kv("polish iterations", sol.polish_iterations.to_string());

            // Independent routes must land on the same three circles.
            let agree_gate = accept.max(1e-7);
            doc.section("agreement");
            for (i, name) in ["A", "B", "C"].into_iter().enumerate() {
                let (sc, sr) = sys.cycles[i]
                    .center_radius()
                    .map_err(RunFailure::from)?;
                let dc = hyp_distance(sc, analytic[i].center);
                let dr = (sr - analytic[i].radius).abs();
                let vc = gk.judge(dc, agree_gate);
                let vr = gk.judge(dr, agree_gate);
                doc.kv(
                    &format!("circle {name}"),
                    format!(
                        "center delta={} ({vc}) radius delta={} ({vr})",
                        fmt_num(dc),
                        fmt_num(dr)
                    ),
                );
            }

            doc.section("outputs");
            for (i, c) in sys.cycles.iter().enumerate() {
                doc.kv(&format!("output {}", i + 1), describe_cycle(c));
            }

            certificate_section(&mut doc, &mut gk, &sys);

            let hart = hart_verify(&sys, accept)
                .map_err(|e| numerical(format!("verification failed: {e}")))?;
            hart_section(&mut doc, &mut gk, &hart);

            if opts.enumerate_apollonius {
                doc.section("apollonius enumeration");
                doc.kv("note", "not applicable: triangle scene");
            }

            let passed = verdict_section(&mut doc, &gk);
            let svg = render_svg(&sys.trace.given, &sys.cycles, &touch_points(&sys));
            Ok(RunOutput { report: doc.render(), svg, passed })
        }
        SceneMode::Cycles(specs) => {
            doc.section("scene");
            doc.kv("mode", "cycles");
            for (i, spec) in specs.iter().enumerate() {
                doc.kv(&format!("cycle {}", i + 1), echo_spec(spec));
            }
            doc.kv_num("acceptance", accept);

            let given = realize_cycles(specs, kernel)?;
            let sys = steiner_cycles(&given, kernel)?;

            doc.section("given");
            for (i, c) in given.iter().enumerate() {
                doc.kv(&format!("given {}", i + 1), describe_cycle(c));
            }

            doc.section("outputs");
            for (i, c) in sys.cycles.iter().enumerate() {
                doc.kv(&format!("output {}", i + 1), describe_cycle(c));
            }

            certificate_section(&mut doc, &mut gk, &sys);

            let hart = hart_verify(&sys, accept)
                .map_err(|e| numerical(format!("verification failed: {e}")))?;
            hart_section(&mut doc, &mut gk, &hart);

            if opts.enumerate_apollonius {
                apollonius_section(&mut doc, &given, kernel);
            }

            let passed = verdict_section(&mut doc, &gk);
            let svg = render_svg(&given, &sys.cycles, &touch_points(&sys));
            Ok(RunOutput { report: doc.render(), svg, passed })
        }
    }
}
