//! Schellbach's trigonometric solution of the Malfatti problem for
//! hyperbolic triangles.
//!
//! Given side lengths, the three tangent lengths `x, y, z` (from each vertex
//! to the touch points of its Malfatti circle on the adjacent sides) satisfy
//! the fundamental system
//!
//! ```text
//! cosh(l) cosh(eta) cosh(zeta) / cosh(s/2)
//!     + sinh(l) sinh(eta) sinh(zeta) / sinh(s/2) = 1     (and cyclic)
//! ```
//!
//! in the substituted unknowns `xi = s/2 - x` etc., where `s` is the
//! perimeter half and `l = a - s/2`, `m = b - s/2`, `n = c - s/2`. The
//! system is eliminated in closed form through one subsidiary angle per
//! equation; a short Newton polish removes the last rounding error. The
//! final radii and centers follow from right-triangle relations at each
//! vertex.

use crate::cycles::{
    build_cycle, cycles_touching, embed_triangle, Cycle, CycleError, HTriangle,
    TangencyCertificate, Vertex,
};
use crate::disk::{circle_from_center_radius, exp_from, hyp_distance, initial_direction, HPoint};
use crate::geom::GenCircle;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SchellbachError {
    #[error("side lengths violate the triangle inequality")]
    ViolatedTriangleInequality,
    #[error("intermediate quantity left its domain: {0}")]
    ArgumentOutOfRange(&'static str),
    #[error("the trigonometric system has no real solution for these sides")]
    NoRealSolution,
    #[error("two distinct subsidiary-angle branches solve the system")]
    AmbiguousBranch,
    #[error("Newton polish failed to converge")]
    NoConvergence,
    #[error(transparent)]
    Cycle(#[from] CycleError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Perimeter half and the vertex excesses `l = a - s/2` (may be negative).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedQuantities {
    pub s: f64,
    pub l: f64,
    pub m: f64,
    pub n: f64,
}

/// One auxiliary angle per subsidiary equation:
/// `tanh(phi) = tanh(m) tanh(n) coth(s/2)` and cyclic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxiliaryAngles {
    pub phi: f64,
    pub chi: f64,
    pub psi: f64,
}

/// Subsidiary angles `lam, mu, nu`, one per fundamental equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsidiaryAngles {
    pub lam: f64,
    pub mu: f64,
    pub nu: f64,
}

/// The three pairwise sums of the substituted unknowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSums {
    /// `eta + zeta`
    pub eta_zeta: f64,
    /// `zeta + xi`
    pub zeta_xi: f64,
    /// `xi + eta`
    pub xi_eta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchellbachSolution {
    pub sides: TriangleSides,
    pub derived: DerivedQuantities,
    pub aux: AuxiliaryAngles,
    pub subsidiary: SubsidiaryAngles,
    pub pair_sums: PairSums,
    pub xi: f64,
    pub eta: f64,
    pub zeta: f64,
    /// Tangent length from vertex A along the adjacent sides.
    pub x: f64,
    pub y: f64,
    pub z: f64,
    /// Residuals of the three fundamental equations at the solution.
    pub residuals: [f64; 3],
    /// Residuals of the difference identities, an independent consistency
    /// check not used in the construction.
    pub difference_residuals: [f64; 3],
    pub polish_iterations: usize,
}

/// `acosh(1 + d)` evaluated without cancellation for small `d >= 0`.
fn acosh1p(d: f64) -> f64 {
    (d + (d * (2.0 + d)).sqrt()).ln_1p()
}

pub fn derived_quantities(sides: &TriangleSides) -> Result<DerivedQuantities, SchellbachError> {
    let TriangleSides { a, b, c } = *sides;
    if !(a > 0.0 && b > 0.0 && c > 0.0)
        || a >= b + c
        || b >= a + c
        || c >= a + b
        || !(a + b + c).is_finite()
    {
        return Err(SchellbachError::ViolatedTriangleInequality);
    }
    let s = (a + b + c) / 2.0;
    Ok(DerivedQuantities {
        s,
        l: a - s / 2.0,
        m: b - s / 2.0,
        n: c - s / 2.0,
    })
}

pub fn auxiliary_angles(d: &DerivedQuantities) -> Result<AuxiliaryAngles, SchellbachError> {
    let coth = 1.0 / (d.s / 2.0).tanh();
    let mk = |u: f64, v: f64| -> Result<f64, SchellbachError> {
        let t = u.tanh() * v.tanh() * coth;
        if t.abs() >= 1.0 {
            return Err(SchellbachError::ArgumentOutOfRange("auxiliary tanh argument"));
        }
        Ok(t.atanh())
    };
    Ok(AuxiliaryAngles {
        phi: mk(d.m, d.n)?,
        chi: mk(d.n, d.l)?,
        psi: mk(d.l, d.m)?,
    })
}

/// Solves one subsidiary equation
/// `cosh(lam) cosh(m) cosh(n) / cosh(s/2) - sinh(lam) sinh(m) sinh(n) / sinh(s/2) = 1`
/// as `lam = phi + sign * acosh(Q)`. Both signs satisfy this equation
/// identically; the returned value uses the requested sign and the caller
/// discriminates by the residual of the full fundamental system.
fn subsidiary_one(
    d: &DerivedQuantities,
    phi: f64,
    u: f64,
    v: f64,
    sign: f64,
) -> Result<f64, SchellbachError> {
    let h = d.s / 2.0;
    // Q - 1 without cancellation:
    // Q = cosh(h) cosh(phi) / (cosh u cosh v), expanded into products of
    // sinh factors of half-sums.
    let num = ((h + phi + u + v) / 2.0).sinh() * ((h + phi - u - v) / 2.0).sinh()
        + ((h - phi + u - v) / 2.0).sinh() * ((h - phi - u + v) / 2.0).sinh();
    let qm1 = num / (u.cosh() * v.cosh());
    if qm1 < -1e-12 {
        return Err(SchellbachError::NoRealSolution);
    }
    Ok(phi + sign * acosh1p(qm1.max(0.0)))
}

/// Subsidiary angles on the principal branch. See [`subsidiary_one`] for
/// the branch convention.
pub fn subsidiary_angles(
    d: &DerivedQuantities,
    aux: &AuxiliaryAngles,
) -> Result<SubsidiaryAngles, SchellbachError> {
    subsidiary_with_signs(d, aux, [1.0, 1.0, 1.0])
}

fn subsidiary_with_signs(
    d: &DerivedQuantities,
    aux: &AuxiliaryAngles,
    signs: [f64; 3],
) -> Result<SubsidiaryAngles, SchellbachError> {
    Ok(SubsidiaryAngles {
        lam: subsidiary_one(d, aux.phi, d.m, d.n, signs[0])?,
        mu: subsidiary_one(d, aux.chi, d.n, d.l, signs[1])?,
        nu: subsidiary_one(d, aux.psi, d.l, d.m, signs[2])?,
    })
}

/// Pair sums `eta + zeta` (and cyclic) from the subsidiary angles:
/// `cosh(eta + zeta) = cosh((s + lam - l)/2) / cosh((lam + l)/2)`.
pub fn pair_sums(d: &DerivedQuantities, sub: &SubsidiaryAngles) -> Result<PairSums, SchellbachError> {
    let one = |lam: f64, l: f64| -> Result<f64, SchellbachError> {
        // Ratio minus one as a product of sinh factors, fed to acosh1p.
        let delta = 2.0 * ((d.s + 2.0 * lam) / 4.0).sinh() * ((d.s - 2.0 * l) / 4.0).sinh()
            / ((lam + l) / 2.0).cosh();
        if delta < -1e-12 {
            return Err(SchellbachError::NoRealSolution);
        }
        Ok(acosh1p(delta.max(0.0)))
    };
    Ok(PairSums {
        eta_zeta: one(sub.lam, d.l)?,
        zeta_xi: one(sub.mu, d.m)?,
        xi_eta: one(sub.nu, d.n)?,
    })
}

/// One fundamental equation, written so that a root has value zero.
fn fundamental_eq(d: &DerivedQuantities, l: f64, u: f64, v: f64) -> f64 {
    let h = d.s / 2.0;
    l.cosh() * u.cosh() * v.cosh() / h.cosh() + l.sinh() * u.sinh() * v.sinh() / h.sinh() - 1.0
}

fn fundamental_residuals(d: &DerivedQuantities, xi: f64, eta: f64, zeta: f64) -> [f64; 3] {
    [
        fundamental_eq(d, d.l, eta, zeta),
        fundamental_eq(d, d.m, zeta, xi),
        fundamental_eq(d, d.n, xi, eta),
    ]
}

fn difference_residuals(
    d: &DerivedQuantities,
    sub: &SubsidiaryAngles,
    xi: f64,
    eta: f64,
    zeta: f64,
) -> [f64; 3] {
    let one = |lam: f64, l: f64, diff: f64| -> f64 {
        ((d.s - lam + l) / 2.0).cosh() / ((lam + l) / 2.0).cosh() - diff.cosh()
    };
    [
        one(sub.lam, d.l, eta - zeta),
        one(sub.mu, d.m, zeta - xi),
        one(sub.nu, d.n, xi - eta),
    ]
}

/// Newton polish of the fundamental system in `(xi, eta, zeta)` with the
/// analytic Jacobian. The closed-form start is already a root up to
/// rounding, so this converges in one or two steps when it moves at all.
fn polish(
    d: &DerivedQuantities,
    mut xi: f64,
    mut eta: f64,
    mut zeta: f64,
) -> (f64, f64, f64, usize) {
    let h = d.s / 2.0;
    let mut iters = 0;
    for _ in 0..50 {
        let f = fundamental_residuals(d, xi, eta, zeta);
        if f.iter().all(|r| r.abs() < 1e-15) {
            break;
        }
        iters += 1;
        let ch = h.cosh();
        let sh = h.sinh();
        let row = |l: f64, u: f64, v: f64| -> (f64, f64) {
            // Partial derivatives of one equation in (u, v).
            (
                l.cosh() * u.sinh() * v.cosh() / ch + l.sinh() * u.cosh() * v.sinh() / sh,
                l.cosh() * u.cosh() * v.sinh() / ch + l.sinh() * u.sinh() * v.cosh() / sh,
            )
        };
        let (a_eta, a_zeta) = row(d.l, eta, zeta);
        let (b_zeta, b_xi) = row(d.m, zeta, xi);
        let (c_xi, c_eta) = row(d.n, xi, eta);
        // J * delta = f with unknown order (xi, eta, zeta).
        let jac = [
            [0.0, a_eta, a_zeta],
            [b_xi, 0.0, b_zeta],
            [c_xi, c_eta, 0.0],
        ];
        let Some(delta) = solve3(&jac, &f) else { break };
        let cap = delta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let scale = if cap > 0.25 { 0.25 / cap } else { 1.0 };
        xi -= delta[0] * scale;
        eta -= delta[1] * scale;
        zeta -= delta[2] * scale;
        if cap * scale < 1e-16 {
            break;
        }
    }
    (xi, eta, zeta, iters)
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Full closed-form solve with residual-based branch validation.
///
/// The principal branch (`+` in every subsidiary angle) is the geometric
/// one; it is still validated against the fundamental system, and if it ever
/// failed the solver would fall back to scanning all eight sign choices,
/// reporting `AmbiguousBranch` if several distinct solutions survived.
pub fn solve(sides: &TriangleSides) -> Result<SchellbachSolution, SchellbachError> {
    let d = derived_quantities(sides)?;
    let aux = auxiliary_angles(&d)?;

    let attempt = |signs: [f64; 3]| -> Result<SchellbachSolution, SchellbachError> {
        let sub = subsidiary_with_signs(&d, &aux, signs)?;
        let sums = pair_sums(&d, &sub)?;
        let xi0 = (sums.zeta_xi + sums.xi_eta - sums.eta_zeta) / 2.0;
        let eta0 = (sums.eta_zeta + sums.xi_eta - sums.zeta_xi) / 2.0;
        let zeta0 = (sums.eta_zeta + sums.zeta_xi - sums.xi_eta) / 2.0;
        let (xi, eta, zeta, polish_iterations) = polish(&d, xi0, eta0, zeta0);
        let residuals = fundamental_residuals(&d, xi, eta, zeta);
        let max_res = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        if max_res > 1e-10 {
            return Err(SchellbachError::NoConvergence);
        }
        let x = d.s / 2.0 - xi;
        let y = d.s / 2.0 - eta;
        let z = d.s / 2.0 - zeta;
        if !(x > 0.0 && y > 0.0 && z > 0.0) {
            return Err(SchellbachError::NoRealSolution);
        }
        Ok(SchellbachSolution {
            sides: *sides,
            derived: d,
            aux,
            subsidiary: sub,
            pair_sums: sums,
            xi,
            eta,
            zeta,
            x,
            y,
            z,
            residuals,
            difference_residuals: difference_residuals(&d, &sub, xi, eta, zeta),
            polish_iterations,
        })
    };

    match attempt([1.0, 1.0, 1.0]) {
        Ok(sol) => Ok(sol),
        Err(primary_err) => {
            // Branch scan fallback; the principal branch has never failed on
            // admissible inputs, but the scan keeps the solver honest.
            let mut found: Vec<SchellbachSolution> = Vec::new();
            for bits in 0..8u8 {
                let signs = [
                    if bits & 1 == 0 { 1.0 } else { -1.0 },
                    if bits & 2 == 0 { 1.0 } else { -1.0 },
                    if bits & 4 == 0 { 1.0 } else { -1.0 },
                ];
                if let Ok(sol) = attempt(signs) {
                    if !found
                        .iter()
                        .any(|f| (f.x - sol.x).abs() + (f.y - sol.y).abs() + (f.z - sol.z).abs() < 1e-9)
                    {
                        found.push(sol);
                    }
                }
            }
            match found.len() {
                0 => Err(primary_err),
                1 => Ok(found.pop().expect("nonempty")),
                _ => Err(SchellbachError::AmbiguousBranch),
            }
        }
    }
}

/// A Malfatti circle produced by the trigonometric route, with certificates
/// of its two side tangencies.
#[derive(Debug, Clone)]
pub struct AnalyticCircle {
    pub vertex: Vertex,
    pub cycle: Cycle,
    pub center: HPoint,
    pub radius: f64,
    /// Contacts with the two sides through the vertex, in side order
    /// (for vertex `A`: side `c = AB` first, then side `b = CA`).
    pub contacts: [TangencyCertificate; 2],
}

/// Realizes the three Malfatti circles in the model from the solved tangent
/// lengths: for the circle at vertex `A` with tangent length `x`,
/// `tanh(r) = tan(alpha/2) sinh(x)` and the center sits on the bisector at
/// distance `d` with `tanh(d) = tanh(x)/cos(alpha/2)`.
pub fn analytic_circles(
    tri: &HTriangle,
    sol: &SchellbachSolution,
    tol: f64,
) -> Result<[AnalyticCircle; 3], SchellbachError> {
    let data = [
        (Vertex::A, tri.va, tri.vb, tri.vc, sol.x, tri.side_a, tri.side_b, tri.side_c),
        (Vertex::B, tri.vb, tri.vc, tri.va, sol.y, tri.side_b, tri.side_c, tri.side_a),
        (Vertex::C, tri.vc, tri.va, tri.vb, sol.z, tri.side_c, tri.side_a, tri.side_b),
    ];
    let mut out = Vec::with_capacity(3);
    for (vtx, p, q, r, tlen, opp, adj1, adj2) in data {
        // Interior angle at the vertex from the side lengths.
        let cos_angle = (adj1.cosh() * adj2.cosh() - opp.cosh()) / (adj1.sinh() * adj2.sinh());
        let cos_angle = cos_angle.clamp(-1.0, 1.0);
        let half = cos_angle.acos() / 2.0;
        let radius = (half.tan() * tlen.sinh()).atanh();
        let dist = (tlen.tanh() / half.cos()).atanh();
        if !(radius.is_finite() && dist.is_finite() && radius > 0.0) {
            return Err(SchellbachError::ArgumentOutOfRange("circle placement"));
        }
        let u1 = initial_direction(p, q).map_err(CycleError::from)?;
        let u2 = initial_direction(p, r).map_err(CycleError::from)?;
        let bis = (u1 + u2).normalized();
        let center = exp_from(p, bis, dist);
        let carrier = circle_from_center_radius(center, radius).map_err(CycleError::from)?;
        let cycle = build_cycle(GenCircle::Circle(carrier), tol)?;
        // Certify the two side tangencies.
        let cert_tol = tol.max(1e-9);
        let sides = [
            crate::disk::geodesic_through(p, q).map_err(CycleError::from)?,
            crate::disk::geodesic_through(p, r).map_err(CycleError::from)?,
        ];
        let mut contacts = Vec::with_capacity(2);
        for side in sides {
            let side_cycle = build_cycle(side, tol)?;
            contacts.push(
                cycles_touching(&cycle, &side_cycle, cert_tol)
                    .ok_or(CycleError::CertificationFailed("analytic circle side contact"))?,
            );
        }
        // Right-triangle closure: center distance, radius and tangent
        // length are mutually consistent.
        debug_assert!(
            (hyp_distance(p, center).cosh() - tlen.cosh() * radius.cosh()).abs() < 1e-10
        );
        out.push(AnalyticCircle {
            vertex: vtx,
            cycle,
            center,
            radius,
            contacts: contacts.try_into().expect("two contacts"),
        });
    }
    Ok(out.try_into().map_err(|_| ()).expect("three circles"))
}

/// Convenience: embed the triangle and solve both stages.
pub fn solve_triangle(
    sides: &TriangleSides,
    tol: f64,
) -> Result<(HTriangle, SchellbachSolution, [AnalyticCircle; 3]), SchellbachError> {
    let sol = solve(sides)?;
    let tri = embed_triangle(sides.a, sides.b, sides.c, tol)?;
    let circles = analytic_circles(&tri, &sol, tol)?;
    Ok((tri, sol, circles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::cycles_touching_all;
    use crate::DEFAULT_TOLERANCE as TOL;

    fn sides(a: f64, b: f64, c: f64) -> TriangleSides {
        TriangleSides { a, b, c }
    }

    #[test]
    fn derived_quantities_reference_values() {
        let d = derived_quantities(&sides(2.0, 2.0, 3.0)).unwrap();
        assert_eq!(d.s, 3.5);
        assert_eq!(d.l, 0.25);
        assert_eq!(d.m, 0.25);
        assert_eq!(d.n, 1.25);
        assert_eq!(
            derived_quantities(&sides(3.0, 1.0, 1.0)).unwrap_err(),
            SchellbachError::ViolatedTriangleInequality
        );
    }

    #[test]
    fn equilateral_matches_independent_reduction() {
        // For a = b = c the system collapses to one equation in xi with the
        // closed form asinh sqrt((1 - A)/(A + B)); frozen from a 40-digit
        // evaluation.
        let sol = solve(&sides(1.0, 1.0, 1.0)).unwrap();
        assert!((sol.xi - 0.41701261449066532526).abs() < 1e-14);
        assert!((sol.x - 0.33298738550933467474).abs() < 1e-14);
        assert!((sol.x - sol.y).abs() < 1e-14);
        assert!((sol.y - sol.z).abs() < 1e-14);
        // In the symmetric case the subsidiary angle equals s/2 exactly.
        assert!((sol.subsidiary.lam - sol.derived.s / 2.0).abs() < 1e-14);
    }

    #[test]
    fn scalene_matches_frozen_high_precision_values() {
        let sol = solve(&sides(1.0, 1.3, 1.7)).unwrap();
        assert!((sol.x - 0.79678724650681308236).abs() < 1e-13);
        assert!((sol.y - 0.50876586940004690977).abs() < 1e-13);
        assert!((sol.z - 0.16009844309317642538).abs() < 1e-13);
        assert!((sol.subsidiary.lam - 0.87090612720225127154).abs() < 1e-13);
        assert!((sol.subsidiary.mu - 0.66499824144579232472).abs() < 1e-13);
        assert!((sol.subsidiary.nu - 0.94078265415651117214).abs() < 1e-13);
        for r in sol.residuals {
            assert!(r.abs() < 1e-12);
        }
        for r in sol.difference_residuals {
            assert!(r.abs() < 1e-12);
        }
    }

    #[test]
    fn negative_vertex_excess_is_fine() {
        // (0.5, 1.4, 1.6) has l = a - s/2 < 0; the principal branch still
        // solves the system.
        let sol = solve(&sides(0.5, 1.4, 1.6)).unwrap();
        assert!(sol.derived.l < 0.0);
        assert!((sol.x - 1.106929677).abs() < 1e-8);
        assert!((sol.y - 0.2325802463).abs() < 1e-8);
        assert!((sol.z - 0.07143887294).abs() < 1e-8);
    }

    #[test]
    fn both_branches_satisfy_the_defining_condition() {
        // The subsidiary defining equation cannot discriminate the branch:
        // it holds identically for both signs. Selection therefore has to
        // use the fundamental system downstream.
        let d = derived_quantities(&sides(1.0, 1.3, 1.7)).unwrap();
        let aux = auxiliary_angles(&d).unwrap();
        let defining = |lam: f64, u: f64, v: f64| {
            lam.cosh() * u.cosh() * v.cosh() / (d.s / 2.0).cosh()
                - lam.sinh() * u.sinh() * v.sinh() / (d.s / 2.0).sinh()
                - 1.0
        };
        for signs in [[1.0, 1.0, 1.0], [-1.0, -1.0, -1.0]] {
            let sub = subsidiary_with_signs(&d, &aux, signs).unwrap();
            assert!(defining(sub.lam, d.m, d.n).abs() < 1e-12);
            assert!(defining(sub.mu, d.n, d.l).abs() < 1e-12);
            assert!(defining(sub.nu, d.l, d.m).abs() < 1e-12);
        }
    }

    #[test]
    fn rejected_branch_violates_the_fundamental_system() {
        let d = derived_quantities(&sides(1.0, 1.3, 1.7)).unwrap();
        let aux = auxiliary_angles(&d).unwrap();
        let sub = subsidiary_with_signs(&d, &aux, [-1.0, -1.0, -1.0]).unwrap();
        let sums = pair_sums(&d, &sub).unwrap();
        let xi = (sums.zeta_xi + sums.xi_eta - sums.eta_zeta) / 2.0;
        let eta = (sums.eta_zeta + sums.xi_eta - sums.zeta_xi) / 2.0;
        let zeta = (sums.eta_zeta + sums.zeta_xi - sums.xi_eta) / 2.0;
        let res = fundamental_residuals(&d, xi, eta, zeta);
        let max = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        assert!(max > 1e-6, "wrong branch must fail loudly, got {max}");
    }

    #[test]
    fn closed_form_needs_no_polish() {
        let sol = solve(&sides(0.8, 1.1, 0.7)).unwrap();
        // The closed form is already a root to machine accuracy; allow the
        // polish at most a couple of cleanup steps.
        assert!(sol.polish_iterations <= 2, "{}", sol.polish_iterations);
    }

    #[test]
    fn analytic_circles_touch_sides_and_each_other() {
        let s = sides(1.0, 1.3, 1.7);
        let (_, _, circles) = solve_triangle(&s, TOL).unwrap();
        for c in &circles {
            for cert in &c.contacts {
                assert!(cert.residual < 1e-10);
            }
        }
        // Pairwise mutual tangency is not imposed by the construction: it
        // is the Malfatti property itself, delivered by the solved tangent
        // lengths. Certify it.
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let cert = cycles_touching(&circles[i].cycle, &circles[j].cycle, 1e-8)
                .expect("Malfatti circles touch");
            assert!(cert.residual < 1e-9, "pair ({i},{j}): {}", cert.residual);
        }
        // And each pair touches exactly once.
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            assert_eq!(cycles_touching_all(&circles[i].cycle, &circles[j].cycle, 1e-8).len(), 1);
        }
    }

    #[test]
    fn tangent_lengths_stay_inside_the_sides() {
        for (a, b, c) in [(1.0, 1.3, 1.7), (0.5, 1.4, 1.6), (2.0, 2.0, 3.0), (0.1, 0.1, 0.1)] {
            let sol = solve(&sides(a, b, c)).unwrap();
            assert!(sol.x > 0.0 && sol.x < b.min(c));
            assert!(sol.y > 0.0 && sol.y < c.min(a));
            assert!(sol.z > 0.0 && sol.z < a.min(b));
        }
    }
}
