//! Regression anchors and oracle checks for the trigonometric solver.

mod common;

use common::{euclid_malfatti_tangent_lengths, random_sides, rng};
use malfatti::schellbach::{solve, TriangleSides};

#[test]
fn pinned_solution_for_a_reference_triangle() {
    let sol = solve(&TriangleSides { a: 1.0, b: 1.3, c: 1.7 }).unwrap();
    let pins = [
        (sol.subsidiary.lam, 0.87090612720225136),
        (sol.subsidiary.mu, 0.66499824144579234),
        (sol.subsidiary.nu, 0.94078265415651130),
        (sol.xi, 0.20321275349318713),
        (sol.eta, 0.49123413059995302),
        (sol.zeta, 0.83990155690682355),
        (sol.x, 0.79678724650681287),
        (sol.y, 0.50876586940004698),
        (sol.z, 0.16009844309317645),
    ];
    for (got, want) in pins {
        assert!((got - want).abs() < 1e-12, "pinned value drifted: {got} vs {want}");
    }
}

#[test]
fn equilateral_tangent_length_matches_a_bisection_oracle() {
    // For the unit equilateral triangle the substituted unknowns coincide,
    // and the fundamental equation reduces to a one-variable condition
    // solvable by bisection, independent of the subsidiary-angle path.
    let (s, l) = (1.5f64, 0.25f64);
    let h = s / 2.0;
    let f = |xi: f64| {
        l.cosh() * xi.cosh() * xi.cosh() / h.cosh()
            + l.sinh() * xi.sinh() * xi.sinh() / h.sinh()
            - 1.0
    };
    let (mut lo, mut hi) = (0.0f64, h);
    assert!(f(lo) < 0.0 && f(hi) > 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let xi_oracle = 0.5 * (lo + hi);
    let sol = solve(&TriangleSides { a: 1.0, b: 1.0, c: 1.0 }).unwrap();
    assert!((sol.xi - xi_oracle).abs() < 1e-12);
    assert!((sol.eta - xi_oracle).abs() < 1e-12);
    assert!((sol.zeta - xi_oracle).abs() < 1e-12);
    // The tangent length complements the substituted unknown to s/2.
    assert!((sol.x - (h - xi_oracle)).abs() < 1e-12);
}

#[test]
fn auxiliary_angles_satisfy_their_defining_identity() {
    let mut rng = rng(0x3001);
    for _ in 0..100 {
        let (a, b, c) = random_sides(&mut rng, 0.05, 3.0, 0.01);
        let sol = solve(&TriangleSides { a, b, c }).unwrap();
        let d = sol.derived;
        let coth = 1.0 / (d.s / 2.0).tanh();
        let checks = [
            (sol.aux.phi, d.m, d.n),
            (sol.aux.chi, d.n, d.l),
            (sol.aux.psi, d.l, d.m),
        ];
        for (angle, u, v) in checks {
            let res = angle.tanh() - u.tanh() * v.tanh() * coth;
            assert!(res.abs() < 1e-14, "auxiliary identity residual {res}");
        }
    }
}

#[test]
fn vertex_excesses_sum_to_half_the_semiperimeter() {
    let mut rng = rng(0x3002);
    for _ in 0..100 {
        let (a, b, c) = random_sides(&mut rng, 0.05, 3.0, 0.01);
        let sol = solve(&TriangleSides { a, b, c }).unwrap();
        let d = sol.derived;
        assert!((d.l + d.m + d.n - d.s / 2.0).abs() < 1e-12);
    }
}

#[test]
fn small_triangles_approach_the_euclidean_solution() {
    // Freeze the Euclidean oracle itself first, so drift in the oracle
    // cannot silently weaken the comparison.
    let eu = euclid_malfatti_tangent_lengths(1.0, 1.3, 1.7);
    let frozen = [0.757101146408785, 0.477273775354429, 0.147499387643746];
    for (got, want) in eu.iter().zip(frozen) {
        assert!((got - want).abs() < 1e-12, "Euclidean oracle drifted");
    }

    // Curvature effects scale out quadratically, so at scale 1e-3 the
    // normalized hyperbolic tangent lengths sit within ~1e-6 of Euclid.
    let eps = 1e-3;
    let sol = solve(&TriangleSides { a: eps, b: 1.3 * eps, c: 1.7 * eps }).unwrap();
    for (hyp, want) in [sol.x, sol.y, sol.z].iter().zip(frozen) {
        assert!((hyp / eps - want).abs() < 1e-5);
    }
}

#[test]
fn signed_fundamental_defects_stay_at_rounding_level() {
    let mut rng = rng(0x3003);
    for _ in 0..100 {
        let (a, b, c) = random_sides(&mut rng, 0.05, 3.0, 0.01);
        let sol = solve(&TriangleSides { a, b, c }).unwrap();
        for r in sol.residuals {
            assert!(r.abs() < 1e-12, "fundamental defect {r}");
        }
    }
}
