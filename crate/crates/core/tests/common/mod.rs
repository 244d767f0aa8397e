//! Shared helpers for the integration suites: seeded randomness, generators
//! for well-conditioned inputs, and independent Euclidean numeric oracles.
#![allow(dead_code)]

use malfatti::geom::{Circle, GenCircle, Line, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sides in `[lo, hi]` with every triangle-inequality slack at least
/// `margin`, so the sampled triangles stay numerically well-posed.
pub fn random_sides(rng: &mut ChaCha8Rng, lo: f64, hi: f64, margin: f64) -> (f64, f64, f64) {
    loop {
        let a = rng.gen_range(lo..hi);
        let b = rng.gen_range(lo..hi);
        let c = rng.gen_range(lo..hi);
        if a + b > c + margin && b + c > a + margin && c + a > b + margin {
            return (a, b, c);
        }
    }
}

/// Three mutually external circles in generic position: pairwise gaps of at
/// least 0.3 between the closed disks and pairwise distinct radii.
pub fn random_external_triple(rng: &mut ChaCha8Rng) -> [Circle; 3] {
    loop {
        let mut circles = [Circle::new(Vec2::ZERO, 1.0); 3];
        for (k, slot) in circles.iter_mut().enumerate() {
            let base = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let angle = base + rng.gen_range(-0.5..0.5);
            let dist = rng.gen_range(1.3..2.2);
            *slot = Circle::new(Vec2::from_angle(angle) * dist, rng.gen_range(0.2..0.8));
        }
        let ok_gaps = [(0, 1), (1, 2), (2, 0)].iter().all(|&(i, j)| {
            circles[i].center.dist(circles[j].center) > circles[i].r + circles[j].r + 0.3
        });
        let ok_radii = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .all(|&(i, j)| (circles[i].r - circles[j].r).abs() > 0.05);
        if ok_gaps && ok_radii {
            return circles;
        }
    }
}

/// Parameter mismatch of two generalized circles, sign-folded for lines.
pub fn carrier_gap(a: &GenCircle, b: &GenCircle) -> f64 {
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

/// Euclidean tangency gap of two carriers: zero exactly at tangency.
pub fn euclid_tangency_gap(a: &GenCircle, b: &GenCircle) -> f64 {
    match (a, b) {
        (GenCircle::Circle(x), GenCircle::Circle(y)) => {
            let d = x.center.dist(y.center);
            (d - (x.r + y.r)).abs().min((d - (x.r - y.r).abs()).abs())
        }
        (GenCircle::Circle(c), GenCircle::Line(l)) | (GenCircle::Line(l), GenCircle::Circle(c)) => {
            (l.signed_dist(c.center).abs() - c.r).abs()
        }
        (GenCircle::Line(_), GenCircle::Line(_)) => f64::INFINITY,
    }
}

pub fn gauss_solve(a: &mut Vec<Vec<f64>>, b: &mut Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in 0..n {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> [f64; 3] {
    let mut m: Vec<Vec<f64>> = a.iter().map(|r| r.to_vec()).collect();
    let mut rhs = b.to_vec();
    let d = gauss_solve(&mut m, &mut rhs).expect("nonsingular Jacobian");
    [d[0], d[1], d[2]]
}

/// Independent Euclidean Malfatti solver in tangent lengths `(x, y, z)` at
/// the vertices A, B, C of a triangle with sides `a = |BC|`, `b = |CA|`,
/// `c = |AB|`. The feet of two corner circles on their shared side leave a
/// gap equal to twice the geometric mean of the radii, which gives three
/// equations solved here by a damped Newton iteration.
pub fn euclid_malfatti_tangent_lengths(a: f64, b: f64, c: f64) -> [f64; 3] {
    let cos_a = (b * b + c * c - a * a) / (2.0 * b * c);
    let cos_b = (c * c + a * a - b * b) / (2.0 * c * a);
    let cos_c = (a * a + b * b - c * c) / (2.0 * a * b);
    let ta = (cos_a.acos() / 2.0).tan();
    let tb = (cos_b.acos() / 2.0).tan();
    let tc = (cos_c.acos() / 2.0).tan();
    let s = 0.5 * (a + b + c);
    let (mut x, mut y, mut z) = (0.6 * (s - a), 0.6 * (s - b), 0.6 * (s - c));
    for _ in 0..200 {
        let g1 = 2.0 * (x * ta * y * tb).sqrt();
        let g2 = 2.0 * (y * tb * z * tc).sqrt();
        let g3 = 2.0 * (z * tc * x * ta).sqrt();
        let f = [c - x - y - g1, a - y - z - g2, b - z - x - g3];
        if f.iter().all(|v| v.abs() < 1e-14) {
            break;
        }
        let j = [
            [-1.0 - g1 / (2.0 * x), -1.0 - g1 / (2.0 * y), 0.0],
            [0.0, -1.0 - g2 / (2.0 * y), -1.0 - g2 / (2.0 * z)],
            [-1.0 - g3 / (2.0 * x), 0.0, -1.0 - g3 / (2.0 * z)],
        ];
        let d = solve3(&j, &f);
        let mut step = 1.0;
        for _ in 0..60 {
            if x - step * d[0] > 0.0 && y - step * d[1] > 0.0 && z - step * d[2] > 0.0 {
                break;
            }
            step *= 0.5;
        }
        x -= step * d[0];
        y -= step * d[1];
        z -= step * d[2];
    }
    [x, y, z]
}

/// One Euclidean Malfatti circle with its touch points on the two sides
/// adjacent to its vertex.
pub struct EuclidCorner {
    pub center: Vec2,
    pub r: f64,
    pub touches: [Vec2; 2],
}

/// Euclidean Malfatti circles of the triangle `va, vb, vc`, one per vertex
/// in input order.
pub fn euclid_malfatti_circles(va: Vec2, vb: Vec2, vc: Vec2) -> [EuclidCorner; 3] {
    let a = vb.dist(vc);
    let b = vc.dist(va);
    let c = va.dist(vb);
    let t = euclid_malfatti_tangent_lengths(a, b, c);
    let corner = |v: Vec2, p: Vec2, q: Vec2, len: f64| {
        let u1 = (p - v).normalized();
        let u2 = (q - v).normalized();
        let half = (u1.dot(u2).clamp(-1.0, 1.0)).acos() / 2.0;
        let bis = (u1 + u2).normalized();
        EuclidCorner {
            center: v + bis * (len / half.cos()),
            r: len * half.tan(),
            touches: [v + u1 * len, v + u2 * len],
        }
    };
    [
        corner(va, vb, vc, t[0]),
        corner(vb, vc, va, t[1]),
        corner(vc, va, vb, t[2]),
    ]
}

/// Euclidean Malfatti system for three given circles: the unknown circles
/// `(c_j, r_j)` are pairwise externally tangent and externally tangent to
/// their two assigned given circles (assignment `[[1,2],[2,0],[0,1]]`).
/// Newton iteration with a finite-difference Jacobian, started from `start`.
pub fn euclid_malfatti_of_circles(
    given: &[Circle; 3],
    start: &[Circle; 3],
) -> Option<[Circle; 3]> {
    let assignment = [[1usize, 2], [2, 0], [0, 1]];
    let unpack = |u: &[f64]| -> [Circle; 3] {
        [
            Circle::new(Vec2::new(u[0], u[1]), u[2]),
            Circle::new(Vec2::new(u[3], u[4]), u[5]),
            Circle::new(Vec2::new(u[6], u[7]), u[8]),
        ]
    };
    let residual = |u: &[f64]| -> Vec<f64> {
        let c = unpack(u);
        let mut f = Vec::with_capacity(9);
        for (i, j) in [(0usize, 1usize), (1, 2), (2, 0)] {
            f.push(c[i].center.dist(c[j].center) - c[i].r - c[j].r);
        }
        for (j, pair) in assignment.iter().enumerate() {
            for &g in pair {
                f.push(c[j].center.dist(given[g].center) - c[j].r - given[g].r);
            }
        }
        f
    };
    let mut u: Vec<f64> = start
        .iter()
        .flat_map(|c| [c.center.x, c.center.y, c.r])
        .collect();
    for _ in 0..80 {
        let f = residual(&u);
        if f.iter().all(|v| v.abs() < 1e-13) {
            return Some(unpack(&u));
        }
        let h = 1e-8;
        let mut jac: Vec<Vec<f64>> = vec![vec![0.0; 9]; 9];
        for k in 0..9 {
            let mut up = u.clone();
            up[k] += h;
            let fp = residual(&up);
            for (r, row) in jac.iter_mut().enumerate() {
                row[k] = (fp[r] - f[r]) / h;
            }
        }
        let mut rhs = f.clone();
        let delta = gauss_solve(&mut jac, &mut rhs)?;
        for k in 0..9 {
            u[k] -= delta[k];
        }
    }
    None
}

/// Intersection point of two lines given in canonical form.
pub fn line_intersection(a: &Line, b: &Line) -> Option<Vec2> {
    malfatti::geom::solve2(
        a.normal.x, a.normal.y, b.normal.x, b.normal.y, a.offset, b.offset,
    )
}
