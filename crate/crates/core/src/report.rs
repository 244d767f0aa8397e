//! Deterministic plain-text reports. Every number is printed with 15
//! significant digits in scientific notation so reruns and goldens compare
//! byte for byte; negative zero is normalized away.

use crate::cycles::{BranchTag, Cycle, CycleKind, TangencyCertificate};
use crate::geom::{GenCircle, Vec2};

/// 15 significant digits, `-0` folded onto `0`.
pub fn fmt_num(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.14e}")
}

pub fn fmt_point(p: Vec2) -> String {
    format!("({}, {})", fmt_num(p.x), fmt_num(p.y))
}

pub fn fmt_carrier(g: &GenCircle) -> String {
    match g {
        GenCircle::Circle(c) => {
            format!("circle center={} r={}", fmt_point(c.center), fmt_num(c.r))
        }
        GenCircle::Line(l) => {
            let l = l.canonical();
            format!("line normal={} offset={}", fmt_point(l.normal), fmt_num(l.offset))
        }
    }
}

pub fn kind_name(k: CycleKind) -> &'static str {
    match k {
        CycleKind::Circle => "circle",
        CycleKind::Paracycle => "paracycle",
        CycleKind::Hypercycle => "hypercycle",
        CycleKind::Geodesic => "geodesic",
    }
}

pub fn branch_name(b: BranchTag) -> &'static str {
    match b {
        BranchTag::Carrier => "carrier",
        BranchTag::SecondBranch => "second-branch",
    }
}

/// One output cycle, with hyperbolic center and radius when they exist.
pub fn describe_cycle(c: &Cycle) -> String {
    let mut s = format!("kind={} {}", kind_name(c.kind), fmt_carrier(&c.carrier));
    if let Ok((center, radius)) = c.center_radius() {
        s.push_str(&format!(
            " hyp_center={} hyp_r={}",
            fmt_point(center.v()),
            fmt_num(radius)
        ));
    }
    s
}

pub fn describe_certificate(cert: &TangencyCertificate) -> String {
    format!(
        "point={} residual={} branches={}/{}",
        fmt_point(cert.point.v()),
        fmt_num(cert.residual),
        branch_name(cert.branches.0),
        branch_name(cert.branches.1),
    )
}

/// Line-oriented report builder with stable ordering.
#[derive(Debug, Default)]
pub struct ReportDoc {
    lines: Vec<String>,
}

impl ReportDoc {
    pub fn new() -> ReportDoc {
        ReportDoc { lines: Vec::new() }
    }

    pub fn section(&mut self, title: &str) {
        if !self.lines.is_empty() {
            self.lines.push(String::new());
        }
        self.lines.push(format!("[{title}]"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    pub fn kv(&mut self, key: &str, value: impl AsRef<str>) {
        self.lines.push(format!("{key} = {}", value.as_ref()));
    }

    pub fn kv_num(&mut self, key: &str, value: f64) {
        self.kv(key, fmt_num(value));
    }

    pub fn render(&self) -> String {
        let mut out = self.lines.join("\n");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_fifteen_significant_digits() {
        assert_eq!(fmt_num(1.0), "1.00000000000000e0");
        assert_eq!(fmt_num(-0.0), "0.00000000000000e0");
        assert_eq!(fmt_num(1.5e-4), "1.50000000000000e-4");
        assert_eq!(fmt_num(std::f64::consts::PI), "3.14159265358979e0");
    }

    #[test]
    fn round_trips_at_printed_precision() {
        for &x in &[0.3337718276236461, 1.0 / 3.0, 2.5e-11, -7.0 * 0.1] {
            let back: f64 = fmt_num(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-14 * x.abs().max(1.0));
        }
    }

    #[test]
    fn builder_layout_is_stable() {
        let mut doc = ReportDoc::new();
        doc.section("head");
        doc.kv("mode", "triangle");
        doc.section("body");
        doc.kv_num("x", 0.25);
        assert_eq!(
            doc.render(),
            "[head]\nmode = triangle\n\n[body]\nx = 2.50000000000000e-1\n"
        );
    }
}
