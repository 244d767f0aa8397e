//! Hand-written SVG 1.1 output of a solved scene: the model circle, the
//! given cycles, the output cycles, and the certified tangency points,
//! clipped to the unit disk. Byte-determinism matters more than looks:
//! elements are emitted in input order with fixed six-decimal coordinates.

use crate::cycles::{BranchTag, Cycle};
use crate::geom::{GenCircle, Vec2};
use std::fmt::Write;

fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" { "0.000000".to_string() } else { s }
}

fn carrier_element(out: &mut String, g: &GenCircle, class: &str) {
    match g {
        GenCircle::Circle(c) => {
            let _ = writeln!(
                out,
                r#"    <circle class="{class}" cx="{}" cy="{}" r="{}"/>"#,
                fmt6(c.center.x),
                fmt6(c.center.y),
                fmt6(c.r)
            );
        }
        GenCircle::Line(l) => {
            // A segment well past the viewport, clipped by the disk.
            let p0 = l.normal * l.offset;
            let d = l.direction() * 3.0;
            let (a, b) = (p0 - d, p0 + d);
            let _ = writeln!(
                out,
                r#"    <line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                fmt6(a.x),
                fmt6(a.y),
                fmt6(b.x),
                fmt6(b.y)
            );
        }
    }
}

fn cycle_elements(out: &mut String, c: &Cycle, class: &str) {
    for (tag, carrier) in c.branches() {
        let cls = match tag {
            BranchTag::Carrier => class.to_string(),
            BranchTag::SecondBranch => format!("{class} alt"),
        };
        carrier_element(out, &carrier, &cls);
    }
}

/// Renders the figure. `given` and `outputs` are drawn clipped to the
/// model; hypercycles contribute one element per branch, the second branch
/// dashed. `touch_points` become dots.
pub fn render_svg(given: &[Cycle], outputs: &[Cycle], touch_points: &[Vec2]) -> String {
    let mut s = String::new();
    s.push_str(concat!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.1 -1.1 2.2 2.2" width="660" height="660">"#,
        "\n",
        "  <style>\n",
        "    .model { fill: none; stroke: #20242b; stroke-width: 0.01; }\n",
        "    .given { fill: none; stroke: #3a6ea5; stroke-width: 0.007; }\n",
        "    .output { fill: none; stroke: #b23a32; stroke-width: 0.007; }\n",
        "    .alt { stroke-dasharray: 0.035 0.02; stroke-width: 0.005; }\n",
        "    .touch { fill: #1d1d1d; stroke: none; }\n",
        "  </style>\n",
        "  <defs>\n",
        r#"    <clipPath id="disk"><circle cx="0" cy="0" r="1"/></clipPath>"#,
        "\n",
        "  </defs>\n",
        r#"  <g transform="scale(1,-1)">"#,
        "\n",
        r#"  <circle class="model" cx="0" cy="0" r="1"/>"#,
        "\n",
        r#"  <g clip-path="url(#disk)">"#,
        "\n",
    ));
    for c in given {
        cycle_elements(&mut s, c, "given");
    }
    for c in outputs {
        cycle_elements(&mut s, c, "output");
    }
    for p in touch_points {
        let _ = writeln!(
            s,
            r#"    <circle class="touch" cx="{}" cy="{}" r="0.012"/>"#,
            fmt6(p.x),
            fmt6(p.y)
        );
    }
    s.push_str("  </g>\n  </g>\n</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::build_cycle;
    use crate::disk::{circle_from_center_radius, HPoint};
    use crate::geom::GenCircle;
    use crate::DEFAULT_TOLERANCE as TOL;

    fn circle_cycle(x: f64, y: f64, r: f64) -> Cycle {
        let c = HPoint::new(x, y).unwrap();
        build_cycle(GenCircle::Circle(circle_from_center_radius(c, r).unwrap()), TOL).unwrap()
    }

    #[test]
    fn empty_scene_is_just_the_model_circle() {
        let svg = render_svg(&[], &[], &[]);
        assert!(svg.contains(r#"class="model""#));
        assert!(!svg.contains(r#"class="given""#));
        assert!(!svg.contains(r#"class="output""#));
        assert!(!svg.contains(r#"class="touch""#));
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = [circle_cycle(0.3, 0.0, 0.4), circle_cycle(-0.2, 0.1, 0.3)];
        let o = [circle_cycle(0.05, -0.3, 0.2)];
        let pts = [Vec2::new(0.11, 0.22)];
        let a = render_svg(&g, &o, &pts);
        let b = render_svg(&g, &o, &pts);
        assert_eq!(a, b);
        // given 2 + output 1 + touch 1 + model 1 + clip path 1
        assert_eq!(a.matches("<circle").count(), 6);
    }

    #[test]
    fn negative_zero_never_appears() {
        let c = circle_cycle(-1e-9, 0.0, 0.25);
        let svg = render_svg(&[c], &[], &[]);
        assert!(!svg.contains("-0.000000"), "{svg}");
    }
}
