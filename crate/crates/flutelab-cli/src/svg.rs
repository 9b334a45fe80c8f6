//! SVG figures of circles, axes, rays and horocycles in the upper
//! half-plane. Output bytes depend only on the scene: primitives are drawn
//! in insertion order and every number is written with six decimals.

use std::fmt::Write;

use flutelab::{BoundaryPoint, Geodesic};

/// Width of the drawing in SVG units.
const WIDTH: f64 = 800.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Style {
    /// Circles bounding the fundamental domain.
    Boundary,
    Axis,
    Orthogonal,
    Ray,
    Horocycle,
}

impl Style {
    fn class(self) -> &'static str {
        match self {
            Style::Boundary => "boundary",
            Style::Axis => "axis",
            Style::Orthogonal => "orthogonal",
            Style::Ray => "ray",
            Style::Horocycle => "horocycle",
        }
    }
}

/// Shapes in plane coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    /// Upper half of the circle centred on the real axis.
    Semicircle { center: f64, radius: f64, style: Style },
    /// Full Euclidean circle in the plane, e.g. a horocycle.
    Circle { cx: f64, cy: f64, r: f64, style: Style },
    /// `{x} × [y0, ∞)`, cut at the top of the viewport.
    VerticalRay { x: f64, y0: f64, style: Style },
    HorizontalLine { y: f64, style: Style },
    Point { x: f64, y: f64 },
    Label { x: f64, y: f64, text: String },
}

/// Real-axis window `[x_min, x_max]` and height above the axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub x_min: f64,
    pub x_max: f64,
    pub height: f64,
}

impl Viewport {
    /// Bounding box of the semicircles with 10% added on every side that
    /// is not the real axis. Without circles the window is `[-2, 2] × 2`.
    pub fn fit(primitives: &[Primitive]) -> Viewport {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        let mut top = 0.0f64;
        for p in primitives {
            if let Primitive::Semicircle { center, radius, style: Style::Boundary } = p {
                lo = lo.min(center - radius);
                hi = hi.max(center + radius);
                top = top.max(*radius);
            }
        }
        if !(lo.is_finite() && hi > lo) {
            return Viewport {
                x_min: -2.0,
                x_max: 2.0,
                height: 2.0,
            };
        }
        let pad = 0.1 * (hi - lo);
        Viewport {
            x_min: lo - pad,
            x_max: hi + pad,
            height: 1.1 * top,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgScene {
    pub viewport: Viewport,
    pub primitives: Vec<Primitive>,
}

/// Geodesic as a drawable shape.
pub fn geodesic(g: &Geodesic, style: Style) -> Primitive {
    match (g.e1(), g.e2()) {
        (BoundaryPoint::Finite(x), BoundaryPoint::Infinity)
        | (BoundaryPoint::Infinity, BoundaryPoint::Finite(x)) => Primitive::VerticalRay { x, y0: 0.0, style },
        _ => {
            let c = g.as_circle().expect("finite endpoints");
            Primitive::Semicircle {
                center: c.center(),
                radius: c.radius(),
                style,
            }
        }
    }
}

fn f(x: f64) -> String {
    let s = format!("{x:.6}");
    // Avoid "-0.000000", which differs from "0.000000" only in sign.
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

impl SvgScene {
    pub fn new(primitives: Vec<Primitive>) -> Self {
        SvgScene {
            viewport: Viewport::fit(&primitives),
            primitives,
        }
    }

    pub fn render(&self) -> String {
        let v = self.viewport;
        let scale = WIDTH / (v.x_max - v.x_min);
        let height = v.height * scale;
        let sx = |x: f64| (x - v.x_min) * scale;
        let sy = |y: f64| height - y * scale;
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">",
            f(WIDTH),
            f(height),
            f(WIDTH),
            f(height)
        );
        out.push_str(
            "<style>path,line,circle{fill:none;stroke-width:1}\
.boundary{stroke:#1f4e79}.axis{stroke:#b03a2e;stroke-dasharray:4 2}\
.orthogonal{stroke:#555}.ray{stroke:#117a65;stroke-width:2}.horocycle{stroke:#7d3c98}\
.point{fill:#000}text{font:10px sans-serif}</style>\n",
        );
        let _ = writeln!(
            out,
            "<clipPath id=\"view\"><rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\"/></clipPath>",
            f(WIDTH),
            f(height)
        );
        out.push_str("<g clip-path=\"url(#view)\">\n");
        let _ = writeln!(
            out,
            "<line class=\"orthogonal\" x1=\"0\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            f(height),
            f(WIDTH),
            f(height)
        );
        for p in &self.primitives {
            match p {
                Primitive::Semicircle { center, radius, style } => {
                    let (a, b) = (sx(center - radius), sx(center + radius));
                    let r = radius * scale;
                    let _ = writeln!(
                        out,
                        "<path class=\"{}\" d=\"M {} {} A {} {} 0 0 1 {} {}\"/>",
                        style.class(),
                        f(a),
                        f(height),
                        f(r),
                        f(r),
                        f(b),
                        f(height)
                    );
                }
                Primitive::Circle { cx, cy, r, style } => {
                    let _ = writeln!(
                        out,
                        "<circle class=\"{}\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
                        style.class(),
                        f(sx(*cx)),
                        f(sy(*cy)),
                        f(r * scale)
                    );
                }
                Primitive::VerticalRay { x, y0, style } => {
                    let _ = writeln!(
                        out,
                        "<line class=\"{}\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"0\"/>",
                        style.class(),
                        f(sx(*x)),
                        f(sy(*y0).min(height)),
                        f(sx(*x))
                    );
                }
                Primitive::HorizontalLine { y, style } => {
                    let _ = writeln!(
                        out,
                        "<line class=\"{}\" x1=\"0\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
                        style.class(),
                        f(sy(*y)),
                        f(WIDTH),
                        f(sy(*y))
                    );
                }
                Primitive::Point { x, y } => {
                    let _ = writeln!(
                        out,
                        "<circle class=\"point\" cx=\"{}\" cy=\"{}\" r=\"2\"/>",
                        f(sx(*x)),
                        f(sy(*y))
                    );
                }
                Primitive::Label { x, y, text } => {
                    let _ = writeln!(
                        out,
                        "<text x=\"{}\" y=\"{}\">{}</text>",
                        f(sx(*x)),
                        f(sy(*y)),
                        escape(text)
                    );
                }
            }
        }
        out.push_str("</g>\n</svg>\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn viewport_adds_ten_percent() {
        let v = Viewport::fit(&[
            Primitive::Semicircle {
                center: 0.0,
                radius: 1.0,
                style: Style::Boundary,
            },
            Primitive::Semicircle {
                center: 5.0,
                radius: 2.0,
                style: Style::Boundary,
            },
            // Axes do not widen the window.
            Primitive::Semicircle {
                center: 100.0,
                radius: 50.0,
                style: Style::Axis,
            },
        ]);
        assert!((v.x_min - (-1.0 - 0.8)).abs() < 1e-12);
        assert!((v.x_max - (7.0 + 0.8)).abs() < 1e-12);
        assert!((v.height - 2.2).abs() < 1e-12);
    }

    #[test]
    fn empty_scene_uses_default_window() {
        let v = Viewport::fit(&[]);
        assert_eq!((v.x_min, v.x_max, v.height), (-2.0, 2.0, 2.0));
    }

    #[test]
    fn numbers_have_six_decimals_and_no_negative_zero() {
        assert_eq!(f(1.0), "1.000000");
        assert_eq!(f(-1e-9), "0.000000");
        assert_eq!(f(-2.5), "-2.500000");
    }

    #[test]
    fn rendering_is_deterministic() {
        let scene = SvgScene::new(vec![
            Primitive::Semicircle {
                center: 0.0,
                radius: 1.0,
                style: Style::Boundary,
            },
            Primitive::VerticalRay {
                x: 0.0,
                y0: 1.0,
                style: Style::Ray,
            },
            Primitive::Label {
                x: 0.0,
                y: 1.0,
                text: "C'1 <i>".into(),
            },
        ]);
        let a = scene.render();
        assert_eq!(a, scene.render());
        assert!(a.contains("C'1 &lt;i&gt;"));
        assert!(a.contains("A 333.333333 333.333333 0 0 1"));
    }
}
