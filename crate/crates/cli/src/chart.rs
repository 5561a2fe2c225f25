//! SVG rendering of profiles in a fixed embedding chart per metric:
//! Cartesian-from-polar for the plane, an orthographic view of the unit
//! sphere, and the Poincare-disk image of the hyperboloid.

use resist_core::metric::Metric;

pub struct Curve {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// Map a geodesic-coordinate point into the chart plane of the metric.
pub fn chart_point(metric: &Metric, u: f64, v: f64) -> (f64, f64) {
    match metric.id() {
        "sphere" => {
            // orthographic projection along +x of
            // (cos u cos v, cos u sin v, sin u)
            (u.cos() * v.sin(), u.sin())
        }
        "hyperbolic" => {
            // hyperboloid (sinh u cos v, sinh u sin v, cosh u) through the
            // Poincare disk x/(1+z)
            let denom = 1.0 + u.cosh();
            (u.sinh() * v.cos() / denom, u.sinh() * v.sin() / denom)
        }
        // polar coordinates for the plane and for custom surfaces
        _ => (u * v.cos(), u * v.sin()),
    }
}

/// True when the chart has a unit-circle boundary worth drawing.
fn unit_boundary(metric: &Metric) -> bool {
    matches!(metric.id(), "sphere" | "hyperbolic")
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Render curves into a standalone SVG document, one polyline per curve.
pub fn render_svg(metric: &Metric, curves: &[Curve]) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for c in curves {
        for &(x, y) in &c.points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if unit_boundary(metric) {
        min_x = min_x.min(-1.0);
        max_x = max_x.max(1.0);
        min_y = min_y.min(-1.0);
        max_y = max_y.max(1.0);
    }
    if !min_x.is_finite() {
        min_x = -1.0;
        max_x = 1.0;
        min_y = -1.0;
        max_y = 1.0;
    }

    let size = 600.0;
    let span = (max_x - min_x).max(max_y - min_y).max(1e-9);
    let margin = 0.05 * span;
    let scale = size / (span + 2.0 * margin);
    let to_px = |x: f64, y: f64| {
        (
            (x - min_x + margin) * scale,
            // svg y grows downward
            size - (y - min_y + margin) * scale,
        )
    };

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if unit_boundary(metric) {
        let (cx, cy) = to_px(0.0, 0.0);
        let r = scale;
        svg.push_str(&format!(
            "<circle cx=\"{cx:.4}\" cy=\"{cy:.4}\" r=\"{r:.4}\" fill=\"none\" stroke=\"#999999\" stroke-width=\"1\"/>\n"
        ));
    }
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|&(x, y)| {
                let (px, py) = to_px(x, y);
                format!("{px:.4},{py:.4}")
            })
            .collect();
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\">\n<title>{}</title>\n</polyline>\n",
            pts.join(" "),
            xml_escape(&c.label)
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
