//! SVG rendering of a solved packing.
//!
//! Output is SVG 1.1 with the y-axis flipped so the picture matches the
//! mathematical orientation (outer triangle apex up). The viewBox frames
//! the outer triangle with a 5% margin on each side. Rendering is a pure
//! function of the solution: the same file in, the same bytes out.

use crate::solution::SolutionFile;

/// Side length basis of the outer triangle: corners (0,0), (2s,0), (s,3).
fn triangle_extent() -> (f64, f64) {
    (2.0 * 3.0f64.sqrt(), 3.0)
}

pub fn render_svg(sol: &SolutionFile, include_duals: bool) -> String {
    let (w, h) = triangle_extent();
    let (mx, my) = (0.05 * w, 0.05 * h);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         viewBox=\"{} {} {} {}\">\n",
        -mx,
        -my,
        w + 2.0 * mx,
        h + 2.0 * my
    ));
    // flip y: user coordinates are math-oriented, SVG's axis points down
    out.push_str(&format!("<g transform=\"matrix(1 0 0 -1 0 {h})\">\n"));

    if include_duals {
        let oc = &sol.outer_circle;
        out.push_str(&circle(oc.x, oc.y, oc.radius, "dual-outer", "#c62828", 0.03));
        for c in &sol.dual {
            out.push_str(&circle(c.x, c.y, c.radius, "dual", "#ef6c00", 0.02));
        }
    }
    for c in &sol.primal {
        out.push_str(&circle(c.x, c.y, c.radius, "primal", "#1565c0", 0.02));
    }

    out.push_str("</g>\n</svg>\n");
    out
}

fn circle(x: f64, y: f64, r: f64, class: &str, stroke: &str, width: f64) -> String {
    format!(
        "<circle class=\"{class}\" cx=\"{x}\" cy=\"{y}\" r=\"{r}\" \
         fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>\n"
    )
}
