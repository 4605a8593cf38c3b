//! Static SVG output. Exact points are projected to doubles only here, at
//! the final step, and all numbers are printed with six decimals so the same
//! input always produces byte-identical output.

use quasitomo_core::model_set::FinitePointSet;
use quasitomo_core::polygon::PolygonInPlane;
use quasitomo_core::QtResult;

const SCALE: f64 = 40.0;
const POINT_RADIUS: f64 = 3.0;
const MARGIN: f64 = 20.0;

fn fmt(x: f64) -> String {
    // normalize negative zero so output is stable across code paths
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.6}", x)
}

struct Canvas {
    min_x: f64,
    min_y: f64,
    max_x: f64,
    max_y: f64,
    any: bool,
}

impl Canvas {
    fn new() -> Self {
        Canvas { min_x: 0.0, min_y: 0.0, max_x: 0.0, max_y: 0.0, any: false }
    }

    fn cover(&mut self, (x, y): (f64, f64)) {
        if !self.any {
            self.min_x = x;
            self.max_x = x;
            self.min_y = y;
            self.max_y = y;
            self.any = true;
        } else {
            self.min_x = self.min_x.min(x);
            self.max_x = self.max_x.max(x);
            self.min_y = self.min_y.min(y);
            self.max_y = self.max_y.max(y);
        }
    }

    /// Flip the y axis (SVG grows downward) and scale to pixels.
    fn place(&self, (x, y): (f64, f64)) -> (f64, f64) {
        ((x - self.min_x) * SCALE + MARGIN, (self.max_y - y) * SCALE + MARGIN)
    }

    fn size(&self) -> (f64, f64) {
        if !self.any {
            return (100.0, 100.0);
        }
        (
            (self.max_x - self.min_x) * SCALE + 2.0 * MARGIN,
            (self.max_y - self.min_y) * SCALE + 2.0 * MARGIN,
        )
    }
}

pub struct RenderInput<'a> {
    pub points: Option<&'a FinitePointSet>,
    /// Two additional point sets drawn in contrasting colors.
    pub switch: Option<(&'a FinitePointSet, &'a FinitePointSet)>,
    pub polygon: Option<&'a PolygonInPlane>,
}

pub fn render_svg(input: &RenderInput) -> QtResult<String> {
    let mut canvas = Canvas::new();
    let mut base: Vec<(f64, f64)> = Vec::new();
    let mut extra: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut poly: Vec<(f64, f64)> = Vec::new();

    if let Some(f) = input.points {
        for z in f.realized() {
            let p = z.embed(1);
            canvas.cover(p);
            base.push(p);
        }
    }
    if let Some((f1, f2)) = input.switch {
        for f in [f1, f2] {
            let mut layer = Vec::new();
            for z in f.realized() {
                let p = z.embed(1);
                canvas.cover(p);
                layer.push(p);
            }
            extra.push(layer);
        }
    }
    if let Some(p) = input.polygon {
        for v in p.vertices() {
            let q = v.embed(1);
            canvas.cover(q);
            poly.push(q);
        }
    }

    let (w, h) = canvas.size();
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 {} {}\">\n",
        fmt(w),
        fmt(h)
    ));

    if !poly.is_empty() {
        let mut d = String::new();
        for (i, &p) in poly.iter().enumerate() {
            let (x, y) = canvas.place(p);
            d.push_str(&format!("{}{} {}", if i == 0 { "M" } else { " L" }, fmt(x), fmt(y)));
        }
        d.push_str(" Z");
        out.push_str(&format!(
            "  <path d=\"{}\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n",
            d
        ));
    }

    for &p in &base {
        let (x, y) = canvas.place(p);
        out.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"#1b6ca8\"/>\n",
            fmt(x),
            fmt(y),
            fmt(POINT_RADIUS)
        ));
    }

    let colors = ["#c23b22", "#2a9d3a"];
    for (layer, color) in extra.iter().zip(colors.iter()) {
        for &p in layer {
            let (x, y) = canvas.place(p);
            out.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\"/>\n",
                fmt(x),
                fmt(y),
                fmt(POINT_RADIUS * 1.2),
                color
            ));
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use quasitomo_core::CycloRat;

    #[test]
    fn empty_canvas_is_valid() {
        let svg = render_svg(&RenderInput { points: None, switch: None, polygon: None }).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("viewBox=\"0 0 100.000000 100.000000\""));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn deterministic_output() {
        let f = FinitePointSet::new(
            4,
            CycloRat::zero(4).unwrap(),
            vec![
                CycloRat::from_integer_coeffs(4, &[0, 0]).unwrap(),
                CycloRat::from_integer_coeffs(4, &[2, 1]).unwrap(),
            ],
        )
        .unwrap();
        let input = RenderInput { points: Some(&f), switch: None, polygon: None };
        let a = render_svg(&input).unwrap();
        let b = render_svg(&input).unwrap();
        assert_eq!(a, b, "same input must give byte-identical SVG");
        assert_eq!(a.matches("<circle").count(), 2);
    }
}
