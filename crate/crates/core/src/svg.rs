//! Minimal SVG scene writer. Output is byte-stable for identical input.

use std::fmt::Write;

use crate::geometry::{Point, Rect};

pub struct SvgScene {
    view: Rect,
    scale: f64,
    width: f64,
    height: f64,
    body: String,
}

impl SvgScene {
    /// A scene showing `view`, `width_px` pixels wide, with a white background
    /// and the rectangle outlined.
    pub fn new(view: Rect, width_px: f64) -> Self {
        let scale = width_px / view.width();
        let mut scene = Self {
            view,
            scale,
            width: width_px,
            height: view.height() * scale,
            body: String::new(),
        };
        let _ = writeln!(
            scene.body,
            r##"<rect x="0" y="0" width="{:.3}" height="{:.3}" fill="#ffffff" stroke="#444444" stroke-width="1"/>"##,
            scene.width, scene.height
        );
        scene
    }

    fn map(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.view.x0) * self.scale,
            (self.view.y1 - p.y) * self.scale,
        )
    }

    pub fn points(&mut self, points: &[Point], radius: f64, fill: &str) {
        if points.is_empty() {
            return;
        }
        let _ = writeln!(self.body, r#"<g fill="{fill}">"#);
        for &p in points {
            let (x, y) = self.map(p);
            let _ = writeln!(self.body, r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius:.3}"/>"#);
        }
        self.body.push_str("</g>\n");
    }

    pub fn polyline(&mut self, vertices: &[Point], stroke: &str, width: f64, dashed: bool) {
        if vertices.is_empty() {
            return;
        }
        let coords: Vec<String> = vertices
            .iter()
            .map(|&p| {
                let (x, y) = self.map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{stroke}" stroke-width="{width:.3}"{dash}/>"#,
            coords.join(" ")
        );
    }

    pub fn marker(&mut self, p: Point, radius: f64, fill: &str) {
        let (x, y) = self.map(p);
        let _ = writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{radius:.3}" fill="{fill}"/>"#
        );
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.3}\" height=\"{h:.3}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n{}</svg>\n",
            self.body,
            w = self.width,
            h = self.height
        )
    }
}
