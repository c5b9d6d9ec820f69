//! Planar primitives: points with complex-number semantics, angular sectors
//! and their triangle / Camembert decision domains, the cross around a point,
//! the corner point `I(s, t)` and the limiting polyline of cross navigations.

use std::f64::consts::{PI, TAU};
use std::ops::{Add, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used only where boundary membership is decided. Random samples never
/// sit on a boundary; hand-built fixtures do.
pub const BOUNDARY_EPS: f64 = 1e-12;

/// A point (or displacement) of the plane, identified with a complex number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Unit vector `e^{i angle}`.
    pub fn unit(angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self { x: cos, y: sin }
    }

    pub fn from_polar(radius: f64, angle: f64) -> Self {
        Self::unit(angle) * radius
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    /// Argument in `[0, 2π)`, with `arg(0) = 0`.
    pub fn arg(self) -> f64 {
        if self.x == 0.0 && self.y == 0.0 {
            return 0.0;
        }
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product `self × other`.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    /// Multiplication by `e^{i angle}`.
    pub fn rotate(self, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        Self {
            x: self.x * cos - self.y * sin,
            y: self.x * sin + self.y * cos,
        }
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    fn div(self, rhs: f64) -> Point {
        Point::new(self.x / rhs, self.y / rhs)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Maps any angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// Signed difference `a - b` wrapped into `(-π, π]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Rect {
    pub const UNIT: Rect = Rect {
        x0: 0.0,
        y0: 0.0,
        x1: 1.0,
        y1: 1.0,
    };

    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let all_finite = [x0, y0, x1, y1].iter().all(|v| v.is_finite());
        if !all_finite || x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidParameter(format!(
                "degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self { x0, y0, x1, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.x0, self.y0),
            Point::new(self.x1, self.y0),
            Point::new(self.x1, self.y1),
            Point::new(self.x0, self.y1),
        ]
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// The set of points at distance at least `a` from the complement.
    /// `None` once the inset swallows the whole rectangle.
    pub fn inset(&self, a: f64) -> Option<Rect> {
        let r = Rect {
            x0: self.x0 + a,
            y0: self.y0 + a,
            x1: self.x1 - a,
            y1: self.y1 - a,
        };
        (r.x0 <= r.x1 && r.y0 <= r.y1).then_some(r)
    }

    /// Smallest rectangle containing every given point, grown by `margin`.
    pub fn bounding(points: impl IntoIterator<Item = Point>, margin: f64) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect {
            x0: first.x,
            y0: first.y,
            x1: first.x,
            y1: first.y,
        };
        for p in it {
            r.x0 = r.x0.min(p.x);
            r.y0 = r.y0.min(p.y);
            r.x1 = r.x1.max(p.x);
            r.y1 = r.y1.max(p.y);
        }
        let margin = margin.max(f64::MIN_POSITIVE);
        Some(Rect {
            x0: r.x0 - margin,
            y0: r.y0 - margin,
            x1: r.x1 + margin,
            y1: r.y1 + margin,
        })
    }
}

/// Shape of a decision domain, without its size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DomainShape {
    /// Disk sector: radius key is the modulus.
    Camembert,
    /// Isosceles triangle: radius key is the projection on the bisector.
    Triangle,
}

/// Shape of a [`SectorFrame`], with the height where one applies.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FrameShape {
    Sector,
    Camembert(f64),
    Triangle(f64),
}

/// An angular sector `apex + e^{iν} Sect(2 half_angle)`, optionally cut into a
/// Camembert portion or a triangle of height `h`. The apex never belongs to it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorFrame {
    pub apex: Point,
    pub direction: f64,
    pub half_angle: f64,
    pub shape: FrameShape,
}

impl SectorFrame {
    pub fn new(apex: Point, direction: f64, half_angle: f64, shape: FrameShape) -> Result<Self> {
        if !(half_angle > 0.0 && half_angle < PI) {
            return Err(Error::InvalidParameter(format!(
                "half angle {half_angle} outside (0, π)"
            )));
        }
        match shape {
            FrameShape::Camembert(h) | FrameShape::Triangle(h) if !(h > 0.0) => {
                return Err(Error::InvalidParameter(format!("height {h} must be positive")));
            }
            FrameShape::Triangle(_) if half_angle > PI / 2.0 => {
                return Err(Error::InvalidParameter(
                    "triangles need a half angle of at most π/2".into(),
                ));
            }
            _ => {}
        }
        Ok(Self {
            apex,
            direction: normalize_angle(direction),
            half_angle,
            shape,
        })
    }

    /// Coordinates of `p` in the frame: along the bisector, then across it.
    pub fn local(&self, p: Point) -> (f64, f64) {
        local_coords(p, self.apex, self.direction)
    }

    pub fn first_border_direction(&self) -> f64 {
        normalize_angle(self.direction - self.half_angle)
    }
}

pub(crate) fn local_coords(p: Point, apex: Point, direction: f64) -> (f64, f64) {
    let v = (p - apex).rotate(-direction);
    (v.x, v.y)
}

/// Membership in the infinite sector of half-angle `half_angle` around
/// `direction`, apex excluded, boundary half-lines included.
pub(crate) fn in_sector_local(u: f64, w: f64, half_angle: f64) -> bool {
    if u == 0.0 && w == 0.0 {
        return false;
    }
    w.atan2(u).abs() <= half_angle + BOUNDARY_EPS
}

/// Membership in the infinite triangle cone (`u > 0`, `|w| ≤ u tan(half)`).
pub(crate) fn in_triangle_cone_local(u: f64, w: f64, half_angle: f64) -> bool {
    if u <= 0.0 {
        return false;
    }
    if half_angle >= PI / 2.0 {
        return true;
    }
    w.abs() <= u * half_angle.tan() + BOUNDARY_EPS * (u + w.abs())
}

/// Whether `p` lies in the decision domain described by `frame`.
pub fn in_decision_domain(p: Point, frame: &SectorFrame) -> bool {
    let (u, w) = frame.local(p);
    match frame.shape {
        FrameShape::Sector => in_sector_local(u, w, frame.half_angle),
        FrameShape::Camembert(h) => {
            let r = u.hypot(w);
            r > 0.0 && r <= h && in_sector_local(u, w, frame.half_angle)
        }
        FrameShape::Triangle(h) => u <= h && in_triangle_cone_local(u, w, frame.half_angle),
    }
}

/// Distance from `p` to the first border half-line of the frame (the border
/// at angle `ν - θ/2`). Used to break ties among equally near candidates.
pub fn border_distance(p: Point, frame: &SectorFrame) -> f64 {
    border_distance_raw(p, frame.apex, frame.first_border_direction())
}

pub(crate) fn border_distance_raw(p: Point, apex: Point, border_direction: f64) -> f64 {
    let d = Point::unit(border_direction);
    let v = p - apex;
    if v.dot(d) <= 0.0 {
        v.norm()
    } else {
        v.cross(d).abs()
    }
}

/// Parameters of a cross navigation: `p_θ ≥ 3` sectors of angle `θ = 2π/p_θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossParams {
    p_theta: u32,
}

impl CrossParams {
    pub fn new(p_theta: u32) -> Result<Self> {
        if p_theta < 3 {
            return Err(Error::InvalidParameter(format!(
                "p_theta must be at least 3, got {p_theta}"
            )));
        }
        Ok(Self { p_theta })
    }

    pub fn p_theta(&self) -> u32 {
        self.p_theta
    }

    pub fn theta(&self) -> f64 {
        TAU / self.p_theta as f64
    }

    /// Direction of the bisector of sector `kappa`, rotated by `north`.
    pub fn bisector(&self, kappa: usize, north: f64) -> f64 {
        normalize_angle(north + kappa as f64 * self.theta())
    }
}

/// Index `κ` of the angular sector around `s` that contains `t`. On a border
/// half-line the smaller index wins.
pub fn sector_index(s: Point, t: Point, cross: CrossParams) -> Result<usize> {
    sector_index_with_north(s, t, cross, 0.0)
}

/// [`sector_index`] for sectors whose bisectors are rotated by `north`.
pub fn sector_index_with_north(s: Point, t: Point, cross: CrossParams, north: f64) -> Result<usize> {
    if s == t {
        return Err(Error::DegeneratePair);
    }
    let theta = cross.theta();
    let a = (t - s).arg();
    let p = cross.p_theta as usize;
    let found = (0..p).find(|&k| {
        angle_diff(a, north + k as f64 * theta).abs() <= theta / 2.0 + BOUNDARY_EPS
    });
    // the sectors cover the circle, so the fallback only guards NaN input
    Ok(found.unwrap_or_else(|| {
        (normalize_angle(a - north) / theta).round() as usize % p
    }))
}

/// The corner point `I(s, t)`: where the parallels through `t` to the two
/// borders of the sector of `s` containing `t` meet the bisector, keeping the
/// intersection closer to `s`.
pub fn corner_point(s: Point, t: Point, cross: CrossParams) -> Result<Point> {
    corner_point_with_north(s, t, cross, 0.0)
}

pub fn corner_point_with_north(s: Point, t: Point, cross: CrossParams, north: f64) -> Result<Point> {
    let kappa = sector_index_with_north(s, t, cross, north)?;
    let theta = cross.theta();
    let bisector = cross.bisector(kappa, north);
    let b = Point::unit(bisector);
    let v = t - s;
    let reach = [bisector - theta / 2.0, bisector + theta / 2.0]
        .iter()
        .map(|&phi| {
            let d = Point::unit(phi);
            v.cross(d) / b.cross(d)
        })
        .fold(f64::INFINITY, f64::min)
        .max(0.0);
    Ok(s + b * reach)
}

/// A polyline given by its vertices.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Polyline(pub Vec<Point>);

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Self {
        Self(vertices)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn length(&self) -> f64 {
        self.0.windows(2).map(|w| w[0].distance(w[1])).sum()
    }

    /// Vertices plus interior points so that consecutive samples are at most
    /// `resolution` apart along the polyline.
    pub fn sample(&self, resolution: f64) -> Vec<Point> {
        let mut out = Vec::new();
        let Some(&first) = self.0.first() else {
            return out;
        };
        out.push(first);
        for w in self.0.windows(2) {
            let len = w[0].distance(w[1]);
            let pieces = ((len / resolution).ceil() as usize).max(1);
            for k in 1..=pieces {
                let f = k as f64 / pieces as f64;
                out.push(w[0] + (w[1] - w[0]) * f);
            }
        }
        out
    }

    /// Euclidean distance from `p` to the polyline.
    pub fn distance_to(&self, p: Point) -> f64 {
        match self.0.len() {
            0 => f64::INFINITY,
            1 => p.distance(self.0[0]),
            _ => self
                .0
                .windows(2)
                .map(|w| point_segment_distance(p, w[0], w[1]))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn bounding_rect(&self) -> Option<Rect> {
        Rect::bounding(self.0.iter().copied(), 0.0)
    }
}

pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let f = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * f)
}

/// The limiting trajectory `Γ(s, t) = [s, I(s, t)] ∪ [I(s, t), t]`.
/// Collapses to `(s)` when `s = t` and to `(s, t)` when `t` is on the bisector.
pub fn gamma_path(s: Point, t: Point, cross: CrossParams) -> Polyline {
    if s == t {
        return Polyline(vec![s]);
    }
    let corner = corner_point(s, t, cross).expect("s != t");
    if corner.distance(t) <= BOUNDARY_EPS * s.distance(t) {
        Polyline(vec![s, t])
    } else {
        Polyline(vec![s, corner, t])
    }
}

/// Weighted length `c1 |I - s| + c2 |t - I|` of `Γ(s, t)`.
pub fn weighted_gamma_length(s: Point, t: Point, c1: f64, c2: f64, cross: CrossParams) -> f64 {
    if s == t {
        return 0.0;
    }
    let corner = corner_point(s, t, cross).expect("s != t");
    c1 * corner.distance(s) + c2 * t.distance(corner)
}

/// Symmetric Hausdorff distance between two polylines. Each polyline is
/// sampled with step at most `resolution` and every sample is measured
/// exactly against the other polyline, so the result is within
/// `resolution / 2` of the true value.
pub fn hausdorff_distance(a: &Polyline, b: &Polyline, resolution: f64) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParameter("empty polyline".into()));
    }
    if !(resolution > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "resolution {resolution} must be positive"
        )));
    }
    let directed = |from: &Polyline, to: &Polyline| {
        from.sample(resolution)
            .into_iter()
            .map(|p| to.distance_to(p))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}
