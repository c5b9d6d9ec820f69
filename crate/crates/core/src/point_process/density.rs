//! Lipschitz intensities on a rectangle, bounded away from zero.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Rect};

/// Sup of |φ'| for the bump profile φ(ρ) = (1 - ρ²)², reached at ρ = 1/√3.
const BUMP_PROFILE_LIPSCHITZ: f64 = 1.539_600_717_839_002; // 8 / (3√3)

/// Parametric intensity families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DensityKind {
    Constant {
        c: f64,
    },
    /// `f(x, y) = a + b x + c y`
    Affine {
        a: f64,
        b: f64,
        c: f64,
    },
    /// `f = base + amplitude (1 - ρ²)²` with `ρ = |z - center| / radius`,
    /// truncated to `base` outside the disk.
    RadialBump {
        center: Point,
        base: f64,
        amplitude: f64,
        radius: f64,
    },
}

impl DensityKind {
    pub fn eval(&self, p: Point) -> f64 {
        match *self {
            DensityKind::Constant { c } => c,
            DensityKind::Affine { a, b, c } => a + b * p.x + c * p.y,
            DensityKind::RadialBump {
                center,
                base,
                amplitude,
                radius,
            } => base + amplitude * bump_profile(p.distance(center) / radius),
        }
    }

    fn params(&self) -> Vec<f64> {
        match *self {
            DensityKind::Constant { c } => vec![c],
            DensityKind::Affine { a, b, c } => vec![a, b, c],
            DensityKind::RadialBump {
                center,
                base,
                amplitude,
                radius,
            } => vec![center.x, center.y, base, amplitude, radius],
        }
    }
}

fn bump_profile(rho: f64) -> f64 {
    if rho >= 1.0 {
        0.0
    } else {
        let q = 1.0 - rho * rho;
        q * q
    }
}

/// `constant:C`, `affine:A,B,C` or `bump:CX,CY,BASE,AMPLITUDE,RADIUS`.
impl FromStr for DensityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("density `{s}`: expected NAME:PARAMS")))?;
        let values = args
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("density parameter `{v}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |n: usize| {
            if values.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "density `{name}` takes {n} parameters, got {}",
                    values.len()
                )))
            }
        };
        match name.trim() {
            "constant" => {
                arity(1)?;
                Ok(DensityKind::Constant { c: values[0] })
            }
            "affine" => {
                arity(3)?;
                Ok(DensityKind::Affine {
                    a: values[0],
                    b: values[1],
                    c: values[2],
                })
            }
            "bump" => {
                arity(5)?;
                Ok(DensityKind::RadialBump {
                    center: Point::new(values[0], values[1]),
                    base: values[2],
                    amplitude: values[3],
                    radius: values[4],
                })
            }
            other => Err(Error::Parse(format!("unknown density family `{other}`"))),
        }
    }
}

impl fmt::Display for DensityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            DensityKind::Constant { .. } => "constant",
            DensityKind::Affine { .. } => "affine",
            DensityKind::RadialBump { .. } => "bump",
        };
        let params: Vec<String> = self.params().iter().map(f64::to_string).collect();
        write!(f, "{name}:{}", params.join(","))
    }
}

/// An intensity `f` on a rectangular domain, together with the inset `a`
/// defining `D[a]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensitySpec {
    pub kind: DensityKind,
    pub domain: Rect,
    pub inset_a: f64,
}

impl DensitySpec {
    pub fn new(kind: DensityKind, domain: Rect, inset_a: f64) -> Result<Self> {
        let spec = Self {
            kind,
            domain,
            inset_a,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Constant intensity 1 on the unit square.
    pub fn uniform_unit_square(inset_a: f64) -> Result<Self> {
        Self::new(DensityKind::Constant { c: 1.0 }, Rect::UNIT, inset_a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.params().iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDensity("non-finite parameter".into()));
        }
        let d = self.domain;
        if !(d.x1 > d.x0 && d.y1 > d.y0) || !d.area().is_finite() {
            return Err(Error::InvalidDensity("degenerate domain".into()));
        }
        if let DensityKind::RadialBump { radius, .. } = self.kind {
            if !(radius > 0.0) {
                return Err(Error::InvalidDensity("bump radius must be positive".into()));
            }
        }
        let half_side = 0.5 * d.width().min(d.height());
        if !(self.inset_a > 0.0 && self.inset_a < half_side) {
            return Err(Error::InvalidDensity(format!(
                "inset {} must lie in (0, {half_side})",
                self.inset_a
            )));
        }
        if !(self.min_value() > 0.0) {
            return Err(Error::InvalidDensity(format!(
                "infimum {} is not positive",
                self.min_value()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.kind.eval(p)
    }

    /// `m_f`, the infimum over the domain.
    pub fn min_value(&self) -> f64 {
        self.extremes().0
    }

    /// `M_f`, the maximum over the domain.
    pub fn max_value(&self) -> f64 {
        self.extremes().1
    }

    fn extremes(&self) -> (f64, f64) {
        let corners = self.domain.corners();
        match self.kind {
            DensityKind::Constant { c } => (c, c),
            DensityKind::Affine { .. } => corners
                .iter()
                .map(|&p| self.eval(p))
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v))),
            DensityKind::RadialBump {
                center,
                base,
                amplitude,
                radius,
            } => {
                let d = self.domain;
                let nearest = Point::new(center.x.clamp(d.x0, d.x1), center.y.clamp(d.y0, d.y1));
                let near = bump_profile(nearest.distance(center) / radius);
                let far = corners
                    .iter()
                    .map(|c| c.distance(center))
                    .fold(0.0, f64::max);
                let far = bump_profile(far / radius);
                let (a, b) = (base + amplitude * near, base + amplitude * far);
                (a.min(b), a.max(b))
            }
        }
    }

    /// Lipschitz constant `α_f`.
    pub fn lipschitz(&self) -> f64 {
        match self.kind {
            DensityKind::Constant { .. } => 0.0,
            DensityKind::Affine { b, c, .. } => b.hypot(c),
            DensityKind::RadialBump {
                amplitude, radius, ..
            } => amplitude.abs() * BUMP_PROFILE_LIPSCHITZ / radius,
        }
    }

    /// `∫_D f`.
    pub fn integral(&self) -> f64 {
        let d = self.domain;
        match self.kind {
            DensityKind::Constant { c } => c * d.area(),
            DensityKind::Affine { .. } => self.eval(d.center()) * d.area(),
            DensityKind::RadialBump {
                center,
                base,
                amplitude,
                radius,
            } => {
                let disk_inside = center.x - radius >= d.x0
                    && center.x + radius <= d.x1
                    && center.y - radius >= d.y0
                    && center.y + radius <= d.y1;
                let bump_mass = if disk_inside {
                    std::f64::consts::PI * radius * radius / 3.0
                } else {
                    clipped_bump_mass(center, radius, d)
                };
                base * d.area() + amplitude * bump_mass
            }
        }
    }

    /// Mean of `f` over the domain.
    pub fn mean_value(&self) -> f64 {
        self.integral() / self.domain.area()
    }

    /// `D[a]`.
    pub fn inset_domain(&self) -> Rect {
        self.domain
            .inset(self.inset_a)
            .expect("validated inset is smaller than half the shorter side")
    }
}

/// Midpoint rule for ∫ φ(|z - c| / r) over the part of the support inside `domain`.
fn clipped_bump_mass(center: Point, radius: f64, domain: Rect) -> f64 {
    let x0 = (center.x - radius).max(domain.x0);
    let x1 = (center.x + radius).min(domain.x1);
    let y0 = (center.y - radius).max(domain.y0);
    let y1 = (center.y + radius).min(domain.y1);
    if x1 <= x0 || y1 <= y0 {
        return 0.0;
    }
    const CELLS: usize = 800;
    let (dx, dy) = ((x1 - x0) / CELLS as f64, (y1 - y0) / CELLS as f64);
    let mut total = 0.0;
    for i in 0..CELLS {
        let x = x0 + (i as f64 + 0.5) * dx;
        for j in 0..CELLS {
            let y = y0 + (j as f64 + 0.5) * dy;
            total += bump_profile(Point::new(x, y).distance(center) / radius);
        }
    }
    total * dx * dy
}
