//! Explicit Euler integration of the limiting position equation
//! `ρ' = λ e^{iν} / √f(ρ)`, optionally coupled with the cost equation
//! `C' = q / f(ρ)^{g/2}`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::point_process::DensitySpec;

/// Default Euler step relative to the domain diameter.
pub const DEFAULT_RELATIVE_STEP: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OdeSpec {
    pub lambda: f64,
    pub nu: f64,
    pub start: Point,
    pub density: DensitySpec,
    pub h: f64,
    #[serde(default)]
    pub cost_q: Option<f64>,
    #[serde(default)]
    pub cost_g: Option<f64>,
}

impl OdeSpec {
    /// Position equation only, with the default step.
    pub fn new(lambda: f64, nu: f64, start: Point, density: DensitySpec) -> Self {
        Self {
            lambda,
            nu,
            start,
            density,
            h: DEFAULT_RELATIVE_STEP * density.domain.diameter(),
            cost_q: None,
            cost_g: None,
        }
    }

    pub fn with_step(mut self, h: f64) -> Self {
        self.h = h;
        self
    }

    pub fn with_cost(mut self, q: f64, g: f64) -> Self {
        self.cost_q = Some(q);
        self.cost_g = Some(g);
        self
    }

    fn validate(&self) -> Result<()> {
        self.density.validate()?;
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda {} must be positive", self.lambda)));
        }
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::InvalidParameter(format!("step {} must be positive", self.h)));
        }
        if !self.nu.is_finite() {
            return Err(Error::InvalidParameter("direction is not finite".into()));
        }
        if !self.density.domain.contains(self.start) {
            return Err(Error::InvalidParameter("start lies outside the domain".into()));
        }
        if self.cost_q.is_some() != self.cost_g.is_some() {
            return Err(Error::InvalidParameter("cost_q and cost_g go together".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Stop {
    /// Integrate on `[0, T]`.
    FixedTime(f64),
    /// Integrate until the ray passes `target`, which must lie within `tol`
    /// of the half-line from the start along `ν`.
    HitPoint { target: Point, tol: f64 },
    /// Integrate until the iterate leaves `D[a]`.
    LeaveInset,
}

/// A sampled solution.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LimitCurve {
    pub times: Vec<f64>,
    pub positions: Vec<Point>,
    pub costs: Option<Vec<f64>>,
    pub hit_time: Option<f64>,
}

impl LimitCurve {
    /// A curve standing still at `p`.
    pub fn constant(p: Point) -> Self {
        Self {
            times: vec![0.0],
            positions: vec![p],
            costs: None,
            hit_time: Some(0.0),
        }
    }

    pub fn end_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(0.0)
    }

    pub fn final_position(&self) -> Option<Point> {
        self.positions.last().copied()
    }

    pub fn final_cost(&self) -> Option<f64> {
        self.costs.as_ref().and_then(|c| c.last().copied())
    }

    /// Linear interpolation of the position at time `x`, frozen at the end
    /// points outside the integration range.
    pub fn position_at(&self, x: f64) -> Point {
        let t = &self.times;
        if x <= t[0] {
            return self.positions[0];
        }
        if x >= self.end_time() {
            return *self.positions.last().expect("non-empty curve");
        }
        let k = t.partition_point(|&v| v <= x);
        let (t0, t1) = (t[k - 1], t[k]);
        let f = if t1 > t0 { (x - t0) / (t1 - t0) } else { 0.0 };
        self.positions[k - 1] + (self.positions[k] - self.positions[k - 1]) * f
    }

    /// Appends `other`, shifting its times so that it starts where `self` ends.
    pub fn glue(mut self, other: LimitCurve) -> LimitCurve {
        let offset = self.end_time();
        let skip = usize::from(!self.times.is_empty());
        self.times.extend(other.times.iter().skip(skip).map(|t| t + offset));
        self.positions.extend(other.positions.iter().skip(skip));
        self.costs = match (self.costs, other.costs) {
            (Some(mut a), Some(b)) => {
                let base = a.last().copied().unwrap_or(0.0);
                a.extend(b.iter().skip(skip).map(|c| c + base));
                Some(a)
            }
            _ => None,
        };
        self.hit_time = other.hit_time.map(|h| h + offset);
        self
    }

    /// One row per sample: `time,x,y,cost` (cost empty when not integrated).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["time", "x", "y", "cost"])?;
        for (k, (t, p)) in self.times.iter().zip(&self.positions).enumerate() {
            let cost = self
                .costs
                .as_ref()
                .map(|c| c[k].to_string())
                .unwrap_or_default();
            w.write_record([t.to_string(), p.x.to_string(), p.y.to_string(), cost])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Explicit Euler integration.
pub fn euler_solve(spec: &OdeSpec, stop: Stop) -> Result<LimitCurve> {
    euler_solve_perturbed(spec, stop, |_| Point::ORIGIN)
}

/// Euler integration with `perturb(k)` added to the slope at step `k`.
pub fn euler_solve_perturbed(
    spec: &OdeSpec,
    stop: Stop,
    mut perturb: impl FnMut(usize) -> Point,
) -> Result<LimitCurve> {
    spec.validate()?;
    let dir = Point::unit(spec.nu);
    let f = |p: Point| spec.density.eval(p);
    let domain = spec.density.domain;
    let inset = spec.density.inset_domain();
    let h = spec.h;
    let cost = spec.cost_q.zip(spec.cost_g);

    let (fixed_steps, goal) = match stop {
        Stop::FixedTime(t) => {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::InvalidParameter(format!("end time {t} must be non-negative")));
            }
            ((t / h).ceil() as usize, None)
        }
        Stop::HitPoint { target, tol } => {
            let v = target - spec.start;
            if v.cross(dir).abs() > tol || v.dot(dir) < -tol {
                return Err(Error::InvalidParameter(
                    "target is not on the ray of the equation".into(),
                ));
            }
            (usize::MAX, Some((target, v.dot(dir))))
        }
        Stop::LeaveInset => (usize::MAX, None),
    };

    let mut curve = LimitCurve {
        times: vec![0.0],
        positions: vec![spec.start],
        costs: cost.map(|_| vec![0.0]),
        hit_time: None,
    };
    if let Some((target, dist)) = goal {
        if dist <= 0.0 {
            curve.positions[0] = target;
            curve.hit_time = Some(0.0);
            return Ok(curve);
        }
    }
    let mut rho = spec.start;
    let mut c = 0.0;
    let mut k = 0usize;
    loop {
        if k >= fixed_steps {
            break;
        }
        let fk = f(rho);
        let slope = dir * (spec.lambda / fk.sqrt()) + perturb(k);
        // the last step of a fixed horizon is shortened to land on T exactly
        let step = match stop {
            Stop::FixedTime(t) => h.min(t - k as f64 * h),
            _ => h,
        };
        let next = rho + slope * step;
        let next_c = cost.map(|(q, g)| c + step * q / fk.powf(g / 2.0));
        let x = curve.times[k] + step;
        if let Some((target, dist)) = goal {
            let (p0, p1) = ((rho - spec.start).dot(dir), (next - spec.start).dot(dir));
            if p1 >= dist {
                let frac = if p1 > p0 { (dist - p0) / (p1 - p0) } else { 1.0 };
                let hit = curve.times[k] + frac * step;
                curve.times.push(hit);
                curve.positions.push(target);
                if let (Some(costs), Some(nc)) = (curve.costs.as_mut(), next_c) {
                    costs.push(c + frac * (nc - c));
                }
                curve.hit_time = Some(hit);
                return Ok(curve);
            }
        }
        if !domain.contains(next) || !next.is_finite() {
            return Err(Error::StepOutOfDomain { step: k + 1 });
        }
        rho = next;
        curve.times.push(x);
        curve.positions.push(rho);
        if let (Some(costs), Some(nc)) = (curve.costs.as_mut(), next_c) {
            costs.push(nc);
            c = nc;
        }
        k += 1;
        if matches!(stop, Stop::LeaveInset) && !inset.contains(rho) {
            break;
        }
    }
    Ok(curve)
}

/// `T^λ_{s,t}`: time for the solution started at `s` towards `t` to reach `t`.
pub fn hit_time(lambda: f64, s: Point, t: Point, density: &DensitySpec, h: f64) -> Result<f64> {
    Ok(hit_curve(lambda, s, t, density, h, None)?.hit_time.unwrap_or(0.0))
}

/// The curve from `s` to `t`, optionally with the coupled cost `(q, g)`.
pub(crate) fn hit_curve(
    lambda: f64,
    s: Point,
    t: Point,
    density: &DensitySpec,
    h: f64,
    cost: Option<(f64, f64)>,
) -> Result<LimitCurve> {
    let inset = density.inset_domain();
    // D[a] is convex, so the segment is inside once its ends are
    if !inset.contains(s) || !inset.contains(t) {
        return Err(Error::SegmentLeavesDomain);
    }
    if s == t {
        let mut c = LimitCurve::constant(s);
        c.costs = cost.map(|_| vec![0.0]);
        return Ok(c);
    }
    let mut spec = OdeSpec::new(lambda, (t - s).arg(), s, *density).with_step(h);
    if let Some((q, g)) = cost {
        spec = spec.with_cost(q, g);
    }
    let tol = 1e-9 * s.distance(t).max(1.0);
    euler_solve(&spec, Stop::HitPoint { target: t, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use crate::point_process::DensityKind;

    fn affine() -> DensitySpec {
        DensitySpec::new(DensityKind::Affine { a: 1.0, b: 1.0, c: 0.0 }, Rect::UNIT, 0.01).unwrap()
    }

    #[test]
    fn constant_density_is_exact() {
        let d = DensitySpec::new(DensityKind::Constant { c: 4.0 }, Rect::UNIT, 0.05).unwrap();
        let spec = OdeSpec::new(0.5, 0.3, Point::new(0.2, 0.2), d).with_step(1e-3);
        let curve = euler_solve(&spec, Stop::FixedTime(0.5)).unwrap();
        let end = curve.final_position().unwrap();
        let exact = Point::new(0.2, 0.2) + Point::unit(0.3) * (0.5 * 0.5 / 2.0);
        assert!(end.distance(exact) < 1e-12);
        let s = Point::new(0.1, 0.1);
        let t = Point::new(0.7, 0.9);
        let ht = hit_time(0.8, s, t, &d, 1e-3).unwrap();
        assert!((ht - 1.0 * 2.0 / 0.8).abs() < 1e-12, "{ht}");
    }

    #[test]
    fn affine_hit_time_matches_quadrature() {
        // λ⁻¹ ∫₀^½ √(1+u) du = (2/3)(1.5^{3/2} - 1)
        let exact = 2.0 / 3.0 * (1.5f64.powf(1.5) - 1.0);
        let s = Point::new(0.02, 0.5);
        let t = Point::new(0.52, 0.5);
        let d = affine();
        let shifted = |u: f64| (1.0 + 0.02 + u).powf(1.5);
        let exact_shifted = 2.0 / 3.0 * (shifted(0.5) - shifted(0.0));
        let got = hit_time(1.0, s, t, &d, 1e-4).unwrap();
        assert!((got - exact_shifted).abs() < 1e-3, "{got} vs {exact_shifted}");
        assert!((exact - 0.558078).abs() < 1e-6);
        assert_eq!(hit_time(1.0, s, s, &d, 1e-4).unwrap(), 0.0);
        assert!(matches!(
            hit_time(1.0, Point::new(0.0, 0.5), t, &d, 1e-4),
            Err(Error::SegmentLeavesDomain)
        ));
    }

    #[test]
    fn cost_with_g_one_is_length_ratio() {
        let d = DensitySpec::new(DensityKind::Constant { c: 2.0 }, Rect::UNIT, 0.05).unwrap();
        let (lambda, q) = (0.9, 1.2);
        let s = Point::new(0.1, 0.3);
        let t = Point::new(0.8, 0.6);
        let curve = hit_curve(lambda, s, t, &d, 1e-4, Some((q, 1.0))).unwrap();
        let expected = q / lambda * s.distance(t);
        assert!((curve.final_cost().unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn leaving_the_domain_is_an_error() {
        let spec = OdeSpec::new(1.0, 0.0, Point::new(0.5, 0.5), affine()).with_step(1e-2);
        assert!(matches!(
            euler_solve(&spec, Stop::FixedTime(5.0)),
            Err(Error::StepOutOfDomain { .. })
        ));
        let curve = euler_solve(&spec, Stop::LeaveInset).unwrap();
        assert!(curve.final_position().unwrap().x > 0.99);
    }

    #[test]
    fn glue_and_interpolate() {
        let a = LimitCurve {
            times: vec![0.0, 1.0],
            positions: vec![Point::ORIGIN, Point::new(1.0, 0.0)],
            costs: None,
            hit_time: Some(1.0),
        };
        let b = LimitCurve {
            times: vec![0.0, 2.0],
            positions: vec![Point::new(1.0, 0.0), Point::new(1.0, 2.0)],
            costs: None,
            hit_time: Some(2.0),
        };
        let g = a.glue(b);
        assert_eq!(g.times, vec![0.0, 1.0, 3.0]);
        assert_eq!(g.hit_time, Some(3.0));
        assert_eq!(g.position_at(2.0), Point::new(1.0, 1.0));
        assert_eq!(g.position_at(10.0), Point::new(1.0, 2.0));
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("time,x,y,cost\n0,0,0,\n"));
    }
}
