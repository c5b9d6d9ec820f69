//! Limiting path length, stage count and costs of each targeted navigation.

use serde::{Deserialize, Serialize};

use super::constants::{constants, stage_law};
use super::moments::MomentCache;
use super::ode::{hit_curve, LimitCurve, DEFAULT_RELATIVE_STEP};
use crate::error::{Error, Result};
use crate::geometry::{corner_point, CrossParams, Point, Polyline};
use crate::navigation::{NavKind, NavSpec};
use crate::point_process::DensitySpec;

/// Deterministic limit of one `(s, t)` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    /// Limit of `|Path(s, t)|`.
    pub limit_length: f64,
    /// Limit of `Nb(s, t) / √n`.
    pub limit_nb_over_sqrt_n: f64,
    /// Limiting position as a function of `x = stages / √n`.
    pub curve: LimitCurve,
    /// `I(s, t)` for cross kinds.
    pub corner: Option<Point>,
}

impl Prediction {
    /// The limiting trajectory as a polyline: `[s, t]` or `Γ(s, t)`.
    pub fn trajectory(&self, s: Point, t: Point) -> Polyline {
        match self.corner {
            Some(i) if i != t && i != s => Polyline::new(vec![s, i, t]),
            _ if s == t => Polyline::new(vec![s]),
            _ => Polyline::new(vec![s, t]),
        }
    }
}

fn step_for(density: &DensitySpec) -> f64 {
    DEFAULT_RELATIVE_STEP * density.domain.diameter()
}

/// Straight kinds: the path converges to `[s, t]` travelled at speed `C̄`.
pub fn predict_straight(kind: NavKind, theta: f64, s: Point, t: Point, density: &DensitySpec) -> Result<Prediction> {
    if !kind.is_straight() {
        return Err(Error::InvalidParameter(format!("{} is not a straight navigation", kind.name())));
    }
    single_phase(kind, theta, s, t, density)
}

/// Random-north kinds: a straight limit with the random-north ratio and speed.
pub fn predict_random_north(
    kind: NavKind,
    p_theta: u32,
    s: Point,
    t: Point,
    density: &DensitySpec,
) -> Result<Prediction> {
    if !kind.is_random_north() {
        return Err(Error::InvalidParameter(format!("{} is not a random-north navigation", kind.name())));
    }
    single_phase(kind, CrossParams::new(p_theta)?.theta(), s, t, density)
}

fn single_phase(kind: NavKind, theta: f64, s: Point, t: Point, density: &DensitySpec) -> Result<Prediction> {
    let c = constants(kind, theta)?;
    let curve = hit_curve(c.c_bis, s, t, density, step_for(density), None)?;
    Ok(Prediction {
        limit_length: c.q_bis * s.distance(t),
        limit_nb_over_sqrt_n: curve.hit_time.unwrap_or(0.0),
        curve,
        corner: None,
    })
}

/// Cross kinds: `Γ(s, t)`, travelled at speed `C̄` to `I(s, t)` then `C̃` to `t`.
pub fn predict_cross(kind: NavKind, p_theta: u32, s: Point, t: Point, density: &DensitySpec) -> Result<Prediction> {
    if !matches!(kind, NavKind::Yao | NavKind::T) {
        return Err(Error::InvalidParameter(format!("{} is not a cross navigation", kind.name())));
    }
    let cross = CrossParams::new(p_theta)?;
    let c = constants(kind, cross.theta())?;
    if s == t {
        return Ok(Prediction {
            limit_length: 0.0,
            limit_nb_over_sqrt_n: 0.0,
            curve: LimitCurve::constant(s),
            corner: Some(s),
        });
    }
    let corner = corner_point(s, t, cross)?;
    let inset = density.inset_domain();
    if ![s, corner, t].iter().all(|&p| inset.contains(p)) {
        return Err(Error::GammaLeavesInset);
    }
    let (c_bor, q_bor) = (c.c_bor.expect("cross row"), c.q_bor.expect("cross row"));
    let h = step_for(density);
    let first = hit_curve(c.c_bis, s, corner, density, h, None).map_err(gamma_error)?;
    let second = hit_curve(c_bor, corner, t, density, h, None).map_err(gamma_error)?;
    let nb = first.hit_time.unwrap_or(0.0) + second.hit_time.unwrap_or(0.0);
    Ok(Prediction {
        limit_length: c.q_bis * corner.distance(s) + q_bor * t.distance(corner),
        limit_nb_over_sqrt_n: nb,
        curve: first.glue(second),
        corner: Some(corner),
    })
}

fn gamma_error(e: Error) -> Error {
    match e {
        Error::SegmentLeavesDomain => Error::GammaLeavesInset,
        other => other,
    }
}

/// Prediction for any targeted navigation.
pub fn predict(spec: &NavSpec, s: Point, t: Point, density: &DensitySpec) -> Result<Prediction> {
    spec.validate()?;
    match spec.kind {
        NavKind::StraightYao | NavKind::StraightT => predict_straight(spec.kind, spec.theta, s, t, density),
        NavKind::Yao | NavKind::T => predict_cross(spec.kind, p_theta(spec)?, s, t, density),
        NavKind::RandomNorthT | NavKind::RandomNorthY => {
            predict_random_north(spec.kind, p_theta(spec)?, s, t, density)
        }
        NavKind::DirectedT { .. } | NavKind::DirectedY { .. } => Err(Error::InvalidParameter(
            "directed navigations have no target to predict".into(),
        )),
    }
}

fn p_theta(spec: &NavSpec) -> Result<u32> {
    spec.p_theta
        .ok_or_else(|| Error::InvalidParameter("p_theta is required".into()))
}

/// Limit of `Cost_{H_g}(s, t) / n^{(1-g)/2}` using the stage moment `q = E(l^g)`.
/// `g = 0` and `g = 1` return the stage-count and length limits exactly.
pub fn predict_cost_with_moment(
    spec: &NavSpec,
    g: f64,
    q: f64,
    s: Point,
    t: Point,
    density: &DensitySpec,
) -> Result<f64> {
    if !(g >= 0.0 && g.is_finite()) {
        return Err(Error::InvalidParameter(format!("exponent {g} must be non-negative")));
    }
    let base = predict(spec, s, t, density)?;
    if g == 0.0 {
        return Ok(base.limit_nb_over_sqrt_n);
    }
    if g == 1.0 {
        return Ok(base.limit_length);
    }
    if s == t {
        return Ok(0.0);
    }
    let c = constants(spec.kind, spec.theta)?;
    let h = step_for(density);
    let cost = |lambda: f64, a: Point, b: Point| -> Result<f64> {
        Ok(hit_curve(lambda, a, b, density, h, Some((q, g)))?
            .final_cost()
            .unwrap_or(0.0))
    };
    match base.corner {
        Some(i) => Ok(cost(c.c_bis, s, i)? + cost(c.c_bor.expect("cross row"), i, t)?),
        None => cost(c.c_bis, s, t),
    }
}

/// [`predict_cost_with_moment`] with `E(l^g)` from the closed forms or the
/// Monte Carlo cache.
pub fn predict_cost(
    spec: &NavSpec,
    g: f64,
    s: Point,
    t: Point,
    density: &DensitySpec,
    moments: &mut MomentCache,
) -> Result<f64> {
    let q = moments.moment(stage_law(spec.kind), spec.theta, g)?;
    predict_cost_with_moment(spec, g, q, s, t, density)
}
