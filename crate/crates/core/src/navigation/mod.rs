//! Compass navigations: cross (Yao, T), straight, directed and random-north
//! variants, run over a [`PointSet`](crate::point_process::PointSet).

mod navigator;
mod record;
mod stages;

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CrossParams, DomainShape};

pub use navigator::{Navigator, Norths};
pub(crate) use navigator::splitmix64;
pub use record::{costs, CostReport, ExitReason, PathRecord};
pub use stages::{rescale_to_intensity, stage_samples, stage_stream};

/// The navigation families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NavKind {
    Yao,
    T,
    StraightYao,
    StraightT,
    DirectedT { alpha: f64 },
    DirectedY { alpha: f64 },
    RandomNorthT,
    RandomNorthY,
}

impl NavKind {
    /// Camembert (Yao-like) or triangle (T-like) decision domains.
    pub fn shape(&self) -> DomainShape {
        match self {
            NavKind::Yao | NavKind::StraightYao | NavKind::DirectedY { .. } | NavKind::RandomNorthY => {
                DomainShape::Camembert
            }
            _ => DomainShape::Triangle,
        }
    }

    /// Kinds whose sectors come from a fixed partition into `p_θ` cones.
    pub fn is_cross(&self) -> bool {
        matches!(
            self,
            NavKind::Yao | NavKind::T | NavKind::RandomNorthT | NavKind::RandomNorthY
        )
    }

    pub fn is_random_north(&self) -> bool {
        matches!(self, NavKind::RandomNorthT | NavKind::RandomNorthY)
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, NavKind::DirectedT { .. } | NavKind::DirectedY { .. })
    }

    pub fn is_straight(&self) -> bool {
        matches!(self, NavKind::StraightYao | NavKind::StraightT)
    }

    /// Whether the termination properties hold for this `θ`.
    pub fn guaranteed_for(&self, theta: f64) -> bool {
        let tol = 1e-12;
        match self {
            NavKind::Yao | NavKind::T => theta <= PI / 3.0 + tol,
            NavKind::StraightT => theta <= PI / 2.0 + tol,
            NavKind::StraightYao => theta < PI / 2.0,
            NavKind::DirectedT { .. } => theta <= PI + tol,
            NavKind::DirectedY { .. } => theta <= PI / 2.0 + tol,
            // no termination statement covers these
            NavKind::RandomNorthT | NavKind::RandomNorthY => false,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            NavKind::Yao => "yao",
            NavKind::T => "t",
            NavKind::StraightYao => "straight-yao",
            NavKind::StraightT => "straight-t",
            NavKind::DirectedT { .. } => "directed-t",
            NavKind::DirectedY { .. } => "directed-y",
            NavKind::RandomNorthT => "random-north-t",
            NavKind::RandomNorthY => "random-north-y",
        }
    }
}

impl fmt::Display for NavKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NavKind::DirectedT { alpha } | NavKind::DirectedY { alpha } => {
                write!(f, "{}:{alpha}", self.name())
            }
            _ => f.write_str(self.name()),
        }
    }
}

/// Names as printed by [`NavKind::name`]; directed kinds take an optional
/// `:ALPHA` suffix (default 0). Underscores are accepted for hyphens.
impl FromStr for NavKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let alpha = match arg {
            Some(a) => a
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("direction `{a}`: {e}")))?,
            None => 0.0,
        };
        let kind = match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "yao" | "y" => NavKind::Yao,
            "t" | "theta" => NavKind::T,
            "straight-yao" | "sy" => NavKind::StraightYao,
            "straight-t" | "st" => NavKind::StraightT,
            "directed-t" | "dt" => NavKind::DirectedT { alpha },
            "directed-y" | "dy" => NavKind::DirectedY { alpha },
            "random-north-t" | "rnt" => NavKind::RandomNorthT,
            "random-north-y" | "rny" => NavKind::RandomNorthY,
            other => return Err(Error::Parse(format!("unknown navigation `{other}`"))),
        };
        if arg.is_some() && !kind.is_directed() {
            return Err(Error::Parse(format!("`{name}` takes no direction")));
        }
        Ok(kind)
    }
}

/// A fully specified navigation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NavSpec {
    #[serde(flatten)]
    pub kind: NavKind,
    pub theta: f64,
    /// Number of sectors; required by cross and random-north kinds.
    #[serde(default)]
    pub p_theta: Option<u32>,
    /// Seed of the per-point norths of random-north kinds.
    #[serde(default)]
    pub north_seed: Option<u64>,
    /// Step budget; derived from the point set when absent.
    #[serde(default)]
    pub max_steps: Option<usize>,
}

impl NavSpec {
    /// Cross and random-north kinds, with `θ = 2π / p_θ`.
    pub fn with_sectors(kind: NavKind, p_theta: u32) -> Result<Self> {
        let cross = CrossParams::new(p_theta)?;
        let spec = Self {
            kind,
            theta: cross.theta(),
            p_theta: Some(p_theta),
            north_seed: None,
            max_steps: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Straight and directed kinds.
    pub fn with_angle(kind: NavKind, theta: f64) -> Result<Self> {
        let spec = Self {
            kind,
            theta,
            p_theta: None,
            north_seed: None,
            max_steps: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let theta = self.theta;
        if !(theta > 0.0 && theta < TAU) {
            return Err(Error::InvalidParameter(format!("theta {theta} outside (0, 2π)")));
        }
        if self.kind.shape() == DomainShape::Triangle && theta > PI {
            return Err(Error::InvalidParameter(format!(
                "triangle decision domains need theta <= π, got {theta}"
            )));
        }
        if let NavKind::DirectedT { alpha } | NavKind::DirectedY { alpha } = self.kind {
            if !alpha.is_finite() {
                return Err(Error::InvalidParameter(format!("direction {alpha} is not finite")));
            }
        }
        if self.kind.is_cross() {
            let p = self.p_theta.ok_or_else(|| {
                Error::InvalidParameter(format!("{} navigation needs p_theta", self.kind.name()))
            })?;
            let cross = CrossParams::new(p)?;
            if (cross.theta() - theta).abs() > 1e-9 {
                return Err(Error::InvalidParameter(format!(
                    "theta {theta} does not equal 2π/{p}"
                )));
            }
        }
        if self.max_steps == Some(0) {
            return Err(Error::InvalidParameter("max_steps must be positive".into()));
        }
        Ok(())
    }

    pub fn cross(&self) -> Option<CrossParams> {
        self.p_theta.and_then(|p| CrossParams::new(p).ok())
    }

    pub fn guaranteed(&self) -> bool {
        self.kind.guaranteed_for(self.theta)
    }
}
