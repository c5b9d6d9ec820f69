//! Exact sampler of one directed stage under a homogeneous Poisson process of
//! intensity 1 on the whole plane.
//!
//! For a triangle of angle θ the height of the first occupied triangle has
//! `P(x > r) = exp(-r² tan(θ/2))`, and given the height the point is uniform
//! on the far side. For a Camembert `P(l > r) = exp(-r² θ / 2)` with a
//! uniform angle.

use std::f64::consts::PI;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};

use super::{NavKind, NavSpec};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// `count` i.i.d. stage vectors of a directed navigation at intensity 1,
/// expressed in the frame of its direction `α`.
pub fn stage_samples(spec: &NavSpec, count: usize, seed: u64) -> Result<Vec<Point>> {
    if count == 0 {
        return Err(Error::InvalidParameter("count must be at least 1".into()));
    }
    Ok(stage_stream(spec, seed)?.take(count).collect())
}

/// Endless stream of the stages drawn by [`stage_samples`].
pub fn stage_stream(spec: &NavSpec, seed: u64) -> Result<impl Iterator<Item = Point>> {
    let theta = spec.theta;
    let (alpha, triangle) = match spec.kind {
        NavKind::DirectedT { alpha } => (alpha, true),
        NavKind::DirectedY { alpha } => (alpha, false),
        other => {
            return Err(Error::InvalidParameter(format!(
                "stage samples exist for directed navigations only, not {}",
                other.name()
            )))
        }
    };
    if !(theta > 0.0 && theta < if triangle { PI } else { 2.0 * PI }) {
        return Err(Error::OutOfRangeTheta {
            kind: spec.kind.name().into(),
            theta,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = theta / 2.0;
    let tan_half = half.tan();
    Ok(std::iter::repeat_with(move || {
        let e: f64 = Exp1.sample(&mut rng);
        let local = if triangle {
            let x = (e / tan_half).sqrt();
            let u = rng.random_range(-tan_half..=tan_half);
            Point::new(x, x * u)
        } else {
            let l = (2.0 * e / theta).sqrt();
            Point::from_polar(l, rng.random_range(-half..=half))
        };
        local.rotate(alpha)
    }))
}

/// Rescales intensity-1 samples to intensity `c`.
pub fn rescale_to_intensity(samples: &mut [Point], c: f64) {
    let f = 1.0 / c.sqrt();
    for p in samples {
        *p = *p * f;
    }
}
