use std::collections::HashSet;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};

use super::{DensitySpec, PointSet, SampleMeta, SampleModel};
use crate::error::{Error, Result};
use crate::geometry::Point;

/// Poisson process with intensity `n f`, realised by thinning a homogeneous
/// process of intensity `n M_f`.
pub fn sample_ppp(density: &DensitySpec, n: f64, seed: u64) -> Result<PointSet> {
    density.validate()?;
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::InvalidParameter(format!("intensity scale n = {n} must be positive")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let envelope = density.max_value();
    let mean = n * envelope * density.domain.area();
    let candidates = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::InvalidParameter(format!("Poisson mean {mean}: {e}")))?
            .sample(&mut rng) as u64
    } else {
        0
    };
    let mut points = Vec::new();
    let mut seen = HashSet::new();
    let mut remaining = candidates;
    while remaining > 0 {
        let p = uniform_in(density, &mut rng);
        let keep = rng.random::<f64>() * envelope < density.eval(p);
        if !seen.insert((p.x.to_bits(), p.y.to_bits())) {
            continue;
        }
        remaining -= 1;
        if keep {
            points.push(p);
        }
    }
    finish(points, density, SampleModel::Ppp { n }, seed)
}

/// Exactly `n` points drawn i.i.d. from `f / ∫f` by rejection.
pub fn sample_iid(density: &DensitySpec, n: usize, seed: u64) -> Result<PointSet> {
    density.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let envelope = density.max_value();
    let mut points = Vec::with_capacity(n);
    let mut seen = HashSet::with_capacity(n);
    while points.len() < n {
        let p = uniform_in(density, &mut rng);
        if rng.random::<f64>() * envelope < density.eval(p) && seen.insert((p.x.to_bits(), p.y.to_bits())) {
            points.push(p);
        }
    }
    finish(points, density, SampleModel::Iid { n }, seed)
}

fn uniform_in(density: &DensitySpec, rng: &mut ChaCha8Rng) -> Point {
    let d = density.domain;
    Point::new(
        d.x0 + d.width() * rng.random::<f64>(),
        d.y0 + d.height() * rng.random::<f64>(),
    )
}

fn finish(points: Vec<Point>, density: &DensitySpec, model: SampleModel, seed: u64) -> Result<PointSet> {
    PointSet::from_parts(
        points,
        SampleMeta {
            model,
            seed,
            domain: density.domain,
            inset_a: density.inset_a,
            density: Some(*density),
        },
    )
}
