//! NAVMAX, MAXBALL and r_min for a sampled set.
//!
//! NAVMAX is a supremum over a continuum of apexes and directions. It is
//! discretised on a lattice and a fixed direction fan, so the value reported
//! is a lower bound of the true supremum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GridIndex, PointSet, SectorQuery};
use crate::error::{Error, Result};
use crate::geometry::{DomainShape, Point, Rect};

/// Number of evenly spaced directions tried at every NAVMAX apex.
pub const NAVMAX_DIRECTIONS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub navmax: f64,
    pub maxball: usize,
    pub r_min: f64,
    /// Lattice step used for the NAVMAX and MAXBALL searches.
    pub grid_step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NavmaxReport {
    /// Largest finite minimal radius found. Infinite when some sector is empty.
    pub value: f64,
    pub grid_step: f64,
    pub directions: usize,
    pub apexes: usize,
    /// Number of (apex, direction) pairs whose infinite sector holds no point.
    pub empty_sectors: usize,
}

/// Radius of the smallest Camembert of angle `theta` at `apex`, aimed at
/// `direction`, containing a point of the set. Infinite when the sector is empty.
pub fn min_cam_radius(ps: &PointSet, apex: Point, direction: f64, theta: f64) -> f64 {
    let query = SectorQuery {
        apex,
        direction,
        half_angle: theta / 2.0,
        shape: DomainShape::Camembert,
    };
    ps.nearest_in_sector(&query, None).map_or(f64::INFINITY, |h| h.key)
}

/// Discretised NAVMAX over a `grid_step` lattice of `D[a]`.
pub fn navmax(ps: &PointSet, theta: f64, grid_step: f64) -> Result<NavmaxReport> {
    if ps.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_angle_and_step(theta, grid_step)?;
    let lattice = lattice(ps.inset_domain(), grid_step)?;
    let directions: Vec<f64> = (0..NAVMAX_DIRECTIONS)
        .map(|k| k as f64 * std::f64::consts::TAU / NAVMAX_DIRECTIONS as f64)
        .collect();
    let (value, empty) = lattice
        .par_iter()
        .map(|&apex| {
            directions.iter().fold((0.0f64, 0usize), |(best, empty), &dir| {
                let r = min_cam_radius(ps, apex, dir, theta);
                if r.is_finite() {
                    (best.max(r), empty)
                } else {
                    (best, empty + 1)
                }
            })
        })
        .reduce(|| (0.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    Ok(NavmaxReport {
        value: if empty > 0 { f64::INFINITY } else { value },
        grid_step,
        directions: NAVMAX_DIRECTIONS,
        apexes: lattice.len(),
        empty_sectors: empty,
    })
}

/// Largest number of points in an open ball `B(x, r)` over lattice centres `x` of `D[a]`.
pub fn maxball(ps: &PointSet, r: f64, grid_step: f64) -> Result<usize> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {r} must be positive")));
    }
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} must be positive")));
    }
    if ps.is_empty() {
        return Ok(0);
    }
    let centres = lattice(ps.inset_domain(), grid_step)?;
    let index = ps.index();
    let points = ps.points();
    let r2 = r * r;
    let best = centres
        .par_iter()
        .map(|&x| {
            let (i0, j0) = index.cell_coords(x - Point::new(r, r));
            let (i1, j1) = index.cell_coords(x + Point::new(r, r));
            let mut count = 0;
            for j in j0..=j1 {
                for i in i0..=i1 {
                    count += index
                        .cell(i, j)
                        .iter()
                        .filter(|&&id| (points[id as usize] - x).norm_sqr() < r2)
                        .count();
                }
            }
            count
        })
        .max();
    Ok(best.unwrap_or(0))
}

/// Exact minimal distance between two distinct points.
pub fn r_min(ps: &PointSet) -> Result<f64> {
    let points = ps.points();
    if points.len() < 2 {
        return Err(Error::TooFewPoints(points.len()));
    }
    // any pair gives an upper bound; a neighbourhood scan tightens it
    let mut bound = points[0].distance(points[1]);
    bound = bound.min(closest_in_neighbourhood(points, ps.index()));
    // with cells at least `bound` wide, every pair at distance <= bound sits
    // in adjacent cells
    let fine = GridIndex::build(points, ps.domain(), bound * (1.0 + 1e-9));
    Ok(bound.min(closest_in_neighbourhood(points, &fine)))
}

fn closest_in_neighbourhood(points: &[Point], index: &GridIndex) -> f64 {
    points
        .par_iter()
        .enumerate()
        .map(|(a, &p)| {
            let (ci, cj) = index.cell_coords(p);
            let mut best = f64::INFINITY;
            for j in cj - 1..=cj + 1 {
                for i in ci - 1..=ci + 1 {
                    for &b in index.cell(i, j) {
                        if b as usize > a {
                            best = best.min(p.distance(points[b as usize]));
                        }
                    }
                }
            }
            best
        })
        .reduce(|| f64::INFINITY, f64::min)
}

fn check_angle_and_step(theta: f64, grid_step: f64) -> Result<()> {
    if !(theta > 0.0 && theta < std::f64::consts::TAU) {
        return Err(Error::InvalidParameter(format!("theta {theta} outside (0, 2π)")));
    }
    if !(grid_step > 0.0 && grid_step.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} must be positive")));
    }
    Ok(())
}

const MAX_LATTICE: usize = 1 << 24;

fn lattice(r: Rect, step: f64) -> Result<Vec<Point>> {
    let cols = (r.width() / step).floor() as usize + 1;
    let rows = (r.height() / step).floor() as usize + 1;
    if cols.saturating_mul(rows) > MAX_LATTICE {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} gives more than {MAX_LATTICE} lattice points"
        )));
    }
    let mut out = Vec::with_capacity(cols * rows);
    for j in 0..rows {
        for i in 0..cols {
            out.push(Point::new(r.x0 + i as f64 * step, r.y0 + j as f64 * step));
        }
    }
    Ok(out)
}
