//! Convergence experiments: sweep `(n, seed)` cells, run every `(s, t)` pair,
//! compare with the limit predictions and write CSV, JSON and SVG outputs.

mod summary;
mod sweep;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{gamma_path, Point, Polyline, Rect};
use crate::limits::ORACLE_SAMPLES;
use crate::navigation::NavSpec;
use crate::point_process::{DensitySpec, PointSet};
use crate::svg::SvgScene;

pub use summary::{loglog_slope, summarize, NSummary, Slope, SlopeStatus, Summary};
pub use sweep::{
    cell_seed, read_results_json, run_experiment, write_csv, write_json, write_outputs, ResultRow,
    ResultsFile, RESULTS_FORMAT_VERSION,
};

/// Where the `(s, t)` pairs come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum PairSource {
    /// Pairs checked against the density's own inset.
    Explicit { pairs: Vec<(Point, Point)> },
    /// Ordered pairs of distinct lattice points of the domain, anchored at its
    /// lower-left corner.
    Grid { step: f64, inset: f64, max_pairs: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Outputs {
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub density: DensitySpec,
    pub nav: NavSpec,
    pub n_values: Vec<f64>,
    pub seeds_per_n: usize,
    pub pairs: PairSource,
    /// Cost exponents `g`.
    #[serde(default)]
    pub exponents: Vec<f64>,
    #[serde(default)]
    pub outputs: Outputs,
    pub master_seed: u64,
    /// Lattice step of the per-cell NAVMAX diagnostic; skipped when absent.
    #[serde(default)]
    pub navmax_step: Option<f64>,
    /// Monte Carlo budget of the `E(l^g)` moments without closed form.
    #[serde(default = "default_moment_samples")]
    pub moment_samples: u64,
    /// Adds a wall-time column. Off by default so that outputs are
    /// byte-identical across runs.
    #[serde(default)]
    pub record_wall_time: bool,
}

fn default_moment_samples() -> u64 {
    ORACLE_SAMPLES
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.density.validate()?;
        self.nav.validate()?;
        if self.nav.kind.is_directed() {
            return Err(Error::InvalidParameter(
                "experiments need a targeted navigation".into(),
            ));
        }
        if let Some(n) = self.n_values.iter().find(|n| !(n.is_finite() && **n > 0.0)) {
            return Err(Error::InvalidParameter(format!("n = {n} must be positive")));
        }
        if self.seeds_per_n == 0 {
            return Err(Error::InvalidParameter("seeds_per_n must be at least 1".into()));
        }
        if let Some(g) = self.exponents.iter().find(|g| !(g.is_finite() && **g >= 0.0)) {
            return Err(Error::InvalidParameter(format!("exponent {g} must be non-negative")));
        }
        if let Some(step) = self.navmax_step {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::InvalidParameter(format!("navmax_step {step} must be positive")));
            }
        }
        if self.moment_samples < 2 {
            return Err(Error::InvalidParameter("moment_samples must be at least 2".into()));
        }
        match &self.pairs {
            PairSource::Explicit { pairs } if pairs.is_empty() => Err(Error::NoValidPairs),
            PairSource::Explicit { .. } => Ok(()),
            PairSource::Grid { step, inset, max_pairs } => {
                if !(step.is_finite() && *step > 0.0) {
                    return Err(Error::InvalidParameter(format!("grid step {step} must be positive")));
                }
                if !(inset.is_finite() && *inset >= 0.0) {
                    return Err(Error::InvalidParameter(format!("inset {inset} must be non-negative")));
                }
                if *max_pairs == 0 {
                    return Err(Error::InvalidParameter("max_pairs must be at least 1".into()));
                }
                Ok(())
            }
        }
    }
}

/// Whether the limiting trajectory of `(s, t)` stays in `inset`: `[s, t]`
/// for straight and random-north kinds, `Γ(s, t)` for cross kinds. Both are
/// polylines and the inset is convex, so checking vertices is exact.
pub fn pair_admissible(nav: &NavSpec, s: Point, t: Point, inset: Rect) -> bool {
    if !(inset.contains(s) && inset.contains(t)) {
        return false;
    }
    match nav.cross() {
        Some(cross) if matches!(nav.kind, crate::navigation::NavKind::Yao | crate::navigation::NavKind::T) => {
            gamma_path(s, t, cross).vertices().iter().all(|&p| inset.contains(p))
        }
        // a segment between two points of a rectangle stays inside
        _ => true,
    }
}

/// The `(s, t)` pairs of an experiment, in lattice order.
pub fn generate_pairs(config: &ExperimentConfig) -> Result<Vec<(Point, Point)>> {
    let domain = config.density.domain;
    match &config.pairs {
        PairSource::Explicit { pairs } => {
            let a = config.density.inset_a;
            let inset = domain.inset(a).ok_or(Error::NoValidPairs)?;
            if let Some((s, t)) = pairs
                .iter()
                .find(|(s, t)| !pair_admissible(&config.nav, *s, *t, inset))
            {
                return Err(Error::InvalidParameter(format!(
                    "pair ({}, {}) -> ({}, {}) leaves the inset domain",
                    s.x, s.y, t.x, t.y
                )));
            }
            Ok(pairs.clone())
        }
        PairSource::Grid { step, inset: a, max_pairs } => {
            if !(*step > 0.0) {
                return Err(Error::InvalidParameter(format!("grid step {step} must be positive")));
            }
            let inset = domain.inset(*a).ok_or(Error::NoValidPairs)?;
            let nodes: Vec<Point> = lattice(domain, *step)?
                .into_iter()
                .filter(|&p| inset.contains(p))
                .collect();
            let mut pairs = Vec::new();
            'outer: for &s in &nodes {
                for &t in &nodes {
                    if s != t && pair_admissible(&config.nav, s, t, inset) {
                        pairs.push((s, t));
                        if pairs.len() == *max_pairs {
                            break 'outer;
                        }
                    }
                }
            }
            if pairs.is_empty() {
                return Err(Error::NoValidPairs);
            }
            Ok(pairs)
        }
    }
}

/// Most lattice nodes of a pair grid; pairs are searched among their squares.
pub const MAX_GRID_NODES: usize = 1 << 14;

/// Row-major lattice `x0 + i·step, y0 + j·step` of a rectangle.
fn lattice(domain: Rect, step: f64) -> Result<Vec<Point>> {
    let count = |len: f64| (len / step + 1e-9).floor() + 1.0;
    let (fx, fy) = (count(domain.width()), count(domain.height()));
    if !(fx * fy <= MAX_GRID_NODES as f64) {
        return Err(Error::InvalidParameter(format!(
            "grid step {step} gives more than {MAX_GRID_NODES} lattice nodes"
        )));
    }
    let (nx, ny) = (fx as usize, fy as usize);
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(Point::new(domain.x0 + i as f64 * step, domain.y0 + j as f64 * step));
        }
    }
    Ok(out)
}

/// SVG drawing: points as dots, paths as solid polylines, limits dashed.
pub fn render_svg_string(ps: &PointSet, paths: &[Polyline], limits: &[Polyline]) -> String {
    let domain = ps.domain();
    let mut scene = SvgScene::new(domain, 800.0);
    let radius = (400.0 / (ps.len().max(1) as f64).sqrt()).clamp(0.4, 3.0);
    scene.points(ps.points(), radius, "#9a9a9a");
    for limit in limits {
        scene.polyline(limit.vertices(), "#c0392b", 1.5, true);
    }
    for path in paths {
        scene.polyline(path.vertices(), "#1f4e9a", 1.2, false);
        if let (Some(&s), Some(&t)) = (path.vertices().first(), path.vertices().last()) {
            scene.marker(s, 3.0, "#1f4e9a");
            scene.marker(t, 3.0, "#c0392b");
        }
    }
    scene.finish()
}

pub fn render_svg(ps: &PointSet, paths: &[Polyline], limits: &[Polyline], out: &Path) -> Result<()> {
    std::fs::write(out, render_svg_string(ps, paths, limits))?;
    Ok(())
}
