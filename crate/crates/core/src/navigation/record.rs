use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Point, Rect};
use crate::point_process::PointSet;
use crate::svg::SvgScene;

/// Why a run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitReason {
    /// Still running; only seen on records under construction.
    Running,
    Reached,
    MaxSteps,
    Revisit,
    SectorEmpty,
    LeftInset,
    /// A directed run completed its requested number of stages.
    StepsDone,
}

/// The successive stops of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathRecord {
    pub source: Point,
    pub target: Option<Point>,
    pub stops: Vec<Point>,
    /// Id in the point set of each stop; `None` for the source or the target
    /// when they are not points of the set.
    pub stop_ids: Vec<Option<usize>>,
    pub stages: Vec<Point>,
    pub nb: usize,
    pub length: f64,
    pub max_stage: f64,
    pub success: bool,
    pub exit: ExitReason,
}

impl PathRecord {
    pub(crate) fn new(source: Point, target: Option<Point>, source_id: Option<usize>) -> Self {
        Self {
            source,
            target,
            stops: vec![source],
            stop_ids: vec![source_id],
            stages: Vec::new(),
            nb: 0,
            length: 0.0,
            max_stage: 0.0,
            success: false,
            exit: ExitReason::Running,
        }
    }

    pub(crate) fn push(&mut self, p: Point, id: Option<usize>) {
        let stage = p - *self.stops.last().expect("a record starts with its source");
        let len = stage.norm();
        self.stops.push(p);
        self.stop_ids.push(id);
        self.stages.push(stage);
        self.nb += 1;
        self.length += len;
        self.max_stage = self.max_stage.max(len);
    }

    pub(crate) fn finish(&mut self, exit: ExitReason) {
        self.exit = exit;
        self.success = exit == ExitReason::Reached;
    }

    pub fn last(&self) -> Point {
        *self.stops.last().expect("a record starts with its source")
    }

    pub fn polyline(&self) -> crate::geometry::Polyline {
        crate::geometry::Polyline::new(self.stops.clone())
    }

    /// `|s_j - t|` for every stop; empty for directed runs.
    pub fn distances_to_target(&self) -> Vec<f64> {
        match self.target {
            Some(t) => self.stops.iter().map(|p| p.distance(t)).collect(),
            None => Vec::new(),
        }
    }

    /// Whether the distance to the target strictly decreases at every stage.
    pub fn strictly_approaches(&self) -> bool {
        let d = self.distances_to_target();
        d.windows(2).all(|w| w[1] < w[0])
    }

    /// Whether every stop lies in the closed ball `B(t, |s - t|)`.
    pub fn within_start_ball(&self) -> bool {
        let Some(t) = self.target else {
            return true;
        };
        let r = self.source.distance(t);
        self.stops.iter().all(|p| p.distance(t) <= r * (1.0 + 1e-12))
    }

    /// Stages violating `|t - s_j| - |t - s_{j+1}| ≥ (2 - √3) |s_{j+1} - s_j|`
    /// among those with `|s_{j+1} - s_j| ≤ |t - s_j| / 2`.
    pub fn big_jump_violations(&self) -> usize {
        let Some(t) = self.target else {
            return 0;
        };
        let c = 2.0 - 3f64.sqrt();
        self.stops
            .windows(2)
            .filter(|w| {
                let step = w[0].distance(w[1]);
                let (d0, d1) = (w[0].distance(t), w[1].distance(t));
                step <= d0 / 2.0 && d0 - d1 < c * step - 1e-12 * d0
            })
            .count()
    }

    /// One row per stop: `step,x,y,dist_to_target` (the distance is left
    /// empty for directed runs).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["step", "x", "y", "dist_to_target"])?;
        for (j, p) in self.stops.iter().enumerate() {
            let dist = self.target.map(|t| p.distance(t).to_string()).unwrap_or_default();
            w.write_record([j.to_string(), p.x.to_string(), p.y.to_string(), dist])?;
        }
        w.flush()?;
        Ok(())
    }

    /// The path drawn over `domain`, optionally above the point set.
    pub fn to_svg(&self, domain: Rect, underlay: Option<&PointSet>) -> String {
        let mut scene = SvgScene::new(domain, 600.0);
        if let Some(ps) = underlay {
            scene.points(ps.points(), 1.0, "#9a9a9a");
        }
        scene.polyline(&self.stops, "#c0392b", 1.5, false);
        scene.marker(self.source, 3.0, "#1f618d");
        if let Some(t) = self.target {
            scene.marker(t, 3.0, "#196f3d");
        }
        scene.finish()
    }
}

/// `Cost_{H_g} = Σ |Δ_j|^g` for each exponent `g`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostReport {
    pub exponents: Vec<f64>,
    pub values: Vec<f64>,
}

impl CostReport {
    pub fn get(&self, g: f64) -> Option<f64> {
        self.exponents
            .iter()
            .position(|&e| e == g)
            .map(|i| self.values[i])
    }
}

/// Costs of a record. `g = 0` and `g = 1` return the stage count and the
/// length exactly.
pub fn costs(record: &PathRecord, exponents: &[f64]) -> CostReport {
    let values = exponents
        .iter()
        .map(|&g| {
            if g == 0.0 {
                record.nb as f64
            } else if g == 1.0 {
                record.length
            } else {
                record.stages.iter().map(|d| d.norm().powf(g)).sum()
            }
        })
        .collect();
    CostReport {
        exponents: exponents.to_vec(),
        values,
    }
}
