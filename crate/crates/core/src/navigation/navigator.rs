use std::collections::HashSet;
use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::record::{ExitReason, PathRecord};
use super::{NavKind, NavSpec};
use crate::error::{Error, Result};
use crate::geometry::{sector_index_with_north, CrossParams, Point};
use crate::point_process::{Candidate, PointSet, SectorQuery};

/// Per-point norths of the random-north model, drawn once per point set.
/// Positions outside the set (a starting point, say) get a north hashed from
/// their coordinates, so that repeated queries agree.
#[derive(Clone, Debug)]
pub struct Norths {
    seed: u64,
    values: Vec<f64>,
}

impl Norths {
    pub fn sample(seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..count).map(|_| rng.random::<f64>() * TAU).collect();
        Self { seed, values }
    }

    pub fn of_point(&self, id: usize) -> f64 {
        self.values[id]
    }

    pub fn of_position(&self, p: Point) -> f64 {
        let h = splitmix64(self.seed ^ splitmix64(p.x.to_bits()) ^ p.y.to_bits().rotate_left(29));
        (h >> 11) as f64 / (1u64 << 53) as f64 * TAU
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub(crate) fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A navigation bound to a point set.
#[derive(Clone, Debug)]
pub struct Navigator<'a> {
    spec: NavSpec,
    ps: &'a PointSet,
    cross: Option<CrossParams>,
    norths: Option<Norths>,
    max_steps: usize,
}

impl<'a> Navigator<'a> {
    pub fn new(spec: &NavSpec, ps: &'a PointSet) -> Result<Self> {
        let norths = spec.kind.is_random_north().then(|| {
            let seed = spec.north_seed.unwrap_or_else(|| splitmix64(ps.seed() ^ 0x6e6f_7274_6873));
            Norths::sample(seed, ps.len())
        });
        Self::build(spec, ps, norths)
    }

    /// Random-north navigation with explicitly supplied norths.
    pub fn with_norths(spec: &NavSpec, ps: &'a PointSet, norths: Norths) -> Result<Self> {
        if norths.len() != ps.len() {
            return Err(Error::InvalidParameter(format!(
                "{} norths for {} points",
                norths.len(),
                ps.len()
            )));
        }
        Self::build(spec, ps, Some(norths))
    }

    fn build(spec: &NavSpec, ps: &'a PointSet, norths: Option<Norths>) -> Result<Self> {
        spec.validate()?;
        let default_steps = 50.0 * ps.peak_intensity().sqrt() * ps.domain().diameter();
        let max_steps = spec
            .max_steps
            .unwrap_or_else(|| (default_steps.ceil() as usize).max(16));
        Ok(Self {
            spec: *spec,
            ps,
            cross: spec.cross(),
            norths,
            max_steps,
        })
    }

    pub fn spec(&self) -> &NavSpec {
        &self.spec
    }

    pub fn point_set(&self) -> &PointSet {
        self.ps
    }

    pub fn max_steps(&self) -> usize {
        self.max_steps
    }

    pub fn norths(&self) -> Option<&Norths> {
        self.norths.as_ref()
    }

    /// One stage from `s` towards `t`. Directed kinds ignore `t` and return
    /// `s` itself when their sector is empty.
    pub fn next_stop(&self, s: Point, t: Point) -> Point {
        if !self.spec.kind.is_directed() && s == t {
            return t;
        }
        self.stage(s, self.ps.locate(s), Some(t))
            .map_or(s, |(p, _)| p)
    }

    /// The next stop and its identity. `at` is the id of `s` in the set, if any.
    fn stage(&self, s: Point, at: Option<usize>, t: Option<Point>) -> Option<(Point, Candidate)> {
        // directed navigations never see the target
        let t = if self.spec.kind.is_directed() { None } else { t };
        let half_angle = self.spec.theta / 2.0;
        let direction = match self.spec.kind {
            NavKind::DirectedT { alpha } | NavKind::DirectedY { alpha } => alpha,
            NavKind::StraightYao | NavKind::StraightT => (t? - s).arg(),
            NavKind::Yao | NavKind::T => {
                let cross = self.cross.expect("validated cross spec");
                let kappa = sector_index_with_north(s, t?, cross, 0.0).ok()?;
                cross.bisector(kappa, 0.0)
            }
            NavKind::RandomNorthT | NavKind::RandomNorthY => {
                let cross = self.cross.expect("validated cross spec");
                let norths = self.norths.as_ref().expect("random-north navigator has norths");
                let north = at.map_or_else(|| norths.of_position(s), |id| norths.of_point(id));
                let kappa = sector_index_with_north(s, t?, cross, north).ok()?;
                cross.bisector(kappa, north)
            }
        };
        let query = SectorQuery {
            apex: s,
            direction,
            half_angle,
            shape: self.spec.kind.shape(),
        };
        match self.ps.nearest_in_sector(&query, t) {
            Some(hit) => Some((hit.point, hit.candidate)),
            // t sits on a sector border up to rounding; it is still reachable
            None => t.map(|t| (t, Candidate::Extra)),
        }
    }

    /// Navigates from `s` to `t`. Stops on arrival, on exhausting the step
    /// budget, or when a stop is revisited.
    pub fn run(&self, s: Point, t: Point) -> PathRecord {
        let start_id = self.ps.locate(s);
        let mut rec = PathRecord::new(s, Some(t), start_id);
        if s == t {
            rec.finish(ExitReason::Reached);
            return rec;
        }
        let mut visited: HashSet<usize> = start_id.into_iter().collect();
        let (mut cur, mut cur_id) = (s, start_id);
        loop {
            if rec.nb >= self.max_steps {
                rec.finish(ExitReason::MaxSteps);
                return rec;
            }
            let Some((next, cand)) = self.stage(cur, cur_id, Some(t)) else {
                rec.finish(ExitReason::SectorEmpty);
                return rec;
            };
            let id = match cand {
                Candidate::Point(id) => Some(id),
                Candidate::Extra => None,
            };
            if next == t {
                rec.push(next, id);
                rec.finish(ExitReason::Reached);
                return rec;
            }
            let id_value = id.expect("only the target is an extra candidate");
            if !visited.insert(id_value) {
                rec.finish(ExitReason::Revisit);
                return rec;
            }
            rec.push(next, id);
            cur = next;
            cur_id = id;
        }
    }

    /// Directed navigation from `s`: at most `steps` stages, halting early when
    /// the sector is empty or, if `stop_outside_inset`, once a stop leaves `D[a]`.
    pub fn run_directed(&self, s: Point, steps: usize, stop_outside_inset: bool) -> Result<PathRecord> {
        if !self.spec.kind.is_directed() {
            return Err(Error::InvalidParameter(format!(
                "{} is not a directed navigation",
                self.spec.kind.name()
            )));
        }
        let inset = self.ps.inset_domain();
        let start_id = self.ps.locate(s);
        let mut rec = PathRecord::new(s, None, start_id);
        let (mut cur, mut cur_id) = (s, start_id);
        loop {
            if rec.nb >= steps {
                rec.finish(ExitReason::StepsDone);
                return Ok(rec);
            }
            let Some((next, Candidate::Point(id))) = self.stage(cur, cur_id, None) else {
                rec.finish(ExitReason::SectorEmpty);
                return Ok(rec);
            };
            rec.push(next, Some(id));
            if stop_outside_inset && !inset.contains(next) {
                rec.finish(ExitReason::LeftInset);
                return Ok(rec);
            }
            cur = next;
            cur_id = Some(id);
        }
    }
}
