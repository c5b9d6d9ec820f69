//! Random stopping-place sets: Poisson samples with a Lipschitz intensity,
//! the `n` i.i.d. model, a uniform-grid index answering angular-sector
//! nearest queries, and diagnostics on a sampled set.

mod density;
mod diagnostics;
mod index;
pub mod io;
mod sampling;

use std::collections::HashSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    border_distance_raw, in_sector_local, in_triangle_cone_local, local_coords, DomainShape, Point,
    Rect,
};

pub use density::{DensityKind, DensitySpec};
pub use diagnostics::{maxball, min_cam_radius, navmax, r_min, Diagnostics, NavmaxReport, NAVMAX_DIRECTIONS};
pub use index::GridIndex;
pub use sampling::{sample_iid, sample_ppp};

/// How a point set came about.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum SampleModel {
    /// Poisson process with intensity `n f`.
    Ppp { n: f64 },
    /// Exactly `n` i.i.d. points with density `f / ∫f`.
    Iid { n: usize },
    /// Supplied by hand.
    Explicit,
}

/// Provenance recorded alongside the points and in point-set files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleMeta {
    #[serde(flatten)]
    pub model: SampleModel,
    pub seed: u64,
    pub domain: Rect,
    pub inset_a: f64,
    pub density: Option<DensitySpec>,
}

/// Identity of a candidate returned by a sector query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Candidate {
    Point(usize),
    /// The extra point supplied with the query (the target).
    Extra,
}

impl Candidate {
    fn rank(self) -> usize {
        match self {
            Candidate::Point(id) => id,
            Candidate::Extra => usize::MAX,
        }
    }
}

/// An infinite angular sector used as a decision-domain family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorQuery {
    pub apex: Point,
    pub direction: f64,
    pub half_angle: f64,
    pub shape: DomainShape,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectorHit {
    pub point: Point,
    pub candidate: Candidate,
    /// Modulus (Camembert) or projection on the bisector (triangle).
    pub key: f64,
}

/// An immutable set of stopping places with its grid index.
#[derive(Clone, Debug)]
pub struct PointSet {
    points: Vec<Point>,
    index: GridIndex,
    meta: SampleMeta,
}

impl PointSet {
    /// Builds a set from explicit points. Rejects points outside `domain`,
    /// non-finite coordinates and duplicates.
    pub fn from_points(points: Vec<Point>, domain: Rect) -> Result<Self> {
        Self::from_parts(
            points,
            SampleMeta {
                model: SampleModel::Explicit,
                seed: 0,
                domain,
                inset_a: 0.0,
                density: None,
            },
        )
    }

    pub fn from_parts(points: Vec<Point>, meta: SampleMeta) -> Result<Self> {
        let domain = meta.domain;
        if !(domain.x1 > domain.x0 && domain.y1 > domain.y0) || !domain.area().is_finite() {
            return Err(Error::InvalidParameter("degenerate domain".into()));
        }
        let half_side = 0.5 * domain.width().min(domain.height());
        if !(meta.inset_a >= 0.0 && meta.inset_a < half_side) {
            return Err(Error::InvalidParameter(format!("inset {} out of range", meta.inset_a)));
        }
        if let Some(density) = &meta.density {
            density.validate()?;
        }
        let mut seen = HashSet::with_capacity(points.len());
        for (id, p) in points.iter().enumerate() {
            if !p.is_finite() || !domain.contains(*p) {
                return Err(Error::InvalidParameter(format!(
                    "point {id} ({}, {}) is outside the domain",
                    p.x, p.y
                )));
            }
            if !seen.insert((p.x.to_bits(), p.y.to_bits())) {
                return Err(Error::InvalidParameter(format!("duplicate point {id}")));
            }
        }
        if points.len() > u32::MAX as usize {
            return Err(Error::InvalidParameter("too many points".into()));
        }
        let cell_size = (domain.area() / points.len().max(1) as f64).sqrt();
        let index = GridIndex::build(&points, domain, cell_size);
        Ok(Self {
            points,
            index,
            meta,
        })
    }

    /// Id of the point equal to `p`, if any.
    pub fn locate(&self, p: Point) -> Option<usize> {
        let (i, j) = self.index.home_cell(p);
        self.index
            .cell(i, j)
            .iter()
            .map(|&id| id as usize)
            .find(|&id| self.points[id] == p)
    }

    /// The same set with `D[a]` redefined by inset `a`.
    pub fn with_inset(self, inset_a: f64) -> Result<Self> {
        let meta = SampleMeta { inset_a, ..self.meta };
        Self::from_parts(self.points, meta)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn domain(&self) -> Rect {
        self.meta.domain
    }

    pub fn meta(&self) -> &SampleMeta {
        &self.meta
    }

    pub fn index(&self) -> &GridIndex {
        &self.index
    }

    pub fn seed(&self) -> u64 {
        self.meta.seed
    }

    /// The scale `n` of the sampling model; the realised count for explicit sets.
    pub fn nominal_n(&self) -> f64 {
        match self.meta.model {
            SampleModel::Ppp { n } => n,
            SampleModel::Iid { n } => n as f64,
            SampleModel::Explicit => self.points.len() as f64,
        }
    }

    /// `D[a]` for the recorded inset, or the whole domain when none is set.
    pub fn inset_domain(&self) -> Rect {
        self.meta
            .domain
            .inset(self.meta.inset_a)
            .unwrap_or(self.meta.domain)
    }

    /// Upper bound of the point intensity, `n M_f` for Poisson samples.
    pub fn peak_intensity(&self) -> f64 {
        match (self.meta.model, self.meta.density) {
            (SampleModel::Ppp { n }, Some(d)) => n * d.max_value(),
            (SampleModel::Iid { n }, Some(d)) => n as f64 * d.max_value() / d.integral(),
            _ => self.points.len() as f64 / self.meta.domain.area(),
        }
    }

    /// Nearest element of `S ∪ {extra}` in the sector family described by
    /// `query`: the smallest key wins, then the smallest distance to the first
    /// border, then the smallest id (the extra point ranks last). The apex
    /// itself never qualifies.
    pub fn nearest_in_sector(&self, query: &SectorQuery, extra: Option<Point>) -> Option<SectorHit> {
        let mut best = Best::new(query);
        if let Some(t) = extra {
            best.offer(t, Candidate::Extra);
        }
        let cone_cos = match query.shape {
            DomainShape::Camembert => 1.0,
            DomainShape::Triangle if query.half_angle < PI / 2.0 => query.half_angle.cos(),
            DomainShape::Triangle => 0.0,
        };
        if cone_cos == 0.0 {
            for &id in self.index.all_ids() {
                best.offer(self.points[id as usize], Candidate::Point(id as usize));
            }
            return best.hit;
        }
        let cs = self.index.cell_size();
        let (ci, cj) = self.index.cell_coords(query.apex);
        for k in 0..=self.index.max_ring(ci, cj) {
            // every cell of ring k is at least (k - 1) cells away from the apex
            let lower = (k - 1).max(0) as f64 * cs * cone_cos;
            if best.hit.is_some_and(|h| h.key < lower) {
                break;
            }
            self.index.for_each_ring_cell(ci, cj, k, |i, j| {
                let ids = self.index.cell(i, j);
                if ids.is_empty() || !cell_meets_cone(self.index.cell_rect(i, j), query) {
                    return;
                }
                for &id in ids {
                    best.offer(self.points[id as usize], Candidate::Point(id as usize));
                }
            });
        }
        best.hit
    }
}

struct Best<'q> {
    query: &'q SectorQuery,
    hit: Option<SectorHit>,
    hit_border: f64,
}

impl<'q> Best<'q> {
    fn new(query: &'q SectorQuery) -> Self {
        Self {
            query,
            hit: None,
            hit_border: f64::NAN,
        }
    }

    fn offer(&mut self, p: Point, candidate: Candidate) {
        let q = self.query;
        let (u, w) = local_coords(p, q.apex, q.direction);
        let key = match q.shape {
            DomainShape::Camembert if in_sector_local(u, w, q.half_angle) => u.hypot(w),
            DomainShape::Triangle if in_triangle_cone_local(u, w, q.half_angle) => u,
            _ => return,
        };
        let first_border = q.direction - q.half_angle;
        let Some(hit) = self.hit else {
            self.hit = Some(SectorHit { point: p, candidate, key });
            self.hit_border = border_distance_raw(p, q.apex, first_border);
            return;
        };
        if key > hit.key {
            return;
        }
        let border = border_distance_raw(p, q.apex, first_border);
        let better = key < hit.key
            || border < self.hit_border
            || (border == self.hit_border && candidate.rank() < hit.candidate.rank());
        if better {
            self.hit = Some(SectorHit { point: p, candidate, key });
            self.hit_border = border;
        }
    }
}

/// Conservative test: can the cell intersect the infinite cone of the query?
fn cell_meets_cone(cell: Rect, q: &SectorQuery) -> bool {
    let a = q.apex;
    if a.x >= cell.x0 && a.x <= cell.x1 && a.y >= cell.y0 && a.y <= cell.y1 {
        return true;
    }
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for c in cell.corners() {
        let (u, w) = local_coords(c, a, q.direction);
        let ang = w.atan2(u);
        lo = lo.min(ang);
        hi = hi.max(ang);
    }
    if hi - lo > PI {
        // the cell straddles the backward half-line
        return true;
    }
    let slack = q.half_angle + 1e-9;
    hi >= -slack && lo <= slack
}
