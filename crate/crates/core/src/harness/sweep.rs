use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{generate_pairs, render_svg_string, summarize, ExperimentConfig, Summary};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_distance, Point, Polyline};
use crate::limits::{predict, predict_cost_with_moment, stage_law, MomentCache, Prediction, ORACLE_SEED};
use crate::navigation::{costs, splitmix64, ExitReason, Navigator, PathRecord};
use crate::point_process::{navmax, sample_ppp, PointSet};

pub const RESULTS_FORMAT_VERSION: u32 = 1;

/// One navigation of one `(n, seed)` cell.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub n: f64,
    pub seed_index: usize,
    pub seed: u64,
    pub pair: usize,
    pub s: Point,
    pub t: Point,
    pub kind: String,
    pub theta: f64,
    pub points: usize,
    pub success: bool,
    pub exit: ExitReason,
    /// Strict approach to `t` and containment in `B(t, |s - t|)`.
    pub monotone: bool,
    pub nb: usize,
    pub length: f64,
    pub nb_over_sqrt_n: f64,
    /// `Cost_{H_g} · n^{(g-1)/2}` for each configured exponent.
    pub costs: Vec<f64>,
    pub predicted_length: f64,
    pub predicted_nb_over_sqrt_n: f64,
    pub predicted_costs: Vec<f64>,
    /// Hausdorff distance between the path and `[s, t]` or `Γ(s, t)`.
    pub hausdorff: f64,
    /// `sup_x |Pos(x √n) - Pos^∞(x)|`.
    pub sup_position_error: f64,
    /// Infinite when some sector of the lattice is empty.
    #[serde(with = "maybe_infinite")]
    pub navmax: Option<f64>,
    /// Seconds spent in the navigation run.
    pub wall_time: Option<f64>,
}

impl ResultRow {
    pub fn length_rel_error(&self) -> f64 {
        rel_error(self.length, self.predicted_length)
    }

    pub fn nb_rel_error(&self) -> f64 {
        rel_error(self.nb_over_sqrt_n, self.predicted_nb_over_sqrt_n)
    }
}

/// JSON has no infinity: non-finite values travel as `"inf"`, `"-inf"` or
/// `"NaN"` strings.
mod maybe_infinite {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(value: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) if !v.is_finite() => Repr::Text(v.to_string()).serialize(s),
            Some(v) => Repr::Number(*v).serialize(s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
        match Option::<Repr>::deserialize(d)? {
            None => Ok(None),
            Some(Repr::Number(v)) => Ok(Some(v)),
            Some(Repr::Text(t)) => t
                .parse::<f64>()
                .map(Some)
                .map_err(|_| serde::de::Error::custom(format!("`{t}` is not a number"))),
        }
    }
}

fn rel_error(value: f64, reference: f64) -> f64 {
    if reference == 0.0 {
        value.abs()
    } else {
        (value - reference).abs() / reference.abs()
    }
}

/// Seed of the `(n_index, seed_index)` cell, derived from the master seed by
/// a counter so that cells are independent of the sweep order.
pub fn cell_seed(master: u64, n_index: usize, seed_index: usize) -> u64 {
    let counter = ((n_index as u64) << 32) | (seed_index as u64 & 0xffff_ffff);
    splitmix64(master ^ splitmix64(counter))
}

struct PairLimit {
    s: Point,
    t: Point,
    prediction: Prediction,
    trajectory: Polyline,
    /// Limit of `Cost_{H_g} / n^{(1-g)/2}` per exponent.
    costs: Vec<f64>,
}

fn pair_limits(config: &ExperimentConfig, pairs: &[(Point, Point)]) -> Result<Vec<PairLimit>> {
    let mut moments = MomentCache::with_budget(config.moment_samples, ORACLE_SEED);
    let q: Vec<f64> = config
        .exponents
        .iter()
        .map(|&g| moments.moment(stage_law(config.nav.kind), config.nav.theta, g))
        .collect::<Result<_>>()?;
    pairs
        .par_iter()
        .map(|&(s, t)| {
            let prediction = predict(&config.nav, s, t, &config.density)?;
            let costs = config
                .exponents
                .iter()
                .zip(&q)
                .map(|(&g, &q)| predict_cost_with_moment(&config.nav, g, q, s, t, &config.density))
                .collect::<Result<_>>()?;
            Ok(PairLimit {
                s,
                t,
                trajectory: prediction.trajectory(s, t),
                prediction,
                costs,
            })
        })
        .collect()
}

/// `sup_k |stop_k - Pos^∞(k / √n)|` over the stages of the run and of the
/// limit, each frozen at its end.
fn sup_position_error(record: &PathRecord, prediction: &Prediction, sqrt_n: f64) -> f64 {
    let limit_stages = (prediction.curve.end_time() * sqrt_n).ceil() as usize;
    let last = record.last();
    (0..=record.nb.max(limit_stages))
        .map(|k| {
            let p = record.stops.get(k).copied().unwrap_or(last);
            p.distance(prediction.curve.position_at(k as f64 / sqrt_n))
        })
        .fold(0.0, f64::max)
}

fn run_cell(
    config: &ExperimentConfig,
    limits: &[PairLimit],
    n_index: usize,
    seed_index: usize,
) -> Result<(PointSet, Vec<ResultRow>, Vec<Polyline>)> {
    let n = config.n_values[n_index];
    let seed = cell_seed(config.master_seed, n_index, seed_index);
    let ps = sample_ppp(&config.density, n, seed)?;
    let navigator = Navigator::new(&config.nav, &ps)?;
    let navmax_value = match config.navmax_step {
        Some(step) if !ps.is_empty() => Some(navmax(&ps, config.nav.theta, step)?.value),
        Some(_) => Some(f64::INFINITY),
        None => None,
    };
    let sqrt_n = n.sqrt();
    let resolution = 1e-3 * config.density.domain.diameter();
    let results: Vec<(ResultRow, Polyline)> = limits
        .par_iter()
        .enumerate()
        .map(|(pair, limit)| {
            let start = Instant::now();
            let record = navigator.run(limit.s, limit.t);
            let elapsed = start.elapsed().as_secs_f64();
            let path = record.polyline();
            let cost = costs(&record, &config.exponents);
            let row = ResultRow {
                n,
                seed_index,
                seed,
                pair,
                s: limit.s,
                t: limit.t,
                kind: config.nav.kind.to_string(),
                theta: config.nav.theta,
                points: ps.len(),
                success: record.success,
                exit: record.exit,
                monotone: record.strictly_approaches() && record.within_start_ball(),
                nb: record.nb,
                length: record.length,
                nb_over_sqrt_n: record.nb as f64 / sqrt_n,
                costs: config
                    .exponents
                    .iter()
                    .zip(&cost.values)
                    .map(|(&g, &c)| match g {
                        0.0 => c / sqrt_n,
                        1.0 => c,
                        _ => c * n.powf((g - 1.0) / 2.0),
                    })
                    .collect(),
                predicted_length: limit.prediction.limit_length,
                predicted_nb_over_sqrt_n: limit.prediction.limit_nb_over_sqrt_n,
                predicted_costs: limit.costs.clone(),
                hausdorff: hausdorff_distance(&path, &limit.trajectory, resolution)?,
                sup_position_error: sup_position_error(&record, &limit.prediction, sqrt_n),
                navmax: navmax_value,
                wall_time: config.record_wall_time.then_some(elapsed),
            };
            Ok((row, path))
        })
        .collect::<Result<_>>()?;
    let (rows, paths) = results.into_iter().unzip();
    Ok((ps, rows, paths))
}

/// Runs every pair in every `(n, seed)` cell. Rows come out in
/// `(n, seed, pair)` order whatever the scheduling.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    config.validate()?;
    if config.n_values.is_empty() {
        return Ok(Vec::new());
    }
    let pairs = generate_pairs(config)?;
    let limits = pair_limits(config, &pairs)?;
    let cells: Vec<(usize, usize)> = (0..config.n_values.len())
        .flat_map(|i| (0..config.seeds_per_n).map(move |k| (i, k)))
        .collect();
    let rows: Vec<Vec<ResultRow>> = cells
        .par_iter()
        .map(|&(i, k)| run_cell(config, &limits, i, k).map(|(_, rows, _)| rows))
        .collect::<Result<_>>()?;
    Ok(rows.into_iter().flatten().collect())
}

/// SVG of the first cell: its points, up to 16 paths and their limits.
pub(crate) fn first_cell_svg(config: &ExperimentConfig) -> Result<String> {
    let pairs = generate_pairs(config)?;
    let limits = pair_limits(config, &pairs[..pairs.len().min(16)])?;
    let (ps, _, paths) = run_cell(config, &limits, 0, 0)?;
    let trajectories: Vec<Polyline> = limits.iter().map(|l| l.trajectory.clone()).collect();
    Ok(render_svg_string(&ps, &paths, &trajectories))
}

fn csv_header(exponents: &[f64]) -> Vec<String> {
    let mut h: Vec<String> = [
        "n", "seed_index", "seed", "pair", "s_x", "s_y", "t_x", "t_y", "kind", "theta", "points", "success",
        "exit", "monotone", "nb", "length", "nb_over_sqrt_n",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend(exponents.iter().map(|g| format!("cost_g{g}")));
    h.extend(["predicted_length".into(), "predicted_nb_over_sqrt_n".into()]);
    h.extend(exponents.iter().map(|g| format!("predicted_cost_g{g}")));
    h.extend(["hausdorff", "sup_position_error", "navmax", "wall_time"].map(String::from));
    h
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV with a versioned comment line, a header row and one row per result.
pub fn write_csv<W: Write>(mut out: W, exponents: &[f64], rows: &[ResultRow]) -> Result<()> {
    writeln!(out, "#compass-nav-results v{RESULTS_FORMAT_VERSION}")?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(exponents))?;
    for r in rows {
        if r.costs.len() != exponents.len() || r.predicted_costs.len() != exponents.len() {
            return Err(Error::InvalidParameter("row costs do not match the exponents".into()));
        }
        let exit = serde_json::to_value(r.exit)?;
        let mut rec: Vec<String> = vec![
            r.n.to_string(),
            r.seed_index.to_string(),
            r.seed.to_string(),
            r.pair.to_string(),
            r.s.x.to_string(),
            r.s.y.to_string(),
            r.t.x.to_string(),
            r.t.y.to_string(),
            r.kind.clone(),
            r.theta.to_string(),
            r.points.to_string(),
            r.success.to_string(),
            exit.as_str().unwrap_or_default().to_string(),
            r.monotone.to_string(),
            r.nb.to_string(),
            r.length.to_string(),
            r.nb_over_sqrt_n.to_string(),
        ];
        rec.extend(r.costs.iter().map(f64::to_string));
        rec.push(r.predicted_length.to_string());
        rec.push(r.predicted_nb_over_sqrt_n.to_string());
        rec.extend(r.predicted_costs.iter().map(f64::to_string));
        rec.push(r.hausdorff.to_string());
        rec.push(r.sup_position_error.to_string());
        rec.push(opt(r.navmax));
        rec.push(opt(r.wall_time));
        w.write_record(rec)?;
    }
    w.flush()?;
    Ok(())
}

/// The JSON results file: the CSV rows plus the configuration and summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResultsFile {
    pub format: String,
    pub version: u32,
    pub config: ExperimentConfig,
    pub summary: Option<Summary>,
    pub rows: Vec<ResultRow>,
}

pub fn write_json<W: Write>(out: W, config: &ExperimentConfig, rows: &[ResultRow]) -> Result<()> {
    let file = ResultsFile {
        format: "compass-nav-results".into(),
        version: RESULTS_FORMAT_VERSION,
        config: config.clone(),
        summary: if rows.is_empty() { None } else { Some(summarize(rows)?) },
        rows: rows.to_vec(),
    };
    serde_json::to_writer_pretty(out, &file)?;
    Ok(())
}

pub fn read_results_json(text: &str) -> Result<ResultsFile> {
    let file: ResultsFile = serde_json::from_str(text)?;
    if file.format != "compass-nav-results" || file.version != RESULTS_FORMAT_VERSION {
        return Err(Error::Parse(format!("unsupported results file {} v{}", file.format, file.version)));
    }
    file.config.validate()?;
    Ok(file)
}

/// Writes every output named in the configuration.
pub fn write_outputs(config: &ExperimentConfig, rows: &[ResultRow]) -> Result<()> {
    if let Some(path) = &config.outputs.csv {
        write_csv(std::io::BufWriter::new(std::fs::File::create(path)?), &config.exponents, rows)?;
    }
    if let Some(path) = &config.outputs.json {
        write_json(std::io::BufWriter::new(std::fs::File::create(path)?), config, rows)?;
    }
    if let Some(path) = &config.outputs.svg {
        if !config.n_values.is_empty() {
            std::fs::write(path, first_cell_svg(config)?)?;
        }
    }
    Ok(())
}
