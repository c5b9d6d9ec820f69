use serde::{Deserialize, Serialize};

use super::ResultRow;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeStatus {
    Fitted,
    /// Every error is zero, so no slope exists.
    Exact,
    /// Fewer than two distinct `n`, or mixed zero and non-zero errors.
    Undetermined,
}

/// Least-squares slope of `log(error)` against `log(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Slope {
    pub value: Option<f64>,
    pub status: SlopeStatus,
}

impl Slope {
    /// The slope, NaN unless fitted.
    pub fn as_f64(&self) -> f64 {
        self.value.unwrap_or(f64::NAN)
    }
}

pub fn loglog_slope(ns: &[f64], errors: &[f64]) -> Slope {
    let undetermined = Slope {
        value: None,
        status: SlopeStatus::Undetermined,
    };
    if ns.len() != errors.len() || ns.is_empty() {
        return undetermined;
    }
    if errors.iter().all(|&e| e == 0.0) {
        return Slope {
            value: None,
            status: SlopeStatus::Exact,
        };
    }
    if errors.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return undetermined;
    }
    let xs: Vec<f64> = ns.iter().map(|n| n.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return undetermined;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Slope {
        value: Some(sxy / sxx),
        status: SlopeStatus::Fitted,
    }
}

/// Aggregates of the rows sharing one `n`. Error statistics cover the
/// successful runs only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NSummary {
    pub n: f64,
    pub rows: usize,
    pub successes: usize,
    /// Successful runs that broke the monotone-approach invariant.
    pub monotone_violations: usize,
    pub mean_length_rel_error: f64,
    pub max_length_rel_error: f64,
    pub mean_nb_rel_error: f64,
    pub max_nb_rel_error: f64,
    pub mean_length_ratio: f64,
    pub mean_nb_over_sqrt_n: f64,
    pub mean_hausdorff: f64,
    pub max_hausdorff: f64,
    pub mean_sup_position_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub per_n: Vec<NSummary>,
    pub length_slope: Slope,
    pub nb_slope: Slope,
    pub hausdorff_slope: Slope,
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        f64::NAN
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NAN, f64::max)
}

pub fn summarize(rows: &[ResultRow]) -> Result<Summary> {
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ns: Vec<f64> = rows.iter().map(|r| r.n).collect();
    ns.sort_by(f64::total_cmp);
    ns.dedup();
    let per_n: Vec<NSummary> = ns
        .iter()
        .map(|&n| {
            let group: Vec<&ResultRow> = rows.iter().filter(|r| r.n == n).collect();
            let ok: Vec<&ResultRow> = group.iter().copied().filter(|r| r.success).collect();
            let collect = |f: &dyn Fn(&ResultRow) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
            let len_err = collect(&|r| r.length_rel_error());
            let nb_err = collect(&|r| r.nb_rel_error());
            let hausdorff = collect(&|r| r.hausdorff);
            let ratio = collect(&|r| {
                let d = r.s.distance(r.t);
                if d > 0.0 {
                    r.length / d
                } else {
                    1.0
                }
            });
            NSummary {
                n,
                rows: group.len(),
                successes: ok.len(),
                monotone_violations: ok.iter().filter(|r| !r.monotone).count(),
                mean_length_rel_error: mean(&len_err),
                max_length_rel_error: max(&len_err),
                mean_nb_rel_error: mean(&nb_err),
                max_nb_rel_error: max(&nb_err),
                mean_length_ratio: mean(&ratio),
                mean_nb_over_sqrt_n: mean(&collect(&|r| r.nb_over_sqrt_n)),
                mean_hausdorff: mean(&hausdorff),
                max_hausdorff: max(&hausdorff),
                mean_sup_position_error: mean(&collect(&|r| r.sup_position_error)),
            }
        })
        .collect();
    let slope = |f: fn(&NSummary) -> f64| {
        let v: Vec<f64> = per_n.iter().map(f).collect();
        loglog_slope(&ns, &v)
    };
    Ok(Summary {
        length_slope: slope(|s| s.max_length_rel_error),
        nb_slope: slope(|s| s.max_nb_rel_error),
        hausdorff_slope: slope(|s| s.mean_hausdorff),
        per_n,
    })
}
