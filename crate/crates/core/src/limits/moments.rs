//! Monte Carlo moments of the directed stage law, and a persistable cache of
//! `E(l^g)` for the exponents without a closed form.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::constants::{closed_form_moment, StageLaw};
use crate::error::{Error, Result};
use crate::navigation::{stage_stream, NavKind, NavSpec};

/// Fixed seed of the moment oracle.
pub const ORACLE_SEED: u64 = 0x0a11_ce5e_ed00_2011;
/// Sample budget of cached moments.
pub const ORACLE_SAMPLES: u64 = 10_000_000;
/// Fewest samples accepted by [`mc_constants`].
pub const MIN_MC_SAMPLES: usize = 10_000;

/// A Monte Carlo mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    /// `|mean - value|` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value).abs() / self.std_error
    }
}

/// Monte Carlo estimates for one directed law.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConstants {
    pub kind: String,
    pub theta: f64,
    pub samples: usize,
    pub seed: u64,
    pub e_l: Estimate,
    pub e_x: Estimate,
    pub e_xi: Estimate,
    pub e_l2: Estimate,
    /// `E(l) / E(x)`, with a delta-method standard error.
    pub q_bis: Estimate,
    /// `E(l) / E(ξ)`.
    pub q_bor: Estimate,
}

#[derive(Default)]
struct Moments {
    n: f64,
    l: f64,
    ll: f64,
    x: f64,
    xx: f64,
    xi: f64,
    xixi: f64,
    lx: f64,
    lxi: f64,
    l4: f64,
}

impl Moments {
    fn mean(&self, sum: f64) -> f64 {
        sum / self.n
    }

    fn estimate(&self, sum: f64, sum_sq: f64) -> Estimate {
        let mean = self.mean(sum);
        let var = (self.mean(sum_sq) - mean * mean).max(0.0) * self.n / (self.n - 1.0);
        Estimate {
            mean,
            std_error: (var / self.n).sqrt(),
        }
    }

    /// Delta method for `E(a) / E(b)`.
    fn ratio(&self, a: f64, aa: f64, b: f64, bb: f64, ab: f64) -> Estimate {
        let (ma, mb) = (self.mean(a), self.mean(b));
        let r = ma / mb;
        let var_a = self.mean(aa) - ma * ma;
        let var_b = self.mean(bb) - mb * mb;
        let cov = self.mean(ab) - ma * mb;
        let var = (var_a - 2.0 * r * cov + r * r * var_b).max(0.0) / (mb * mb);
        Estimate {
            mean: r,
            std_error: (var / self.n).sqrt(),
        }
    }
}

/// Monte Carlo moments of a directed stage at intensity 1: length `l`,
/// bisector projection `x`, first-border projection `ξ`, `l²`, and the ratios.
pub fn mc_constants(kind: NavKind, theta: f64, samples: usize, seed: u64) -> Result<McConstants> {
    let spec = match kind {
        NavKind::DirectedT { .. } => NavKind::DirectedT { alpha: 0.0 },
        NavKind::DirectedY { .. } => NavKind::DirectedY { alpha: 0.0 },
        other => {
            return Err(Error::InvalidParameter(format!(
                "Monte Carlo constants need a directed kind, not {}",
                other.name()
            )))
        }
    };
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_MC_SAMPLES} samples are needed, got {samples}"
        )));
    }
    let spec = NavSpec {
        kind: spec,
        theta,
        p_theta: None,
        north_seed: None,
        max_steps: None,
    };
    // ξ is the projection on HL_0, the border at angle -θ/2
    let (border_sin, border_cos) = (-theta / 2.0).sin_cos();
    let mut m = Moments::default();
    for d in stage_stream(&spec, seed)?.take(samples) {
        let l2 = d.norm_sqr();
        let l = l2.sqrt();
        let xi = d.x * border_cos + d.y * border_sin;
        m.n += 1.0;
        m.l += l;
        m.ll += l2;
        m.x += d.x;
        m.xx += d.x * d.x;
        m.xi += xi;
        m.xixi += xi * xi;
        m.lx += l * d.x;
        m.lxi += l * xi;
        m.l4 += l2 * l2;
    }
    Ok(McConstants {
        kind: kind.name().into(),
        theta,
        samples,
        seed,
        e_l: m.estimate(m.l, m.ll),
        e_x: m.estimate(m.x, m.xx),
        e_xi: m.estimate(m.xi, m.xixi),
        e_l2: m.estimate(m.ll, m.l4),
        q_bis: m.ratio(m.l, m.ll, m.x, m.xx, m.lx),
        q_bor: m.ratio(m.l, m.ll, m.xi, m.xixi, m.lxi),
    })
}

/// Monte Carlo estimate of `E(l^g)` for a stage law.
pub fn mc_moment(law: StageLaw, theta: f64, g: f64, samples: usize, seed: u64) -> Result<Estimate> {
    let kind = match law {
        StageLaw::Triangle => NavKind::DirectedT { alpha: 0.0 },
        StageLaw::Camembert => NavKind::DirectedY { alpha: 0.0 },
    };
    if samples < 2 {
        return Err(Error::InvalidParameter("need at least two samples".into()));
    }
    let spec = NavSpec {
        kind,
        theta,
        p_theta: None,
        north_seed: None,
        max_steps: None,
    };
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for d in stage_stream(&spec, seed)?.take(samples) {
        let v = d.norm().powf(g);
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(Estimate {
        mean,
        std_error: (var / n).sqrt(),
    })
}

/// Where a moment came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentSource {
    ClosedForm,
    MonteCarlo,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentEntry {
    pub law: StageLaw,
    pub theta: f64,
    pub g: f64,
    pub value: f64,
    pub std_error: f64,
    pub source: MomentSource,
    pub samples: u64,
    pub seed: u64,
}

/// `E(l^g)` by closed form when one exists, otherwise by a cached Monte
/// Carlo run with a fixed seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MomentCache {
    pub samples: u64,
    pub seed: u64,
    entries: BTreeMap<String, MomentEntry>,
}

impl Default for MomentCache {
    fn default() -> Self {
        Self::with_budget(ORACLE_SAMPLES, ORACLE_SEED)
    }
}

impl MomentCache {
    pub fn with_budget(samples: u64, seed: u64) -> Self {
        Self {
            samples,
            seed,
            entries: BTreeMap::new(),
        }
    }

    fn key(law: StageLaw, theta: f64, g: f64) -> String {
        format!("{law:?}:{theta:?}:{g:?}")
    }

    pub fn entry(&mut self, law: StageLaw, theta: f64, g: f64) -> Result<MomentEntry> {
        if !(g >= 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("exponent {g} must be non-negative")));
        }
        if !(theta > 0.0 && theta < PI) {
            return Err(Error::InvalidParameter(format!("theta {theta} outside (0, π)")));
        }
        if let Some(value) = closed_form_moment(law, theta, g) {
            return Ok(MomentEntry {
                law,
                theta,
                g,
                value,
                std_error: 0.0,
                source: MomentSource::ClosedForm,
                samples: 0,
                seed: 0,
            });
        }
        let key = Self::key(law, theta, g);
        if let Some(e) = self.entries.get(&key) {
            return Ok(e.clone());
        }
        let est = mc_moment(law, theta, g, self.samples as usize, self.seed)?;
        let entry = MomentEntry {
            law,
            theta,
            g,
            value: est.mean,
            std_error: est.std_error,
            source: MomentSource::MonteCarlo,
            samples: self.samples,
            seed: self.seed,
        };
        self.entries.insert(key, entry.clone());
        Ok(entry)
    }

    pub fn moment(&mut self, law: StageLaw, theta: f64, g: f64) -> Result<f64> {
        Ok(self.entry(law, theta, g)?.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_slice(&std::fs::read(path)?)?)
    }
}
