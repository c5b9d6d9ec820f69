//! `compass-nav`: sample point sets, run navigations, print limits and run
//! experiment sweeps.
//!
//! Exit codes: 0 on success, 1 on a configuration error, 2 on a runtime error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use compass_nav::geometry::{Point, Rect};
use compass_nav::harness::{self, ExperimentConfig};
use compass_nav::limits::{self, MomentCache};
use compass_nav::navigation::{NavKind, NavSpec, Navigator};
use compass_nav::point_process::{self, io, DensityKind, DensitySpec, Diagnostics, PointSet};
use compass_nav::Error;

#[derive(Parser)]
#[command(name = "compass-nav", version, about = "Compass navigations on random point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a point set and write it to a file (`.csv` or binary).
    Sample {
        #[command(flatten)]
        set: SampleArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one navigation and print its record as JSON.
    Navigate {
        #[command(flatten)]
        nav: NavArgs,
        #[command(flatten)]
        set: SetArgs,
        /// Source `x,y`.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        s: Point,
        /// Target `x,y`; ignored by directed kinds.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        t: Option<Point>,
        /// Stage count of a directed run.
        #[arg(long, default_value_t = 100)]
        steps: usize,
        /// Write the stops as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Print the limit constants, and the predictions for a pair if given.
    Limits {
        #[command(flatten)]
        nav: NavArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, requires = "t")]
        s: Option<Point>,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, requires = "s")]
        t: Option<Point>,
        #[command(flatten)]
        density: DensityArgs,
        /// Cost exponents `g` to predict.
        #[arg(long = "g", value_delimiter = ',')]
        exponents: Vec<f64>,
        /// Monte Carlo budget for moments without closed form.
        #[arg(long, default_value_t = limits::ORACLE_SAMPLES)]
        mc_samples: u64,
        /// Write the limiting curve `time,x,y,cost` as CSV.
        #[arg(long)]
        curve_csv: Option<PathBuf>,
    },
    /// Run an experiment sweep from a JSON configuration.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the master seed of the configuration.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// NAVMAX, MAXBALL and r_min of a point set.
    Diagnose {
        #[command(flatten)]
        set: SetArgs,
        /// Camembert angle of NAVMAX.
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_3)]
        theta: f64,
        /// Lattice step of the NAVMAX and MAXBALL searches.
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        /// Ball radius of MAXBALL.
        #[arg(long, default_value_t = 0.05)]
        radius: f64,
    },
}

#[derive(Args)]
struct NavArgs {
    /// yao, t, straight-yao, straight-t, directed-t:ALPHA, directed-y:ALPHA,
    /// random-north-t, random-north-y.
    #[arg(long)]
    kind: String,
    /// Sector angle of straight and directed kinds.
    #[arg(long)]
    theta: Option<f64>,
    /// Number of sectors of cross and random-north kinds.
    #[arg(long)]
    p_theta: Option<u32>,
    #[arg(long)]
    north_seed: Option<u64>,
    #[arg(long)]
    max_steps: Option<usize>,
}

impl NavArgs {
    fn spec(&self) -> Result<NavSpec, Error> {
        let kind: NavKind = self.kind.parse()?;
        let mut spec = match (self.p_theta, self.theta) {
            (Some(p), _) if kind.is_cross() => NavSpec::with_sectors(kind, p)?,
            (None, _) if kind.is_cross() => {
                return Err(Error::InvalidParameter(format!("{} needs --p-theta", kind.name())))
            }
            (_, Some(theta)) => NavSpec::with_angle(kind, theta)?,
            (_, None) => return Err(Error::InvalidParameter(format!("{} needs --theta", kind.name()))),
        };
        spec.north_seed = self.north_seed;
        spec.max_steps = self.max_steps;
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct DensityArgs {
    /// constant:C, affine:A,B,C or bump:CX,CY,BASE,AMPLITUDE,RADIUS.
    #[arg(long, default_value = "constant:1")]
    density: String,
    /// Domain `x0,y0,x1,y1`.
    #[arg(long, default_value = "0,0,1,1", allow_hyphen_values = true)]
    domain: String,
    /// Inset `a` of `D[a]`.
    #[arg(long, default_value_t = 0.05)]
    inset: f64,
}

impl DensityArgs {
    fn spec(&self) -> Result<DensitySpec, Error> {
        let kind: DensityKind = self.density.parse()?;
        DensitySpec::new(kind, parse_rect(&self.domain)?, self.inset)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Ppp,
    Iid,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    density: DensityArgs,
    /// Intensity factor (Poisson) or point count (i.i.d.).
    #[arg(long)]
    n: f64,
    #[arg(long, value_enum, default_value = "ppp")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SampleArgs {
    fn sample(&self) -> Result<PointSet, Error> {
        let density = self.density.spec()?;
        match self.model {
            Model::Ppp => point_process::sample_ppp(&density, self.n, self.seed),
            Model::Iid => {
                if !(self.n >= 0.0 && self.n.fract() == 0.0) {
                    return Err(Error::InvalidParameter(format!("i.i.d. count {} is not an integer", self.n)));
                }
                point_process::sample_iid(&density, self.n as usize, self.seed)
            }
        }
    }
}

/// A point set read from `--points`, or sampled.
#[derive(Args)]
struct SetArgs {
    #[arg(long, conflicts_with = "n")]
    points: Option<PathBuf>,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, value_enum, default_value = "ppp")]
    model: Model,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SetArgs {
    fn load(&self) -> Result<PointSet, CliError> {
        match (&self.points, self.n) {
            (Some(path), _) => io::load(path).map_err(|e| CliError::config(format!("{}: {e}", path.display()))),
            (None, Some(n)) => Ok(SampleArgs {
                density: DensityArgs {
                    density: self.density.density.clone(),
                    domain: self.density.domain.clone(),
                    inset: self.density.inset,
                },
                n,
                model: self.model,
                seed: self.seed,
            }
            .sample()?),
            (None, None) => Err(CliError::config("give --points FILE or --n N".into())),
        }
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got `{s}`"))?;
    let x: f64 = x.trim().parse().map_err(|e| format!("`{x}`: {e}"))?;
    let y: f64 = y.trim().parse().map_err(|e| format!("`{y}`: {e}"))?;
    Ok(Point::new(x, y))
}

fn parse_rect(s: &str) -> Result<Rect, Error> {
    let v = s
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|e| Error::Parse(format!("domain `{s}`: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] => Rect::new(x0, y0, x1, y1),
        _ => Err(Error::Parse(format!("domain `{s}`: expected x0,y0,x1,y1"))),
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: String) -> Self {
        Self { code: 1, message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self {
            code: if e.is_config_error() { 1 } else { 2 },
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn print_json(value: &impl serde::Serialize) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        // a closed reader (`| head`) is not a failure
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(|e| Error::from(e).into()),
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sample { set, out } => {
            let ps = set.sample()?;
            io::save(&ps, &out)?;
            print_json(&json!({ "points": ps.len(), "seed": ps.seed(), "out": out }))
        }
        Command::Navigate {
            nav,
            set,
            s,
            t,
            steps,
            csv,
            svg,
        } => {
            let spec = nav.spec()?;
            let ps = set.load()?;
            let navigator = Navigator::new(&spec, &ps)?;
            let record = if spec.kind.is_directed() {
                navigator.run_directed(s, steps, false)?
            } else {
                let t = t.ok_or_else(|| CliError::config("targeted navigations need --t".into()))?;
                navigator.run(s, t)
            };
            if let Some(path) = csv {
                record.write_csv(std::fs::File::create(path)?)?;
            }
            if let Some(path) = svg {
                std::fs::write(path, record.to_svg(ps.domain(), Some(&ps)))?;
            }
            print_json(&record)
        }
        Command::Limits {
            nav,
            s,
            t,
            density,
            exponents,
            mc_samples,
            curve_csv,
        } => {
            let spec = nav.spec()?;
            let constants = limits::constants(spec.kind, spec.theta)?;
            let (Some(s), Some(t)) = (s, t) else {
                return print_json(&json!({ "constants": constants }));
            };
            let density = density.spec()?;
            let prediction = limits::predict(&spec, s, t, &density)?;
            let mut moments = MomentCache::with_budget(mc_samples, limits::ORACLE_SEED);
            let costs = exponents
                .iter()
                .map(|&g| Ok(json!({ "g": g, "limit": limits::predict_cost(&spec, g, s, t, &density, &mut moments)? })))
                .collect::<Result<Vec<_>, Error>>()?;
            if let Some(path) = curve_csv {
                prediction.curve.write_csv(std::fs::File::create(path)?)?;
            }
            print_json(&json!({
                "constants": constants,
                "prediction": {
                    "limit_length": prediction.limit_length,
                    "limit_nb_over_sqrt_n": prediction.limit_nb_over_sqrt_n,
                    "corner": prediction.corner,
                    "hit_time": prediction.curve.hit_time,
                },
                "costs": costs,
            }))
        }
        Command::Experiment {
            config,
            seed,
            csv,
            json,
            svg,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| CliError::config(format!("{}: {e}", config.display())))?;
            let mut cfg = ExperimentConfig::from_json(&text)?;
            if let Some(seed) = seed {
                cfg.master_seed = seed;
            }
            cfg.outputs.csv = csv.or(cfg.outputs.csv);
            cfg.outputs.json = json.or(cfg.outputs.json);
            cfg.outputs.svg = svg.or(cfg.outputs.svg);
            let rows = harness::run_experiment(&cfg)?;
            harness::write_outputs(&cfg, &rows)?;
            if rows.is_empty() {
                return print_json(&json!({ "rows": 0 }));
            }
            print_json(&json!({ "rows": rows.len(), "summary": harness::summarize(&rows)? }))
        }
        Command::Diagnose {
            set,
            theta,
            grid_step,
            radius,
        } => {
            let ps = set.load()?;
            let report = point_process::navmax(&ps, theta, grid_step)?;
            let diagnostics = Diagnostics {
                navmax: report.value,
                maxball: point_process::maxball(&ps, radius, grid_step)?,
                r_min: point_process::r_min(&ps)?,
                grid_step,
            };
            print_json(&json!({ "diagnostics": diagnostics, "navmax": report }))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("compass-nav: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
