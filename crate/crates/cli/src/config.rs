//! Run configuration: command-line flags layered over an optional
//! `key = value` config file, resolved into one serializable record.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Discrete,
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Four numbers: `(re α, im α, re β, im β)` or `(|α|, arg α°, |β|, arg β°)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    Amplitudes([f64; 4]),
    Polar([f64; 4]),
}

impl StateSpec {
    pub fn to_state(self) -> Result<wavepath::PureState64, CliError> {
        let s = match self {
            StateSpec::Amplitudes([a, b, c, d]) => wavepath::PureState::from_parts(a, b, c, d),
            StateSpec::Polar([a, b, c, d]) => wavepath::PureState::from_polar_degrees(a, b, c, d),
        };
        Ok(s?)
    }
}

/// `start:stop:count`, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [start, stop, count] = parts[..] else {
            return Err(format!("grid `{s}` must look like start:stop:count"));
        };
        let num = |t: &str| {
            t.parse::<f64>()
                .map_err(|e| format!("bad grid bound `{t}`: {e}"))
        };
        let grid = GridSpec {
            start: num(start)?,
            stop: num(stop)?,
            count: count
                .parse()
                .map_err(|e| format!("bad grid count `{count}`: {e}"))?,
        };
        if !grid.start.is_finite() || !grid.stop.is_finite() || grid.count == 0 {
            return Err(format!(
                "grid `{s}` must have finite bounds and a positive count"
            ));
        }
        Ok(grid)
    }
}

fn parse_four(s: &str) -> Result<[f64; 4], String> {
    let values = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number `{t}`: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    values
        .try_into()
        .map_err(|v: Vec<f64>| format!("expected 4 comma-separated numbers, got {}", v.len()))
}

/// Options shared by every subcommand. Unset fields fall back to the config
/// file, then to defaults.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Options {
    /// Config file of `key = value` lines using the long flag names
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// State amplitudes `re_a,im_a,re_b,im_b`
    #[arg(long, allow_hyphen_values = true, conflicts_with = "state_polar")]
    pub state: Option<String>,

    /// State as `mag_a,phase_a_deg,mag_b,phase_b_deg`
    #[arg(long, allow_hyphen_values = true)]
    pub state_polar: Option<String>,

    /// Marking angle θ (radians unless --degrees)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,

    /// Analyzer angle ϑ (radians unless --degrees)
    #[arg(long, allow_hyphen_values = true)]
    pub vartheta: Option<f64>,

    /// Read every angle, including scan grids, in degrees
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub degrees: Option<bool>,

    #[arg(long, value_enum)]
    pub mode: Option<Mode>,

    /// Number of shots
    #[arg(long)]
    pub n: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// θ grid for scans, `start:stop:count`
    #[arg(long)]
    pub theta_grid: Option<String>,

    /// ϑ grid for scans, `start:stop:count`
    #[arg(long)]
    pub vartheta_grid: Option<String>,

    /// Points of the φ grid used for density export
    #[arg(long)]
    pub phi_points: Option<usize>,

    /// Include sampled density grids in JSON output
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub with_grid: Option<bool>,

    /// Singularity threshold on kernel denominators
    #[arg(long)]
    pub eps_sing: Option<f64>,

    /// Write shot records (CSV) to this file
    #[arg(long)]
    pub shots: Option<PathBuf>,

    /// Write the report to this file instead of stdout
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl Options {
    /// Fills every unset field from `base`.
    fn or(self, base: Options) -> Options {
        Options {
            config: self.config.or(base.config),
            state: self.state.or(base.state),
            state_polar: self.state_polar.or(base.state_polar),
            theta: self.theta.or(base.theta),
            vartheta: self.vartheta.or(base.vartheta),
            degrees: self.degrees.or(base.degrees),
            mode: self.mode.or(base.mode),
            n: self.n.or(base.n),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
            theta_grid: self.theta_grid.or(base.theta_grid),
            vartheta_grid: self.vartheta_grid.or(base.vartheta_grid),
            phi_points: self.phi_points.or(base.phi_points),
            with_grid: self.with_grid.or(base.with_grid),
            eps_sing: self.eps_sing.or(base.eps_sing),
            shots: self.shots.or(base.shots),
            out: self.out.or(base.out),
        }
    }
}

/// Fully resolved configuration, echoed into every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub state: StateSpec,
    pub theta: f64,
    pub vartheta: f64,
    pub degrees: bool,
    pub mode: Mode,
    pub n: u64,
    pub seed: u64,
    pub format: Format,
    pub theta_grid: GridSpec,
    pub vartheta_grid: GridSpec,
    pub phi_points: usize,
    pub with_grid: bool,
    pub eps_sing: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<PathBuf>,
}

pub const DEFAULT_STATE: [f64; 4] = [1.0, 0.0, 0.0, 0.0];
pub const DEFAULT_N: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_PHI_POINTS: usize = 256;

impl RunConfig {
    /// Merges flags over the config file named by `--config`, then defaults.
    pub fn resolve(flags: Options) -> Result<Self, CliError> {
        let merged = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Validation(format!("cannot read {}: {e}", path.display()))
                })?;
                let file: Options = toml::from_str(&text).map_err(|e| {
                    CliError::Validation(format!("bad config file {}: {e}", path.display()))
                })?;
                if file.state.is_some() && file.state_polar.is_some() {
                    return Err(CliError::Validation(
                        "config sets both state and state-polar".into(),
                    ));
                }
                // a state given on the command line replaces either file form
                let file = if flags.state.is_some() || flags.state_polar.is_some() {
                    Options {
                        state: None,
                        state_polar: None,
                        ..file
                    }
                } else {
                    file
                };
                flags.or(file)
            }
            None => flags,
        };
        Self::from_options(merged)
    }

    fn from_options(o: Options) -> Result<Self, CliError> {
        let state = match (o.state, o.state_polar) {
            (Some(s), None) => StateSpec::Amplitudes(parse_four(&s).map_err(CliError::Validation)?),
            (None, Some(s)) => StateSpec::Polar(parse_four(&s).map_err(CliError::Validation)?),
            (None, None) => StateSpec::Amplitudes(DEFAULT_STATE),
            (Some(_), Some(_)) => {
                return Err(CliError::Validation(
                    "give either --state or --state-polar".into(),
                ))
            }
        };
        let degrees = o.degrees.unwrap_or(false);
        let (right, straight) = if degrees {
            (90.0, 180.0)
        } else {
            (std::f64::consts::FRAC_PI_2, std::f64::consts::PI)
        };
        let grid = |g: Option<String>, stop: f64, count: usize| -> Result<GridSpec, CliError> {
            match g {
                Some(s) => s.parse().map_err(CliError::Validation),
                None => Ok(GridSpec {
                    start: 0.0,
                    stop,
                    count,
                }),
            }
        };
        let phi_points = o.phi_points.unwrap_or(DEFAULT_PHI_POINTS);
        if phi_points == 0 {
            return Err(CliError::Validation("phi-points must be positive".into()));
        }
        let n = o.n.unwrap_or(DEFAULT_N);
        if n == 0 {
            return Err(CliError::Validation("n must be positive".into()));
        }
        let eps_sing = o.eps_sing.unwrap_or(1e-9);
        if !(eps_sing.is_finite() && eps_sing >= 0.0) {
            return Err(CliError::Validation(
                "eps-sing must be a nonnegative number".into(),
            ));
        }
        Ok(RunConfig {
            state,
            theta: o.theta.unwrap_or(0.0),
            vartheta: o.vartheta.unwrap_or(0.0),
            degrees,
            mode: o.mode.unwrap_or(Mode::Discrete),
            n,
            seed: o.seed.unwrap_or(DEFAULT_SEED),
            format: o.format.unwrap_or(Format::Json),
            theta_grid: grid(o.theta_grid, right, 10)?,
            vartheta_grid: grid(o.vartheta_grid, straight, 13)?,
            phi_points,
            with_grid: o.with_grid.unwrap_or(false),
            eps_sing,
            shots: o.shots,
        })
    }

    fn radians(&self, angle: f64) -> f64 {
        if self.degrees {
            angle.to_radians()
        } else {
            angle
        }
    }

    pub fn marker(&self) -> Result<wavepath::MarkerConfig64, CliError> {
        Ok(wavepath::MarkerConfig::new(
            self.radians(self.theta),
            self.radians(self.vartheta),
        )?)
    }

    pub fn grid_radians(&self, g: &GridSpec) -> Vec<f64> {
        wavepath::linspace(self.radians(g.start), self.radians(g.stop), g.count)
    }

    pub fn threshold(&self) -> wavepath::SingularityThreshold<f64> {
        wavepath::SingularityThreshold(self.eps_sing)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> Options {
        Options {
            state: Some("0.6,0,0,0.8".into()),
            theta: Some(0.4),
            vartheta: Some(1.1),
            mode: Some(Mode::Phase),
            n: Some(123),
            seed: Some(9),
            theta_grid: Some("0:1:5".into()),
            ..Options::default()
        }
    }

    #[test]
    fn round_trips_through_toml_and_json() {
        let cfg = RunConfig::resolve(opts()).unwrap();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(toml::from_str::<RunConfig>(&text).unwrap(), cfg);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&json).unwrap(), cfg);
    }

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "theta = 0.9\nseed = 5\nstate-polar = \"1,0,0,0\"\nmode = \"phase\"\n",
        )
        .unwrap();
        let flags = Options {
            config: Some(path),
            seed: Some(7),
            state: Some("0,0,1,0".into()),
            ..Options::default()
        };
        let cfg = RunConfig::resolve(flags).unwrap();
        assert_eq!(cfg.theta, 0.9);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.mode, Mode::Phase);
        assert_eq!(cfg.state, StateSpec::Amplitudes([0.0, 0.0, 1.0, 0.0]));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(parse_four("1,2,3").is_err());
        assert!(parse_four("1,x,3,4").is_err());
        assert!("0:1".parse::<GridSpec>().is_err());
        assert!("0:1:0".parse::<GridSpec>().is_err());
        let bad = Options {
            n: Some(0),
            ..Options::default()
        };
        assert!(RunConfig::resolve(bad).is_err());
    }

    #[test]
    fn degrees_apply_to_grids() {
        let cfg = RunConfig::resolve(Options {
            degrees: Some(true),
            theta: Some(90.0),
            ..Options::default()
        })
        .unwrap();
        assert_eq!(cfg.theta_grid.stop, 90.0);
        assert_eq!(cfg.marker().unwrap().theta(), std::f64::consts::FRAC_PI_2);
        let g = cfg.grid_radians(&cfg.theta_grid);
        assert_eq!(*g.last().unwrap(), std::f64::consts::FRAC_PI_2);
    }
}
