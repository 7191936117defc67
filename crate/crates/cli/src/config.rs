//! Run configuration: flags take precedence over the config file, which
//! takes precedence over built-in defaults. The resolved configuration is
//! echoed into every output file so a run can be reproduced from its
//! artifact alone.

use crate::emit::fmt_f64;
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use morse_wigner::grid::Window;

#[derive(Debug)]
pub enum CliError {
    /// Invalid configuration: exit status 2.
    Config(String),
    /// Computation or I/O failure at runtime: exit status 1.
    Run(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Run(m) => write!(f, "{m}"),
        }
    }
}

impl From<morse_wigner::Error> for CliError {
    fn from(e: morse_wigner::Error) -> Self {
        match e {
            morse_wigner::Error::NoBoundState { .. }
            | morse_wigner::Error::LevelOutOfRange { .. }
            | morse_wigner::Error::InvalidTolerance { .. }
            | morse_wigner::Error::ResolutionTooSmall { .. }
            | morse_wigner::Error::QuadPointsTooFew { .. }
            | morse_wigner::Error::InvalidWindow => CliError::Config(e.to_string()),
            other => CliError::Run(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Run(format!("i/o error: {e}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Unresolved command-line options shared by every subcommand.
#[derive(Debug, Clone, clap::Args, Default)]
pub struct CommonArgs {
    /// Dimensionless well depth λ (must exceed 0.5)
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Bound-state quantum number
    #[arg(long)]
    pub n: Option<usize>,
    /// Window lower bound in scaled Q
    #[arg(long = "q-min", allow_negative_numbers = true)]
    pub q_min: Option<f64>,
    /// Window upper bound in scaled Q
    #[arg(long = "q-max", allow_negative_numbers = true)]
    pub q_max: Option<f64>,
    /// Window lower bound in scaled P
    #[arg(long = "p-min", allow_negative_numbers = true)]
    pub p_min: Option<f64>,
    /// Window upper bound in scaled P
    #[arg(long = "p-max", allow_negative_numbers = true)]
    pub p_max: Option<f64>,
    /// Lattice points per axis
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Comma-separated density levels for contours and comparison
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub levels: Option<Vec<f64>>,
    /// Series truncation tolerance (verify: check tolerance override)
    #[arg(long)]
    pub tol: Option<f64>,
    /// Orbit time-average samples per period
    #[arg(long = "quad-points")]
    pub quad_points: Option<usize>,
    /// ε samples in the cached SDF profile
    #[arg(long = "profile-points")]
    pub profile_points: Option<usize>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Flat key = value configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Emit grids as a gnuplot-compatible whitespace matrix
    #[arg(long)]
    pub gnuplot: bool,
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub lambda: f64,
    pub n: usize,
    pub window: Window,
    pub resolution: usize,
    pub levels: Vec<f64>,
    pub tol: f64,
    pub quad_points: usize,
    pub profile_points: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub gnuplot: bool,
    /// λ came from the user (flag or file) rather than the default.
    pub lambda_explicit: bool,
    /// tol came from the user; `verify` then applies it to every check.
    pub tol_explicit: bool,
}

pub const DEFAULT_LEVELS: [f64; 7] = [0.3, 0.25, 0.2, 0.15, 0.1, 0.05, 0.0];

fn parse_config_file(path: &PathBuf) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        map.insert(
            key.trim().replace('_', "-").to_ascii_lowercase(),
            value.trim().to_string(),
        );
    }
    Ok(map)
}

fn file_get<T: std::str::FromStr>(
    file: &BTreeMap<String, String>,
    key: &str,
) -> Result<Option<T>, CliError> {
    match file.get(key) {
        None => Ok(None),
        Some(raw) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| CliError::Config(format!("config key `{key}`: cannot parse `{raw}`"))),
    }
}

impl RunConfig {
    /// Apply precedence: flags > config file > defaults.
    pub fn resolve(command: &'static str, args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };

        let lambda_flag = args.lambda.or(file_get(&file, "lambda")?);
        let lambda_explicit = lambda_flag.is_some();
        let lambda = lambda_flag.unwrap_or(1.0);
        let n = args.n.or(file_get(&file, "n")?).unwrap_or(0);
        let q_min = args.q_min.or(file_get(&file, "q-min")?).unwrap_or(-4.0);
        let q_max = args.q_max.or(file_get(&file, "q-max")?).unwrap_or(8.0);
        let p_min = args.p_min.or(file_get(&file, "p-min")?).unwrap_or(-5.0);
        let p_max = args.p_max.or(file_get(&file, "p-max")?).unwrap_or(5.0);
        let resolution = args
            .resolution
            .or(file_get(&file, "resolution")?)
            .unwrap_or(400);
        let levels = match (&args.levels, file.get("levels")) {
            (Some(flag), _) => flag.clone(),
            (None, Some(raw)) => raw
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<f64>().map_err(|_| {
                        CliError::Config(format!("config key `levels`: cannot parse `{tok}`"))
                    })
                })
                .collect::<Result<Vec<f64>, CliError>>()?,
            (None, None) => DEFAULT_LEVELS.to_vec(),
        };
        let tol_flag = args.tol.or(file_get(&file, "tol")?);
        let tol_explicit = tol_flag.is_some();
        let tol = tol_flag.unwrap_or(1e-10);
        let quad_points = args
            .quad_points
            .or(file_get(&file, "quad-points")?)
            .unwrap_or(256);
        let profile_points = args
            .profile_points
            .or(file_get(&file, "profile-points")?)
            .unwrap_or(400);
        let format = args
            .format
            .or(match file.get("format").map(String::as_str) {
                Some("csv") => Some(Format::Csv),
                Some("json") => Some(Format::Json),
                Some(other) => {
                    return Err(CliError::Config(format!("unknown format `{other}`")));
                }
                None => None,
            })
            .unwrap_or(Format::Csv);
        let output = args
            .output
            .clone()
            .or_else(|| file.get("output").map(PathBuf::from));
        let gnuplot = args.gnuplot || file.get("gnuplot").map(String::as_str) == Some("true");

        let window = Window::new(q_min, q_max, p_min, p_max)?;
        Ok(RunConfig {
            command,
            lambda,
            n,
            window,
            resolution,
            levels,
            tol,
            quad_points,
            profile_points,
            format,
            output,
            gnuplot,
            lambda_explicit,
            tol_explicit,
        })
    }

    /// Ordered config echo embedded in every artifact.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        vec![
            (
                "tool",
                format!("morse-wigner {}", env!("CARGO_PKG_VERSION")),
            ),
            ("command", self.command.to_string()),
            ("lambda", fmt_f64(self.lambda)),
            ("n", self.n.to_string()),
            ("units", "hbar^-1".to_string()),
            ("q-min", fmt_f64(self.window.q_min)),
            ("q-max", fmt_f64(self.window.q_max)),
            ("p-min", fmt_f64(self.window.p_min)),
            ("p-max", fmt_f64(self.window.p_max)),
            ("resolution", self.resolution.to_string()),
            (
                "levels",
                self.levels
                    .iter()
                    .map(|&l| fmt_f64(l))
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("tol", fmt_f64(self.tol)),
            ("quad-points", self.quad_points.to_string()),
            ("profile-points", self.profile_points.to_string()),
            (
                "format",
                match self.format {
                    Format::Csv => "csv".to_string(),
                    Format::Json => "json".to_string(),
                },
            ),
            ("gnuplot", self.gnuplot.to_string()),
        ]
    }
}
