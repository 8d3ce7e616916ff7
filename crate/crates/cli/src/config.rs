//! Run configuration: a JSON config file plus command-line flag overrides,
//! resolved into one fully-specified record that is embedded in every output
//! for auditability. Flags win over file values; defaults fill the rest.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zeeman_cavity::operators::PhysicalParams;
use zeeman_cavity::state_space::{AtomLevel, BasisState};

use crate::CliError;

/// Verification gate for the closed-form comparison, fixed by contract.
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputFormat::Csv => write!(f, "csv"),
            OutputFormat::Json => write!(f, "json"),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Evolve,
    Verify,
    Epr,
    Exchange,
    Transfer,
    Feedback,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Evolve => "evolve",
            Protocol::Verify => "verify",
            Protocol::Epr => "epr",
            Protocol::Exchange => "exchange",
            Protocol::Transfer => "transfer",
            Protocol::Feedback => "feedback",
        }
    }
}

/// Optional fields as they may appear in a config file.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub protocol: Option<Protocol>,
    pub params: Option<FileParams>,
    pub time: Option<FileTime>,
    pub n_period: Option<u32>,
    pub c1: Option<[f64; 2]>,
    pub c2: Option<[f64; 2]>,
    pub cycles: Option<u32>,
    pub drift: Option<FileDrift>,
    pub seed: Option<u64>,
    pub initial: Option<String>,
    pub out: Option<String>,
    pub format: Option<OutputFormat>,
    pub parallel: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileParams {
    pub g: Option<f64>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub omega: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileTime {
    pub start: Option<f64>,
    pub stop: Option<f64>,
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileDrift {
    pub g_drift_rate: Option<f64>,
    pub damping_gamma: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text).map_err(|e| {
            CliError::Config(format!(
                "config file {}: line {}, column {}: {e}",
                path.display(),
                e.line(),
                e.column()
            ))
        })
    }
}

/// Physical parameters, fully resolved.
#[derive(Copy, Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResolvedParams {
    pub g: f64,
    pub alpha: f64,
    pub beta: f64,
    pub omega: f64,
}

/// Time grid in dimensionless `gt` units.
#[derive(Copy, Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResolvedTime {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

#[derive(Copy, Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResolvedDrift {
    pub g_drift_rate: f64,
    pub damping_gamma: f64,
}

/// The full, audit-ready configuration of one run.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ResolvedConfig {
    pub protocol: Protocol,
    pub params: ResolvedParams,
    pub time: ResolvedTime,
    pub n_period: u32,
    pub c1: [f64; 2],
    pub c2: [f64; 2],
    pub cycles: u32,
    pub drift: ResolvedDrift,
    pub seed: u64,
    pub initial: String,
    pub out: Option<String>,
    pub format: OutputFormat,
    pub parallel: bool,
}

/// Flag-level overrides shared by every subcommand.
#[derive(Clone, Debug, Default, clap::Args)]
pub struct CommonArgs {
    /// JSON config file; explicit flags override its fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Coupling strength g (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Dipole-dipole coefficient alpha.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Cavity frequency omega.
    #[arg(long, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Zeeman splitting beta.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Output path (stdout when omitted).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Seed for every stochastic element of the run.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Evaluate time-grid points on a thread pool (output order unchanged).
    #[arg(long)]
    pub parallel: bool,
}

pub struct Overrides {
    pub common: CommonArgs,
    pub time: Option<(Option<f64>, Option<f64>, Option<usize>)>,
    pub single_t: Option<f64>,
    pub n_period: Option<u32>,
    pub c1: Option<[f64; 2]>,
    pub c2: Option<[f64; 2]>,
    pub cycles: Option<u32>,
    pub drift_rate: Option<f64>,
    pub gamma: Option<f64>,
    pub initial: Option<String>,
}

impl Overrides {
    pub fn from_common(common: CommonArgs) -> Self {
        Overrides {
            common,
            time: None,
            single_t: None,
            n_period: None,
            c1: None,
            c2: None,
            cycles: None,
            drift_rate: None,
            gamma: None,
            initial: None,
        }
    }
}

const INV_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Merge file values and flag overrides into a resolved config, flags first.
pub fn resolve(protocol: Protocol, overrides: Overrides) -> Result<ResolvedConfig, CliError> {
    let file = match &overrides.common.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(file_protocol) = file.protocol {
        if file_protocol != protocol {
            return Err(CliError::Config(format!(
                "config field `protocol` is \"{}\" but the `{}` subcommand was invoked",
                file_protocol.name(),
                protocol.name()
            )));
        }
    }
    let fp = file.params.unwrap_or_default();
    let params = ResolvedParams {
        g: overrides.common.g.or(fp.g).unwrap_or(1.0),
        alpha: overrides.common.alpha.or(fp.alpha).unwrap_or(0.0),
        beta: overrides.common.beta.or(fp.beta).unwrap_or(1.0),
        omega: overrides.common.omega.or(fp.omega).unwrap_or(1.0),
    };

    let (t_start, t_stop, t_steps) = overrides.time.unwrap_or((None, None, None));
    let (file_start, file_stop, file_steps) = match &file.time {
        Some(t) => (t.start, t.stop, t.steps),
        None => (None, None, None),
    };
    let time = if let Some(t) = overrides.single_t {
        ResolvedTime { start: t, stop: t, steps: 1 }
    } else {
        ResolvedTime {
            start: t_start.or(file_start).unwrap_or(0.0),
            stop: t_stop.or(file_stop).unwrap_or(10.0),
            steps: t_steps.or(file_steps).unwrap_or(1001),
        }
    };

    let fd = file.drift.unwrap_or_default();
    let config = ResolvedConfig {
        protocol,
        params,
        time,
        n_period: overrides.n_period.or(file.n_period).unwrap_or(1),
        c1: overrides.c1.or(file.c1).unwrap_or([INV_SQRT_2, 0.0]),
        c2: overrides.c2.or(file.c2).unwrap_or([INV_SQRT_2, 0.0]),
        cycles: overrides.cycles.or(file.cycles).unwrap_or(20),
        drift: ResolvedDrift {
            g_drift_rate: overrides.drift_rate.or(fd.g_drift_rate).unwrap_or(0.0),
            damping_gamma: overrides.gamma.or(fd.damping_gamma).unwrap_or(0.0),
        },
        seed: overrides.common.seed.or(file.seed).unwrap_or(0),
        initial: overrides
            .initial
            .or(file.initial)
            .unwrap_or_else(|| String::from("0,+1,-1")),
        out: overrides
            .common
            .out
            .map(|p| p.display().to_string())
            .or(file.out),
        format: overrides.common.format.or(file.format).unwrap_or(OutputFormat::Json),
        parallel: overrides.common.parallel || file.parallel.unwrap_or(false),
    };
    validate(&config)?;
    Ok(config)
}

fn validate(config: &ResolvedConfig) -> Result<(), CliError> {
    let p = &config.params;
    if !(p.g.is_finite() && p.g > 0.0) {
        return Err(CliError::Config(format!("params.g: must be finite and > 0 (got {})", p.g)));
    }
    for (name, v) in [("alpha", p.alpha), ("beta", p.beta), ("omega", p.omega)] {
        if !v.is_finite() {
            return Err(CliError::Config(format!("params.{name}: must be finite (got {v})")));
        }
    }
    let t = &config.time;
    if t.steps < 1 {
        return Err(CliError::Config(format!("time.steps: must be >= 1 (got {})", t.steps)));
    }
    if !(t.start.is_finite() && t.stop.is_finite()) || t.stop < t.start {
        return Err(CliError::Config(format!(
            "time: require finite start <= stop (got start={}, stop={})",
            t.start, t.stop
        )));
    }
    if !(config.drift.g_drift_rate.is_finite() && config.drift.g_drift_rate.abs() < 1.0) {
        return Err(CliError::Config(format!(
            "drift.g_drift_rate: must satisfy |rate| < 1 (got {})",
            config.drift.g_drift_rate
        )));
    }
    if !(config.drift.damping_gamma.is_finite() && config.drift.damping_gamma >= 0.0) {
        return Err(CliError::Config(format!(
            "drift.damping_gamma: must be >= 0 (got {})",
            config.drift.damping_gamma
        )));
    }
    match config.protocol {
        Protocol::Epr if config.n_period == 0 => {
            return Err(CliError::Config(String::from("n_period: must be >= 1 for epr")));
        }
        Protocol::Feedback if config.cycles == 0 => {
            return Err(CliError::Config(String::from("cycles: must be >= 1")));
        }
        Protocol::Transfer => {
            let norm_sq = config.c1[0].powi(2)
                + config.c1[1].powi(2)
                + config.c2[0].powi(2)
                + config.c2[1].powi(2);
            if (norm_sq - 1.0).abs() > 1e-9 {
                return Err(CliError::Config(format!(
                    "c1/c2: |c1|^2 + |c2|^2 must be 1 (got {norm_sq})"
                )));
            }
        }
        Protocol::Evolve => {
            parse_initial(&config.initial)?;
        }
        _ => {}
    }
    Ok(())
}

impl ResolvedConfig {
    pub fn physical_params(&self) -> Result<PhysicalParams, CliError> {
        PhysicalParams::new(self.params.g, self.params.alpha, self.params.beta, self.params.omega)
            .map_err(|e| CliError::Config(e.to_string()))
    }

    /// Grid of dimensionless `gt` points.
    pub fn gt_grid(&self) -> Vec<f64> {
        let t = &self.time;
        if t.steps == 1 {
            return vec![t.start];
        }
        (0..t.steps)
            .map(|k| t.start + (t.stop - t.start) * k as f64 / (t.steps - 1) as f64)
            .collect()
    }
}

/// Parse `"photons,m1,m2"` (e.g. `"0,+1,-1"`) into a product state.
pub fn parse_initial(text: &str) -> Result<BasisState, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!(
            "initial: expected \"photons,m1,m2\" with three fields, got \"{text}\""
        )));
    }
    let photons: u32 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("initial: bad photon count \"{}\"", parts[0])))?;
    if photons > 100 {
        return Err(CliError::Config(format!(
            "initial: photon count {photons} is beyond the desk-scale range (max 100)"
        )));
    }
    let level = |s: &str, which: &str| -> Result<AtomLevel, CliError> {
        let m: i32 = s
            .trim_start_matches('+')
            .parse()
            .map_err(|_| CliError::Config(format!("initial: bad {which} \"{s}\"")))?;
        AtomLevel::from_m(m)
            .ok_or_else(|| CliError::Config(format!("initial: {which} must be -1, 0 or +1")))
    };
    Ok(BasisState::new(photons, level(parts[1], "m1")?, level(parts[2], "m2")?))
}

/// Parse `"re"` or `"re,im"` into a complex pair.
pub fn parse_complex(text: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = |s: &str| format!("bad complex component \"{s}\" (expected \"re\" or \"re,im\")");
    match parts.as_slice() {
        [re] => Ok([re.parse().map_err(|_| bad(re))?, 0.0]),
        [re, im] => Ok([re.parse().map_err(|_| bad(re))?, im.parse().map_err(|_| bad(im))?]),
        _ => Err(bad(text)),
    }
}
