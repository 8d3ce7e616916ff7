//! Command-line front end for the cavity simulator: parameter handling,
//! protocol execution, and machine-readable output.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numeric-tolerance failure
//! in `verify`, 4 I/O error.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

pub mod config;
pub mod emit;
pub mod run;

use config::{CommonArgs, Overrides, Protocol};

/// Error with an exit-code category.
#[derive(Clone, Debug)]
pub enum CliError {
    Config(String),
    Tolerance(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Tolerance(_) => 3,
            CliError::Io(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Tolerance(m) | CliError::Io(m) => m,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "zeeman-cavity",
    version,
    about = "Two Zeeman-split three-level atoms in a single-mode cavity: \
             sector dynamics, entanglement protocols, closed-form checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GridArgs {
    /// Grid start in dimensionless gt.
    #[arg(long, value_name = "GT", allow_negative_numbers = true)]
    t_start: Option<f64>,
    /// Grid stop in dimensionless gt.
    #[arg(long, value_name = "GT", allow_negative_numbers = true)]
    t_stop: Option<f64>,
    /// Number of grid points (>= 1).
    #[arg(long)]
    steps: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evolve a product state within its invariant sector over a time grid.
    Evolve {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// Single evaluation time (shorthand for a one-point grid).
        #[arg(
            long,
            value_name = "GT",
            allow_negative_numbers = true,
            conflicts_with_all = ["t_start", "t_stop", "steps"]
        )]
        t: Option<f64>,
        /// Initial product state as "photons,m1,m2".
        #[arg(long, value_name = "STATE")]
        initial: Option<String>,
    },
    /// Compare the tabulated closed-form propagators against the numeric
    /// oracle over a gt grid; exits 3 if the deviation exceeds 1e-10.
    Verify {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Generate an EPR pair by photon post-selection.
    Epr {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of scheduled periods (t = 2 n pi / (sqrt(7) g)).
        #[arg(long, value_name = "N")]
        n_period: Option<u32>,
    },
    /// Demonstrate the local excitation exchange in the bottom sectors.
    Exchange {
        #[command(flatten)]
        common: CommonArgs,
        /// Exchange period index (t = (2n + 1) pi / (sqrt(2) g)).
        #[arg(long, value_name = "N")]
        n_period: Option<u32>,
    },
    /// Transfer an entangled pair to the flight atoms through two cavities.
    Transfer {
        #[command(flatten)]
        common: CommonArgs,
        /// First branch coefficient, "re" or "re,im".
        #[arg(long, value_parser = config::parse_complex, allow_hyphen_values = true)]
        c1: Option<[f64; 2]>,
        /// Second branch coefficient, "re" or "re,im".
        #[arg(long, value_parser = config::parse_complex, allow_hyphen_values = true)]
        c2: Option<[f64; 2]>,
        /// Exchange period index.
        #[arg(long, value_name = "N")]
        n_period: Option<u32>,
    },
    /// Closed-loop calibration against a drifting coupling strength.
    Feedback {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of cycles (>= 1).
        #[arg(long)]
        cycles: Option<u32>,
        /// Relative coupling drift per cycle, |rate| < 1.
        #[arg(long, value_name = "RATE", allow_negative_numbers = true)]
        drift_rate: Option<f64>,
        /// Phenomenological amplitude-decay rate (>= 0).
        #[arg(long, value_name = "GAMMA", allow_negative_numbers = true)]
        gamma: Option<f64>,
    },
}

fn to_overrides(command: Command) -> (Protocol, Overrides) {
    match command {
        Command::Evolve { common, grid, t, initial } => {
            let mut o = Overrides::from_common(common);
            o.time = Some((grid.t_start, grid.t_stop, grid.steps));
            o.single_t = t;
            o.initial = initial;
            (Protocol::Evolve, o)
        }
        Command::Verify { common, grid } => {
            let mut o = Overrides::from_common(common);
            o.time = Some((grid.t_start, grid.t_stop, grid.steps));
            (Protocol::Verify, o)
        }
        Command::Epr { common, n_period } => {
            let mut o = Overrides::from_common(common);
            o.n_period = n_period;
            (Protocol::Epr, o)
        }
        Command::Exchange { common, n_period } => {
            let mut o = Overrides::from_common(common);
            o.n_period = n_period;
            (Protocol::Exchange, o)
        }
        Command::Transfer { common, c1, c2, n_period } => {
            let mut o = Overrides::from_common(common);
            o.c1 = c1;
            o.c2 = c2;
            o.n_period = n_period;
            (Protocol::Transfer, o)
        }
        Command::Feedback { common, cycles, drift_rate, gamma } => {
            let mut o = Overrides::from_common(common);
            o.cycles = cycles;
            o.drift_rate = drift_rate;
            o.gamma = gamma;
            (Protocol::Feedback, o)
        }
    }
}

/// Parse arguments, run, and map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let (protocol, overrides) = to_overrides(cli.command);
    let config = match config::resolve(protocol, overrides) {
        Ok(config) => config,
        Err(e) => {
            eprintln!("error: {}", e.message());
            return e.exit_code();
        }
    };
    match run::execute(&config) {
        Ok(_) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
