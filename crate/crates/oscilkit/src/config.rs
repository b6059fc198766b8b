//! Command-line surface and the run configuration it produces.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, ValueEnum};
use thiserror::Error;

use crate::table::Format;

const AFTER_HELP: &str = "\
Units: unless --si-electron is given every command works with m = ω₀ = 1.
Grids are min:max:n with n >= 2 evenly spaced points, in units of ω₀ for
frequency sweeps, of τω₀ for fig1 and of 1/ω₀ for trajectory.

Transition tables (stark --transitions PATH) are JSON documents in SI units:
  {\"mass\": 9.109e-31, \"charge\": 1.602e-19,
   \"transitions\": [{\"omega\": 1e15, \"dipole_sq\": 1e-58, \"gamma\": 6.3e6}]}
omega is ω_n0 in rad/s, dipole_sq is |D_n0|² in (C·m)², gamma is Γ_n in 1/s.

Exit status: 0 pass, 1 check failure, 2 usage error, 3 numeric failure.";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// AL characteristic roots against τω₀
    Fig1,
    /// Kramers-Kronig transforms of χ″ and of Im X
    Fig2,
    /// relative error of X(ω) near resonance
    Fig3,
    /// absorption and scattering cross sections
    CrossSections,
    /// f-sum rule for several non-radiative widths
    SumRule,
    /// ODE integration of the AL or forced-oscillator equation
    Trajectory,
    /// ac-Stark shift and rate/potential ratio
    Stark,
    /// every acceptance check, with a pass/fail report
    Audit,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fig1 => "fig1",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::CrossSections => "cross-sections",
            Command::SumRule => "sum-rule",
            Command::Trajectory => "trajectory",
            Command::Stark => "stark",
            Command::Audit => "audit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryMode {
    /// AL equation from (x0, v0, b0); generic data run away
    Al,
    /// AL equation held on its bounded solution
    AlBounded,
    /// forced oscillator with the effective Γ + Γ′ and Ω
    Forced,
}

impl TrajectoryMode {
    pub fn name(&self) -> &'static str {
        match self {
            TrajectoryMode::Al => "al",
            TrajectoryMode::AlBounded => "al-bounded",
            TrajectoryMode::Forced => "forced",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub n: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self, String> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(format!("grid needs finite min < max, got {min}:{max}"));
        }
        if n < 2 {
            return Err(format!("grid needs at least 2 points, got {n}"));
        }
        Ok(Self { min, max, n })
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.n - 1) as f64;
        (0..self.n)
            .map(|k| {
                if k + 1 == self.n {
                    self.max
                } else {
                    self.min + step * k as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected min:max:n, got {s:?}"));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {p:?}: {e}"))
        };
        let n = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad point count {:?}: {e}", parts[2]))?;
        Grid::new(num(parts[0])?, num(parts[1])?, n)
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.min, self.max, self.n)
    }
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "oscilkit",
    version,
    about = "Response theory of the forced oscillator and the Abraham-Lorentz equation",
    after_help = AFTER_HELP
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// dimensionless τω₀ (default depends on the command)
    #[arg(long, conflicts_with = "si_electron")]
    pub tau_omega0: Option<f64>,

    /// non-radiative width Γ′ in units of ω₀ (1/s with --si-electron)
    #[arg(long, default_value_t = 0.0)]
    pub gamma_prime: f64,

    /// sweep grid min:max:n
    #[arg(long)]
    pub grid: Option<Grid>,

    /// electron constants (CODATA 2018); τω₀ follows from --omega0
    #[arg(long, requires = "omega0")]
    pub si_electron: bool,

    /// resonance frequency in rad/s for --si-electron
    #[arg(long, requires = "si_electron")]
    pub omega0: Option<f64>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: FormatArg,

    /// output file (stdout when absent)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// trajectory: equation to integrate
    #[arg(long, value_enum, default_value = "al")]
    pub mode: TrajectoryMode,

    /// trajectory: initial elongation
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub x0: f64,

    /// trajectory: initial velocity
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub v0: f64,

    /// trajectory: initial acceleration (mode al only)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub b0: f64,

    /// trajectory: amplitude f₀ of the drive f₀cos(ωt)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub drive_f0: f64,

    /// trajectory: drive frequency in units of ω₀
    #[arg(long, default_value_t = 1.0)]
    pub drive_omega: f64,

    /// stark: field amplitude E₀ (V/m with --si-electron)
    #[arg(long, default_value_t = 1.0)]
    pub field: f64,

    /// stark: transition table JSON instead of the quantum oscillator
    #[arg(long)]
    pub transitions: Option<PathBuf>,

    /// audit: use the frequency-dependent damping Γ′ + (ω/ω₀)²Γ in the
    /// f-sum check (expected to fail)
    #[arg(long)]
    pub inject_jackson: bool,
}

/// Physical setting of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Units {
    /// m = ω₀ = 1 with the given τω₀.
    Natural { tau_omega0: f64 },
    /// Electron constants at resonance frequency ω₀ (rad/s).
    SiElectron { omega0: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub units: Units,
    pub gamma_prime: f64,
    pub grid: Grid,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub mode: TrajectoryMode,
    pub initial: (f64, f64, f64),
    pub drive: (f64, f64),
    pub field: f64,
    pub transitions: Option<PathBuf>,
    pub inject_jackson: bool,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) | RunError::Io(_) => 2,
            RunError::Numeric(_) => 3,
        }
    }
}

impl From<oscilkit_core::Error> for RunError {
    fn from(e: oscilkit_core::Error) -> Self {
        use oscilkit_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::Domain(_) => RunError::Usage(e.to_string()),
            E::Numeric { .. } | E::Range { .. } => RunError::Numeric(e.to_string()),
        }
    }
}

fn default_tau_omega0(command: Command) -> f64 {
    match command {
        Command::Fig2 => 2.0,
        Command::Fig3 => 1e-8,
        Command::Trajectory => 0.1,
        _ => 1e-2,
    }
}

fn default_grid(command: Command) -> Grid {
    let g = |min, max, n| Grid { min, max, n };
    match command {
        Command::Fig1 => g(0.01, 3.0, 300),
        Command::Fig2 => g(0.0, 3.0, 301),
        Command::Fig3 => g(0.8, 1.2, 401),
        Command::CrossSections => g(0.0, 3.0, 301),
        Command::SumRule => g(0.0, 10.0, 3),
        Command::Trajectory => g(0.0, 10.0, 201),
        Command::Stark => g(0.0, 3.0, 301),
        Command::Audit => g(0.0, 1.0, 2),
    }
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self, RunError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(v)
            } else {
                Err(RunError::Usage(format!("{name} must be positive, got {v}")))
            }
        };
        let units = match (cli.si_electron, cli.omega0) {
            (true, Some(w)) => Units::SiElectron {
                omega0: positive("--omega0", w)?,
            },
            _ => Units::Natural {
                tau_omega0: positive(
                    "--tau-omega0",
                    cli.tau_omega0.unwrap_or(default_tau_omega0(cli.command)),
                )?,
            },
        };
        if !(cli.gamma_prime.is_finite() && cli.gamma_prime >= 0.0) {
            return Err(RunError::Usage(format!(
                "--gamma-prime must be >= 0, got {}",
                cli.gamma_prime
            )));
        }
        let grid = cli.grid.unwrap_or(default_grid(cli.command));
        if cli.command == Command::Fig1 && grid.min <= 0.0 {
            return Err(RunError::Usage("fig1 grid must lie in τω₀ > 0".into()));
        }
        for (name, v) in [
            ("--x0", cli.x0),
            ("--v0", cli.v0),
            ("--b0", cli.b0),
            ("--drive-f0", cli.drive_f0),
            ("--field", cli.field),
        ] {
            if !v.is_finite() {
                return Err(RunError::Usage(format!("{name} must be finite")));
            }
        }
        if !(cli.drive_omega.is_finite() && cli.drive_omega >= 0.0) {
            return Err(RunError::Usage("--drive-omega must be >= 0".into()));
        }
        Ok(Self {
            command: cli.command,
            units,
            gamma_prime: cli.gamma_prime,
            grid,
            format: match cli.format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            },
            out: cli.out,
            mode: cli.mode,
            initial: (cli.x0, cli.v0, cli.b0),
            drive: (cli.drive_f0, cli.drive_omega),
            field: cli.field,
            transitions: cli.transitions,
            inject_jackson: cli.inject_jackson,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig, RunError> {
        let cli = Cli::try_parse_from(std::iter::once("oscilkit").chain(args.iter().copied()))
            .map_err(|e| RunError::Usage(e.to_string()))?;
        RunConfig::from_cli(cli)
    }

    #[test]
    fn grid_parsing() {
        let g: Grid = "0:3:4".parse().unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0, 3.0]);
        assert!("0:3:1".parse::<Grid>().is_err());
        assert!("3:0:5".parse::<Grid>().is_err());
        assert!("0:3".parse::<Grid>().is_err());
        assert!("a:3:5".parse::<Grid>().is_err());
    }

    #[test]
    fn defaults_per_command() {
        let c = parse(&["fig2"]).unwrap();
        assert_eq!(c.units, Units::Natural { tau_omega0: 2.0 });
        assert_eq!(c.grid.n, 301);
        let c = parse(&["fig3"]).unwrap();
        assert_eq!(c.units, Units::Natural { tau_omega0: 1e-8 });
    }

    #[test]
    fn usage_errors() {
        assert!(parse(&["fig9"]).is_err());
        assert!(parse(&["fig2", "--tau-omega0", "-1"]).is_err());
        assert!(parse(&["fig2", "--si-electron"]).is_err());
        assert!(parse(&[
            "fig2",
            "--si-electron",
            "--omega0",
            "1e15",
            "--tau-omega0",
            "1"
        ])
        .is_err());
        assert!(parse(&["fig1", "--grid", "0:1:5"]).is_err());
        assert!(parse(&["sum-rule", "--gamma-prime", "-1"]).is_err());
    }

    #[test]
    fn si_preset() {
        let c = parse(&["stark", "--si-electron", "--omega0", "1e15"]).unwrap();
        assert_eq!(c.units, Units::SiElectron { omega0: 1e15 });
    }
}
