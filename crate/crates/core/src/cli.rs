//! Command-line front end.
//!
//! Every subcommand writes CSV to `--out <path>` or, by default or with
//! `--out -`, to standard output. Settings may also come from a flat
//! `key=value` file given with `--config`; flags win over file values.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 domain error (resonant
//! scattering parameters, non-positive temperature or tunneling), 4 no
//! crossing found, 1 anything else (I/O).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::entanglement::negativity;
use crate::error::Error;
use crate::params::{map_couplings, to_model_params, MicroscopicParams, ModelParams};
use crate::spectrum::full_spectrum;
use crate::sweep::{emit_levels, report_crossings, run_sweep, Output, Sci, SweepSpec, SweepVariable};
use crate::thermo::ThermoPoint;

pub const EXIT_INVALID_ARGS: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_NO_CROSSING: i32 = 4;

/// Default `tau` window and grid size for sweeps.
pub const DEFAULT_START: f64 = 0.0;
pub const DEFAULT_STOP: f64 = 6.0;
pub const DEFAULT_STEPS: usize = 600;

#[derive(Debug, Parser)]
#[command(name = "spin1-dimer", version, about = "Exact diagonalization of two spin-1 atoms in a double well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Nine energy levels at one point, lowest first.
    Spectrum,
    /// All nine levels along a tau grid.
    LevelsSweep,
    /// Negativity of the thermal state at one point.
    Negativity,
    /// Partition function, internal energy and heat capacity at one point.
    HeatCapacity,
    /// Sweep one parameter and tabulate the requested outputs.
    Sweep,
    /// Ground-state level crossings along tau.
    Crossings,
    /// Map lattice parameters (t, U0, U2) to effective couplings.
    MapParams,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Temperature in units of t (k_B = 1).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub temp: Option<f64>,
    /// Swept parameter: tau, gamma, omega or temperature.
    #[arg(long, global = true)]
    pub var: Option<String>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub start: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub stop: Option<f64>,
    /// Number of grid points, endpoints included.
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Comma-separated subset of negativity, heat_capacity, internal_energy,
    /// partition_function, spectrum, ground_label.
    #[arg(long, global = true)]
    pub outputs: Option<String>,
    /// key=value settings file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output path, `-` for standard output.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Tunneling amplitude (map-params).
    #[arg(long = "t", global = true, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Contact scattering amplitude (map-params).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub u0: Option<f64>,
    /// Spin-dependent scattering amplitude (map-params).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub u2: Option<f64>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_INVALID_ARGS,
            CliError::Model(e) if e.is_domain_error() => EXIT_DOMAIN,
            CliError::Model(Error::NoCrossing { .. }) => EXIT_NO_CROSSING,
            CliError::Model(Error::InvalidRange(_) | Error::InvalidLabel { .. }) => EXIT_INVALID_ARGS,
            CliError::Model(_) | CliError::Io { .. } => 1,
        }
    }
}

const CONFIG_KEYS: [&str; 13] =
    ["tau", "gamma", "omega", "temp", "var", "start", "stop", "steps", "outputs", "out", "t", "u0", "u2"];

/// Parses `key=value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value, got `{raw}`", n + 1)))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{key}`", n + 1)));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

impl Options {
    /// Fills unset fields from `config`.
    pub fn merged_with(mut self, config: &BTreeMap<String, String>) -> Result<Self, CliError> {
        fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
            value.parse().map_err(|_| CliError::Usage(format!("config: invalid value `{value}` for `{key}`")))
        }
        for (key, value) in config {
            let v = value.as_str();
            match key.as_str() {
                "tau" => self.tau = self.tau.or(Some(num(key, v)?)),
                "gamma" => self.gamma = self.gamma.or(Some(num(key, v)?)),
                "omega" => self.omega = self.omega.or(Some(num(key, v)?)),
                "temp" => self.temp = self.temp.or(Some(num(key, v)?)),
                "start" => self.start = self.start.or(Some(num(key, v)?)),
                "stop" => self.stop = self.stop.or(Some(num(key, v)?)),
                "steps" => self.steps = self.steps.or(Some(num(key, v)?)),
                "t" => self.t = self.t.or(Some(num(key, v)?)),
                "u0" => self.u0 = self.u0.or(Some(num(key, v)?)),
                "u2" => self.u2 = self.u2.or(Some(num(key, v)?)),
                "var" => self.var = self.var.or_else(|| Some(value.clone())),
                "outputs" => self.outputs = self.outputs.or_else(|| Some(value.clone())),
                "out" => self.out = self.out.or_else(|| Some(value.clone())),
                _ => unreachable!("keys are validated by parse_config"),
            }
        }
        Ok(self)
    }

    fn couplings(&self) -> ModelParams {
        ModelParams::new(
            self.tau.unwrap_or(0.0),
            self.gamma.unwrap_or(0.0),
            self.omega.unwrap_or(0.0),
            self.temp.unwrap_or(f64::NAN),
        )
    }

    fn thermal_point(&self) -> Result<ModelParams, CliError> {
        if self.temp.is_none() {
            return Err(CliError::Usage("--temp is required".into()));
        }
        Ok(self.couplings())
    }

    fn range(&self) -> (f64, f64) {
        (self.start.unwrap_or(DEFAULT_START), self.stop.unwrap_or(DEFAULT_STOP))
    }

    fn steps(&self) -> usize {
        self.steps.unwrap_or(DEFAULT_STEPS)
    }
}

fn row(cells: &[f64]) -> String {
    cells.iter().map(|x| Sci(*x).to_string()).collect::<Vec<_>>().join(",")
}

/// Runs `cli`, resolving `--config` and `--out`.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut options = cli.options.clone();
    if let Some(path) = &options.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        options = options.merged_with(&parse_config(&text)?)?;
    }

    let mut buf = Vec::new();
    execute(cli.command, &options, &mut buf)?;

    let io_err = |context: String| move |source| CliError::Io { context, source };
    match options.out.as_deref() {
        None | Some("-") => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(&buf).map_err(io_err("writing to stdout".into()))?;
            lock.flush().map_err(io_err("writing to stdout".into()))
        }
        Some(path) => {
            let file = File::create(path).map_err(io_err(format!("creating {path}")))?;
            let mut w = BufWriter::new(file);
            w.write_all(&buf).map_err(io_err(format!("writing {path}")))?;
            w.flush().map_err(io_err(format!("writing {path}")))
        }
    }
}

/// Runs one subcommand against already-resolved options.
pub fn execute<W: Write>(command: Command, o: &Options, mut w: W) -> Result<(), CliError> {
    let io_err = |source| CliError::Io { context: "writing output".into(), source };
    match command {
        Command::Spectrum => {
            let s = full_spectrum(&o.couplings());
            writeln!(w, "j,m,energy").map_err(io_err)?;
            for l in s.levels() {
                writeln!(w, "{},{},{}", l.label.j(), l.label.m(), Sci(l.energy)).map_err(io_err)?;
            }
        }
        Command::LevelsSweep => {
            let p = o.couplings();
            let table = emit_levels(p.gamma, p.omega, o.range(), o.steps())?;
            table.write_csv(&mut w).map_err(io_err)?;
        }
        Command::Negativity => {
            let p = o.thermal_point()?;
            let n = negativity(&p)?;
            let lambdas: Vec<String> = (1..=9).map(|k| format!("lambda_{k}")).collect();
            writeln!(w, "tau,gamma,omega,temperature,negativity,phase,{}", lambdas.join(",")).map_err(io_err)?;
            writeln!(
                w,
                "{},{},{}",
                row(&[p.tau, p.gamma, p.omega, p.temperature, n.negativity]),
                n.phase(),
                row(&n.eigenvalues)
            )
            .map_err(io_err)?;
        }
        Command::HeatCapacity => {
            let p = o.thermal_point()?;
            let tp = ThermoPoint::evaluate(&p)?;
            writeln!(w, "tau,gamma,omega,temperature,partition_function,internal_energy,heat_capacity")
                .map_err(io_err)?;
            writeln!(w, "{}", row(&[p.tau, p.gamma, p.omega, p.temperature, tp.z, tp.u, tp.c_v])).map_err(io_err)?;
        }
        Command::Sweep => {
            let variable: SweepVariable = o.var.as_deref().unwrap_or("tau").parse().map_err(usage)?;
            let outputs = Output::parse_list(o.outputs.as_deref().unwrap_or("negativity")).map_err(usage)?;
            let needs_temp = outputs.iter().any(|x| x.is_thermal()) && variable != SweepVariable::Temperature;
            if needs_temp && o.temp.is_none() {
                return Err(CliError::Usage("--temp is required for thermal outputs".into()));
            }
            let (start, stop) = o.range();
            let spec = SweepSpec { variable, start, stop, steps: o.steps(), fixed: o.couplings(), outputs };
            run_sweep(&spec)?.write_csv(&mut w).map_err(io_err)?;
        }
        Command::Crossings => {
            let p = o.couplings();
            report_crossings(p.gamma, p.omega, o.range())?.write_csv(&mut w).map_err(io_err)?;
        }
        Command::MapParams => {
            let (Some(t), Some(u0), Some(u2)) = (o.t, o.u0, o.u2) else {
                return Err(CliError::Usage("map-params needs --t, --u0 and --u2".into()));
            };
            let m = MicroscopicParams { t, u0, u2 };
            let k = map_couplings(&m)?;
            let omega = o.omega.unwrap_or(0.0);
            let p = to_model_params(&m, omega, o.temp.unwrap_or(f64::NAN))?;
            let mut header = "k0,k1,k2,tau,gamma,omega,r".to_string();
            let mut cells = vec![k.k0, k.k1, k.k2, p.tau, p.gamma, p.omega, p.r()];
            if let Some(temp) = o.temp {
                header.push_str(",temperature");
                cells.push(temp);
            }
            writeln!(w, "{header}").map_err(io_err)?;
            writeln!(w, "{}", row(&cells)).map_err(io_err)?;
        }
    }
    Ok(())
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}
