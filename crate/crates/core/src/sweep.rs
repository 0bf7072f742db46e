//! Parameter sweeps and their CSV form.
//!
//! Grid points are evaluated independently on the rayon pool and collected in
//! grid order, so output does not depend on the number of worker threads.
//! Floats are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rayon::prelude::*;

use crate::entanglement::{negativity, Phase};
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectrum::{eigenvalue, find_crossings, full_spectrum, CoupledLabel, CrossingReport, Spectrum};
use crate::thermo::ThermalEnsemble;

/// `f64` formatted with 17 significant digits.
pub struct Sci(pub f64);

impl fmt::Display for Sci {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.16e}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    Tau,
    Gamma,
    Omega,
    Temperature,
}

impl SweepVariable {
    fn apply(self, p: ModelParams, x: f64) -> ModelParams {
        match self {
            SweepVariable::Tau => p.with_tau(x),
            SweepVariable::Gamma => p.with_gamma(x),
            SweepVariable::Omega => p.with_omega(x),
            SweepVariable::Temperature => p.with_temperature(x),
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(SweepVariable::Tau),
            "gamma" => Ok(SweepVariable::Gamma),
            "omega" => Ok(SweepVariable::Omega),
            "temperature" | "temp" => Ok(SweepVariable::Temperature),
            other => Err(Error::InvalidRange(format!("unknown sweep variable `{other}`"))),
        }
    }
}

/// Quantities a sweep can emit, in their CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Negativity,
    HeatCapacity,
    InternalEnergy,
    PartitionFunction,
    Spectrum,
    GroundLabel,
}

impl Output {
    pub const ALL: [Output; 6] = [
        Output::Negativity,
        Output::HeatCapacity,
        Output::InternalEnergy,
        Output::PartitionFunction,
        Output::Spectrum,
        Output::GroundLabel,
    ];

    pub fn is_thermal(self) -> bool {
        !matches!(self, Output::Spectrum | Output::GroundLabel)
    }

    pub fn name(self) -> &'static str {
        match self {
            Output::Negativity => "negativity",
            Output::HeatCapacity => "heat_capacity",
            Output::InternalEnergy => "internal_energy",
            Output::PartitionFunction => "partition_function",
            Output::Spectrum => "spectrum",
            Output::GroundLabel => "ground_label",
        }
    }

    /// Comma-separated list, e.g. `negativity,heat_capacity`.
    pub fn parse_list(s: &str) -> Result<Vec<Output>> {
        let mut outputs =
            s.split(',').map(str::trim).filter(|t| !t.is_empty()).map(str::parse).collect::<Result<Vec<Output>>>()?;
        outputs.sort();
        outputs.dedup();
        Ok(outputs)
    }
}

impl FromStr for Output {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Output::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidRange(format!("unknown output `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    /// Values of the three parameters that are not swept; the swept field is
    /// overwritten at each grid point.
    pub fixed: ModelParams,
    pub outputs: Vec<Output>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::InvalidRange(format!("steps must be at least 2, got {}", self.steps)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidRange(format!("range [{}, {}] must be finite", self.start, self.stop)));
        }
        // start == stop is accepted: every row repeats the same point
        if self.start > self.stop {
            return Err(Error::InvalidRange(format!("start {} must be below stop {}", self.start, self.stop)));
        }
        if self.outputs.iter().any(|o| o.is_thermal()) {
            if self.variable == SweepVariable::Temperature {
                if self.start <= 0.0 {
                    return Err(Error::NonPositiveTemperature(self.start));
                }
            } else {
                self.fixed.beta()?;
            }
        }
        Ok(())
    }

    /// Grid values, endpoints included exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|k| if k == last { self.stop } else { self.start + (self.stop - self.start) * k as f64 / last as f64 })
            .collect()
    }

    pub fn points(&self) -> Vec<ModelParams> {
        self.grid().into_iter().map(|x| self.variable.apply(self.fixed, x)).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub params: ModelParams,
    pub negativity: Option<f64>,
    pub phase: Option<Phase>,
    pub heat_capacity: Option<f64>,
    pub internal_energy: Option<f64>,
    pub partition_function: Option<f64>,
    pub spectrum: Option<Spectrum>,
    pub ground: Option<CoupledLabel>,
    /// `E1 - E0`, reported with the ground label.
    pub gap: Option<f64>,
}

impl SweepRow {
    fn evaluate(p: ModelParams, outputs: &[Output], index: usize) -> Result<Self> {
        let mut row = SweepRow {
            params: p,
            negativity: None,
            phase: None,
            heat_capacity: None,
            internal_energy: None,
            partition_function: None,
            spectrum: None,
            ground: None,
            gap: None,
        };
        let ensemble = if outputs.iter().any(|o| o.is_thermal()) { Some(ThermalEnsemble::new(&p)?) } else { None };
        for &o in outputs {
            match o {
                Output::Negativity => {
                    let n = negativity(&p)?;
                    row.negativity = Some(finite(n.negativity, "negativity", index)?);
                    row.phase = Some(n.phase());
                }
                Output::HeatCapacity => {
                    let c = ensemble.as_ref().map(|e| e.heat_capacity()).unwrap_or(f64::NAN);
                    row.heat_capacity = Some(finite(c, "heat_capacity", index)?);
                }
                Output::InternalEnergy => {
                    let u = ensemble.as_ref().map(|e| e.mean_energy()).unwrap_or(f64::NAN);
                    row.internal_energy = Some(finite(u, "internal_energy", index)?);
                }
                Output::PartitionFunction => {
                    let z = crate::thermo::partition_function(&p)?;
                    row.partition_function = Some(finite(z, "partition_function", index)?);
                }
                Output::Spectrum => {
                    let s = full_spectrum(&p);
                    for l in s.levels() {
                        finite(l.energy, "spectrum", index)?;
                    }
                    row.spectrum = Some(s);
                }
                Output::GroundLabel => {
                    let s = full_spectrum(&p);
                    row.ground = Some(s.ground().label);
                    row.gap = Some(finite(s.gap(), "gap", index)?);
                }
            }
        }
        Ok(row)
    }
}

fn finite(x: f64, quantity: &'static str, index: usize) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite { quantity, index })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub outputs: Vec<Output>,
    pub rows: Vec<SweepRow>,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let mut outputs = spec.outputs.clone();
    outputs.sort();
    outputs.dedup();
    let rows = spec
        .points()
        .into_par_iter()
        .enumerate()
        .map(|(i, p)| SweepRow::evaluate(p, &outputs, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { outputs, rows })
}

impl SweepResult {
    pub fn header(&self) -> Vec<String> {
        let mut cols: Vec<String> = ["tau", "gamma", "omega", "temperature"].map(String::from).to_vec();
        for o in &self.outputs {
            match o {
                Output::Negativity => cols.extend(["negativity".into(), "phase".into()]),
                Output::Spectrum => cols.extend(CoupledLabel::ALL.iter().map(|l| format!("E_{}", l.tag()))),
                Output::GroundLabel => cols.extend(["ground_j".into(), "ground_m".into(), "gap".into()]),
                other => cols.push(other.name().into()),
            }
        }
        cols
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.header().join(","))?;
        for row in &self.rows {
            let p = row.params;
            let mut cells = vec![
                Sci(p.tau).to_string(),
                Sci(p.gamma).to_string(),
                Sci(p.omega).to_string(),
                Sci(p.temperature).to_string(),
            ];
            for o in &self.outputs {
                match o {
                    Output::Negativity => {
                        cells.push(Sci(row.negativity.unwrap_or(f64::NAN)).to_string());
                        cells.push(row.phase.map(|ph| ph.to_string()).unwrap_or_default());
                    }
                    Output::HeatCapacity => cells.push(Sci(row.heat_capacity.unwrap_or(f64::NAN)).to_string()),
                    Output::InternalEnergy => cells.push(Sci(row.internal_energy.unwrap_or(f64::NAN)).to_string()),
                    Output::PartitionFunction => {
                        cells.push(Sci(row.partition_function.unwrap_or(f64::NAN)).to_string())
                    }
                    Output::Spectrum => {
                        let s = row.spectrum.as_ref().expect("spectrum requested");
                        cells.extend(CoupledLabel::ALL.iter().map(|&l| Sci(s.energy_of(l)).to_string()));
                    }
                    Output::GroundLabel => {
                        let g = row.ground.expect("ground label requested");
                        cells.push(g.j().to_string());
                        cells.push(g.m().to_string());
                        cells.push(Sci(row.gap.unwrap_or(f64::NAN)).to_string());
                    }
                }
            }
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV is ASCII")
    }
}

/// Crossing report with CSV rendering; points are labelled A, B, C, ...
#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSummary {
    pub report: CrossingReport,
}

pub fn report_crossings(gamma: f64, omega: f64, tau_range: (f64, f64)) -> Result<CrossingSummary> {
    Ok(CrossingSummary { report: find_crossings(gamma, omega, tau_range)? })
}

impl CrossingSummary {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let r = &self.report;
        let sequence: Vec<String> = r.sequence.iter().map(|l| l.tag()).collect();
        writeln!(w, "# gamma={} omega={} tau=[{}, {}]", r.gamma, r.omega, r.tau_range.0, r.tau_range.1)?;
        writeln!(w, "# ground sequence: {}", sequence.join(" -> "))?;
        writeln!(w, "point,tau,energy,from,to,residual_gap")?;
        for (k, c) in r.crossings.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                point_name(k),
                Sci(c.tau),
                Sci(c.energy),
                c.from.tag(),
                c.to.tag(),
                Sci(c.residual_gap)
            )?;
        }
        Ok(())
    }
}

fn point_name(k: usize) -> String {
    if k < 26 {
        char::from(b'A' + k as u8).to_string()
    } else {
        format!("P{}", k + 1)
    }
}

/// All nine `E(j, m)` along a `tau` grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelsTable {
    pub taus: Vec<f64>,
    /// `energies[i][k]` is the level `CoupledLabel::ALL[k]` at `taus[i]`.
    pub energies: Vec<[f64; 9]>,
}

pub fn emit_levels(gamma: f64, omega: f64, tau_range: (f64, f64), steps: usize) -> Result<LevelsTable> {
    let spec = SweepSpec {
        variable: SweepVariable::Tau,
        start: tau_range.0,
        stop: tau_range.1,
        steps,
        fixed: ModelParams::new(0.0, gamma, omega, f64::INFINITY),
        outputs: vec![],
    };
    spec.validate()?;
    if spec.start >= spec.stop {
        return Err(Error::InvalidRange(format!("start {} must be below stop {}", spec.start, spec.stop)));
    }
    let taus = spec.grid();
    let energies = taus
        .iter()
        .map(|&tau| {
            let p = ModelParams::new(tau, gamma, omega, f64::INFINITY);
            CoupledLabel::ALL.map(|l| eigenvalue(&p, l))
        })
        .collect();
    Ok(LevelsTable { taus, energies })
}

impl LevelsTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header = vec!["tau".to_string()];
        header.extend(CoupledLabel::ALL.iter().map(|l| format!("E_{}", l.tag())));
        writeln!(w, "{}", header.join(","))?;
        for (tau, row) in self.taus.iter().zip(&self.energies) {
            let mut cells = vec![Sci(*tau).to_string()];
            cells.extend(row.iter().map(|e| Sci(*e).to_string()));
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}
