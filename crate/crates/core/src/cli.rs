//! Command-line front end: `spectrum`, `drive`, `evolve`, `verify`.
//!
//! Settings are layered as defaults, then an optional flat `key = value`
//! file (`--config`), then flags. Tables are written as CSV with 17
//! significant digits or as JSON `{"columns": [...], "rows": [[...]]}`;
//! `verify` always writes a JSON report.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cluster::Geometry;
use crate::error::{Error, Result};
use crate::fastforward::{drive_sample, evolve_with, spectrum, EvolveOptions, Schedule};
use crate::model::ClusterModel;
use crate::regsolver::Unknown;
use crate::verify::{verify_geometry, VerifyOptions, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidConfig(format!("unknown format `{s}` (csv or json)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Eigenvalues of H0 along the sweep.
    Spectrum,
    /// v(t) times each regularization strength.
    Drive,
    /// Fidelity, norm and class probabilities of the driven state.
    Evolve,
    /// Pass/fail report over the internal consistency checks.
    Verify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Spectrum => "spectrum",
            Command::Drive => "drive",
            Command::Evolve => "evolve",
            Command::Verify => "verify",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub geometry: Geometry,
    pub b0: f64,
    pub r0: f64,
    pub vbar: f64,
    pub tff: f64,
    pub steps: usize,
    pub stride: usize,
    /// Output file, or directory with `--all-geometries`; stdout if unset.
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        let s = Schedule::default();
        let e = EvolveOptions::default();
        RunConfig {
            geometry: Geometry::Triangle,
            b0: s.b0,
            r0: s.r0,
            vbar: s.vbar,
            tff: s.tff,
            steps: e.steps,
            stride: e.stride,
            output_path: None,
            format: Format::Csv,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("bad value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn schedule(&self) -> Result<Schedule> {
        Schedule::new(self.b0, self.r0, self.vbar, self.tff)
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule()?;
        if self.steps == 0 || self.stride == 0 {
            return Err(Error::InvalidConfig("steps and stride must be positive".into()));
        }
        if !self.steps.is_multiple_of(self.stride) {
            return Err(Error::InvalidConfig(format!(
                "stride {} does not divide steps {}",
                self.stride, self.steps
            )));
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "geometry" => self.geometry = value.parse()?,
            "b0" => self.b0 = parse_value(key, value)?,
            "r0" => self.r0 = parse_value(key, value)?,
            "vbar" => self.vbar = parse_value(key, value)?,
            "tff" => self.tff = parse_value(key, value)?,
            "steps" => self.steps = parse_value(key, value)?,
            "stride" => self.stride = parse_value(key, value)?,
            "out" | "output_path" => self.output_path = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            _ => return Err(Error::InvalidConfig(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::InvalidConfig(format!("line {}: expected key = value", n + 1)))?;
            self.set(&k.trim().to_ascii_lowercase(), v.trim())?;
        }
        Ok(())
    }

    pub fn evolve_options(&self) -> EvolveOptions {
        EvolveOptions {
            steps: self.steps,
            stride: self.stride,
            driving: true,
        }
    }

    /// Record times t_k = k·stride·Tff/steps, ending exactly at Tff.
    pub fn sample_times(&self) -> Result<Vec<f64>> {
        let s = self.schedule()?;
        Ok((0..=self.steps / self.stride)
            .map(|k| s.time(k * self.stride, self.steps))
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Scientific notation with 17 significant digits, enough to round-trip.
pub fn format_number(x: f64) -> String {
    format!("{x:.16e}")
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.columns)?;
        for row in &self.rows {
            out.write_record(row.iter().map(|&x| format_number(x)))?;
        }
        out.flush()?;
        Ok(())
    }

    /// Non-finite entries become `null`.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|&x| json!(x)).collect()))
            .collect();
        json!({ "columns": self.columns, "rows": rows })
    }

    pub fn write<W: Write>(&self, format: Format, mut w: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(w),
            Format::Json => {
                serde_json::to_writer(&mut w, &self.to_json())?;
                writeln!(w)?;
                Ok(())
            }
        }
    }
}

/// Columns t, R, then every eigenvalue of H0 in ascending order.
pub fn cmd_spectrum(config: &RunConfig) -> Result<Table> {
    config.validate()?;
    let schedule = config.schedule()?;
    let model = ClusterModel::new(config.geometry);
    let mut columns = vec!["t".to_string(), "R".to_string()];
    columns.extend((1..=model.dim()).map(|k| format!("E{k}")));
    let rows = config
        .sample_times()?
        .into_iter()
        .map(|t| {
            let (r, e) = spectrum(&model, &schedule, t)?;
            let mut row = vec![t, r];
            row.extend(e);
            Ok(row)
        })
        .collect::<Result<_>>()?;
    Ok(Table { columns, rows })
}

/// Columns t, v, v·W̃ᵢ (and v·Q̃ for N = 4), then `degenerate`: a row where
/// the strengths could not be computed is kept with NaN values and 1 there.
pub fn cmd_drive(config: &RunConfig) -> Result<Table> {
    config.validate()?;
    let schedule = config.schedule()?;
    let model = ClusterModel::new(config.geometry);
    let unknowns = crate::regsolver::unknowns(&model.geometry, true);
    let mut columns = vec!["t".to_string(), "v".to_string()];
    columns.extend(unknowns.iter().map(|u| format!("v{u}")));
    columns.push("degenerate".into());
    let mut rows = Vec::new();
    for t in config.sample_times()? {
        let row = match drive_sample(&model, &schedule, t) {
            Ok(s) => {
                let mut row = vec![t, s.v];
                row.extend(unknowns.iter().map(|u| match *u {
                    Unknown::W(k) => s.v * s.weights.w[k],
                    Unknown::Q => s.v * s.weights.q,
                }));
                row.push(0.0);
                row
            }
            Err(e) if e.is_numeric() => {
                let mut row = vec![t, schedule.velocity(t)?];
                row.extend(unknowns.iter().map(|_| f64::NAN));
                row.push(1.0);
                row
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// Columns t, fidelity, norm, then |C_k|² for each component-class
/// representative k (named `p{k}`).
pub fn cmd_evolve(config: &RunConfig) -> Result<Table> {
    config.validate()?;
    let schedule = config.schedule()?;
    let model = ClusterModel::new(config.geometry);
    let reps = model.geometry.class_representatives();
    let mut columns = vec!["t".to_string(), "fidelity".to_string(), "norm".to_string()];
    columns.extend(reps.iter().map(|k| format!("p{k}")));
    let records = evolve_with(&model, &schedule, &config.evolve_options())?;
    let rows = records
        .iter()
        .map(|r| {
            let mut row = vec![r.t, r.fidelity, r.norm];
            row.extend(r.class_probabilities(&model.geometry));
            row
        })
        .collect();
    Ok(Table { columns, rows })
}

pub fn cmd_verify(config: &RunConfig, opts: &VerifyOptions) -> Result<VerifyReport> {
    config.validate()?;
    let opts = VerifyOptions {
        evolution: opts.evolution.map(|_| config.evolve_options()),
        ..opts.clone()
    };
    Ok(verify_geometry(config.geometry, &config.schedule()?, &opts))
}

/// Runs one command and writes its output; returns whether `verify` passed
/// (always true for the other commands).
pub fn execute<W: Write>(command: Command, config: &RunConfig, opts: &VerifyOptions, out: W) -> Result<bool> {
    match command {
        Command::Spectrum => cmd_spectrum(config)?.write(config.format, out).map(|_| true),
        Command::Drive => cmd_drive(config)?.write(config.format, out).map(|_| true),
        Command::Evolve => cmd_evolve(config)?.write(config.format, out).map(|_| true),
        Command::Verify => {
            let report = cmd_verify(config, opts)?;
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
            Ok(report.pass)
        }
    }
}

fn execute_to_path(command: Command, config: &RunConfig, opts: &VerifyOptions, path: &Path) -> Result<bool> {
    let mut buf = Vec::new();
    let pass = execute(command, config, opts, &mut buf)?;
    fs::write(path, buf)?;
    Ok(pass)
}

/// File written for `geometry` under `--all-geometries`.
pub fn geometry_file(dir: &Path, command: Command, geometry: Geometry, format: Format) -> PathBuf {
    let ext = if command == Command::Verify {
        "json"
    } else {
        format.extension()
    };
    dir.join(format!("{command}_{}.{ext}", geometry.name()))
}

/// Runs `command` for every geometry on its own thread, one file each in
/// `dir`. Results are in [`Geometry::ALL`] order.
pub fn execute_all(
    command: Command,
    config: &RunConfig,
    opts: &VerifyOptions,
    dir: &Path,
) -> Vec<(Geometry, Result<bool>)> {
    if let Err(e) = fs::create_dir_all(dir) {
        let msg = e.to_string();
        return Geometry::ALL
            .iter()
            .map(|&g| (g, Err(Error::Io(io::Error::new(e.kind(), msg.clone())))))
            .collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = Geometry::ALL
            .iter()
            .map(|&g| {
                let cfg = RunConfig {
                    geometry: g,
                    ..config.clone()
                };
                let path = geometry_file(dir, command, g, config.format);
                (g, scope.spawn(move || execute_to_path(command, &cfg, opts, &path)))
            })
            .collect();
        handles
            .into_iter()
            .map(|(g, h)| (g, h.join().expect("worker thread panicked")))
            .collect()
    })
}

#[derive(Clone, Debug, Default, Args)]
pub struct RunArgs {
    /// Flat key = value file applied before the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub geometry: Option<Geometry>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub r0: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub vbar: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tff: Option<f64>,
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    #[arg(long, global = true)]
    pub stride: Option<usize>,
    /// Output file (directory with --all-geometries); stdout if omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Run every geometry in parallel, one file each under --out.
    #[arg(long, global = true)]
    pub all_geometries: bool,
}

#[derive(Clone, Debug, Parser)]
#[command(
    name = "ffspin",
    version,
    about = "Fast-forward driving of small transverse-Ising clusters"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub args: RunArgs,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = RunConfig::default();
        if let Some(path) = &self.config {
            c.apply_file_text(&fs::read_to_string(path)?)?;
        }
        macro_rules! over {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { c.$f = v; } )* };
        }
        over!(geometry, b0, r0, vbar, tff, steps, stride, format);
        if let Some(out) = &self.out {
            c.output_path = Some(out.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

impl clap::ValueEnum for Geometry {
    fn value_variants<'a>() -> &'a [Self] {
        &Geometry::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

/// Parses `args` (including the program name), runs, and returns the exit
/// status: 0 success, 1 bad input or failed verification, 2 numeric failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let config = match cli.args.resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let opts = VerifyOptions::default();

    if cli.args.all_geometries {
        let Some(dir) = &config.output_path else {
            eprintln!("error: --all-geometries needs --out <directory>");
            return 1;
        };
        let mut code = 0;
        for (g, res) in execute_all(cli.command, &config, &opts, dir) {
            match res {
                Ok(true) => {}
                Ok(false) => {
                    eprintln!("{g}: verification failed");
                    code = code.max(1);
                }
                Err(e) => {
                    eprintln!("{g}: error: {e}");
                    code = code.max(e.exit_code());
                }
            }
        }
        return code;
    }

    let res = match &config.output_path {
        Some(path) => execute_to_path(cli.command, &config, &opts, path),
        None => execute(cli.command, &config, &opts, io::stdout().lock()),
    };
    match res {
        Ok(true) => 0,
        Ok(false) => {
            eprintln!("verification failed");
            1
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
