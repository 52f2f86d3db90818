//! Run configuration, sweeps, CSV output and the command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dense::{count_degeneracy_dense, spectrum_of};
use crate::error::{Error, Result};
use crate::hamiltonian::{
    build_kitaev_hubbard, build_tfi, build_triangular_tfi, parse_geometry, parse_hamiltonian_file, triangle_edges,
    HamiltonianSpec,
};
use crate::ite::{default_dt, ite_evolve};
use crate::lanczos::{count_degeneracy_lanczos, LanczosConfig};
use crate::mps::{count_degeneracy_mps, PowerConfig};
use crate::readout::DegeneracyResult;
use crate::super_map::{degeneracy_from_overlap, lift, vacuum_state, LiftVariant, StateVector};
use crate::verify;

/// CSV header of every result table.
pub const CSV_HEADER: &str = "model,n,param_name,param_value,method,D_raw,D_rounded,residual,energy,delta_e,steps,converged,seed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    Tfi,
    #[value(name = "kitaev_hubbard")]
    KitaevHubbard,
    Triangular,
    File,
}

impl Model {
    pub fn name(self) -> &'static str {
        match self {
            Model::Tfi => "tfi",
            Model::KitaevHubbard => "kitaev_hubbard",
            Model::Triangular => "triangular",
            Model::File => "file",
        }
    }

    fn params(self) -> &'static [&'static str] {
        match self {
            Model::Tfi => &["n", "bx", "bz"],
            Model::KitaevHubbard => &["n", "h", "u"],
            Model::Triangular => &["bx"],
            Model::File => &[],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Method {
    #[serde(rename = "dense")]
    Dense,
    #[serde(rename = "lanczos")]
    Lanczos,
    #[serde(rename = "power-mps")]
    #[value(name = "power-mps")]
    PowerMps,
    #[serde(rename = "ite")]
    Ite,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Dense => "dense",
            Method::Lanczos => "lanczos",
            Method::PowerMps => "power-mps",
            Method::Ite => "ite",
        }
    }
}

/// `param:start:stop:count`, optionally with a trailing `:log`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub log: bool,
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::Config(format!("sweep {text:?} is not param:start:stop:count[:log]"));
        if parts.len() < 4 || parts.len() > 5 {
            return Err(bad());
        }
        let log = match parts.get(4) {
            None => false,
            Some(&"log") => true,
            Some(_) => return Err(bad()),
        };
        Ok(SweepSpec {
            param: parts[0].to_string(),
            start: parts[1].parse().map_err(|_| bad())?,
            stop: parts[2].parse().map_err(|_| bad())?,
            count: parts[3].parse().map_err(|_| bad())?,
            log,
        })
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Config("sweep count must be positive".into()));
        }
        if self.log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(Error::Config("log sweep needs positive bounds".into()));
        }
        let frac = |i: usize| if self.count == 1 { 0.0 } else { i as f64 / (self.count - 1) as f64 };
        Ok((0..self.count)
            .map(|i| {
                if self.log {
                    (self.start.ln() + frac(i) * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + frac(i) * (self.stop - self.start)
                }
            })
            .collect())
    }
}

/// Settings of the imaginary-time backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IteConfig {
    /// Step; defaults to `1e-3 / ‖H‖`.
    pub dt: Option<f64>,
    pub tau_max: f64,
    /// Relative energy change over a block of 100 steps counted as stationary.
    pub conv_tol: f64,
}

impl Default for IteConfig {
    fn default() -> Self {
        IteConfig { dt: None, tau_max: 50.0, conv_tol: 1e-12 }
    }
}

/// One run or sweep, as read from a TOML file and overridden by flags.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    pub n: usize,
    pub bx: f64,
    pub bz: f64,
    pub h: f64,
    pub u: f64,
    /// Edge list for the triangular model; the single triangle if absent.
    pub geometry: Option<PathBuf>,
    /// Term list for the `file` model.
    pub hamiltonian: Option<PathBuf>,
    pub method: Method,
    /// Dense degeneracy tolerance, also the Lanczos resolution window.
    pub tol: Option<f64>,
    pub lanczos: LanczosConfig,
    pub power: PowerConfig,
    pub ite: IteConfig,
    pub sweep: Option<SweepSpec>,
    pub jobs: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: Model::Tfi,
            n: 8,
            bx: 0.25,
            bz: 0.0,
            h: 0.5,
            u: 0.0,
            geometry: None,
            hamiltonian: None,
            method: Method::Lanczos,
            tol: None,
            lanczos: LanczosConfig::default(),
            power: PowerConfig::default(),
            ite: IteConfig::default(),
            sweep: None,
            jobs: 1,
            seed: 0,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.lanczos.validate()?;
        self.power.validate()?;
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(Error::Config(format!("tol {tol} must be positive")));
            }
        }
        if let Some(dt) = self.ite.dt {
            if !(dt > 0.0) {
                return Err(Error::Config(format!("dt {dt} must be positive")));
            }
        }
        if self.model == Model::File && self.hamiltonian.is_none() {
            return Err(Error::Config("model `file` needs a hamiltonian path".into()));
        }
        if let Some(s) = &self.sweep {
            if !self.model.params().contains(&s.param.as_str()) {
                return Err(Error::Config(format!(
                    "sweep parameter {:?} does not exist on model {}",
                    s.param,
                    self.model.name()
                )));
            }
            s.values()?;
        }
        if self.jobs == 0 {
            return Err(Error::Config("jobs must be at least 1".into()));
        }
        Ok(())
    }

    /// Copy with one model parameter replaced.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        match name {
            "n" => c.n = value.round() as usize,
            "bx" => c.bx = value,
            "bz" => c.bz = value,
            "h" => c.h = value,
            "u" => c.u = value,
            _ => return Err(Error::Config(format!("unknown parameter {name:?}"))),
        }
        Ok(c)
    }

    pub fn build_model(&self) -> Result<HamiltonianSpec> {
        match self.model {
            Model::Tfi => build_tfi(self.n, self.bx, self.bz),
            Model::KitaevHubbard => build_kitaev_hubbard(self.n, self.h, self.u),
            Model::Triangular => {
                let edges = match &self.geometry {
                    Some(p) => parse_geometry(&read(p)?)?,
                    None => triangle_edges(),
                };
                build_triangular_tfi(&edges, self.bx)
            }
            Model::File => {
                let path = self.hamiltonian.as_ref().ok_or_else(|| Error::Config("missing hamiltonian path".into()))?;
                let parsed = parse_hamiltonian_file(&read(path)?)?;
                if !parsed.hermitian {
                    return Err(Error::InvalidHamiltonian("Hamiltonian file is not Hermitian".into()));
                }
                Ok(parsed.spec)
            }
        }
    }

    /// `(name, value)` of the parameter a single run is labelled with.
    fn label(&self) -> (&'static str, f64) {
        match self.model {
            Model::Tfi | Model::Triangular => ("bx", self.bx),
            Model::KitaevHubbard => ("h", self.h),
            Model::File => ("none", 0.0),
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Lifted imaginary-time evolution from the vacuum in blocks of 100 steps,
/// stopping once the energy is stationary or `tau_max` is reached.
pub fn count_degeneracy_ite(h: &HamiltonianSpec, cfg: &IteConfig) -> Result<DegeneracyResult> {
    let lifted = lift(h, LiftVariant::Averaged)?;
    let dt = match cfg.dt {
        Some(dt) => dt,
        None => default_dt(&lifted)?,
    };
    let n = h.n_sites();
    let total = (cfg.tau_max / dt).ceil() as usize;
    let block = 100;
    let energy_of = |v: &StateVector| -> Result<(f64, f64)> {
        let hv = crate::kernel::apply_hamiltonian(&lifted, v)?;
        let e = v.inner(&hv).re;
        let spread: f64 = hv.amps().iter().zip(v.amps()).map(|(a, b)| (a - b * e).norm_sqr()).sum();
        Ok((e, spread.sqrt()))
    };
    let mut v = vacuum_state(n)?;
    let mut energy = energy_of(&v)?.0;
    let (mut steps, mut converged) = (0, false);
    while steps < total {
        let k = block.min(total - steps);
        v = ite_evolve(&lifted, &v, dt, k)?;
        steps += k;
        let e = energy_of(&v)?.0;
        let stationary = (e - energy).abs() <= cfg.conv_tol * e.abs().max(1.0);
        energy = e;
        if stationary {
            converged = true;
            break;
        }
    }
    let (energy, delta_e) = energy_of(&v)?;
    Ok(DegeneracyResult::new(degeneracy_from_overlap(v.amps()[0], n), energy, delta_e, steps, converged))
}

/// Runs the configured backend at the configured point.
pub fn run_point(cfg: &RunConfig) -> Result<DegeneracyResult> {
    let h = cfg.build_model()?;
    match cfg.method {
        Method::Dense => count_degeneracy_dense(&h, cfg.tol),
        Method::Lanczos => {
            let mut lc = cfg.lanczos.clone();
            if cfg.tol.is_some() {
                lc.resolution = cfg.tol;
            }
            count_degeneracy_lanczos(&h, &lc)
        }
        Method::PowerMps => count_degeneracy_mps(&h, &cfg.power),
        Method::Ite => count_degeneracy_ite(&h, &cfg.ite),
    }
}

/// One CSV line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CsvRow {
    pub model: String,
    pub n: usize,
    pub param_name: String,
    pub param_value: f64,
    pub method: String,
    #[serde(rename = "D_raw")]
    pub d_raw: f64,
    #[serde(rename = "D_rounded")]
    pub d_rounded: u64,
    pub residual: f64,
    pub energy: f64,
    pub delta_e: f64,
    pub steps: usize,
    pub converged: bool,
    pub seed: u64,
}

impl CsvRow {
    fn new(cfg: &RunConfig, n: usize, param: (&str, f64), r: &DegeneracyResult) -> Self {
        CsvRow {
            model: cfg.model.name().into(),
            n,
            param_name: param.0.into(),
            param_value: param.1,
            method: cfg.method.name().into(),
            d_raw: r.d_raw,
            d_rounded: r.d_rounded,
            residual: r.residual,
            energy: r.energy,
            delta_e: r.delta_e,
            steps: r.steps,
            converged: r.converged,
            seed: cfg.seed,
        }
    }
}

/// Single run as a CSV row.
pub fn degeneracy_row(cfg: &RunConfig) -> Result<(DegeneracyResult, CsvRow)> {
    cfg.validate()?;
    let r = run_point(cfg)?;
    let n = cfg.build_model()?.n_sites();
    let row = CsvRow::new(cfg, n, cfg.label(), &r);
    Ok((r, row))
}

/// All sweep points in sweep order, run on `cfg.jobs` workers.
pub fn run_sweep(cfg: &RunConfig) -> Result<Vec<CsvRow>> {
    cfg.validate()?;
    let sweep = cfg.sweep.as_ref().ok_or_else(|| Error::Config("no sweep given".into()))?;
    let values = sweep.values()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let point = cfg.with_param(&sweep.param, v)?;
                let r = run_point(&point)?;
                let n = point.build_model()?.n_sites();
                Ok(CsvRow::new(&point, n, (&sweep.param, v), &r))
            })
            .collect()
    })
}

/// Writes rows with the header, replacing the file.
pub fn write_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Appends rows, writing the header first if the file is new or empty.
pub fn append_csv(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = fs::OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Full configuration next to a CSV file, so every row can be rerun.
fn write_sidecar(path: &Path, cfg: &RunConfig) -> Result<()> {
    let mut side = path.as_os_str().to_owned();
    side.push(".toml");
    fs::write(PathBuf::from(side), cfg.to_toml())?;
    Ok(())
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Parse { .. } | Error::InvalidHamiltonian(_) | Error::InvalidCode(_) => 3,
        Error::Budget(_) => 4,
        Error::EvolutionFailure(_) => 2,
        _ => 1,
    }
}

#[derive(Debug, Parser)]
#[command(name = "superham", version, about = "Ground-state degeneracy from the ququart lift of a qubit Hamiltonian")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degeneracy of one model point.
    Degeneracy(RunArgs),
    /// One CSV row per sweep point.
    Sweep(RunArgs),
    /// Lowest levels of the dense spectrum.
    Spectrum {
        #[command(flatten)]
        run: RunArgs,
        /// Number of distinct levels to print.
        #[arg(long, default_value_t = 6)]
        levels: usize,
    },
    /// Algebraic identities and solver-vs-oracle batteries.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Flags shared by the run commands; they override the config file.
#[derive(Debug, Default, Args)]
pub struct RunArgs {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub bx: Option<f64>,
    #[arg(long)]
    pub bz: Option<f64>,
    #[arg(long)]
    pub h: Option<f64>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub geometry: Option<PathBuf>,
    /// Term-list file for `--model file`.
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<Method>,
    #[arg(long)]
    pub chi: Option<usize>,
    #[arg(long)]
    pub ndim: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// `param:start:stop:count[:log]`.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut c = match &self.config {
            Some(p) => RunConfig::from_toml(&read(p)?)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.model {
            c.model = v;
        }
        if let Some(v) = self.n {
            c.n = v;
        }
        if let Some(v) = self.bx {
            c.bx = v;
        }
        if let Some(v) = self.bz {
            c.bz = v;
        }
        if let Some(v) = self.h {
            c.h = v;
        }
        if let Some(v) = self.u {
            c.u = v;
        }
        if let Some(v) = &self.geometry {
            c.geometry = Some(v.clone());
        }
        if let Some(v) = &self.hamiltonian {
            c.hamiltonian = Some(v.clone());
        }
        if let Some(v) = self.method {
            c.method = v;
        }
        if let Some(v) = self.chi {
            c.power.chi_max = v;
        }
        if let Some(v) = self.ndim {
            c.lanczos.ndim = v;
        }
        if let Some(v) = self.dt {
            c.ite.dt = Some(v);
        }
        if let Some(v) = self.tol {
            c.tol = Some(v);
        }
        if let Some(v) = &self.sweep {
            c.sweep = Some(SweepSpec::parse(v)?);
        }
        if let Some(v) = self.jobs {
            c.jobs = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = &self.out {
            c.out = Some(v.clone());
        }
        c.validate()?;
        Ok(c)
    }
}

fn cmd_degeneracy(args: &RunArgs) -> Result<i32> {
    let cfg = args.resolve()?;
    let (r, row) = degeneracy_row(&cfg)?;
    println!(
        "{} n={} {}={} via {}: D = {} (raw {:.6}, residual {:.2e}), E0 = {:.10}, δe = {:.3e}, steps = {}, converged = {}",
        row.model, row.n, row.param_name, row.param_value, row.method, r.d_rounded, r.d_raw, r.residual, r.energy,
        r.delta_e, r.steps, r.converged
    );
    if r.ambiguous() {
        log::warn!("degeneracy estimate is ambiguous");
    }
    match &cfg.out {
        Some(p) => {
            append_csv(p, &[row])?;
            write_sidecar(p, &cfg)?;
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.serialize(&row)?;
            w.flush()?;
        }
    }
    Ok(if r.converged { 0 } else { 2 })
}

fn cmd_sweep(args: &RunArgs) -> Result<i32> {
    let cfg = args.resolve()?;
    let rows = run_sweep(&cfg)?;
    match &cfg.out {
        Some(p) => {
            write_csv(p, &rows)?;
            write_sidecar(p, &cfg)?;
        }
        None => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            for row in &rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
    }
    Ok(if rows.iter().all(|r| r.converged) { 0 } else { 2 })
}

fn cmd_spectrum(args: &RunArgs, levels: usize) -> Result<i32> {
    let cfg = args.resolve()?;
    let h = cfg.build_model()?;
    let report = spectrum_of(&h, cfg.tol)?;
    let mut out = std::io::stdout().lock();
    writeln!(out, "level,energy,multiplicity")?;
    let mut i = 0;
    let mut level = 0;
    while i < report.eigenvalues.len() && level < levels {
        let e = report.eigenvalues[i];
        let m = report.eigenvalues[i..].iter().take_while(|x| (**x - e).abs() <= report.tol_used).count();
        writeln!(out, "{level},{e},{m}")?;
        i += m;
        level += 1;
    }
    Ok(0)
}

fn cmd_verify(seed: u64) -> Result<i32> {
    let checks = verify::run_all(seed)?;
    for c in &checks {
        println!("{} {}: {:e} (tolerance {:e})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.tolerance);
    }
    Ok(if checks.iter().all(|c| c.passed) { 0 } else { 1 })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run_cli(cli: Cli) -> i32 {
    let result = match &cli.command {
        Command::Degeneracy(a) => cmd_degeneracy(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Spectrum { run, levels } => cmd_spectrum(run, *levels),
        Command::Verify { seed } => cmd_verify(*seed),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        exit_code(&e)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_spec_parsing() {
        let s = SweepSpec::parse("bx:0:1:21").unwrap();
        assert_eq!(s.values().unwrap().len(), 21);
        assert!((s.values().unwrap()[10] - 0.5).abs() < 1e-15);
        let l = SweepSpec::parse("bz:1e-8:1e-2:7:log").unwrap().values().unwrap();
        assert!((l[1] - 1e-7).abs() < 1e-20);
        assert!(SweepSpec::parse("bx:0:1").is_err());
        assert!(SweepSpec::parse("bx:0:1:3:lin").is_err());
    }

    #[test]
    fn config_round_trip_and_validation() {
        let text = "model = \"kitaev_hubbard\"\nn = 6\nh = 1.5\nmethod = \"power-mps\"\n[power]\nchi_max = 12\n";
        let c = RunConfig::from_toml(text).unwrap();
        assert_eq!(c.model, Model::KitaevHubbard);
        assert_eq!(c.method, Method::PowerMps);
        assert_eq!(c.power.chi_max, 12);
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert!(RunConfig::from_toml("modle = \"tfi\"").is_err());
        let bad = RunConfig { sweep: Some(SweepSpec::parse("h:0:1:3").unwrap()), ..Default::default() };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
        let file = RunConfig { model: Model::File, ..Default::default() };
        assert_eq!(exit_code(&file.validate().unwrap_err()), 3);
    }

    #[test]
    fn backends_agree_on_a_small_chain() {
        for method in [Method::Dense, Method::Lanczos, Method::PowerMps, Method::Ite] {
            let ite = IteConfig { dt: Some(0.01), ..Default::default() };
            let cfg = RunConfig { model: Model::Triangular, bx: 0.0, method, ite, ..Default::default() };
            let r = run_point(&cfg).unwrap();
            assert_eq!(r.d_rounded, 6, "{method:?}: {r:?}");
        }
    }

    #[test]
    fn sweep_rows_are_ordered_and_reproducible() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = RunConfig {
            model: Model::Triangular,
            method: Method::Dense,
            sweep: Some(SweepSpec::parse("bx:0:0.3:4").unwrap()),
            jobs: 2,
            ..Default::default()
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.iter().map(|r| r.d_rounded).collect::<Vec<_>>(), vec![6, 1, 1, 1]);
        let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
        write_csv(&a, &rows).unwrap();
        write_csv(&b, &run_sweep(&cfg).unwrap()).unwrap();
        let text = fs::read_to_string(&a).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
        assert_eq!(text, fs::read_to_string(&b).unwrap());
        append_csv(&a, &rows[..1]).unwrap();
        assert_eq!(fs::read_to_string(&a).unwrap().lines().count(), 6);
    }
}
