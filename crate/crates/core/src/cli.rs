//! Command-line front end. The `pvq` binary only forwards to [`run`].

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::baselines::{compare_baselines, write_baselines_csv};
use crate::benchmark::{
    improvement_table, sig6, sweep_curve, write_table_csv, ImprovementReport, PGrid, Parallelism, Protocol,
    DEFAULT_SAMPLES, DEFAULT_SEED,
};
use crate::enumerative::encode_index;
use crate::error::{contract, Error, Result};
use crate::geometry::{Norm, PowerParam, SamplingLaw, UnitVector};
use crate::lattice::{build_lattice, edge_objective, optimize, OptimizerSettings, PointConfiguration};
use crate::pyramid::{bit_cost, codebook_size, deform, quantize, reconstruct, QuantizerConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "pvq", version, about = "Pyramid vector quantization with power projection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quantize one vector and print every pipeline stage.
    Quantize(QuantizeArgs),
    /// Sweep the power for one (L, K) cell.
    Sweep(SweepArgs),
    /// Improvement table over ranges of L and K, as CSV.
    Heatmap(HeatmapArgs),
    /// Compare sign, sign+max and PVQ quantizers at one dimension.
    Baselines(BaselinesArgs),
    /// Optimize the L = 3 lattice point placement on the sphere.
    OptimizeLattice(LatticeArgs),
}

#[derive(Debug, Args)]
pub struct QuantizeArgs {
    /// Comma-separated coordinates, e.g. `0.6,0.8`.
    #[arg(allow_hyphen_values = true)]
    pub vector: String,
    /// Dimension; defaults to the number of coordinates given.
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
}

#[derive(Debug, Args, Clone)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Input law: `cube` (normalized uniform cube) or `uniform` (uniform on the sphere).
    #[arg(long, default_value = "cube")]
    pub law: SamplingLaw,
}

impl SamplingArgs {
    fn protocol(&self) -> Protocol {
        Protocol::new(self.samples, self.seed).with_law(self.law)
    }
}

#[derive(Debug, Args, Clone)]
pub struct GridArgs {
    #[arg(long, default_value_t = 1.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 1.5)]
    pub p_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub p_step: f64,
}

impl GridArgs {
    fn grid(&self) -> Result<PGrid> {
        PGrid::new(self.p_min, self.p_max, self.p_step)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub l: usize,
    #[arg(long)]
    pub k: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Also write the report as a one-row CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long, default_value_t = 2)]
    pub l_min: usize,
    #[arg(long, default_value_t = 20)]
    pub l_max: usize,
    #[arg(long, default_value_t = 1)]
    pub k_min: u32,
    #[arg(long, default_value_t = 20)]
    pub k_max: u32,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Evaluate cells on one thread.
    #[arg(long)]
    pub serial: bool,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BaselinesArgs {
    #[arg(long, default_value_t = 15)]
    pub l: usize,
    /// PVQ precisions to include.
    #[arg(long, value_delimiter = ',', default_value = "2,4,6,8")]
    pub pvq_k: Vec<u32>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LatticeArgs {
    #[arg(long, default_value_t = 15)]
    pub k: u32,
    #[arg(long, default_value_t = 10_000)]
    pub steps: usize,
    #[arg(long, default_value_t = 1.0)]
    pub step_size: f64,
    /// Log every n-th accepted step.
    #[arg(long, default_value_t = 500)]
    pub log_every: usize,
    /// Writes `<out>_radial.csv` and `<out>_optimized.csv`.
    #[arg(long, default_value = "lattice")]
    pub out: PathBuf,
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            match e {
                Error::Io(_) | Error::Csv(_) => EXIT_IO,
                _ => EXIT_CONTRACT,
            }
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Quantize(a) => cmd_quantize(&a, out, err),
        Command::Sweep(a) => cmd_sweep(&a, out),
        Command::Heatmap(a) => cmd_heatmap(&a, out),
        Command::Baselines(a) => cmd_baselines(&a, out),
        Command::OptimizeLattice(a) => cmd_optimize_lattice(&a, out),
    }
}

fn parse_vector(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            let v: f64 = t.trim().parse().map_err(|_| contract(format!("`{t}` is not a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(contract(format!("`{t}` is not finite")))
            }
        })
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(|&x| sig6(x)).collect::<Vec<_>>().join(",")
}

pub fn cmd_quantize(a: &QuantizeArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let raw = parse_vector(&a.vector)?;
    let l = a.l.unwrap_or(raw.len());
    if l != raw.len() {
        return Err(contract(format!("--l {l} does not match {} coordinates", raw.len())));
    }
    let cfg = QuantizerConfig::new(l, a.k)?;
    let p = PowerParam::new(a.p)?;
    let x = UnitVector::normalize(&raw)?;
    if (Norm::L2.eval(&raw) - 1.0).abs() > 1e-12 {
        writeln!(err, "warning: input normalized to the unit sphere")?;
    }
    let y = deform(x.coords(), p)?;
    let q = quantize(&x, cfg, p)?;
    let index = encode_index(&q);
    let r = reconstruct(&q, p);
    writeln!(out, "input: {}", join(x.coords()))?;
    writeln!(out, "deformed: {}", join(&y))?;
    writeln!(out, "point: {} k={}", q, q.k())?;
    writeln!(out, "index: {} of {} ({} bits)", index, codebook_size(l, a.k), sig6(bit_cost(l, a.k)))?;
    writeln!(out, "reconstruction: {}", join(r.coords()))?;
    writeln!(out, "squared_error: {}", sig6(x.dist2(&r)))?;
    Ok(())
}

fn print_report(r: &ImprovementReport, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "L={} K={} best_p={} mse_radial={} mse_best={} pct={} db={} n={} seed={}",
        r.l,
        r.k,
        sig6(r.best_p),
        sig6(r.mse_radial),
        sig6(r.mse_best),
        sig6(r.pct),
        sig6(r.db),
        r.n_samples,
        r.seed
    )?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn cmd_sweep(a: &SweepArgs, out: &mut dyn Write) -> Result<()> {
    let grid = a.grid.grid()?;
    if !grid.contains_radial() {
        return Err(contract("power grid must contain p = 1"));
    }
    let cells = sweep_curve(a.l, a.k, &grid, &a.sampling.protocol())?;
    let report = ImprovementReport::from_cells(&cells)?;
    print_report(&report, out)?;
    if let Some(path) = &a.out {
        write_table_csv(std::slice::from_ref(&report), create(path)?)?;
    }
    Ok(())
}

pub fn cmd_heatmap(a: &HeatmapArgs, out: &mut dyn Write) -> Result<()> {
    if a.l_min < 2 || a.l_max < a.l_min || a.k_min < 1 || a.k_max < a.k_min {
        return Err(contract("need 2 ≤ l-min ≤ l-max and 1 ≤ k-min ≤ k-max"));
    }
    let ls: Vec<usize> = (a.l_min..=a.l_max).collect();
    let ks: Vec<u32> = (a.k_min..=a.k_max).collect();
    let par = if a.serial { Parallelism::Serial } else { Parallelism::Parallel };
    let grid = a.grid.grid()?;
    // open the destination first so an unwritable path fails before the run
    let file = a.out.as_deref().map(create).transpose()?;
    let reports = improvement_table(&ls, &ks, &grid, &a.sampling.protocol(), par)?;
    match file {
        Some(f) => write_table_csv(&reports, f),
        None => write_table_csv(&reports, out),
    }
}

pub fn cmd_baselines(a: &BaselinesArgs, out: &mut dyn Write) -> Result<()> {
    let file = a.out.as_deref().map(create).transpose()?;
    let rows = compare_baselines(a.l, &a.pvq_k, &a.sampling.protocol())?;
    match file {
        Some(f) => write_baselines_csv(&rows, f),
        None => write_baselines_csv(&rows, out),
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn cmd_optimize_lattice(a: &LatticeArgs, out: &mut dyn Write) -> Result<()> {
    let graph = build_lattice(a.k)?;
    let radial = PointConfiguration::radial(&graph);
    let settings = OptimizerSettings { max_steps: a.steps, step_size: a.step_size, ..Default::default() };
    let res = optimize(&graph, &radial, settings)?;
    let every = a.log_every.max(1);
    for (i, f) in res.trace.iter().enumerate() {
        if i % every == 0 || i + 1 == res.trace.len() {
            writeln!(out, "step {i} objective {f:.12e}")?;
        }
    }
    let base = edge_objective(&radial, &graph)?;
    let fin = edge_objective(&res.config, &graph)?;
    writeln!(out, "radial objective {base:.12e}")?;
    writeln!(out, "optimized objective {fin:.12e} after {} steps", res.steps)?;
    radial.write_csv(create(&with_suffix(&a.out, "_radial.csv"))?)?;
    res.config.write_csv(create(&with_suffix(&a.out, "_optimized.csv"))?)?;
    Ok(())
}
