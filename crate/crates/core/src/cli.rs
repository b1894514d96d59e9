//! Command-line surface: `simulate`, `verify` and `bessel-table`.
//!
//! Every command is a library function returning its output, so the binary in
//! `main.rs` only parses arguments, writes files and maps errors to exit codes.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bessel_kernel::{bessel_table, cos_sine_expansion, mod4_order_sums};
use crate::bessel_waves::{lagrange_sum, max_order_hankel, x_term, BesselSplitter};
use crate::error::{invalid, Result};
use crate::reference_oracles::{
    bessel_series_oracle, dalembert_gaussian, dense_small_checks, gaussian_profile,
    CheckOutcome, DenseFault, GaussianIc,
};
use crate::spectral_core::{
    apply_laplacian, apply_matrix_function, make_grid, max_abs_diff, wave_acceleration,
    wave_solution, GridSpec, Wavefield, DEFAULT_DENSE_CEILING,
};
use crate::th_split::SpectralSplitter;

/// Environment variable capping the worker threads (0 or unset = automatic).
pub const THREADS_ENV: &str = "THWAVES_THREADS";

/// Fixed 17-significant-digit scientific notation used in every output file.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Bessel,
    Both,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Spectral => "spectral",
            Method::Bessel => "bessel",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// When to take the snapshot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeSpec {
    /// Physical time, snapped to the nearest `j dx`.
    Time(f64),
    /// Time index `j` (`t = j dx`).
    Index(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n_points: usize,
    pub sigma: f64,
    pub traversals: usize,
    pub time: TimeSpec,
    pub method: Method,
    /// Evaluate the spectral method at the requested `t` instead of the snapped one.
    pub exact_time: bool,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n_points: 301,
            sigma: 0.05,
            traversals: 3,
            time: TimeSpec::Index(0),
            method: Method::Both,
            exact_time: false,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotMeta {
    pub n_points: usize,
    pub dx: f64,
    pub sigma: f64,
    pub j: usize,
    pub t_requested: Option<f64>,
    /// Time at which the snapshot was evaluated.
    pub t: f64,
    pub traversals: usize,
    pub method: Method,
    pub max_bessel_order: Option<usize>,
    pub bessel_start_order: Option<usize>,
}

/// One snapshot: metadata plus named columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    pub columns: Vec<(String, Vec<f64>)>,
}

impl Snapshot {
    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v.as_slice())
    }
}

/// Resolves the time index and the evaluation time for a grid.
pub fn snap_time(grid: GridSpec, time: TimeSpec) -> Result<(usize, Option<f64>)> {
    match time {
        TimeSpec::Index(j) => Ok((j, None)),
        TimeSpec::Time(t) => {
            if !(t.is_finite() && t >= 0.0) {
                return Err(invalid(format!("time must be finite and non-negative, got {t}")));
            }
            Ok(((t / grid.dx()).round() as usize, Some(t)))
        }
    }
}

/// Computes one snapshot of the full, Toeplitz, Hankel and d'Alembert waves.
pub fn simulate(config: &RunConfig) -> Result<Snapshot> {
    let grid = make_grid(config.n_points)?;
    let ic = GaussianIc::new(config.sigma)?;
    let (j, t_requested) = snap_time(grid, config.time)?;
    if config.exact_time && config.method != Method::Spectral {
        return Err(invalid("--exact-time is only available with --method spectral"));
    }
    let t = match (config.exact_time, t_requested) {
        (true, Some(t)) => t,
        _ => grid.time_of(j),
    };

    let u0 = gaussian_profile(grid, ic);
    let full = wave_solution(t, &u0)?;
    let dalembert = dalembert_gaussian(t, grid, ic)?;

    let spectral = match config.method {
        Method::Spectral | Method::Both => {
            let splitter = SpectralSplitter::new(&u0);
            Some(if config.exact_time {
                splitter.at_time(t)
            } else {
                splitter.at_index(j)
            })
        }
        Method::Bessel => None,
    };
    let bessel = match config.method {
        Method::Bessel | Method::Both => {
            Some(BesselSplitter::new(&u0, config.traversals).at_index(j)?)
        }
        Method::Spectral => None,
    };

    let mut columns = vec![
        ("x".to_string(), grid.mesh()),
        ("u_full".to_string(), full.into_values()),
    ];
    match (&spectral, &bessel) {
        (Some(s), None) => {
            columns.push(("u_toeplitz".into(), s.toeplitz.values().to_vec()));
            columns.push(("u_hankel".into(), s.hankel.values().to_vec()));
        }
        (None, Some(b)) => {
            columns.push(("u_toeplitz".into(), b.split.toeplitz.values().to_vec()));
            columns.push(("u_hankel".into(), b.split.hankel.values().to_vec()));
        }
        (Some(s), Some(b)) => {
            columns.push(("u_toeplitz".into(), s.toeplitz.values().to_vec()));
            columns.push(("u_hankel".into(), s.hankel.values().to_vec()));
            columns.push(("u_toeplitz_bessel".into(), b.split.toeplitz.values().to_vec()));
            columns.push(("u_hankel_bessel".into(), b.split.hankel.values().to_vec()));
        }
        (None, None) => unreachable!("every method evaluates at least one form"),
    }
    columns.push(("u_dalembert".into(), dalembert.into_values()));

    Ok(Snapshot {
        meta: SnapshotMeta {
            n_points: config.n_points,
            dx: grid.dx(),
            sigma: config.sigma,
            j,
            t_requested,
            t,
            traversals: config.traversals,
            method: config.method,
            max_bessel_order: bessel.as_ref().map(|b| b.table.max_order()),
            bessel_start_order: bessel.as_ref().map(|b| b.table.start_order()),
        },
        columns,
    })
}

fn opt_usize(v: Option<usize>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

/// CSV with `#`-prefixed metadata lines, a header row and one row per node.
pub fn render_csv(snapshot: &Snapshot) -> String {
    let m = &snapshot.meta;
    let mut out = String::new();
    let _ = writeln!(out, "# N={}", m.n_points);
    let _ = writeln!(out, "# dx={}", format_float(m.dx));
    let _ = writeln!(out, "# sigma={}", format_float(m.sigma));
    let _ = writeln!(out, "# j={}", m.j);
    let _ = writeln!(
        out,
        "# t_requested={}",
        m.t_requested.map_or_else(|| "none".to_string(), format_float)
    );
    let _ = writeln!(out, "# t={}", format_float(m.t));
    let _ = writeln!(out, "# R={}", m.traversals);
    let _ = writeln!(out, "# method={}", m.method.as_str());
    let _ = writeln!(out, "# max_bessel_order={}", opt_usize(m.max_bessel_order));
    let _ = writeln!(out, "# bessel_start_order={}", opt_usize(m.bessel_start_order));

    let header: Vec<&str> = snapshot.columns.iter().map(|(n, _)| n.as_str()).collect();
    let _ = writeln!(out, "{}", header.join(","));
    let rows = snapshot.columns[0].1.len();
    for r in 0..rows {
        let row: Vec<String> = snapshot
            .columns
            .iter()
            .map(|(_, v)| format_float(v[r]))
            .collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

#[derive(Serialize)]
struct JsonSnapshot<'a> {
    metadata: &'a SnapshotMeta,
    columns: serde_json::Map<String, serde_json::Value>,
}

/// JSON object `{ "metadata": {...}, "columns": { name: [values] } }`.
pub fn render_json(snapshot: &Snapshot) -> Result<String> {
    let columns = snapshot
        .columns
        .iter()
        .map(|(n, v)| (n.clone(), serde_json::json!(v)))
        .collect();
    let doc = JsonSnapshot {
        metadata: &snapshot.meta,
        columns,
    };
    Ok(serde_json::to_string_pretty(&doc)? + "\n")
}

/// Runs `simulate` and writes the rendered snapshot to the output path or stdout.
pub fn cmd_simulate(config: &RunConfig) -> Result<Snapshot> {
    let snapshot = simulate(config)?;
    let text = match config.format {
        OutputFormat::Csv => render_csv(&snapshot),
        OutputFormat::Json => render_json(&snapshot)?,
    };
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(snapshot)
}

/// `n,J_n` CSV for orders `0..=m_max`.
pub fn cmd_bessel_table(x: f64, m_max: usize) -> Result<String> {
    // m_max = 0 is a one-row table; the kernel needs at least order 1.
    let table = bessel_table(x, m_max.max(1))?;
    let mut out = String::from("n,J_n\n");
    for n in 0..=m_max {
        let _ = writeln!(out, "{n},{}", format_float(table.j(n)));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub dense_ceiling: usize,
    pub fault: Option<DenseFault>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            dense_ceiling: DEFAULT_DENSE_CEILING,
            fault: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(CheckOutcome::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|c| !c.passed())
    }

    /// One `PASS|FAIL <name> <max_abs_error>` line per check.
    pub fn render(&self) -> String {
        self.outcomes.iter().map(|c| format!("{c}\n")).collect()
    }
}

/// Small deterministic generator for the verification fields.
struct SplitMix64(u64);

impl SplitMix64 {
    fn next_f64(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    }
}

fn random_field(grid: GridSpec, seed: u64) -> Wavefield {
    let mut rng = SplitMix64(seed);
    let values = (0..grid.n_points()).map(|_| rng.next_f64()).collect();
    Wavefield::new(grid, values).expect("length n")
}

/// Runs the invariant suite over every module.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut out = Vec::new();

    // Bessel kernel
    let mut series = 0.0_f64;
    for &x in &[0.1, 1.0, 2.0, 5.0, 10.0] {
        let table = bessel_table(x, 30)?;
        for n in 0..=30 {
            series = series.max((table.j(n) - bessel_series_oracle(n, x, 60)?).abs());
        }
    }
    out.push(CheckOutcome::new("bessel.series_oracle", series, 1e-12));

    let mut norm = 0.0_f64;
    for &x in &[10.0_f64, 100.0, 1000.0, 6000.0] {
        let m = x as usize + 40 + (10.0 * x.cbrt()).ceil() as usize;
        norm = norm.max((bessel_table(x, m)?.even_normalization_sum() - 1.0).abs());
    }
    let m = max_order_hankel(301, 3);
    let short = bessel_table(6000.0, m)?;
    let long = bessel_table(6000.0, 6300)?;
    norm = norm.max(max_abs_diff(short.values(), &long.values()[..=m]));
    out.push(CheckOutcome::new("bessel.normalization", norm, 1e-12));

    let mut residual = 0.0_f64;
    for &(x, m) in &[(0.5, 60), (7.0, 80), (250.0, 600), (6000.0, 3620)] {
        let table = bessel_table(x, m)?;
        for n in 1..m {
            let scale = 1.0_f64.max(table.j(n).abs() * 2.0 * n as f64 / x);
            let r = table.j(n - 1) + table.j(n + 1) - 2.0 * n as f64 / x * table.j(n);
            residual = residual.max(r.abs() / scale);
        }
    }
    out.push(CheckOutcome::new("bessel.recurrence_residual", residual, 1e-10));

    let mut anger = 0.0_f64;
    for &t in &[0.5, 3.0, 7.3, 12.0, 31.0] {
        for &x in &[0.0, 0.6, 1.3, 2.9] {
            let l_max = ((t + 40.0) / 2.0_f64).ceil() as usize;
            anger = anger.max((cos_sine_expansion(t, x, l_max)? - (t * x.sin()).cos()).abs());
        }
    }
    out.push(CheckOutcome::new("bessel.cos_sine_expansion", anger, 1e-12));

    let mut mod4 = 0.0_f64;
    for &t in &[1.0_f64, 5.0, 20.0] {
        let (a, b) = mod4_order_sums(t, 20)?;
        mod4 = mod4
            .max((a - 0.5 * (1.0 + t.cos())).abs())
            .max((b - 0.5 * (1.0 - t.cos())).abs());
    }
    out.push(CheckOutcome::new("bessel.mod4_order_sums", mod4, 1e-12));

    let mut lagrange = 0.0_f64;
    let n7 = 7usize;
    for p in 0..=40i64 {
        let brute: f64 = (1..=n7)
            .map(|k| (k as f64 * p as f64 * std::f64::consts::PI / (n7 + 1) as f64).cos())
            .sum();
        lagrange = lagrange.max((brute - lagrange_sum(p, n7) as f64).abs());
    }
    out.push(CheckOutcome::new("lagrange.brute_force", lagrange, 1e-10));

    // Dense brute force
    for n in [3usize, 11, 31, 101] {
        if n <= config.dense_ceiling {
            out.extend(dense_small_checks(n, config.dense_ceiling, config.fault)?);
        }
    }

    // Spectral core
    let grid = make_grid(51)?;
    let u = random_field(grid, 7);
    let same = apply_matrix_function(|_| 1.0, &u)?;
    out.push(CheckOutcome::new("spectral.completeness", same.max_abs_diff(&u), 1e-12));

    let mut energy = 0.0_f64;
    for i in 0..40 {
        let t = 0.173 * i as f64;
        energy = energy.max(wave_solution(t, &u)?.norm2() - u.norm2());
    }
    out.push(CheckOutcome::new("spectral.energy_bound", energy.max(0.0), 1e-12));

    let grid33 = make_grid(33)?;
    let g33 = gaussian_profile(grid33, GaussianIc::new(0.2)?);
    let mut accel = 0.0_f64;
    for &t in &[0.0, 0.4, 1.7] {
        let lhs = wave_acceleration(t, &g33)?;
        let sol = wave_solution(t, &g33)?;
        let dx2 = grid33.dx() * grid33.dx();
        let rhs: Vec<f64> = apply_laplacian(sol.values()).iter().map(|v| -v / dx2).collect();
        accel = accel.max(max_abs_diff(lhs.values(), &rhs));
    }
    out.push(CheckOutcome::new("spectral.ode_residual", accel, 1e-8));

    // Toeplitz-plus-Hankel split
    let mut split = 0.0_f64;
    for (n, seed) in [(11usize, 1u64), (51, 2)] {
        let grid = make_grid(n)?;
        let u0 = random_field(grid, seed);
        let splitter = SpectralSplitter::new(&u0);
        for j in 0..=50 {
            let s = splitter.at_index(j);
            let full = wave_solution(grid.time_of(j), &u0)?;
            split = split.max(s.total().max_abs_diff(&full));
        }
    }
    out.push(CheckOutcome::new("split.exactness", split, 1e-10));

    // Bessel-form waves against the spectral split
    let grid = make_grid(101)?;
    let ic = GaussianIc::default();
    let u0 = gaussian_profile(grid, ic);
    let spectral = SpectralSplitter::new(&u0);
    let traversals = 2;
    let bessel = BesselSplitter::new(&u0, traversals);
    let (mut toe, mut han, mut sum) = (0.0_f64, 0.0_f64, 0.0_f64);
    for j in [0usize, 15, 50, 100, 150, 200] {
        let s = spectral.at_index(j);
        let b = bessel.at_index(j)?;
        toe = toe.max(b.split.toeplitz.max_abs_diff(&s.toeplitz));
        han = han.max(b.split.hankel.max_abs_diff(&s.hankel));
        sum = sum.max(b.split.total().max_abs_diff(&wave_solution(grid.time_of(j), &u0)?));
    }
    out.push(CheckOutcome::new("bessel_waves.toeplitz_vs_spectral", toe, 1e-8));
    out.push(CheckOutcome::new("bessel_waves.hankel_vs_spectral", han, 1e-8));
    out.push(CheckOutcome::new("bessel_waves.sum_vs_solution", sum, 1e-8));

    let basis = bessel.basis();
    let n = grid.n_points() as f64;
    out.push(CheckOutcome::new(
        "identities.alpha",
        (basis.alpha() - 0.5 * (n - 1.0)).abs(),
        1e-9,
    ));
    out.push(CheckOutcome::new("identities.beta", basis.beta().abs(), 1e-9));
    let x = x_term(0, basis);
    let quarter = 0.25 * (1.0 - 2.0 / (n + 1.0));
    let x_err = x.values().iter().fold(0.0_f64, |m, v| m.max((v - quarter).abs()));
    out.push(CheckOutcome::new("identities.x_constant", x_err, 1e-9));

    Ok(VerifyReport { outcomes: out })
}

#[derive(Debug, Parser)]
#[command(
    name = "thwaves",
    version,
    about = "Toeplitz and Hankel waves of the semi-discrete 1-D wave equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write one snapshot of the full, Toeplitz, Hankel and d'Alembert waves.
    Simulate(SimulateArgs),
    /// Run the invariant suite; exit status 1 if any check fails.
    Verify(VerifyArgs),
    /// Print J_0(x)..J_M(x) as `n,J_n` CSV.
    BesselTable(BesselTableArgs),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("when").required(true).args(["t", "j"]))]
pub struct SimulateArgs {
    /// Number of mesh points (odd).
    #[arg(long = "n", default_value_t = 301)]
    pub n_points: usize,
    /// Width of the Gaussian initial condition.
    #[arg(long, default_value_t = 0.05, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Traversal count R for the Bessel expansions.
    #[arg(long, default_value_t = 3)]
    pub traversals: usize,
    /// Time, snapped to the nearest multiple of dx.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Time index (t = j dx).
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::Both)]
    pub method: Method,
    /// Evaluate the spectral method at the unsnapped time.
    #[arg(long)]
    pub exact_time: bool,
    /// Output file (stdout if absent).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

impl SimulateArgs {
    pub fn to_config(&self) -> Result<RunConfig> {
        let time = match (self.t, self.j) {
            (Some(t), None) => TimeSpec::Time(t),
            (None, Some(j)) => TimeSpec::Index(j),
            _ => return Err(invalid("give exactly one of --t and --j")),
        };
        Ok(RunConfig {
            n_points: self.n_points,
            sigma: self.sigma,
            traversals: self.traversals,
            time,
            method: self.method,
            exact_time: self.exact_time,
            output: self.output.clone(),
            format: self.format,
        })
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest N for which dense matrices are built.
    #[arg(long, default_value_t = DEFAULT_DENSE_CEILING)]
    pub dense_ceiling: usize,
    /// Negative control: corrupt the dense Hankel parts.
    #[arg(long, hide = true)]
    pub inject_hankel_sign_fault: bool,
}

#[derive(Debug, Args)]
pub struct BesselTableArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub x: f64,
    #[arg(long)]
    pub m_max: usize,
}

/// Configures the global thread pool from [`THREADS_ENV`].
pub fn configure_threads() -> Result<()> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| invalid(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| invalid(e.to_string()))?;
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Simulate(args) => {
            cmd_simulate(&args.to_config()?)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let report = run_verify(&VerifyConfig {
                dense_ceiling: args.dense_ceiling,
                fault: args
                    .inject_hankel_sign_fault
                    .then_some(DenseFault::FlipHankelSign),
            })?;
            print!("{}", report.render());
            if report.passed() {
                Ok(0)
            } else {
                let failed = report.failures().count();
                eprintln!("{failed} check(s) failed");
                Ok(1)
            }
        }
        Command::BesselTable(args) => {
            print!("{}", cmd_bessel_table(args.x, args.m_max)?);
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_fixed_width_mantissa() {
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        assert_eq!(format_float(-0.1), "-1.0000000000000001e-1");
        assert_eq!(format_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn snapping_within_half_step() {
        let grid = make_grid(301).unwrap();
        for &t in &[0.0, 0.001, 3.7, 5.7, 2.0 / 300.0 * 10.5] {
            let (j, req) = snap_time(grid, TimeSpec::Time(t)).unwrap();
            assert_eq!(req, Some(t));
            assert!((t - grid.time_of(j)).abs() <= 0.5 * grid.dx() + 1e-15);
        }
        assert!(snap_time(grid, TimeSpec::Time(-1.0)).is_err());
        assert_eq!(snap_time(grid, TimeSpec::Index(9)).unwrap(), (9, None));
    }

    #[test]
    fn simulate_spectral_at_zero() {
        let cfg = RunConfig {
            time: TimeSpec::Time(0.0),
            method: Method::Spectral,
            ..RunConfig::default()
        };
        let snap = simulate(&cfg).unwrap();
        let g = gaussian_profile(make_grid(301).unwrap(), GaussianIc::default());
        assert!(max_abs_diff(snap.column("u_full").unwrap(), g.values()) < 1e-12);
        assert_eq!(snap.meta.max_bessel_order, None);
        assert!(snap.column("u_toeplitz_bessel").is_none());
    }

    #[test]
    fn simulate_rejects_bad_config() {
        let bad_n = RunConfig {
            n_points: 4,
            ..RunConfig::default()
        };
        assert!(simulate(&bad_n).is_err());
        let bad_sigma = RunConfig {
            sigma: -0.05,
            ..RunConfig::default()
        };
        assert!(simulate(&bad_sigma).is_err());
        let exact_bessel = RunConfig {
            time: TimeSpec::Time(0.3),
            exact_time: true,
            method: Method::Bessel,
            ..RunConfig::default()
        };
        assert!(simulate(&exact_bessel).is_err());
    }

    #[test]
    fn csv_layout() {
        let cfg = RunConfig {
            n_points: 5,
            time: TimeSpec::Index(1),
            traversals: 1,
            ..RunConfig::default()
        };
        let text = render_csv(&simulate(&cfg).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "# N=5");
        let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(
            *header,
            "x,u_full,u_toeplitz,u_hankel,u_toeplitz_bessel,u_hankel_bessel,u_dalembert"
        );
        assert_eq!(lines.iter().filter(|l| !l.starts_with('#')).count(), 6);
        assert!(text.contains("# max_bessel_order=20\n"));
    }

    #[test]
    fn json_layout() {
        let cfg = RunConfig {
            n_points: 7,
            time: TimeSpec::Time(0.5),
            method: Method::Bessel,
            format: OutputFormat::Json,
            ..RunConfig::default()
        };
        let text = render_json(&simulate(&cfg).unwrap()).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["metadata"]["method"], "bessel");
        assert_eq!(v["metadata"]["j"], 2);
        assert_eq!(v["columns"]["x"].as_array().unwrap().len(), 7);
    }

    #[test]
    fn bessel_table_csv() {
        let csv = cmd_bessel_table(0.0, 3).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "n,J_n");
        assert_eq!(rows.len(), 5);
        assert_eq!(rows[1], "0,1.0000000000000000e0");
        assert_eq!(rows[4], "3,0.0000000000000000e0");

        let csv = cmd_bessel_table(2.0, 0).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows.len(), 2);
        let v: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 0.223_890_779_141_235_7).abs() < 1e-13);

        assert!(cmd_bessel_table(-1.0, 3).is_err());
    }

    #[test]
    fn verify_small_ceiling_passes() {
        let report = run_verify(&VerifyConfig {
            dense_ceiling: 3,
            fault: None,
        })
        .unwrap();
        assert!(report.passed(), "{}", report.render());
        assert!(report.outcomes.iter().any(|c| c.name.starts_with("dense.n3.")));
        assert!(!report.outcomes.iter().any(|c| c.name.starts_with("dense.n11.")));
    }

    #[test]
    fn verify_detects_fault() {
        let report = run_verify(&VerifyConfig {
            dense_ceiling: 11,
            fault: Some(DenseFault::FlipHankelSign),
        })
        .unwrap();
        assert!(!report.passed());
        assert!(report.render().contains("FAIL dense.n11.t_plus_h_projector"));
    }
}
