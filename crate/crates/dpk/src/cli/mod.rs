//! Command-line front end: argument parsing, sub-command dispatch, and the
//! CSV/JSON/SVG writers. Numeric output is printed with 17 significant digits
//! so emitted files round-trip exactly.

mod svg;

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dpk_core::corr::{CorrelationRequest, QuadratureGrid, StepFunction};
use dpk_core::kernels::{self, KernelKind, SpaceTimePoint};
use dpk_core::weylkm::Configuration;
use dpk_core::Error as CoreError;

use crate::acceptance::{self, Scale};
use crate::ensemble_io;
use crate::mcsim;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "dpk",
    version,
    about = "Noncolliding Brownian motion as a determinantal process: kernels, correlation functions, simulators"
)]
pub struct Cli {
    /// Load a JSON run configuration instead of command-line flags
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub output: OutputFormat,
    /// Output path (stdout when omitted); files are written atomically
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Tolerance recorded in the output metadata
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    Svg,
    /// Compact DPKE ensemble file (simulate only)
    Binary,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum KindArg {
    Hermite,
    Sine,
    Airy,
    Bessel,
}

fn kernel_kind(kind: KindArg, n: Option<usize>, nu: Option<f64>) -> Result<KernelKind, String> {
    match kind {
        KindArg::Hermite => {
            let n = n.ok_or("--kind hermite needs --n")?;
            Ok(KernelKind::HermiteFinite { n })
        }
        KindArg::Sine => Ok(KernelKind::Sine),
        KindArg::Airy => Ok(KernelKind::Airy),
        KindArg::Bessel => {
            let nu = nu.ok_or("--kind bessel needs --nu")?;
            Ok(KernelKind::Bessel { nu })
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate a matrix-kernel K(ta, xa; tb, xb)
    Kernel {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        ta: f64,
        #[arg(long, allow_negative_numbers = true)]
        xa: f64,
        #[arg(long, allow_negative_numbers = true)]
        tb: f64,
        #[arg(long, allow_negative_numbers = true)]
        xb: f64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// One-time particle density rho_N(t, x) on a grid
    Density {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Evaluation grid a:b:count
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Special-function evaluation
    Specfun {
        /// One of: heat, hermite, phi, hatphi, mehler, airy, airyp, besselj, besseli
        #[arg(long = "fn")]
        function: String,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tprime: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        x: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        xprime: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long)]
        terms: Option<u32>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Multitime correlation determinant for blocks "t:x1,x2;t2:x3"
    Corr {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        blocks: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Fredholm generating function det(1 + K chi) on a quadrature grid
    Fredholm {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        /// Comma-separated, strictly increasing times
        #[arg(long, allow_hyphen_values = true)]
        times: String,
        /// One step function per time: "a:b:value[;a:b:value]" (repeat per time)
        #[arg(long, allow_hyphen_values = true)]
        chi: Vec<String>,
        #[arg(long, default_value_t = 64)]
        grid_nodes: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Gap probability on an interval
    Gap {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, allow_negative_numbers = true)]
        nu: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Interval a:b
        #[arg(long, allow_hyphen_values = true)]
        interval: String,
        #[arg(long, default_value_t = 64)]
        grid_nodes: usize,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Generate a path ensemble (matrix or sde scheme) and export it
    Simulate {
        #[arg(long)]
        scheme: String,
        #[arg(long)]
        n: usize,
        /// Comma-separated observation times
        #[arg(long, allow_hyphen_values = true)]
        times: String,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Initial configuration for the sde scheme, "x1,x2,..."
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Survival probability of the absorbing walk
    Survival {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Starting configuration "x1,x2,..."
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "quadrature")]
        method: String,
        #[arg(long, default_value_t = 1e-4)]
        dt: f64,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Scaling-limit convergence table (bulk or edge)
    Limits {
        /// bulk | edge
        #[arg(long)]
        kind: String,
        /// Comma-separated particle counts
        #[arg(long)]
        n_list: String,
        /// Probe points "sa:xa:sb:xb[;...]"; empty emits a header-only table
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        probes: String,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Replay the acceptance suite
    Verify {
        /// fast | full
        #[arg(long, default_value = "fast")]
        suite: String,
    },
}

/// A rectangular numeric result plus the metadata that reproduces it.
pub struct Table {
    pub command: String,
    pub seed: Option<u64>,
    pub tolerance: f64,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    /// JSON description that reproduces this run via --config
    pub run_config: serde_json::Value,
}

impl Table {
    fn to_csv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# command: {}", self.command);
        let _ = writeln!(s, "# version: {VERSION}");
        if let Some(seed) = self.seed {
            let _ = writeln!(s, "# seed: {seed}");
        }
        let _ = writeln!(s, "# tolerance: {:.17e}", self.tolerance);
        let _ = writeln!(s, "# config: {}", self.run_config);
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }

    fn to_json(&self) -> String {
        let body = serde_json::json!({
            "command": self.command,
            "version": VERSION,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "config": self.run_config,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| {
                r.iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&body).expect("serializable") + "\n"
    }
}

/// Write atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp{}",
        path.extension().and_then(|e| e.to_str()).unwrap_or(""),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

fn emit(table: &Table, opts: &OutputOpts) -> Result<(), String> {
    let payload = match opts.output {
        OutputFormat::Csv => table.to_csv().into_bytes(),
        OutputFormat::Json => table.to_json().into_bytes(),
        OutputFormat::Svg => svg::render(table)?.into_bytes(),
        OutputFormat::Binary => return Err("binary output is only available for `simulate`".into()),
    };
    match &opts.out {
        Some(path) => write_atomic(path, &payload).map_err(|e| e.to_string()),
        None => std::io::stdout()
            .write_all(&payload)
            .map_err(|e| e.to_string()),
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {p:?}: {e}"))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be a:b:count, got {s:?}"));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|e| format!("bad grid start: {e}"))?;
    let b: f64 = parts[1].parse().map_err(|e| format!("bad grid end: {e}"))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| format!("bad grid count: {e}"))?;
    if !(a < b) || count < 2 {
        return Err("grid needs a < b and count >= 2".into());
    }
    Ok((a, b, count))
}

fn parse_blocks(s: &str) -> Result<Vec<(f64, Vec<f64>)>, String> {
    s.split(';')
        .map(|blk| {
            let (t, pts) = blk
                .split_once(':')
                .ok_or_else(|| format!("block must be t:x1,x2 got {blk:?}"))?;
            Ok((
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("bad time: {e}"))?,
                parse_list(pts)?,
            ))
        })
        .collect()
}

fn parse_chi(s: &str) -> Result<StepFunction, String> {
    if s.trim().is_empty() || s.trim() == "0" {
        return Ok(StepFunction::zero());
    }
    let mut intervals = Vec::new();
    for part in s.split(';') {
        let f: Vec<&str> = part.split(':').collect();
        if f.len() != 3 {
            return Err(format!("chi interval must be a:b:value, got {part:?}"));
        }
        intervals.push((
            f[0].parse::<f64>().map_err(|e| format!("bad chi a: {e}"))?,
            f[1].parse::<f64>().map_err(|e| format!("bad chi b: {e}"))?,
            f[2].parse::<f64>()
                .map_err(|e| format!("bad chi value: {e}"))?,
        ));
    }
    StepFunction::new(intervals).map_err(|e| e.to_string())
}

/// Exit codes: 0 success, 1 user error, 2 numerical-consistency failure.
pub fn run(cli: Cli) -> i32 {
    let command = match resolve_command(cli) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 1;
        }
    };
    match dispatch(command) {
        Ok(code) => code,
        Err(RunError::User(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(RunError::Numerical(msg)) => {
            eprintln!("numerical consistency failure: {msg}");
            2
        }
    }
}

fn resolve_command(cli: Cli) -> Result<Command, String> {
    if let Some(path) = cli.config {
        if cli.command.is_some() {
            return Err("pass either --config or a sub-command, not both".into());
        }
        let text = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| format!("bad config JSON: {e}"))?;
        let argv = config_to_argv(&value)?;
        let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
        cli.command.ok_or("config holds no command".into())
    } else {
        cli.command.ok_or("a sub-command is required".into())
    }
}

/// Convert {"command": ..., "parameters": {...}} into an argv list and reuse
/// the clap definitions for validation.
fn config_to_argv(value: &serde_json::Value) -> Result<Vec<String>, String> {
    let command = value
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or("config needs a string `command`")?;
    let mut argv = vec!["dpk".to_string(), command.to_string()];
    if let Some(params) = value.get("parameters") {
        let map = params.as_object().ok_or("`parameters` must be an object")?;
        for (k, v) in map {
            if v.is_null() {
                continue;
            }
            let flag = format!("--{k}");
            match v {
                serde_json::Value::Array(items) => {
                    // repeated flag (e.g. chi)
                    for item in items {
                        argv.push(flag.clone());
                        argv.push(scalar_to_arg(item)?);
                    }
                }
                other => {
                    argv.push(flag);
                    argv.push(scalar_to_arg(other)?);
                }
            }
        }
    }
    Ok(argv)
}

fn scalar_to_arg(v: &serde_json::Value) -> Result<String, String> {
    match v {
        serde_json::Value::String(s) => Ok(s.clone()),
        serde_json::Value::Number(n) => Ok(n.to_string()),
        serde_json::Value::Bool(b) => Ok(b.to_string()),
        other => Err(format!("unsupported parameter value {other}")),
    }
}

enum RunError {
    User(String),
    Numerical(String),
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NumericalConsistency(_) | CoreError::Precision { .. } => {
                RunError::Numerical(e.to_string())
            }
            _ => RunError::User(e.to_string()),
        }
    }
}

impl From<String> for RunError {
    fn from(s: String) -> Self {
        RunError::User(s)
    }
}

fn dispatch(command: Command) -> Result<i32, RunError> {
    match command {
        Command::Kernel {
            kind,
            n,
            nu,
            ta,
            xa,
            tb,
            xb,
            output,
        } => {
            let k = kernel_kind(kind, n, nu)?;
            let v =
                kernels::kernel_eval(k, SpaceTimePoint::new(ta, xa), SpaceTimePoint::new(tb, xb))?;
            let table = Table {
                command: "kernel".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["ta", "xa", "tb", "xb", "value"],
                rows: vec![vec![ta, xa, tb, xb, v]],
                run_config: serde_json::json!({
                    "command": "kernel",
                    "parameters": {
                        "kind": format!("{kind:?}").to_lowercase(),
                        "n": n, "nu": nu, "ta": ta, "xa": xa, "tb": tb, "xb": xb,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Density { n, t, grid, output } => {
            let (a, b, count) = parse_grid(&grid)?;
            let mut rows = Vec::with_capacity(count);
            for i in 0..count {
                let x = a + (b - a) * i as f64 / (count - 1) as f64;
                rows.push(vec![x, kernels::density_rho_n(n, t, x)?]);
            }
            let table = Table {
                command: "density".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["x", "rho"],
                rows,
                run_config: serde_json::json!({
                    "command": "density",
                    "parameters": { "n": n, "t": t, "grid": grid }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Specfun {
            function,
            n,
            t,
            tprime,
            x,
            xprime,
            nu,
            terms,
            output,
        } => {
            use dpk_core::specfun as sf;
            let need = |o: Option<f64>, what: &str| -> Result<f64, RunError> {
                o.ok_or_else(|| RunError::User(format!("--fn {function} needs --{what}")))
            };
            let need_n = n.ok_or_else(|| RunError::User(format!("--fn {function} needs --n")));
            let v = match function.as_str() {
                "heat" => sf::heat_kernel(need(t, "t")?, need(x, "x")?, need(xprime, "xprime")?)?,
                "hermite" => sf::hermite_phi(need_n?, need(x, "x")?),
                "phi" => sf::phi_tx(need_n?, need(t, "t")?, need(x, "x")?)?,
                "hatphi" => sf::hatphi_tx(need_n?, need(t, "t")?, need(x, "x")?)?,
                "mehler" => sf::mehler_sum(
                    need(t, "t")?,
                    need(tprime, "tprime")?,
                    need(x, "x")?,
                    need(xprime, "xprime")?,
                    terms.unwrap_or(80),
                )?,
                "airy" => sf::airy_ai(need(x, "x")?),
                "airyp" => sf::airy_ai_prime(need(x, "x")?),
                "besselj" => sf::bessel_j(need(nu, "nu")?, need(x, "x")?)?,
                "besseli" => sf::bessel_i(need(nu, "nu")?, need(x, "x")?)?,
                other => return Err(RunError::User(format!("unknown function {other:?}"))),
            };
            let table = Table {
                command: "specfun".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["value"],
                rows: vec![vec![v]],
                run_config: serde_json::json!({
                    "command": "specfun",
                    "parameters": {
                        "fn": function, "n": n, "t": t, "tprime": tprime,
                        "x": x, "xprime": xprime, "nu": nu, "terms": terms,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Corr {
            kind,
            n,
            nu,
            blocks,
            output,
        } => {
            let k = kernel_kind(kind, n, nu)?;
            let parsed = parse_blocks(&blocks)?;
            let request = CorrelationRequest::new(k, parsed)?;
            let v = dpk_core::corr::multitime_correlation(&request)?;
            let table = Table {
                command: "corr".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["value"],
                rows: vec![vec![v]],
                run_config: serde_json::json!({
                    "command": "corr",
                    "parameters": {
                        "kind": format!("{kind:?}").to_lowercase(),
                        "n": n, "nu": nu, "blocks": blocks,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Fredholm {
            kind,
            n,
            nu,
            times,
            chi,
            grid_nodes,
            output,
        } => {
            let k = kernel_kind(kind, n, nu)?;
            let times_v = parse_list(&times)?;
            if chi.len() != times_v.len() {
                return Err(RunError::User(format!(
                    "need one --chi per time ({} times, {} chi)",
                    times_v.len(),
                    chi.len()
                )));
            }
            let chis: Vec<StepFunction> =
                chi.iter().map(|s| parse_chi(s)).collect::<Result<_, _>>()?;
            let mut intervals: Vec<(f64, f64)> = chis
                .iter()
                .flat_map(|c| c.intervals().iter().map(|&(a, b, _)| (a, b)))
                .collect();
            if intervals.is_empty() {
                intervals.push((-1.0, 1.0));
            }
            let grid = QuadratureGrid::gauss_legendre(&intervals, grid_nodes)?;
            let v = dpk_core::corr::fredholm_generating(
                k,
                &times_v,
                &chis,
                &grid,
                dpk_core::corr::DiscretizationMode::SymmetricSplit,
            )?;
            let table = Table {
                command: "fredholm".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["value"],
                rows: vec![vec![v]],
                run_config: serde_json::json!({
                    "command": "fredholm",
                    "parameters": {
                        "kind": format!("{kind:?}").to_lowercase(),
                        "n": n, "nu": nu, "times": times, "chi": chi,
                        "grid-nodes": grid_nodes,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Gap {
            kind,
            n,
            nu,
            t,
            interval,
            grid_nodes,
            output,
        } => {
            let k = kernel_kind(kind, n, nu)?;
            let (a, b) = interval
                .split_once(':')
                .ok_or_else(|| RunError::User("interval must be a:b".into()))?;
            let a: f64 = a
                .parse()
                .map_err(|e| RunError::User(format!("bad a: {e}")))?;
            let b: f64 = b
                .parse()
                .map_err(|e| RunError::User(format!("bad b: {e}")))?;
            let grid = QuadratureGrid::gauss_legendre(&[(a.min(b), b.max(a))], grid_nodes)?;
            let v = dpk_core::corr::gap_probability(k, t, (a, b), &grid)?;
            let table = Table {
                command: "gap".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["probability"],
                rows: vec![vec![v]],
                run_config: serde_json::json!({
                    "command": "gap",
                    "parameters": {
                        "kind": format!("{kind:?}").to_lowercase(),
                        "n": n, "nu": nu, "t": t, "interval": interval,
                        "grid-nodes": grid_nodes,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Simulate {
            scheme,
            n,
            times,
            dt,
            paths,
            seed,
            x0,
            output,
        } => {
            let times_v = parse_list(&times)?;
            let scheme_v = match scheme.as_str() {
                "matrix" => mcsim::Scheme::Matrix,
                "sde" => mcsim::Scheme::Sde,
                other => return Err(RunError::User(format!("unknown scheme {other:?}"))),
            };
            let config = mcsim::SimulationConfig {
                n,
                times: times_v,
                dt,
                paths,
                seed,
                scheme: scheme_v,
            };
            let ensemble = match scheme_v {
                mcsim::Scheme::Matrix => mcsim::matrix_bm_eigen(&config)?,
                mcsim::Scheme::Sde => {
                    let x0 = x0.ok_or_else(|| RunError::User("--scheme sde needs --x0".into()))?;
                    let x0 = Configuration::new(parse_list(&x0)?)?;
                    mcsim::dyson_sde(&config, &x0)?
                }
            };
            let payload = match output.output {
                OutputFormat::Csv => {
                    let mut buf = Vec::new();
                    ensemble_io::write_csv(&ensemble, &mut buf)
                        .map_err(|e| RunError::User(e.to_string()))?;
                    buf
                }
                OutputFormat::Binary => {
                    let mut buf = Vec::new();
                    ensemble_io::write_binary(&ensemble, &mut buf)
                        .map_err(|e| RunError::User(e.to_string()))?;
                    buf
                }
                _ => {
                    return Err(RunError::User(
                        "simulate outputs csv or binary ensembles".into(),
                    ))
                }
            };
            match &output.out {
                Some(path) => {
                    write_atomic(path, &payload).map_err(|e| RunError::User(e.to_string()))?
                }
                None => std::io::stdout()
                    .write_all(&payload)
                    .map_err(|e| RunError::User(e.to_string()))?,
            }
            Ok(0)
        }
        Command::Survival {
            t,
            x,
            method,
            dt,
            paths,
            seed,
            output,
        } => {
            let config = Configuration::new(parse_list(&x)?)?;
            let (est, seed_used) = match method.as_str() {
                "quadrature" => (
                    mcsim::survival(t, &config, mcsim::SurvivalMethod::Quadrature)?,
                    None,
                ),
                "montecarlo" => (
                    mcsim::survival(
                        t,
                        &config,
                        mcsim::SurvivalMethod::MonteCarlo { dt, paths, seed },
                    )?,
                    Some(seed),
                ),
                other => return Err(RunError::User(format!("unknown method {other:?}"))),
            };
            let table = Table {
                command: "survival".into(),
                seed: seed_used,
                tolerance: output.tolerance,
                columns: vec!["estimate", "stderr"],
                rows: vec![vec![est.value, est.stderr.unwrap_or(0.0)]],
                run_config: serde_json::json!({
                    "command": "survival",
                    "parameters": {
                        "t": t, "x": x, "method": method,
                        "dt": dt, "paths": paths, "seed": seed,
                    }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Limits {
            kind,
            n_list,
            probes,
            output,
        } => {
            let ns: Vec<usize> = n_list
                .split(',')
                .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad n: {e}")))
                .collect::<Result<_, _>>()?;
            if ns.is_empty() {
                return Err(RunError::User("--n-list must not be empty".into()));
            }
            let mut probe_list: Vec<[f64; 4]> = Vec::new();
            if !probes.trim().is_empty() {
                for p in probes.split(';') {
                    let f: Vec<&str> = p.split(':').collect();
                    if f.len() != 4 {
                        return Err(RunError::User(format!(
                            "probe must be sa:xa:sb:xb, got {p:?}"
                        )));
                    }
                    let mut probe = [0.0; 4];
                    for (slot, val) in probe.iter_mut().zip(&f) {
                        *slot = val
                            .parse()
                            .map_err(|e| RunError::User(format!("bad probe: {e}")))?;
                    }
                    probe_list.push(probe);
                }
            }
            let mut rows = Vec::new();
            for (pi, probe) in probe_list.iter().enumerate() {
                let [sa, xa, sb, xb] = *probe;
                let mut prev_err = f64::INFINITY;
                for &nn in &ns {
                    let (value, limit) = match kind.as_str() {
                        "bulk" => {
                            let v = kernels::bulk_scaled_kernel(nn, sa, xa, sb, xb)?;
                            let l = sine_limit(sa, xa, sb, xb);
                            (v, l)
                        }
                        "edge" => {
                            let v = kernels::edge_scaled_kernel(nn, sa, xa, sb, xb)?;
                            let l = airy_limit(sa, xa, sb, xb)?;
                            (v, l)
                        }
                        other => {
                            return Err(RunError::User(format!("unknown limits kind {other:?}")))
                        }
                    };
                    let err = (value - limit).abs();
                    let monotone = if err <= prev_err { 1.0 } else { 0.0 };
                    prev_err = err;
                    rows.push(vec![pi as f64, nn as f64, value, limit, err, monotone]);
                }
            }
            let table = Table {
                command: "limits".into(),
                seed: None,
                tolerance: output.tolerance,
                columns: vec!["probe", "n", "value", "limit", "error", "nonincreasing"],
                rows,
                run_config: serde_json::json!({
                    "command": "limits",
                    "parameters": { "kind": kind, "n-list": n_list, "probes": probes }
                }),
            };
            emit(&table, &output)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            let scale = match suite.as_str() {
                "fast" => Scale::Fast,
                "full" => Scale::Full,
                other => return Err(RunError::User(format!("unknown suite {other:?}"))),
            };
            let results = acceptance::run_all(scale);
            let mut failures = 0;
            for c in &results {
                println!("{}", c.line());
                if !c.passed {
                    failures += 1;
                }
            }
            println!(
                "{} of {} criteria passed ({suite} suite)",
                results.len() - failures,
                results.len()
            );
            Ok(if failures == 0 { 0 } else { 2 })
        }
    }
}

fn sine_limit(sa: f64, xa: f64, sb: f64, xb: f64) -> f64 {
    dpk_core::kernels::kernel_eval(
        KernelKind::Sine,
        SpaceTimePoint::new(sa, xa),
        SpaceTimePoint::new(sb, xb),
    )
    .expect("sine kernel is total")
}

fn airy_limit(sa: f64, xa: f64, sb: f64, xb: f64) -> Result<f64, RunError> {
    Ok(dpk_core::kernels::kernel_eval(
        KernelKind::Airy,
        SpaceTimePoint::new(sa, xa),
        SpaceTimePoint::new(sb, xb),
    )?)
}
