//! Command-line front end.
//!
//! Failures print one line, `error kind=<Kind> msg="<message>"`, on stderr.
//! Exit codes: 0 success, 1 computation error or failed verification,
//! 2 usage error.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::bendsolve::{group_from_bending, BendingAngles};
use crate::error::{Error, Result};
use crate::lab::acceptance::{run_all, DEFAULT_SEED};
use crate::lab::render::{render_limit_set, ImageSpec, Window};
use crate::lab::sweep::{
    default_theta_grid, diagonal_sweep, divergence_sweep, integer_log_grid, log_grid, sweep_theta,
    SweepRecord,
};
use crate::lab::table::{check_record, write_divergence_csv, write_minima_csv, write_sweep_csv};
use crate::minima::{kerckhoff_minimum, line_of_minima, Weights};
use crate::ptorus::{group_from_triple, Branch, TraceTriple};

/// Default criticality bound for `minimize` and `line`.
pub const DEFAULT_CRITICALITY_TOL: f64 = 1e-6;

/// `lo:hi:n`, `n` log-spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let num = |x: &str| x.parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let g = GridSpec {
            lo: num(lo)?,
            hi: num(hi)?,
            n: n.parse().map_err(|e| format!("{n:?}: {e}"))?,
        };
        if !(g.lo > 0.0 && g.hi >= g.lo && g.n >= 1) {
            return Err(format!("need 0 < lo <= hi and n >= 1, got {s:?}"));
        }
        Ok(g)
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        log_grid(self.lo, self.hi, self.n)
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "bendlab",
    version,
    about = "Bent punctured-torus groups: formulas, sweeps, minima and pictures"
)]
struct Cli {
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Largest residual accepted by the self-checks run before printing.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Log-spaced grid `lo:hi:n`.
    #[arg(long, global = true)]
    grid: Option<GridSpec>,
    /// Output file (CSV or PPM).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct AngleArgs {
    #[arg(long, allow_negative_numbers = true)]
    theta_alpha: f64,
    #[arg(long, allow_negative_numbers = true)]
    theta_beta: f64,
}

#[derive(Debug, Args)]
struct WeightArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Everything about one pair of bending angles, as a table.
    Solve(AngleArgs),
    /// θ-sweep with angles (aθ, bθ) to CSV (default grid 1e-3:1e-1:20).
    Sweep(WeightArgs),
    /// θ_β = θ_α^k sweep to CSV, with the slope fit on stderr.
    Diverge {
        #[arg(long)]
        k: f64,
    },
    /// Drifting-weight sweep θ_n = 1/n² to CSV (default grid 100:10000:30 over n).
    Diagonal(WeightArgs),
    /// Minimum of a·l_α + b·l_β.
    Minimize(WeightArgs),
    /// Minima for weights (a, t·b) over the grid of t (default 0.1:10:21).
    Line(WeightArgs),
    /// Limit-set picture (P6) of a bent group, or of a Fuchsian group with --trace-x/--trace-y.
    Render(RenderArgs),
    /// Run the acceptance suite.
    Verify,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[arg(long)]
    theta_alpha: Option<f64>,
    #[arg(long)]
    theta_beta: Option<f64>,
    #[arg(long, conflicts_with_all = ["theta_alpha", "theta_beta"])]
    trace_x: Option<f64>,
    #[arg(long, conflicts_with_all = ["theta_alpha", "theta_beta"])]
    trace_y: Option<f64>,
    #[arg(long, default_value_t = 512)]
    width: u32,
    #[arg(long, default_value_t = 512)]
    height: u32,
    #[arg(long, default_value_t = 12)]
    depth: u32,
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Half-width of the square window centred at 0.
    #[arg(long, default_value_t = 2.0)]
    half_width: f64,
}

fn csv_sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn solve(args: &AngleArgs, tol: Option<f64>, out: &mut dyn Write) -> Result<()> {
    let a = BendingAngles::new(args.theta_alpha, args.theta_beta)?;
    let w = Weights::new(a.theta_alpha, a.theta_beta)?;
    let min = kerckhoff_minimum(w)?;
    let r = SweepRecord::compute(w, 1.0, (min.l_alpha, min.l_beta))?;
    match tol {
        Some(t) => {
            let (p, b) = r.residuals()?;
            if !(p <= t && b <= t) {
                return Err(Error::InvariantViolated(format!(
                    "residuals {p:.3e}, {b:.3e} exceed {t:e}"
                )));
            }
        }
        None => check_record(&r)?,
    }
    let rows = [
        ("theta_alpha", r.theta_alpha),
        ("theta_beta", r.theta_beta),
        ("l_alpha_star", r.l_alpha_star),
        ("l_beta_star", r.l_beta_star),
        ("d", r.d),
        ("l_alpha_plus", r.l_alpha_star),
        ("l_beta_plus", r.l_beta_plus),
        ("l_alpha_minus", r.l_alpha_minus),
        ("l_beta_minus", r.l_beta_star),
        ("gap_alpha", r.gap_alpha),
        ("gap_beta", r.gap_beta),
        ("trace_x", r.x),
        ("trace_y", r.y),
        ("trace_z_re", r.re_z),
        ("trace_z_im", r.im_z),
    ];
    for (k, v) in rows {
        writeln!(out, "{k:<14} {v:.12}")?;
    }
    Ok(())
}

fn minimum_table(
    rows: &[(f64, f64, crate::minima::MinimumReport)],
    tol: f64,
    out: &mut dyn Write,
) -> Result<()> {
    writeln!(
        out,
        "{:>10} {:>10} {:>14} {:>14} {:>14} {:>10}",
        "a", "b", "l_alpha", "l_beta", "value", "critical"
    )?;
    for (a, b, m) in rows {
        if !(m.criticality <= tol) {
            return Err(Error::InvariantViolated(format!(
                "criticality {:.3e} at ({a}, {b}) exceeds {tol:e}",
                m.criticality
            )));
        }
        writeln!(
            out,
            "{a:>10.6} {b:>10.6} {:>14.9} {:>14.9} {:>14.9} {:>10.2e}",
            m.l_alpha, m.l_beta, m.value, m.criticality
        )?;
    }
    Ok(())
}

fn render_cmd(args: &RenderArgs, path: &Path, out: &mut dyn Write) -> Result<()> {
    let g = match (args.trace_x, args.trace_y) {
        (Some(x), Some(y)) => {
            let t =
                TraceTriple::from_xy(Complex64::new(x, 0.0), Complex64::new(y, 0.0), Branch::Plus);
            group_from_triple(&t)?
        }
        (None, None) => {
            let a = BendingAngles::new(
                args.theta_alpha.unwrap_or(std::f64::consts::FRAC_PI_4),
                args.theta_beta.unwrap_or(std::f64::consts::FRAC_PI_4),
            )?;
            group_from_bending(a)?
        }
        _ => {
            return Err(Error::InconsistentInputs(
                "--trace-x and --trace-y go together".into(),
            ))
        }
    };
    let spec = ImageSpec {
        width: args.width,
        height: args.height,
        window: Window::square(Complex64::new(0.0, 0.0), args.half_width),
        max_depth: args.depth,
        epsilon: args.epsilon,
    };
    let r = render_limit_set(&g, &spec, path)?;
    writeln!(
        out,
        "wrote {} ({} enumerated, {} in window)",
        path.display(),
        r.enumerated,
        r.points.len()
    )?;
    Ok(())
}

/// Returns `Ok(false)` when verification ran and something failed.
fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool> {
    let out_path = cli.out.as_deref();
    match &cli.command {
        Command::Solve(args) => solve(args, cli.tol, out)?,
        Command::Sweep(w) => {
            let grid = cli.grid.map_or_else(default_theta_grid, |g| g.points());
            let recs = sweep_theta(Weights::new(w.a, w.b)?, &grid)?;
            write_sweep_csv(csv_sink(out_path)?, &recs)?;
        }
        Command::Diverge { k } => {
            if !(*k > 1.0) {
                return Err(Error::InconsistentInputs(format!(
                    "k must exceed 1, got {k}"
                )));
            }
            let grid = cli.grid.map_or_else(default_theta_grid, |g| g.points());
            let s = divergence_sweep(&grid, *k)?;
            write_divergence_csv(csv_sink(out_path)?, &s.records)?;
            writeln!(
                err,
                "slope {:.6} (expected {:.6}) r2 {:.6} n {}; cosh d - 1 at smallest theta {:.3e}",
                s.fit.slope,
                1.0 - k,
                s.fit.r_squared,
                s.fit.n_points,
                s.cosh_d_minus_one_at_min
            )?;
        }
        Command::Diagonal(w) => {
            let g = cli.grid.unwrap_or(GridSpec {
                lo: 100.0,
                hi: 10_000.0,
                n: 30,
            });
            let ns = integer_log_grid(g.lo.round().max(1.0) as u64, g.hi.round() as u64, g.n);
            let recs = diagonal_sweep(Weights::new(w.a, w.b)?, &ns)?;
            write_sweep_csv(csv_sink(out_path)?, &recs)?;
        }
        Command::Minimize(w) => {
            let m = kerckhoff_minimum(Weights::new(w.a, w.b)?)?;
            let rows = [(w.a, w.b, m)];
            minimum_table(&rows, cli.tol.unwrap_or(DEFAULT_CRITICALITY_TOL), out)?;
            if let Some(p) = out_path {
                write_minima_csv(File::create(p)?, &rows)?;
            }
        }
        Command::Line(w) => {
            let ts = cli
                .grid
                .map_or_else(|| log_grid(0.1, 10.0, 21), |g| g.points());
            let ms = line_of_minima(Weights::new(w.a, w.b)?, &ts)?;
            let rows: Vec<_> = ts.iter().zip(ms).map(|(t, m)| (w.a, w.b * t, m)).collect();
            minimum_table(&rows, cli.tol.unwrap_or(DEFAULT_CRITICALITY_TOL), out)?;
            if let Some(p) = out_path {
                write_minima_csv(File::create(p)?, &rows)?;
            }
        }
        Command::Render(args) => {
            let path = out_path.unwrap_or(Path::new("limit_set.ppm"));
            render_cmd(args, path, out)?;
        }
        Command::Verify => {
            let results = run_all(cli.seed);
            for r in &results {
                writeln!(out, "{r}")?;
            }
            let failed = results.iter().filter(|r| !r.passed).count();
            writeln!(out, "{} passed, {failed} failed", results.len() - failed)?;
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn diagnostic(kind: &str, msg: &str) -> String {
    let flat = msg.split_whitespace().collect::<Vec<_>>().join(" ");
    format!("error kind={kind} msg={flat:?}")
}

/// Runs the CLI with explicit streams and returns the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let text = e.to_string();
                    let first = text
                        .lines()
                        .next()
                        .unwrap_or("")
                        .trim_start_matches("error: ");
                    let _ = writeln!(err, "{}", diagnostic("usage", first));
                    2
                }
            };
        }
    };
    match execute(&cli, out, err) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(err, "{}", diagnostic(e.kind(), &e.to_string()));
            1
        }
    }
}

/// Entry point for the binary: parses `argv` and uses the process streams.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(argv, &mut stdout.lock(), &mut stderr.lock())
}
