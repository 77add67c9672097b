use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use selfpolar::commands::{cmd_analyze, cmd_catalog, cmd_generate, cmd_verify, GenerateOptions};
use selfpolar::flow::FlowConfig;
use selfpolar::ToleranceConfig;

/// Face lattices, flag-vector checks and diameter flows for 4-polytopes
/// inscribed in the unit 3-sphere.
///
/// Exit codes: 0 all checks pass, 1 a check failed, 2 input or flag error.
#[derive(Parser)]
#[command(name = "selfpolar", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse one point file: f-vector, polygon census, polarity, diameter
    /// graph and the g2 / Kalai / Stanley / e(G) >= 3f0-5 checks.
    Analyze {
        path: PathBuf,
        /// Print the JSON report instead of the summary table.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this file.
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Run the checks on point files; directories are expanded one level.
    Verify {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[command(flatten)]
        tol: ToleranceArgs,
    },
    /// Generate configurations by diameter descent and classify them.
    Generate(GenerateArgs),
    /// Print a catalog polytope as a point file (simplex, cross, hypercube,
    /// cell24); lists the names when none is given.
    Catalog {
        name: Option<String>,
        /// Write to this file instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct ToleranceArgs {
    /// Unit-norm slack and minimum point separation.
    #[arg(long, default_value_t = ToleranceConfig::exact().eps_unit)]
    eps_unit: f64,
    /// Coplanarity and incidence slack.
    #[arg(long, default_value_t = ToleranceConfig::exact().eps_geom)]
    eps_geom: f64,
    /// Absolute Euclidean slack for maximal-distance pairs.
    #[arg(long, default_value_t = ToleranceConfig::exact().eps_diam)]
    eps_diam: f64,
    /// Residual allowed in P* = -cP.
    #[arg(long, default_value_t = ToleranceConfig::exact().eps_polar)]
    eps_polar: f64,
}

impl From<ToleranceArgs> for ToleranceConfig {
    fn from(a: ToleranceArgs) -> Self {
        ToleranceConfig {
            eps_unit: a.eps_unit,
            eps_geom: a.eps_geom,
            eps_diam: a.eps_diam,
            eps_polar: a.eps_polar,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of points (mutually exclusive with --n-range).
    #[arg(long, conflicts_with = "n_range")]
    n: Option<usize>,
    /// Inclusive range of point counts.
    #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
    n_range: Option<Vec<usize>>,
    /// Trials per point count.
    #[arg(long)]
    trials: usize,
    /// Master seed; every trial seed derives from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV output path.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    /// Optional static HTML rendering of the table.
    #[arg(long, value_name = "PATH")]
    html: Option<PathBuf>,
    /// Initial smoothing parameter.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).beta0)]
    beta0: f64,
    /// Final smoothing parameter.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).beta_max)]
    beta_max: f64,
    /// Factor applied to beta after each window.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).beta_growth)]
    beta_growth: f64,
    /// Iterations per beta level.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).window)]
    window: usize,
    /// Annealing step numerator (step size is step / beta).
    #[arg(long, default_value_t = FlowConfig::new(5, 0).step)]
    step: f64,
    /// Iteration cap of each polish phase.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).max_iters)]
    max_iters: usize,
    /// Subgradient norm below which a run counts as converged.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).grad_tol)]
    grad_tol: f64,
    /// Euclidean radius below which points coalesce.
    #[arg(long, default_value_t = FlowConfig::new(5, 0).collapse_margin)]
    collapse_margin: f64,
    /// Unit-norm slack and minimum point separation.
    #[arg(long, default_value_t = ToleranceConfig::flow().eps_unit)]
    eps_unit: f64,
    /// Coplanarity and incidence slack.
    #[arg(long, default_value_t = ToleranceConfig::flow().eps_geom)]
    eps_geom: f64,
    /// Absolute Euclidean slack for maximal-distance pairs.
    #[arg(long, default_value_t = ToleranceConfig::flow().eps_diam)]
    eps_diam: f64,
    /// Residual allowed in P* = -cP.
    #[arg(long, default_value_t = ToleranceConfig::flow().eps_polar)]
    eps_polar: f64,
}

impl GenerateArgs {
    fn options(&self) -> Result<GenerateOptions, String> {
        let n_list = match (self.n, &self.n_range) {
            (Some(n), None) => vec![n],
            (None, Some(r)) if r[0] <= r[1] => (r[0]..=r[1]).collect(),
            (None, Some(r)) => return Err(format!("empty range {}..={}", r[0], r[1])),
            _ => return Err("one of --n or --n-range is required".to_string()),
        };
        let flow = FlowConfig {
            beta0: self.beta0,
            beta_max: self.beta_max,
            beta_growth: self.beta_growth,
            window: self.window,
            step: self.step,
            max_iters: self.max_iters,
            grad_tol: self.grad_tol,
            collapse_margin: self.collapse_margin,
            ..FlowConfig::new(n_list[0], self.seed)
        };
        Ok(GenerateOptions {
            n_list,
            trials: self.trials,
            seed: self.seed,
            out: self.out.clone(),
            html: self.html.clone(),
            flow,
            tol: ToleranceConfig {
                eps_unit: self.eps_unit,
                eps_geom: self.eps_geom,
                eps_diam: self.eps_diam,
                eps_polar: self.eps_polar,
            },
        })
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = match cli.command {
        Command::Analyze { path, json, report, tol } => {
            cmd_analyze(&path, &tol.into(), json, report.as_deref(), &mut out, &mut err)
        }
        Command::Verify { paths, tol } => cmd_verify(&paths, &tol.into(), &mut out, &mut err),
        Command::Generate(args) => match args.options() {
            Ok(opts) => cmd_generate(&opts, &mut out, &mut err),
            Err(msg) => {
                use std::io::Write;
                let _ = writeln!(err, "error: {msg}");
                2
            }
        },
        Command::Catalog { name, out: dest } => {
            cmd_catalog(name.as_deref(), dest.as_deref(), &mut out, &mut err)
        }
    };
    ExitCode::from(code as u8)
}
