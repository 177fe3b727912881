use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use bpmr_channel::bounds::gap_old;
use bpmr_channel::estimator::{estimate_rate, DEFAULT_BLOCK_LEN, DEFAULT_REPLICATES};
use bpmr_channel::exact::{block_conditional_entropy, conditional_entropy_rate, exact_rate, output_entropy};
use bpmr_channel::{BoundSet, ChannelParams, InputKind, InputProcess, Probability};
use bpmr_cli::config::GridSpec;
use bpmr_cli::{
    parse_config, read_csv, render_plot, run_sweep, to_csv_string, verify, write_csv, Figure, Output, SweepConfig,
    SweepOverrides, SEED_ENV,
};
use clap::{Args, Parser, Subcommand};

/// Information-rate bounds and simulation for the bit-patterned media write
/// channel Y_i = X_{i - Z_i} xor W_i.
#[derive(Parser)]
#[command(name = "bpmr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form bounds at one parameter point.
    Bounds(PointArgs),
    /// Exact finite-block information rate by enumeration (n <= 22).
    Exact {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Monte Carlo estimate of the information rate.
    Estimate {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value_t = DEFAULT_BLOCK_LEN)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_REPLICATES)]
        replicates: usize,
        /// Master seed [default: $BPMR_SEED, else 0]
        #[arg(long, env = SEED_ENV, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep a parameter grid and write CSV (and optionally a figure).
    ///
    /// Defaults: p_grid 0:0.01:0.5, alpha_grid 0,0.05,0.1,0.15,0.2, process iud,
    /// n 100000, replicates 30, master_seed $BPMR_SEED or 0, outputs bounds,gap.
    /// Precedence: flags, then the config file, then $BPMR_SEED, then defaults.
    Sweep(SweepArgs),
    /// Render a figure from a sweep CSV.
    Plot {
        #[arg(long)]
        csv: PathBuf,
        /// fig1, fig2, fig3, custom or custom:<column>
        #[arg(long)]
        figure: Figure,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the invariant suite and print a pass/fail table.
    Verify {
        /// Smaller grids and sample sizes.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
struct PointArgs {
    /// State probability P(Z = 1).
    #[arg(long)]
    p: f64,
    /// Noise probability P(W = 1).
    #[arg(long)]
    alpha: f64,
    /// Markov-1 input flip probability; i.u.d. input when absent.
    #[arg(long)]
    beta: Option<f64>,
}

impl PointArgs {
    fn resolve(&self) -> Result<(ChannelParams, InputProcess)> {
        let params = ChannelParams::new(self.p, self.alpha)?;
        let process = match self.beta {
            Some(b) => InputProcess::markov1(b)?,
            None => InputProcess::Iud,
        };
        if self.p > 0.5 {
            eprintln!("warning: p = {} > 0.5; practical channels have small p", self.p);
        }
        if self.alpha > 0.5 {
            eprintln!("warning: alpha = {} > 0.5; practical channels have small alpha", self.alpha);
        }
        Ok((params, process))
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG destination for a figure of the results.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Figure to draw; inferred from a plot file named fig1/fig2/fig3.
    #[arg(long)]
    figure: Option<Figure>,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid as start:step:stop or a comma-separated list.
    #[arg(long)]
    p_grid: Option<GridSpec>,
    #[arg(long)]
    alpha_grid: Option<GridSpec>,
    #[arg(long)]
    beta_grid: Option<GridSpec>,
    /// iud or markov1
    #[arg(long)]
    process: Option<InputKind>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    replicates: Option<usize>,
    /// Comma-separated subset of bounds,estimate,exact,gap.
    #[arg(long, value_delimiter = ',')]
    outputs: Option<Vec<Output>>,
}

fn print_bounds(params: &ChannelParams, process: &InputProcess) {
    let set = BoundSet::compute(params, process);
    println!("p        {}", params.p());
    println!("alpha    {}", params.alpha());
    println!("input    {process}");
    if set.l0_from_l1 {
        println!("l0       {:.12} (no BSC bound for this input; repeats l1)", set.l0);
    } else {
        println!("l0       {:.12}", set.l0);
    }
    println!("l1       {:.12}", set.l1);
    println!("u0       {:.12}", set.u0);
    println!("u1       {:.12}", set.u1);
    println!("gap      {:.12}", set.gap);
    if let InputProcess::Iud = process {
        let old = gap_old(Probability::new(params.p()).expect("validated"));
        println!("gap_old  {old:.12}");
    }
}

fn sweep(args: SweepArgs) -> Result<()> {
    let mut base = SweepConfig::default();
    if let Ok(value) = std::env::var(SEED_ENV) {
        base.master_seed = value.parse().with_context(|| format!("{SEED_ENV}={value:?} is not a seed"))?;
    }
    let config = match &args.config {
        Some(path) => parse_config(path, base)?,
        None => base,
    };
    let config = config.with_overrides(&SweepOverrides {
        p_grid: args.p_grid,
        alpha_grid: args.alpha_grid,
        beta_grid: args.beta_grid,
        process: args.process,
        n: args.n,
        replicates: args.replicates,
        master_seed: args.seed,
        outputs: args.outputs,
    })?;
    for warning in config.warnings() {
        eprintln!("warning: {warning}");
    }
    let figure = match (&args.plot, args.figure) {
        (_, Some(f)) => Some(f),
        (Some(path), None) => {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
            match stem.parse::<Figure>() {
                Ok(f) => Some(f),
                Err(_) => bail!("cannot infer the figure from {}; pass --figure", path.display()),
            }
        }
        (None, None) => None,
    };

    let result = run_sweep(&config)?;
    match &args.out {
        Some(path) => write_csv(&result, path)?,
        None => std::io::stdout().write_all(to_csv_string(&result).as_bytes())?,
    }
    if let (Some(path), Some(figure)) = (&args.plot, figure) {
        render_plot(&result, &figure, path)?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Bounds(point) => {
            let (params, process) = point.resolve()?;
            print_bounds(&params, &process);
        }
        Command::Exact { point, n } => {
            let (params, process) = point.resolve()?;
            let joint = output_entropy(&params, &process, n)?;
            println!("n                         {n}");
            println!("H(Y^n)/n                  {:.12}", joint / n as f64);
            println!("H(Y^n|X^n)/n              {:.12}", block_conditional_entropy(&params, &process, n)? / n as f64);
            println!("H(Y_i|X_i-1,X_i)          {:.12}", conditional_entropy_rate(&params, &process));
            println!("I(X^n;Y^n)/n              {:.12}", exact_rate(&params, &process, n)?);
        }
        Command::Estimate {
            point,
            n,
            replicates,
            seed,
        } => {
            let (params, process) = point.resolve()?;
            let est = estimate_rate(&params, &process, n, replicates, seed)?;
            let set = BoundSet::compute(&params, &process);
            println!("rate        {:.6} +- {:.6} (1 s.e.)", est.rate, est.std_err);
            println!("H(Y)/n      {:.6}", est.entropy_rate);
            println!("bounds      [{:.6}, {:.6}]", set.l1, set.u1);
            println!("n           {}", est.n);
            println!("replicates  {}", est.replicates);
            println!("seed        {}", est.seed);
        }
        Command::Sweep(args) => sweep(args)?,
        Command::Plot { csv, figure, out } => {
            let result = read_csv(&csv)?;
            render_plot(&result, &figure, &out)?;
        }
        Command::Verify { quick } => {
            let outcomes = verify::run_checks(quick);
            print!("{}", verify::format_table(&outcomes));
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
