//! Command-line harness: convergence sweeps, cost comparisons and single
//! trajectory dumps for the spring-chain benchmark.

use clap::{Args, Parser, Subcommand};
use mrrk::config::{parse_config, ErrorNorm, Overrides, RunMode, StudyConfig};
use mrrk::multirate::{self, MultirateConfig};
use mrrk::problems;
use mrrk::study;
use mrrk::Error;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "mrrk",
    version,
    about = "Spline-coupled multirate Runge-Kutta integrator for fast/slow ODE systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a step-size sweep and emit convergence CSV and plot data.
    Converge(CommonOpts),
    /// Compare evaluation costs of the multirate and singlerate schemes.
    Cost(CommonOpts),
    /// Run a single integration at Hmax and dump the trajectory.
    Run(CommonOpts),
}

#[derive(Args)]
struct CommonOpts {
    /// Config file (`key = value` lines, `#` comments); flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of masses.
    #[arg(long)]
    n: Option<usize>,
    /// Mass of body 1.
    #[arg(long)]
    m1: Option<f64>,
    /// Mass of bodies 2..n.
    #[arg(long)]
    m2: Option<f64>,
    /// Stiff spring constant.
    #[arg(long)]
    k1: Option<f64>,
    /// Soft spring constant.
    #[arg(long)]
    k2: Option<f64>,
    /// Micro steps per macro step.
    #[arg(long, alias = "m")]
    mrfactor: Option<usize>,
    /// Largest macro step of the sweep.
    #[arg(long = "Hmax")]
    h_max: Option<f64>,
    /// How many times Hmax is halved.
    #[arg(long)]
    halvings: Option<usize>,
    /// End of the integration interval [0, tend].
    #[arg(long = "tend")]
    t_end: Option<f64>,
    /// Error norm: euclid or max.
    #[arg(long, value_parser = parse_norm_flag)]
    norm: Option<ErrorNorm>,
    /// Scheme selection: multirate, singlerate or both.
    #[arg(long, value_parser = parse_mode_flag)]
    mode: Option<RunMode>,
    /// Output directory for CSV and plot files.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_norm_flag(text: &str) -> Result<ErrorNorm, String> {
    match text {
        "euclid" | "max" => Ok(ErrorNorm::parse(text).unwrap()),
        _ => Err(format!("unknown norm '{text}' (expected euclid or max)")),
    }
}

fn parse_mode_flag(text: &str) -> Result<RunMode, String> {
    RunMode::parse(text)
        .ok_or_else(|| format!("unknown mode '{text}' (expected multirate, singlerate or both)"))
}

impl CommonOpts {
    fn overrides(&self) -> Overrides {
        Overrides {
            n: self.n,
            m1: self.m1,
            m2: self.m2,
            k1: self.k1,
            k2: self.k2,
            mrfactor: self.mrfactor,
            h_max: self.h_max,
            halvings: self.halvings,
            t_end: self.t_end,
            norm: self.norm,
            mode: self.mode,
            out_dir: self.out.clone(),
        }
    }

    fn load(&self) -> Result<StudyConfig, Error> {
        let text = match &self.config {
            Some(path) => fs::read_to_string(path).map_err(|e| Error::Config {
                key: "config".into(),
                reason: format!("{}: {e}", path.display()),
            })?,
            None => String::new(),
        };
        parse_config(&text, &self.overrides())
    }
}

fn ensure_out_dir(cfg: &StudyConfig) -> Result<(), Error> {
    fs::create_dir_all(&cfg.out_dir).map_err(|source| Error::Io {
        path: cfg.out_dir.clone(),
        source,
    })
}

fn converge(cfg: &StudyConfig) -> Result<(), Error> {
    ensure_out_dir(cfg)?;
    let output = study::run_study(cfg)?;
    for report in output.reports() {
        let csv_path = cfg
            .out_dir
            .join(format!("convergence_{}.csv", report.scheme.as_str()));
        study::emit_csv(report, &csv_path)?;
        let plots = study::emit_plot_data(report, &cfg.out_dir)?;
        println!("{report}");
        println!("wrote {}", csv_path.display());
        for p in plots {
            println!("wrote {}", p.display());
        }
        println!();
    }
    Ok(())
}

fn cost(cfg: &StudyConfig) -> Result<(), Error> {
    ensure_out_dir(cfg)?;
    let report = study::compare_costs(cfg)?;
    println!(
        "chain n = {}, m = {}, H = {} (h = {})",
        cfg.chain.n,
        report.multirate_factor,
        cfg.h_max(),
        cfg.h_max() / report.multirate_factor as f64
    );
    println!("{report}");
    let path = cfg.out_dir.join("cost.csv");
    study::emit_cost_csv(&report, &path)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cfg: &StudyConfig) -> Result<(), Error> {
    ensure_out_dir(cfg)?;
    let tableau = cfg.tableau()?;
    let ivp = problems::build_chain_ivp(&cfg.chain, 0.0, cfg.t_end)?;
    let h_macro = cfg.h_max();

    if cfg.mode.includes_multirate() {
        let mr_cfg = MultirateConfig::new(tableau.clone(), h_macro, cfg.mrfactor);
        let run = multirate::integrate(&ivp, &mr_cfg)?;
        let mut xs = Vec::with_capacity(run.macro_times.len());
        let mut vs = Vec::with_capacity(run.macro_times.len());
        for (ys, yf) in run.macro_slow.iter().zip(&run.macro_fast) {
            let (x, v) = problems::physical_from_blocks(ys, yf);
            xs.push(x);
            vs.push(v);
        }
        let path = cfg.out_dir.join("trajectory_multirate.csv");
        study::emit_trajectory_csv(&path, &run.macro_times, &xs, &vs)?;
        let (t, _, _) = run.final_state();
        println!(
            "multirate: H = {h_macro}, m = {}, {} macro steps to t = {t}, {} scalar evaluations",
            cfg.mrfactor,
            run.macro_times.len() - 1,
            run.totals.stage.scalar_total
        );
        println!("wrote {}", path.display());
    }
    if cfg.mode.includes_singlerate() {
        let h = h_macro / cfg.mrfactor as f64;
        let run = multirate::integrate_singlerate(&ivp, &tableau, h)?;
        let mut times = Vec::new();
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (k, (t, y)) in run.times.iter().zip(&run.states).enumerate() {
            if k % cfg.mrfactor != 0 {
                continue;
            }
            let (ys, yf) = ivp.split(y)?;
            let (x, v) = problems::physical_from_blocks(ys, yf);
            times.push(*t);
            xs.push(x);
            vs.push(v);
        }
        let path = cfg.out_dir.join("trajectory_singlerate.csv");
        study::emit_trajectory_csv(&path, &times, &xs, &vs)?;
        println!(
            "singlerate: h = {h}, {} steps, {} scalar evaluations",
            run.times.len() - 1,
            run.totals.scalar_total
        );
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version displays are not errors.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };

    let outcome = match &cli.command {
        Command::Converge(opts) => opts.load().and_then(|cfg| converge(&cfg)),
        Command::Cost(opts) => opts.load().and_then(|cfg| {
            if !matches!(cfg.mode, RunMode::Both) && opts.mode.is_some() {
                return Err(Error::Config {
                    key: "mode".into(),
                    reason: "cost comparison needs both schemes; drop --mode or pass both".into(),
                });
            }
            cost(&cfg)
        }),
        Command::Run(opts) => opts.load().and_then(|cfg| run(&cfg)),
    };

    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
