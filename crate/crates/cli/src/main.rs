use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tourbound::gb::{bound_for_target, iterate_bound};
use tourbound::solver::{
    bench, emit_json, emit_report, max_tour, run_itgbc, summary_table, IterationSpec, ReportFormat, BENCH_PRESET,
};
use tourbound::{Error, GbParams, MatchingMode, OptimaRegistry, Rounding, SearchConfig, SolveConfig, TspInstance};

#[derive(Parser)]
#[command(name = "tourbound", version, about = "Christofides + k-opt TSP solver with Generalized-Beta bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one TSPLIB instance and write a run report.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Best-known optima, `name value` per line.
        #[arg(long)]
        optima: Option<PathBuf>,
    },
    /// Evaluate the truncation bound for given shapes and support.
    Bound {
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, allow_negative_numbers = true)]
        lower: f64,
        #[arg(long, allow_negative_numbers = true)]
        upper: f64,
        #[command(flatten)]
        k: KSpec,
    },
    /// Longest tour found via the max-TSP transform.
    Maxtsp {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = ["nint", "exact"], default_value = "nint")]
        rounding: String,
    },
    /// Solve every instance in a directory and print a summary table.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        optima: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
        /// Restrict to the preset list of large TSPLIB instances.
        #[arg(long)]
        preset: bool,
        /// Write the full JSON outcome here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave wall-clock timings out of the table and JSON.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Args)]
#[group(multiple = false)]
struct KSpec {
    /// Number of improvement iterations K.
    #[arg(long)]
    iterations: Option<usize>,
    /// Run until the closed-form ratio reaches this value.
    #[arg(long)]
    target_ratio: Option<f64>,
}

impl KSpec {
    fn spec(&self) -> IterationSpec {
        match (self.iterations, self.target_ratio) {
            (_, Some(r)) => IterationSpec::TargetRatio(r),
            (Some(k), None) => IterationSpec::Count(k),
            (None, None) => IterationSpec::Count(1),
        }
    }
}

#[derive(Args)]
struct Common {
    #[command(flatten)]
    k: KSpec,
    /// Local search order.
    #[arg(long = "k", value_parser = clap::value_parser!(u8).range(2..=3), default_value_t = 2)]
    level: u8,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_parser = ["exact", "greedy"], default_value = "exact")]
    matching: String,
    #[arg(long, value_parser = ["nint", "exact"], default_value = "nint")]
    rounding: String,
    /// Local-search samples for the shape fit.
    #[arg(long, default_value_t = tourbound::solver::DEFAULT_SAMPLE_COUNT)]
    samples: usize,
    /// Candidate neighbors per city.
    #[arg(long, default_value_t = tourbound::kopt::DEFAULT_NEIGHBOR_COUNT)]
    neighbors: usize,
}

impl Common {
    fn config(&self) -> Result<SolveConfig, Error> {
        let cfg = SolveConfig {
            search: SearchConfig {
                level: self.level,
                neighbor_count: self.neighbors,
                seed: self.seed,
                ..SearchConfig::default()
            },
            iterations: self.k.spec(),
            matching: self.matching.parse::<MatchingMode>()?,
            rounding: self.rounding.parse::<Rounding>()?,
            sample_count: self.samples,
            seed: self.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numeric(_) | Error::Fit(_) => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

fn write_out(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_registry(p: Option<&Path>) -> Result<OptimaRegistry, Error> {
    p.map(OptimaRegistry::from_path).transpose().map(Option::unwrap_or_default)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Solve { file, common, format, out, optima } => {
            let cfg = common.config()?;
            let registry = load_registry(optima.as_deref())?;
            let inst = TspInstance::from_path(&file)?;
            let report = run_itgbc(&inst, &cfg, Some(&registry))?;
            let text = emit_report(&report, format.parse::<ReportFormat>()?)?;
            write_out(out.as_deref(), &text)?;
            // A target ratio needs a fitted shape to choose K.
            if let (IterationSpec::TargetRatio(_), Some(why)) = (cfg.iterations, &report.fit_error) {
                eprintln!("warning: bound unavailable, ran K = 1: {why}");
                return Ok(3);
            }
            Ok(0)
        }
        Command::Bound { alpha, beta, lower, upper, k } => {
            let p = GbParams::new(alpha, beta, lower, upper)?;
            let report = match k.spec() {
                IterationSpec::Count(k) => iterate_bound(&p, k)?,
                IterationSpec::TargetRatio(r) => bound_for_target(&p, r)?,
            };
            if !report.shape_precondition_met {
                eprintln!("warning: the bound assumes alpha > 1 and beta > 1");
            }
            write_out(None, &emit_json(&report)?)?;
            Ok(0)
        }
        Command::Maxtsp { file, seed, rounding } => {
            let inst = TspInstance::from_path(&file)?;
            let cfg = SolveConfig { seed, rounding: rounding.parse()?, ..SolveConfig::default() };
            write_out(None, &emit_json(&max_tour(&inst, &cfg)?)?)?;
            Ok(0)
        }
        Command::Bench { dir, optima, common, preset, out, no_timings } => {
            let cfg = common.config()?;
            let registry = load_registry(optima.as_deref())?;
            let only = preset.then_some(&BENCH_PRESET[..]);
            let outcome = bench(&dir, &registry, &cfg, only)?;
            print!("{}", summary_table(&outcome.summary, !no_timings));
            for s in &outcome.skipped {
                eprintln!("skipped {}: {}", s.file, s.reason);
            }
            if let Some(p) = out {
                std::fs::write(&p, outcome.to_json(!no_timings)?).map_err(|e| Error::io(&p, e))?;
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
