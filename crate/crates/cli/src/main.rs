//! `bcseq`: run Borel-Cantelli diagnostics on sequences from the command line.
//!
//! Exit status: 0 on success, 2 for configuration errors, 3 for runtime errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bcseq::radii::RadiiSpec;
use bcseq::report::{compare, report_csv, run, Criterion, ExperimentConfig, OutputFormat, Report, Space};
use bcseq::sequences::{generate, io, SequenceSpec};
use bcseq::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(name = "bcseq", version, about = "Finite Borel-Cantelli diagnostics for sequences mod 1")]
struct Cli {
    /// Experiment configuration (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Seed for randomised sampling; overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads. Results do not depend on it.
    #[arg(long, global = true, env = "BCSEQ_THREADS")]
    threads: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Clone, Default)]
struct Experiment {
    /// Sequence, e.g. `golden`, `kronecker:liouville:10:5`, `sqrt`, `lnln`, `farey`, `file:PATH` or JSON.
    #[arg(long)]
    sequence: Option<String>,
    /// Grid override `KEY=VALUE` with a JSON value, e.g. `n_max=100000` or `A=[1000,10000]`.
    #[arg(long = "grid", value_name = "KEY=VALUE")]
    grid: Vec<String>,
    /// Radii, e.g. `harmonic`, `power:2`, `blocks:10,100,1000`.
    #[arg(long)]
    radii: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write the first N points of a sequence.
    Generate {
        #[arg(long)]
        sequence: String,
        #[arg(long)]
        n: usize,
    },
    /// Coverage lower bound over N and window grids.
    Coverage(Experiment),
    /// Windows and scales where coverage falls below eps times the window length.
    Necessary(Experiment),
    /// Greedy separated fractions of index blocks.
    Separation(Experiment),
    /// Fraction of small circle gaps.
    Gaps(Experiment),
    /// Close-pair counts.
    Pairs(Experiment),
    /// Zero set of the local density estimate f_A.
    Fa(Experiment),
    /// n times the mean displacement of T^n, for rotations and interval exchanges.
    Rigidity(Experiment),
    /// n d(x_n, x_(n+1)) and its decade suprema.
    Smallsep(Experiment),
    /// Scaled distances to random targets.
    Dichotomy(Experiment),
    /// Measure of tail unions of balls for given radii.
    Limsup(Experiment),
    /// Coverage on the middle-thirds Cantor set.
    Cantor(Experiment),
    /// Run every criterion listed in the configuration.
    Report(Experiment),
    /// Compare two or more saved JSON reports.
    Compare {
        #[arg(required = true, num_args = 2..)]
        reports: Vec<PathBuf>,
    },
}

fn config_err(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.to_string(), message: message.into() }
}

fn build_config(cli: &Cli, exp: &Experiment, criteria: Option<Vec<Criterion>>, space: Space) -> Result<ExperimentConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| config_err("config", format!("cannot read {}: {e}", path.display())))?;
            ExperimentConfig::parse(&text)?
        }
        None => {
            let sequence = match (&exp.sequence, space) {
                // replaced by the parsed --sequence below
                (Some(_), _) => SequenceSpec::Sqrt,
                (None, Space::Cantor) => SequenceSpec::CantorEndpoints,
                (None, Space::Circle) => return Err(config_err("sequence", "pass --sequence or --config")),
            };
            let mut cfg = ExperimentConfig::new(sequence, Vec::new());
            if space == Space::Cantor {
                cfg.grids.n_min = 16;
                cfg.grids.n_max = 16_384;
                cfg.grids.n_ratio = 2.0;
            }
            cfg
        }
    };
    if let Some(s) = &exp.sequence {
        cfg.sequence = s.parse().map_err(|e: Error| config_err("sequence", e.to_string()))?;
    }
    if let Some(c) = criteria {
        cfg.criteria = c;
        cfg.space = space;
    }
    for item in &exp.grid {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| config_err("grids", format!("expected KEY=VALUE, got `{item}`")))?;
        cfg.set_grid(k.trim(), v.trim())?;
    }
    if let Some(r) = &exp.radii {
        cfg.radii = Some(r.parse::<RadiiSpec>().map_err(|e| config_err("radii", e.to_string()))?);
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run_experiment(cli: &Cli, cfg: &ExperimentConfig) -> Result<(), Error> {
    let report = run(cfg)?;
    let format = match (cli.format, &cfg.output) {
        (Some(Format::Csv), _) => OutputFormat::Csv,
        (Some(Format::Json), _) => OutputFormat::Json,
        (None, Some(o)) => o.format,
        (None, None) => OutputFormat::Json,
    };
    let text = match format {
        OutputFormat::Json => report.to_json()? + "\n",
        OutputFormat::Csv => report_csv(&report),
    };
    let path = cli.out.clone().or_else(|| cfg.output.as_ref().map(|o| PathBuf::from(&o.path)));
    emit(path.as_deref(), &text)?;
    for r in &report.results {
        let verdict = r.verdict.map_or("-".to_string(), |v| v.to_string());
        eprintln!("{}: {} [{}]", r.criterion, verdict, r.theorem_tag);
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), Error> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(config_err("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| config_err("threads", e.to_string()))?;
    }
    let single = |c: Criterion, exp: &Experiment| -> Result<(), Error> {
        let cfg = build_config(cli, exp, Some(vec![c]), Space::Circle)?;
        run_experiment(cli, &cfg)
    };
    match &cli.command {
        Command::Generate { sequence, n } => {
            let spec: SequenceSpec = sequence.parse().map_err(|e: Error| config_err("sequence", e.to_string()))?;
            if *n == 0 {
                return Err(config_err("n", "must be at least 1"));
            }
            let points = generate(&spec, *n)?;
            match &cli.out {
                Some(p) => io::write_points(p, &points)?,
                None => {
                    let mut text = String::with_capacity(points.len() * 20);
                    for p in &points {
                        text.push_str(&format!("{}\n", p.value()));
                    }
                    emit(None, &text)?;
                }
            }
            Ok(())
        }
        Command::Coverage(e) => single(Criterion::Coverage, e),
        Command::Necessary(e) => single(Criterion::Necessary, e),
        Command::Separation(e) => single(Criterion::Separation, e),
        Command::Gaps(e) => single(Criterion::Gaps, e),
        Command::Pairs(e) => single(Criterion::Pairs, e),
        Command::Fa(e) => single(Criterion::Fa, e),
        Command::Rigidity(e) => single(Criterion::Rigidity, e),
        Command::Smallsep(e) => single(Criterion::Smallsep, e),
        Command::Dichotomy(e) => single(Criterion::Dichotomy, e),
        Command::Limsup(e) => single(Criterion::Limsup, e),
        Command::Cantor(e) => {
            let cfg = build_config(cli, e, Some(vec![Criterion::Coverage]), Space::Cantor)?;
            run_experiment(cli, &cfg)
        }
        Command::Report(e) => {
            if cli.config.is_none() {
                return Err(config_err("config", "report needs --config"));
            }
            let cfg = build_config(cli, e, None, Space::Circle)?;
            run_experiment(cli, &cfg)
        }
        Command::Compare { reports } => {
            let loaded = reports
                .iter()
                .map(|p| Report::from_json(&fs::read_to_string(p)?))
                .collect::<Result<Vec<_>, Error>>()?;
            let cmp = compare(&loaded)?;
            let text = match cli.format {
                Some(Format::Json) => serde_json::to_string_pretty(&cmp)? + "\n",
                _ => cmp.to_table(),
            };
            emit(cli.out.as_deref(), &text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_config() { EXIT_CONFIG } else { EXIT_RUNTIME })
        }
    }
}
