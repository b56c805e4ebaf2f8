use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use bcibench::dsp::Paradigm;
use bcibench::stats::StatsOptions;
use bcibench::synth::{generate, SynthSpec};
use bcibench_cli::report::{reference_markdown, summary_csv, summary_markdown};
use bcibench_cli::stats_cmd::read_results;
use bcibench_cli::{run, save_bundle, stats_command, BenchmarkConfig, CliError, EpochBundle};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "bench", version, about = "EEG BCI pipeline benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParadigmArg {
    Mi,
    Erp,
    Ssvep,
}

impl From<ParadigmArg> for Paradigm {
    fn from(p: ParadigmArg) -> Self {
        match p {
            ParadigmArg::Mi => Paradigm::Mi,
            ParadigmArg::Erp => Paradigm::Erp,
            ParadigmArg::Ssvep => Paradigm::Ssvep,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's output_dir.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate a synthetic dataset as an epoch bundle.
    Synth {
        #[arg(long, value_enum)]
        paradigm: ParadigmArg,
        /// JSON synthetic spec; its paradigm field is overridden.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare two pipelines across datasets (A better than B).
    Stats {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        compare: Vec<String>,
        #[arg(long, default_value_t = 10_000)]
        n_mc: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Summary table and rank histogram of a results file.
    Report {
        #[arg(long)]
        results: PathBuf,
        #[arg(long, value_enum, default_value = "md")]
        format: Format,
        /// Append the published tables, marked as reference.
        #[arg(long)]
        reference: bool,
    },
}

fn cmd_run(config: &Path, out: Option<PathBuf>, jobs: Option<usize>, seed: Option<u64>) -> anyhow::Result<()> {
    let mut cfg = BenchmarkConfig::from_file(config).with_context(|| format!("loading {}", config.display()))?;
    if let Some(j) = jobs {
        cfg.jobs = j;
    }
    if seed.is_some() {
        cfg.seed = seed;
    }
    let base = config.parent().unwrap_or(Path::new("."));
    let out = match out.or_else(|| cfg.output_dir.as_ref().map(|d| base.join(d))) {
        Some(o) => o,
        None => bail!("no output directory: pass --out or set output_dir"),
    };
    match run(&cfg, base, &out) {
        Ok(r) => {
            eprintln!(
                "{} rows, {} issues, {} comparisons written to {}",
                r.rows.len(),
                r.issues.len(),
                r.stats.comparisons.len(),
                out.display()
            );
            Ok(())
        }
        Err(e @ CliError::AllUnitsFailed(_)) => Err(e).context(format!("see {}", out.join("errors.json").display())),
        Err(e) => Err(e.into()),
    }
}

fn cmd_synth(paradigm: Paradigm, spec: Option<PathBuf>, out: &Path) -> anyhow::Result<()> {
    let mut spec: SynthSpec = match spec {
        Some(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => SynthSpec::default(),
    };
    spec.paradigm = paradigm;
    let ds = generate(&spec)?.to_dataset()?;
    save_bundle(out, &EpochBundle::from_dataset(&ds)?)?;
    eprintln!("wrote {} to {}", ds.id, out.display());
    Ok(())
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out, jobs, seed } => cmd_run(&config, out, jobs, seed),
        Command::Synth { paradigm, spec, out } => cmd_synth(paradigm.into(), spec, &out),
        Command::Stats {
            results,
            compare,
            n_mc,
            seed,
        } => {
            let opts = StatsOptions {
                n_mc,
                seed,
                ..StatsOptions::default()
            };
            stats_command(&results, &compare[0], &compare[1], &opts)
                .map_err(anyhow::Error::from)
                .and_then(|r| emit(&format!("{}\n", serde_json::to_string_pretty(&r)?)))
        }
        Command::Report {
            results,
            format,
            reference,
        } => read_results(&results)
            .and_then(|rows| match format {
                Format::Md => summary_markdown(&rows),
                Format::Csv => summary_csv(&rows),
            })
            .map_err(anyhow::Error::from)
            .and_then(|mut s| {
                if reference {
                    s.push('\n');
                    s.push_str(&reference_markdown());
                }
                emit(&s)
            }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
