//! `dyncolor` — generate update streams, run the coloring engine over them,
//! sweep parameters, and verify streams against the naive baseline.
//!
//! Exit status: 0 on success, 1 when `--strict` (or `verify`) finds
//! violations, 2 on bad input.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dyncolor::workload::{
    bench, emit_report, emit_table, generate, parse_stream, run, write_stream, AuditPolicy, ReportFormat, RunOptions,
    StreamHeader, StreamModel, SweepCell, WorkloadError,
};
use dyncolor::UpdateEvent;

#[derive(Parser)]
#[command(name = "dyncolor", version, about = "Fully dynamic (Δ+1)-coloring workloads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated update stream.
    Gen {
        #[command(flatten)]
        stream: GenArgs,
        /// Output file; stdout if omitted.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run the engine over a stream file, or over a generated stream.
    Run {
        /// Stream file (`-` for stdin). Omit to generate from --n/--delta/--updates/--model.
        input: Option<PathBuf>,
        #[command(flatten)]
        gen: OptGenArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Sweep (n, Δ, seed) combinations in parallel.
    Bench {
        /// Comma-separated vertex counts.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Comma-separated degree caps.
        #[arg(long, value_delimiter = ',', default_value = "10")]
        delta: Vec<u32>,
        /// Events per run; defaults to 200·n.
        #[arg(long)]
        updates: Option<usize>,
        #[arg(long, default_value = "churn:0.6")]
        model: StreamModel,
        /// Comma-separated seeds.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        seed: Vec<u64>,
        #[arg(long, default_value = "off")]
        audit: AuditPolicy,
        #[arg(long, default_value = "csv")]
        report: ReportFormat,
        #[arg(long)]
        strict: bool,
    },
    /// Replay a stream with audits after every event and the baseline alongside.
    Verify {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "json")]
        report: ReportFormat,
        #[arg(long)]
        skip_invalid: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    delta: u32,
    #[arg(long)]
    updates: usize,
    /// `churn:<p>`, `window:<w>` or `star`.
    #[arg(long, default_value = "churn:0.6")]
    model: StreamModel,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct OptGenArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<u32>,
    #[arg(long)]
    updates: Option<usize>,
    #[arg(long)]
    model: Option<StreamModel>,
}

#[derive(Args)]
struct RunArgs {
    /// Engine seed (also the generator seed for generated streams).
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `off`, `end` or `every:<k>`.
    #[arg(long, default_value = "end")]
    audit: AuditPolicy,
    #[arg(long, default_value = "json")]
    report: ReportFormat,
    /// Exit with status 1 if the report records any violation.
    #[arg(long)]
    strict: bool,
    /// Replay on the naive baseline too.
    #[arg(long)]
    baseline: bool,
    /// Skip invalid events with a warning instead of aborting.
    #[arg(long)]
    skip_invalid: bool,
}

fn read_stream(path: &Path) -> Result<(StreamHeader, Vec<UpdateEvent>), WorkloadError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path)?
    };
    parse_stream(&text)
}

fn emit(text: &str) -> Result<(), WorkloadError> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// `Ok(true)` when the output is clean (or cleanliness was not requested).
fn execute(cli: Cli) -> Result<bool, WorkloadError> {
    match cli.command {
        Command::Gen { stream, out } => {
            let events = generate(stream.model, stream.n, stream.delta, stream.updates, stream.seed)?;
            let text = write_stream(&StreamHeader { n: stream.n, delta: stream.delta }, &events);
            match out {
                Some(path) => fs::write(path, text)?,
                None => emit(&text)?,
            }
            Ok(true)
        }
        Command::Run { input, gen, run: args } => {
            let (header, events, model) = match input {
                Some(path) => {
                    let (h, ev) = read_stream(&path)?;
                    (h, ev, None)
                }
                None => {
                    let (Some(n), Some(delta)) = (gen.n, gen.delta) else {
                        return Err(WorkloadError::InvalidConfig(
                            "give a stream file or both --n and --delta".into(),
                        ));
                    };
                    let model = gen.model.unwrap_or(StreamModel::Churn { p: 0.6 });
                    let t = gen.updates.unwrap_or(200 * n);
                    let ev = generate(model, n, delta, t, args.seed)?;
                    (StreamHeader { n, delta }, ev, Some(model.to_string()))
                }
            };
            let opts = RunOptions {
                seed: args.seed,
                audit: args.audit,
                baseline: args.baseline,
                skip_invalid: args.skip_invalid,
                model,
            };
            let report = run(&header, &events, &opts)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            emit(&emit_report(&report, args.report))?;
            Ok(!args.strict || report.is_clean())
        }
        Command::Bench { n, delta, updates, model, seed, audit, report, strict } => {
            let cells: Vec<SweepCell> = n
                .iter()
                .flat_map(|&n| delta.iter().map(move |&d| (n, d)))
                .map(|(n, d)| SweepCell { n, delta: d, t: updates.unwrap_or(200 * n), model, seeds: seed.clone() })
                .collect();
            let table = bench(&cells, audit)?;
            emit(&emit_table(&table, report))?;
            Ok(!strict || table.is_clean())
        }
        Command::Verify { input, seed, report, skip_invalid } => {
            let (header, events) = read_stream(&input)?;
            let opts = RunOptions { audit: AuditPolicy::Every(1), baseline: true, skip_invalid, ..RunOptions::new(seed) };
            let r = run(&header, &events, &opts)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            emit(&emit_report(&r, report))?;
            Ok(r.is_clean())
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("violations recorded");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
