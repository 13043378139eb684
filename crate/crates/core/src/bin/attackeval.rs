use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segshield::attackeval::{run_attack, AttackParams, ForestParams};
use segshield::rng::seeded;
use segshield::tracesim::{ingest_trace_with_header, TraceFormat, FRAME_HEADER_BYTES};
use segshield::Result;

#[derive(Parser)]
#[command(name = "attackeval", version, about = "Device-fingerprinting attack on packet traces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a random forest on windowed signed sizes and report test metrics.
    Run {
        /// One trace per device.
        #[arg(long, num_args = 2.., required = true)]
        traces: Vec<PathBuf>,
        #[arg(long, default_value_t = 30.0)]
        window: f64,
        #[arg(long, default_value_t = 200)]
        veclen: usize,
        #[arg(long, default_value_t = 100)]
        trees: usize,
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, default_value_t = 0.7)]
        split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = FRAME_HEADER_BYTES)]
        header: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    let Command::Run {
        traces,
        window,
        veclen,
        trees,
        max_depth,
        split,
        seed,
        header,
        out,
    } = cli.command;
    let traces = traces
        .iter()
        .map(|p| ingest_trace_with_header(p, TraceFormat::from_path(p), header))
        .collect::<Result<Vec<_>>>()?;
    let params = AttackParams {
        window_s: window,
        vector_len: veclen,
        train_fraction: split,
        forest: ForestParams {
            n_trees: trees,
            max_depth,
            seed,
            ..ForestParams::default()
        },
    };
    let metrics = run_attack(&traces, &params, &mut seeded(seed))?;
    eprintln!(
        "accuracy {:.3}  precision {:.3}  recall {:.3}  f1 {:.3}",
        metrics.accuracy, metrics.precision, metrics.recall, metrics.f1
    );
    segshield::cli::emit(out.as_deref(), &serde_json::to_string_pretty(&metrics)?)
}

fn main() -> ExitCode {
    segshield::cli::init_logging();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
