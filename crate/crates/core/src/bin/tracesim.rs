use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segshield::rng::seeded;
use segshield::segcore::profiles;
use segshield::tracesim::{
    ingest_trace_with_header, inject_cover_traffic, obfuscate_trace, pad_trace, presets,
    synthesize_trace, write_trace, DeviceProfile, Trace, TraceFormat, DEFAULT_MTU_FRAME,
    FRAME_HEADER_BYTES,
};
use segshield::Result;

#[derive(Parser)]
#[command(name = "tracesim", version, about = "Apply traffic defenses to packet traces")]
struct Cli {
    /// Per-packet header bytes of the observation layer.
    #[arg(long, global = true, default_value_t = FRAME_HEADER_BYTES)]
    header: u32,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Randomly segment every packet payload.
    Obfuscate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "low-bandwidth")]
        profile: String,
        #[arg(long)]
        prob: Option<f64>,
        #[arg(long, default_value_t = 0.2)]
        time_overhead: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pad every frame by a random amount up to the frame ceiling.
    Pad {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MTU_FRAME)]
        mtu_frame: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Add cover packets so the target's data rate matches the reference.
    Cover {
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        reference: PathBuf,
        #[arg(long, default_value_t = 30.0)]
        window: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a synthetic trace from a device profile (preset name or JSON file).
    Synth {
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 3600.0)]
        duration: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path, header: u32) -> Result<Trace> {
    ingest_trace_with_header(path, TraceFormat::from_path(path), header)
}

fn save(trace: &Trace, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_trace(trace, p, TraceFormat::from_path(p)),
        None => {
            let lines: Vec<String> = trace
                .records
                .iter()
                .map(|r| serde_json::to_string(r).expect("record serializes"))
                .collect();
            segshield::cli::emit(None, &lines.join("\n"))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let header = cli.header;
    match cli.command {
        Command::Obfuscate {
            input,
            profile,
            prob,
            time_overhead,
            seed,
            out,
        } => {
            let mut cfg = profiles::resolve(&profile)?;
            if let Some(p) = prob {
                cfg = cfg.with_prob(p)?;
            }
            let trace = read(&input, header)?;
            let defended = obfuscate_trace(&trace, &cfg, time_overhead, &mut seeded(seed))?;
            eprintln!("{} records -> {}", trace.len(), defended.len());
            save(&defended, out.as_deref())
        }
        Command::Pad {
            input,
            mtu_frame,
            seed,
            out,
        } => {
            let trace = read(&input, header)?;
            let padded = pad_trace(&trace, mtu_frame, &mut seeded(seed))?;
            save(&padded, out.as_deref())
        }
        Command::Cover {
            target,
            reference,
            window,
            seed,
            out,
        } => {
            let t = read(&target, header)?;
            let r = read(&reference, header)?;
            let covered = inject_cover_traffic(&t, &r, window, &mut seeded(seed))?;
            eprintln!(
                "{}: {} cover bytes ({:.1}% of real traffic)",
                covered.device,
                covered.cover_bytes(),
                covered.cover_fraction() * 100.0
            );
            save(&covered, out.as_deref())
        }
        Command::Synth {
            profile,
            duration,
            seed,
            out,
        } => {
            let mut p = match presets::by_name(&profile) {
                Some(p) => p,
                None => DeviceProfile::load(&profile)?,
            };
            p.header_bytes = header;
            let trace = synthesize_trace(&p, duration, &mut seeded(seed))?;
            save(&trace, out.as_deref())
        }
    }
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
