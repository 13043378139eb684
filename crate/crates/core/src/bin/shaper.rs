use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use segshield::segcore::profiles;
use segshield::shaper::{
    run_transfer_benchmark, wall_time_summary, BenchmarkSpec, Receiver, SocketTuning,
    DEFAULT_RECEIVE_BUFFER, DEFAULT_SEND_BUFFER,
};
use segshield::Result;

#[derive(Parser)]
#[command(name = "shaper", version, about = "Shaped TCP file-transfer benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Send a pseudo-random payload to a running `shaper recv`.
    Send {
        #[arg(long)]
        addr: String,
        #[arg(long, default_value_t = 10 * 1024 * 1024)]
        size: usize,
        /// Segmentation profile name or JSON file; `none` sends undefended.
        #[arg(long, default_value = "rand-low")]
        profile: String,
        #[arg(long)]
        prob: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_SEND_BUFFER)]
        send_buf: usize,
        #[arg(long, default_value_t = DEFAULT_RECEIVE_BUFFER)]
        recv_buf: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// Application message size; default sends the payload as one message.
        #[arg(long)]
        message: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Accept transfers, verify and acknowledge them.
    Recv {
        #[arg(long)]
        port: u16,
        #[arg(long, default_value = "0.0.0.0")]
        bind: String,
        /// Number of transfers to serve before exiting.
        #[arg(long, default_value_t = 1)]
        conns: usize,
        #[arg(long, default_value_t = DEFAULT_RECEIVE_BUFFER)]
        recv_buf: usize,
        /// Seconds to wait for each connection.
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Send {
            addr,
            size,
            profile,
            prob,
            send_buf,
            recv_buf,
            reps,
            message,
            seed,
            out,
        } => {
            let (config, tuning) = if profile == "none" {
                (None, SocketTuning::untuned())
            } else {
                let mut cfg = profiles::resolve(&profile)?.with_seed(seed);
                if let Some(p) = prob {
                    cfg = cfg.with_prob(p)?;
                }
                (Some(cfg), SocketTuning::shaped(send_buf, recv_buf))
            };
            let spec = BenchmarkSpec {
                file_bytes: size,
                config,
                tuning,
                repetitions: reps,
                payload_seed: seed,
                message_bytes: message,
            };
            let runs = run_transfer_benchmark(addr.as_str(), &spec)?;
            let (mean, sd) = wall_time_summary(&runs);
            eprintln!("{reps} runs: mean {mean:.4}s (sd {sd:.4}s)");
            segshield::cli::emit(out.as_deref(), &serde_json::to_string_pretty(&runs)?)
        }
        Command::Recv {
            port,
            bind,
            conns,
            recv_buf,
            timeout,
            out,
        } => {
            let addr: SocketAddr = format!("{bind}:{port}")
                .parse()
                .map_err(|e| segshield::Error::InvalidArgument(format!("{e}")))?;
            let receiver = Receiver::bind(addr, Some(recv_buf))?;
            let timeout = Duration::from_secs(timeout);
            let runs = (0..conns)
                .map(|_| receiver.accept_one(None, timeout))
                .collect::<Result<Vec<_>>>()?;
            segshield::cli::emit(out.as_deref(), &serde_json::to_string_pretty(&runs)?)
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
