use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use segshield::report::run_experiment;

#[derive(Parser)]
#[command(name = "segshield", version, about = "Run packet-size obfuscation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare no defense, random padding and random segmentation.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "report")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    segshield::cli::init_logging();
    let cli = Cli::parse();
    match cli.command {
        Command::Experiment { config, out } => match run_experiment(&config, &out) {
            Ok(report) => {
                for g in &report.groups {
                    println!(
                        "{}: accuracy undefended {:.3}, padded {:.3}, segmented {:.3}",
                        g.devices.join("+"),
                        g.undefended.accuracy,
                        g.padded.accuracy,
                        g.segmented.accuracy
                    );
                }
                let pad = report.padding_overhead.last().expect("total row");
                let seg = report.segmentation_overhead.last().expect("total row");
                println!(
                    "byte overhead: padding {:.1}%, segmentation {:.1}%",
                    pad.b * 100.0,
                    seg.b * 100.0
                );
                println!("report written to {}", out.join("report.json").display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::FAILURE
            }
        },
    }
}
