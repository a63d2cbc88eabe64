use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use cstar_ideal_cli::config::{DEFAULT_WINDOW, MIN_WINDOW, WINDOW_ENV};
use cstar_ideal_cli::{
    audit_paper, list_scenarios, run, to_canonical_string, RunConfig, EXIT_CONFIG, EXIT_OK,
    EXIT_VIOLATION,
};

#[derive(Parser)]
#[command(
    name = "cstar-ideal",
    version,
    about = "Ideal convergence audits for C*-algebra-valued metrics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the audits listed in a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Exit with 3 when any verdict is Unknown.
        #[arg(long)]
        strict: bool,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print a plain-text summary.
        #[arg(long)]
        table: bool,
    },
    /// Reproduce every worked example and implication, one line per claim.
    AuditPaper {
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List scenarios, metrics, norms and ideals.
    ListScenarios,
}

fn write_out(path: &Path, text: &str) -> Result<(), String> {
    std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match cli.command {
        Command::ListScenarios => {
            print!("{}", list_scenarios());
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            strict,
            out,
            table,
        } => {
            let mut cfg = match RunConfig::from_path(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return code(EXIT_CONFIG);
                }
            };
            cfg.strict |= strict;
            if out.is_some() {
                cfg.output_path = out;
            }
            let outcome = run(&cfg);
            let json = to_canonical_string(&outcome.report);
            match &cfg.output_path {
                Some(p) => {
                    if let Err(e) = write_out(p, &json) {
                        eprintln!("error: {e}");
                        return code(EXIT_CONFIG);
                    }
                }
                None if !table => print!("{json}"),
                None => {}
            }
            if table {
                print!("{}", outcome.table());
            }
            for v in &outcome.tally.violations {
                eprintln!("violation: {v}");
            }
            eprintln!(
                "finished in {:.3} s, exit {}",
                start.elapsed().as_secs_f64(),
                outcome.exit_code
            );
            code(outcome.exit_code)
        }
        Command::AuditPaper { window, out } => {
            let window = match window {
                Some(n) => n,
                None => match std::env::var(WINDOW_ENV)
                    .ok()
                    .map(|s| s.trim().parse::<usize>())
                {
                    Some(Ok(n)) => n,
                    Some(Err(_)) => {
                        eprintln!("error: {WINDOW_ENV} is not a positive integer");
                        return code(EXIT_CONFIG);
                    }
                    None => DEFAULT_WINDOW,
                },
            };
            if window < MIN_WINDOW {
                eprintln!("error: window must be at least {MIN_WINDOW}, got {window}");
                return code(EXIT_CONFIG);
            }
            let audit = audit_paper(window);
            let json = to_canonical_string(&audit.to_json());
            // claim lines go to stdout unless stdout carries the JSON
            let lines = audit.lines().join("\n");
            match &out {
                Some(p) => {
                    if let Err(e) = write_out(p, &json) {
                        eprintln!("error: {e}");
                        return code(EXIT_CONFIG);
                    }
                    println!("{lines}");
                }
                None => {
                    print!("{json}");
                    eprintln!("{lines}");
                }
            }
            eprintln!("finished in {:.3} s", start.elapsed().as_secs_f64());
            code(if audit.all_pass() {
                EXIT_OK
            } else {
                EXIT_VIOLATION
            })
        }
    }
}
