use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thin_korn::config::{load_config, parse_resolution};
use thin_korn::experiment::{run, write_outputs};

#[derive(Parser)]
#[command(name = "thin-korn", version, about = "Thin-domain geometry and Korn-inequality experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Quadrature resolution `N1xN2xNr`.
        #[arg(long, value_parser = parse_resolution)]
        resolution: Option<thin_korn::thin_domain::DomainResolution>,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, out, seed, resolution } = Cli::parse().command;
    let result = (|| {
        let mut cfg = load_config(&config)?;
        if let Some(s) = seed {
            cfg.seed = s;
        }
        if let Some(r) = resolution {
            cfg.resolution = r;
            cfg = cfg.checked()?;
        }
        let dir = out.or_else(|| cfg.output.clone()).unwrap_or_else(|| PathBuf::from("out"));
        let outcome = run(&cfg)?;
        write_outputs(&outcome, &dir)?;
        Ok::<_, thin_korn::Error>((outcome, dir))
    })();
    match result {
        Ok((outcome, dir)) => {
            let s = &outcome.summary;
            for suite in &s.suites {
                println!("{:<28} {}", suite.suite, if suite.passed() { "pass" } else { "FAIL" });
            }
            for f in &s.failures {
                eprintln!("failure: {f}");
            }
            println!("wrote {}", dir.display());
            if s.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
