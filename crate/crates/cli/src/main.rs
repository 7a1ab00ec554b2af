use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use chu_cli::{run, Format, Options, RunConfig, EXIT_INVALID};
use clap::Parser;

/// Runs a chu script and reports the results.
#[derive(Parser)]
#[command(name = "chu", version)]
struct Args {
    /// Script file, or `-` for stdin.
    script: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Default sample count for `laws` and campaign checks.
    #[arg(long)]
    samples: Option<usize>,
    /// Default carrier-dimension bound for `laws`.
    #[arg(long)]
    dims: Option<usize>,
    /// Report format when the script has no `report` statement.
    #[arg(long, default_value = "json", value_parser = ["text", "json"])]
    format: String,
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (text, base) = if args.script.as_os_str() == "-" {
        let mut s = String::new();
        if let Err(e) = io::Read::read_to_string(&mut io::stdin(), &mut s) {
            eprintln!("error: cannot read stdin: {e}");
            return ExitCode::from(EXIT_INVALID as u8);
        }
        (s, PathBuf::from("."))
    } else {
        match std::fs::read_to_string(&args.script) {
            Ok(s) => (s, args.script.parent().map(PathBuf::from).unwrap_or_default()),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", args.script.display());
                return ExitCode::from(EXIT_INVALID as u8);
            }
        }
    };
    let cfg = RunConfig {
        opts: Options { seed: args.seed, samples: args.samples, dims: args.dims },
        format: args.format.parse::<Format>().expect("restricted by clap"),
        threads: args.threads,
    };
    let code = run(&text, &base, cfg, &mut io::stdout().lock(), &mut io::stderr().lock());
    ExitCode::from(code as u8)
}
