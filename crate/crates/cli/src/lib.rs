//! Script front end: parse, execute, report.

pub mod exec;
pub mod parse;
pub mod report;

use std::io::Write;
use std::path::Path;

pub use exec::{execute, Execution, Options};
pub use parse::{parse_program, parse_program_in, Format, ParseError, Script};
pub use report::{emit_report, Report, Status};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub opts: Options,
    /// Format of the final report when the script has no `report` statement.
    pub format: Format,
    /// Worker threads; `None` uses rayon's default.
    pub threads: Option<usize>,
}

/// Parses and runs `text`, writing reports to `out` or to the paths named by
/// `report` statements. Returns the process exit code.
pub fn run(text: &str, base: &Path, cfg: RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let script = match parse_program_in(text, base) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    };
    let ex = pool.install(|| execute(&script, cfg.opts));
    let mut outputs = ex.outputs;
    if outputs.is_empty() {
        outputs.push(exec::Output { format: cfg.format, path: None, report: ex.report.clone() });
    }
    for o in &outputs {
        let body = emit_report(&o.report, o.format);
        let written = match &o.path {
            Some(p) => std::fs::write(p, body).map_err(|e| format!("cannot write {p}: {e}")),
            None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
        };
        if let Err(e) = written {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INVALID;
        }
    }
    if ex.report.all_passed() {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}
