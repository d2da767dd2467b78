use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use frobkp_cli::{run_suite, summary, RunError, SuiteConfig};

/// Verifies the Frobenius manifold and BKP hierarchy identities.
#[derive(Parser, Debug)]
#[command(name = "frobkp", version)]
struct Args {
    /// Optional `submanifold canonical` form, same as `--suite canonical`.
    #[arg(num_args = 0..=2)]
    command: Vec<String>,
    /// gram | frobenius | potential | wdvv | recursion | appendix | canonical | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Truncation depth K.
    #[arg(long, default_value_t = 16)]
    depth: i64,
    /// Labels t^i with |i| up to this bound.
    #[arg(long = "t-range", default_value_t = 4)]
    t_range: i64,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Number of random points per suite.
    #[arg(long, default_value_t = 1)]
    samples: u32,
    /// JSON point file.
    #[arg(long)]
    point: Option<PathBuf>,
    /// Tolerance for floating-point checks.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// JSON Lines report path; standard output if absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config(a: Args) -> Result<SuiteConfig, RunError> {
    let suite = match a.command.iter().map(String::as_str).collect::<Vec<_>>()[..] {
        [] => a.suite,
        ["submanifold", "canonical"] | ["canonical"] => "canonical".into(),
        [s] => s.to_string(),
        ref other => return Err(RunError::Config(format!("unknown command {other:?}"))),
    };
    Ok(SuiteConfig {
        suite,
        m: a.m,
        n: a.n,
        depth: a.depth,
        t_range: a.t_range,
        seed: a.seed,
        samples: a.samples,
        point: a.point,
        tol: a.tol,
        out: a.out,
    })
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match config(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let lines = report.to_jsonl();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, lines) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(2);
            }
            print!("{}", summary(&report));
        }
        None => {
            let _ = std::io::stdout().write_all(lines.as_bytes());
            eprint!("{}", summary(&report));
        }
    }
    ExitCode::from(report.exit_code() as u8)
}
