use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flutelab_cli::commands::{self, CommandError, Report};
use flutelab_cli::config::ExperimentConfig;
use flutelab_cli::exit;

#[derive(Parser)]
#[command(name = "flutelab", version, about = "Build and probe hyperbolic flute surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct the surface and report generators, traces and circle margins.
    Build(Common),
    /// Run the construction checks on the truncation.
    Verify(Common),
    /// Busemann limits along power towers (twisted-delta only).
    Limits(Common),
    /// Scan for candidate times trapped in the horocycle orbit closure.
    Scan(Common),
    /// Injectivity radius along the vertical ray from i.
    Profile(Common),
    /// Draw circles, axes, the ray from i and horocycles as SVG.
    Render(Common),
}

#[derive(Args)]
struct Common {
    /// Configuration file; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override one setting, e.g. `--set surface.N=6`. Repeatable.
    #[arg(long = "set", value_name = "SECTION.KEY=VALUE")]
    overrides: Vec<String>,
}

type Runner = fn(&ExperimentConfig) -> Result<Report, CommandError>;

fn init_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("FLUTELAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("FLUTELAB_THREADS must be a positive integer, got `{v}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| format!("stdout: {e}"))
        }
    }
}

fn run(cli: Cli) -> i32 {
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return exit::CONFIG;
    }
    let (common, run_cmd, svg): (&Common, Runner, bool) =
        match &cli.command {
            Command::Build(c) => (c, commands::cmd_build, false),
            Command::Verify(c) => (c, commands::cmd_verify, false),
            Command::Limits(c) => (c, commands::cmd_limits, false),
            Command::Scan(c) => (c, commands::cmd_scan, false),
            Command::Profile(c) => (c, commands::cmd_profile, false),
            Command::Render(c) => (c, commands::cmd_render, true),
        };
    let (text, source) = match &common.config {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => (t, p.display().to_string()),
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return exit::IO;
            }
        },
        None => (String::new(), "<defaults>".to_string()),
    };
    let cfg = match ExperimentConfig::load(&text, &source, &common.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit::CONFIG;
        }
    };
    let report = match run_cmd(&cfg) {
        Ok(r) => r,
        Err(e @ CommandError::Invalid(_)) => {
            eprintln!("error: {e}");
            return exit::CONFIG;
        }
        Err(e @ CommandError::Construction(_)) => {
            eprintln!("verification failed: {e}");
            return exit::VERIFICATION;
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    let path = if svg {
        cfg.output.svg_path.as_deref()
    } else {
        cfg.output.json_path.as_deref()
    };
    if let Err(e) = write_out(path, &report.text) {
        eprintln!("error: {e}");
        return exit::IO;
    }
    if report.pass {
        exit::PASS
    } else {
        eprintln!("verification failed; see the report");
        exit::VERIFICATION
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which this tool reserves for
    // failed checks; they are configuration errors here.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::CONFIG } else { exit::PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    ExitCode::from(run(cli) as u8)
}
