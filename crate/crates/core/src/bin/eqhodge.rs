use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use eqhodge::config::{JobConfig, OutputFormat};
use eqhodge::report::{self, Command};
use eqhodge::{Error, ErrorClass};

#[derive(clap::Args)]
struct Args {
    /// Force JSON output regardless of the config
    #[arg(long)]
    json: bool,
    /// Run every cross-check
    #[arg(long)]
    check: bool,
}

#[derive(Parser)]
#[command(
    name = "eqhodge",
    version,
    about = "Equivariant Hodge classes and Mordell-Weil bounds"
)]
struct Full {
    #[command(subcommand)]
    command: FullCmd,
}

#[derive(Subcommand)]
enum FullCmd {
    /// Fiber types and invariants of a Weierstrass surface
    Analyze(FullArgs),
    /// Pull the surface back along a Galois cover
    Basechange(FullArgs),
    /// Evaluated Hodge diamond
    Hodge(FullArgs),
    /// Mordell-Weil rank bounds after base change
    Mwbound(FullArgs),
    /// Symbolic (a, b, c, delta) table of a bundle
    Engine(FullArgs),
    /// Compare the trace formula with explicit superelliptic differentials
    Oracle(FullArgs),
}

#[derive(clap::Args)]
struct FullArgs {
    /// TOML job file
    config: PathBuf,
    #[command(flatten)]
    flags: Args,
}

fn class_name(e: &Error) -> &'static str {
    match e.class() {
        ErrorClass::Input => "config",
        ErrorClass::Hypothesis => "hypothesis",
        ErrorClass::Internal => "internal",
    }
}

fn main() -> ExitCode {
    let cli = Full::parse();
    let (command, args) = match cli.command {
        FullCmd::Analyze(a) => (Command::Analyze, a),
        FullCmd::Basechange(a) => (Command::Basechange, a),
        FullCmd::Hodge(a) => (Command::Hodge, a),
        FullCmd::Mwbound(a) => (Command::Mwbound, a),
        FullCmd::Engine(a) => (Command::Engine, a),
        FullCmd::Oracle(a) => (Command::Oracle, a),
    };
    let config = match JobConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => return fail(&e, true),
    };
    let as_json = args.flags.json || config.output == OutputFormat::Json;
    match report::run(&config, command, args.flags.check) {
        Ok(v) => {
            let text = if as_json {
                let mut t = serde_json::to_string_pretty(&v).expect("reports serialize");
                t.push('\n');
                t
            } else {
                report::render_text(&v)
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => fail(&e, as_json),
    }
}

fn fail(e: &Error, as_json: bool) -> ExitCode {
    if as_json {
        let v = json!({"error": {"class": class_name(e), "message": e.to_string()}});
        eprintln!("{v}");
    } else {
        eprintln!("eqhodge: {e}");
    }
    ExitCode::from(e.exit_code() as u8)
}
