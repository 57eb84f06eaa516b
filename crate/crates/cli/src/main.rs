//! `hypercrit`: CSV and JSON reports on growth, Poincaré series, shadows,
//! boundary densities and invariant random subgroups of free groups.
//!
//! Exit codes: 0 success, 2 invalid input, 3 not found or nothing to evaluate,
//! 4 a violated invariant, inequality or self-test example.

mod commands;
mod output;
mod selftest;

use clap::{Parser, Subcommand};
use hypercrit::Error;

use commands::*;
use output::{write_out, Format};
use selftest::Module;

#[derive(Debug, Parser)]
#[command(name = "hypercrit", version, about = "Critical exponents, shadows and invariant random subgroups of free groups")]
struct Cli {
    /// Report errors on standard error as JSON objects.
    #[arg(long, global = true)]
    json_errors: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    Growth(GrowthArgs),
    Delta(DeltaArgs),
    Poincare(PoincareArgs),
    ConjSeries(ConjSeriesArgs),
    Shadow(ShadowArgs),
    PsMeasure(PsMeasureArgs),
    ShadowLemma(ShadowLemmaArgs),
    Recurrence(RecurrenceArgs),
    IrsReport(IrsReportArgs),
    Pipeline(PipelineArgs),
    Lambda0(Lambda0Args),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Growth(a) => &a.common,
            Command::Delta(a) => &a.common,
            Command::Poincare(a) => &a.common,
            Command::ConjSeries(a) => &a.common,
            Command::Shadow(a) => &a.common,
            Command::PsMeasure(a) => &a.common,
            Command::ShadowLemma(a) => &a.common,
            Command::Recurrence(a) => &a.common,
            Command::IrsReport(a) => &a.common,
            Command::Pipeline(a) => &a.common,
            Command::Lambda0(a) => &a.common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Growth(_) => "growth",
            Command::Delta(_) => "delta",
            Command::Poincare(_) => "poincare",
            Command::ConjSeries(_) => "conj-series",
            Command::Shadow(_) => "shadow",
            Command::PsMeasure(_) => "ps-measure",
            Command::ShadowLemma(_) => "shadow-lemma",
            Command::Recurrence(_) => "recurrence",
            Command::IrsReport(_) => "irs-report",
            Command::Pipeline(_) => "pipeline",
            Command::Lambda0(_) => "lambda0",
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Growth(_) => Format::Csv,
            _ => Format::Json,
        }
    }

    fn modules(&self) -> &'static [Module] {
        match self {
            Command::Growth(_) => &[Module::Space, Module::Subgroups],
            Command::Delta(_) | Command::Poincare(_) | Command::ConjSeries(_) | Command::Lambda0(_) => &[Module::Series],
            Command::Shadow(_) | Command::PsMeasure(_) | Command::ShadowLemma(_) => &[Module::Boundary],
            Command::Recurrence(_) | Command::IrsReport(_) | Command::Pipeline(_) => &[Module::Irs],
        }
    }

    fn execute(&self) -> hypercrit::Result<output::Report> {
        if self.common().selftest {
            return selftest::run(self.name(), self.modules());
        }
        match self {
            Command::Growth(a) => growth(a),
            Command::Delta(a) => delta(a),
            Command::Poincare(a) => poincare(a),
            Command::ConjSeries(a) => conj_series(a),
            Command::Shadow(a) => shadow_cmd(a),
            Command::PsMeasure(a) => ps_measure(a),
            Command::ShadowLemma(a) => shadow_lemma(a),
            Command::Recurrence(a) => recurrence(a),
            Command::IrsReport(a) => irs_report(a),
            Command::Pipeline(a) => pipeline(a),
            Command::Lambda0(a) => lambda0(a),
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidInput(_) | Error::InvalidIrs(_) | Error::Unsupported(_) => 2,
        Error::NotFound(_) => 3,
        Error::Invariant(_) => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalidInput",
        Error::InvalidIrs(_) => "invalidIrs",
        Error::Unsupported(_) => "unsupported",
        Error::NotFound(_) => "notFound",
        Error::Invariant(_) => "invariant",
    }
}

fn configure_threads() -> hypercrit::Result<()> {
    let Ok(raw) = std::env::var("HYPERCRIT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::InvalidInput(format!("HYPERCRIT_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))
}

fn run(cli: &Cli) -> hypercrit::Result<i32> {
    configure_threads()?;
    let report = cli.command.execute()?;
    let common = cli.command.common();
    let format = common.format.unwrap_or(cli.command.default_format());
    write_out(&report.render(format), common.output.as_deref())?;
    Ok(report.outcome.code())
}

fn main() {
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            if cli.json_errors {
                let doc = serde_json::json!({ "error": error_kind(&e), "message": e.to_string(), "exitCode": exit_code(&e) });
                eprintln!("{doc}");
            } else {
                eprintln!("hypercrit: {e}");
            }
            exit_code(&e)
        }
    };
    std::process::exit(code);
}
