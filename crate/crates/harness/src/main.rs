use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qed_core::grover::{GroverLayout, GroverSpec};
use qed_harness::commands::{self, Source, SweepConfig};
use qed_harness::runner::Experiment;
use qed_harness::{Error, Result};

/// Compile, simulate and analyse error-detected circuits on the
/// [[n, n-2, 2]] code.
///
/// Noise p is always a fraction (0.006, not 0.6%). Set QED_THREADS to fix
/// the worker count; results do not depend on it.
#[derive(Parser)]
#[command(name = "qed", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Encode a logical circuit or a built-in search and report resources.
    Compile(CompileArgs),
    /// Run trials of a compiled circuit under circuit-level noise.
    Simulate(SimulateArgs),
    /// Sweep noise and syndrome rounds for a search, with the bare baseline.
    Sweep(SweepArgs),
    /// Expected post-selected success of the detection model over a δ grid.
    Statmodel(StatmodelArgs),
    /// Noisy-identity benchmark on a [[6,4,2]] block.
    ///
    /// Thirty rounds of noisy identities run between fault-tolerant
    /// preparation and destructive readout. With r rounds, a syndrome
    /// gadget follows identity rounds 30/r, 2·30/r, …, 30, so r = 1 puts
    /// the only gadget at the end and r must divide 30. r = 0 runs four
    /// bare qubits through the same identities.
    IdentityBench(IdentityArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Layout {
    Compact,
    Dedicated,
}

impl From<Layout> for GroverLayout {
    fn from(l: Layout) -> Self {
        match l {
            Layout::Compact => GroverLayout::Compact,
            Layout::Dedicated => GroverLayout::Dedicated,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompileArgs {
    /// Logical circuit JSON.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    circuit: Option<PathBuf>,
    /// Built-in search: s=INT,d=INT[,marked=BITS].
    #[arg(long)]
    spec: Option<GroverSpec>,
    #[arg(long, value_enum, default_value = "compact")]
    layout: Layout,
    /// Syndrome rounds.
    #[arg(long, default_value_t = 0)]
    r: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SimulateArgs {
    /// Compiled circuit JSON; encoded when it carries a layout.
    #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
    circuit: Option<PathBuf>,
    /// Built-in search: s=INT,d=INT[,marked=BITS]. With --circuit absent
    /// the search is compiled on the fly.
    #[arg(long)]
    spec: Option<GroverSpec>,
    #[arg(long, value_enum, default_value = "compact")]
    layout: Layout,
    /// Syndrome rounds of a built-in search.
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Run without post-selection.
    #[arg(long)]
    bare: bool,
    /// Correct outcome, first bit for logical qubit 0; defaults to the
    /// marked state of --spec.
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    spec: GroverSpec,
    #[arg(long, value_enum, default_value = "compact")]
    layout: Layout,
    /// Noise values, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.002,0.004,0.006,0.008")]
    p: Vec<f64>,
    /// Syndrome rounds: comma separated values or inclusive LO-HI ranges.
    #[arg(long, value_parser = parse_rounds, default_value = "1-12")]
    r: RoundList,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Bootstrap resamples per point.
    #[arg(long, default_value_t = 10_000)]
    resamples: usize,
    /// Results CSV. Points already in the file are kept and skipped; the
    /// summary goes next to it as .summary.json.
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct StatmodelArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.3,0.6")]
    epsilon: Vec<f64>,
    /// Miss probabilities; defaults to 0, 0.02, …, 1.
    #[arg(long, value_delimiter = ',')]
    delta: Vec<f64>,
    /// Shots N.
    #[arg(long, default_value_t = 10)]
    n: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct IdentityArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.001,0.003,0.005")]
    p: Vec<f64>,
    /// Syndrome rounds, each dividing 30, or 0 for the bare circuit.
    #[arg(long, value_parser = parse_rounds, default_value = "0,1,2,3,5,6,10,15,30")]
    r: RoundList,
    #[arg(long, default_value_t = 1000)]
    shots: u64,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone)]
struct RoundList(Vec<usize>);

fn parse_rounds(text: &str) -> std::result::Result<RoundList, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| format!("`{s}` is not a round count"))
        };
        match part.split_once('-') {
            Some((lo, hi)) => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(format!("empty range `{part}`"));
                }
                out.extend(lo..=hi);
            }
            None => out.push(num(part)?),
        }
    }
    if out.is_empty() {
        return Err("no round counts given".into());
    }
    Ok(RoundList(out))
}

fn parse_bits(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::usage(format!("expected outcome `{text}` is not binary"))),
        })
        .collect()
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("results are serializable")
}

fn run_compile(a: CompileArgs) -> Result<()> {
    let source = match (a.circuit, a.spec) {
        (Some(path), _) => Source::File(path),
        (None, Some(spec)) => Source::Grover {
            spec,
            layout: a.layout.into(),
        },
        (None, None) => return Err(Error::usage("pass --circuit or --spec")),
    };
    let out = commands::compile(&source, a.r, a.common.seed)?;
    let report = to_json(&out.resources);
    match &a.common.out {
        Some(path) => {
            emit(Some(path), &to_json(&out.circuit_json))?;
            emit(Some(&path.with_extension("resources.json")), &report)?;
        }
        None => emit(None, &to_json(&out.circuit_json))?,
    }
    eprint!("{}", commands::describe_resources(&out.resources));
    Ok(())
}

fn run_simulate(a: SimulateArgs) -> Result<()> {
    let expected = match (&a.expect, &a.spec) {
        (Some(bits), _) => parse_bits(bits)?,
        (None, Some(spec)) => spec.marked.clone(),
        (None, None) => return Err(Error::usage("pass --expect or --spec to define the correct outcome")),
    };
    let exp = match (&a.circuit, &a.spec) {
        (Some(path), _) => commands::load_experiment(path, a.bare, expected)?,
        (None, Some(spec)) if a.bare => Experiment::grover_bare(spec, a.layout.into())?,
        (None, Some(spec)) => Experiment::grover_encoded(spec, a.layout.into(), a.r)?,
        (None, None) => return Err(Error::usage("pass --circuit or --spec")),
    };
    let ideal = a.spec.as_ref().map(GroverSpec::ideal_success);
    let report = commands::simulate(&exp, a.p, a.shots, a.trials, a.common.seed, ideal)?;
    match a.format {
        Format::Json => emit(a.common.out.as_deref(), &to_json(&report)),
        Format::Csv => {
            let header = commands::csv_header("simulate", a.common.seed, &[]);
            #[derive(serde::Serialize)]
            struct Row {
                p: f64,
                shots: u64,
                trials: usize,
                encoded: bool,
                success: f64,
                survival: f64,
                ci_low: f64,
                ci_high: f64,
            }
            let row = Row {
                p: report.p,
                shots: report.shots,
                trials: report.trials,
                encoded: report.encoded,
                success: report.success,
                survival: report.survival,
                ci_low: report.ci_low,
                ci_high: report.ci_high,
            };
            commands::write_csv(a.common.out.as_deref(), &header, &[row])
        }
    }
}

fn run_sweep(a: SweepArgs) -> Result<()> {
    let cfg = SweepConfig {
        spec: a.spec,
        layout: a.layout.into(),
        ps: a.p,
        rs: a.r.0,
        shots: a.shots,
        trials: a.trials,
        seed: a.common.seed,
        resamples: a.resamples,
    };
    match &a.common.out {
        Some(path) => {
            let (_, summary) = commands::sweep(&cfg, Some(path))?;
            eprintln!("{}", to_json(&summary));
        }
        None => {
            let (points, summary) = commands::sweep(&cfg, None)?;
            let header = commands::csv_header("sweep", cfg.seed, &[("spec", cfg.spec.to_string())]);
            commands::write_csv(None, &header, &points)?;
            eprintln!("{}", to_json(&summary));
        }
    }
    Ok(())
}

fn run_statmodel(a: StatmodelArgs) -> Result<()> {
    let deltas = if a.delta.is_empty() {
        commands::default_delta_grid()
    } else {
        a.delta
    };
    let rows = commands::statmodel(&a.epsilon, &deltas, a.n)?;
    match a.format {
        Format::Csv => {
            let header = commands::csv_header("statmodel", a.common.seed, &[("n", a.n.to_string())]);
            commands::write_csv(a.common.out.as_deref(), &header, &rows)
        }
        Format::Json => emit(
            a.common.out.as_deref(),
            &to_json(&serde_json::json!({ "seed": a.common.seed, "rows": rows })),
        ),
    }
}

fn run_identity(a: IdentityArgs) -> Result<()> {
    commands::check_identity_rounds(&a.r.0)?;
    let rows = commands::identity_bench(&a.p, &a.r.0, a.shots, a.trials, a.common.seed)?;
    match a.format {
        Format::Csv => {
            let header = commands::csv_header("identity-bench", a.common.seed, &[]);
            commands::write_csv(a.common.out.as_deref(), &header, &rows)
        }
        Format::Json => emit(
            a.common.out.as_deref(),
            &to_json(&serde_json::json!({ "seed": a.common.seed, "rows": rows })),
        ),
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("QED_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Error::usage(format!("QED_THREADS = `{v}` is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::usage(format!("cannot start {n} threads: {e}")))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Compile(a) => run_compile(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Sweep(a) => run_sweep(a),
        Command::Statmodel(a) => run_statmodel(a),
        Command::IdentityBench(a) => run_identity(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
