use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use loopspec::{parse_area_list, GroupKind, GroupSpec};
use serde_json::json;
use series_engine::{SeriesParams, DEFAULT_BUDGET};
use ym2::compare::compare;
use ym2::limits::{run_limits, LimitMode, LimitTarget, LIMITS_CSV_HEADER};
use ym2::mm::{mm_check, PartialSpec};
use ym2::table::{run_table, RowStatus, TableOptions};
use ym2::{
    run, run_master, word_with_defaults, CliError, Engine, JobSpec, MasterOptions, MasterRoute,
    OutputFormat, CSV_HEADER,
};

#[derive(Parser)]
#[command(
    name = "ym2",
    version,
    about = "Wilson loop expectations for planar loops"
)]
struct Cli {
    /// Worker threads for the engines (defaults to all cores).
    #[arg(long, global = true, env = "YM2_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one word with one engine.
    Eval(EvalArgs),
    /// Large-N master field of a word.
    Master(MasterArgs),
    /// Regression against the table of explicit U(N) expectations.
    Table(TableArgs),
    /// Makeenko-Migdal relation at a crossing.
    MmCheck(MmArgs),
    /// Evaluate one word with several engines and check agreement.
    Compare(CompareArgs),
    /// Scaling studies: N = 1, small areas, large areas at N = ∞.
    Limits(LimitsArgs),
}

#[derive(Args)]
struct WordArgs {
    /// Lasso word, e.g. "(t)(t s)" or "a b' | a".
    #[arg(long)]
    word: String,
    /// Areas as name=value pairs; missing identifiers get area 1.
    #[arg(long, default_value = "")]
    areas: String,
}

#[derive(Args)]
struct EvalArgs {
    /// Read the whole job from a JSON file.
    #[arg(long, conflicts_with_all = ["word", "areas", "group", "n", "engine", "k_max", "budget", "samples", "seed", "steps", "stepper", "unnormalized"])]
    job: Option<PathBuf>,
    #[arg(long, required_unless_present = "job")]
    word: Option<String>,
    #[arg(long)]
    areas: Option<String>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long = "N", id = "n")]
    n: Option<u32>,
    #[arg(long, value_enum)]
    engine: Option<Engine>,
    #[arg(long = "k-max", id = "k_max")]
    k_max: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Steps per letter for the holonomy simulation.
    #[arg(long = "J", id = "steps")]
    steps: Option<usize>,
    #[arg(long)]
    stepper: Option<String>,
    /// Report plain traces instead of traces divided by N per loop.
    #[arg(long)]
    unnormalized: bool,
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,
    /// Report a wall time of zero so identical jobs give identical output.
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct MasterArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, value_enum, default_value = "cumulant")]
    route: MasterRoute,
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Row ids; all rows when omitted.
    #[arg(long, value_delimiter = ',')]
    rows: Vec<u32>,
    /// Area values taken by every variable.
    #[arg(long, value_delimiter = ',', default_value = "0.2,0.5,1.0")]
    grid: Vec<f64>,
    #[arg(long = "N", value_delimiter = ',', default_value = "2,3")]
    n: Vec<u32>,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Skip the walk engine comparison.
    #[arg(long)]
    no_walk: bool,
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Args)]
struct MmArgs {
    #[command(flatten)]
    word: WordArgs,
    /// The two loops obtained by splitting at the crossing, e.g. "a | b'".
    #[arg(long)]
    split: String,
    /// Face derivative COEF:letter[+letter]; repeat for each face.
    #[arg(long = "partial", allow_hyphen_values = true, required = true)]
    partials: Vec<String>,
    #[arg(long, default_value = "U")]
    group: String,
    #[arg(long = "N")]
    n: u32,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long = "k-max")]
    k_max: Option<usize>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    word: WordArgs,
    #[arg(long, default_value = "U")]
    group: String,
    #[arg(long = "N")]
    n: u32,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "series,walk,mc"
    )]
    engines: Vec<Engine>,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long = "J", default_value_t = 100)]
    steps: usize,
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long, value_enum)]
    mode: LimitMode,
    /// Word for the n1 and small modes.
    #[arg(long, conflicts_with = "row")]
    word: Option<String>,
    #[arg(long, default_value = "")]
    areas: String,
    /// Table row for the large mode.
    #[arg(long)]
    row: Option<u32>,
    /// Base values of the row variables, in the row's order.
    #[arg(long, value_delimiter = ',')]
    values: Vec<f64>,
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    scales: Vec<f64>,
}

fn areas(text: &str) -> Result<BTreeMap<String, f64>, CliError> {
    Ok(parse_area_list(text)?)
}

fn group(kind: &str, n: u32) -> Result<GroupSpec, CliError> {
    let kind: GroupKind = kind.parse()?;
    Ok(GroupSpec::new(kind, n)?)
}

fn print_report(out: &mut impl Write, r: &ym2::Report, format: OutputFormat) {
    match format {
        OutputFormat::Json => {
            let _ = writeln!(out, "{}", r.to_json());
        }
        OutputFormat::Csv => {
            let _ = writeln!(out, "{CSV_HEADER}");
            let _ = writeln!(out, "{}", r.to_csv_row());
        }
    }
}

fn eval(a: EvalArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let mut job = match &a.job {
        Some(path) => JobSpec::from_json(&std::fs::read_to_string(path)?)?,
        None => {
            let word = a.word.clone().expect("clap requires a word");
            let mut job = JobSpec::new(&word, a.engine.unwrap_or_default());
            job.areas = areas(a.areas.as_deref().unwrap_or(""))?;
            if let Some(g) = a.group {
                job.group = g;
            }
            job.n = a.n;
            job.k_max = a.k_max;
            job.budget = a.budget;
            job.samples = a.samples;
            job.seed = a.seed;
            job.steps = a.steps;
            job.stepper = a.stepper;
            job.normalized = !a.unnormalized;
            job
        }
    };
    if let Some(f) = a.format {
        job.format = f;
    }
    job.deterministic |= a.deterministic;
    let r = run(&job)?;
    print_report(out, &r, job.format);
    Ok(0)
}

fn master(a: MasterArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let w = word_with_defaults(&a.word.word, &areas(&a.word.areas)?)?;
    let opts = MasterOptions {
        route: a.route,
        k_max: a.k_max,
        budget: a.budget,
        samples: a.samples,
        seed: a.seed,
        deterministic: a.deterministic,
    };
    let r = run_master(&w, &opts)?;
    print_report(out, &r, a.format);
    Ok(0)
}

fn table(a: TableArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let opts = TableOptions {
        grid: a.grid,
        ns: a.n,
        tol: a.tol,
        walk: !a.no_walk,
        series: SeriesParams {
            budget: a.budget.unwrap_or(DEFAULT_BUDGET),
            ..SeriesParams::default()
        },
    };
    if opts.grid.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(CliError::parse("grid areas must be positive and finite"));
    }
    let rows = run_table(&a.rows, &opts)?;
    let pass = rows.iter().all(|r| r.status != RowStatus::Fail);
    let doc = json!({ "schema": ym2::SCHEMA_VERSION, "tol": opts.tol, "rows": rows, "pass": pass });
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&doc).expect("serializable")
    );
    Ok(if pass { 0 } else { 1 })
}

fn mm(a: MmArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let partials = a
        .partials
        .iter()
        .map(|p| p.parse::<PartialSpec>())
        .collect::<Result<Vec<_>, _>>()?;
    let g = group(&a.group, a.n)?;
    let params = SeriesParams {
        k_max: a.k_max,
        ..SeriesParams::default()
    };
    let r = mm_check(
        &a.word.word,
        &a.split,
        &areas(&a.word.areas)?,
        &partials,
        &g,
        a.h,
        &params,
    )?;
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&r).expect("serializable")
    );
    Ok(0)
}

fn compare_cmd(a: CompareArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let mut base = JobSpec::new(&a.word.word, Engine::Series);
    base.areas = areas(&a.word.areas)?;
    base.group = a.group;
    base.n = Some(a.n);
    base.k_max = a.k_max;
    base.samples = Some(a.samples);
    base.seed = Some(a.seed);
    base.steps = Some(a.steps);
    base.deterministic = a.deterministic;
    let c = compare(&base, &a.engines)?;
    let _ = writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&c).expect("serializable")
    );
    Ok(if c.all_agree { 0 } else { 1 })
}

fn limits(a: LimitsArgs, out: &mut impl Write) -> Result<u8, CliError> {
    let target = match (a.mode, a.word, a.row) {
        (LimitMode::Large, None, Some(id)) => {
            let values = if a.values.is_empty() {
                vec![1.0; ym2::table::find_row(id)?.vars.len()]
            } else {
                a.values
            };
            LimitTarget::Row { id, values }
        }
        (LimitMode::N1 | LimitMode::Small, Some(word), None) => LimitTarget::Word {
            word,
            areas: areas(&a.areas)?,
        },
        (LimitMode::Large, _, _) => return Err(CliError::parse("--mode large needs --row")),
        _ => return Err(CliError::parse("--mode n1 and --mode small need --word")),
    };
    let scales = if a.scales.is_empty() {
        a.mode.default_scales()
    } else {
        a.scales
    };
    let points = run_limits(a.mode, &target, a.n, &scales, &SeriesParams::default())?;
    let _ = writeln!(out, "{LIMITS_CSV_HEADER}");
    for p in points {
        let _ = writeln!(out, "{}", p.to_csv_row());
    }
    Ok(0)
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    if let Some(t) = cli.threads {
        if t == 0 {
            return Err(CliError::parse("--threads must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::parse(format!("cannot start the thread pool: {e}")))?;
    }
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Eval(a) => eval(a, &mut out),
        Command::Master(a) => master(a, &mut out),
        Command::Table(a) => table(a, &mut out),
        Command::MmCheck(a) => mm(a, &mut out),
        Command::Compare(a) => compare_cmd(a, &mut out),
        Command::Limits(a) => limits(a, &mut out),
    }
}

fn fail(e: &CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail(&CliError::parse(e.to_string().trim_end()));
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => fail(&e),
    }
}
