//! `lrc`: generate, verify, encode, repair and stress-test locally recoverable codes.
//!
//! Exit codes: 0 ok, 2 bad parameters or flags, 3 a verified claim or invariant
//! failed, 4 unreadable or malformed code file, 5 an erasure pattern is not
//! locally repairable.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lrc_core::repair::{repair_all, simulate_failures, ErasurePattern, RepairError};
use lrc_core::verify::{full_report, ReportOptions, DEFAULT_EXACT_CAP};
use lrc_core::{encode, plan_params, spec_file, table1_preset, CodeInstance, Strategy};

#[derive(Parser)]
#[command(name = "lrc", version, about = "Locally recoverable codes over GF(q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a code and write its description file.
    Gen(GenArgs),
    /// Check rank, locality, distance and the Singleton-like bound.
    Verify(VerifyArgs),
    /// Encode a message, or repair a received word containing `?` erasures.
    #[command(visible_alias = "repair")]
    Encode(EncodeArgs),
    /// Erase random positions and repair them group-locally.
    Simulate(SimulateArgs),
    /// List the long-code presets feasible at a field size.
    Table1 {
        #[arg(long)]
        q: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Full,
    Colwise,
    Global,
    Random,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Full => Strategy::Full,
            StrategyArg::Colwise => Strategy::Colwise,
            StrategyArg::Global => Strategy::Global,
            StrategyArg::Random => Strategy::Random,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    q: u64,
    #[arg(long, required_unless_present = "table1_row")]
    r: Option<usize>,
    #[arg(long, default_value_t = 2)]
    mu: usize,
    #[arg(long, default_value_t = 0)]
    w: usize,
    #[arg(long, required_unless_present = "table1_row")]
    l: Option<usize>,
    /// Defaults to l.
    #[arg(long)]
    t: Option<usize>,
    #[arg(long, value_enum, default_value = "full")]
    strategy: StrategyArg,
    /// Required for the random strategy.
    #[arg(long)]
    seed: Option<u64>,
    /// Long-code preset row (1-8); overrides r, mu, w, l, t and strategy.
    #[arg(long, conflicts_with_all = ["r", "l", "t", "w", "mu", "strategy", "seed"])]
    table1_row: Option<usize>,
    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long, default_value_t = DEFAULT_EXACT_CAP)]
    exact_cap: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct EncodeInput {
    /// k message symbols (decimal encodings), separated by spaces or commas.
    #[arg(long)]
    msg: Option<String>,
    /// n received symbols with `?` for erasures.
    #[arg(long)]
    codeword: Option<String>,
}

#[derive(Args)]
struct EncodeArgs {
    file: PathBuf,
    #[command(flatten)]
    input: EncodeInput,
}

#[derive(Args)]
struct SimulateArgs {
    file: PathBuf,
    #[arg(long)]
    failures: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl ToString) -> Failure {
    Failure {
        code,
        msg: msg.to_string(),
    }
}

const EXIT_PARAMS: u8 = 2;
const EXIT_CLAIM: u8 = 3;
const EXIT_PARSE: u8 = 4;
const EXIT_IRREPARABLE: u8 = 5;

fn load(path: &PathBuf) -> Result<CodeInstance, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    spec_file::parse(&text).map_err(|e| fail(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn cmd_gen(args: GenArgs) -> Result<(), Failure> {
    let (params, seed) = match args.table1_row {
        Some(row) => (table1_preset(row, args.q), None),
        None => {
            let strategy = Strategy::from(args.strategy);
            if strategy == Strategy::Random && args.seed.is_none() {
                return Err(fail(EXIT_PARAMS, "--strategy random requires --seed"));
            }
            let params = plan_params(
                args.q,
                args.r.expect("required by clap"),
                args.mu,
                args.w,
                args.l.expect("required by clap"),
                args.t,
                strategy,
            );
            (params, args.seed)
        }
    };
    let params = params.map_err(|e| fail(EXIT_PARAMS, e))?;
    let instance = CodeInstance::build(params, seed).map_err(|e| fail(EXIT_PARAMS, e))?;
    let text = spec_file::serialize(&instance);
    match args.out {
        Some(path) => {
            fs::write(&path, text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(args: VerifyArgs) -> Result<(), Failure> {
    let instance = load(&args.file)?;
    let mut opts = ReportOptions {
        exact_cap: args.exact_cap,
        trials: args.trials,
        seed: args.seed,
        ..ReportOptions::default()
    };
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(fail(EXIT_PARAMS, "--workers must be at least 1"));
        }
        opts.workers = w;
    }
    let started = Instant::now();
    let report = full_report(&instance, &opts);
    match args.format {
        Format::Text => print!("{report}"),
        Format::Machine => println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("report serializes")
        ),
    }
    eprintln!("verified in {:.2?}", started.elapsed());
    if report.any_claim_failed() || !report.invariants_hold() {
        return Err(fail(
            EXIT_CLAIM,
            "verification found a failed claim or invariant",
        ));
    }
    Ok(())
}

fn parse_symbols(text: &str, allow_erasure: bool) -> Result<Vec<Option<u32>>, Failure> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|tok| {
            if allow_erasure && tok == "?" {
                Ok(None)
            } else {
                tok.parse()
                    .map(Some)
                    .map_err(|_| fail(EXIT_PARAMS, format!("bad symbol {tok:?}")))
            }
        })
        .collect()
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_encode(args: EncodeArgs) -> Result<(), Failure> {
    let instance = load(&args.file)?;
    let q = instance.field.q();
    if let Some(msg) = args.input.msg {
        let msg: Vec<u32> = parse_symbols(&msg, false)?.into_iter().flatten().collect();
        let word = encode(&instance, &msg).map_err(|e| fail(EXIT_PARAMS, e))?;
        println!("{}", join(&word));
        return Ok(());
    }
    let received = parse_symbols(&args.input.codeword.expect("clap group"), true)?;
    if let Some(bad) = received.iter().flatten().find(|&&x| x >= q) {
        return Err(fail(EXIT_PARAMS, format!("symbol {bad} is not in GF({q})")));
    }
    let pattern = ErasurePattern::new(received);
    let (word, traces) = repair_all(&instance, &pattern).map_err(|e| match e {
        RepairError::TooManyErasuresInGroup { .. } => fail(EXIT_IRREPARABLE, e),
        _ => fail(EXIT_PARAMS, e),
    })?;
    println!("{}", join(&word));
    let reads = traces.first().map_or(instance.params.r, |t| t.symbols_read);
    println!("reads per repair: {reads}");
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), Failure> {
    let instance = load(&args.file)?;
    let stats = simulate_failures(&instance, args.failures, args.trials, args.seed)
        .map_err(|e| fail(EXIT_PARAMS, e))?;
    println!("trials: {}", stats.trials);
    println!("failures per trial: {}", stats.failures);
    println!(
        "fully repaired: {} ({:.4})",
        stats.fully_repaired_trials, stats.repaired_fraction
    );
    println!("repaired symbols: {}", stats.repaired_symbols);
    println!(
        "mean reads per repaired symbol: {:.4}",
        stats.mean_reads_per_symbol
    );
    println!("repair mismatches: {}", stats.mismatches);
    println!("erasures per group histogram:");
    for (c, count) in stats.erasures_per_group.iter().enumerate() {
        println!("  {c}: {count}");
    }
    Ok(())
}

fn cmd_table1(q: u64) -> Result<(), Failure> {
    println!("row locality length dimension distance");
    let mut any = false;
    for row in 1..=lrc_core::construction::TABLE1_ROWS {
        if let Ok(p) = table1_preset(row, q) {
            any = true;
            println!("{row} {} {} {} {}", p.r, p.n, p.k, p.w + 2);
        }
    }
    if !any {
        return Err(fail(
            EXIT_PARAMS,
            format!("no preset row is feasible at q={q}"),
        ));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Table1 { q } => cmd_table1(q),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
