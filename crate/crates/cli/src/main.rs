use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use lrspos::decide::{decide_positivity, decide_ultimate, Config, Verdict};
use lrspos::hardness::{circle_point, default_grid, report, CirclePoint};
use lrspos::lrs::format::parse_rational;
use lrspos::lrs::{parse_raw, to_text, validate_and_normalize, Lrs};
use lrspos::{report as analysis, selftest, Error};
use serde_json::{json, Value};

const INPUT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "lrspos", version, about = "Positivity and ultimate positivity of integer linear recurrences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Read the recurrence from FILE
    #[arg(long, global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Emit JSON
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, value_name = "N")]
    prefix_cutoff: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    exact_below: Option<u64>,
    #[arg(long, global = true, value_name = "N")]
    max_precision_bits: Option<u32>,
    #[arg(long = "relation-bound", global = true, value_name = "N")]
    relation_bound: Option<i64>,
    /// Scan horizon for the hardness lab
    #[arg(long, global = true, value_name = "N")]
    horizon: Option<u64>,
    /// Omit the timestamp field from JSON output
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Roots, dominance, degeneracy and relations
    Analyze(Inline),
    /// Decide whether every term is nonnegative
    DecidePositivity(Inline),
    /// Decide whether all but finitely many terms are nonnegative
    DecideUltimate(Inline),
    /// Print exact terms
    Eval {
        #[arg(long, default_value_t = 0)]
        from: u64,
        #[arg(long, default_value_t = 20)]
        to: u64,
        #[command(flatten)]
        lrs: Inline,
    },
    /// Diophantine hardness lab on a rational point of the unit circle
    Hardness {
        /// Point as `p,q` with p^2 + q^2 = 1
        #[arg(long, default_value = "3/5,4/5")]
        point: String,
        /// Comma-separated r values; defaults to j/20 for j = 1..200
        #[arg(long)]
        r: Option<String>,
        #[arg(long, default_value = "1/10")]
        epsilon: String,
    },
    /// Run the embedded acceptance checks
    Selftest {
        /// Use the full acceptance sizes
        #[arg(long)]
        full: bool,
    },
}

#[derive(Args)]
struct Inline {
    /// Recurrence as `a1 ... ak | u0 ... u(k-1)` or JSON
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    lrs: Vec<String>,
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

fn config(opts: &Opts) -> Result<Config, Failure> {
    let mut cfg = match std::env::var_os("LRSPOS_CONFIG") {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| Failure(format!("{}: {e}", PathBuf::from(&path).display())))?;
            serde_json::from_str(&text).map_err(|e| Failure(format!("config file: {e}")))?
        }
        None => Config::default(),
    };
    if let Some(v) = opts.prefix_cutoff {
        cfg.prefix_cutoff = v;
    }
    if let Some(v) = opts.exact_below {
        cfg.exact_below = v;
    }
    if let Some(v) = opts.max_precision_bits {
        cfg.max_precision_bits = v;
    }
    if let Some(v) = opts.relation_bound {
        cfg.relation_search_bound = v;
    }
    Ok(cfg)
}

fn read_lrs(inline: &Inline, opts: &Opts) -> Result<Lrs, Failure> {
    let text = match (&opts.input, inline.lrs.is_empty()) {
        (Some(_), false) => return Err(Failure("give the recurrence either inline or with --input, not both".into())),
        (Some(path), true) => std::fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        (None, false) => inline.lrs.join(" "),
        (None, true) => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(format!("stdin: {e}")))?;
            s
        }
    };
    Ok(validate_and_normalize(&parse_raw(&text)?)?)
}

fn stamp(mut v: Value, opts: &Opts) -> Value {
    if !opts.no_timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        v["timestamp"] = json!(secs);
    }
    v
}

fn print_json(v: Value, opts: &Opts) {
    println!("{}", serde_json::to_string_pretty(&stamp(v, opts)).expect("serializable"));
}

fn print_verdict(v: &Verdict, opts: &Opts) -> ExitCode {
    if opts.json {
        print_json(v.to_json(), opts);
    } else {
        println!("input: {}", to_text(&v.input));
        println!("verdict: {}", v.kind.as_str());
        if let Some(w) = &v.witness {
            println!("witness: u[{}] = {}", w.n, w.value);
        }
        if let Some(t) = &v.threshold {
            let j = t.to_json(v.config.prefix_cutoff);
            match j.as_str() {
                Some(s) => println!("threshold: {s}"),
                None => println!("threshold: {} (about 10^{})", j["symbolic"].as_str().unwrap_or("?"), j["log10"]),
            }
        }
        if let Some(c) = v.checked_up_to {
            println!("checked up to: {c}");
        }
    }
    ExitCode::from(v.kind.exit_code() as u8)
}

fn parse_point(s: &str) -> Result<CirclePoint, Failure> {
    let (p, q) = s.split_once(',').ok_or_else(|| Failure(format!("point `{s}` must be `p,q`")))?;
    let p = parse_rational(p).map_err(Failure)?;
    let q = parse_rational(q).map_err(Failure)?;
    Ok(CirclePoint::new(p, q)?)
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let opts = &cli.opts;
    let cfg = config(opts)?;
    match &cli.command {
        Command::Analyze(inline) => {
            let u = read_lrs(inline, opts)?;
            let v = analysis::analysis(&u, &cfg)?;
            if opts.json {
                print_json(v, opts);
            } else {
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DecidePositivity(inline) => Ok(print_verdict(&decide_positivity(&read_lrs(inline, opts)?, &cfg)?, opts)),
        Command::DecideUltimate(inline) => Ok(print_verdict(&decide_ultimate(&read_lrs(inline, opts)?, &cfg)?, opts)),
        Command::Eval { from, to, lrs } => {
            let u = read_lrs(lrs, opts)?;
            if from > to {
                return Err(Failure(format!("empty range {from}..={to}")));
            }
            let terms: Vec<(u64, String)> = (*from..=*to).map(|n| (n, u.term(n).to_string())).collect();
            if opts.json {
                let list: Vec<Value> = terms.iter().map(|(n, x)| json!({"n": n, "value": x})).collect();
                print_json(json!({"input": to_text(&u), "terms": list}), opts);
            } else {
                for (n, x) in terms {
                    println!("{n}\t{x}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hardness { point, r, epsilon } => {
            let pt = match point.split_once(',') {
                Some(_) => parse_point(point)?,
                None => circle_point(&parse_rational(point).map_err(Failure)?)?,
            };
            let grid = match r {
                Some(list) => list.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>().map_err(Failure)?,
                None => default_grid(200),
            };
            let eps = parse_rational(epsilon).map_err(Failure)?;
            let v = report(&pt, &grid, &eps, opts.horizon.unwrap_or(100_000), cfg.max_precision_bits.max(128))?;
            if opts.json {
                print_json(v, opts);
            } else {
                println!("point: ({}, {})", v["point"]["p"].as_str().unwrap_or("?"), v["point"]["q"].as_str().unwrap_or("?"));
                println!("window: {} <= m <= {}", v["n"], v["horizon"]);
                println!("bracket: [{}, {}]", v["bracket"][0].as_str().unwrap_or("?"), v["bracket"][1].as_str().unwrap_or("?"));
                println!("oracle: {} +- {} (m = {})", v["oracle"]["value"].as_str().unwrap_or("?"), v["oracle"]["error"].as_str().unwrap_or("?"), v["oracle"]["argmin"]);
                println!("finite horizon: true");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { full } => {
            let checks = selftest::run(*full);
            let ok = checks.iter().all(|c| c.passed);
            if opts.json {
                print_json(json!({"passed": ok, "checks": checks}), opts);
            } else {
                for c in &checks {
                    println!("[{}] {:>2} {}: {} ({:.1}s)", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail, c.seconds);
                }
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("lrspos: {msg}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
