mod cache;
mod check;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use qtsym::exprlang::{self, Env, Value};
use qtsym::hlv;
use qtsym::partition::Partition;
use qtsym::symfun::{Basis, SymFunc};
use serde_json::json;

use cache::Cache;
use check::Identity;
use output::{Envelope, Format};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(qtsym::Error),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("{0} instance(s) failed")]
    CheckFailed(usize),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(qtsym::Error::Syntax { .. } | qtsym::Error::Precondition(_)) => 2,
            CliError::Core(qtsym::Error::InvalidPartition(_) | qtsym::Error::UnknownBasis(_)) => 2,
            _ => 1,
        }
    }
}

impl From<qtsym::Error> for CliError {
    fn from(e: qtsym::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(
    name = "qtsym",
    version,
    about = "Exact plethystic calculus over Q(q,t)"
)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Directory for cached Macdonald blocks.
    #[arg(long, global = true, env = "QTSYM_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the disk cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression.
    Eval {
        expr: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
        /// Coefficient variables that count towards the truncation degree.
        #[arg(long, value_delimiter = ',')]
        small: Vec<String>,
        /// Basis for printing functions of X.
        #[arg(long, default_value = "m", value_parser = parse_basis)]
        basis: Basis,
    },
    /// Print the modified Macdonald polynomial H_λ.
    Macdonald {
        #[arg(long, value_parser = parse_partition)]
        lambda: Partition,
        #[arg(long, default_value = "m", value_parser = parse_basis)]
        basis: Basis,
    },
    /// Kernels and pairings on several alphabets.
    #[command(subcommand)]
    Hlv(HlvCommand),
    /// Verify an identity on a family of instances.
    Check(CheckArgs),
    /// Inspect or fill the on-disk Macdonald cache.
    #[command(subcommand)]
    Cache(CacheCommand),
}

#[derive(Subcommand)]
enum HlvCommand {
    /// The kernel Ω on k alphabets.
    Omega {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// ℍ = Q·pLog Ω on k alphabets.
    Hh {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
    /// ℍ(F_1, …, F_k) for `;`-separated symmetric functions.
    Pair {
        #[arg(long)]
        args: String,
        #[arg(long, default_value_t = 4)]
        max_degree: usize,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[arg(value_enum)]
    identity: Identity,
    /// Restrict to these partitions (repeatable); all up to --size otherwise.
    #[arg(long, value_parser = parse_partition)]
    lambda: Vec<Partition>,
    /// Second partitions, for theorem7 and duality.
    #[arg(long, value_parser = parse_partition)]
    mu: Vec<Partition>,
    /// Numbers of alphabets, comma separated.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    /// Largest partition size when none are given.
    #[arg(long, default_value_t = 3)]
    size: usize,
    #[arg(long, default_value_t = 4)]
    max_degree: usize,
}

#[derive(Subcommand)]
enum CacheCommand {
    /// List cached degrees and quarantined files.
    Stats,
    /// Delete all cached blocks.
    Clear,
    /// Precompute Macdonald blocks up to the given degree.
    Warm {
        #[arg(long)]
        max_degree: usize,
    },
}

fn parse_partition(s: &str) -> Result<Partition, String> {
    s.parse().map_err(|e: qtsym::Error| e.to_string())
}

fn parse_basis(s: &str) -> Result<Basis, String> {
    s.parse().map_err(|e: qtsym::Error| e.to_string())
}

fn sym_of(v: Value, what: &str) -> Result<SymFunc, CliError> {
    match v {
        Value::Scalar(c) => Ok(SymFunc::constant(c)),
        Value::Element(m) => m
            .to_sym()
            .ok_or_else(|| CliError::Usage(format!("`{what}` is not a function of one alphabet"))),
        Value::Series(_) => Err(CliError::Usage(format!("`{what}` is a series"))),
    }
}

fn value_envelope(
    query: String,
    v: &Value,
    basis: Basis,
    order: usize,
    start: Instant,
) -> Result<Envelope, CliError> {
    let latex = match v {
        Value::Scalar(c) => Some(output::latex_ratfunc(c)),
        _ => None,
    };
    Ok(Envelope {
        query,
        kind: v.kind().name().to_string(),
        text: v.to_text(basis)?,
        json: v.to_json(basis)?,
        latex,
        order: (v.kind() == exprlang::Kind::Series).then_some(order),
        elapsed: start.elapsed(),
        failed: 0,
    })
}

fn run(cli: &Cli) -> Result<(Envelope, Vec<String>), CliError> {
    let start = Instant::now();
    let cache = Cache::new(cli.cache_dir.clone().unwrap_or_else(cache::default_dir));
    let mut notes = Vec::new();
    if let Command::Cache(c) = &cli.command {
        let env = match c {
            CacheCommand::Stats => {
                let s = cache.stats()?;
                let mut text = format!("cache directory: {}\n", cache.dir().display());
                text += &format!("{:>6}  {:>11}  {:>9}\n", "degree", "polynomials", "bytes");
                for e in &s.entries {
                    text += &format!("{:>6}  {:>11}  {:>9}\n", e.degree, e.polynomials, e.bytes);
                }
                text += &format!(
                    "entries: {}, quarantined: {}",
                    s.entries.len(),
                    s.quarantined
                );
                let entries: Vec<_> = s
                    .entries
                    .iter()
                    .map(|e| json!({"degree": e.degree, "polynomials": e.polynomials, "bytes": e.bytes}))
                    .collect();
                Envelope {
                    query: "cache stats".into(),
                    kind: "cache".into(),
                    text,
                    json: json!({"entries": entries, "quarantined": s.quarantined}),
                    latex: None,
                    order: None,
                    elapsed: start.elapsed(),
                    failed: 0,
                }
            }
            CacheCommand::Clear => {
                let n = cache.clear()?;
                Envelope {
                    query: "cache clear".into(),
                    kind: "cache".into(),
                    text: format!("removed {n} file(s)"),
                    json: json!({"removed": n}),
                    latex: None,
                    order: None,
                    elapsed: start.elapsed(),
                    failed: 0,
                }
            }
            CacheCommand::Warm { max_degree } => {
                let (computed, warnings) = cache.warm(*max_degree)?;
                notes.extend(warnings);
                let list: Vec<String> = computed.iter().map(usize::to_string).collect();
                Envelope {
                    query: format!("cache warm --max-degree {max_degree}"),
                    kind: "cache".into(),
                    text: format!("computed degrees: [{}]", list.join(", ")),
                    json: json!({"computed": computed, "max_degree": max_degree}),
                    latex: None,
                    order: Some(*max_degree),
                    elapsed: start.elapsed(),
                    failed: 0,
                }
            }
        };
        return Ok((env, notes));
    }

    let loaded = if cli.no_cache {
        Vec::new()
    } else {
        let (loaded, warnings) = cache.load()?;
        notes.extend(warnings);
        loaded
    };
    let env = dispatch(&cli.command, start)?;
    if !cli.no_cache {
        cache.persist(&loaded)?;
    }
    Ok((env, notes))
}

fn dispatch(command: &Command, start: Instant) -> Result<Envelope, CliError> {
    Ok(match command {
        Command::Eval {
            expr,
            max_degree,
            small,
            basis,
        } => {
            let env = Env {
                order: *max_degree,
                small: small.clone(),
            };
            let v = exprlang::eval_str(expr, &env)?;
            value_envelope(expr.clone(), &v, *basis, *max_degree, start)?
        }
        Command::Macdonald { lambda, basis } => {
            let h = SymFunc::from_basis(Basis::Macdonald, lambda)?;
            Envelope {
                query: format!("macdonald --lambda {lambda}"),
                kind: "element".into(),
                text: h.to_text(*basis)?,
                json: json!({"lambda": lambda.parts(), "value": h.to_json(*basis)?}),
                latex: None,
                order: None,
                elapsed: start.elapsed(),
                failed: 0,
            }
        }
        Command::Hlv(HlvCommand::Omega { k, max_degree } | HlvCommand::Hh { k, max_degree }) => {
            let name = if matches!(command, Command::Hlv(HlvCommand::Omega { .. })) {
                "omega"
            } else {
                "HH"
            };
            if !(1..=hlv::MAX_K).contains(k) {
                return Err(CliError::Usage(format!(
                    "--k must lie in 1..={}",
                    hlv::MAX_K
                )));
            }
            let env = Env {
                order: *max_degree,
                small: Vec::new(),
            };
            let v = exprlang::eval_str(&format!("{name}({k})"), &env)?;
            value_envelope(
                format!("hlv {} --k {k}", name.to_lowercase()),
                &v,
                Basis::P,
                *max_degree,
                start,
            )?
        }
        Command::Hlv(HlvCommand::Pair { args, max_degree }) => {
            let env = Env {
                order: *max_degree,
                small: Vec::new(),
            };
            let fs = args
                .split(';')
                .map(|a| sym_of(exprlang::eval_str(a.trim(), &env)?, a))
                .collect::<Result<Vec<_>, _>>()?;
            let p = hlv::hh_pair(&fs, *max_degree)?;
            let mut text = p.value.to_string();
            if let Some(w) = &p.warning {
                text += &format!("\nwarning: {w}");
            }
            Envelope {
                query: format!("hlv pair --args {args}"),
                kind: "scalar".into(),
                text,
                json: json!({"value": p.value.to_string(), "warning": p.warning}),
                latex: Some(output::latex_ratfunc(&p.value)),
                order: Some(*max_degree),
                elapsed: start.elapsed(),
                failed: 0,
            }
        }
        Command::Check(a) => {
            let params = check::Params {
                lambda: a.lambda.clone(),
                mu: a.mu.clone(),
                k: a.k.clone(),
                size: a.size,
                order: a.max_degree,
            };
            let report = check::run(a.identity, &params)?;
            let mut env = Envelope {
                query: format!("check {}", a.identity.name()),
                kind: "check".into(),
                text: report.text(),
                json: report.json(),
                latex: None,
                order: Some(a.max_degree),
                elapsed: start.elapsed(),
                failed: 0,
            };
            env.failed = report.failed();
            env
        }
        Command::Cache(_) => unreachable!("handled by run"),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok((env, notes)) => {
            for n in notes {
                eprintln!("warning: {n}");
            }
            let (out, err) = env.render(cli.format);
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout(), "{out}");
            if let Some(e) = err {
                eprintln!("{e}");
            }
            if env.failed > 0 {
                eprintln!("error: {}", CliError::CheckFailed(env.failed));
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
