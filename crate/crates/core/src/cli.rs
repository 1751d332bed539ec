//! Command-line front end. `run_cli` returns the process exit code:
//! 0 yes/success, 1 no, 2 usage or input error, 3 resource budget exceeded.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::algebra::{Elem, Term};
use crate::decision::{Decider, DecisionReport};
use crate::digraph::{has_algebraic_length_one, has_loop, is_smooth, parse_digraph};
use crate::error::{Error, Result};
use crate::image::{minimal_unary_idempotent_with, restrict_to_image};
use crate::io::{format_algebra, format_report, read_algebra, report_to_json};
use crate::limits::Limits;
use crate::oracle::{
    corpus_file_name, oracle_find_quasi_siggers, oracle_find_qwnu, random_algebra,
    DEFAULT_CLONE_BUDGET,
};

/// Overrides the default budget (subpower tuples, or clone tables for
/// `oracle`) when `--budget` is absent.
pub const BUDGET_ENV: &str = "MALTSEV_LAB_BUDGET";

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "maltsev-lab",
    version,
    about = "Decide Maltsev conditions of finite algebras"
)]
struct Cli {
    /// Print witness terms.
    #[arg(long, global = true)]
    witness: bool,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Budget: subpower tuples for `check`/`image`, clone tables for `oracle`.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a decision procedure.
    #[command(subcommand)]
    Check(Check),
    /// Brute-force clone enumeration.
    #[command(subcommand)]
    Oracle(Oracle),
    /// Print the minimal idempotent unary term operation and its image.
    Image {
        file: PathBuf,
        /// Also restrict this term (prefix notation) to the image.
        #[arg(long)]
        term: Option<String>,
        /// Arity for `--term` (defaults to its largest variable + 1).
        #[arg(long)]
        arity: Option<usize>,
    },
    /// Generate seeded random algebras.
    Gen(Gen),
    /// Digraph properties of an edge-list file.
    #[command(subcommand)]
    Digraph(DigraphCmd),
}

#[derive(Debug, Subcommand)]
enum Check {
    /// k-ary quasi WNU term.
    Qwnu {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// k-ary WNU term of an idempotent algebra.
    WnuIdemp {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Quasi Taylor term (quasi Siggers instances).
    Qtaylor { file: PathBuf },
    /// Diagonal Siggers matrix: a yes implies quasi Taylor, a no does not
    /// refute it.
    Diagonal { file: PathBuf },
    /// n-local k-qWNU terms.
    Nlocal {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Oracle {
    /// Search the k-ary clone slice for a qWNU table.
    Qwnu {
        #[arg(long)]
        k: usize,
        file: PathBuf,
    },
    /// Search the 4-ary clone slice for a quasi Siggers table.
    Qsiggers { file: PathBuf },
}

#[derive(Debug, Args)]
struct Gen {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    size: usize,
    /// Comma-separated arities, one operation each.
    #[arg(long, value_delimiter = ',', required = true)]
    arity: Vec<usize>,
    #[arg(long)]
    idempotent: bool,
    /// Number of algebras (seeds `seed`, `seed+1`, ...).
    #[arg(long, default_value_t = 1)]
    count: u64,
    /// Write one file per algebra into this directory instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum DigraphCmd {
    LengthOne { file: PathBuf },
    Loop { file: PathBuf },
    Smooth { file: PathBuf },
}

/// Runs the CLI against the process streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output and diagnostic streams.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_YES
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource() {
                EXIT_RESOURCE
            } else {
                EXIT_USAGE
            }
        }
    }
}

fn env_budget() -> Result<Option<usize>> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Argument(format!("{BUDGET_ENV}={v} is not a number"))),
        Err(_) => Ok(None),
    }
}

fn budget(cli: &Cli) -> Result<Option<usize>> {
    match cli.budget {
        Some(b) => Ok(Some(b)),
        None => env_budget(),
    }
}

fn limits(cli: &Cli) -> Result<Limits> {
    let mut l = Limits::default();
    if let Some(b) = budget(cli)? {
        l.max_tuples = b;
        l.max_unary_maps = b;
    }
    Ok(l)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Argument(format!("write failed: {e}"))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Check(check) => {
            let decider = Decider::new(limits(cli)?);
            let report = match check {
                Check::Qwnu { k, file } => decider.has_k_qwnu(&read_algebra(file)?, *k)?,
                Check::WnuIdemp { k, file } => decider.has_k_wnu_idemp(&read_algebra(file)?, *k)?,
                Check::Qtaylor { file } => decider.has_quasi_taylor(&read_algebra(file)?)?,
                Check::Diagonal { file } => decider.diagonal_siggers_test(&read_algebra(file)?)?,
                Check::Nlocal { n, k, file } => {
                    decider.has_n_local_k_qwnu(&read_algebra(file)?, *n, *k)?
                }
            };
            emit_report(cli, &report, out)?;
            Ok(if report.is_yes() { EXIT_YES } else { EXIT_NO })
        }
        Command::Oracle(cmd) => {
            let budget = budget(cli)?.unwrap_or(DEFAULT_CLONE_BUDGET);
            let (kind, k, file) = match cmd {
                Oracle::Qwnu { k, file } => {
                    if *k < 2 {
                        return Err(Error::Argument("k must be at least 2".into()));
                    }
                    ("qwnu", *k, file)
                }
                Oracle::Qsiggers { file } => ("qsiggers", 4, file),
            };
            let alg = read_algebra(file)?;
            let r = if kind == "qwnu" {
                oracle_find_qwnu(&alg, k, budget)
            } else {
                oracle_find_quasi_siggers(&alg, budget)
            };
            let verdict = r.verdict();
            if cli.json {
                let v = json!({
                    "search": kind,
                    "algebra": alg.name(),
                    "k": k,
                    "found": verdict,
                    "complete": r.complete,
                    "tables_explored": r.tables_explored,
                    "table": r.table,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
                    .map_err(io_err)?;
            } else {
                let answer = match verdict {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "unknown (budget exhausted)",
                };
                writeln!(out, "oracle {kind} k={k} on {}: {answer}", alg.name()).map_err(io_err)?;
                writeln!(out, "tables explored: {}", r.tables_explored).map_err(io_err)?;
                if let (true, Some(t)) = (cli.witness, &r.table) {
                    writeln!(out, "table: {}", join(t)).map_err(io_err)?;
                }
            }
            Ok(match verdict {
                Some(true) => EXIT_YES,
                Some(false) => EXIT_NO,
                None => EXIT_RESOURCE,
            })
        }
        Command::Image { file, term, arity } => {
            let alg = read_algebra(file)?;
            let img = minimal_unary_idempotent_with(&alg, &limits(cli)?)?;
            let restricted = match term {
                Some(t) => {
                    let t: Term = t.parse()?;
                    t.check(&alg)?;
                    let arity = arity.unwrap_or(t.min_arity());
                    Some(restrict_to_image(&alg, &img, &t, arity)?)
                }
                None => None,
            };
            if cli.json {
                let v = json!({
                    "algebra": alg.name(),
                    "alpha": img.alpha.images(),
                    "image": img.image,
                    "restricted": restricted.as_ref().map(|r| json!({
                        "arity": r.arity,
                        "power": r.power,
                        "table": r.table,
                    })),
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
                    .map_err(io_err)?;
            } else {
                writeln!(out, "alpha: {}", join(img.alpha.images())).map_err(io_err)?;
                writeln!(
                    out,
                    "B: {{{}}}",
                    img.image
                        .iter()
                        .map(Elem::to_string)
                        .collect::<Vec<_>>()
                        .join(",")
                )
                .map_err(io_err)?;
                if let Some(r) = restricted {
                    writeln!(out, "restricted (power {}): {}", r.power, join(&r.table))
                        .map_err(io_err)?;
                }
            }
            Ok(EXIT_YES)
        }
        Command::Gen(g) => {
            if g.size == 0 {
                return Err(Error::Argument("size must be at least 1".into()));
            }
            if let Some(dir) = &g.out {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::Argument(format!("{}: {e}", dir.display())))?;
            }
            for seed in g.seed..g.seed + g.count {
                let alg = random_algebra(seed, g.size, &g.arity, g.idempotent);
                let text = format_algebra(&alg);
                match &g.out {
                    Some(dir) => write_file(
                        &dir.join(corpus_file_name(seed, g.size, &g.arity, g.idempotent)),
                        &text,
                    )?,
                    None => write!(out, "{text}").map_err(io_err)?,
                }
            }
            Ok(EXIT_YES)
        }
        Command::Digraph(cmd) => {
            let (prop, file) = match cmd {
                DigraphCmd::LengthOne { file } => ("length-one", file),
                DigraphCmd::Loop { file } => ("loop", file),
                DigraphCmd::Smooth { file } => ("smooth", file),
            };
            let text = std::fs::read_to_string(file)
                .map_err(|e| Error::NotFound(format!("{}: {e}", file.display())))?;
            let g = parse_digraph(&text)?;
            let (holds, detail) = match prop {
                "length-one" => match has_algebraic_length_one(&g) {
                    Some(w) => {
                        let steps: Vec<String> = w
                            .steps
                            .iter()
                            .map(|s| {
                                if s.forward {
                                    format!("{}->{}", s.from, s.to)
                                } else {
                                    format!("{}<-{}", s.to, s.from)
                                }
                            })
                            .collect();
                        (true, Some(json!({ "start": w.start, "steps": steps })))
                    }
                    None => (false, None),
                },
                "loop" => match has_loop(&g) {
                    Some(v) => (true, Some(json!({ "vertex": v }))),
                    None => (false, None),
                },
                _ => (is_smooth(&g), None),
            };
            if cli.json {
                let v = json!({ "property": prop, "holds": holds, "certificate": detail });
                writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"))
                    .map_err(io_err)?;
            } else {
                writeln!(out, "{prop}: {}", if holds { "yes" } else { "no" }).map_err(io_err)?;
                if let Some(d) = detail {
                    writeln!(out, "certificate: {d}").map_err(io_err)?;
                }
            }
            Ok(if holds { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn join(t: &[Elem]) -> String {
    t.iter().map(Elem::to_string).collect::<Vec<_>>().join(" ")
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))
}

fn emit_report(cli: &Cli, report: &DecisionReport, out: &mut dyn Write) -> Result<()> {
    let text = if cli.json {
        let mut r = report.clone();
        if !cli.witness {
            r.witnesses.clear();
        }
        report_to_json(&r) + "\n"
    } else {
        format_report(report, cli.witness)
    };
    out.write_all(text.as_bytes()).map_err(io_err)
}
