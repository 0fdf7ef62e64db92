//! `locus`: batch front end. Reports go to stdout (or `--out`) as JSON, a
//! one-line summary goes to stderr.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 incomplete or unknown
//! verdict, 4 refutation found.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use locus::catalog;
use locus::locality::{certify, LocalityOptions, Verdict};
use locus::logic::{compute_n, parse_sentence, print_sentence, term_metrics, UniversalSentence};
use locus::ordinals::Ordinal;
use locus::schmerl::{holds_p, FalsifyOptions, PropertyVerdict};
use locus::spectrum::{finite_spectrum, SearchOptions};
use locus::stretching::{stretch_prefix, verify_stretch, StretchVerdict};
use locus::structures::FiniteStructure;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "locus", version, about = "Finite workbench for local universal sentences")]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a sentence and print its normalized form and signature.
    Parse { sentence: String },
    /// The indiscernible count max{3v, v'+v, q v'} for closure bound n.
    Nphi {
        sentence: String,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Check substructure closure and closure depth over all models up to a size.
    Locality {
        sentence: String,
        /// Claimed closure depth; defaults to the sentence's `steps` line.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 6)]
        exhaustive_limit: usize,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_high_arity: bool,
    },
    /// Finite spectrum up to a size.
    Spectrum {
        sentence: String,
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        allow_high_arity: bool,
    },
    /// Evaluate the partition property at base size k, tuple size n + 2.
    Schmerl {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        trials: usize,
    },
    /// Stretch a model along indiscernible generators.
    Stretch {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        indiscernibles: Vec<usize>,
        #[arg(long)]
        sentence: String,
        /// Comma-separated ordinals; also report the prefix over these indices.
        #[arg(long)]
        indices: Option<String>,
        /// Largest index set size to check; defaults to the number of generators.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Browse the shipped sentences.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List,
    Show { id: String },
}

const USAGE: u8 = 2;
const UNKNOWN: u8 = 3;
const REFUTED: u8 = 4;

struct Failure(u8, String);

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure(USAGE, e.to_string())
}

struct Report {
    json: Value,
    summary: String,
    code: u8,
}

impl Report {
    fn new(body: &impl Serialize, summary: String, code: u8) -> Result<Self, Failure> {
        Ok(Report { json: serde_json::to_value(body).map_err(usage)?, summary, code })
    }
}

/// A path to a `.lsq` file, or a catalog id (`example`, `example.lsq`).
fn load_sentence(arg: &str) -> Result<(String, UniversalSentence), Failure> {
    let path = Path::new(arg);
    let id = path.file_stem().and_then(|s| s.to_str()).unwrap_or(arg).to_string();
    if path.is_file() {
        let src = fs::read_to_string(path).map_err(|e| usage(format!("{arg}: {e}")))?;
        let phi = parse_sentence(&src).map_err(|e| usage(format!("{arg}: {e}")))?;
        return Ok((id, phi));
    }
    match catalog::sentence(&id) {
        Ok(phi) => Ok((id, phi)),
        Err(_) => Err(usage(format!("{arg}: no such file or catalog entry"))),
    }
}

fn search_options(budget: Option<u64>, allow_high_arity: bool) -> Result<SearchOptions, Failure> {
    let mut opts = SearchOptions { allow_high_arity, ..SearchOptions::default() };
    if let Some(b) = budget {
        if b == 0 {
            return Err(usage("--budget must be positive"));
        }
        opts.budget = b;
    }
    Ok(opts)
}

fn parse_indices(text: &str) -> Result<Vec<Ordinal>, Failure> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    let xs = text.split(',').map(|s| s.parse::<Ordinal>()).collect::<Result<Vec<_>, _>>().map_err(usage)?;
    if !xs.windows(2).all(|w| w[0] < w[1]) {
        return Err(usage("--indices must be strictly increasing"));
    }
    Ok(xs)
}

fn run(command: Command) -> Result<Report, Failure> {
    match command {
        Command::Parse { sentence } => {
            let (id, phi) = load_sentence(&sentence)?;
            let sig = phi.signature();
            let body = json!({
                "id": id,
                "functions": sig.functions().iter().map(|f| json!({"name": f.name, "arity": f.arity})).collect::<Vec<_>>(),
                "relations": sig.relations().iter().map(|r| json!({"name": r.name, "arity": r.arity})).collect::<Vec<_>>(),
                "constants": sig.constants(),
                "vars": phi.vars(),
                "q": phi.q(),
                "declared_steps": phi.declared_steps(),
                "normalized": print_sentence(&phi),
            });
            Report::new(&body, format!("{id}: {} variables, parsed", phi.q()), 0)
        }
        Command::Nphi { sentence, n } => {
            let (id, phi) = load_sentence(&sentence)?;
            let n = n.or(phi.declared_steps()).ok_or_else(|| usage("--n is required when the sentence declares no steps"))?;
            if n == 0 {
                return Err(usage("--n must be positive"));
            }
            let m = term_metrics(&phi, n);
            let count = compute_n(&phi, n);
            let summary = format!("{id}: N = {count} (v = {}, v' = {}, q = {}, n = {n})", m.v, m.v_prime, phi.q());
            Report::new(&count, summary, 0)
        }
        Command::Locality { sentence, n, max_size, budget, exhaustive_limit, samples, seed, allow_high_arity } => {
            let (id, phi) = load_sentence(&sentence)?;
            let n = n.or(phi.declared_steps()).ok_or_else(|| usage("--n is required when the sentence declares no steps"))?;
            let opts = LocalityOptions { search: search_options(budget, allow_high_arity)?, exhaustive_limit, samples, seed };
            let r = certify(&id, &phi, n, max_size, &opts).map_err(usage)?;
            let code = match (&r.verdict, r.complete) {
                (Verdict::Refuted, _) => REFUTED,
                (_, false) => UNKNOWN,
                _ => 0,
            };
            let summary = format!("{id}: {:?}, max closure depth {} up to size {max_size}", r.verdict, r.max_observed_depth);
            Report::new(&r, summary, code)
        }
        Command::Spectrum { sentence, max_size, budget, allow_high_arity } => {
            let (id, phi) = load_sentence(&sentence)?;
            let r = finite_spectrum(&id, &phi, max_size, &search_options(budget, allow_high_arity)?).map_err(usage)?;
            let summary = format!("{id}: members {:?}, unknown {:?}", r.members, r.unknown);
            let code = if r.is_complete() { 0 } else { UNKNOWN };
            Report::new(&r, summary, code)
        }
        Command::Schmerl { k, n, alpha, seed, trials } => {
            if trials == 0 {
                return Err(usage("--trials must be positive"));
            }
            let verdict = holds_p(k, n + 2, alpha, &FalsifyOptions { seed, trials }).map_err(usage)?;
            let code = match verdict {
                PropertyVerdict::Holds => 0,
                PropertyVerdict::Fails { .. } => REFUTED,
                PropertyVerdict::NoCounterexampleFound { .. } => UNKNOWN,
            };
            let body = json!({"k": k, "n": n, "t": n + 2, "alpha": alpha, "result": verdict});
            let summary = format!("P(k = {k}, n = {n}, alpha = {alpha}): {}", body["result"]["verdict"].as_str().unwrap_or("?"));
            Report::new(&body, summary, code)
        }
        Command::Stretch { model, indiscernibles, sentence, indices, budget } => {
            let (id, phi) = load_sentence(&sentence)?;
            let text = fs::read_to_string(&model).map_err(|e| usage(format!("{}: {e}", model.display())))?;
            let m = FiniteStructure::from_json(&text, phi.signature()).map_err(|e| usage(format!("{}: {e}", model.display())))?;
            let indices = indices.as_deref().map(parse_indices).transpose()?;
            let budget = budget.unwrap_or(indiscernibles.len());
            let report = verify_stretch(&phi, &m, &indiscernibles, budget).map_err(usage)?;
            let n_phi = phi.declared_steps().unwrap_or(1);
            let prefix = match &indices {
                Some(xs) => Some(stretch_prefix(&m, &indiscernibles, xs, n_phi).map_err(usage)?.report()),
                None => None,
            };
            let code = if report.verdict == StretchVerdict::Refuted { REFUTED } else { 0 };
            let summary = format!("{id}: {:?} to pattern size {budget} (exhaustive: {})", report.verdict, report.exhaustive);
            Report::new(&json!({"report": report, "prefix": prefix}), summary, code)
        }
        Command::Catalog { action: CatalogAction::List } => {
            let rows: Vec<Value> = catalog::entries()
                .into_iter()
                .map(|e| json!({"id": e.id, "declared_steps": e.declared_steps, "expected_spectrum": e.expected_spectrum, "note": e.note}))
                .collect();
            let summary = format!("{} entries", rows.len());
            Report::new(&rows, summary, 0)
        }
        Command::Catalog { action: CatalogAction::Show { id } } => {
            let e = catalog::entry(&id).map_err(usage)?;
            let summary = format!("{id}: {}", e.note);
            Report::new(&e, summary, 0)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("LOCUS_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("LOCUS_THREADS={v}: expected a positive integer")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(usage)
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&report.json).map_err(usage)?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command)).and_then(|r| emit(&r, cli.out.as_deref()).map(|()| r));
    match result {
        Ok(r) => {
            eprintln!("{}", r.summary);
            ExitCode::from(r.code)
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
