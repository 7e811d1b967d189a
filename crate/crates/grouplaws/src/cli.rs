//! Command-line driver: construction with certificates, verification
//! against named groups or the quotient oracle, shortest-law search, and
//! the growth, mixing, and catalog reports.
//!
//! Exit codes are a stable contract: 0 success, 1 a verified law failure
//! (the certificate or report is still written), 2 usage or budget errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::catalog;
use crate::certificate::{
    creation_timestamp, write_atomic, CertRecord, LawCertificate,
};
use crate::group::{Element, Group, GroupError, GroupSpec};
use crate::laws::{LawError, LawTrace};
use crate::pipeline::{
    all_groups_law, all_simple_law, degenerate_law, psl3_family_law, simple_non_special_law,
    psl2_family_law, PipelineError, PipelineParams,
};
use crate::rfgrowth::{
    self, normal_quotients, quotients_from_text, quotients_to_text, RfError, RfGrowthValue,
    NORMAL_ORDER_BUDGET,
};
use crate::stochastics::{
    csv_report, hitting_probability, standard_symmetric_set, RateRow, StochError,
};
use crate::verify::{self, VerifyMode, DEFAULT_SAMPLE_COUNT, EXHAUSTIVE_PAIR_BUDGET};
use crate::word::{letter_inverse, reduced_words_of_length, Word, X, Y};

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "GROUPLAWS_SEED";

/// Largest pair count accepted for a forced exhaustive check.
const FORCED_EXHAUSTIVE_CAP: u64 = 100 * EXHAUSTIVE_PAIR_BUDGET;
/// Pair-times-candidate budget for the shortest-law search.
const SEARCH_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Law(#[from] LawError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Rf(#[from] RfError),
    #[error(transparent)]
    Stoch(#[from] StochError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Parser)]
#[command(
    name = "grouplaws",
    version,
    about = "construct, verify, and certify short laws for families of finite groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a family law, verify it over its scope, write a certificate.
    Construct(ConstructArgs),
    /// Check one word against a named group or all orders up to a bound.
    Verify(VerifyArgs),
    /// Find a shortest law for one group by exhaustive word enumeration.
    Search(SearchArgs),
    /// Residual-finiteness growth F(n) through the normal-quotient oracle.
    Rf(RfArgs),
    /// Random-walk hitting probabilities over a grid of walk lengths.
    Mixing(MixingArgs),
    /// Simple groups of order at most n, with the special-linear flag.
    Catalog(CatalogArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Target {
    All,
    Simple,
    Psl2,
    Psl3,
    NonSpecial,
}

impl Target {
    fn name(self) -> &'static str {
        match self {
            Target::All => "all",
            Target::Simple => "simple",
            Target::Psl2 => "psl2",
            Target::Psl3 => "psl3",
            Target::NonSpecial => "non-special",
        }
    }
}

#[derive(clap::Args)]
struct ConstructArgs {
    /// Order bound for the family.
    #[arg(long)]
    n: u64,
    #[arg(long, value_enum, default_value = "all")]
    target: Target,
    /// Master seed; falls back to GROUPLAWS_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Walk length factor.
    #[arg(long, default_value_t = 8.0)]
    c1: f64,
    /// Pair count factor.
    #[arg(long, default_value_t = 4.0)]
    c4: f64,
    /// Comma-separated primes to handle by order laws instead of sampling.
    #[arg(long, value_delimiter = ',')]
    bad_primes: Vec<u64>,
    #[arg(long, default_value_t = 64)]
    retry_limit: u32,
    /// Certificate path; defaults to law-TARGET-N.cert.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Rayon worker count; defaults to the global pool.
    #[arg(long)]
    workers: Option<usize>,
    /// Pairs sampled per group when exhaustion is over budget.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    sample_count: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Word literal in run-length text form, e.g. "XYxy" or "x^60".
    #[arg(long)]
    word: Option<String>,
    /// File containing the word text.
    #[arg(long)]
    word_file: Option<PathBuf>,
    /// Group spec, e.g. Sym:3, PSL2:7, Dihedral:6.
    #[arg(long)]
    group: Option<String>,
    /// Certify against every group of order up to this bound instead.
    #[arg(long)]
    all_upto: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "auto")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLE_COUNT)]
    sample_count: u64,
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    max_len: usize,
}

#[derive(clap::Args)]
struct RfArgs {
    /// Word length bound of the ball.
    #[arg(long)]
    n: u32,
    #[arg(long, default_value_t = NORMAL_ORDER_BUDGET)]
    max_order: u32,
    /// Write the quotient list to this file.
    #[arg(long)]
    quotients_out: Option<PathBuf>,
    /// Directory of cached quotient lists, keyed by max order.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TargetSet {
    /// The whole group.
    All,
    /// Elements lying in a Borel subgroup (PSL(2, q) only).
    Borel,
}

#[derive(clap::Args)]
struct MixingArgs {
    #[arg(long)]
    group: String,
    #[arg(long, value_enum, default_value = "all")]
    set: TargetSet,
    #[arg(long, default_value_t = 20_000)]
    trials: u64,
    #[arg(long)]
    seed: Option<u64>,
    /// Walk lengths sweep k * log2 |G| for k up to this multiple.
    #[arg(long, default_value_t = 6)]
    max_multiple: u32,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CatalogArgs {
    #[arg(long)]
    n: u64,
}

/// Parses and dispatches; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = err.exit_code();
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.cmd) {
        Ok((output, code)) => {
            print!("{output}");
            code
        }
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

fn dispatch(cmd: Cmd) -> Result<(String, i32), CliError> {
    match cmd {
        Cmd::Construct(args) => cmd_construct(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Search(args) => cmd_search(args),
        Cmd::Rf(args) => cmd_rf(args),
        Cmd::Mixing(args) => cmd_mixing(args),
        Cmd::Catalog(args) => cmd_catalog(args),
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} is not a 64-bit seed: {text}"))),
        Err(_) => Ok(0),
    }
}

fn parse_spec(text: &str) -> Result<GroupSpec, CliError> {
    text.parse::<GroupSpec>().map_err(CliError::Group)
}

fn parse_word(text: &str) -> Result<Word, CliError> {
    text.trim()
        .parse::<Word>()
        .map_err(|e| CliError::Usage(format!("cannot parse word {text:?}: {e}")))
}

struct Constructed {
    trace: LawTrace,
    scope: Vec<GroupSpec>,
    sampling: Option<(u64, u64, u64)>,
}

fn build_target(target: Target, params: &PipelineParams) -> Result<Constructed, CliError> {
    let degenerate = |scope: Vec<GroupSpec>| -> Result<Constructed, CliError> {
        Ok(Constructed { trace: degenerate_law()?, scope, sampling: None })
    };
    match target {
        Target::All => {
            let law = all_groups_law(params)?;
            Ok(Constructed { trace: law.trace, scope: spot_specs(params.n), sampling: None })
        }
        Target::Simple => {
            let law = all_simple_law(params)?;
            Ok(Constructed {
                trace: law.family.trace,
                scope: law.family.scope,
                sampling: law
                    .sampling
                    .map(|s| (s.walk_length, s.pair_count, s.rejected_attempts)),
            })
        }
        Target::Psl2 => match psl2_family_law(params)? {
            Some((family, report)) => Ok(Constructed {
                trace: family.trace,
                scope: family.scope,
                sampling: Some((
                    report.walk_length,
                    report.pair_count,
                    report.rejected_attempts,
                )),
            }),
            None => degenerate(Vec::new()),
        },
        Target::Psl3 => match psl3_family_law(params.n)? {
            Some(family) => Ok(Constructed {
                trace: family.trace,
                scope: family.scope,
                sampling: None,
            }),
            None => degenerate(Vec::new()),
        },
        Target::NonSpecial => match simple_non_special_law(params.n)? {
            Some(family) => Ok(Constructed {
                trace: family.trace,
                scope: family.scope,
                sampling: None,
            }),
            None => degenerate(Vec::new()),
        },
    }
}

/// Verification checklist for the all-groups target, whose scope is not a
/// finite list: a cyclic group at the bound, a dihedral group near it, and
/// the classic small non-solvable groups once they fit.
fn spot_specs(n: u64) -> Vec<GroupSpec> {
    let mut specs = Vec::new();
    if n >= 2 {
        specs.push(GroupSpec::Cyclic(n as u32));
    }
    if n >= 6 {
        specs.push(GroupSpec::Dihedral((n / 2) as u32));
    }
    if n >= 24 {
        specs.push(GroupSpec::Sym(4));
    }
    if n >= 60 {
        specs.push(GroupSpec::Alt(5));
    }
    if n >= 168 {
        specs.push(GroupSpec::Psl2(7));
    }
    specs
}

fn to_cert_record(record: &verify::VerificationRecord) -> CertRecord {
    CertRecord {
        group: record.spec.clone(),
        mode: record.mode.to_string(),
        pairs: record.pairs_checked,
        violations: record.violations,
        witness: record.first_witness,
        sample_seed: match record.mode {
            VerifyMode::Sampled { seed, .. } => Some(seed),
            VerifyMode::Exhaustive => None,
        },
        witness_note: None,
    }
}

fn cmd_construct(args: ConstructArgs) -> Result<(String, i32), CliError> {
    if let Some(workers) = args.workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build a {workers}-worker pool: {e}")))?;
        return pool.install(|| construct_inner(args));
    }
    construct_inner(args)
}

fn construct_inner(args: ConstructArgs) -> Result<(String, i32), CliError> {
    let seed = resolve_seed(args.seed)?;
    let mut params = PipelineParams::new(args.n);
    params.seed = seed;
    params.c1 = args.c1;
    params.c4 = args.c4;
    params.bad_primes = args.bad_primes.clone();
    params.retry_limit = args.retry_limit;

    let built = build_target(args.target, &params)?;
    let mut records = Vec::new();
    for spec in &built.scope {
        let group = Group::new(spec)?;
        let record = verify::verify_trace_with(&group, &built.trace, seed, args.sample_count)?;
        records.push(to_cert_record(&record));
    }
    if args.target == Target::All && args.n <= NORMAL_ORDER_BUDGET as u64 {
        let outcome = rfgrowth::certify_law(&built.trace.word, args.n as u32)?;
        records.push(CertRecord {
            group: format!("all-upto:{}", args.n),
            mode: "oracle".to_string(),
            pairs: outcome.quotients_checked as u64,
            violations: outcome.witness.is_some() as u64,
            witness: None,
            sample_seed: None,
            witness_note: outcome
                .witness
                .map(|q| format!("quotient of order {} with x={} y={}", q.index, q.gx, q.gy)),
        });
    }

    let cert = LawCertificate {
        created: creation_timestamp(),
        seed,
        target: args.target.name().to_string(),
        n: args.n,
        c1: args.c1,
        c4: args.c4,
        bad_primes: args.bad_primes,
        retry_limit: args.retry_limit,
        sampling: built.sampling,
        scope: built.scope,
        word: built.trace.word.clone(),
        records,
    };
    let path = args
        .out
        .unwrap_or_else(|| PathBuf::from(format!("law-{}-{}.cert", args.target.name(), args.n)));
    write_atomic(&path, &cert.render(&built.trace))?;

    let mut out = String::new();
    out.push_str(&format!("target: {}\n", cert.target));
    out.push_str(&format!("n: {}\n", cert.n));
    out.push_str(&format!("seed: {}\n", cert.seed));
    out.push_str(&format!("word-length: {}\n", cert.word.len()));
    for record in &cert.records {
        out.push_str(&format!(
            "verified: {} {} pairs={} violations={}\n",
            record.group, record.mode, record.pairs, record.violations
        ));
    }
    out.push_str(&format!("certificate: {}\n", path.display()));
    out.push_str(&format!("status: {}\n", if cert.passed() { "PASS" } else { "FAIL" }));
    Ok((out, if cert.passed() { 0 } else { 1 }))
}

fn cmd_verify(args: VerifyArgs) -> Result<(String, i32), CliError> {
    let word = match (&args.word, &args.word_file) {
        (Some(text), None) => parse_word(text)?,
        (None, Some(path)) => parse_word(&std::fs::read_to_string(path)?)?,
        _ => {
            return Err(CliError::Usage(
                "provide exactly one of --word and --word-file".to_string(),
            ))
        }
    };
    let mut out = String::new();
    out.push_str(&format!("word: {word}\n"));
    out.push_str(&format!("word-length: {}\n", word.len()));

    match (&args.group, args.all_upto) {
        (Some(spec_text), None) => {
            let spec = parse_spec(spec_text)?;
            let group = Group::new(&spec)?;
            let seed = resolve_seed(args.seed)?;
            let trace = LawTrace::atom(word.clone(), "word under test")
                .map_err(|_| CliError::Usage("cannot verify the empty word".to_string()))?;
            let record = match args.mode {
                ModeArg::Auto => {
                    verify::verify_trace_with(&group, &trace, seed, args.sample_count)?
                }
                ModeArg::Exhaustive => {
                    let order = group.order()?;
                    if order * order > FORCED_EXHAUSTIVE_CAP {
                        return Err(CliError::Usage(format!(
                            "{order}^2 pairs exceed the forced-exhaustive cap"
                        )));
                    }
                    verify::verify_trace_in_mode(&group, &trace, VerifyMode::Exhaustive)?
                }
                ModeArg::Sampled => verify::verify_trace_in_mode(
                    &group,
                    &trace,
                    VerifyMode::Sampled { count: args.sample_count, seed },
                )?,
            };
            out.push_str(&format!("group: {}\n", record.spec));
            out.push_str(&format!("mode: {}\n", record.mode));
            out.push_str(&format!("pairs: {}\n", record.pairs_checked));
            out.push_str(&format!("violations: {}\n", record.violations));
            if let Some((a, b)) = record.first_witness {
                let elements = group.enumerate()?;
                out.push_str(&format!(
                    "witness: {} | {}\n",
                    elements[a as usize], elements[b as usize]
                ));
            }
            out.push_str(&format!("status: {}\n", if record.passed() { "PASS" } else { "FAIL" }));
            Ok((out, if record.passed() { 0 } else { 1 }))
        }
        (None, Some(bound)) => {
            let outcome = rfgrowth::certify_law(&word, bound)?;
            out.push_str(&format!("group: all-upto:{bound}\n"));
            out.push_str("mode: oracle\n");
            out.push_str(&format!("quotients: {}\n", outcome.quotients_checked));
            if let Some(witness) = &outcome.witness {
                out.push_str(&format!("witness-order: {}\n", witness.index));
                out.push_str(&format!("witness-x: {}\n", witness.gx));
                out.push_str(&format!("witness-y: {}\n", witness.gy));
            }
            let pass = outcome.passed();
            out.push_str(&format!("status: {}\n", if pass { "PASS" } else { "FAIL" }));
            Ok((out, if pass { 0 } else { 1 }))
        }
        _ => Err(CliError::Usage(
            "provide exactly one of --group and --all-upto".to_string(),
        )),
    }
}

/// Smallest letter sequence over the transforms that preserve the law
/// property: conjugation (cyclic rotation), inversion, and the x <-> y
/// swap.
fn search_class_key(w: &Word) -> Vec<u8> {
    let (_, core) = w.cyclic_decomposition();
    let swap = |letters: &[u8]| -> Vec<u8> {
        letters.iter().map(|&l| [Y, crate::word::Y_INV, X, crate::word::X_INV][l as usize]).collect()
    };
    let invert = |letters: &[u8]| -> Vec<u8> {
        letters.iter().rev().map(|&l| letter_inverse(l)).collect()
    };
    let base = core.letters().to_vec();
    let mut best: Option<Vec<u8>> = None;
    for variant in [base.clone(), swap(&base), invert(&base), swap(&invert(&base))] {
        for i in 0..variant.len().max(1) {
            let mut rotated = variant[i..].to_vec();
            rotated.extend_from_slice(&variant[..i]);
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
    }
    best.unwrap_or_default()
}

fn cmd_search(args: SearchArgs) -> Result<(String, i32), CliError> {
    let spec = parse_spec(&args.group)?;
    let group = Group::new(&spec)?;
    let elements = group.enumerate()?.to_vec();
    let order = elements.len() as u64;
    let candidates: u64 = (1..=args.max_len as u32).map(|l| 4 * 3u64.pow(l - 1)).sum();
    if order * order * candidates > SEARCH_BUDGET {
        return Err(CliError::Usage(format!(
            "search budget exceeded: {order}^2 pairs x {candidates} words"
        )));
    }
    let identity = group.identity();
    let is_law = |w: &Word| -> bool {
        elements
            .iter()
            .all(|g| elements.iter().all(|h| group.evaluate(w, g, h) == identity))
    };

    let mut out = String::new();
    out.push_str(&format!("group: {spec}\n"));
    out.push_str(&format!("searched-max-length: {}\n", args.max_len));
    let mut seen = std::collections::BTreeSet::new();
    let mut tested = 0u64;
    for len in 1..=args.max_len {
        for w in reduced_words_of_length(len) {
            let key = search_class_key(&w);
            if key.len() < len || !seen.insert(key) {
                continue;
            }
            tested += 1;
            if is_law(&w) {
                out.push_str(&format!("candidates-tested: {tested}\n"));
                out.push_str(&format!("law: {w}\n"));
                out.push_str(&format!("length: {len}\n"));
                out.push_str("status: found\n");
                return Ok((out, 0));
            }
        }
    }
    out.push_str(&format!("candidates-tested: {tested}\n"));
    out.push_str("status: not-found\n");
    Ok((out, 0))
}

fn cmd_rf(args: RfArgs) -> Result<(String, i32), CliError> {
    let quotients = match &args.cache {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("quotients-{}.txt", args.max_order));
            if path.exists() {
                quotients_from_text(&std::fs::read_to_string(&path)?).ok_or_else(|| {
                    CliError::Usage(format!("corrupt quotient cache: {}", path.display()))
                })?
            } else {
                let q = normal_quotients(args.max_order)?;
                write_atomic(&path, &quotients_to_text(&q))?;
                q
            }
        }
        None => normal_quotients(args.max_order)?,
    };
    if let Some(path) = &args.quotients_out {
        write_atomic(path, &quotients_to_text(&quotients))?;
    }
    let value = rfgrowth::rf_growth_over(&quotients, args.n, args.max_order)?;
    let mut out = String::new();
    out.push_str(&format!("max-order: {}\n", args.max_order));
    out.push_str(&format!("quotients: {}\n", quotients.len()));
    match value {
        RfGrowthValue::Exact(v) => out.push_str(&format!("F({}) = {v}\n", args.n)),
        RfGrowthValue::AtLeast(v) => out.push_str(&format!("F({}) >= {v}\n", args.n)),
    }
    Ok((out, 0))
}

fn cmd_mixing(args: MixingArgs) -> Result<(String, i32), CliError> {
    let spec = parse_spec(&args.group)?;
    if args.set == TargetSet::Borel && !matches!(spec, GroupSpec::Psl2(_)) {
        return Err(CliError::Usage("--set borel needs a PSL2 group".to_string()));
    }
    let group = Group::new(&spec)?;
    let seed = resolve_seed(args.seed)?;
    let steps = standard_symmetric_set(&group);
    let set = args.set;
    let predicate = move |g: &Group, e: &Element| match set {
        TargetSet::All => true,
        TargetSet::Borel => g.in_borel(e),
    };
    let elements = group.enumerate()?;
    let order = elements.len() as u64;
    let set_size = elements.iter().filter(|e| predicate(&group, e)).count() as u64;
    let target = set_size as f64 / (2.0 * order as f64);

    let log2_order = (order as f64).log2();
    let mut rows = Vec::new();
    let mut threshold = None;
    for k in 1..=args.max_multiple {
        let l = (k as f64 * log2_order).ceil() as usize;
        let est = hitting_probability(&group, &steps, predicate, l, args.trials, seed)?;
        if threshold.is_none() && est.wilson_low >= target {
            threshold = Some(l);
        }
        rows.push(RateRow {
            walk_length: l,
            frequency: est.frequency,
            wilson_low: est.wilson_low,
            wilson_high: est.wilson_high,
        });
    }

    let mut out = String::new();
    out.push_str(&format!("group: {spec}\n"));
    out.push_str(&format!("set-size: {set_size}\n"));
    out.push_str(&format!("target: {target}\n"));
    for row in &rows {
        out.push_str(&format!(
            "l={} frequency={} interval=[{}, {}]\n",
            row.walk_length, row.frequency, row.wilson_low, row.wilson_high
        ));
    }
    match threshold {
        Some(l) => out.push_str(&format!("threshold: l = {l}\n")),
        None => out.push_str("threshold: not-reached\n"),
    }
    if let Some(path) = &args.out {
        write_atomic(path, &csv_report(&rows))?;
    }
    Ok((out, 0))
}

fn cmd_catalog(args: CatalogArgs) -> Result<(String, i32), CliError> {
    let entries = catalog::catalog_entries(args.n)?;
    let mut out = String::new();
    for entry in &entries {
        out.push_str(&format!(
            "{} order={} special-linear={}\n",
            entry.spec,
            entry.order,
            if entry.special_linear { "yes" } else { "no" }
        ));
    }
    out.push_str(&format!("entries: {}\n", entries.len()));
    Ok((out, 0))
}
