use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use reppair::construct::LemmaStepCert;
use reppair::search::{DecompositionChain, SearchReport};
use reppair::setfile::{format_set, parse_set};
use reppair::{
    build_prefix, decompose_fully, enumerate_p2, lemma_step, rep_profile, verify_pair, Error,
    IntSet, PairReport, Schedule, SearchOptions,
};
use serde::Serialize;

const SCHEMA_VERSION: u32 = 1;

mod exit {
    pub const ASSERTION: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PRECONDITION: u8 = 4;
    pub const OVERFLOW: u8 = 5;
}

#[derive(Parser)]
#[command(name = "reppair", version, about = "Set pairs with identical representation functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScheduleKind {
    Dombi,
    Theorem,
    General,
}

#[derive(Args)]
struct Common {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Build a finite prefix of a scheduled pair and write A, B and the step log.
    Build {
        #[arg(long, value_enum)]
        schedule: ScheduleKind,
        #[arg(long)]
        l: Option<u32>,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        bound: usize,
        /// Output directory for a.txt, b.txt and steps.txt.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Check a pair of prefix-complete set files.
    Verify {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Defaults to the largest element of A ∪ B.
        #[arg(long)]
        bound: Option<usize>,
        #[arg(long)]
        expect_rep_equal: bool,
        #[arg(long)]
        expect_union_interval: bool,
        /// Expected intersection progression as `r,m`.
        #[arg(long, value_parser = parse_progression)]
        expect_intersection_ap: Option<(usize, usize)>,
        /// Report difference-set membership of this translation (repeatable).
        #[arg(long = "lemma-m")]
        lemma_m: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Print R_A(0..=upto).
    Rep {
        #[arg(long)]
        set: PathBuf,
        #[arg(long)]
        upto: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Apply one translate-and-swap step and print its certificate.
    LemmaStep {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        m: usize,
        /// Directory for a1.txt and b1.txt.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive search for A ∪ B = [0, m-1], A ∩ B = {r}, R_A = R_B.
    SearchP2 {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Brute-force scan without pruning.
        #[arg(long)]
        no_prune: bool,
        /// Completed shard ids, one per line; read on start and appended to.
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        /// Include elapsed_ms in the report (makes output non-deterministic).
        #[arg(long)]
        timing: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Peel translate-and-swap steps off a pair (base pairs confined below each step).
    Decompose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn parse_progression(s: &str) -> Result<(usize, usize), String> {
    let (r, m) = s.split_once(',').ok_or("expected r,m")?;
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    Ok((num(r)?, num(m)?))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(exit::IO, format!("{}: {err}", path.display()))
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::PreconditionViolated { .. } => exit::PRECONDITION,
            Error::Overflow(_) => exit::OVERFLOW,
            Error::Parse { .. } => exit::IO,
            Error::InvalidSchedule(_)
            | Error::BoundTooSmall { .. }
            | Error::BoundExceeded { .. }
            | Error::InvalidArgument(_) => exit::USAGE,
        };
        Self::new(code, err.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_set(path: &Path) -> Result<IntSet, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    parse_set(&text).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn join(set: &IntSet) -> String {
    set.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    command: &'a str,
    #[serde(flatten)]
    body: T,
}

fn envelope<T: Serialize>(command: &str, body: T) -> String {
    to_json(&Envelope { schema_version: SCHEMA_VERSION, command, body })
}

fn schedule_from(kind: ScheduleKind, l: Option<u32>, r: Option<usize>, m: Option<usize>) -> Result<Schedule, Failure> {
    let need_l = || l.ok_or_else(|| Failure::new(exit::USAGE, "--l is required for this schedule"));
    let schedule = match kind {
        ScheduleKind::Dombi => Schedule::Dombi,
        ScheduleKind::Theorem => Schedule::theorem(need_l()?)?,
        ScheduleKind::General => {
            let r = r.ok_or_else(|| Failure::new(exit::USAGE, "--r is required for the general schedule"))?;
            let m = m.ok_or_else(|| Failure::new(exit::USAGE, "--m is required for the general schedule"))?;
            Schedule::general(need_l()?, r, m)?
        }
    };
    Ok(schedule)
}

fn cmd_build(schedule: Schedule, bound: usize, out: &Path, format: Format) -> CmdResult {
    let build = build_prefix(schedule, bound)?;
    fs::create_dir_all(out).map_err(|e| Failure::io(out, e))?;
    write_file(&out.join("a.txt"), &format_set(&build.a))?;
    write_file(&out.join("b.txt"), &format_set(&build.b))?;
    write_file(&out.join("steps.txt"), &build.step_log())?;

    #[derive(Serialize)]
    struct Body<'a> {
        schedule: Schedule,
        bound: usize,
        translation: usize,
        steps: &'a [reppair::construct::StepRecord],
        a_len: usize,
        b_len: usize,
    }
    match format {
        Format::Json => print!(
            "{}",
            envelope(
                "build",
                Body {
                    schedule,
                    bound,
                    translation: build.translation,
                    steps: &build.steps,
                    a_len: build.a.len(),
                    b_len: build.b.len(),
                }
            )
        ),
        Format::Text => {
            println!("schedule: {schedule}");
            println!("bound: {bound}");
            println!("steps: {}", build.steps.len());
            println!("a_len: {}", build.a.len());
            println!("b_len: {}", build.b.len());
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    a: &Path,
    b: &Path,
    bound: Option<usize>,
    expect_rep: bool,
    expect_union: bool,
    expect_ap: Option<(usize, usize)>,
    lemma_m: &[usize],
    out: Option<&Path>,
    format: Format,
) -> CmdResult {
    let (a, b) = (read_set(a)?, read_set(b)?);
    let bound = bound.unwrap_or_else(|| a.union(&b).max().unwrap_or(0));
    let report = verify_pair(&a, &b, bound, lemma_m);

    let mut unmet = Vec::new();
    if expect_rep && !report.rep_equal {
        unmet.push(format!("representation functions differ first at {}", report.first_divergence.unwrap()));
    }
    if expect_union && report.union_is_interval.is_none() {
        unmet.push(format!("A ∪ B does not cover [0, {bound}]"));
    }
    if let Some((r, m)) = expect_ap {
        if !report.intersection_matches(r, m) {
            unmet.push(format!("A ∩ B ∩ [0, {bound}] is not {{{r} + {m}k}}"));
        }
    }

    #[derive(Serialize)]
    struct Body<'a> {
        #[serde(flatten)]
        report: &'a PairReport,
        unmet_expectations: &'a [String],
    }
    let text = match format {
        Format::Json => envelope("verify", Body { report: &report, unmet_expectations: &unmet }),
        Format::Text => {
            let mut t = report.to_text();
            for u in &unmet {
                t.push_str(&format!("unmet: {u}\n"));
            }
            t
        }
    };
    emit(out, &text)?;
    if unmet.is_empty() {
        Ok(())
    } else {
        Err(Failure::new(exit::ASSERTION, unmet.join("; ")))
    }
}

fn cmd_rep(set: &Path, upto: usize, out: Option<&Path>, format: Format) -> CmdResult {
    let profile = rep_profile(&read_set(set)?, upto);
    let text = match format {
        Format::Json => envelope("rep", &profile),
        Format::Text => profile
            .counts
            .iter()
            .enumerate()
            .map(|(n, c)| format!("{n}\t{c}\n"))
            .collect(),
    };
    emit(out, &text)
}

fn cert_text(cert: &LemmaStepCert) -> String {
    let mut t = format!("m: {}\nprecondition_ok: {}\n", cert.m, cert.precondition_ok);
    if let Some((a, b)) = cert.witness {
        t.push_str(&format!("witness: a={a} b={b}\n"));
        return t;
    }
    t.push_str(&format!("moreover_ok: {}\n", cert.moreover_ok));
    t.push_str(&format!("union_identity_ok: {}\n", cert.union_identity_ok));
    t.push_str(&format!("intersection_claim_ok: {}\n", cert.intersection_claim_ok));
    t.push_str(&format!("intersection_equal: {}\n", cert.intersection_equal));
    t.push_str(&format!("disjoint_union_ok: {}\n", cert.disjoint_union_ok));
    if let Some(iv) = &cert.interval {
        t.push_str(&format!(
            "interval: [0, {}] -> [0, {}] union_ok={} partition_ok={}\n",
            iv.before_end,
            iv.after_end,
            iv.union_ok,
            iv.base_is_partition && iv.partition_ok
        ));
    }
    for (name, v) in [("rep_hypothesis_ok", cert.rep_hypothesis_ok), ("rep_conclusion_ok", cert.rep_conclusion_ok)] {
        if let Some(v) = v {
            t.push_str(&format!("{name}: {v}\n"));
        }
    }
    t
}

fn cmd_lemma_step(a: &Path, b: &Path, m: usize, out: Option<&Path>, format: Format) -> CmdResult {
    let (a0, b0) = (read_set(a)?, read_set(b)?);
    let cert = reppair::verify_lemma_claims(&a0, &b0, m)?;
    let outputs = if cert.precondition_ok { Some(lemma_step(&a0, &b0, m)?) } else { None };
    if let (Some(dir), Some(step)) = (out, &outputs) {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
        write_file(&dir.join("a1.txt"), &format_set(&step.a))?;
        write_file(&dir.join("b1.txt"), &format_set(&step.b))?;
    }

    #[derive(Serialize)]
    struct Body<'a> {
        cert: &'a LemmaStepCert,
        a1: Option<&'a IntSet>,
        b1: Option<&'a IntSet>,
    }
    match format {
        Format::Json => print!(
            "{}",
            envelope(
                "lemma-step",
                Body { cert: &cert, a1: outputs.as_ref().map(|s| &s.a), b1: outputs.as_ref().map(|s| &s.b) }
            )
        ),
        Format::Text => {
            print!("{}", cert_text(&cert));
            if let Some(step) = &outputs {
                println!("a1: {}", join(&step.a));
                println!("b1: {}", join(&step.b));
            }
        }
    }
    if let Some((wa, wb)) = cert.witness {
        return Err(Failure::new(
            exit::PRECONDITION,
            format!("m = {m} lies in (A0 - B0) ∪ (B0 - A0): witness a={wa}, b={wb}"),
        ));
    }
    if !cert.claims_hold() {
        return Err(Failure::new(exit::ASSERTION, "a claim of the step failed to hold"));
    }
    Ok(())
}

fn read_checkpoint(path: &Path) -> Result<BTreeSet<usize>, Failure> {
    if !path.exists() {
        return Ok(BTreeSet::new());
    }
    let text = fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse().map_err(|_| {
                Failure::new(exit::IO, format!("{}: line {}: bad shard id {l:?}", path.display(), i + 1))
            })
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    m: usize,
    r: Option<usize>,
    threads: usize,
    prune: bool,
    checkpoint: Option<&Path>,
    timing: bool,
    out: Option<&Path>,
    format: Format,
) -> CmdResult {
    let skip_shards = match checkpoint {
        Some(path) => read_checkpoint(path)?,
        None => BTreeSet::new(),
    };
    let options = SearchOptions { r_filter: r, threads, prune, skip_shards };
    let log = match checkpoint {
        Some(path) => Some(Mutex::new(
            OpenOptions::new().create(true).append(true).open(path).map_err(|e| Failure::io(path, e))?,
        )),
        None => None,
    };
    let record = |id: usize| {
        if let Some(file) = &log {
            let mut f = file.lock().unwrap();
            // a lost line only means the shard is rescanned on resume
            let _ = writeln!(f, "{id}").and_then(|_| f.flush());
        }
    };
    let report = enumerate_p2(m, &options, Some(&record))?;
    eprintln!("elapsed: {} ms", report.wall_time.as_millis());
    if !report.is_complete() {
        eprintln!(
            "warning: {} of {} shards were skipped from the checkpoint; solutions in them are not listed",
            report.shards_skipped.len(),
            report.shards_total
        );
    }
    emit(out, &search_text(&report, timing, format))
}

fn search_text(report: &SearchReport, timing: bool, format: Format) -> String {
    #[derive(Serialize)]
    struct JsonSolution {
        r: usize,
        a: Vec<usize>,
        b: Vec<usize>,
    }
    #[derive(Serialize)]
    struct Body<'a> {
        interval_length: usize,
        r_filter: Option<usize>,
        pruned: bool,
        complete: bool,
        solutions: Vec<JsonSolution>,
        configurations_scanned: u64,
        shards_total: usize,
        shards_skipped: &'a [usize],
        #[serde(skip_serializing_if = "Option::is_none")]
        elapsed_ms: Option<u128>,
    }
    match format {
        Format::Json => envelope(
            "search-p2",
            Body {
                interval_length: report.interval_length,
                r_filter: report.r_filter,
                pruned: report.pruned,
                complete: report.is_complete(),
                solutions: report
                    .solutions
                    .iter()
                    .map(|s| JsonSolution { r: s.r, a: s.a.to_vec(), b: s.b.to_vec() })
                    .collect(),
                configurations_scanned: report.configurations_scanned,
                shards_total: report.shards_total,
                shards_skipped: &report.shards_skipped,
                elapsed_ms: timing.then_some(report.wall_time.as_millis()),
            },
        ),
        Format::Text => {
            let mut t = format!(
                "interval_length: {}\npruned: {}\ncomplete: {}\nconfigurations_scanned: {}\nsolutions: {}\n",
                report.interval_length,
                report.pruned,
                report.is_complete(),
                report.configurations_scanned,
                report.solutions.len()
            );
            for s in &report.solutions {
                t.push_str(&format!("r={} A={} B={}\n", s.r, join(&s.a), join(&s.b)));
            }
            if timing {
                t.push_str(&format!("elapsed_ms: {}\n", report.wall_time.as_millis()));
            }
            t
        }
    }
}

fn cmd_decompose(a: &Path, b: &Path, out: Option<&Path>, format: Format) -> CmdResult {
    let (a, b) = (read_set(a)?, read_set(b)?);
    let chain = decompose_fully(&a, &b);
    // replaying must reproduce the input exactly
    if chain.replay()? != (a, b) {
        return Err(Failure::new(exit::ASSERTION, "replaying the decomposition does not reproduce the input"));
    }

    #[derive(Serialize)]
    struct Body<'a> {
        restriction: &'static str,
        #[serde(flatten)]
        chain: &'a DecompositionChain,
    }
    const RESTRICTION: &str = "each peeled step uses a base pair inside [0, m]";
    let text = match format {
        Format::Json => envelope("decompose", Body { restriction: RESTRICTION, chain: &chain }),
        Format::Text => format!(
            "restriction: {RESTRICTION}\nchain: {}\ncore_a: {}\ncore_b: {}\n",
            chain.chain.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(","),
            join(&chain.core_a),
            join(&chain.core_b)
        ),
    };
    emit(out, &text)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Build { schedule, l, r, m, bound, out, common } => {
            cmd_build(schedule_from(schedule, l, r, m)?, bound, &out, common.format)
        }
        Command::Verify {
            a,
            b,
            bound,
            expect_rep_equal,
            expect_union_interval,
            expect_intersection_ap,
            lemma_m,
            out,
            common,
        } => cmd_verify(
            &a,
            &b,
            bound,
            expect_rep_equal,
            expect_union_interval,
            expect_intersection_ap,
            &lemma_m,
            out.as_deref(),
            common.format,
        ),
        Command::Rep { set, upto, out, common } => cmd_rep(&set, upto, out.as_deref(), common.format),
        Command::LemmaStep { a, b, m, out, common } => cmd_lemma_step(&a, &b, m, out.as_deref(), common.format),
        Command::SearchP2 { m, r, threads, no_prune, checkpoint, timing, out, common } => {
            if threads == 0 {
                return Err(Failure::new(exit::USAGE, "--threads must be at least 1"));
            }
            cmd_search(m, r, threads, !no_prune, checkpoint.as_deref(), timing, out.as_deref(), common.format)
        }
        Command::Decompose { a, b, out, common } => cmd_decompose(&a, &b, out.as_deref(), common.format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
