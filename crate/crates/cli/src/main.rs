//! `wordlab`: command-line front end for the `wordlab` library.
//!
//! Exit codes: 0 success (including recorded-only suites), 1 a guaranteed
//! suite failed, 2 usage or input error, 3 resource cap exceeded.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use wordlab::abelian::estimate_table_bytes;
use wordlab::forge::{CfDirective, WordError, WordGenerator, WordSpec};
use wordlab::lemma::{run_suites, Status, Suite, TrialPlan, DEFAULT_SEED};
use wordlab::report::{emit_curve, emit_json, format_sig, json_sig, Format};
use wordlab::scan::{Scanner, ORDINARY};
use wordlab::spectrum::{curve_for_word, SpectrumError};
use wordlab::{choose_scale, lagrange_constant, Substitution, Word, SPEC_GRAMMAR_VERSION};

#[derive(Parser)]
#[command(name = "wordlab", about = "Abelian and k-abelian power analysis for infinite words")]
struct Cli {
    #[command(flatten)]
    caps: Caps,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Caps {
    /// Longest word any command may materialize.
    #[arg(long, global = true, default_value_t = 1 << 27)]
    max_len: usize,
    /// Upper bound on the estimated working memory, in MiB.
    #[arg(long, global = true, default_value_t = 4096)]
    max_mem_mb: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Print a prefix of a word as raw symbols.
    Gen {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        len: usize,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum exponent per period, with the leftmost witness.
    Scan {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        len: usize,
        /// Equivalence level; 0 means ordinary powers.
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = parse_range)]
        m: (usize, usize),
        /// List every maximal power with at least this many blocks instead.
        #[arg(long)]
        min_e: Option<usize>,
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
    },
    /// Apply or invert a marker substitution.
    Subst {
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: SubstParams,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        len: usize,
        /// Treat the word as an image and print its preimage.
        #[arg(long)]
        decode: bool,
    },
    /// Curve of A(m)/m for k-abelian powers and its running maximum.
    Ace {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        len: usize,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = parse_range)]
        m: (usize, usize),
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
    },
    /// Same curve for ordinary integral powers.
    Exp {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        len: usize,
        #[arg(long, value_parser = parse_range)]
        m: (usize, usize),
        #[arg(long, value_enum, default_value_t = OutFormat::Csv)]
        format: OutFormat,
    },
    /// Lagrange constant of an eventually periodic continued fraction.
    Lagrange {
        /// Partial quotients as `preperiod;period`, e.g. `7,3;1` or `;2`.
        #[arg(long)]
        cf: String,
        #[arg(long, default_value_t = 100)]
        depth: usize,
    },
    /// Smallest even N with N * theta >= Freiman's constant.
    Scale {
        #[arg(long)]
        theta: f64,
    },
    /// Run the transfer-property suites for one substitution.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, value_enum)]
        kind: Kind,
        #[command(flatten)]
        params: SubstParams,
        /// Equivalence level for property-i and property-ii (default: the substitution's own).
        #[arg(long)]
        level: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// All binary words up to this length.
        #[arg(long, default_value_t = 12)]
        exhaustive: usize,
        /// Number of random words.
        #[arg(long, default_value_t = 1000)]
        random: usize,
        /// Maximum random word length.
        #[arg(long, default_value_t = 64)]
        random_len: usize,
        #[arg(long, value_enum, default_value_t = JsonOnly::Json)]
        format: JsonOnly,
    },
}

#[derive(Args)]
struct SubstParams {
    /// Block length (derived from the words for `marked`).
    #[arg(long = "N")]
    n: Option<usize>,
    /// Level parameter of tau.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    u: Option<String>,
    #[arg(long)]
    v: Option<String>,
    #[arg(long)]
    u2: Option<String>,
    #[arg(long)]
    v2: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Sigma,
    Tau,
    Marked,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum JsonOnly {
    Json,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Csv => Format::Csv,
            OutFormat::Json => Format::Json,
        }
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))?;
    let lo: usize = lo.parse().map_err(|e| format!("bad lower bound {lo:?}: {e}"))?;
    let hi: usize = hi.parse().map_err(|e| format!("bad upper bound {hi:?}: {e}"))?;
    if lo == 0 || lo > hi {
        return Err(format!("need 1 <= lo <= hi, got {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_suite(text: &str) -> Result<Suite, String> {
    text.parse()
}

enum Failure {
    Usage(String),
    Cap(String),
    Guaranteed,
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        match e {
            WordError::ResourceLimit { .. } => Failure::Cap(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<SpectrumError> for Failure {
    fn from(e: SpectrumError) -> Self {
        match e {
            SpectrumError::Word(w) => w.into(),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("write failed: {e}"))
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

impl Caps {
    fn check_len(&self, what: &str, len: usize) -> Outcome {
        if len > self.max_len {
            return Err(Failure::Cap(format!(
                "{what} of length {len} exceeds --max-len {}",
                self.max_len
            )));
        }
        Ok(())
    }

    fn check_mem(&self, bytes: u64) -> Outcome {
        let limit = self.max_mem_mb.saturating_mul(1 << 20);
        if bytes > limit {
            return Err(Failure::Cap(format!(
                "estimated memory {} MiB exceeds --max-mem-mb {}",
                bytes.div_ceil(1 << 20),
                self.max_mem_mb
            )));
        }
        Ok(())
    }

    fn prefix(&self, spec: &str, len: usize) -> Result<Word, Failure> {
        self.check_len("prefix", len)?;
        self.check_mem(len as u64)?;
        let spec = WordSpec::parse(spec)?;
        let mut gen = WordGenerator::new(spec)?.with_cap(self.max_len);
        Ok(gen.prefix(len)?)
    }

    /// Word plus a check that a level-`k` table over it fits the memory cap.
    fn scannable(&self, spec: &str, len: usize, k: usize) -> Result<Word, Failure> {
        let w = self.prefix(spec, len)?;
        self.check_mem(len as u64 + estimate_table_bytes(w.symbols(), k.max(1)))?;
        Ok(w)
    }
}

fn build_substitution(kind: Kind, p: &SubstParams) -> Result<Substitution, Failure> {
    let require_n = || p.n.ok_or_else(|| usage("--N is required for this kind"));
    let s = match kind {
        Kind::Sigma => Substitution::sigma(require_n()?),
        Kind::Tau => {
            let k = p.k.ok_or_else(|| usage("--k is required for tau"))?;
            Substitution::tau(k, require_n()?)
        }
        Kind::Marked => {
            let part = |name: &str, value: &Option<String>| -> Result<Word, Failure> {
                value
                    .as_deref()
                    .ok_or_else(|| usage(format!("--{name} is required for marked")))?
                    .parse::<Word>()
                    .map_err(usage)
            };
            let s = Substitution::marked(
                &part("u", &p.u)?,
                &part("v", &p.v)?,
                &part("u2", &p.u2)?,
                &part("v2", &p.v2)?,
            );
            if let (Ok(s), Some(n)) = (&s, p.n) {
                if s.uniform_len() != n {
                    return Err(usage(format!("--N {n} does not match |u#v| = {}", s.uniform_len())));
                }
            }
            s
        }
    };
    s.map_err(usage)
}

fn out_sink(path: Option<&PathBuf>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| usage(format!("cannot create {}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

#[derive(Serialize)]
struct ScanRow {
    m: usize,
    max_exponent: usize,
    ratio: serde_json::Value,
    position: usize,
}

fn scan(
    caps: &Caps,
    spec: &str,
    len: usize,
    k: usize,
    (lo, hi): (usize, usize),
    min_e: Option<usize>,
    format: OutFormat,
) -> Outcome {
    let w = caps.scannable(spec, len, k)?;
    if hi > w.len() {
        return Err(usage(format!("period {hi} exceeds the prefix length {}", w.len())));
    }
    let scanner = Scanner::new(&w, k);
    let mut rows = Vec::new();
    match min_e {
        None => {
            for row in scanner.table(lo, hi).map_err(usage)?.rows {
                rows.push((row.period, row.exponent, row.witness.position));
            }
        }
        Some(e) => {
            for m in lo..=hi {
                for hit in scanner.hits(m, e).map_err(usage)? {
                    rows.push((m, hit.exponent, hit.position));
                }
            }
        }
    }
    let ratio = |e: usize, m: usize| e as f64 / m as f64;
    let mut out = out_sink(None)?;
    match format {
        OutFormat::Csv => {
            writeln!(out, "m,max_exponent,ratio,position")?;
            for &(m, e, pos) in &rows {
                writeln!(out, "{m},{e},{},{pos}", format_sig(ratio(e, m)))?;
            }
        }
        OutFormat::Json => {
            let rows: Vec<ScanRow> = rows
                .iter()
                .map(|&(m, e, position)| ScanRow {
                    m,
                    max_exponent: e,
                    ratio: json_sig(ratio(e, m)),
                    position,
                })
                .collect();
            let level = if k == ORDINARY { json!("ordinary") } else { json!(k) };
            emit_json(
                &json!({"n": w.len(), "k": level, "m_lo": lo, "m_hi": hi, "min_e": min_e, "rows": rows}),
                &mut out,
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn curve(caps: &Caps, spec: &str, len: usize, k: usize, (lo, hi): (usize, usize), format: OutFormat) -> Outcome {
    let w = caps.scannable(spec, len, k)?;
    if hi > len / 2 {
        return Err(SpectrumError::Range { lo, hi, n: len }.into());
    }
    let curve = curve_for_word(&w, lo, hi, k)?;
    let mut out = out_sink(None)?;
    emit_curve(&curve, format.into(), &mut out)?;
    out.flush()?;
    Ok(())
}

fn subst(caps: &Caps, kind: Kind, params: &SubstParams, spec: &str, len: usize, decode: bool) -> Outcome {
    let s = build_substitution(kind, params)?;
    let mut out = out_sink(None)?;
    write!(out, "{s}")?;
    if decode {
        let image = caps.prefix(spec, len)?;
        let source = s.decode(&image).map_err(usage)?;
        writeln!(out, "{source}")?;
    } else {
        caps.check_len("image", len.saturating_mul(s.uniform_len()))?;
        let source = caps.prefix(spec, len)?;
        let image = s.apply(&source).map_err(usage)?;
        writeln!(out, "{image}")?;
    }
    out.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: Suite,
    kind: Kind,
    params: &SubstParams,
    level: Option<usize>,
    seed: u64,
    exhaustive: usize,
    random: usize,
    random_len: usize,
) -> Outcome {
    if exhaustive > 24 {
        return Err(Failure::Cap(format!("--exhaustive {exhaustive} exceeds the cap of 24")));
    }
    let s = build_substitution(kind, params)?;
    let level = level.unwrap_or(s.level());
    if level == 0 {
        return Err(usage("--level must be at least 1"));
    }
    let plan = TrialPlan::standard(exhaustive, random, random_len, seed);
    let verdicts = run_suites(&s, &plan, suite, level)?;
    let mut out = out_sink(None)?;
    emit_json(&verdicts, &mut out)?;
    out.flush()?;
    for v in &verdicts {
        if v.status == Status::Recorded {
            eprintln!(
                "warning: {} on {} at level {} carries no guarantee; {} candidate failures recorded",
                v.suite, v.substitution, v.level, v.failure_count
            );
        }
    }
    if verdicts.iter().any(|v| v.status == Status::Fail) {
        return Err(Failure::Guaranteed);
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Outcome {
    let caps = &cli.caps;
    match cli.command {
        Command::Gen { spec, len, out } => {
            let w = caps.prefix(&spec, len)?;
            let mut sink = out_sink(out.as_ref())?;
            write!(sink, "{w}")?;
            sink.flush()?;
            Ok(())
        }
        Command::Scan {
            spec,
            len,
            k,
            m,
            min_e,
            format,
        } => scan(caps, &spec, len, k, m, min_e, format),
        Command::Subst {
            kind,
            params,
            spec,
            len,
            decode,
        } => subst(caps, kind, &params, &spec, len, decode),
        Command::Ace {
            spec,
            len,
            k,
            m,
            format,
        } => curve(caps, &spec, len, k as usize, m, format),
        Command::Exp { spec, len, m, format } => curve(caps, &spec, len, ORDINARY, m, format),
        Command::Lagrange { cf, depth } => {
            let cf = CfDirective::parse(&cf, true)?;
            let value = lagrange_constant(&cf, depth)?;
            println!("{}", format_sig(value));
            Ok(())
        }
        Command::Scale { theta } => {
            let choice = choose_scale(theta)?;
            let mut out = out_sink(None)?;
            emit_json(
                &json!({"theta": choice.theta, "n": choice.n, "product": json_sig(choice.product)}),
                &mut out,
            )?;
            out.flush()?;
            Ok(())
        }
        Command::Verify {
            suite,
            kind,
            params,
            level,
            seed,
            exhaustive,
            random,
            random_len,
            format: JsonOnly::Json,
        } => verify(suite, kind, &params, level, seed, exhaustive, random, random_len),
    }
}

fn main() -> ExitCode {
    let version: &'static str = format!("{} (spec grammar v{SPEC_GRAMMAR_VERSION})", env!("CARGO_PKG_VERSION")).leak();
    let matches = Cli::command().version(version).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Guaranteed) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Cap(msg)) => {
            eprintln!("error: resource cap: {msg}");
            ExitCode::from(3)
        }
    }
}
