//! Command-line front end. Every subcommand writes one JSON document to
//! stdout (or a plain-text rendering with `--plain`).
//!
//! Exit codes: 0 success or true, 1 false, 2 usage or input error,
//! 3 state budget, prefix budget or bound exceeded.

use std::ffi::OsString;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::Error;
use crate::factorize::{self, DEFAULT_CAP, DEFAULT_TREE_DEPTH};
use crate::oracle::{table_of_within, PrefixTable};
use crate::presentation::{self, CanonicalForm, Limits, Presentation};
use crate::stability;
use crate::transform;
use crate::word::{Alphabet, EventuallyPeriodicWord, Symbol};
use crate::{entropy, presentation::AsCanonical};

#[derive(Parser, Debug)]
#[command(name = "shiftlab", version, about = "Decimation, interleaving and closure of closed shift sets")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    plain: bool,

    /// State budget for every automaton construction.
    #[arg(long, global = true, default_value_t = Limits::default().max_states)]
    max_states: usize,

    /// Word budget for prefix tables.
    #[arg(long, global = true, default_value_t = Limits::default().max_prefixes)]
    max_prefixes: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normalize and print the canonical form.
    Show { file: String },
    /// ψ_{i,n}(X).
    Decimate {
        file: String,
        #[arg(short = 'i', default_value_t = 0)]
        offset: usize,
        #[arg(short = 'n')]
        modulus: usize,
    },
    /// X_0 ⊛ X_1 ⊛ … ⊛ X_{n−1}.
    Interleave {
        #[arg(required = true)]
        files: Vec<String>,
    },
    /// X^[n].
    Closure {
        file: String,
        #[arg(short = 'n')]
        modulus: usize,
    },
    /// S^k X.
    Shift {
        file: String,
        #[arg(short = 'k', default_value_t = 1)]
        steps: usize,
    },
    /// Set equality; exit 1 with a distinguishing prefix when unequal.
    Eq { left: String, right: String },
    /// Set inclusion; exit 1 with a prefix of the left set missing from the right.
    Subset { left: String, right: String },
    /// Interleaving closure spectrum N(X).
    Spectrum {
        file: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Self-interleaving spectrum N_self(X).
    SelfSpectrum {
        file: String,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Iterated interleaving factorization tree.
    Tree {
        file: String,
        #[arg(long, default_value_t = DEFAULT_TREE_DEPTH)]
        depth: usize,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
    },
    /// Shift invariance, stability and weak stability.
    Stability {
        file: String,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// The set of words avoiding every listed block.
    Forbid {
        /// Symbols, either as one string of characters or comma-separated.
        alphabet: String,
        /// Blocks as word literals, or a single JSON array of symbol arrays.
        blocks: Vec<String>,
    },
    /// Minimal forbidden blocks up to length L.
    MinBlocks {
        file: String,
        #[arg(short = 'L')]
        max_len: usize,
    },
    /// Block and prefix counts with topological and prefix entropy.
    Entropy {
        file: String,
        #[arg(short = 'K', default_value_t = 12)]
        k: usize,
        #[arg(long)]
        log2: bool,
    },
    /// Interleaving mean law and decimation bounds; exit 1 if any fails.
    EntropyLaws {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(short = 'n')]
        modulus: usize,
    },
    /// Recompute an operation on prefix tables and diff against the automaton result.
    OracleCheck {
        #[arg(required = true)]
        files: Vec<String>,
        #[arg(long, value_enum)]
        op: OracleOp,
        /// Depth of the input tables.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(short = 'i', default_value_t = 0)]
        offset: usize,
        #[arg(short = 'n', default_value_t = 2)]
        modulus: usize,
        #[arg(short = 'k', default_value_t = 1)]
        steps: usize,
    },
    /// A set whose spectrum is exactly the divisors of N0.
    MakeSpectrum {
        #[arg(short = 'n')]
        n0: usize,
        #[arg(short = 'a', default_value = "01")]
        alphabet: String,
    },
    /// The binary set forbidding 11.
    Fibonacci,
    /// The full shift.
    Full {
        #[arg(short = 'a', default_value = "01")]
        alphabet: String,
    },
    /// The finite set of listed eventually periodic words.
    Words {
        #[arg(required = true)]
        literals: Vec<String>,
        /// Defaults to the characters used by the literals.
        #[arg(short = 'a')]
        alphabet: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OracleOp {
    Show,
    Decimate,
    Interleave,
    Closure,
    Shift,
    Union,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Module(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// A report and the exit code it implies.
struct Report {
    value: Value,
    code: u8,
    plain: Option<String>,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, code: 0, plain: None }
    }

    fn verdict(value: Value, holds: bool) -> Self {
        Report { value, code: if holds { 0 } else { 1 }, plain: None }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return Outcome {
                code,
                stdout: if code == 0 { e.to_string() } else { String::new() },
                stderr: if code == 0 { String::new() } else { e.to_string() },
            };
        }
    };
    let limits = Limits { max_states: cli.max_states, max_prefixes: cli.max_prefixes };
    match execute(&cli.command, &limits) {
        Ok(report) => {
            let stdout = match (cli.plain, report.plain) {
                (true, Some(text)) => text,
                (true, None) => render_plain(&report.value),
                (false, _) => pretty(&report.value),
            };
            Outcome { code: report.code, stdout, stderr: String::new() }
        }
        Err(failure) => {
            let (code, value) = failure_json(&failure);
            let stderr = value["message"].as_str().unwrap_or_default().to_string() + "\n";
            let stdout = if cli.plain { render_plain(&value) } else { pretty(&value) };
            Outcome { code, stdout, stderr }
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn failure_json(f: &Failure) -> (u8, Value) {
    match f {
        Failure::Io(msg) => (2, json!({ "error": "Io", "message": msg })),
        Failure::Module(e) => {
            let mut v = json!({ "error": e.kind(), "message": e.to_string() });
            let code = match e {
                Error::BudgetExceeded { limit } | Error::SizeExceeded { limit } => {
                    v["limit"] = json!(limit);
                    3
                }
                Error::BoundExceeded { bound, cap, partial } => {
                    v["bound"] = json!(bound);
                    v["cap"] = json!(cap);
                    v["partial"] = partial.iter().map(|(n, ok)| (n.to_string(), json!(ok))).collect();
                    3
                }
                Error::AlphabetMismatch { left, right } => {
                    v["left"] = json!(left);
                    v["right"] = json!(right);
                    2
                }
                _ => 2,
            };
            (code, v)
        }
    }
}

/// `key: value` lines, with nested values in compact JSON.
fn render_plain(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}\n"),
                other => format!("{k}: {other}\n"),
            })
            .collect(),
        Value::String(s) => s.clone() + "\n",
        other => other.to_string() + "\n",
    }
}

fn plain_presentation(c: &CanonicalForm) -> String {
    let a = c.alphabet();
    let mut out = format!("alphabet: {}\nstates: {}\n", a.symbols().join(" "), c.state_count());
    for (s, row) in c.table().iter().enumerate() {
        for (sym, t) in row.iter().enumerate() {
            if let Some(t) = t {
                out += &format!("{s} -{}-> {t}\n", a.token(sym as Symbol));
            }
        }
    }
    out
}

fn presentation_report(c: CanonicalForm) -> Report {
    Report { value: c.to_json_value(), code: 0, plain: Some(plain_presentation(&c)) }
}

fn read_source(path: &str) -> CliResult<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{path}: {e}")))
    }
}

fn load(path: &str, limits: &Limits) -> CliResult<CanonicalForm> {
    let text = read_source(path)?;
    Ok(Presentation::from_json(&text)?.normalize_within(limits)?)
}

fn load_all(paths: &[String], limits: &Limits) -> CliResult<Vec<CanonicalForm>> {
    paths.iter().map(|p| load(p, limits)).collect()
}

/// `"01"` is two symbols, `"a,b,c"` or `"a b c"` is three.
fn parse_alphabet(spec: &str) -> Result<Alphabet, Error> {
    if spec.contains(',') || spec.contains(char::is_whitespace) {
        Alphabet::new(spec.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()))
    } else {
        Alphabet::from_chars(spec)
    }
}

fn word_string(a: &Alphabet, w: &[Symbol]) -> String {
    a.format_finite(w)
}

fn parse_blocks(a: &Alphabet, args: &[String]) -> Result<Vec<Vec<Symbol>>, Error> {
    if let [only] = args {
        if only.trim_start().starts_with('[') {
            let raw: Vec<Vec<String>> =
                serde_json::from_str(only).map_err(|e| Error::InvalidArgument(format!("block list: {e}")))?;
            return raw
                .iter()
                .map(|b| b.iter().map(|t| a.index_of(t).ok_or_else(|| Error::UnknownSymbol(t.clone()))).collect())
                .collect();
        }
    }
    args.iter().map(|b| a.parse_finite(b)).collect()
}

fn execute(command: &Command, limits: &Limits) -> CliResult<Report> {
    Ok(match command {
        Command::Show { file } => presentation_report(load(file, limits)?),
        Command::Decimate { file, offset, modulus } => {
            presentation_report(transform::decimate_within(&load(file, limits)?, *offset, *modulus, limits)?)
        }
        Command::Interleave { files } => {
            presentation_report(transform::interleave_within(&load_all(files, limits)?, limits)?)
        }
        Command::Closure { file, modulus } => {
            presentation_report(transform::interleave_closure_within(&load(file, limits)?, *modulus, limits)?)
        }
        Command::Shift { file, steps } => {
            presentation_report(presentation::shift_set_within(&load(file, limits)?, *steps, limits)?)
        }
        Command::Eq { left, right } => {
            let (l, r) = (load(left, limits)?, load(right, limits)?);
            let a = l.alphabet().clone();
            let lr = presentation::difference_witness_within(&l, &r, limits)?;
            let rl = presentation::difference_witness_within(&r, &l, limits)?;
            let mut v = json!({ "equal": lr.is_none() && rl.is_none() });
            if let Some(w) = &lr {
                v["witness"] = json!(word_string(&a, w));
                v["witness_in"] = json!("left");
            } else if let Some(w) = &rl {
                v["witness"] = json!(word_string(&a, w));
                v["witness_in"] = json!("right");
            }
            Report::verdict(v, lr.is_none() && rl.is_none())
        }
        Command::Subset { left, right } => {
            let (l, r) = (load(left, limits)?, load(right, limits)?);
            let w = presentation::difference_witness_within(&l, &r, limits)?;
            let mut v = json!({ "subset": w.is_none() });
            if let Some(w) = &w {
                v["witness"] = json!(word_string(l.alphabet(), w));
            }
            Report::verdict(v, w.is_none())
        }
        Command::Spectrum { file, cap } => {
            let p = load(file, limits)?;
            Report::ok(factorize::spectrum_within(&p, *cap, limits)?.to_json_value(p.alphabet()))
        }
        Command::SelfSpectrum { file, cap } => {
            let p = load(file, limits)?;
            Report::ok(factorize::self_spectrum_within(&p, *cap, limits)?.to_json_value(p.alphabet()))
        }
        Command::Tree { file, depth, cap } => {
            let p = load(file, limits)?;
            Report::ok(factorize::factor_tree_within(&p, *depth, *cap, limits)?.to_json_value())
        }
        Command::Stability { file, bound } => {
            Report::ok(stability::stability_report_within(&load(file, limits)?, *bound, limits)?.to_json_value())
        }
        Command::Forbid { alphabet, blocks } => {
            let a = parse_alphabet(alphabet)?;
            presentation_report(stability::from_forbidden_blocks(&a, &parse_blocks(&a, blocks)?)?)
        }
        Command::MinBlocks { file, max_len } => {
            let p = load(file, limits)?;
            let blocks = stability::minimal_forbidden_blocks(&p, *max_len)?;
            let words: Vec<String> = blocks.iter().map(|b| word_string(p.alphabet(), b)).collect();
            let plain = words.iter().map(|w| w.clone() + "\n").collect();
            Report { value: json!({ "max_len": max_len, "blocks": words }), code: 0, plain: Some(plain) }
        }
        Command::Entropy { file, k, log2 } => {
            Report::ok(entropy::entropy_report(&load(file, limits)?, *k)?.to_json_value(*log2))
        }
        Command::EntropyLaws { files, modulus } => {
            let report = entropy::check_entropy_laws(&load_all(files, limits)?, *modulus)?;
            Report::verdict(report.to_json_value(), report.holds())
        }
        Command::OracleCheck { files, op, depth, offset, modulus, steps } => {
            let sets = load_all(files, limits)?;
            oracle_check(&sets, *op, *depth, *offset, *modulus, *steps, limits)?
        }
        Command::MakeSpectrum { n0, alphabet } => {
            presentation_report(factorize::construct_with_spectrum_within(&parse_alphabet(alphabet)?, *n0, limits)?)
        }
        Command::Fibonacci => {
            let a = Alphabet::binary();
            presentation_report(stability::from_forbidden_blocks(&a, &[vec![1, 1]])?)
        }
        Command::Full { alphabet } => presentation_report(presentation::full_shift(&parse_alphabet(alphabet)?)),
        Command::Words { literals, alphabet } => {
            let a = match alphabet {
                Some(spec) => parse_alphabet(spec)?,
                None => infer_alphabet(literals)?,
            };
            let words = literals.iter().map(|l| EventuallyPeriodicWord::parse(&a, l)).collect::<Result<Vec<_>, _>>()?;
            presentation_report(presentation::from_words(&words)?)
        }
    })
}

/// Sorted distinct characters of the literals, parentheses excluded.
fn infer_alphabet(literals: &[String]) -> Result<Alphabet, Error> {
    let chars: std::collections::BTreeSet<char> =
        literals.iter().flat_map(|l| l.chars()).filter(|c| !matches!(c, '(' | ')') && !c.is_whitespace()).collect();
    Alphabet::from_chars(&chars.into_iter().collect::<String>())
}

fn oracle_check(
    sets: &[CanonicalForm],
    op: OracleOp,
    depth: usize,
    offset: usize,
    modulus: usize,
    steps: usize,
    limits: &Limits,
) -> CliResult<Report> {
    let first = &sets[0];
    let second = || sets.get(1).ok_or_else(|| Error::InvalidArgument("this operation needs two input files".into()));
    let tables = sets.iter().map(|s| table_of_within(s, depth, limits)).collect::<Result<Vec<_>, _>>()?;
    let (result, expected): (CanonicalForm, PrefixTable) = match op {
        OracleOp::Show => (first.clone(), tables[0].clone()),
        OracleOp::Decimate => {
            (transform::decimate_within(first, offset, modulus, limits)?, tables[0].decimate(offset, modulus)?)
        }
        OracleOp::Interleave => (transform::interleave_within(sets, limits)?, PrefixTable::interleave(&tables)?),
        OracleOp::Closure => {
            (transform::interleave_closure_within(first, modulus, limits)?, tables[0].closure(modulus)?)
        }
        OracleOp::Shift => (presentation::shift_set_within(first, steps, limits)?, tables[0].shift(steps)?),
        OracleOp::Union => (presentation::union(first, second()?)?, tables[0].union(&tables[1])?),
    };
    let actual = table_of_within(result.canonical_within(limits)?.as_ref(), expected.depth(), limits)?;
    let a = first.alphabet();
    let sample = |words: Vec<&Vec<Symbol>>| words.into_iter().take(20).map(|w| word_string(a, w)).collect::<Vec<_>>();
    let automaton_only = sample(actual.words().difference(expected.words()).collect());
    let oracle_only = sample(expected.words().difference(actual.words()).collect());
    let agree = actual == expected;
    let value = json!({
        "op": format!("{op:?}").to_lowercase(),
        "input_depth": depth,
        "output_depth": expected.depth(),
        "prefixes": expected.len(),
        "agree": agree,
        "automaton_only": automaton_only,
        "oracle_only": oracle_only,
    });
    Ok(Report::verdict(value, agree))
}
