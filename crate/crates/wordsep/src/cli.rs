//! Command-line front end: construct, simulate, verify, sweep, report.
//!
//! Exit codes: 0 verified / success, 2 usage error (bad flags, malformed
//! words, model/shape mismatch), 3 claim violated by the actual run,
//! 4 I/O failure. All randomized behavior derives from `--seed` (default
//! 0), so every report is reproducible.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::json;

use crate::afa::{
    bounded_machine, encoding_machine, set_machine, singleton_vs_set_machine,
    subtraction_separator, three_state_machine,
};
use crate::baseline::min_separating_dfa;
use crate::freegroup::{in_derived1, in_derived2, pair_to_element};
use crate::mcqfa::{
    free_rotation_machine, rotation_separator, spin_lift_machine, swap_pair_machine,
    tensor_machines,
};
use crate::report::{EvalOptions, SeparationMode, SeparationReport, DEFAULT_NONZERO_MIN};
use crate::wordmap::{build_separating_mcqfa, estimate_alpha, AlphaEstimate, CERTIFICATE_TOL};
use crate::words::{all_words_up_to, PairClass, Word, WordPair};
use crate::Error;

const EXIT_OK: i32 = 0;
const EXIT_USAGE: i32 = 2;
const EXIT_VIOLATION: i32 = 3;
const EXIT_IO: i32 = 4;

/// Largest exhaustive sweep length the CLI will accept.
const SWEEP_MAX_LEN: usize = 8;

#[derive(Parser)]
#[command(
    name = "wordsep",
    version,
    about = "Separate word pairs with quantum and affine automata, exactly"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// Real-rotation machine counting an easy pair's witness symbol
    McqfaRotation,
    /// The fixed 2-state machine separating ab from ba with real entries
    McqfaSwap,
    /// Affine counter subtracting on an easy pair's witness symbol
    AfaSubtract,
    /// 2-state affine exact separator for a binary pair
    AfaExact,
    /// 2-state affine machine: accept x exactly, others ≤ (k+1)/(2k+1)
    AfaBounded,
    /// 3-state affine machine: accept x exactly, others ≤ 2/(2k+1)
    #[value(name = "afa-3state")]
    Afa3state,
    /// 2^{|Y|}-state affine machine: accept x exactly, reject all of Y exactly
    AfaSetExact,
    /// Sharpened affine set machine: members exactly 1, others ≤ 2/(2k+1)
    AfaSetBounded,
    /// Float unitary tensor machine: zero exactly on members of X, checked
    /// against the exact rational oracle
    Nondet,
    /// Exact rational tensor machine: zero exactly on members of X
    NondetExact,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepModel {
    McqfaRotation,
    AfaSubtract,
    AfaExact,
    AfaBounded,
    #[value(name = "afa-3state")]
    Afa3state,
    Nondet,
    NondetExact,
    /// Free-group checks: x·y⁻¹ never lies in the second derived subgroup,
    /// and lies in the first iff the pair is hard
    DerivedSeries,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a pair as easy (some symbol count differs) or hard
    Classify {
        x: String,
        y: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a separating machine for the given words and verify its claim
    Separate {
        /// Words: `x y` for pair models, or use --set-x/--set-y
        words: Vec<String>,
        #[arg(long, value_enum)]
        model: Model,
        /// Accept-side words (members for set models), comma separated
        #[arg(long, value_delimiter = ',')]
        set_x: Option<Vec<String>>,
        /// Reject-side words (the accepted words for nondet models)
        #[arg(long, value_delimiter = ',')]
        set_y: Option<Vec<String>>,
        /// Sharpening / scaling parameter for the bounded models
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::report::DEFAULT_TOL)]
        tol: f64,
        /// Write the machine itself (JSON schema 1) to this path
        #[arg(long)]
        dump_machine: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a model exhaustively over all instances up to a length bound
    Sweep {
        #[arg(long, value_enum)]
        model: SweepModel,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = crate::report::DEFAULT_TOL)]
        tol: f64,
        /// Write JSON-lines records here (default: stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the attainable word-map eigenphase for hard pairs and build
    /// separation certificates where it clears π/2
    Wordmap {
        /// A single pair `x y`; omit to sweep all hard pairs up to --max-len
        words: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
        #[arg(long, default_value_t = 64)]
        restarts: u32,
        #[arg(long, default_value_t = 60)]
        iterations: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Brute-force the smallest DFA sending the two words to distinct states
    DfaMin {
        x: String,
        y: String,
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            eprintln!("i/o error: {msg}");
            EXIT_IO
        }
    }
}

fn dispatch(command: Command) -> CmdResult<i32> {
    match command {
        Command::Classify { x, y, format, out } => cmd_classify(&x, &y, format, out.as_deref()),
        Command::Separate {
            words,
            model,
            set_x,
            set_y,
            k,
            seed: _,
            tol,
            dump_machine,
            format,
            out,
        } => cmd_separate(
            &words,
            model,
            set_x,
            set_y,
            k,
            tol,
            dump_machine.as_deref(),
            format,
            out.as_deref(),
        ),
        Command::Sweep {
            model,
            max_len,
            k,
            seed: _,
            tol,
            out,
        } => cmd_sweep(model, max_len, k, tol, out.as_deref()),
        Command::Wordmap {
            words,
            max_len,
            restarts,
            iterations,
            seed,
            out,
            format,
        } => cmd_wordmap(
            &words,
            max_len,
            restarts,
            iterations,
            seed,
            out.as_deref(),
            format,
        ),
        Command::DfaMin {
            x,
            y,
            n_max,
            format,
            out,
        } => cmd_dfa_min(&x, &y, n_max, format, out.as_deref()),
    }
}

fn emit(content: &str, out: Option<&Path>) -> CmdResult<()> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

// ---------------------------------------------------------------------------
// classify

fn cmd_classify(x: &str, y: &str, format: Format, out: Option<&Path>) -> CmdResult<i32> {
    let pair = WordPair::parse(x, y, 2)?;
    let class = pair.classify();
    let content = match format {
        Format::Json => {
            let mut j = json!({
                "schema": 1,
                "x": pair.x.display_letters(),
                "y": pair.y.display_letters(),
                "class": if class.is_hard() { "hard" } else { "easy" },
            });
            match &class {
                PairClass::Easy { witness_symbol } => {
                    j["witness"] =
                        json!(crate::words::symbol_letter(*witness_symbol).to_string());
                }
                PairClass::Hard(red) => {
                    j["reduction"] = json!({
                        "x": red.pair.x.display_letters(),
                        "y": red.pair.y.display_letters(),
                        "differing_position": red.differing_position,
                        "zero_symbol": crate::words::symbol_letter(red.zero_symbol).to_string(),
                        "one_symbol": crate::words::symbol_letter(red.one_symbol).to_string(),
                    });
                }
            }
            format!("{}\n", serde_json::to_string_pretty(&j).unwrap())
        }
        Format::Csv => {
            let mut s = String::from("x,y,class,witness,reduced_x,reduced_y\n");
            let (class_name, witness, rx, ry) = match &class {
                PairClass::Easy { witness_symbol } => (
                    "easy",
                    crate::words::symbol_letter(*witness_symbol).to_string(),
                    String::new(),
                    String::new(),
                ),
                PairClass::Hard(red) => (
                    "hard",
                    String::new(),
                    red.pair.x.display_letters(),
                    red.pair.y.display_letters(),
                ),
            };
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                csv_escape(&pair.x.display_letters()),
                csv_escape(&pair.y.display_letters()),
                class_name,
                witness,
                rx,
                ry
            );
            s
        }
    };
    emit(&content, out)?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// separate

fn parse_side(items: &[String]) -> CmdResult<Vec<Word>> {
    items
        .iter()
        .map(|s| Word::parse(s, 2).map_err(Failure::from))
        .collect()
}

/// Re-validate every word against the largest alphabet seen, so equal
/// letter sequences compare equal across both sides.
fn unify_alphabet(xs: Vec<Word>, ys: Vec<Word>) -> (Vec<Word>, Vec<Word>, u8) {
    let k = xs
        .iter()
        .chain(&ys)
        .map(Word::alphabet)
        .max()
        .unwrap_or(2)
        .max(2);
    let lift = |ws: Vec<Word>| -> Vec<Word> {
        ws.into_iter()
            .map(|w| Word::new(w.symbols().to_vec(), k).expect("lift to larger alphabet"))
            .collect()
    };
    (lift(xs), lift(ys), k)
}

struct Separation {
    report: SeparationReport,
    report_json: serde_json::Value,
    machine_json: serde_json::Value,
}

#[allow(clippy::too_many_arguments)]
fn cmd_separate(
    words: &[String],
    model: Model,
    set_x: Option<Vec<String>>,
    set_y: Option<Vec<String>>,
    k: u64,
    tol: f64,
    dump_machine: Option<&Path>,
    format: Format,
    out: Option<&Path>,
) -> CmdResult<i32> {
    let xs = match set_x {
        Some(items) => parse_side(&items)?,
        None => parse_side(words.get(..1).unwrap_or_default())?,
    };
    let ys = match set_y {
        Some(items) => parse_side(&items)?,
        None => parse_side(words.get(1..).unwrap_or_default())?,
    };
    if xs.is_empty() || ys.is_empty() {
        return Err(Failure::Usage(
            "need words on both sides: pass `x y` or --set-x/--set-y".into(),
        ));
    }
    let (xs, ys, alphabet) = unify_alphabet(xs, ys);
    let opts = EvalOptions {
        tol,
        nonzero_min: DEFAULT_NONZERO_MIN,
    };
    let sep = build_separation(model, &xs, &ys, alphabet, k, &opts)?;
    if let Some(path) = dump_machine {
        fs::write(
            path,
            format!("{}\n", serde_json::to_string_pretty(&sep.machine_json).unwrap()),
        )?;
    }
    let content = match format {
        Format::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&sep.report_json).unwrap()
        ),
        Format::Csv => {
            let mut s = String::from("word,side,value,approx,ok\n");
            for v in &sep.report.values {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    csv_escape(&v.word),
                    if v.accept_side { "accept" } else { "reject" },
                    csv_escape(&v.value),
                    v.approx,
                    v.ok
                );
            }
            s
        }
    };
    emit(&content, out)?;
    Ok(if sep.report.verified {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn one_each<'a>(xs: &'a [Word], ys: &'a [Word], model: &str) -> CmdResult<(&'a Word, &'a Word)> {
    if xs.len() != 1 || ys.len() != 1 {
        return Err(Failure::Usage(format!(
            "model {model} separates exactly one word from one word"
        )));
    }
    Ok((&xs[0], &ys[0]))
}

fn bound(num: u64, den: u64) -> SeparationMode {
    SeparationMode::Bounded(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

fn build_separation(
    model: Model,
    xs: &[Word],
    ys: &[Word],
    alphabet: u8,
    k: u64,
    opts: &EvalOptions,
) -> CmdResult<Separation> {
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    match model {
        Model::McqfaRotation => {
            let (x, y) = one_each(xs, ys, "mcqfa-rotation")?;
            let pair = WordPair::new(x.clone(), y.clone())?;
            let (m, x_accepted) = rotation_separator(&pair)?;
            let (acc, rej) = if x_accepted { (xs, ys) } else { (ys, xs) };
            let report = m.evaluate_separation(acc, rej, SeparationMode::Exact, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::McqfaSwap => {
            let m = swap_pair_machine();
            let report = m.evaluate_separation(xs, ys, SeparationMode::Exact, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::AfaSubtract => {
            let (x, y) = one_each(xs, ys, "afa-subtract")?;
            let pair = WordPair::new(x.clone(), y.clone())?;
            let (m, x_accepted) = subtraction_separator(&pair)?;
            let (acc, rej) = if x_accepted { (xs, ys) } else { (ys, xs) };
            let report = m.evaluate_separation(acc, rej, SeparationMode::Exact, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::AfaExact => {
            let (x, y) = one_each(xs, ys, "afa-exact")?;
            let m = encoding_machine(x, y)?;
            let report = m.evaluate_separation(xs, ys, SeparationMode::Exact, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::AfaBounded => {
            if xs.len() != 1 {
                return Err(Failure::Usage(
                    "model afa-bounded distinguishes exactly one word".into(),
                ));
            }
            let m = bounded_machine(&xs[0], alphabet, k)?;
            let report = m.evaluate_separation(xs, ys, bound(k + 1, 2 * k + 1), opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::Afa3state => {
            if xs.len() != 1 {
                return Err(Failure::Usage(
                    "model afa-3state distinguishes exactly one word".into(),
                ));
            }
            let m = three_state_machine(&xs[0], alphabet, k)?;
            let report = m.evaluate_separation(xs, ys, bound(2, 2 * k + 1), opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::AfaSetExact => {
            if xs.len() != 1 {
                return Err(Failure::Usage(
                    "model afa-set-exact distinguishes exactly one word".into(),
                ));
            }
            let m = singleton_vs_set_machine(&xs[0], ys)?;
            let report = m.evaluate_separation(xs, ys, SeparationMode::Exact, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::AfaSetBounded => {
            let m = set_machine(xs, k, true)?;
            let report = m.evaluate_separation(xs, ys, bound(2, 2 * k + 1), opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
        Model::Nondet => {
            let lifts = xs
                .iter()
                .map(spin_lift_machine)
                .collect::<crate::Result<Vec<_>>>()?;
            let m = tensor_machines(&lifts, opts.tol)?;
            let report = m.evaluate_separation(ys, xs, SeparationMode::Nondet, opts)?;
            let oracles = xs
                .iter()
                .map(free_rotation_machine)
                .collect::<crate::Result<Vec<_>>>()?;
            let om = tensor_machines(&oracles, 0.0)?;
            let oracle_report = om.evaluate_separation(ys, xs, SeparationMode::Nondet, opts)?;
            let verified = report.verified && oracle_report.verified;
            let mut report_json = report.to_json();
            report_json["verified"] = json!(verified);
            report_json["oracle"] = oracle_report.to_json();
            let mut report = report;
            report.verified = verified;
            Ok(Separation {
                report_json,
                machine_json: m.to_json(),
                report,
            })
        }
        Model::NondetExact => {
            let oracles = xs
                .iter()
                .map(free_rotation_machine)
                .collect::<crate::Result<Vec<_>>>()?;
            let m = tensor_machines(&oracles, 0.0)?;
            let report = m.evaluate_separation(ys, xs, SeparationMode::Nondet, opts)?;
            Ok(Separation {
                report_json: report.to_json(),
                machine_json: m.to_json(),
                report,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRecord {
    instance: String,
    verified: bool,
    detail: serde_json::Value,
}

fn pair_instance(x: &Word, y: &Word) -> String {
    format!("{}|{}", x.display_letters(), y.display_letters())
}

fn report_record(instance: String, report: &SeparationReport) -> SweepRecord {
    SweepRecord {
        instance,
        verified: report.verified,
        detail: report.to_json(),
    }
}

/// All ordered pairs of distinct words, in enumeration order.
fn distinct_pairs(words: &[Word]) -> Vec<(Word, Word)> {
    let mut pairs = Vec::new();
    for x in words {
        for y in words {
            if x != y {
                pairs.push((x.clone(), y.clone()));
            }
        }
    }
    pairs
}

fn cmd_sweep(
    model: SweepModel,
    max_len: usize,
    k: u64,
    tol: f64,
    out: Option<&Path>,
) -> CmdResult<i32> {
    use rayon::prelude::*;

    if max_len > SWEEP_MAX_LEN {
        return Err(Failure::Usage(format!(
            "--max-len capped at {SWEEP_MAX_LEN} for exhaustive sweeps"
        )));
    }
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let opts = EvalOptions {
        tol,
        nonzero_min: DEFAULT_NONZERO_MIN,
    };
    // Instances run in parallel; ordered collection keeps the output in
    // enumeration order regardless of scheduling.
    let records: Vec<SweepRecord> = match model {
        SweepModel::AfaExact => distinct_pairs(&all_words_up_to(2, max_len))
            .par_iter()
            .map(|(x, y)| -> crate::Result<SweepRecord> {
                let m = encoding_machine(x, y)?;
                let report = m.evaluate_separation(
                    std::slice::from_ref(x),
                    std::slice::from_ref(y),
                    SeparationMode::Exact,
                    &opts,
                )?;
                Ok(report_record(pair_instance(x, y), &report))
            })
            .collect::<crate::Result<Vec<_>>>()?,
        SweepModel::McqfaRotation | SweepModel::AfaSubtract => {
            distinct_pairs(&all_words_up_to(2, max_len))
                .par_iter()
                .filter_map(|(x, y)| {
                    let pair = match WordPair::new(x.clone(), y.clone()) {
                        Ok(p) => p,
                        Err(e) => return Some(Err(e)),
                    };
                    pair.easy_witness()?;
                    let run = || -> crate::Result<SweepRecord> {
                        let report = if model == SweepModel::McqfaRotation {
                            let (m, x_acc) = rotation_separator(&pair)?;
                            let (acc, rej) =
                                if x_acc { (&pair.x, &pair.y) } else { (&pair.y, &pair.x) };
                            m.evaluate_separation(
                                std::slice::from_ref(acc),
                                std::slice::from_ref(rej),
                                SeparationMode::Exact,
                                &opts,
                            )?
                        } else {
                            let (m, x_acc) = subtraction_separator(&pair)?;
                            let (acc, rej) =
                                if x_acc { (&pair.x, &pair.y) } else { (&pair.y, &pair.x) };
                            m.evaluate_separation(
                                std::slice::from_ref(acc),
                                std::slice::from_ref(rej),
                                SeparationMode::Exact,
                                &opts,
                            )?
                        };
                        Ok(report_record(pair_instance(x, y), &report))
                    };
                    Some(run())
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        SweepModel::AfaBounded | SweepModel::Afa3state => {
            let words = all_words_up_to(2, max_len);
            words
                .par_iter()
                .map(|x| -> crate::Result<SweepRecord> {
                    let (m, mode) = if model == SweepModel::AfaBounded {
                        (bounded_machine(x, 2, k)?, bound(k + 1, 2 * k + 1))
                    } else {
                        (three_state_machine(x, 2, k)?, bound(2, 2 * k + 1))
                    };
                    let others: Vec<Word> =
                        words.iter().filter(|z| *z != x).cloned().collect();
                    let report =
                        m.evaluate_separation(std::slice::from_ref(x), &others, mode, &opts)?;
                    Ok(report_record(x.display_letters(), &report))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        SweepModel::Nondet | SweepModel::NondetExact => {
            let words = all_words_up_to(2, max_len);
            words
                .par_iter()
                .map(|x| -> crate::Result<SweepRecord> {
                    let others: Vec<Word> =
                        words.iter().filter(|z| *z != x).cloned().collect();
                    let exact = tensor_machines(&[free_rotation_machine(x)?], 0.0)?;
                    let mut report = exact.evaluate_separation(
                        &others,
                        std::slice::from_ref(x),
                        SeparationMode::Nondet,
                        &opts,
                    )?;
                    if model == SweepModel::Nondet {
                        let lifted = tensor_machines(&[spin_lift_machine(x)?], opts.tol)?;
                        let float_report = lifted.evaluate_separation(
                            &others,
                            std::slice::from_ref(x),
                            SeparationMode::Nondet,
                            &opts,
                        )?;
                        report.verified &= float_report.verified;
                    }
                    Ok(report_record(x.display_letters(), &report))
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
        SweepModel::DerivedSeries => {
            let words = all_words_up_to(2, max_len);
            let mut pairs = Vec::new();
            for (i, x) in words.iter().enumerate() {
                for y in &words[i + 1..] {
                    pairs.push((x.clone(), y.clone()));
                }
            }
            pairs
                .par_iter()
                .map(|(x, y)| -> crate::Result<SweepRecord> {
                    let pair = WordPair::new(x.clone(), y.clone())?;
                    let omega = pair_to_element(x, y)?;
                    let escapes_second = !in_derived2(&omega);
                    let first_matches_hard = in_derived1(&omega) == pair.classify().is_hard();
                    Ok(SweepRecord {
                        instance: pair_instance(x, y),
                        verified: escapes_second && first_matches_hard,
                        detail: json!({
                            "omega": omega.to_string(),
                            "outside_second_derived": escapes_second,
                            "first_derived_iff_hard": first_matches_hard,
                        }),
                    })
                })
                .collect::<crate::Result<Vec<_>>>()?
        }
    };

    let mut lines = String::new();
    let mut violations = 0usize;
    for r in &records {
        if !r.verified {
            violations += 1;
        }
        let line = json!({
            "schema": 1,
            "instance": r.instance,
            "verified": r.verified,
            "detail": r.detail,
        });
        let _ = writeln!(lines, "{}", serde_json::to_string(&line).unwrap());
    }
    emit(&lines, out)?;
    let summary = json!({
        "schema": 1,
        "swept": records.len(),
        "verified": records.len() - violations,
        "violations": violations,
    });
    if out.is_some() {
        println!("{}", serde_json::to_string(&summary).unwrap());
    } else {
        eprintln!("{}", serde_json::to_string(&summary).unwrap());
    }
    Ok(if violations == 0 { EXIT_OK } else { EXIT_VIOLATION })
}

// ---------------------------------------------------------------------------
// wordmap

fn is_swap_pair(pair: &WordPair) -> bool {
    (pair.x.symbols() == [0, 1] && pair.y.symbols() == [1, 0])
        || (pair.x.symbols() == [1, 0] && pair.y.symbols() == [0, 1])
}

fn wordmap_record(
    pair: &WordPair,
    restarts: u32,
    iterations: u32,
    seed: u64,
) -> CmdResult<(serde_json::Value, AlphaEstimate, Option<f64>)> {
    let omega = pair_to_element(&pair.x, &pair.y)?;
    let mut estimate = estimate_alpha(&omega, restarts, iterations, seed)?;
    let residual = if estimate.alpha_hat >= PI / 2.0 - CERTIFICATE_TOL {
        let (_machine, residual) = build_separating_mcqfa(&pair.x, &pair.y, &estimate)?;
        estimate.residual = Some(residual);
        Some(residual)
    } else {
        None
    };
    let record = json!({
        "schema": 1,
        "x": pair.x.display_letters(),
        "y": pair.y.display_letters(),
        "omega": omega.to_string(),
        "alpha_hat": estimate.alpha_hat,
        "quarter_turn_reached": estimate.alpha_hat >= PI / 2.0 - CERTIFICATE_TOL,
        "residual": residual,
        "argmax": [
            {
                "colatitude": estimate.argmax.0.colatitude,
                "longitude": estimate.argmax.0.longitude,
                "angle": estimate.argmax.0.angle,
            },
            {
                "colatitude": estimate.argmax.1.colatitude,
                "longitude": estimate.argmax.1.longitude,
                "angle": estimate.argmax.1.angle,
            },
        ],
        "restarts": restarts,
        "iterations": iterations,
        "seed": seed,
    });
    Ok((record, estimate, residual))
}

fn cmd_wordmap(
    words: &[String],
    max_len: usize,
    restarts: u32,
    iterations: u32,
    seed: u64,
    out: Option<&Path>,
    format: Format,
) -> CmdResult<i32> {
    let pairs: Vec<WordPair> = if words.is_empty() {
        if max_len > SWEEP_MAX_LEN {
            return Err(Failure::Usage(format!(
                "--max-len capped at {SWEEP_MAX_LEN}"
            )));
        }
        let all = all_words_up_to(2, max_len);
        let mut pairs = Vec::new();
        for (i, x) in all.iter().enumerate() {
            for y in &all[i + 1..] {
                let pair = WordPair::new(x.clone(), y.clone())?;
                if pair.classify().is_hard() {
                    pairs.push(pair);
                }
            }
        }
        pairs
    } else if words.len() == 2 {
        vec![WordPair::parse(&words[0], &words[1], 2)?]
    } else {
        return Err(Failure::Usage(
            "pass exactly two words, or none with --max-len for the hard-pair sweep".into(),
        ));
    };

    let mut lines = String::new();
    let mut csv = String::from("x,y,omega,alpha_hat,quarter_turn_reached,residual\n");
    let mut regression_failed = false;
    for pair in &pairs {
        let (record, estimate, residual) = wordmap_record(pair, restarts, iterations, seed)?;
        // The one hard pair with a known-reachable quarter turn is a
        // regression gate; everything else is evidence gathering.
        if is_swap_pair(pair) && estimate.alpha_hat < PI / 2.0 - 1e-3 {
            regression_failed = true;
        }
        match format {
            Format::Json => {
                let _ = writeln!(lines, "{}", serde_json::to_string(&record).unwrap());
            }
            Format::Csv => {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{},{}",
                    csv_escape(&pair.x.display_letters()),
                    csv_escape(&pair.y.display_letters()),
                    csv_escape(record["omega"].as_str().unwrap_or_default()),
                    estimate.alpha_hat,
                    record["quarter_turn_reached"],
                    residual.map_or(String::new(), |r| r.to_string()),
                );
            }
        }
    }
    let content = match format {
        Format::Json => lines,
        Format::Csv => csv,
    };
    emit(&content, out)?;
    Ok(if regression_failed {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

// ---------------------------------------------------------------------------
// dfa-min

fn cmd_dfa_min(
    x: &str,
    y: &str,
    n_max: usize,
    format: Format,
    out: Option<&Path>,
) -> CmdResult<i32> {
    let pair = WordPair::parse(x, y, 1)?;
    let witness = min_separating_dfa(&pair.x, &pair.y, n_max)?;
    let content = match format {
        Format::Json => {
            let j = json!({
                "schema": 1,
                "x": pair.x.display_letters(),
                "y": pair.y.display_letters(),
                "n_max": n_max,
                "size": witness.as_ref().map(|d| d.n_states()),
                "table": witness.as_ref().map(|d| d.table().to_vec()),
            });
            format!("{}\n", serde_json::to_string_pretty(&j).unwrap())
        }
        Format::Csv => {
            let mut s = String::from("x,y,n_max,size\n");
            let _ = writeln!(
                s,
                "{},{},{},{}",
                csv_escape(&pair.x.display_letters()),
                csv_escape(&pair.y.display_letters()),
                n_max,
                witness
                    .as_ref()
                    .map_or(String::new(), |d| d.n_states().to_string()),
            );
            s
        }
    };
    emit(&content, out)?;
    Ok(EXIT_OK)
}
