//! Command-line front end for Bruhat order queries.
//!
//! Results are printed as JSON on stdout (objects have sorted keys, so the
//! output is byte-deterministic); diagnostics go to stderr. Exit codes:
//! 0 for success and all-PASS verification, 1 for verification failures and
//! size-guard trips, 2 for usage errors.

use bruhat::{
    boolean_pattern_list, classify_principal_ideals, closed_form_count,
    count_boolean_by_length, decompose, expand_rank_gf, first_reduced_word, group_order,
    is_power_permutation, occurrences, pattern_ideal_survey, power_ideal_check, BruhatContext,
    ClassifyError, GroupElement, Kind, PatternSpec, RankGf, Word, DEFAULT_MAX_POSET,
    MAX_ENUMERATED_GROUP,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::process::ExitCode;

/// Boolean counts by length for the unsigned groups, rows n = 1..=8; the
/// signed row at rank n is the unsigned row at rank n + 1.
const UNSIGNED_ROWS: [&[u64]; 8] = [
    &[1],
    &[1, 1],
    &[1, 2, 2],
    &[1, 3, 5, 4],
    &[1, 4, 9, 12, 8],
    &[1, 5, 14, 25, 28, 16],
    &[1, 6, 20, 44, 66, 64, 32],
    &[1, 7, 27, 70, 129, 168, 144, 64],
];

/// Boolean counts by length for the even-signed groups, rows n = 1..=8.
const EVEN_SIGNED_ROWS: [&[u64]; 8] = [
    &[1, 0],
    &[1, 2, 1],
    &[1, 3, 5, 4],
    &[1, 4, 9, 13, 8],
    &[1, 5, 14, 26, 30, 16],
    &[1, 6, 20, 45, 69, 68, 32],
    &[1, 7, 27, 71, 133, 176, 152, 64],
    &[1, 8, 35, 105, 230, 373, 436, 336, 128],
];

#[derive(Parser)]
#[command(
    name = "bruhat",
    version,
    about = "Bruhat order queries on the classical Coxeter groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
}

impl KindArg {
    fn kind(self) -> Kind {
        match self {
            KindArg::A => Kind::A,
            KindArg::B => Kind::B,
            KindArg::D => Kind::D,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TableScope {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "D", alias = "d")]
    D,
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum IdealFormat {
    Json,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Boolean status of one element, with a witness word or a violating
    /// pattern occurrence.
    Boolean {
        #[arg(long, value_enum, default_value_t = KindArg::A)]
        kind: KindArg,
        /// One-line window, e.g. "4 2 1 3" or "-2,1" for signed kinds.
        #[arg(allow_hyphen_values = true)]
        window: String,
    },
    /// The principal order ideal of an element, as JSON or Graphviz DOT.
    Ideal {
        #[arg(long, value_enum, default_value_t = KindArg::A)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = IdealFormat::Json)]
        format: IdealFormat,
        #[arg(allow_hyphen_values = true)]
        window: String,
    },
    /// Isomorphism classes of principal ideals of unsigned permutations at
    /// a fixed length.
    Classify {
        /// Rank of the unsigned group.
        #[arg(long)]
        n: u8,
        #[arg(long)]
        length: u32,
    },
    /// Which avoidance classes from a pattern pool are order ideals.
    Survey {
        /// Rank of the unsigned group.
        #[arg(long)]
        n: u8,
        /// Replaces the default pool (the six rank-3 windows and 3412).
        /// Repeatable.
        #[arg(long = "pattern")]
        patterns: Vec<String>,
    },
    /// Recomputes the boolean count tables along every available route and
    /// reports PASS/FAIL per cell.
    Tables {
        #[arg(long, value_enum, default_value_t = TableScope::All)]
        kind: TableScope,
        #[arg(long = "max-n", default_value_t = 8)]
        max_n: u8,
    },
    /// Whether an unsigned permutation is a product of disjoint shifted
    /// staircases, with a verified certificate when it is.
    Power {
        /// The staircase width (at least 3).
        #[arg(long)]
        k: u8,
        #[arg(allow_hyphen_values = true)]
        window: String,
    },
    /// Splits an unsigned permutation into blocks over disjoint letter
    /// ranges.
    Decompose {
        /// An element window ("5 2 1 4 3 6") or a word over the adjacent
        /// transpositions ("343121").
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
}

struct CliError {
    message: String,
    code: u8,
}

fn usage(message: impl Into<String>) -> CliError {
    CliError { message: message.into(), code: 2 }
}

fn failed(message: impl Into<String>) -> CliError {
    CliError { message: message.into(), code: 1 }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("bruhat: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, CliError> {
    match command {
        Command::Boolean { kind, window } => boolean_verb(kind.kind(), &window),
        Command::Ideal { kind, format, window } => ideal_verb(kind.kind(), format, &window),
        Command::Classify { n, length } => classify_verb(n, length),
        Command::Survey { n, patterns } => survey_verb(n, &patterns),
        Command::Tables { kind, max_n } => tables_verb(kind, max_n),
        Command::Power { k, window } => power_verb(k, &window),
        Command::Decompose { input } => decompose_verb(&input),
    }
}

/// The poset size guard, overridable through `BRUHAT_MAX_POSET`.
fn max_poset() -> Result<usize, CliError> {
    match std::env::var("BRUHAT_MAX_POSET") {
        Err(_) => Ok(DEFAULT_MAX_POSET),
        Ok(text) => text
            .parse()
            .map_err(|_| usage(format!("BRUHAT_MAX_POSET must be an integer, got {text:?}"))),
    }
}

fn context(kind: Kind, n: u8) -> Result<BruhatContext, CliError> {
    Ok(BruhatContext::with_max_poset_size(kind, n, max_poset()?))
}

/// Parses a window and rejects signed elements whose group is past the
/// enumeration bound, since their lengths come from a breadth-first table.
fn parse_element(kind: Kind, text: &str) -> Result<GroupElement, CliError> {
    let w = GroupElement::parse(kind, text).map_err(|e| usage(e.to_string()))?;
    if kind != Kind::A && group_order(kind, w.n()) > MAX_ENUMERATED_GROUP {
        return Err(failed(format!(
            "signed group of rank {} is past the enumeration bound {MAX_ENUMERATED_GROUP}",
            w.n()
        )));
    }
    Ok(w)
}

fn emit(value: &Value) -> ExitCode {
    println!("{value}");
    ExitCode::SUCCESS
}

fn boolean_verb(kind: Kind, window: &str) -> Result<ExitCode, CliError> {
    let w = parse_element(kind, window)?;
    let patterns = boolean_pattern_list(kind);
    let hit = patterns.iter().find_map(|p| {
        occurrences(&w, p)
            .expect("built-in patterns match the kind")
            .into_iter()
            .next()
            .map(|occ| (p, occ))
    });
    let mut doc = json!({
        "boolean": hit.is_none(),
        "kind": kind.to_string(),
        "length": w.length(),
        "window": w.to_string(),
    });
    let fields = doc.as_object_mut().expect("document is an object");
    match hit {
        None => {
            fields.insert(
                "witness_word".into(),
                json!(first_reduced_word(&w).to_string()),
            );
        }
        Some((p, occ)) => {
            fields.insert(
                "violating_occurrence".into(),
                json!({
                    "pattern": p.to_string(),
                    "positions": occ.positions,
                    "values": occ.values,
                }),
            );
        }
    }
    Ok(emit(&doc))
}

fn ideal_verb(kind: Kind, format: IdealFormat, window: &str) -> Result<ExitCode, CliError> {
    let w = parse_element(kind, window)?;
    let ideal = context(kind, w.n())?
        .principal_ideal(&w)
        .map_err(|e| failed(e.to_string()))?;
    match format {
        IdealFormat::Json => println!("{}", ideal.to_json()),
        IdealFormat::Dot => print!("{}", ideal.to_dot()),
    }
    Ok(ExitCode::SUCCESS)
}

fn classify_verb(n: u8, length: u32) -> Result<ExitCode, CliError> {
    let classes = classify_principal_ideals(n, length).map_err(classify_error)?;
    let rows: Vec<Value> = classes
        .iter()
        .map(|c| {
            json!({
                "ideal_size": c.poset.len(),
                "members": c.members,
                "rank_counts": c.poset.rank_gf(),
                "representative": c.representative.to_string(),
            })
        })
        .collect();
    Ok(emit(&json!({ "classes": rows, "length": length, "n": n })))
}

fn survey_verb(n: u8, patterns: &[String]) -> Result<ExitCode, CliError> {
    let pool: Vec<PatternSpec> = if patterns.is_empty() {
        let mut pool: Vec<PatternSpec> = bruhat::group_elements(Kind::A, 3)
            .expect("tiny group")
            .iter()
            .map(|w| PatternSpec::new(w.window().to_vec()).expect("windows are patterns"))
            .collect();
        pool.push(PatternSpec::new(vec![3, 4, 1, 2]).expect("valid"));
        pool
    } else {
        patterns
            .iter()
            .map(|text| PatternSpec::parse(text).map_err(|e| usage(e.to_string())))
            .collect::<Result<_, _>>()?
    };
    let entries = pattern_ideal_survey(n, &pool).map_err(classify_error)?;
    let rows: Vec<Value> = entries
        .iter()
        .map(|e| {
            let patterns: Vec<String> = e.patterns.iter().map(|p| p.to_string()).collect();
            json!({
                "class_size": e.class_size,
                "ideal": e.is_ideal,
                "patterns": patterns,
            })
        })
        .collect();
    Ok(emit(&json!({ "entries": rows, "n": n })))
}

fn tables_verb(scope: TableScope, max_n: u8) -> Result<ExitCode, CliError> {
    if max_n == 0 || max_n > 32 {
        return Err(usage("--max-n must be between 1 and 32"));
    }
    let kinds: &[Kind] = match scope {
        TableScope::A => &[Kind::A],
        TableScope::B => &[Kind::B],
        TableScope::D => &[Kind::D],
        TableScope::All => &[Kind::A, Kind::B, Kind::D],
    };
    let series = expand_rank_gf(RankGf::Boolean, max_n.saturating_add(1).min(33));
    let mut all_pass = true;
    let mut tables = Vec::new();
    for &kind in kinds {
        let mut cells = Vec::new();
        for n in 1..=max_n {
            let reference: Option<&[u64]> = match kind {
                Kind::A => UNSIGNED_ROWS.get(n as usize - 1).copied(),
                Kind::B => UNSIGNED_ROWS.get(n as usize).copied(),
                Kind::D => EVEN_SIGNED_ROWS.get(n as usize - 1).copied(),
            };
            let direct = if group_order(kind, n) <= MAX_ENUMERATED_GROUP {
                Some(count_boolean_by_length(kind, n).map_err(classify_error)?)
            } else {
                None
            };
            // Trailing lengths carry count zero; the widest row wins.
            let columns = match kind {
                Kind::A => n as usize,
                Kind::B | Kind::D => n as usize + 1,
            };
            for k in 0..columns {
                let closed = closed_form_count(kind, n, k as u32);
                let mut routes = serde_json::Map::new();
                routes.insert("closed_form".into(), json!(closed));
                let mut pass = true;
                if let Some(rows) = &direct {
                    let count = rows.get(k).copied().unwrap_or(0);
                    routes.insert("direct".into(), json!(count));
                    pass &= count == closed;
                }
                if kind != Kind::D {
                    // The series rows are unsigned; signed rank n reads row n+1.
                    let row = match kind {
                        Kind::A => &series.rows[n as usize - 1],
                        _ => &series.rows[n as usize],
                    };
                    let count = row.get(k).copied().unwrap_or(0);
                    routes.insert("series".into(), json!(count));
                    pass &= count == closed;
                }
                if let Some(row) = reference {
                    let count = row.get(k).copied().unwrap_or(0);
                    routes.insert("reference".into(), json!(count));
                    pass &= count == closed;
                }
                all_pass &= pass;
                cells.push(json!({
                    "k": k,
                    "n": n,
                    "pass": pass,
                    "routes": routes,
                }));
            }
        }
        tables.push(json!({ "cells": cells, "kind": kind.to_string() }));
    }
    let doc = json!({ "pass": all_pass, "tables": tables });
    println!("{doc}");
    if all_pass {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("bruhat: some table cells disagree");
        Ok(ExitCode::from(1))
    }
}

fn power_verb(k: u8, window: &str) -> Result<ExitCode, CliError> {
    let w = parse_element(Kind::A, window)?;
    let power = is_power_permutation(&w, k).map_err(classify_error)?;
    let mut doc = json!({
        "k": k,
        "power": power,
        "window": w.to_string(),
    });
    if power {
        let cert = power_ideal_check(&w, k).map_err(classify_error)?;
        let fields = doc.as_object_mut().expect("document is an object");
        fields.insert("r".into(), json!(cert.r));
        fields.insert("ideal_size".into(), json!(cert.ideal_size));
        fields.insert("witness_word".into(), json!(cert.witness.to_string()));
    }
    Ok(emit(&doc))
}

fn decompose_verb(input: &str) -> Result<ExitCode, CliError> {
    // Windows carry separators or signs; bare digit strings read as words.
    let looks_like_window = input
        .chars()
        .any(|c| c.is_whitespace() || c == ',' || c == '-');
    let w = if looks_like_window {
        parse_element(Kind::A, input)?
    } else {
        Word::parse(Kind::A, None, input)
            .map_err(|e| usage(e.to_string()))?
            .evaluate()
    };
    let mut doc = json!({
        "element": w.to_string(),
        "decomposable": decompose(&w).is_some(),
    });
    if let Some((split, low, high)) = decompose(&w) {
        let fields = doc.as_object_mut().expect("document is an object");
        fields.insert("split".into(), json!(split));
        fields.insert("low".into(), json!(low.to_string()));
        fields.insert("high".into(), json!(high.to_string()));
    }
    Ok(emit(&doc))
}

/// Classification errors split into bad requests and genuine failures.
fn classify_error(e: ClassifyError) -> CliError {
    match e {
        ClassifyError::BadK(_) | ClassifyError::NotTypeA => usage(e.to_string()),
        _ => failed(e.to_string()),
    }
}
