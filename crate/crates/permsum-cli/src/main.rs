//! `permsum`: construct, evaluate, enumerate, search, verify, and export.
//!
//! Exit codes are a stable scripting contract: 0 success/found, 1 not found
//! (with the reason on stdout), 2 invalid input. All numeric output is
//! exact; elapsed time is reported as integer milliseconds.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use permsum::construct::{self, ConstructError};
use permsum::search::{
    enumerate_values, find_witness, integer_values, Progress, SearchError, SearchOptions,
    SearchOutcome,
};
use permsum::seeds;
use permsum::tree::IncreasingBinaryTree;
use permsum::{evaluate, Functional, PermError, Permutation, Rational};

#[derive(Parser)]
#[command(
    name = "permsum",
    version,
    about = "Exact reciprocal-sum functionals over permutations: construct, evaluate, enumerate, search",
    propagate_version = true
)]
struct Cli {
    /// Emit a JSON record instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a permutation hitting an exact target (dif: any attainable
    /// integer; cycdif: 0; prod: 1).
    Construct {
        functional: String,
        n: usize,
        target: String,
    },
    /// Evaluate a functional on a comma-separated permutation.
    Eval { functional: String, perm: String },
    /// Enumerate the exact value set over all permutations of {1..n}.
    Values {
        n: usize,
        functional: String,
        /// Only integer values (for dif: theorem-backed for large n).
        #[arg(long)]
        integers_only: bool,
        /// With --integers-only, keep only |value| <= BOUND.
        #[arg(long)]
        bound: Option<i64>,
        #[arg(long, value_name = "SECS")]
        timeout: Option<u64>,
        #[arg(long, value_name = "COUNT")]
        nodes: Option<u64>,
        #[arg(long, value_name = "K", default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Search for a permutation on which the functional equals the target.
    Search {
        functional: String,
        n: usize,
        target: String,
        #[arg(long, value_name = "SECS")]
        timeout: Option<u64>,
        #[arg(long, value_name = "COUNT")]
        nodes: Option<u64>,
        #[arg(long, value_name = "K", default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        no_symmetry: bool,
        /// Order candidates by deviation shrinkage instead of ascending value.
        #[arg(long)]
        heuristic: bool,
        /// Exhaust the space and report the lexicographically smallest witness.
        #[arg(long)]
        all: bool,
    },
    /// Re-derive every embedded table entry from first principles.
    Verify {
        /// One of: seeds, witnesses, all.
        suite: String,
    },
    /// Emit the increasing binary tree of the product-one permutation as DOT.
    Tree { n: usize },
}

fn main() -> ExitCode {
    // Die quietly when a pipe consumer (head, grep -m) closes stdout early.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(message) => {
            if cli.json {
                let mut record = Map::new();
                record.insert("status".into(), json!("error"));
                record.insert("error".into(), json!(message));
                println!("{}", Value::Object(record));
            }
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, String> {
    match &cli.command {
        Command::Construct {
            functional,
            n,
            target,
        } => cmd_construct(functional, *n, target, cli.json),
        Command::Eval { functional, perm } => cmd_eval(functional, perm, cli.json),
        Command::Values {
            n,
            functional,
            integers_only,
            bound,
            timeout,
            nodes,
            workers,
            no_symmetry,
        } => cmd_values(
            *n,
            functional,
            *integers_only,
            *bound,
            build_options(
                *timeout,
                *nodes,
                *workers,
                *no_symmetry,
                false,
                false,
                cli.json,
            ),
            cli.json,
        ),
        Command::Search {
            functional,
            n,
            target,
            timeout,
            nodes,
            workers,
            no_symmetry,
            heuristic,
            all,
        } => cmd_search(
            functional,
            *n,
            target,
            build_options(
                *timeout,
                *nodes,
                *workers,
                *no_symmetry,
                *heuristic,
                *all,
                cli.json,
            ),
            cli.json,
        ),
        Command::Verify { suite } => cmd_verify(suite, cli.json),
        Command::Tree { n } => cmd_tree(*n, cli.json),
    }
}

fn build_options(
    timeout: Option<u64>,
    nodes: Option<u64>,
    workers: usize,
    no_symmetry: bool,
    heuristic: bool,
    all: bool,
    json: bool,
) -> SearchOptions {
    let progress = if json {
        None
    } else {
        Some(Arc::new(|p: &Progress| {
            let best = p
                .best_deviation
                .as_ref()
                .map_or_else(|| "-".to_string(), |d| d.to_string());
            eprintln!(
                "... {} nodes, depth {}, best deviation {best}",
                p.nodes, p.depth
            );
        }) as Arc<dyn Fn(&Progress) + Send + Sync>)
    };
    SearchOptions {
        time_budget: timeout.map(Duration::from_secs),
        node_budget: nodes,
        worker_count: workers,
        symmetry_reduction: !no_symmetry,
        first_only: !all,
        heuristic_ordering: heuristic,
        progress,
        progress_interval: 1 << 24,
    }
}

fn parse_functional(text: &str) -> Result<Functional, String> {
    text.parse::<Functional>().map_err(|e| e.to_string())
}

fn parse_target(text: &str) -> Result<Rational, String> {
    text.parse::<Rational>().map_err(|e| e.to_string())
}

fn parse_perm(text: &str) -> Result<Permutation, String> {
    text.parse::<Permutation>()
        .map_err(|e: PermError| e.to_string())
}

fn rational_value(r: &Rational) -> Value {
    serde_json::to_value(r).expect("rational serializes")
}

fn perm_value(p: &Permutation) -> Value {
    Value::Array(p.entries().iter().map(|&v| json!(v)).collect())
}

struct Record<'a> {
    status: &'a str,
    n: Option<usize>,
    functional: Option<Functional>,
    target: Option<&'a Rational>,
    value: Option<&'a Rational>,
    perm: Option<&'a Permutation>,
    elapsed_ms: u64,
    nodes: Option<u64>,
}

impl Record<'_> {
    fn to_json(&self) -> Value {
        let mut map = Map::new();
        map.insert("status".into(), json!(self.status));
        if let Some(n) = self.n {
            map.insert("n".into(), json!(n));
        }
        if let Some(f) = self.functional {
            map.insert("functional".into(), json!(f.tag()));
        }
        if let Some(t) = self.target {
            map.insert("target".into(), rational_value(t));
        }
        if let Some(v) = self.value {
            map.insert("value".into(), rational_value(v));
        }
        if let Some(p) = self.perm {
            map.insert("perm".into(), perm_value(p));
        }
        map.insert("elapsed_ms".into(), json!(self.elapsed_ms));
        if let Some(nodes) = self.nodes {
            map.insert("nodes".into(), json!(nodes));
        }
        Value::Object(map)
    }
}

fn elapsed_ms(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_millis()).unwrap_or(u64::MAX)
}

fn cmd_construct(functional: &str, n: usize, target: &str, json: bool) -> Result<ExitCode, String> {
    let start = Instant::now();
    let f = parse_functional(functional)?;
    let target = parse_target(target)?;
    let perm = match f {
        Functional::Dif => {
            let m = target
                .to_i64()
                .ok_or_else(|| format!("dif constructions take an integer target, got {target}"))?;
            construct::integer_witness(n, m).map_err(describe_construct_error)?
        }
        Functional::CycDif => {
            if !target.is_zero() {
                return Err(format!(
                    "only target 0 is constructible for cycdif, got {target}"
                ));
            }
            construct::zero_cycdif(n).map_err(describe_construct_error)?
        }
        Functional::Prod => {
            if target != Rational::one() {
                return Err(format!(
                    "only target 1 is constructible for prod, got {target}"
                ));
            }
            construct::prod_one(n).map_err(describe_construct_error)?
        }
        other => {
            return Err(format!(
                "no construction is known for {other}; use `permsum search {other} {n} {target}`"
            ))
        }
    };
    // Never print an unverified claim.
    let value = evaluate(f, &perm).map_err(|e| e.to_string())?;
    assert_eq!(
        value, target,
        "constructed permutation failed re-verification"
    );
    if json {
        let record = Record {
            status: "ok",
            n: Some(n),
            functional: Some(f),
            target: Some(&target),
            value: Some(&value),
            perm: Some(&perm),
            elapsed_ms: elapsed_ms(start),
            nodes: None,
        };
        println!("{}", record.to_json());
    } else {
        println!("{perm}");
        println!("value: {value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn describe_construct_error(e: ConstructError) -> String {
    match &e {
        ConstructError::ExcludedTarget { n, .. } => {
            let attainable = construct::admissible_integers(*n)
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("excluded: {e}; attainable integers at n={n}: {attainable}")
        }
        _ => e.to_string(),
    }
}

fn cmd_eval(functional: &str, perm: &str, json: bool) -> Result<ExitCode, String> {
    let start = Instant::now();
    let f = parse_functional(functional)?;
    let perm = parse_perm(perm)?;
    let value = evaluate(f, &perm).map_err(|e| e.to_string())?;
    if json {
        let record = Record {
            status: "ok",
            n: Some(perm.len()),
            functional: Some(f),
            target: None,
            value: Some(&value),
            perm: Some(&perm),
            elapsed_ms: elapsed_ms(start),
            nodes: None,
        };
        println!("{}", record.to_json());
    } else {
        println!("{value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_values(
    n: usize,
    functional: &str,
    integers_only: bool,
    bound: Option<i64>,
    opts: SearchOptions,
    json: bool,
) -> Result<ExitCode, String> {
    let start = Instant::now();
    let f = parse_functional(functional)?;

    if integers_only && f == Functional::Dif {
        let values = integer_values(n, bound).map_err(|e| e.to_string())?;
        if json {
            println!(
                "{}",
                json!({
                    "status": "ok",
                    "n": n,
                    "functional": f.tag(),
                    "values": values,
                    "elapsed_ms": elapsed_ms(start),
                })
            );
        } else {
            for v in values {
                println!("{v}");
            }
        }
        return Ok(ExitCode::SUCCESS);
    }

    match enumerate_values(f, n, &opts) {
        Ok(set) => {
            let values: Vec<&Rational> = set
                .values()
                .iter()
                .filter(|v| !integers_only || v.is_integer())
                .filter(|v| bound.is_none_or(|b| v.abs() <= Rational::from_integer(b)))
                .collect();
            if json {
                println!(
                    "{}",
                    json!({
                        "status": "ok",
                        "n": n,
                        "functional": f.tag(),
                        "values": values.iter().map(|v| rational_value(v)).collect::<Vec<_>>(),
                        "elapsed_ms": elapsed_ms(start),
                    })
                );
            } else {
                for v in values {
                    println!("{v}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Err(SearchError::EnumerationBudget { partial, nodes }) => {
            if json {
                println!(
                    "{}",
                    json!({
                        "status": "budget-exceeded",
                        "n": n,
                        "functional": f.tag(),
                        "partial_count": partial.len(),
                        "nodes": nodes,
                        "elapsed_ms": elapsed_ms(start),
                    })
                );
            } else {
                println!("budget-exceeded");
            }
            eprintln!(
                "enumeration incomplete: budget exceeded after {nodes} nodes ({} values found)",
                partial.len()
            );
            Ok(ExitCode::from(1))
        }
        Err(other) => Err(other.to_string()),
    }
}

fn cmd_search(
    functional: &str,
    n: usize,
    target: &str,
    opts: SearchOptions,
    json: bool,
) -> Result<ExitCode, String> {
    let start = Instant::now();
    let f = parse_functional(functional)?;
    let target = parse_target(target)?;
    let report = find_witness(f, n, &target, &opts).map_err(|e| e.to_string())?;
    let elapsed = elapsed_ms(start);
    match &report.outcome {
        SearchOutcome::Found(witness) => {
            if json {
                let record = Record {
                    status: "found",
                    n: Some(n),
                    functional: Some(f),
                    target: Some(&target),
                    value: Some(witness.value()),
                    perm: Some(witness.perm()),
                    elapsed_ms: elapsed,
                    nodes: Some(report.nodes),
                };
                println!("{}", record.to_json());
            } else {
                println!("{}", witness.perm());
                println!("value: {}", witness.value());
                eprintln!("found after {} nodes in {elapsed}ms", report.nodes);
            }
            Ok(ExitCode::SUCCESS)
        }
        SearchOutcome::ExhaustedNonexistent | SearchOutcome::BudgetExceeded => {
            let status = if report.is_exhausted() {
                "exhausted-nonexistent"
            } else {
                "budget-exceeded"
            };
            if json {
                let record = Record {
                    status,
                    n: Some(n),
                    functional: Some(f),
                    target: Some(&target),
                    value: None,
                    perm: None,
                    elapsed_ms: elapsed,
                    nodes: Some(report.nodes),
                };
                println!("{}", record.to_json());
            } else {
                println!("{status}");
                eprintln!("searched {} nodes in {elapsed}ms", report.nodes);
            }
            Ok(ExitCode::from(1))
        }
    }
}

fn cmd_verify(suite: &str, json: bool) -> Result<ExitCode, String> {
    let checks = match suite {
        "seeds" => seeds::seed_checks(),
        "witnesses" => seeds::witness_checks(),
        "all" => {
            let mut all = seeds::seed_checks();
            all.extend(seeds::witness_checks());
            all
        }
        other => {
            return Err(format!(
                "unknown suite {other:?} (expected one of: seeds, witnesses, all)"
            ))
        }
    };
    let results = seeds::run_checks(&checks);
    let all_ok = results.iter().all(|r| r.ok);
    if json {
        let items: Vec<Value> = results
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "functional": r.functional.tag(),
                    "expected": rational_value(&r.expected),
                    "actual": r.actual.as_ref().map(rational_value),
                    "ok": r.ok,
                    "detail": r.detail,
                })
            })
            .collect();
        println!(
            "{}",
            json!({ "status": if all_ok { "ok" } else { "error" }, "checks": items })
        );
    } else {
        for r in &results {
            if r.ok {
                println!("ok   {} ({} = {})", r.name, r.functional.tag(), r.expected);
            } else {
                println!("FAIL {} ({}): {}", r.name, r.functional.tag(), r.detail);
            }
        }
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_tree(n: usize, json: bool) -> Result<ExitCode, String> {
    let perm = construct::prod_one(n).map_err(describe_construct_error)?;
    let tree = IncreasingBinaryTree::from_permutation(&perm);
    let dot = tree.to_dot();
    if json {
        println!(
            "{}",
            json!({ "status": "ok", "n": n, "perm": perm_value(&perm), "dot": dot })
        );
    } else {
        print!("{dot}");
    }
    Ok(ExitCode::SUCCESS)
}
