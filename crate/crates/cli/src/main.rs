//! Command-line front end: file ingestion, measure selection, solver
//! dispatch, result reports, and an oracle cross-check mode.
//!
//! Exit codes are stable for CI use: 0 success, 2 parse error, 3
//! legality/validation error (including misuse such as an incompatible
//! measure), 4 budget exceeded, 5 oracle mismatch, 1 anything else
//! (e.g. cost overflow). Budgets can also be set through the environment
//! variables `JUNCTION_NODE_BUDGET`, `JUNCTION_MEMBER_BUDGET`, and
//! `JUNCTION_ORACLE_BUDGET`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use junction::algebra::Cost;
use junction::cds::{
    eval_kexpr, solve_semiring_cds_capped, solve_semiring_ds_capped, KExpression, Solution,
};
use junction::csp::{solve_semiring_csp, solve_sum_product, CspInstance, SumProductInstance};
use junction::expr::{parse_expr, ExprHandle, ExprStore, FunctionSet, Materialization, Universe};
use junction::gen::{random_csp, random_kexpr};
use junction::measures::{
    count_min_cost, counting_measure, decision_measure, list_measure, parse_matrix,
    sat_weight_family, MeasureMatrix, SatWeights,
};
use junction::oracle::{
    count_min_cost_by_scan, enumerate_cds, enumerate_csp, enumerate_ds, measure_directly,
    EnumerationBudget,
};
use junction::td::{make_nice, primal_width, validate_td, TdValidation, TreeDecomposition};

#[derive(Parser)]
#[command(name = "junction", version, about = "Semiring dynamic programming over join/union expressions")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,

    /// Cap on expression DAG nodes visited during materialization.
    #[arg(long, global = true)]
    node_budget: Option<usize>,

    /// Cap on the size of any materialized set.
    #[arg(long, global = true)]
    member_budget: Option<usize>,

    /// Cap on candidates enumerated by the oracle.
    #[arg(long, global = true)]
    oracle_budget: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve connected dominating sets from a clique-width expression.
    SolveCds(SolveGraphArgs),
    /// Solve dominating sets from a clique-width expression.
    SolveDs(SolveGraphArgs),
    /// Solve a CSP from an instance and a tree decomposition.
    SolveCsp(SolveCspArgs),
    /// Evaluate a sum-product CSP instance.
    SumProduct {
        /// Sum-product instance (JSON).
        #[arg(long)]
        instance: PathBuf,
        /// Tree decomposition (PACE format).
        #[arg(long)]
        td: PathBuf,
    },
    /// Evaluate a measure matrix over an expression file.
    EvalExpr {
        /// Expression in s-expression form.
        #[arg(long)]
        expr: PathBuf,
        /// Measure matrix file; its rows also define the universe.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run the brute-force oracle directly.
    Oracle {
        #[command(subcommand)]
        what: OracleCommand,
    },
    /// Validate inputs without solving.
    Validate {
        #[command(subcommand)]
        what: ValidateCommand,
    },
    /// Generate seeded random fixtures.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
}

#[derive(Args)]
struct SolveGraphArgs {
    /// Clique-width expression file.
    #[arg(long)]
    kexpr: PathBuf,
    #[command(flatten)]
    measure: MeasureArgs,
    /// Re-derive the answer by exhaustive enumeration and fail on any
    /// disagreement.
    #[arg(long)]
    check_oracle: bool,
    /// Widest k-expression to accept; trace tables are doubly exponential
    /// in k.
    #[arg(long, default_value_t = junction::cds::DEFAULT_MAX_K)]
    max_k: usize,
}

#[derive(Args)]
struct SolveCspArgs {
    /// CSP instance (JSON).
    #[arg(long)]
    instance: PathBuf,
    /// Tree decomposition of the Gaifman graph (PACE format).
    #[arg(long)]
    td: PathBuf,
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long)]
    check_oracle: bool,
}

#[derive(Args)]
struct MeasureArgs {
    /// Which measure to evaluate.
    #[arg(long, value_enum, default_value_t = MeasureKind::Count)]
    measure: MeasureKind,
    /// Tropical cost matrix file (for cost and count-min-cost).
    #[arg(long)]
    costs: Option<PathBuf>,
    /// Allowed-values file for the list measure: one line per domain
    /// element, `s t1 t2 ...`.
    #[arg(long)]
    lists: Option<PathBuf>,
    /// Full measure matrix file (for measure = matrix).
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Codomain element counted as "picked"/"true" by the min-card,
    /// min-weight, and min-lex measures.
    #[arg(long, default_value = "1")]
    top: String,
    /// Weight file for min-weight: one `element weight` line per domain
    /// element.
    #[arg(long)]
    weights: Option<PathBuf>,
    /// Domain elements to minimise lexicographically, most significant
    /// first (for min-lex).
    #[arg(long, value_delimiter = ',')]
    lex_vars: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum, PartialEq, Eq)]
enum MeasureKind {
    Decision,
    Count,
    Cost,
    List,
    CountMinCost,
    Matrix,
    /// Count the solutions picking the fewest elements.
    MinCard,
    /// Count the solutions of minimal total weight (needs --weights).
    MinWeight,
    /// Count the lexicographically minimal solutions (needs --lex-vars).
    MinLex,
}

#[derive(Subcommand)]
enum OracleCommand {
    Cds {
        #[arg(long)]
        kexpr: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    Ds {
        #[arg(long)]
        kexpr: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
    },
    Csp {
        #[arg(long)]
        instance: PathBuf,
        #[command(flatten)]
        measure: MeasureArgs,
    },
}

#[derive(Subcommand)]
enum ValidateCommand {
    /// Check the three tree-decomposition properties against an instance's
    /// Gaifman graph.
    Td {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Parse and validate a clique-width expression.
    Kexpr {
        #[arg(long)]
        kexpr: PathBuf,
        /// Also write the evaluated graph as an edge list (`n m` header,
        /// then one `u v` line per edge, vertices numbered by first
        /// appearance).
        #[arg(long)]
        emit_graph: Option<PathBuf>,
    },
    /// Parse and validate a CSP instance.
    Csp {
        #[arg(long)]
        instance: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// A random clique-width expression.
    Kexpr {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// A random CSP instance with a valid tree decomposition.
    Csp {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        domain: usize,
        #[arg(long, default_value_t = 4)]
        constraints: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_instance: PathBuf,
        #[arg(long)]
        out_td: PathBuf,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<junction::Error> for Failure {
    fn from(e: junction::Error) -> Failure {
        let code = match &e {
            junction::Error::Parse { .. } => 2,
            junction::Error::Usage(_) | junction::Error::Legality(_) => 3,
            junction::Error::Budget(_) => 4,
            junction::Error::Overflow(_) => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn mismatch(message: String) -> Failure {
    Failure { code: 5, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            match cli.output {
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string_pretty(&report).expect("report renders"))
                }
                OutputFormat::Human => print_human(&report),
            }
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn print_human(report: &Value) {
    fn walk(prefix: &str, v: &Value) {
        match v {
            Value::Object(map) => {
                for (key, value) in map {
                    let path = if prefix.is_empty() {
                        key.clone()
                    } else {
                        format!("{prefix}.{key}")
                    };
                    walk(&path, value);
                }
            }
            other => println!("{prefix}: {other}"),
        }
    }
    walk("", report);
}

fn env_budget(name: &str) -> Option<usize> {
    std::env::var(name).ok().and_then(|v| v.parse().ok())
}

fn budgets(cli: &Cli) -> (usize, usize, EnumerationBudget) {
    let node = cli
        .node_budget
        .or_else(|| env_budget("JUNCTION_NODE_BUDGET"))
        .unwrap_or(1 << 22);
    let member = cli
        .member_budget
        .or_else(|| env_budget("JUNCTION_MEMBER_BUDGET"))
        .unwrap_or(1 << 20);
    let oracle = cli
        .oracle_budget
        .or_else(|| env_budget("JUNCTION_ORACLE_BUDGET"))
        .unwrap_or(1 << 20);
    (
        node,
        member,
        EnumerationBudget {
            max_candidates: oracle,
            max_solutions: oracle,
        },
    )
}

/// Read a file, recording its SHA-256 for the report's provenance section.
fn read_input(path: &Path, provenance: &mut BTreeMap<String, String>) -> Result<String, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure {
        code: 2,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    provenance.insert(
        path.display().to_string(),
        hex::encode(Sha256::digest(&bytes)),
    );
    String::from_utf8(bytes).map_err(|_| Failure {
        code: 2,
        message: format!("{} is not UTF-8", path.display()),
    })
}

/// A resolved measure: either a matrix to evaluate or the fused
/// minimum-cost count.
enum ResolvedMeasure {
    Matrix(MeasureMatrix),
    CountMinCost(MeasureMatrix),
}

fn resolve_measure(
    args: &MeasureArgs,
    universe: &Universe,
    provenance: &mut BTreeMap<String, String>,
) -> Result<ResolvedMeasure, Failure> {
    let need = |path: &Option<PathBuf>, flag: &str| -> Result<PathBuf, Failure> {
        path.clone().ok_or_else(|| Failure {
            code: 3,
            message: format!("this measure needs {flag}"),
        })
    };
    match args.measure {
        MeasureKind::Decision => Ok(ResolvedMeasure::Matrix(decision_measure(universe))),
        MeasureKind::Count => Ok(ResolvedMeasure::Matrix(counting_measure(universe))),
        MeasureKind::Cost => {
            let path = need(&args.costs, "--costs")?;
            let text = read_input(&path, provenance)?;
            let costs = parse_tropical_matrix(universe, &text)?;
            Ok(ResolvedMeasure::Matrix(costs))
        }
        MeasureKind::CountMinCost => {
            let path = need(&args.costs, "--costs")?;
            let text = read_input(&path, provenance)?;
            let costs = parse_tropical_matrix(universe, &text)?;
            Ok(ResolvedMeasure::CountMinCost(costs))
        }
        MeasureKind::List => {
            let path = need(&args.lists, "--lists")?;
            let text = read_input(&path, provenance)?;
            let allowed = parse_list_file(universe, &text)?;
            Ok(ResolvedMeasure::Matrix(list_measure(universe, |s, t| {
                allowed.contains(&(s, t))
            })))
        }
        MeasureKind::Matrix => {
            let path = need(&args.matrix, "--matrix")?;
            let text = read_input(&path, provenance)?;
            Ok(ResolvedMeasure::Matrix(parse_matrix(universe, &text)?))
        }
        MeasureKind::MinCard | MeasureKind::MinWeight | MeasureKind::MinLex => {
            let top = universe.codomain_index(&args.top)?;
            let kind = match args.measure {
                MeasureKind::MinCard => SatWeights::MinCard,
                MeasureKind::MinLex => SatWeights::MinLex(args.lex_vars.clone()),
                _ => {
                    let path = need(&args.weights, "--weights")?;
                    let text = read_input(&path, provenance)?;
                    SatWeights::MinWeight(parse_weight_file(universe, &text)?)
                }
            };
            let costs = sat_weight_family(universe, top, &kind)?;
            Ok(ResolvedMeasure::CountMinCost(costs))
        }
    }
}

fn parse_weight_file(universe: &Universe, text: &str) -> Result<Vec<u64>, Failure> {
    let mut weights = vec![0u64; universe.domain_size()];
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Failure {
                code: 2,
                message: format!("line {}: expected 'element weight'", line_no + 1),
            });
        }
        let s = universe.domain_index(fields[0])?;
        weights[s] = fields[1].parse().map_err(|_| Failure {
            code: 2,
            message: format!("line {}: bad weight {:?}", line_no + 1, fields[1]),
        })?;
    }
    Ok(weights)
}

fn parse_tropical_matrix(universe: &Universe, text: &str) -> Result<MeasureMatrix, Failure> {
    let matrix = parse_matrix(universe, text)?;
    if *matrix.descriptor() != junction::algebra::SemiringDescriptor::Tropical {
        return Err(Failure {
            code: 3,
            message: format!(
                "cost files must declare 'semiring: trop', found {}",
                matrix.descriptor()
            ),
        });
    }
    Ok(matrix)
}

fn parse_list_file(universe: &Universe, text: &str) -> Result<BTreeSet<(usize, usize)>, Failure> {
    let mut allowed = BTreeSet::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let s = fields.next().expect("non-empty line");
        let s = universe.domain_index(s).map_err(|e| Failure {
            code: 2,
            message: format!("line {}: {e}", line_no + 1),
        })?;
        for t in fields {
            let t = universe.codomain_index(t).map_err(|e| Failure {
                code: 2,
                message: format!("line {}: {e}", line_no + 1),
            })?;
            allowed.insert((s, t));
        }
    }
    Ok(allowed)
}

/// Evaluate a resolved measure over an expression, yielding the report's
/// value field.
fn evaluate_measure(
    store: &ExprStore,
    root: ExprHandle,
    measure: &ResolvedMeasure,
) -> Result<Value, Failure> {
    match measure {
        ResolvedMeasure::Matrix(m) => {
            let v = store.evaluate(root, m)?;
            Ok(Value::String(v.to_string()))
        }
        ResolvedMeasure::CountMinCost(costs) => {
            let (min, count) = count_min_cost(store, root, costs)?;
            Ok(count_min_cost_value(min, &count))
        }
    }
}

fn count_min_cost_value(min: Cost, count: &BigUint) -> Value {
    let min_value = match min {
        Cost::Finite(c) => json!(c),
        Cost::Infinity => json!("inf"),
    };
    json!({ "min": min_value, "count": count.to_string() })
}

/// Compare the solver's answer with the enumerated ground truth: always at
/// the measure level, and additionally member-by-member when materializing
/// the expression fits the node/member budgets. Returns what was checked.
fn check_against_oracle(
    store: &ExprStore,
    root: ExprHandle,
    measure: &ResolvedMeasure,
    sets: &FunctionSet,
    node_budget: usize,
    member_budget: usize,
) -> Result<&'static str, Failure> {
    match measure {
        ResolvedMeasure::Matrix(m) => {
            let solver = store.evaluate(root, m)?;
            let oracle = measure_directly(sets, m)?;
            if solver != oracle {
                return Err(mismatch(format!(
                    "oracle mismatch: solver evaluated to {solver}, enumeration gives {oracle}"
                )));
            }
        }
        ResolvedMeasure::CountMinCost(costs) => {
            let solver = count_min_cost(store, root, costs)?;
            let oracle = count_min_cost_by_scan(sets, costs)?;
            if solver != oracle {
                return Err(mismatch(format!(
                    "oracle mismatch: solver min/count ({}, {}) vs scan ({}, {})",
                    solver.0, solver.1, oracle.0, oracle.1
                )));
            }
        }
    }
    match store.materialize(root, node_budget, member_budget) {
        Err(junction::Error::Budget(_)) => Ok("passed (measure)"),
        Err(e) => Err(e.into()),
        Ok(Materialization::Fail) => Err(mismatch(
            "oracle mismatch: the solver's expression is illegal".into(),
        )),
        Ok(Materialization::Set(got)) => {
            if got.members != sets.members {
                return Err(mismatch(format!(
                    "oracle mismatch: expression denotes {} members, enumeration finds {}",
                    got.len(),
                    sets.len()
                )));
            }
            Ok("passed (measure, solution sets)")
        }
    }
}

fn expr_stats(store: &ExprStore, root: ExprHandle) -> Value {
    json!({
        "dag_nodes": store.postorder(root).len(),
        "domain_size": store.universe().domain_size(),
        "tree_size": store.tree_size(root).to_string(),
    })
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    let (_node_budget, _member_budget, oracle_budget) = budgets(cli);
    match &cli.command {
        Command::SolveCds(args) => run_solve_graph(cli, args, "solve-cds", solve_semiring_cds_capped, |g, b| {
            enumerate_cds(g, b)
        }),
        Command::SolveDs(args) => run_solve_graph(cli, args, "solve-ds", solve_semiring_ds_capped, |g, b| {
            enumerate_ds(g, b)
        }),
        Command::SolveCsp(args) => run_solve_csp(cli, args),
        Command::SumProduct { instance, td } => {
            let mut provenance = BTreeMap::new();
            let parse_start = Instant::now();
            let instance_text = read_input(instance, &mut provenance)?;
            let td_text = read_input(td, &mut provenance)?;
            let sp = SumProductInstance::parse_json(&instance_text)?;
            let td = TreeDecomposition::parse(&td_text)?;
            let parse_us = us_since(parse_start);

            let solve_start = Instant::now();
            let graph = sp.gaifman();
            let mut ntd = make_nice(&graph, &td)?;
            let scopes: Vec<Vec<usize>> = sp.constraints.iter().map(|c| c.scope.clone()).collect();
            ntd.assign_constraint_lambda(&scopes)?;
            let sol = solve_sum_product(&sp, &ntd)?;
            let solve_us = us_since(solve_start);

            Ok(json!({
                "command": "sum-product",
                "provenance": provenance,
                "semiring": sp.descriptor.to_string(),
                "timings_us": {"parse": parse_us, "solve": solve_us},
                "value": sol.value.to_string(),
                "width": primal_width(&ntd).width,
            }))
        }
        Command::EvalExpr { expr, matrix } => {
            let mut provenance = BTreeMap::new();
            let parse_start = Instant::now();
            let matrix_text = read_input(matrix, &mut provenance)?;
            let universe = universe_from_matrix_rows(&matrix_text)?;
            let m = parse_matrix(&universe, &matrix_text)?;
            let expr_text = read_input(expr, &mut provenance)?;
            let mut store = ExprStore::new(universe);
            let root = parse_expr(&mut store, &expr_text)?;
            let parse_us = us_since(parse_start);

            let eval_start = Instant::now();
            let value = store.evaluate(root, &m)?;
            let eval_us = us_since(eval_start);
            Ok(json!({
                "command": "eval-expr",
                "expr_stats": expr_stats(&store, root),
                "provenance": provenance,
                "semiring": m.descriptor().to_string(),
                "timings_us": {"evaluate": eval_us, "parse": parse_us},
                "value": value.to_string(),
            }))
        }
        Command::Oracle { what } => run_oracle(cli, what, &oracle_budget),
        Command::Validate { what } => run_validate(what),
        Command::Gen { what } => run_gen(what),
    }
}

fn us_since(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_micros()).unwrap_or(u64::MAX)
}

fn run_solve_graph(
    cli: &Cli,
    args: &SolveGraphArgs,
    command: &str,
    solve: impl Fn(&KExpression, usize) -> junction::Result<Solution>,
    enumerate: impl Fn(&junction::cds::LabeledGraph, &EnumerationBudget) -> junction::Result<FunctionSet>,
) -> Result<Value, Failure> {
    let (_, _, oracle_budget) = budgets(cli);
    let mut provenance = BTreeMap::new();
    let parse_start = Instant::now();
    let text = read_input(&args.kexpr, &mut provenance)?;
    let kx = KExpression::parse(&text)?;
    let parse_us = us_since(parse_start);

    let solve_start = Instant::now();
    let sol = solve(&kx, args.max_k)?;
    let solve_us = us_since(solve_start);

    let measure = resolve_measure(&args.measure, sol.store.universe(), &mut provenance)?;
    let eval_start = Instant::now();
    let value = evaluate_measure(&sol.store, sol.root, &measure)?;
    let eval_us = us_since(eval_start);

    let mut oracle_field = Value::Null;
    if args.check_oracle {
        let (node_budget, member_budget, _) = budgets(cli);
        let sets = enumerate(&sol.graph, &oracle_budget)?;
        let what =
            check_against_oracle(&sol.store, sol.root, &measure, &sets, node_budget, member_budget)?;
        oracle_field = Value::String(what.into());
    }

    Ok(json!({
        "command": command,
        "expr_stats": expr_stats(&sol.store, sol.root),
        "graph": {"vertices": sol.graph.vertex_count(), "edges": sol.graph.edges.len(), "k": kx.k()},
        "oracle_check": oracle_field,
        "provenance": provenance,
        "timings_us": {"evaluate": eval_us, "parse": parse_us, "solve": solve_us},
        "value": value,
    }))
}

fn run_solve_csp(cli: &Cli, args: &SolveCspArgs) -> Result<Value, Failure> {
    let (_, _, oracle_budget) = budgets(cli);
    let mut provenance = BTreeMap::new();
    let parse_start = Instant::now();
    let instance_text = read_input(&args.instance, &mut provenance)?;
    let td_text = read_input(&args.td, &mut provenance)?;
    let instance = CspInstance::parse_json(&instance_text)?;
    let td = TreeDecomposition::parse(&td_text)?;
    let parse_us = us_since(parse_start);

    let solve_start = Instant::now();
    let graph = instance.gaifman();
    let ntd = make_nice(&graph, &td)?;
    let sol = solve_semiring_csp(&instance, &ntd)?;
    let solve_us = us_since(solve_start);

    let measure = resolve_measure(&args.measure, sol.store.universe(), &mut provenance)?;
    let eval_start = Instant::now();
    let value = evaluate_measure(&sol.store, sol.root, &measure)?;
    let eval_us = us_since(eval_start);

    let mut oracle_field = Value::Null;
    if args.check_oracle {
        let (node_budget, member_budget, _) = budgets(cli);
        let sets = enumerate_csp(&instance, &oracle_budget)?;
        let what =
            check_against_oracle(&sol.store, sol.root, &measure, &sets, node_budget, member_budget)?;
        oracle_field = Value::String(what.into());
    }

    Ok(json!({
        "command": "solve-csp",
        "expr_stats": expr_stats(&sol.store, sol.root),
        "instance": {"variables": instance.variables.len(), "domain": instance.domain.len(),
                     "constraints": instance.constraints.len(), "width": primal_width(&ntd).width},
        "oracle_check": oracle_field,
        "provenance": provenance,
        "timings_us": {"evaluate": eval_us, "parse": parse_us, "solve": solve_us},
        "value": value,
    }))
}

fn run_oracle(cli: &Cli, what: &OracleCommand, budget: &EnumerationBudget) -> Result<Value, Failure> {
    let _ = cli;
    let mut provenance = BTreeMap::new();
    let (name, sets, universe) = match what {
        OracleCommand::Cds { kexpr, .. } | OracleCommand::Ds { kexpr, .. } => {
            let text = read_input(kexpr, &mut provenance)?;
            let kx = KExpression::parse(&text)?;
            let graph = eval_kexpr(&kx)?;
            let universe = graph.indicator_universe()?;
            let (name, sets) = match what {
                OracleCommand::Cds { .. } => ("oracle-cds", enumerate_cds(&graph, budget)?),
                _ => ("oracle-ds", enumerate_ds(&graph, budget)?),
            };
            (name, sets, universe)
        }
        OracleCommand::Csp { instance, .. } => {
            let text = read_input(instance, &mut provenance)?;
            let instance = CspInstance::parse_json(&text)?;
            let sets = enumerate_csp(&instance, budget)?;
            let universe = instance.universe()?;
            ("oracle-csp", sets, universe)
        }
    };
    let measure_args = match what {
        OracleCommand::Cds { measure, .. }
        | OracleCommand::Ds { measure, .. }
        | OracleCommand::Csp { measure, .. } => measure,
    };
    let measure = resolve_measure(measure_args, &universe, &mut provenance)?;
    let value = match &measure {
        ResolvedMeasure::Matrix(m) => Value::String(measure_directly(&sets, m)?.to_string()),
        ResolvedMeasure::CountMinCost(costs) => {
            let (min, count) = count_min_cost_by_scan(&sets, costs)?;
            count_min_cost_value(min, &count)
        }
    };
    Ok(json!({
        "command": name,
        "provenance": provenance,
        "solutions": sets.len(),
        "value": value,
    }))
}

fn run_validate(what: &ValidateCommand) -> Result<Value, Failure> {
    let mut provenance = BTreeMap::new();
    match what {
        ValidateCommand::Td { instance, td } => {
            let instance_text = read_input(instance, &mut provenance)?;
            let td_text = read_input(td, &mut provenance)?;
            let instance = CspInstance::parse_json(&instance_text)?;
            let td = TreeDecomposition::parse(&td_text)?;
            match validate_td(&instance.gaifman(), &td) {
                TdValidation::Valid { width } => Ok(json!({
                    "command": "validate-td",
                    "provenance": provenance,
                    "valid": true,
                    "width": width,
                })),
                TdValidation::Violation { property, witness } => Err(Failure {
                    code: 3,
                    message: format!("tree decomposition violates property {property}: {witness}"),
                }),
            }
        }
        ValidateCommand::Kexpr { kexpr, emit_graph } => {
            let text = read_input(kexpr, &mut provenance)?;
            let kx = KExpression::parse(&text)?;
            let graph = eval_kexpr(&kx)?;
            if let Some(path) = emit_graph {
                std::fs::write(path, graph.to_edge_list()).map_err(|e| Failure {
                    code: 1,
                    message: format!("cannot write {}: {e}", path.display()),
                })?;
            }
            Ok(json!({
                "command": "validate-kexpr",
                "edges": graph.edges.len(),
                "k": kx.k(),
                "provenance": provenance,
                "valid": true,
                "vertices": graph.vertex_count(),
            }))
        }
        ValidateCommand::Csp { instance } => {
            let text = read_input(instance, &mut provenance)?;
            let instance = CspInstance::parse_json(&text)?;
            Ok(json!({
                "command": "validate-csp",
                "constraints": instance.constraints.len(),
                "domain": instance.domain.len(),
                "provenance": provenance,
                "valid": true,
                "variables": instance.variables.len(),
            }))
        }
    }
}

fn run_gen(what: &GenCommand) -> Result<Value, Failure> {
    let write = |path: &Path, text: &str| -> Result<(), Failure> {
        std::fs::write(path, text).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })
    };
    match what {
        GenCommand::Kexpr { k, n, seed, out } => {
            let kx = random_kexpr(*k, *n, *seed)?;
            write(out, &kx.to_text())?;
            Ok(json!({
                "command": "gen-kexpr",
                "k": kx.k(),
                "seed": seed,
                "written": [out.display().to_string()],
            }))
        }
        GenCommand::Csp {
            vars,
            domain,
            constraints,
            seed,
            out_instance,
            out_td,
        } => {
            let (instance, td) = random_csp(*vars, *domain, *constraints, *seed)?;
            // the generator's decomposition is valid by construction; keep
            // the check anyway so emitted fixtures are never wrong
            validate_td(&instance.gaifman(), &td).into_result()?;
            write(out_instance, &instance.to_json())?;
            write(out_td, &td.to_text(instance.variables.len()))?;
            Ok(json!({
                "command": "gen-csp",
                "seed": seed,
                "written": [out_instance.display().to_string(), out_td.display().to_string()],
            }))
        }
    }
}

/// Infer the universe from a matrix file's rows: domain and codomain
/// elements in first-appearance order.
fn universe_from_matrix_rows(text: &str) -> Result<Universe, Failure> {
    let mut domain: Vec<String> = Vec::new();
    let mut codomain: Vec<String> = Vec::new();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() || line.starts_with("semiring:") {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            continue; // parse_matrix reports malformed rows with a line number
        }
        if !domain.iter().any(|d| d == fields[0]) {
            domain.push(fields[0].to_string());
        }
        if !codomain.iter().any(|c| c == fields[1]) {
            codomain.push(fields[1].to_string());
        }
    }
    Ok(Universe::new(domain, codomain)?)
}
