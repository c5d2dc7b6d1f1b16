mod error;
mod input;
mod report;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semopt_core::approx::{derandomize, exact_conf, interp_from_assignment, random_bound};
use semopt_core::exact::{FareyBound, OracleStrategy, Solver, SolverConfig, DEFAULT_MAX_TREES};
use semopt_core::minmax::{negation_index, opt_access_capped, opt_fuzzy_capped, tropical_adapt};
use semopt_core::rational::{format_ratio, to_f64};
use semopt_core::reductions::{
    conf_upper_bound, maxsat_exhaustive_capped, reduce_to_optconf, DEFAULT_MAX_ASSIGNMENTS,
};
use semopt_core::semiring::{eval_sem, AccessSemiring, NegationFn, SemiringSpec};

use crate::error::{CliError, EXIT_USAGE};
use crate::input::{load_assignment, load_formula, load_interpretation, load_negation_table, Input};
use crate::report::{
    exact, extended_float, semiring_float, semiring_value, InputInfo, RunReport, Stats, Witness,
};

/// Optimal semiring interpretations of propositional formulas.
///
/// Inputs are DIMACS CNF (`.cnf`) or NNF s-expressions (`.nnf`). Each
/// command prints one JSON report on standard output.
#[derive(Parser)]
#[command(name = "semopt", version)]
struct Cli {
    #[command(flatten)]
    limits: Limits,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Limits {
    /// Cap on proof trees (exhaustive) or search nodes (branch-and-bound)
    /// per oracle call.
    #[arg(long, global = true, env = "SEMIRING_OPT_MAX_TREES", default_value_t = DEFAULT_MAX_TREES)]
    max_trees: u64,
    /// Cap on enumerated assignments for exhaustive MaxSAT.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_ASSIGNMENTS)]
    max_assignments: u64,
    /// Threshold-oracle implementation.
    #[arg(long, global = true, value_enum, default_value_t = Strategy::BranchAndBound)]
    strategy: Strategy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    BranchAndBound,
    Exhaustive,
}

impl Strategy {
    fn name(self) -> &'static str {
        match self {
            Strategy::BranchAndBound => "branch-and-bound",
            Strategy::Exhaustive => "exhaustive",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SemiringName {
    Viterbi,
    Fuzzy,
    Access,
}

#[derive(Subcommand)]
enum Command {
    /// Exact maximum Viterbi value over all interpretations.
    OptconfVal { file: PathBuf },
    /// Maximum Viterbi value with a witnessing interpretation.
    Optconf {
        file: PathBuf,
        /// Include the optimal proof tree's encoding.
        #[arg(long)]
        witness_tree: bool,
    },
    /// Evaluates the formula under an interpretation.
    Eval {
        file: PathBuf,
        /// JSON object mapping variable index to value ("p/q" or level).
        #[arg(long)]
        pi: PathBuf,
        #[arg(long, value_enum, default_value_t = SemiringName::Viterbi)]
        semiring: SemiringName,
        /// Carrier top for the access semiring.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: Option<u32>,
        /// `modular` or `table:<file>` (access semiring only).
        #[arg(long, default_value = "modular")]
        negation: String,
    },
    /// Exact MaxSAT value and lexicographically smallest witness.
    Maxsat { file: PathBuf },
    /// The upper bound 1/4^(m−r) on the optimal Viterbi value.
    Bound { file: PathBuf },
    /// Builds φ′ whose optimal Viterbi value is 1/4^(m−r).
    Reduce {
        file: PathBuf,
        /// Write φ′ as DIMACS here, and its sidecar to `<out>.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conditional-expectation approximation of the optimal Viterbi value.
    Approx {
        file: PathBuf,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u32).range(1..))]
        grid: u32,
        #[arg(long, default_value_t = 40)]
        refine: u32,
        /// Use the interpretation seeded by this assignment instead
        /// (DIMACS-style literals; unlisted variables are false).
        #[arg(long)]
        seed_assignment: Option<PathBuf>,
    },
    /// Optimal value in the access-control semiring A_k.
    Access {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// `modular` or `table:<file>` with lines "a b" meaning ℸ(a) = b.
        #[arg(long, default_value = "modular")]
        negation: String,
    },
    /// Optimal value in the fuzzy semiring.
    Fuzzy { file: PathBuf },
    /// Minimum tropical cost, via the Viterbi optimum.
    Tropical { file: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::OptconfVal { .. } => "optconf-val",
            Command::Optconf { .. } => "optconf",
            Command::Eval { .. } => "eval",
            Command::Maxsat { .. } => "maxsat",
            Command::Bound { .. } => "bound",
            Command::Reduce { .. } => "reduce",
            Command::Approx { .. } => "approx",
            Command::Access { .. } => "access",
            Command::Fuzzy { .. } => "fuzzy",
            Command::Tropical { .. } => "tropical",
        }
    }

    fn file(&self) -> &Path {
        match self {
            Command::OptconfVal { file }
            | Command::Optconf { file, .. }
            | Command::Eval { file, .. }
            | Command::Maxsat { file }
            | Command::Bound { file }
            | Command::Reduce { file, .. }
            | Command::Approx { file, .. }
            | Command::Access { file, .. }
            | Command::Fuzzy { file }
            | Command::Tropical { file } => file,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprintln!("semopt: {}", one_line(&e.to_string()));
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    match run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            // a closed stdout (e.g. piped into `head`) is not a solver failure
            let _ = writeln!(io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("semopt: {}", e.message.lines().next().unwrap_or_default());
            ExitCode::from(e.code as u8)
        }
    }
}

/// Collapses clap's multi-line message (up to its usage block) to one line.
fn one_line(text: &str) -> String {
    text.lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
        .trim_start_matches("error: ")
        .to_string()
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let path = cli.command.file();
    let input = load_formula(path)?;
    let mut report = RunReport {
        subcommand: cli.command.name(),
        input: InputInfo {
            path: path.display().to_string(),
            format: input.format.name(),
            sha256: input.sha256.clone(),
        },
        config: BTreeMap::from([
            ("max_trees", json!(cli.limits.max_trees)),
            ("max_assignments", json!(cli.limits.max_assignments)),
            ("strategy", json!(cli.limits.strategy.name())),
        ]),
        semiring: None,
        value: Value::Null,
        value_float: None,
        witness: Witness::default(),
        stats: Stats::default(),
        tol: None,
        details: BTreeMap::new(),
    };
    let start = Instant::now();
    execute(cli, &input, &mut report)?;
    report.stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

fn solver(limits: &Limits) -> Solver {
    Solver::new(SolverConfig {
        strategy: match limits.strategy {
            Strategy::BranchAndBound => OracleStrategy::BranchAndBound,
            Strategy::Exhaustive => OracleStrategy::Exhaustive,
        },
        max_trees: limits.max_trees,
    })
}

fn farey_details(report: &mut RunReport, bound: &FareyBound) {
    report.details.insert(
        "farey",
        json!({ "n_log2": bound.n_log2, "gap_log2": bound.gap_log2 }),
    );
}

fn access_semiring(k: u32, negation: &str) -> Result<AccessSemiring, CliError> {
    let neg = match negation.split_once(':') {
        None if negation == "modular" => NegationFn::modular(k)?,
        Some(("table", file)) => load_negation_table(Path::new(file))?,
        _ => {
            return Err(CliError::usage(format!(
                "--negation must be `modular` or `table:<file>`, got {negation:?}"
            )))
        }
    };
    Ok(AccessSemiring::new(k, neg)?)
}

fn execute(cli: &Cli, input: &Input, report: &mut RunReport) -> Result<(), CliError> {
    let limits = &cli.limits;
    let phi = &input.formula;
    match &cli.command {
        Command::OptconfVal { .. } => {
            let out = solver(limits).opt_conf_val(phi)?;
            report.semiring = Some("viterbi".into());
            report.value = exact(&out.value);
            report.value_float = Some(to_f64(&out.value));
            report.stats.oracle_queries = out.stats.oracle_queries;
            report.stats.trees_explored = out.stats.trees_explored;
            farey_details(report, &out.bound);
        }
        Command::Optconf { witness_tree, .. } => {
            let out = solver(limits).opt_conf(phi)?;
            report.config.insert("witness_tree", json!(witness_tree));
            report.semiring = Some("viterbi".into());
            report.value = exact(&out.value);
            report.value_float = Some(to_f64(&out.value));
            report.witness.interpretation = Some((&out.interpretation).into());
            if *witness_tree {
                report.witness.tree = Some(out.tree.encode());
            }
            report.stats.oracle_queries = out.stats.oracle_queries;
            report.stats.trees_explored = out.stats.trees_explored;
            farey_details(report, &FareyBound::for_formula(phi));
        }
        Command::Eval { pi, semiring, k, negation, .. } => {
            let spec = match (semiring, k) {
                (SemiringName::Viterbi, None) => SemiringSpec::Viterbi,
                (SemiringName::Fuzzy, None) => SemiringSpec::Fuzzy,
                (SemiringName::Access, Some(k)) => SemiringSpec::Access(access_semiring(*k, negation)?),
                (SemiringName::Access, None) => return Err(CliError::usage("--semiring access requires --k")),
                (_, Some(_)) => return Err(CliError::usage("--k applies only to --semiring access")),
            };
            let interpretation = load_interpretation(pi, phi.var_count(), &spec)?;
            let value = eval_sem(phi, &interpretation, &spec)?;
            report.config.insert("pi", json!(pi.display().to_string()));
            report.semiring = Some(spec.to_string());
            report.value = semiring_value(&value);
            report.value_float = Some(semiring_float(&value));
            report.witness.interpretation = Some((&interpretation).into());
        }
        Command::Maxsat { .. } => {
            let cnf = input.require_cnf("maxsat")?;
            let out = maxsat_exhaustive_capped(cnf, limits.max_assignments)?;
            report.value = json!(out.r);
            report.witness.assignment = Some(out.assignment);
            report.details.insert("m", json!(cnf.clause_count()));
        }
        Command::Bound { .. } => {
            let cnf = input.require_cnf("bound")?;
            let m = cnf.clause_count();
            let r = maxsat_exhaustive_capped(cnf, limits.max_assignments)?.r;
            let bound = conf_upper_bound(m, r)?;
            report.semiring = Some("viterbi".into());
            report.value = exact(&bound);
            report.value_float = Some(to_f64(&bound));
            report.details.insert("m", json!(m));
            report.details.insert("r", json!(r));
        }
        Command::Reduce { out, .. } => {
            let cnf = input.require_cnf("reduce")?;
            let inst = reduce_to_optconf(cnf);
            let dimacs = inst.phi_prime.to_dimacs();
            let sidecar = json!({ "y_offset": inst.y_offset, "source_m": inst.source_m });
            if let Some(out) = out {
                let mut sidecar_path = out.clone().into_os_string();
                sidecar_path.push(".json");
                write(out, dimacs.as_bytes())?;
                write(Path::new(&sidecar_path), format!("{sidecar:#}\n").as_bytes())?;
                report.config.insert("out", json!(out.display().to_string()));
            }
            report.details.insert("source_m", json!(inst.source_m));
            report.details.insert("reduced_m", json!(inst.phi_prime.clause_count()));
            report.details.insert("reduced_n", json!(inst.phi_prime.var_count()));
            report.details.insert("dimacs", json!(dimacs));
            report.details.insert("sidecar", sidecar);
        }
        Command::Approx { grid, refine, seed_assignment, .. } => {
            let cnf = input.require_cnf("approx")?;
            let bound = random_bound(cnf);
            report.semiring = Some("viterbi".into());
            report.details.insert("random_bound", json!(bound.value));
            report.details.insert("random_bound_exponent", json!(format_ratio(&bound.exponent)));
            if let Some(seed) = seed_assignment {
                let assignment = load_assignment(seed, cnf.var_count())?;
                let seeded = interp_from_assignment(cnf, &assignment)?;
                let value = exact_conf(cnf, &seeded.interpretation);
                report.config.insert("seed_assignment", json!(seed.display().to_string()));
                report.value = exact(&value);
                report.value_float = Some(to_f64(&value));
                report.witness.interpretation = Some((&seeded.interpretation).into());
                report.witness.assignment = Some(assignment);
                report.details.insert("guarantee", exact(&seeded.guarantee));
                report.details.insert("satisfied", json!(seeded.satisfied));
            } else {
                let out = derandomize(cnf, *grid as usize, *refine as usize)?;
                report.config.insert("grid", json!(grid));
                report.config.insert("refine", json!(refine));
                report.value = exact(&out.conf);
                report.value_float = Some(out.conf_f64());
                report.witness.interpretation = Some((&out.interpretation).into());
                report.tol = Some(out.tol);
                let trace: Vec<Value> = out.expectation_trace.iter().map(|&x| extended_float(x)).collect();
                report.details.insert("expectation_trace", json!(trace));
            }
        }
        Command::Access { k, negation, .. } => {
            let sr = access_semiring(*k, negation)?;
            let out = opt_access_capped(phi, &sr, limits.max_trees)?;
            let idx = negation_index(&sr);
            report.config.insert("k", json!(k));
            report.config.insert("negation", json!(negation));
            report.semiring = Some(SemiringSpec::Access(sr).to_string());
            report.value = json!(out.value);
            report.value_float = Some(f64::from(out.value));
            report.witness.interpretation = Some((&out.interpretation).into());
            report.details.insert("satisfiable", json!(out.satisfiable));
            report.details.insert("negation_index", json!(idx.index));
        }
        Command::Fuzzy { .. } => {
            let out = opt_fuzzy_capped(phi, limits.max_trees)?;
            report.semiring = Some("fuzzy".into());
            report.value = exact(&out.value);
            report.value_float = Some(to_f64(&out.value));
            report.witness.interpretation = Some((&out.interpretation).into());
            report.details.insert("satisfiable", json!(out.satisfiable));
        }
        Command::Tropical { .. } => {
            let out = solver(limits).opt_conf_val(phi)?;
            let t = tropical_adapt(&out.value)?;
            report.semiring = Some("tropical".into());
            report.value = extended_float(t.cost);
            report.value_float = t.cost.is_finite().then_some(t.cost);
            report.stats.oracle_queries = out.stats.oracle_queries;
            report.stats.trees_explored = out.stats.trees_explored;
            report.details.insert("viterbi_value", exact(&t.exact));
        }
    }
    Ok(())
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}
