mod report;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use witness_lab::generators::{
    gen_cover_db, gen_line3_db, gen_matrix_db, gen_pyramid_db, gen_random_db, line_to_dsf, read_metadata,
    GeneratedInstance, LabelCoverInstance, SetCoverInstance,
};
use witness_lab::solvers::{
    solve_approx_head_domination, solve_baseline_union, solve_exact_head_cluster, solve_greedy_single_nonoutput,
    solve_oracle, OracleConfig, SolveReport, DEFAULT_ORACLE_CAP,
};
use witness_lab::{classify, is_witness, Classification, Database, ErrorCategory, Label, Query};

use crate::report::RunReport;

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Lib(#[from] witness_lab::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("solver returned an invalid witness: {0}")]
    InvalidWitness(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(e) => match e.category() {
                ErrorCategory::Input => 2,
                ErrorCategory::Precondition => 3,
                ErrorCategory::ResourceCap => 4,
                ErrorCategory::Internal => 1,
            },
            Failure::Io { .. } | Failure::Usage(_) => 2,
            Failure::InvalidWitness(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

/// Smallest witnesses for self-join-free conjunctive queries.
///
/// Every command prints one JSON document on stdout. Exit status: 0 success,
/// 2 bad input, 3 algorithm not applicable to the query, 4 size cap hit.
#[derive(Parser)]
#[command(name = "witness-lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a query by its structural properties.
    Classify { query: PathBuf },
    /// Compute a witness for a query over a CSV directory.
    Solve(SolveArgs),
    /// Write a generated query, its CSVs and metadata.json to a directory.
    Generate(GenerateArgs),
    /// Export a line query instance as a directed Steiner forest instance.
    ExportDsf {
        query: PathBuf,
        data: PathBuf,
        /// Also write the JSON to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Algo {
    /// Route by classification: exact for head-cluster, approx for
    /// head-domination, greedy for one non-output attribute, else baseline.
    Auto,
    Exact,
    Approx,
    Greedy,
    Baseline,
    Oracle,
}

#[derive(Args)]
struct SolveArgs {
    query: PathBuf,
    data: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    algo: Algo,
    /// Write the witness CSVs to this directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    oracle_cap: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Cover,
    Matrix,
    Pyramid,
    Line3,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "WITNESS_LAB_SEED", default_value_t = 0)]
    seed: u64,
    /// Universe size of a random set cover instance.
    #[arg(long, default_value_t = 4)]
    universe: usize,
    /// Number of sets of a random set cover instance.
    #[arg(long, default_value_t = 4)]
    sets: usize,
    /// Explicit family such as "u1 u2;u2 u3", overriding --universe/--sets.
    #[arg(long)]
    family_sets: Option<String>,
    /// Label cover vertices per side.
    #[arg(long, default_value_t = 2)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    alphabet: usize,
    /// Copies per label cover vertex.
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long, default_value_t = 2)]
    max_pairs: usize,
    /// Query file for the random family.
    #[arg(long)]
    query: Option<PathBuf>,
    /// Tuples per relation (one value, or one per relation).
    #[arg(long, value_delimiter = ',', default_value = "8")]
    size: Vec<usize>,
    /// Values per attribute (one value, or one per attribute).
    #[arg(long, value_delimiter = ',', default_value = "4")]
    pool: Vec<usize>,
}

fn read_query(path: &Path) -> Result<Query> {
    let text = fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(Query::parse(&text)?)
}

fn route(c: &Classification, query: &Query) -> Algo {
    match c.label {
        Label::ExactPTime => Algo::Exact,
        Label::ConstApprox => Algo::Approx,
        Label::LogHard if query.non_output_attrs().len() == 1 => Algo::Greedy,
        Label::LogHard => Algo::Baseline,
    }
}

fn run_solver(algo: Algo, query: &Query, db: &Database, cap: usize) -> Result<SolveReport> {
    let report = match algo {
        Algo::Exact => solve_exact_head_cluster(query, db)?,
        Algo::Approx => solve_approx_head_domination(query, db)?,
        Algo::Greedy => solve_greedy_single_nonoutput(query, db)?,
        Algo::Baseline => solve_baseline_union(query, db)?,
        Algo::Oracle => solve_oracle(query, db, OracleConfig { cap, budget: None })?,
        Algo::Auto => unreachable!("routed before solving"),
    };
    Ok(report)
}

fn cmd_classify(path: &Path) -> Result<serde_json::Value> {
    let query = read_query(path)?;
    let c = classify(&query)?;
    Ok(json!({ "spec": "1", "query": query.to_string(), "classification": c }))
}

fn cmd_solve(args: &SolveArgs) -> Result<serde_json::Value> {
    let query = read_query(&args.query)?;
    let db = Database::load(&query, &args.data)?;
    let c = classify(&query)?;
    let algo = match args.algo {
        Algo::Auto => route(&c, &query),
        a => a,
    };
    let start = Instant::now();
    let report = run_solver(algo, &query, &db, args.oracle_cap)?;
    let elapsed = start.elapsed();
    if !is_witness(&query, &db, &report.witness)? {
        return Err(Failure::InvalidWitness(report.algorithm));
    }
    if let Some(out) = &args.out {
        report.witness.db.write_csv_dir(out)?;
    }
    let metadata = read_metadata(&args.data)?;
    let run = RunReport::new(&query, c, report, elapsed, metadata.as_ref());
    Ok(serde_json::to_value(run).expect("report serializes"))
}

fn set_cover(args: &GenerateArgs, rng: &mut ChaCha8Rng) -> Result<SetCoverInstance> {
    let Some(text) = &args.family_sets else {
        return Ok(SetCoverInstance::random(args.universe, args.sets, rng)?);
    };
    let family: Vec<Vec<String>> = text
        .split(';')
        .map(|s| s.split_whitespace().map(String::from).collect())
        .collect();
    let mut universe: Vec<String> = family.iter().flatten().cloned().collect();
    universe.sort();
    universe.dedup();
    Ok(SetCoverInstance::new(universe, family)?)
}

fn cmd_generate(args: &GenerateArgs) -> Result<serde_json::Value> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let generated = match args.family {
        Family::Cover => gen_cover_db(&set_cover(args, &mut rng)?)?,
        Family::Matrix => gen_matrix_db(&set_cover(args, &mut rng)?)?,
        Family::Pyramid => gen_pyramid_db(&set_cover(args, &mut rng)?)?,
        Family::Line3 => {
            let lc = LabelCoverInstance::random(args.n, args.alphabet, args.max_pairs, &mut rng)?;
            gen_line3_db(&lc, args.t)?
        }
        Family::Random => {
            let path = args
                .query
                .as_ref()
                .ok_or_else(|| Failure::Usage("the random family needs --query".into()))?;
            let query = read_query(path)?;
            let db = gen_random_db(&query, &args.size, &args.pool, args.seed)?;
            GeneratedInstance {
                family: "random".into(),
                query,
                db,
                predicted_optimum: None,
                parameters: json!({ "size": args.size, "pool": args.pool, "seed": args.seed }),
            }
        }
    };
    generated.write_to(&args.out)?;
    Ok(serde_json::to_value(generated.metadata()).expect("metadata serializes"))
}

fn cmd_export_dsf(query: &Path, data: &Path, out: Option<&Path>) -> Result<serde_json::Value> {
    let query = read_query(query)?;
    let db = Database::load(&query, data)?;
    let inst = line_to_dsf(&query, &db)?;
    let mut doc = serde_json::to_value(&inst).expect("instance serializes");
    doc["spec"] = json!("1");
    if let Some(path) = out {
        let text = serde_json::to_string_pretty(&doc).expect("json");
        fs::write(path, text + "\n").map_err(|source| Failure::Io {
            path: path.to_path_buf(),
            source,
        })?;
    }
    Ok(doc)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { query } => cmd_classify(query),
        Command::Solve(args) => cmd_solve(args),
        Command::Generate(args) => cmd_generate(args),
        Command::ExportDsf { query, data, out } => cmd_export_dsf(query, data, out.as_deref()),
    };
    match result {
        Ok(doc) => {
            // a closed pipe on stdout is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&doc).expect("json"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
