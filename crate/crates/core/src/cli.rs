//! Command-line front end. Every subcommand parses its flags, calls the
//! library and prints the result.
//!
//! Exit codes: 0 success, 1 verification or proof obligation failed,
//! 2 usage or input error, 3 internal error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{find_norm_multiplicativity_counterexample, BasisTable, Convention, Hyper};
use crate::euler::{
    euler4_build, euler4_conditions, euler4_match_quaternion, euler4_solve, euler_symbolic, EulerParams,
    EulerSolution,
};
use crate::magic::{build_matrix, classify, gram_report, prove_theorem, verify_document, MatrixDocument, SquareMatrix};
use crate::render::{render_pattern, RenderSpec};
use crate::scalar::HalfRational;
use crate::search::{
    diagonalize_rows, exhaustive_search, random_search, read_candidates, Candidate, CandidateLog, Predicate, Sampler,
    SearchConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "octomagic", version, about = "Magic squares of squares from A(e_i P)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the square with rows A(e_i P) and write it as matrix JSON.
    Build(BuildArgs),
    /// Recompute a matrix JSON file or a candidate JSONL log from its parameters.
    Verify {
        file: PathBuf,
    },
    /// Symbolic proof of the semi-magic property for a given dimension.
    Prove {
        #[arg(long, value_parser = ["1", "2", "4", "8", "16"])]
        dim: String,
        #[arg(long, default_value_t = Convention::Classic)]
        convention: Convention,
    },
    /// Euler's 4x4 parametrisation.
    Euler4 {
        #[command(subcommand)]
        action: EulerAction,
    },
    /// Randomized or exhaustive search for (A, P); candidates go to JSONL.
    Search(SearchArgs),
    /// Look for a row order that makes both diagonals carry the constant.
    Diagonalize {
        file: PathBuf,
    },
    /// Write the term-pattern figure of the symbolic matrix as SVG.
    Render {
        #[arg(long, value_parser = ["4", "8"])]
        dim: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = Convention::Classic)]
        convention: Convention,
    },
    /// Random search for x, y with N(x)N(y) != N(xy).
    SedenionCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, default_value_t = Convention::Classic)]
        convention: Convention,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// JSON array, e.g. '[8,-2,-4,8,-4,-1,-5,-4]'; halves as strings "5/2".
    #[arg(long = "A", value_name = "JSON", allow_hyphen_values = true)]
    pub a: String,
    #[arg(long = "P", value_name = "JSON", allow_hyphen_values = true)]
    pub p: String,
    #[arg(long, default_value_t = Convention::Classic)]
    pub convention: Convention,
    /// Matrix JSON destination; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum EulerAction {
    /// Evaluate Euler's table.
    Build {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report both side conditions and the classification.
    Conditions {
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Solve the second side condition for a : c.
    Solve {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        pqrs: Vec<HalfRational>,
        #[arg(long, allow_negative_numbers = true)]
        b: HalfRational,
        #[arg(long, allow_negative_numbers = true)]
        d: HalfRational,
    },
    /// Map the quaternionic symbolic matrix onto Euler's table.
    Match {
        #[arg(long, default_value_t = Convention::Classic)]
        convention: Convention,
    },
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// JSON file of the form {"abcd": [...], "pqrs": [...]}.
    #[arg(long, conflicts_with_all = ["abcd", "pqrs"])]
    pub params: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "pqrs")]
    pub abcd: Option<Vec<HalfRational>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "abcd")]
    pub pqrs: Option<Vec<HalfRational>>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum LayoutArg {
    Natural,
    Euler4,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SamplerArg {
    Uniform,
    Euler,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = Convention::Classic)]
    pub convention: Convention,
    #[arg(long, value_enum, default_value_t = LayoutArg::Natural)]
    pub layout: LayoutArg,
    /// Lower end of the lattice range.
    #[arg(long, default_value_t = -32, allow_negative_numbers = true)]
    pub lo: i64,
    #[arg(long, default_value_t = 32, allow_negative_numbers = true)]
    pub hi: i64,
    /// Per-coordinate ranges "lo:hi,...", A first then P; overrides --lo/--hi.
    #[arg(long, allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Coordinates in steps of 1/2.
    #[arg(long)]
    pub half: bool,
    /// semimagic, entries_distinct, squares_distinct, entries_integral, fully_magic.
    #[arg(long = "predicate", value_delimiter = ',', default_value = "semimagic,entries_distinct")]
    pub predicates: Vec<Predicate>,
    #[arg(long, default_value_t = 100_000)]
    pub iterations: u64,
    #[arg(long)]
    pub max_seconds: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    #[arg(long, value_enum, default_value_t = SamplerArg::Uniform)]
    pub sampler: SamplerArg,
    /// Skip (A, P) related to an earlier one by sign or scaling.
    #[arg(long)]
    pub quotient: bool,
    /// Accept fully_magic after a row permutation.
    #[arg(long)]
    pub permute_rows: bool,
    /// Add wall-clock timestamps to candidates.
    #[arg(long)]
    pub timestamps: bool,
    /// Enumerate the whole region instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    #[arg(long, default_value_t = 100_000_000)]
    pub max_points: u128,
    /// JSONL destination (appended); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub progress: bool,
}

/// Error raised by a subcommand, mapped onto an exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match std::panic::catch_unwind(|| dispatch(cli)) {
        Ok(Ok(code)) => code,
        Ok(Err(Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Ok(Err(Failure::Internal(msg))) => {
            eprintln!("internal error: {msg}");
            EXIT_INTERNAL
        }
        Err(_) => EXIT_INTERNAL,
    }
}

fn dispatch(cli: Cli) -> Outcome {
    match cli.command {
        Command::Build(args) => build(args),
        Command::Verify { file } => verify(&file),
        Command::Prove { dim, convention } => prove(dim.parse().expect("validated by clap"), convention),
        Command::Euler4 { action } => euler4(action),
        Command::Search(args) => search(args),
        Command::Diagonalize { file } => diagonalize(&file),
        Command::Render { dim, out, convention } => render(dim.parse().expect("validated by clap"), &out, convention),
        Command::SedenionCheck { seed, budget, dim, convention } => sedenion_check(seed, budget, dim, convention),
    }
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn document_json(m: &SquareMatrix) -> String {
    let mut s = serde_json::to_string_pretty(&m.to_document()).expect("document serializes");
    s.push('\n');
    s
}

fn build(args: BuildArgs) -> Outcome {
    let a: Hyper = serde_json::from_str(&args.a).map_err(|e| Failure::Usage(format!("--A: {e}")))?;
    let p: Hyper = serde_json::from_str(&args.p).map_err(|e| Failure::Usage(format!("--P: {e}")))?;
    let table = BasisTable::new(a.dim(), args.convention)?;
    let m = build_matrix(&a, &p, &table)?;
    println!("{m}");
    println!("classification: {}", classify(&m));
    write_or_print(args.out.as_deref(), &document_json(&m))?;
    Ok(EXIT_OK)
}

fn verify(file: &Path) -> Outcome {
    let text = fs::read_to_string(file)?;
    if let Ok(doc) = serde_json::from_str::<MatrixDocument>(&text) {
        let report = verify_document(&doc)?;
        print!("{report}");
        return Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED });
    }
    let candidates = read_candidates(file)?;
    let mut bad = 0;
    for (i, c) in candidates.iter().enumerate() {
        let ok = c.reverify()?;
        if !ok {
            bad += 1;
            println!("[FAIL] line {}: A={} P={} does not reproduce its record", i + 1, c.a, c.p);
        }
    }
    println!("{} of {} candidates re-verified", candidates.len() - bad, candidates.len());
    Ok(if bad == 0 { EXIT_OK } else { EXIT_FAILED })
}

fn prove(dim: usize, convention: Convention) -> Outcome {
    let report = prove_theorem(&BasisTable::new(dim, convention)?)?;
    print!("{report}");
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILED })
}

fn params_from(args: ParamArgs) -> Result<EulerParams, Failure> {
    if let Some(path) = args.params {
        return Ok(serde_json::from_str(&fs::read_to_string(path)?)?);
    }
    match (args.abcd, args.pqrs) {
        (Some(abcd), Some(pqrs)) => Ok(EulerParams {
            abcd: abcd.try_into().map_err(|_| Failure::Usage("--abcd takes 4 values".into()))?,
            pqrs: pqrs.try_into().map_err(|_| Failure::Usage("--pqrs takes 4 values".into()))?,
        }),
        _ => Err(Failure::Usage("give --params FILE or both --abcd and --pqrs".into())),
    }
}

fn euler4(action: EulerAction) -> Outcome {
    match action {
        EulerAction::Build { params, out } => {
            let m = euler4_build(&params_from(params)?);
            println!("{m}");
            println!("classification: {}", classify(&m));
            write_or_print(out.as_deref(), &document_json(&m))?;
            Ok(EXIT_OK)
        }
        EulerAction::Conditions { params } => {
            let params = params_from(params)?;
            let cond = euler4_conditions(&params);
            let class = classify(&euler4_build(&params));
            println!("pr + qs = 0: {}", cond.product_condition);
            println!("a/c condition: {}{}", cond.ratio_condition, if cond.degenerate { " (degenerate)" } else { "" });
            println!("classification: {class}");
            Ok(if cond.both() && class.is_fully_magic() { EXIT_OK } else { EXIT_FAILED })
        }
        EulerAction::Solve { pqrs, b, d } => {
            let pqrs: [HalfRational; 4] = pqrs.try_into().map_err(|_| Failure::Usage("--pqrs takes 4 values".into()))?;
            match euler4_solve(pqrs, b, d)? {
                EulerSolution::Ratio { a, c } => println!("a = {a}, c = {c} (any common multiple)"),
                EulerSolution::Degenerate => println!("degenerate: every a, c satisfies the condition"),
            }
            Ok(EXIT_OK)
        }
        EulerAction::Match { convention } => {
            let table = BasisTable::new(4, convention)?;
            match euler4_match_quaternion(&table) {
                Ok(found) => {
                    println!("{found}");
                    let mapped = found.apply(&crate::magic::build_symbolic(&table));
                    let exact = &mapped == euler_symbolic();
                    println!("mapped table equals Euler's: {exact}");
                    if !exact {
                        return Err(Failure::Internal("match does not reproduce the table".into()));
                    }
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    println!("{e}");
                    Ok(EXIT_FAILED)
                }
            }
        }
    }
}

fn parse_bounds(s: &str) -> Result<Vec<(i64, i64)>, Failure> {
    s.split(',')
        .map(|pair| {
            let (lo, hi) = pair
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("bound {pair:?} is not lo:hi")))?;
            Ok((lo.trim().parse()?, hi.trim().parse()?))
        })
        .collect()
}

fn search(args: SearchArgs) -> Outcome {
    let cfg = SearchConfig {
        dim: args.dim,
        convention: args.convention,
        layout: match args.layout {
            LayoutArg::Natural => crate::magic::Layout::Natural,
            LayoutArg::Euler4 => crate::magic::Layout::Euler4,
        },
        lo: args.lo,
        hi: args.hi,
        bounds: args.bounds.as_deref().map(parse_bounds).transpose()?,
        half_integer: args.half,
        predicates: args.predicates,
        iterations: args.iterations,
        max_duration: args
            .max_seconds
            .map(Duration::try_from_secs_f64)
            .transpose()
            .map_err(|e| Failure::Usage(format!("--max-seconds: {e}")))?,
        seed: args.seed,
        workers: args.workers,
        sampler: match args.sampler {
            SamplerArg::Uniform => Sampler::Uniform,
            SamplerArg::Euler => Sampler::EulerSolutions,
        },
        quotient_symmetry: args.quotient,
        permute_rows: args.permute_rows,
        record_wall_clock: args.timestamps,
        max_lattice_points: args.max_points,
        progress: args.progress,
    };
    eprintln!("search: seed {}", cfg.seed);

    let mut log = args.out.as_deref().map(CandidateLog::append).transpose()?;
    let stdout = io::stdout();
    let mut write_err = None;
    let sink = |c: &Candidate| {
        let res = match log.as_mut() {
            Some(log) => log.write(c).map_err(|e| e.to_string()),
            None => {
                let line = serde_json::to_string(c).expect("candidate serializes");
                writeln!(stdout.lock(), "{line}").map_err(|e| e.to_string())
            }
        };
        if let Err(e) = res {
            write_err.get_or_insert(e);
        }
    };
    let summary = if args.exhaustive { exhaustive_search(&cfg, sink)? } else { random_search(&cfg, sink)? };
    if let Some(e) = write_err {
        return Err(Failure::Usage(format!("writing candidates: {e}")));
    }
    let best = summary.best_constant.map_or_else(|| "none".into(), |b| b.to_string());
    eprintln!(
        "search: seed {} done: {} iterations, {} candidates, best constant {best}",
        cfg.seed, summary.iterations, summary.emitted
    );
    Ok(EXIT_OK)
}

fn diagonalize(file: &Path) -> Outcome {
    let doc: MatrixDocument = serde_json::from_str(&fs::read_to_string(file)?)?;
    let m = doc.to_matrix()?;
    match diagonalize_rows(&m)? {
        Some(perm) => {
            let permuted = m.permute_rows(&perm);
            println!("row permutation {perm:?}");
            println!("{permuted}");
            println!("classification: {}", classify(&permuted));
        }
        None => println!("no row permutation puts the constant on both diagonals"),
    }
    Ok(EXIT_OK)
}

fn render(dim: usize, out: &Path, convention: Convention) -> Outcome {
    let table = BasisTable::new(dim, convention)?;
    let spec = RenderSpec::for_dim(dim)?.with_convention(convention);
    let svg = render_pattern(&crate::magic::build_symbolic(&table), &spec)?;
    fs::write(out, svg)?;
    println!("wrote {}", out.display());
    Ok(EXIT_OK)
}

fn sedenion_check(seed: u64, budget: u64, dim: usize, convention: Convention) -> Outcome {
    let table = BasisTable::new(dim, convention)?;
    println!("seed {seed}, budget {budget}, dim {dim}, {convention} convention");
    match find_norm_multiplicativity_counterexample(&table, seed, budget) {
        Some((x, y)) => {
            let xy = table.multiply(&x, &y)?;
            println!("x = {x}");
            println!("y = {y}");
            println!("N(x)N(y) = {} but N(xy) = {}", x.norm() * y.norm(), xy.norm());
            let report = gram_report(&build_matrix(&x, &y, &table)?);
            println!(
                "matrix with rows x(e_i y): orthogonal={}, largest off-diagonal |MM^T| entry {}",
                report.is_orthogonal, report.off_diagonal_max_abs
            );
        }
        None => println!("no counterexample within the budget"),
    }
    Ok(EXIT_OK)
}
