use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use fjlt_core::chaining::{
    chain_dimension, gaussian_width_mc, parse_covering_csv, ChainingRequest, CoveringModel,
    SeriesEvaluation, DEFAULT_WIDTH_PARTITIONS,
};
use fjlt_core::experiments::csv::{
    bench_csv, coordinate_csv, flatten_csv, fmt_f64, parse_t_grid, tail_csv,
};
use fjlt_core::experiments::{
    adversarial_vector, bench_apply, coordinate_tail_exact, fit_tail_constants, flatten_tail,
    random_unit, tail_estimate, FlattenMode, TailModel, VectorKind, MAX_EXHAUSTIVE_D,
};
use fjlt_core::fjlt::io::{read_point_set, sidecar_path, write_plan, write_point_set};
use fjlt_core::{check_jl, selftest, FjltError, FjltPlan};

#[derive(Parser, Debug)]
#[command(name = "fjlt", version, about = "Fast Johnson-Lindenstrauss transform and concentration experiments")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Embed a point-set file and write the embedded set and the plan.
    Embed(EmbedArgs),
    /// Monte Carlo tail curve of | ||Ax||_2 - 1 | over random plans.
    Tail(TailArgs),
    /// Distribution of d^{1/4} ||HD'x||_4 over the signs of D'.
    Flatten(FlattenArgs),
    /// Exact tail of a Rademacher sum against the Hoeffding bound.
    CoordTail(CoordArgs),
    /// Chaining bound on the embedding dimension.
    ChainDim(ChainArgs),
    /// Monte Carlo Gaussian width of a finite point set.
    Width(WidthArgs),
    /// Median apply time per dimension.
    Bench(BenchArgs),
    /// Run the built-in invariant checks.
    Selftest,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    /// Raw f64le point file with a `.desc` sidecar.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: PathBuf,
    /// Where to write the plan file.
    #[arg(long)]
    plan: PathBuf,
    /// Also report pairwise distortion against this eps.
    #[arg(long)]
    check_eps: Option<f64>,
}

#[derive(Args, Debug)]
struct TailArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "e1")]
    vector: String,
    /// start:stop:step, stop exclusive.
    #[arg(long)]
    t_grid: String,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    /// Fit a tail model and print it as a trailing comment on stderr.
    #[arg(long)]
    fit: Option<String>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FlattenArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, default_value = "ones")]
    vector: String,
    /// Enumerate every sign pattern instead of sampling.
    #[arg(long)]
    exhaustive: bool,
    #[arg(long, default_value_t = MAX_EXHAUSTIVE_D)]
    max_exhaustive_d: usize,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CoordArgs {
    /// Comma-separated coordinates; overrides --vector.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long, default_value = "random-unit")]
    vector: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_grid: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ChainArgs {
    /// finite | subspace | sparse | explicit
    #[arg(long)]
    model: String,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    d: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    /// `j,ln_N` CSV for the explicit model.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Treat the last table row as holding for all larger j.
    #[arg(long)]
    saturate: bool,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    p: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    max_j: Option<usize>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Debug)]
struct WidthArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    trials: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_WIDTH_PARTITIONS)]
    partitions: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    d_list: Vec<usize>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    kind: String,
    message: String,
    min_d: Option<usize>,
}

impl CliError {
    pub fn usage(message: &str) -> Self {
        CliError { code: 1, kind: "usage".into(), message: message.into(), min_d: None }
    }

    fn runtime(message: String) -> Self {
        CliError { code: 2, kind: "runtime".into(), message, min_d: None }
    }

    pub fn exit_code(&self) -> u8 {
        self.code
    }

    pub fn line(&self) -> String {
        let mut line = format!("error kind={}", self.kind);
        if let Some(min_d) = self.min_d {
            line.push_str(&format!(" min_d={min_d}"));
        }
        let message = self.message.replace('\n', " ").replace('"', "'");
        line.push_str(&format!(" message=\"{message}\""));
        line
    }
}

impl From<FjltError> for CliError {
    fn from(e: FjltError) -> Self {
        let code = if matches!(e, FjltError::Io(_)) { 2 } else { 1 };
        let min_d = match e {
            FjltError::InfeasibleDimensions { min_d, .. } => Some(min_d),
            _ => None,
        };
        CliError { code, kind: e.kind().into(), message: e.to_string(), min_d }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::runtime(e.to_string()))?;
    }
    match cli.command {
        Command::Embed(a) => embed(a),
        Command::Tail(a) => tail(a),
        Command::Flatten(a) => flatten(a),
        Command::CoordTail(a) => coord_tail(a),
        Command::ChainDim(a) => chain_dim(a),
        Command::Width(a) => width(a),
        Command::Bench(a) => bench(a),
        Command::Selftest => run_selftest(),
    }
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::runtime(format!("writing {}: {e}", path.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::runtime(e.to_string())),
    }
}

fn embed(a: EmbedArgs) -> CliResult<()> {
    if let Some(eps) = a.check_eps {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(FjltError::Argument(format!("eps must lie in (0, 1), got {eps}")).into());
        }
    }
    let points = read_point_set(&a.input).map_err(|e| match e {
        FjltError::Io(msg) => CliError::from(FjltError::Format(format!(
            "cannot read {} or {}: {msg}",
            a.input.display(),
            sidecar_path(&a.input).display()
        ))),
        other => other.into(),
    })?;
    let plan = FjltPlan::new(points.dim(), a.k, a.seed)?;
    let embedded = plan.embed_set(&points)?;
    let report = a.check_eps.map(|eps| check_jl(&points, &embedded, eps)).transpose()?;

    write_point_set(&a.output, &embedded)?;
    write_plan(&a.plan, &plan)?;
    println!("n={} d={} k={} seed={}", points.len(), points.dim(), a.k, a.seed);
    if let Some(r) = report {
        println!(
            "pairs={} max_distortion={} eps={} pass={}",
            r.pairs,
            fmt_f64(r.max_distortion),
            r.eps,
            r.pass
        );
    }
    Ok(())
}

fn tail(a: TailArgs) -> CliResult<()> {
    let vector: VectorKind = a.vector.parse()?;
    let model = a.fit.as_deref().map(str::parse::<TailModel>).transpose()?;
    let grid = parse_t_grid(&a.t_grid)?;
    let curve = tail_estimate(a.d, a.k, vector, &grid, a.trials, a.seed)?;
    emit(a.output.as_deref(), &tail_csv(&curve))?;
    if let Some(model) = model {
        match fit_tail_constants(&curve, model) {
            Ok(f) => eprintln!(
                "# fit model={} rate={} prefactor={} residual={} points={}",
                f.model,
                fmt_f64(f.rate),
                fmt_f64(f.prefactor),
                fmt_f64(f.residual),
                f.points_used
            ),
            Err(e) => eprintln!("# fit failed: {e}"),
        }
    }
    Ok(())
}

fn flatten(a: FlattenArgs) -> CliResult<()> {
    let vector: VectorKind = a.vector.parse()?;
    if vector == VectorKind::RandomUnit && a.seed.is_none() {
        return Err(CliError::usage("--vector random-unit requires --seed"));
    }
    let mode = if a.exhaustive {
        FlattenMode::Exhaustive { max_d: a.max_exhaustive_d }
    } else {
        match (a.trials, a.seed) {
            (Some(trials), Some(seed)) => FlattenMode::MonteCarlo { trials, seed },
            _ => return Err(CliError::usage("sampling needs --trials and --seed (or pass --exhaustive)")),
        }
    };
    let x = adversarial_vector(vector, a.d, a.seed.unwrap_or(0))?;
    let dist = flatten_tail(&x, mode)?;
    emit(a.output.as_deref(), &flatten_csv(&dist))
}

fn coord_tail(a: CoordArgs) -> CliResult<()> {
    let grid = parse_t_grid(&a.t_grid)?;
    let x = match (&a.x, a.d) {
        (Some(list), _) => list
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::from(FjltError::Argument(format!("bad coordinate '{v}'"))))
            })
            .collect::<CliResult<Vec<f64>>>()?,
        (None, Some(d)) => {
            let vector: VectorKind = a.vector.parse()?;
            let seed = match (vector, a.seed) {
                (VectorKind::RandomUnit, None) => {
                    return Err(CliError::usage("--vector random-unit requires --seed"))
                }
                (_, s) => s.unwrap_or(0),
            };
            // The coordinate sum has no power-of-two constraint.
            if vector == VectorKind::RandomUnit {
                random_unit(d, seed, 0)
            } else {
                adversarial_vector(vector, d, seed)?
            }
        }
        (None, None) => return Err(CliError::usage("pass --x or --d")),
    };
    let tail = coordinate_tail_exact(&x, &grid)?;
    emit(a.output.as_deref(), &coordinate_csv(&tail))
}

fn chain_dim(a: ChainArgs) -> CliResult<()> {
    let need = |name: &str| CliError::usage(&format!("--model {} requires --{name}", a.model));
    let model = match a.model.as_str() {
        "finite" => CoveringModel::Finite { n: a.n.ok_or_else(|| need("n"))? },
        "subspace" => CoveringModel::Subspace { m: a.m.ok_or_else(|| need("m"))? },
        "sparse" => CoveringModel::Sparse {
            d: a.d.ok_or_else(|| need("d"))?,
            s: a.s.ok_or_else(|| need("s"))?,
        },
        "explicit" => {
            let path = a.table.as_ref().ok_or_else(|| need("table"))?;
            let text = fs::read_to_string(path).map_err(|e| {
                FjltError::Format(format!("cannot read {}: {e}", path.display()))
            })?;
            CoveringModel::Explicit { ln_n: parse_covering_csv(&text)?, saturate: a.saturate }
        }
        other => return Err(FjltError::Argument(format!("unknown covering model '{other}'")).into()),
    };
    let req = ChainingRequest { model, eps: a.eps, p: a.p, c: a.c, tolerance: a.tol, max_j: a.max_j };
    let b = chain_dimension(&req)?;
    let evaluation = match b.evaluation {
        SeriesEvaluation::ClosedForm => "closed-form",
        SeriesEvaluation::Truncated => "truncated",
        SeriesEvaluation::HardLimit => "hard-limit",
    };
    let tail = b.tail_bound.map_or("unknown".to_string(), fmt_f64);
    let text = if a.csv {
        format!(
            "k,series,terms_used,evaluation,tail_bound,C\n{},{},{},{evaluation},{tail},{}\n",
            b.k,
            fmt_f64(b.series),
            b.terms_used,
            fmt_f64(b.c)
        )
    } else {
        format!(
            "k = {}\nseries = {}\nterms_used = {}\nevaluation = {evaluation}\ntail_bound = {tail}\nC = {}\n",
            b.k,
            fmt_f64(b.series),
            b.terms_used,
            b.c
        )
    };
    emit(None, &text)
}

fn width(a: WidthArgs) -> CliResult<()> {
    let points = read_point_set(&a.input)?;
    let w = gaussian_width_mc(&points, a.trials, a.seed, a.partitions)?;
    emit(
        None,
        &format!(
            "mean,std_err,trials,partitions\n{},{},{},{}\n",
            fmt_f64(w.mean),
            fmt_f64(w.std_err),
            w.trials,
            w.partitions
        ),
    )
}

fn bench(a: BenchArgs) -> CliResult<()> {
    if a.d_list.is_empty() {
        return Err(CliError::usage("--d-list is empty"));
    }
    let rows = bench_apply(&a.d_list, a.k, a.reps, a.seed)?;
    emit(a.output.as_deref(), &bench_csv(&rows))
}

fn run_selftest() -> CliResult<()> {
    let outcomes = selftest::run_all();
    let mut failed = 0;
    for o in &outcomes {
        println!("{} {} {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        failed += usize::from(!o.passed);
    }
    if failed > 0 {
        return Err(CliError::runtime(format!("{failed} of {} checks failed", outcomes.len())));
    }
    Ok(())
}
