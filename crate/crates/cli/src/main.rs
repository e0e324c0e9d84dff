//! `pou`: batch front end for building and certifying partitions of unity.
//!
//! Exit status is 0 when every certificate produced by the command passes,
//! 1 when one fails and 2 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pou_core::io::{parse_cover, parse_space, partition_to_csv, to_json};
use pou_core::kuhn::{euclidean_refine, KuhnGrid};
use pou_core::metric::{
    lebesgue_report, optimal_lebesgue, top_two_bound_check_with_tol, Cover, MetricSpace,
};
use pou_core::nerve::{build_nerve, nerve_to_json, preimage_diameters};
use pou_core::partition::{build_partition, certify, theoretical_bounds, AmpSource};
use pou_core::refine::{
    default_params, disjoint_decomposition, recolor_refinement, shrink_cover, Refinement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "pou", version, about = "Lipschitz partitions of unity on finite metric spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lebesgue profile, multiplicities, midpoint defect and top-two check.
    Analyze(AnalyzeArgs),
    /// Build the partition of unity and certify its Lipschitz bounds.
    Partition(PartitionArgs),
    /// Refine a cover with the chosen strategy.
    Refine(RefineArgs),
    /// Disjoint-family decomposition (same as `refine --strategy decompose`).
    Decompose(RefineArgs),
    /// Kuhn star refinement (same as `refine --strategy kuhn`).
    KuhnRefine(RefineArgs),
    /// Nerve of the partition and preimage diameters.
    Nerve(NerveArgs),
    /// Theoretical bounds, from a space and cover or from M and L directly.
    Bounds(BoundsArgs),
}

#[derive(Args)]
struct Input {
    /// Space JSON.
    #[arg(long)]
    space: PathBuf,
    /// Cover JSON.
    #[arg(long)]
    cover: PathBuf,
}

#[derive(Args)]
struct AmpArgs {
    /// Assert the approximate midpoint property for the sampled continuum.
    #[arg(long)]
    amp: bool,
    /// Use the midpoint bounds when the sample's midpoint defect is at most
    /// this value.
    #[arg(long = "amp-tol", value_name = "R")]
    amp_tol: Option<f64>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: Input,
    /// Radii for rho-multiplicity.
    #[arg(long, value_delimiter = ',', value_name = "R[,R...]")]
    rho: Vec<f64>,
    #[arg(long = "amp-tol", value_name = "R")]
    amp_tol: Option<f64>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Exponent of the vectorization norm (`inf` allowed).
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[command(flatten)]
    amp: AmpArgs,
    /// Directory for `partition.csv` and `certificate.json`; the certificate
    /// goes to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Shrink,
    Kuhn,
    Recolor,
    Decompose,
}

#[derive(Args)]
struct RefineArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum)]
    strategy: Option<Strategy>,
    /// Exponent of the partition the decomposition is read from.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Lebesgue number handed to the Kuhn refinement; defaults to the
    /// cover's optimal one.
    #[arg(long)]
    lebesgue: Option<f64>,
    /// Fine cover for recoloring.
    #[arg(long)]
    fine: Option<PathBuf>,
    /// Seed of the Kuhn sampling sweep.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random points in the Kuhn sampling sweep.
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Refined cover path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NerveArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, requires = "cover")]
    space: Option<PathBuf>,
    #[arg(long, requires = "space")]
    cover: Option<PathBuf>,
    /// Multiplicity, when no space is given.
    #[arg(long = "multiplicity", short = 'M', conflicts_with = "space")]
    multiplicity: Option<usize>,
    /// Lebesgue number, when no space is given.
    #[arg(long, conflicts_with = "space")]
    lebesgue: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long)]
    amp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Input, parse and parameter errors; reported with exit status 2.
struct Failure(String);

impl From<pou_core::Error> for Failure {
    fn from(e: pou_core::Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("POU_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Partition(a) => partition(a),
        Command::Refine(a) => {
            let strategy = a.strategy.unwrap_or(Strategy::Shrink);
            refine(a, strategy)
        }
        Command::Decompose(a) => refine(a, Strategy::Decompose),
        Command::KuhnRefine(a) => refine(a, Strategy::Kuhn),
        Command::Nerve(a) => nerve(a),
        Command::Bounds(a) => bounds(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn in_file(path: &Path, e: pou_core::Error) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn load(input: &Input) -> Result<(MetricSpace, Cover), Failure> {
    let space = parse_space(&read(&input.space)?).map_err(|e| in_file(&input.space, e))?;
    let cover = load_cover(&input.cover, space.len())?;
    Ok((space, cover))
}

fn load_cover(path: &Path, n: usize) -> Result<Cover, Failure> {
    Ok(parse_cover(&read(path)?, n).map_err(|e| in_file(path, e))?.cover)
}

fn analyze(args: AnalyzeArgs) -> Outcome {
    let (space, cover) = load(&args.input)?;
    let report = lebesgue_report(&space, &cover, &args.rho)?;
    let top_two = top_two_bound_check_with_tol(&space, &cover, args.amp_tol)?;
    let value = json!({
        "points": space.len(),
        "members": cover.len(),
        "lebesgue": report,
        "top_two": top_two,
    });
    emit(args.out.as_deref(), &to_json(&value)?)?;
    Ok(true)
}

/// Decides which bound family applies.
fn amp_source(space: &MetricSpace, cover: &Cover, amp: &AmpArgs) -> Result<AmpSource, Failure> {
    if amp.amp {
        return Ok(AmpSource::Asserted);
    }
    match amp.amp_tol {
        Some(tol) if space.len() >= 2 => {
            let check = top_two_bound_check_with_tol(space, cover, Some(tol))?;
            Ok(if check.midpoint_defect <= tol {
                AmpSource::Inferred {
                    defect: check.midpoint_defect,
                    tolerance: tol,
                }
            } else {
                AmpSource::None
            })
        }
        _ => Ok(AmpSource::None),
    }
}

fn partition(args: PartitionArgs) -> Outcome {
    let (space, cover) = load(&args.input)?;
    let source = amp_source(&space, &cover, &args.amp)?;
    let pou = build_partition(&space, &cover, args.p)?;
    let lebesgue = optimal_lebesgue(&space, &cover)?;
    let bounds = theoretical_bounds(
        cover.multiplicity(),
        lebesgue,
        args.p,
        args.q,
        source != AmpSource::None,
    )?;
    let mut cert = certify(&pou, &space, &bounds)?;
    cert.amp_source = source;
    let cert_json = to_json(&cert)?;
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir)
                .map_err(|e| Failure(format!("cannot create {}: {e}", dir.display())))?;
            write(&dir.join("partition.csv"), &partition_to_csv(&pou, &space))?;
            write(&dir.join("certificate.json"), &cert_json)?;
        }
        None => print!("{cert_json}"),
    }
    Ok(cert.passed())
}

fn refine(args: RefineArgs, strategy: Strategy) -> Outcome {
    let (space, cover) = load(&args.input)?;
    let out = args.out.as_deref();
    match strategy {
        Strategy::Shrink => finish_refinement(&shrink_cover(&space, &cover)?, &space, out),
        Strategy::Recolor => {
            let fine_path = args
                .fine
                .as_deref()
                .ok_or_else(|| Failure("--strategy recolor needs --fine".into()))?;
            let fine = load_cover(fine_path, space.len())?;
            finish_refinement(&recolor_refinement(&space, &cover, &fine)?, &space, out)
        }
        Strategy::Kuhn => {
            let lebesgue = match args.lebesgue {
                Some(l) => l,
                None => optimal_lebesgue(&space, &cover)?,
            };
            let mut k = euclidean_refine(&space, &cover, lebesgue)?;
            let sweep = kuhn_sweep(&k.grid, &space, args.seed, args.samples)?;
            let sweep_ok = sweep["ok"] == Value::Bool(true);
            if let Value::Object(params) = &mut k.refinement.params {
                params.insert("sampling".into(), sweep);
            }
            Ok(finish_refinement(&k.refinement, &space, out)? && sweep_ok)
        }
        Strategy::Decompose => {
            let pou = build_partition(&space, &cover, args.p)?;
            let params = default_params(cover.multiplicity())?;
            let d = disjoint_decomposition(&space, &pou, &params)?;
            emit(out, &d.to_json(space.len())?)?;
            Ok(d.families.iter().all(|f| f.separation > 0.0))
        }
    }
}

fn finish_refinement(r: &Refinement, space: &MetricSpace, out: Option<&Path>) -> Outcome {
    emit(out, &r.to_json(space)?)?;
    Ok(r.claims_hold(&r.measure(space)?))
}

/// Samples points in the bounding box of the cloud and checks that the hat
/// functions at each form a partition of unity over at most `n + 1` stars
/// with one weight at least `1 / (n + 1)`.
fn kuhn_sweep(grid: &KuhnGrid, space: &MetricSpace, seed: u64, samples: usize) -> Result<Value, Failure> {
    let coords = space.coords().ok_or(pou_core::Error::MissingCoords)?;
    let n = grid.dim();
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for c in coords {
        for i in 0..n {
            lo[i] = lo[i].min(c[i] - grid.spacing());
            hi[i] = hi[i].max(c[i] + grid.spacing());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum_error = 0.0f64;
    let mut min_top = f64::INFINITY;
    let mut max_stars = 0;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|i| rng.gen_range(lo[i]..=hi[i])).collect();
        let stars = grid.star_membership(&x)?;
        let mut total = 0.0;
        let mut top = 0.0f64;
        for z in &stars {
            let w = grid.hat_value_at(z, &x)?;
            total += w;
            top = top.max(w);
        }
        sum_error = sum_error.max((total - 1.0).abs());
        min_top = min_top.min(top);
        max_stars = max_stars.max(stars.len());
    }
    let ok = sum_error <= 1e-12 && max_stars <= n + 1 && (samples == 0 || min_top >= 1.0 / (n as f64 + 1.0));
    Ok(json!({
        "seed": seed,
        "samples": samples,
        "max_sum_error": sum_error,
        "min_top_weight": if samples == 0 { Value::Null } else { json!(min_top) },
        "max_stars": max_stars,
        "ok": ok,
    }))
}

fn nerve(args: NerveArgs) -> Outcome {
    let (space, cover) = load(&args.input)?;
    let pou = build_partition(&space, &cover, args.p)?;
    let nerve = build_nerve(&pou);
    let pre = preimage_diameters(&space, &pou, &nerve);
    emit(args.out.as_deref(), &nerve_to_json(&nerve, &pre)?)?;
    Ok(pre.iter().all(|p| p.inside_members && p.diameter <= p.member_bound))
}

fn bounds(args: BoundsArgs) -> Outcome {
    let (m, lebesgue) = match (&args.space, &args.cover) {
        (Some(space), Some(cover)) => {
            let (space, cover) = load(&Input {
                space: space.clone(),
                cover: cover.clone(),
            })?;
            (cover.multiplicity(), optimal_lebesgue(&space, &cover)?)
        }
        _ => match (args.multiplicity, args.lebesgue) {
            (Some(m), Some(l)) => (m, l),
            _ => return Err(Failure("give --space and --cover, or -M and --lebesgue".into())),
        },
    };
    let b = theoretical_bounds(m, lebesgue, args.p, args.q, args.amp)?;
    emit(args.out.as_deref(), &to_json(&b)?)?;
    Ok(true)
}
