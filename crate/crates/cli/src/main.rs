//! `duosched` — two-processor scheduling of depth-two task graphs from the
//! command line.
//!
//! Subcommands cover the whole toolchain: `solve` runs the linear-time
//! scheduler, `oracle` brute-forces small instances exactly, `verify`
//! checks a schedule document against its instance, `gen` produces
//! instance corpora, `compare` sweeps the scheduler against the oracle,
//! and `bench` measures scaling. Exit codes: 0 success, 1 when a schedule
//! is infeasible / out of bounds or a comparison found mismatches, 2 on
//! usage and parse errors.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use duosched::{
    check_bounds, check_feasible, compare, enumerate_instances, optimal_schedule_with_limit,
    random_instance, schedule_depth_two, DepthTwoDag, Violation, ORACLE_VERTEX_LIMIT,
};
use duosched_cli::gantt::render_gantt;
use duosched_cli::io::{
    parse_instance, InstanceDocument, InstanceFormat, ReportRow, ScheduleDocument, ScheduleFlags,
};

#[derive(Parser)]
#[command(name = "duosched", version, about = "Optimal two-processor schedules for depth-two task graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Schedule an instance and print the result.
    Solve {
        /// Instance file (.json canonical, .dot edge list).
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
        /// Show the reversed-time frame the construction works in.
        #[arg(long)]
        reverse_view: bool,
    },
    /// Exhaustively find an optimal schedule for a small instance.
    Oracle {
        file: PathBuf,
        /// Vertex-count limit guarding the exponential search.
        #[arg(long, default_value_t = ORACLE_VERTEX_LIMIT)]
        limit: usize,
    },
    /// Check a schedule document against its instance.
    Verify {
        instance: PathBuf,
        schedule: PathBuf,
    },
    /// Generate instances: one random instance, or a whole exhaustive family.
    Gen(GenArgs),
    /// Run the scheduler and the oracle over a corpus and report agreement.
    Compare(CompareArgs),
    /// Time the scheduler on random instances and print a CSV.
    Bench {
        /// Total vertex counts, e.g. 10000,100000,1000000.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Extra-edge probability; default targets roughly 4n edges.
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Gantt,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    na: usize,
    #[arg(long)]
    nb: usize,
    #[arg(long)]
    nc: usize,
    /// Probability for each optional edge beyond the mandatory ones.
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Emit every valid instance of this shape, one JSON object per line.
    #[arg(long, conflicts_with_all = ["p", "seed"])]
    exhaustive: bool,
}

#[derive(Args)]
struct CompareArgs {
    /// Sweep every valid instance with level sizes 1..=K each.
    #[arg(long, requires = "max_per_level", conflicts_with_all = ["random", "sizes"])]
    exhaustive: bool,
    #[arg(long, value_name = "K")]
    max_per_level: Option<usize>,
    /// Number of random instances per size.
    #[arg(long, value_name = "N", requires = "sizes")]
    random: Option<usize>,
    /// Total vertex counts for random instances.
    #[arg(long, value_delimiter = ',')]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write one JSON record per instance to this file.
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve { file, format, reverse_view } => cmd_solve(&file, format, reverse_view),
        Command::Oracle { file, limit } => cmd_oracle(&file, limit),
        Command::Verify { instance, schedule } => cmd_verify(&instance, &schedule),
        Command::Gen(args) => cmd_gen(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Bench { sizes, p, seed } => cmd_bench(&sizes, p, seed),
    }
}

fn load_instance(path: &Path) -> Result<DepthTwoDag> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_instance(&text, InstanceFormat::from_path(path))
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(g)
}

/// One diagnostic line per violation: a stable kind tag, then the facts
/// with vertex names resolved against the instance.
fn describe_violation(g: &DepthTwoDag, v: &Violation) -> String {
    let name = |v: &duosched::VertexId| g.name(*v);
    match v {
        Violation::MissingVertex { vertex } => {
            format!("MissingVertex: {} has no slot", name(vertex))
        }
        Violation::TimeOutOfRange { vertex, time } => {
            format!("TimeOutOfRange: {} sits at invalid time {}", name(vertex), time)
        }
        Violation::SlotCollision { time, processor, first, second } => format!(
            "SlotCollision: slot ({time}, {processor}) holds both {} and {}",
            name(first),
            name(second)
        ),
        Violation::SameProcessorGap { from, from_time, to, to_time } => format!(
            "SameProcGap: {} runs at {} and its successor {} already at {} on the same processor",
            name(from),
            from_time,
            name(to),
            to_time
        ),
        Violation::CrossProcessorGap { from, from_time, to, to_time } => format!(
            "CrossProcGap: {} runs at {} and its successor {} at {} across processors, within communication distance",
            name(from),
            from_time,
            name(to),
            to_time
        ),
    }
}

fn cmd_solve(file: &Path, format: OutputFormat, reverse_view: bool) -> Result<ExitCode> {
    let g = load_instance(file)?;
    if g.a_level().is_empty() || g.b_level().is_empty() || g.c_level().is_empty() {
        eprintln!("note: degenerate instance (an empty level); scheduling the remaining layers");
    }
    let s = match schedule_depth_two(&g) {
        Ok(s) => s,
        Err(err) => {
            eprintln!("scheduling failed: {err}");
            return Ok(ExitCode::from(1));
        }
    };
    let violations = check_feasible(&g, &s);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{}", describe_violation(&g, v));
        }
        return Ok(ExitCode::from(1));
    }
    // The optimality claim is only printed when the §2-style bound check
    // also passes, so the claim never outruns what `verify` would confirm.
    let bounds = check_bounds(&g, &s);
    let flags = ScheduleFlags { optimal_claimed: bounds.within(), fallback: false };
    let view = if reverse_view { s.time_reversed() } else { s };
    match format {
        OutputFormat::Json => println!("{}", ScheduleDocument::from_schedule(&g, &view, flags).to_json()),
        OutputFormat::Gantt => println!("{}", render_gantt(&g, &view)),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(file: &Path, limit: usize) -> Result<ExitCode> {
    let g = load_instance(file)?;
    let s = optimal_schedule_with_limit(&g, limit).context("oracle")?;
    let flags = ScheduleFlags { optimal_claimed: true, fallback: false };
    println!("{}", ScheduleDocument::from_schedule(&g, &s, flags).to_json());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(instance: &Path, schedule: &Path) -> Result<ExitCode> {
    let g = load_instance(instance)?;
    let text = fs::read_to_string(schedule)
        .with_context(|| format!("reading {}", schedule.display()))?;
    let doc = ScheduleDocument::from_json(&text)
        .with_context(|| format!("parsing {}", schedule.display()))?;
    let s = doc.to_schedule(&g).context("binding schedule to instance")?;

    let violations = check_feasible(&g, &s);
    for v in &violations {
        println!("{}", describe_violation(&g, v));
    }
    let bounds = check_bounds(&g, &s);
    if violations.is_empty() && bounds.within() {
        println!(
            "feasible: makespan {} for {} vertices, within [{}, {}]",
            bounds.makespan, bounds.vertex_count, bounds.lower, bounds.upper
        );
        return Ok(ExitCode::SUCCESS);
    }
    if violations.is_empty() {
        println!(
            "BoundViolation: makespan {} for {} vertices, outside [{}, {}]",
            bounds.makespan, bounds.vertex_count, bounds.lower, bounds.upper
        );
    }
    Ok(ExitCode::from(1))
}

fn cmd_gen(args: &GenArgs) -> Result<ExitCode> {
    if args.nc > 0 && args.nb == 0 {
        bail!("sinks need a middle level: --nc {} with --nb 0", args.nc);
    }
    if args.exhaustive {
        let family = enumerate_instances(args.na, args.nb, args.nc).context("enumerating")?;
        let stdout = std::io::stdout();
        let mut out = BufWriter::new(stdout.lock());
        for g in family {
            let doc = InstanceDocument::from_dag(&g);
            writeln!(out, "{}", serde_json::to_string(&doc)?)?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    if !(0.0..=1.0).contains(&args.p) {
        bail!("--p must be within [0, 1], got {}", args.p);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let g = random_instance(&mut rng, args.na, args.nb, args.nc, args.p);
    let mut doc = InstanceDocument::from_dag(&g);
    doc.metadata = Some(
        [
            ("generator".to_string(), serde_json::json!("random")),
            ("p".to_string(), serde_json::json!(args.p)),
            ("seed".to_string(), serde_json::json!(args.seed)),
        ]
        .into_iter()
        .collect(),
    );
    println!("{}", doc.to_json());
    Ok(ExitCode::SUCCESS)
}

/// Splits a total vertex count into levels: one random cut for A|B, one for
/// B|C, keeping the middle level non-empty.
fn random_shape<R: Rng>(rng: &mut R, n: usize) -> (usize, usize, usize) {
    if n <= 1 {
        return (0, n, 0);
    }
    let first = rng.gen_range(1..n);
    let second = rng.gen_range(first + 1..=n);
    (first, second - first, n - second)
}

fn cmd_compare(args: &CompareArgs) -> Result<ExitCode> {
    let mut instances: Vec<DepthTwoDag> = Vec::new();
    if args.exhaustive {
        let k = args.max_per_level.expect("clap enforces --max-per-level");
        for na in 1..=k {
            for nb in 1..=k {
                for nc in 1..=k {
                    instances.extend(
                        enumerate_instances(na, nb, nc)
                            .with_context(|| format!("enumerating {na}x{nb}x{nc}"))?,
                    );
                }
            }
        }
    } else if let Some(count) = args.random {
        if !(0.0..=1.0).contains(&args.p) {
            bail!("--p must be within [0, 1], got {}", args.p);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        for &size in &args.sizes {
            for _ in 0..count {
                let (na, nb, nc) = random_shape(&mut rng, size);
                instances.push(random_instance(&mut rng, na, nb, nc, args.p));
            }
        }
    } else {
        bail!("pick a corpus: --exhaustive --max-per-level K, or --random N --sizes ...");
    }

    // `compare` consumes the batch in order, so records and skips line up
    // with a fresh pass over the same instances for report serialization.
    let report = compare(instances.iter().cloned());
    if let Some(path) = &args.report {
        let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        let mut records = report.records.iter().peekable();
        for g in &instances {
            let digest = g.digest();
            if records.peek().is_some_and(|r| r.digest == digest) {
                let row = ReportRow::new(records.next().unwrap(), g);
                writeln!(out, "{}", serde_json::to_string(&row)?)?;
            }
        }
    }
    for skip in &report.skipped {
        eprintln!(
            "skipped {} ({} vertices): {}",
            skip.digest, skip.vertex_count, skip.error
        );
    }
    for dev in &report.deviations {
        println!(
            "mismatch {}: algorithm {} vs oracle {}",
            dev.record.digest,
            dev.record
                .algorithm_makespan
                .map_or_else(|| "failed".to_string(), |m| m.to_string()),
            dev.record.oracle_makespan,
        );
    }
    println!(
        "compared {} instances: {} matching, {} mismatching, {} skipped",
        report.instances(),
        report.matching,
        report.deviations.len(),
        report.skipped.len(),
    );
    if report.all_match() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

/// Splits a bench size into thirds, remainder to the middle level.
fn thirds(n: usize) -> (usize, usize, usize) {
    let na = n / 3;
    let nc = n / 3;
    (na, n - na - nc, nc)
}

/// Extra-edge probability aiming for about `4n` edges total, counting the
/// mandatory predecessor edges the generator always inserts.
fn density_for_target(na: usize, nb: usize, nc: usize) -> f64 {
    let pairs = (na * nb + nb * nc) as f64;
    if pairs == 0.0 {
        return 0.0;
    }
    let n = (na + nb + nc) as f64;
    let mandatory = (if na > 0 { nb } else { 0 } + nc) as f64;
    ((4.0 * n - mandatory) / pairs).clamp(0.0, 1.0)
}

fn cmd_bench(sizes: &[usize], p: Option<f64>, seed: u64) -> Result<ExitCode> {
    const INSTANCES_PER_SIZE: usize = 3;
    if let Some(p) = p {
        if !(0.0..=1.0).contains(&p) {
            bail!("--p must be within [0, 1], got {p}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    println!("size,instances,total_ms,ms_per_instance,edges");
    for &size in sizes {
        let (na, nb, nc) = thirds(size);
        let density = p.unwrap_or_else(|| density_for_target(na, nb, nc));
        // Generate, then time, one instance at a time: only scheduling is
        // measured, and every size starts from the same cache state.
        let mut edges = 0usize;
        let mut total_ms = 0.0f64;
        for _ in 0..INSTANCES_PER_SIZE {
            let g = random_instance(&mut rng, na, nb, nc, density);
            edges += g.edge_count();
            let start = Instant::now();
            let s = schedule_depth_two(&g)
                .with_context(|| format!("scheduling a size-{size} instance"))?;
            std::hint::black_box(s.makespan());
            total_ms += start.elapsed().as_secs_f64() * 1e3;
        }
        println!(
            "{size},{INSTANCES_PER_SIZE},{total_ms:.3},{:.3},{edges}",
            total_ms / INSTANCES_PER_SIZE as f64,
        );
    }
    Ok(ExitCode::SUCCESS)
}
