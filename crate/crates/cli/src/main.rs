//! `gridpair`: generate, route, verify and summarize demand instances on
//! complete grid graphs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gridpair_core::generate::{generate, GenMode};
use gridpair_core::io::{parse_instance, parse_routing, write_instance, write_routing};
use gridpair_core::{solve_with_report, verify, DemandGraph, Error, GridSpec, SolveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

mod exit {
    pub const VERIFY_FAILED: u8 = 1;
    pub const INFEASIBLE_BUDGET: u8 = 2;
    pub const BASE_EXHAUSTED: u8 = 3;
    pub const ROUTE_INVALID: u8 = 4;
    pub const BAD_INPUT: u8 = 5;
    pub const USAGE: u8 = 64;
}

#[derive(Parser, Debug)]
#[command(
    name = "gridpair",
    version,
    about = "Edge-disjoint demand routing in complete grids K_t^n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random instance file.
    Gen(GenArgs),
    /// Route an instance and write a routing file.
    Route(RouteArgs),
    /// Check a routing against its instance.
    Verify(CheckArgs),
    /// Print routing statistics.
    Stats(CheckArgs),
    /// Time generation and routing over several seeds.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Pairing,
    Multigraph,
}

#[derive(Args, Debug)]
struct SeedArg {
    /// Seed for all randomized choices.
    #[arg(long, env = "GRIDPAIR_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(short = 't', long)]
    t: usize,
    #[arg(short = 'n', long)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Pairing)]
    mode: Mode,
    /// Maximum demand degree in multigraph mode.
    #[arg(short = 'q', long)]
    q: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    /// Allow q above floor(t/6) - 1.
    #[arg(long)]
    unchecked: bool,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RouteArgs {
    instance: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Route best-effort outside the guaranteed degree budget.
    #[arg(long)]
    unchecked: bool,
    /// Worker threads for independent subproblems.
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    /// Permute the 2-factors before assigning them to layers.
    #[arg(long)]
    shuffle_factors: bool,
    /// Remove closed sub-walks from the final trails.
    #[arg(long)]
    simplify: bool,
}

#[derive(Args, Debug)]
struct CheckArgs {
    instance: PathBuf,
    routing: PathBuf,
    /// Emit the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(short = 't', long, default_value_t = 18)]
    t: usize,
    #[arg(short = 'n', long, default_value_t = 2)]
    n: usize,
    #[arg(long, value_enum, default_value_t = Mode::Pairing)]
    mode: Mode,
    #[arg(short = 'q', long)]
    q: Option<usize>,
    /// Number of seeded instances.
    #[arg(long, default_value_t = 10)]
    seeds: u64,
    #[arg(long)]
    jobs: Option<usize>,
    #[command(flatten)]
    seed: SeedArg,
    #[arg(long)]
    unchecked: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Route(a) => cmd_route(a),
        Command::Verify(a) => cmd_check(a, false),
        Command::Stats(a) => cmd_check(a, true),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleBudget { .. } => exit::INFEASIBLE_BUDGET,
            Error::BaseSolverExhausted { .. } => exit::BASE_EXHAUSTED,
            Error::Parse { .. } => exit::BAD_INPUT,
            Error::Generator(_) | Error::InvalidGrid { .. } | Error::Overflow(_) => exit::USAGE,
            _ => exit::ROUTE_INVALID,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: exit::BAD_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure {
        code: exit::BAD_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn load_instance(path: &Path) -> Result<DemandGraph, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure {
        code: exit::BAD_INPUT,
        message: format!("{}: {e}", path.display()),
    })
}

fn gen_mode(mode: Mode, q: Option<usize>) -> Result<GenMode, Failure> {
    match (mode, q) {
        (Mode::Pairing, _) => Ok(GenMode::Pairing),
        (Mode::Multigraph, Some(q)) => Ok(GenMode::Multigraph { q }),
        (Mode::Multigraph, None) => Err(Failure {
            code: exit::USAGE,
            message: "multigraph mode needs --q".into(),
        }),
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8, Failure> {
    let spec = GridSpec::new(a.t, a.n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed.seed);
    let d = generate(spec, gen_mode(a.mode, a.q)?, a.unchecked, &mut rng)?;
    let text = write_instance(&d);
    match a.output {
        Some(path) => write(&path, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn cmd_route(a: RouteArgs) -> Result<u8, Failure> {
    let d = load_instance(&a.instance)?;
    let opts = SolveOptions {
        seed: a.seed.seed,
        jobs: a.jobs,
        unchecked: a.unchecked,
        shuffle_factors: a.shuffle_factors,
        simplify: a.simplify,
        ..Default::default()
    };
    let started = Instant::now();
    let (routing, report) = solve_with_report(&d, &opts)?;
    let elapsed = started.elapsed();
    let check = verify(d.spec(), &d, &routing);
    if !check.ok {
        eprint!("{}", check.render());
        return Err(Failure {
            code: exit::ROUTE_INVALID,
            message: "routing failed verification".into(),
        });
    }
    write(&a.output, &write_routing(&routing))?;
    eprintln!(
        "routed {} demands in {:.3}s (q = {}, max layer degree {}, max column degree {}, max trail length {})",
        routing.len(),
        elapsed.as_secs_f64(),
        report.q,
        report.max_layer_degree,
        report.max_column_degree,
        check.stats.max_trail_length
    );
    Ok(0)
}

fn cmd_check(a: CheckArgs, stats_only: bool) -> Result<u8, Failure> {
    let d = load_instance(&a.instance)?;
    let parsed = parse_routing(&read(&a.routing)?, d.spec()).map_err(|e| Failure {
        code: exit::BAD_INPUT,
        message: format!("{}: {e}", a.routing.display()),
    })?;
    if parsed.declared != parsed.routing.len() {
        eprintln!(
            "warning: header declares {} trails, file has {}",
            parsed.declared,
            parsed.routing.len()
        );
    }
    let report = verify(d.spec(), &d, &parsed.routing);
    if a.json {
        let value = if stats_only {
            serde_json::to_string_pretty(&report.stats)
        } else {
            serde_json::to_string_pretty(&report)
        };
        println!("{}", value.expect("report serializes"));
    } else if stats_only {
        if !report.ok {
            println!(
                "routing FAILED verification ({} violations)",
                report.violations.len()
            );
        }
        print!("{}", report.stats.render());
    } else {
        print!("{}", report.render());
    }
    Ok(if report.ok { 0 } else { exit::VERIFY_FAILED })
}

fn cmd_bench(a: BenchArgs) -> Result<u8, Failure> {
    let spec = GridSpec::new(a.t, a.n)?;
    let mode = gen_mode(a.mode, a.q)?;
    println!(
        "K_{}^{}: {} vertices, {} edges",
        a.t,
        a.n,
        spec.vertex_count(),
        spec.edge_count()?
    );
    let mut total = 0.0;
    let mut worst = 0usize;
    for i in 0..a.seeds {
        let seed = a.seed.seed.wrapping_add(i);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = generate(spec, mode, a.unchecked, &mut rng)?;
        let opts = SolveOptions {
            seed,
            jobs: a.jobs,
            unchecked: a.unchecked,
            ..Default::default()
        };
        let started = Instant::now();
        let (routing, _) = solve_with_report(&d, &opts)?;
        let secs = started.elapsed().as_secs_f64();
        let report = verify(&spec, &d, &routing);
        if !report.ok {
            return Err(Failure {
                code: exit::ROUTE_INVALID,
                message: format!("seed {seed}: routing failed verification"),
            });
        }
        worst = worst.max(report.stats.max_trail_length);
        total += secs;
        println!(
            "seed {seed}: {} demands, {:.3}s, max trail length {}",
            d.len(),
            secs,
            report.stats.max_trail_length
        );
    }
    if a.seeds > 0 {
        println!(
            "mean {:.3}s over {} seeds, max trail length {worst}",
            total / a.seeds as f64,
            a.seeds
        );
    }
    Ok(0)
}
