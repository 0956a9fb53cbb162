//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage, 2 input or output, 3 verification or
//! construction failure, 4 resource budget.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::factorization::{build_plan, TransformPlan};
use crate::formats::{self, Format};
use crate::oracle::verify_plan;
use crate::plan_io::{load_plan, save_plan};
use crate::spectral::{self, parse_components, project_op_bound, weights_op_bound};
use crate::transform::{forward, inverse, transform_op_bound, FunctionVector, OpCounter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

const BENCH_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Parser)]
#[command(name = "johnson-fft", version, about = "Fast Fourier transform on the Johnson graph J(n,k)")]
pub struct Cli {
    /// Worker threads for plan construction (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a plan and write it to a file
    Plan {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Forward or inverse transform of a file
    Transform {
        #[command(flatten)]
        source: PlanArgs,
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, value_enum, default_value_t = Direction::Forward)]
        direction: Direction,
    },
    /// Isotypic weights of a function
    Weights {
        #[command(flatten)]
        source: PlanArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Projection onto a set of isotypic components
    Project {
        #[command(flatten)]
        source: PlanArgs,
        #[command(flatten)]
        io: IoArgs,
        /// Comma-separated component indices, e.g. "0,1"
        #[arg(long)]
        components: String,
    },
    /// Check a plan against the dense oracle
    Verify {
        #[command(flatten)]
        source: PlanArgs,
    },
    /// Time plan construction and transforms on seeded random data
    Bench {
        #[command(flatten)]
        size: SizeArgs,
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
}

#[derive(Debug, Args)]
struct SizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

#[derive(Debug, Args)]
struct PlanArgs {
    /// Cached plan file
    #[arg(long)]
    plan: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Debug, Args)]
struct IoArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Forward,
    Inverse,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

/// Exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Argument(_) => EXIT_USAGE,
        Error::Dimension { .. } | Error::Parse { .. } | Error::Io(_) => EXIT_IO,
        Error::Construction { .. } | Error::Numeric(_) | Error::Oracle(_) => EXIT_VERIFY,
        Error::Resource(_) => EXIT_RESOURCE,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_RESOURCE;
        }
    };
    match pool.install(|| dispatch(cli.command, out)) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn obtain_plan(source: &PlanArgs) -> Result<TransformPlan> {
    match (&source.plan, source.n, source.k) {
        (Some(path), n, k) => {
            let plan = load_plan(path)?;
            if n.is_some_and(|n| n != plan.n()) || k.is_some_and(|k| k != plan.k()) {
                return Err(Error::argument(format!(
                    "plan file is for J({},{}), requested J({},{})",
                    plan.n(),
                    plan.k(),
                    n.unwrap_or(plan.n()),
                    k.unwrap_or(plan.k())
                )));
            }
            Ok(plan)
        }
        (None, Some(n), Some(k)) => build_plan(n, k),
        _ => Err(Error::argument("give --plan or both --n and --k")),
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut (dyn Write + Send)) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn ops_line(out: &mut (dyn Write + Send), what: &str, ops: u64, bound: u128) -> Result<()> {
    let mark = if u128::from(ops) <= bound { "within" } else { "EXCEEDS" };
    writeln!(out, "{what}: {ops} counted ops, bound {bound} ({mark})")?;
    Ok(())
}

fn dispatch(command: Command, out: &mut (dyn Write + Send)) -> Result<i32> {
    match command {
        Command::Plan { size, out: path } => {
            let start = Instant::now();
            let plan = build_plan(size.n, size.k)?;
            let elapsed = start.elapsed();
            save_plan(&plan, &path)?;
            writeln!(out, "J({},{}): dim {}, {} factors", plan.n(), plan.k(), plan.dim(), plan.factors().len())?;
            ops_line(out, "build", plan.build_ops(), 100 * plan.n() as u128 * plan.dim() as u128)?;
            writeln!(out, "built in {:.3} s, written to {}", elapsed.as_secs_f64(), path.display())?;
        }
        Command::Transform { source, io, direction } => {
            let plan = obtain_plan(&source)?;
            let format = io.format.map(Format::from);
            let out_format = Format::resolve(format, io.out.as_deref().unwrap_or(&io.input));
            let mut counter = OpCounter::new();
            let text = match direction {
                Direction::Forward => {
                    let f = formats::read_function(&io.input, format, &plan)?;
                    let c = forward(&plan, &f, &mut counter)?;
                    formats::render_coefficients(&plan, &c, out_format)
                }
                Direction::Inverse => {
                    let c = formats::read_coefficients(&io.input, format, &plan)?;
                    let f = inverse(&plan, &c, &mut counter)?;
                    formats::render_function(&plan, &f, out_format)
                }
            };
            emit(&text, io.out.as_deref(), out)?;
            if io.out.is_some() {
                let what = match direction {
                    Direction::Forward => "forward",
                    Direction::Inverse => "inverse",
                };
                ops_line(out, what, counter.count(), transform_op_bound(plan.n(), plan.k()))?;
            }
        }
        Command::Weights { source, input, format } => {
            let plan = obtain_plan(&source)?;
            let f = formats::read_function(&input, format.map(Format::from), &plan)?;
            let mut counter = OpCounter::new();
            let report = spectral::weights(&plan, &f, &mut counter)?;
            writeln!(out, "{:>3}  {:>12}  {:>22}  {:>8}", "a", "shape", "weight", "share")?;
            for (a, (w, s)) in report.weights.iter().zip(&report.shares).enumerate() {
                let shape = format!("({},{})", plan.n() - a, a);
                writeln!(out, "{a:>3}  {shape:>12}  {w:>22.15e}  {s:>8.4}")?;
            }
            writeln!(out, "total {:.15e}", report.total)?;
            ops_line(out, "weights", counter.count(), weights_op_bound(plan.n(), plan.k()))?;
        }
        Command::Project { source, io, components } => {
            let plan = obtain_plan(&source)?;
            let h = parse_components(&components, plan.max_component())?;
            let format = io.format.map(Format::from);
            let f = formats::read_function(&io.input, format, &plan)?;
            let mut counter = OpCounter::new();
            let g = spectral::project(&plan, &f, &h, &mut counter)?;
            let out_format = Format::resolve(format, io.out.as_deref().unwrap_or(&io.input));
            emit(&formats::render_function(&plan, &g, out_format), io.out.as_deref(), out)?;
            if io.out.is_some() {
                ops_line(out, "project", counter.count(), project_op_bound(plan.n(), plan.k()))?;
            }
        }
        Command::Verify { source } => {
            let plan = obtain_plan(&source)?;
            let report = verify_plan(&plan)?;
            writeln!(out, "{report}")?;
            return Ok(if report.all_passed() { EXIT_OK } else { EXIT_VERIFY });
        }
        Command::Bench { size, reps } => bench(size.n, size.k, reps.max(1), out)?,
    }
    Ok(EXIT_OK)
}

fn bench(n: usize, k: usize, reps: usize, out: &mut (dyn Write + Send)) -> Result<()> {
    let start = Instant::now();
    let plan = build_plan(n, k)?;
    let build = start.elapsed();
    let dim = plan.dim();
    let mut rng = StdRng::seed_from_u64(BENCH_SEED);
    let values: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let f = FunctionVector::new(n, k, values)?;

    let mut fwd_ops = OpCounter::new();
    let start = Instant::now();
    let mut c = forward(&plan, &f, &mut fwd_ops)?;
    for _ in 1..reps {
        c = forward(&plan, &f, &mut OpCounter::new())?;
    }
    let fwd_time = start.elapsed() / reps as u32;

    let mut inv_ops = OpCounter::new();
    let start = Instant::now();
    let mut g = inverse(&plan, &c, &mut inv_ops)?;
    for _ in 1..reps {
        g = inverse(&plan, &c, &mut OpCounter::new())?;
    }
    let inv_time = start.elapsed() / reps as u32;

    let mut w_ops = OpCounter::new();
    spectral::weights(&plan, &f, &mut w_ops)?;
    let mut p_ops = OpCounter::new();
    spectral::project(&plan, &f, &[0], &mut p_ops)?;

    let err = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    writeln!(out, "J({n},{k}): dim {dim}, seed {BENCH_SEED:#x}, {reps} reps")?;
    writeln!(out, "build   {:>12.3} ms", build.as_secs_f64() * 1e3)?;
    writeln!(out, "forward {:>12.3} ms", fwd_time.as_secs_f64() * 1e3)?;
    writeln!(out, "inverse {:>12.3} ms", inv_time.as_secs_f64() * 1e3)?;
    ops_line(out, "build", plan.build_ops(), 100 * n as u128 * dim as u128)?;
    ops_line(out, "forward", fwd_ops.count(), transform_op_bound(n, k))?;
    ops_line(out, "inverse", inv_ops.count(), transform_op_bound(n, k))?;
    ops_line(out, "weights", w_ops.count(), weights_op_bound(n, k))?;
    ops_line(out, "project", p_ops.count(), project_op_bound(n, k))?;
    writeln!(out, "round trip max error {err:.3e}")?;
    Ok(())
}
