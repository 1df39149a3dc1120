//! `circlepack`: primal-dual circle packings of plane graphs.
//!
//! Exit codes are a stable contract: 0 when the solve converged, 2 when
//! the input is invalid, 3 when the solver or layout did not converge.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use circlepack::solver::{LinearSolver, Mode};
use circlepack_cli::gen::{generate_stacked, generate_stacked_deep};
use circlepack_cli::instance::{instance_file, parse_instance, serialize_instance};
use circlepack_cli::pipeline::{run_pack, run_pdpack, PipelineError, RunConfig, RunOutput};
use circlepack_cli::solution::serialize_solution;
use circlepack_cli::svg::render_svg;

const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser)]
#[command(name = "circlepack", version, about = "Primal-dual circle packings of plane graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pack a planar triangulation: primal and dual circles.
    Pdpack(RunArgs),
    /// Pack any 2-connected simple plane graph: primal circles only.
    Pack(RunArgs),
    /// Generate a random stacked-triangulation instance.
    GenStacked(GenArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Instance file, JSON or whitespace text.
    input: PathBuf,
    /// Where to write the solution JSON (stdout by default).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Angle-residual target (default scales with instance size).
    #[arg(long)]
    tol: Option<f64>,
    /// Newton iteration budget.
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = LinsolveArg::Pcg)]
    linsolve: LinsolveArg,
    /// Also render the packing to an SVG file.
    #[arg(long, value_name = "PATH")]
    svg: Option<PathBuf>,
    /// Leave the dual circles out of the SVG.
    #[arg(long)]
    no_duals: bool,
    /// Brute-force global overlap audit (instances up to 1000 vertices).
    #[arg(long)]
    check_overlap: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Vertex count, at least 4.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Always split the newest face instead of a random one.
    #[arg(long)]
    deep: bool,
    /// Where to write the instance JSON (stdout by default).
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Plain,
    Regularized,
}

#[derive(Clone, Copy, ValueEnum)]
enum LinsolveArg {
    Pcg,
    Cholesky,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Pdpack(args) => run(args, run_pdpack),
        Command::Pack(args) => run(args, run_pack),
        Command::GenStacked(args) => generate(args),
    }
}

fn run(
    args: RunArgs,
    driver: fn(
        &circlepack_cli::instance::Instance,
        &RunConfig,
    ) -> Result<RunOutput, PipelineError>,
) -> ExitCode {
    let text = match std::fs::read_to_string(&args.input) {
        Ok(text) => text,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.input.display());
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };
    let inst = match parse_instance(&text) {
        Ok(inst) => inst,
        Err(e) => {
            eprintln!("error: {}: {e}", args.input.display());
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    };

    let cfg = RunConfig {
        tol: args.tol,
        max_iter: args.max_iter,
        mode: match args.mode {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Regularized => Mode::Regularized,
        },
        linear_solver: match args.linsolve {
            LinsolveArg::Pcg => LinearSolver::PcgJacobi,
            LinsolveArg::Cholesky => LinearSolver::SparseCholesky,
        },
        check_overlap: args.check_overlap,
    };

    let out = match driver(&inst, &cfg) {
        Ok(out) => out,
        Err(PipelineError::Graph(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
        Err(e @ PipelineError::Unplaced(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NOT_CONVERGED);
        }
    };

    let stats = &out.solution.report.solver;
    eprintln!(
        "{} vertices, {} Newton iterations, residual {:.3e}, {:.3}s",
        out.solution.report.n_h_vertices,
        stats.outer_iterations,
        stats.final_residual,
        out.solve.wall_time
    );

    if let Err(e) = emit(args.output.as_deref(), &serialize_solution(&out.solution)) {
        eprintln!("error: writing solution: {e}");
        return ExitCode::from(EXIT_INVALID_INPUT);
    }
    if let Some(path) = &args.svg {
        let doc = render_svg(&out.solution, !args.no_duals);
        if let Err(e) = std::fs::write(path, doc) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_INVALID_INPUT);
        }
    }

    if out.converged() {
        ExitCode::SUCCESS
    } else {
        eprintln!("error: did not reach the residual target");
        ExitCode::from(EXIT_NOT_CONVERGED)
    }
}

fn generate(args: GenArgs) -> ExitCode {
    if args.n < 4 {
        eprintln!("error: stacked triangulations need at least 4 vertices");
        return ExitCode::from(EXIT_INVALID_INPUT);
    }
    let inst =
        if args.deep { generate_stacked_deep(args.n) } else { generate_stacked(args.n, args.seed) };
    let file = instance_file(&inst.graph, &inst.outer, Some(inst.labels.clone()));
    match emit(args.output.as_deref(), &serialize_instance(&file)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: writing instance: {e}");
            ExitCode::from(EXIT_INVALID_INPUT)
        }
    }
}

fn emit(path: Option<&Path>, content: &str) -> std::io::Result<()> {
    match path {
        Some(path) => std::fs::write(path, content),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(content.as_bytes())
        }
    }
}
