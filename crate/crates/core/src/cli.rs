//! Command-line front end.
//!
//! Exit codes: 0 when every solve converged, 2 when a solve stopped without
//! converging (the report is still written), 1 on usage, input or solver
//! errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::generate::{generate_lp, generate_ot, generate_sdp};
use crate::io::{parse_instance, serialize_instance, solve_report, Instance, Report, ReportFormat};
use crate::model::{LpInstance, OtInstance, SdpInstance, SolverConfig};
use crate::optimizer::{solve_continuation, solve_lp, solve_sdp, EntropicProgram, Schedule};
use crate::oracle::{lp_vertex_solve, primal_bruteforce};
use crate::ot::{compare_ot, ot_to_lp, sinkhorn, SinkhornOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "entreg", version, about = "Entropy-regularized LP and SDP solver working on the explicit dual")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an LP instance through its dual.
    SolveLp(SolveArgs),
    /// Solve an SDP instance through its dual.
    SolveSdp(SolveArgs),
    /// Solve an OT instance through its LP reduction.
    SolveOt(SolveArgs),
    /// Solve an OT instance by Sinkhorn matrix scaling.
    Sinkhorn(SolveArgs),
    /// Solve an OT instance both ways and compare the results.
    CompareOt(SolveArgs),
    /// Solve an LP, SDP or OT instance along a decreasing ε schedule with warm starts.
    Continuation(SolveArgs),
    /// Write a random instance.
    Generate(GenerateArgs),
    /// Solve a small LP exactly by vertex enumeration and minimize the
    /// regularized primal directly.
    Oracle(SolveArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Regularization weight.
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true, value_parser = positive_f64)]
    epsilon: f64,
    /// Stop once the dual gradient sup-norm is at most this (Sinkhorn: ℓ¹
    /// marginal residual).
    #[arg(long, allow_negative_numbers = true, value_parser = positive_f64)]
    grad_tol: Option<f64>,
    /// Iteration cap [default: 500; Sinkhorn 100000].
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_iter: Option<u64>,
    /// Continuation schedule as `start,ratio,steps`.
    #[arg(long, default_value = "1,0.5,8", value_parser = parse_schedule)]
    schedule: Schedule,
    /// Report file; the report goes to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args, Debug)]
struct SolveArgs {
    /// Instance file.
    input: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Lp,
    Sdp,
    Ot,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// LP variables.
    #[arg(long, default_value_t = 10)]
    d: usize,
    /// Number of constraints (LP and SDP).
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// SDP matrix size.
    #[arg(long, default_value_t = 5)]
    n: usize,
    /// OT source size.
    #[arg(long, default_value_t = 3)]
    n1: usize,
    /// OT target size.
    #[arg(long, default_value_t = 3)]
    n2: usize,
    /// Leave out the all-ones (LP) or identity (SDP) first constraint.
    #[arg(long)]
    no_bounding_row: bool,
    /// Instance file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Keyvalue,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => ReportFormat::Text,
            Format::Keyvalue => ReportFormat::KeyValue,
        }
    }
}

fn positive_f64(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("must be a positive finite number, got {s}"))
    }
}

fn parse_schedule(s: &str) -> std::result::Result<Schedule, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [start, ratio, steps] = parts.as_slice() else {
        return Err(format!("expected `start,ratio,steps`, got `{s}`"));
    };
    let start: f64 = start.parse().map_err(|_| format!("bad schedule start `{start}`"))?;
    let ratio: f64 = ratio.parse().map_err(|_| format!("bad schedule ratio `{ratio}`"))?;
    let steps: usize = steps.parse().map_err(|_| format!("bad schedule step count `{steps}`"))?;
    Schedule::new(start, ratio, steps).map_err(|e| e.to_string())
}

impl Common {
    fn config(&self, base: SolverConfig) -> SolverConfig {
        let mut config = base;
        if let Some(tol) = self.grad_tol {
            config.grad_tol = tol;
        }
        if let Some(n) = self.max_iter {
            config.max_iter = n as usize;
        }
        config
    }

    fn sinkhorn_options(&self) -> SinkhornOptions {
        let defaults = SinkhornOptions::default();
        SinkhornOptions {
            tol: self.grad_tol.unwrap_or(defaults.tol),
            max_iter: self.max_iter.map_or(defaults.max_iter, |n| n as usize),
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInstance(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

fn expect_lp(inst: Instance) -> Result<LpInstance> {
    match inst {
        Instance::Lp(lp) => Ok(lp),
        other => Err(Error::InvalidInstance(format!("expected an LP instance, found {}", other.kind()))),
    }
}

fn expect_sdp(inst: Instance) -> Result<SdpInstance> {
    match inst {
        Instance::Sdp(sdp) => Ok(sdp),
        other => Err(Error::InvalidInstance(format!("expected an SDP instance, found {}", other.kind()))),
    }
}

fn expect_ot(inst: Instance) -> Result<OtInstance> {
    match inst {
        Instance::Ot(ot) => Ok(ot),
        other => Err(Error::InvalidInstance(format!("expected an OT instance, found {}", other.kind()))),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn continuation<P: EntropicProgram>(program: &P, common: &Common, config: SolverConfig) -> Result<(Report, bool)> {
    let results = solve_continuation(program, &common.schedule, &config);
    let mut report = Report::new();
    report.scalar("steps", results.len());
    let mut all_converged = true;
    for (k, result) in results.iter().enumerate() {
        let prefix = format!("step{}.", k + 1);
        match result {
            Ok(r) => {
                all_converged &= r.converged;
                report.extend_prefixed(&prefix, &solve_report(r));
            }
            Err(e) => {
                all_converged = false;
                report.scalar(&format!("{prefix}error"), e);
            }
        }
    }
    Ok((report, all_converged))
}

/// Runs one command; returns the report and whether everything converged.
fn execute(command: &Command) -> Result<(Report, bool)> {
    match command {
        Command::SolveLp(args) => {
            let lp = expect_lp(read_instance(&args.input)?)?;
            let r = solve_lp(&lp, &args.common.config(SolverConfig::lp(args.common.epsilon)))?;
            Ok((solve_report(&r), r.converged))
        }
        Command::SolveSdp(args) => {
            let sdp = expect_sdp(read_instance(&args.input)?)?;
            let r = solve_sdp(&sdp, &args.common.config(SolverConfig::sdp(args.common.epsilon)))?;
            Ok((solve_report(&r), r.converged))
        }
        Command::SolveOt(args) => {
            let ot = expect_ot(read_instance(&args.input)?)?;
            let (lp, shape) = ot_to_lp(&ot);
            let r = solve_lp(&lp, &args.common.config(SolverConfig::lp(args.common.epsilon)))?;
            let mut report = solve_report(&r);
            let x = r.primal_point.as_vector().expect("LP solve yields a vector");
            report.matrix("plan", &shape.plan(x)?);
            Ok((report, r.converged))
        }
        Command::Sinkhorn(args) => {
            let ot = expect_ot(read_instance(&args.input)?)?;
            let opts = args.common.sinkhorn_options();
            let sk = sinkhorn(&ot, args.common.epsilon, opts.tol, opts.max_iter)?;
            let mut report = Report::new();
            report
                .scalar("converged", sk.converged)
                .number("epsilon", args.common.epsilon)
                .number("value", sk.value)
                .scalar("iterations", sk.iterations)
                .matrix("plan", &sk.plan);
            Ok((report, sk.converged))
        }
        Command::CompareOt(args) => {
            let ot = expect_ot(read_instance(&args.input)?)?;
            let config = args.common.config(SolverConfig::lp(args.common.epsilon));
            let sinkhorn_opts = SinkhornOptions {
                max_iter: args
                    .common
                    .max_iter
                    .map_or(SinkhornOptions::default().max_iter, |n| n as usize),
                ..SinkhornOptions::default()
            };
            let cmp = compare_ot(&ot, &config, sinkhorn_opts)?;
            let mut report = Report::new();
            report
                .number("epsilon", args.common.epsilon)
                .number("dual_value", cmp.dual.dual_value)
                .number("sinkhorn_value", cmp.sinkhorn.value)
                .number("value_gap", cmp.value_gap)
                .number("plan_l1_distance", cmp.plan_l1)
                .scalar("dual_iterations", cmp.dual.iterations)
                .scalar("sinkhorn_iterations", cmp.sinkhorn.iterations)
                .scalar("dual_converged", cmp.dual.converged)
                .scalar("sinkhorn_converged", cmp.sinkhorn.converged)
                .number("dual_seconds", cmp.dual_time.as_secs_f64())
                .number("sinkhorn_seconds", cmp.sinkhorn_time.as_secs_f64())
                .matrix("dual_plan", &cmp.dual_plan)
                .matrix("sinkhorn_plan", &cmp.sinkhorn.plan);
            Ok((report, cmp.dual.converged && cmp.sinkhorn.converged))
        }
        Command::Continuation(args) => match read_instance(&args.input)? {
            Instance::Lp(lp) => continuation(&lp, &args.common, args.common.config(SolverConfig::default())),
            Instance::Sdp(sdp) => continuation(&sdp, &args.common, args.common.config(SolverConfig::sdp(1.0))),
            Instance::Ot(ot) => continuation(&ot_to_lp(&ot).0, &args.common, args.common.config(SolverConfig::default())),
        },
        Command::Oracle(args) => {
            let lp = expect_lp(read_instance(&args.input)?)?;
            let vertices = lp_vertex_solve(&lp)?;
            let brute = primal_bruteforce(&lp, args.common.epsilon)?;
            let mut report = Report::new();
            report
                .number("lp_optimal_value", vertices.optimal_value)
                .scalar("optimal_vertices", vertices.optimal_vertices.len())
                .number("epsilon", args.common.epsilon)
                .number("regularized_value", brute.value);
            for (k, v) in vertices.optimal_vertices.iter().enumerate() {
                report.vector(&format!("vertex{}", k + 1), v);
            }
            report.vector("x", &brute.point);
            Ok((report, true))
        }
        Command::Generate(_) => unreachable!("handled separately"),
    }
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let bounded = !args.no_bounding_row;
    let inst = match args.kind {
        Kind::Lp => Instance::Lp(generate_lp(args.seed, args.d, args.m, bounded)?.0),
        Kind::Sdp => Instance::Sdp(generate_sdp(args.seed, args.n, args.m, bounded)?.0),
        Kind::Ot => Instance::Ot(generate_ot(args.seed, args.n1, args.n2)?),
    };
    write_output(args.out.as_deref(), &serialize_instance(&inst))
}

fn common_of(command: &Command) -> Option<&Common> {
    match command {
        Command::SolveLp(a)
        | Command::SolveSdp(a)
        | Command::SolveOt(a)
        | Command::Sinkhorn(a)
        | Command::CompareOt(a)
        | Command::Continuation(a)
        | Command::Oracle(a) => Some(&a.common),
        Command::Generate(_) => None,
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    if let Command::Generate(args) = &cli.command {
        return match generate(args) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: {e}");
                EXIT_ERROR
            }
        };
    }
    let common = common_of(&cli.command).expect("solver commands carry common flags");
    let outcome = execute(&cli.command).and_then(|(report, converged)| {
        write_output(common.out.as_deref(), &report.render(common.format.into()))?;
        Ok(converged)
    });
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("warning: solver stopped before reaching the requested tolerance");
            EXIT_NOT_CONVERGED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
