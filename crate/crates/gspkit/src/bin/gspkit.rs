//! Thin command-line front end. Exit codes: 0 ok, 1 verification failure,
//! 2 infeasible, 3 budget or caps exhausted.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use gspkit::gsp::instance::GspInstance;
use gspkit::harness::{
    gen_instance, render_svg, run_bench, verify_schedule, verify_selection, BenchConfig, GenSpec,
    MixWeights,
};
use gspkit::ratio::{parse_rat, rat_u64, Rat};
use gspkit::rcp::brute::BruteOutcome;
use gspkit::rcp::instance::{RcpInstance, Selection};
use gspkit::rcp::subproblem::Subproblem;
use gspkit::reduction::solve::{milestones_for, reduce_at_offset, solve_gsp, RcpMode, SolveError};

#[derive(Parser)]
#[command(name = "gspkit", version, about = "Preemptive single-machine scheduling via rectangle covering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance.
    Gen(GenArgs),
    /// Solve an instance end to end.
    Solve(SolveArgs),
    /// Emit the covering instance and its variable map for one offset.
    Reduce(ReduceArgs),
    /// Operate directly on covering instances.
    Rcp(RcpArgs),
    /// Check a solution artifact against its instance.
    Verify(VerifyArgs),
    /// Run the benchmark harness.
    Bench(BenchArgs),
    /// Render a covering instance as SVG.
    Render(RenderArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    p_max: u64,
    #[arg(long, default_value_t = 3)]
    r_max: u64,
    #[arg(long, default_value_t = 3)]
    w_max: u64,
    #[arg(long, default_value_t = 6)]
    d_max: u64,
    /// "mixed" or "tardiness"
    #[arg(long, default_value = "mixed")]
    objective: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// exact | approx-oracle | approx-exhaustive | tardiness
    #[arg(long, default_value = "exact")]
    mode: String,
    /// auto | tardiness (forces the tardiness pipeline)
    #[arg(long, default_value = "auto")]
    objective: String,
    #[arg(long, default_value_t = 100_000)]
    cap_guesses: u64,
    #[arg(long, default_value_t = 12)]
    cap_depth: u64,
    #[arg(long)]
    preprocess: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    #[arg(long, default_value_t = 1)]
    offset: u64,
    /// use the dyadic tardiness milestones
    #[arg(long)]
    tardiness: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct RcpArgs {
    #[command(subcommand)]
    command: RcpCommand,
}

#[derive(Subcommand)]
enum RcpCommand {
    /// Solve a covering instance.
    Solve(RcpSolveArgs),
}

#[derive(Args)]
struct RcpSolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// brute | dp | approx-oracle | approx-exhaustive | tardiness
    #[arg(long, default_value = "dp")]
    mode: String,
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// grid parameter for --mode tardiness (defaults to epsilon/32)
    #[arg(long)]
    delta: Option<String>,
    #[arg(long, default_value_t = 1 << 22)]
    budget: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// reference selection for oracle mode (defaults to an exact solve)
    #[arg(long)]
    reference: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    cap_guesses: u64,
    #[arg(long, default_value_t = 12)]
    cap_depth: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// covering instance JSON
    #[arg(long)]
    instance: Option<PathBuf>,
    /// selection JSON (sorted rectangle id list)
    #[arg(long)]
    selection: Option<PathBuf>,
    /// scheduling instance JSON
    #[arg(long)]
    gsp: Option<PathBuf>,
    /// schedule JSON
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "bench")]
    out_prefix: String,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    selection: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_out(path: &Option<PathBuf>, content: &str) {
    match path {
        Some(p) => fs::write(p, content).expect("write output"),
        None => println!("{content}"),
    }
}

fn eps_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s)
        .filter(|r| {
            use num_traits::Signed;
            r.is_positive() && *r <= Rat::from_integer(1.into())
        })
        .ok_or_else(|| format!("bad epsilon: {s}"))
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("GSPKIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Gen(args) => {
            let mix = if args.objective == "tardiness" {
                MixWeights::tardiness_only()
            } else {
                MixWeights::default()
            };
            let spec = GenSpec {
                n: args.n,
                p_max: args.p_max,
                r_max: args.r_max,
                mix,
                w_max: args.w_max,
                d_max: args.d_max,
                seed: args.seed,
            };
            let inst = gen_instance(&spec);
            write_out(&args.out, &serde_json::to_string_pretty(&inst).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve(args) => {
            let inst: GspInstance = read_json(&args.instance)?;
            let eps = eps_arg(&args.epsilon)?;
            let mode = match (args.mode.as_str(), args.objective.as_str()) {
                (_, "tardiness") | ("tardiness", _) => {
                    RcpMode::Tardiness { preprocess: args.preprocess }
                }
                ("exact", _) => RcpMode::Exact,
                ("approx-oracle", _) => RcpMode::ApproxOracle,
                ("approx-exhaustive", _) => RcpMode::ApproxExhaustive {
                    cap_guesses: args.cap_guesses,
                    cap_depth: args.cap_depth,
                },
                (other, _) => return Err(format!("unknown mode {other}")),
            };
            match solve_gsp(&inst, &eps, mode) {
                Ok(report) => {
                    let mut value = serde_json::to_value(&report).unwrap();
                    value["schedule"] = serde_json::to_value(&report.schedule).unwrap();
                    write_out(&args.out, &serde_json::to_string_pretty(&value).unwrap());
                    Ok(ExitCode::SUCCESS)
                }
                Err(SolveError::Infeasible) => {
                    eprintln!("infeasible");
                    Ok(ExitCode::from(2))
                }
                Err(SolveError::Budget(msg)) => {
                    eprintln!("budget exhausted: {msg}");
                    Ok(ExitCode::from(3))
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Reduce(args) => {
            let inst: GspInstance = read_json(&args.instance)?;
            let eps = eps_arg(&args.epsilon)?;
            let horizon = inst.horizon();
            let milestones = milestones_for(&inst, &eps, horizon, args.tardiness);
            let (rcp, vm) = reduce_at_offset(&inst, &eps, horizon, &milestones, args.offset)
                .map_err(|e| e.to_string())?;
            fs::write(&args.out, serde_json::to_string_pretty(&rcp).unwrap())
                .map_err(|e| e.to_string())?;
            let sidecar = args.out.with_extension("varmap.json");
            fs::write(&sidecar, serde_json::to_string_pretty(&vm).unwrap())
                .map_err(|e| e.to_string())?;
            eprintln!("wrote {} and {}", args.out.display(), sidecar.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Rcp(args) => match args.command {
            RcpCommand::Solve(args) => rcp_solve(args),
        },
        Command::Verify(args) => {
            let mut outcomes = Vec::new();
            if let (Some(ip), Some(sp)) = (&args.instance, &args.selection) {
                let inst: RcpInstance = read_json(ip)?;
                let sel: Selection = read_json(sp)?;
                outcomes.push(verify_selection(&inst, &sel));
            }
            if let (Some(gp), Some(sp)) = (&args.gsp, &args.schedule) {
                let inst: GspInstance = read_json(gp)?;
                let schedule: gspkit::gsp::edf::Schedule = read_json(sp)?;
                outcomes.push(verify_schedule(&inst, &schedule));
            }
            if outcomes.is_empty() {
                return Err("nothing to verify: pass --instance/--selection or --gsp/--schedule".into());
            }
            let ok = outcomes.iter().all(|o| o.ok);
            for o in &outcomes {
                for d in &o.diagnostics {
                    println!("{d}");
                }
            }
            if ok {
                println!("ok");
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Bench(args) => {
            let config: BenchConfig = read_json(&args.config)?;
            let report = run_bench(&config);
            let json_path = format!("{}.json", args.out_prefix);
            let csv_path = format!("{}.csv", args.out_prefix);
            fs::write(&json_path, serde_json::to_string_pretty(&report).unwrap())
                .map_err(|e| e.to_string())?;
            fs::write(&csv_path, report.to_csv()).map_err(|e| e.to_string())?;
            let failed: usize = report.rows.iter().map(|r| r.certificates_failed).sum();
            eprintln!("wrote {json_path} and {csv_path}; {failed} certificate failures");
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Render(args) => {
            let inst: RcpInstance = read_json(&args.instance)?;
            let sel: Option<Selection> = match &args.selection {
                Some(p) => Some(read_json(p)?),
                None => None,
            };
            let svg = render_svg(&inst, sel.as_ref());
            fs::write(&args.out, svg).map_err(|e| e.to_string())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn rcp_solve(args: RcpSolveArgs) -> Result<ExitCode, String> {
    let inst: RcpInstance = read_json(&args.instance)?;
    let eps = eps_arg(&args.epsilon)?;
    let diag = inst.validate();
    if !diag.errors.is_empty() {
        return Err(diag.errors.join("; "));
    }
    let exact = || -> Result<Option<(Selection, Rat)>, String> {
        match gspkit::rcp::exact::exact_solve(&inst, 16) {
            Ok(BruteOutcome::Optimal { selection, cost }) => Ok(Some((selection, cost))),
            Ok(BruteOutcome::Infeasible) => Ok(None),
            Err(e) => Err(e.to_string()),
        }
    };
    let outcome: Result<Option<(Selection, Rat)>, (u8, String)> = (|| match args.mode.as_str() {
        "brute" => match gspkit::rcp::brute::brute_force(&inst, args.budget) {
            Ok(BruteOutcome::Optimal { selection, cost }) => Ok(Some((selection, cost))),
            Ok(BruteOutcome::Infeasible) => Ok(None),
            Err(e) => Err((3, e.to_string())),
        },
        "dp" => exact().map_err(|e| (3, e)),
        "approx-oracle" => {
            let reference = match &args.reference {
                Some(path) => {
                    let sel: Selection = read_json(path).map_err(|e| (1, e))?;
                    sel
                }
                None => match exact().map_err(|e| (3, e))? {
                    Some((sel, _)) => sel,
                    None => return Ok(None),
                },
            };
            let root = Subproblem::root(&inst);
            if !root.is_feasible(&reference) {
                return Err((1, "reference selection is not feasible".into()));
            }
            let stats = inst.validate().stats;
            let mut ctx = gspkit::approx::Ctx::new(
                eps.clone(),
                stats.k_ratio,
                root.area.width().trailing_zeros() as u64,
            );
            match gspkit::approx::solve_oracle(&root, &reference, &mut ctx) {
                Ok(sel) => {
                    let cost = root.selection_cost(&sel);
                    let certs_ok = ctx.certs.iter().all(|c| c.all_ok());
                    eprintln!(
                        "{} recursion nodes, certificates {}",
                        ctx.certs.len(),
                        if certs_ok { "pass" } else { "FAIL" }
                    );
                    Ok(Some((sel, cost)))
                }
                Err(gspkit::approx::ApproxError::Infeasible) => Ok(None),
                Err(e) => Err((3, e.to_string())),
            }
        }
        "approx-exhaustive" => {
            let root = Subproblem::root(&inst);
            let stats = inst.validate().stats;
            let mut ctx = gspkit::approx::Ctx::new(
                eps.clone(),
                stats.k_ratio,
                root.area.width().trailing_zeros() as u64,
            );
            let mut budget = args.cap_guesses;
            match gspkit::approx::solve_exhaustive(
                &root,
                &mut ctx,
                gspkit::approx::Caps { guesses: args.cap_guesses, depth: args.cap_depth },
                &mut budget,
            ) {
                Ok((sel, cost)) => Ok(Some((sel, cost))),
                Err(gspkit::approx::ApproxError::Infeasible) => Ok(None),
                Err(e) => Err((3, e.to_string())),
            }
        }
        "tardiness" => {
            let delta = match &args.delta {
                Some(d) => parse_rat(d).ok_or_else(|| (1u8, format!("bad delta {d}")))?,
                None => eps.clone() / rat_u64(32),
            };
            let report = gspkit::rcp::structure::check_well_structured(&inst, &delta);
            if !report.ok {
                return Err((1, format!(
                    "instance is not on the dyadic grid: {}",
                    report.violations.join("; ")
                )));
            }
            match exact().map_err(|e| (3, e))? {
                None => Ok(None),
                Some((reference, _)) => {
                    let root = Subproblem::root(&inst);
                    let mut ctx = gspkit::tardiness::TardinessCtx { eps: eps.clone(), certs: Vec::new() };
                    match gspkit::tardiness::solve_tardiness_oracle(&root, &reference, &mut ctx) {
                        Ok(sel) => {
                            let cost = root.selection_cost(&sel);
                            let certs_ok = ctx.certs.iter().all(|c| c.all_ok());
                            eprintln!(
                                "{} recursion nodes, certificates {}",
                                ctx.certs.len(),
                                if certs_ok { "pass" } else { "FAIL" }
                            );
                            Ok(Some((sel, cost)))
                        }
                        Err(gspkit::tardiness::TardinessError::Infeasible(..)) => Ok(None),
                        Err(e) => Err((3, e.to_string())),
                    }
                }
            }
        }
        other => Err((1, format!("unknown mode {other}"))),
    })();
    match outcome {
        Ok(Some((sel, cost))) => {
            eprintln!("cost {}", gspkit::ratio::format_rat(&cost));
            write_out(&args.out, &serde_json::to_string(&sel).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Ok(None) => {
            eprintln!("infeasible");
            Ok(ExitCode::from(2))
        }
        Err((code, msg)) => {
            eprintln!("{msg}");
            Ok(ExitCode::from(code))
        }
    }
}
