//! Command-line front end: construct, simulate, verify, sweep, and search
//! dense-coding protocols from JSON descriptors.
//!
//! Exit codes: 0 success (or feasible), 1 honest negative (wrong
//! classification, search exhausted, no threshold), 2 usage, parse, or
//! bound errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use densecode::json::{
    protocol_from_json, protocol_to_json, search_result_to_json, state_from_json, ProtocolJson,
    StateJson,
};
use densecode::protocols::{
    deterministic_uniform_protocol, factorized_deterministic_protocol,
    saturated_unambiguous_protocol, subspace_protocol, tailored_protocol, Protocol,
};
use densecode::render;
use densecode::search::{
    phase_boundary, protocol_from_feasible_family, search_deterministic,
    search_deterministic_kraus, SearchConfig,
};
use densecode::verify::{
    check_info_bound, check_unambiguous_bounds, evaluate_bounds, simulate, Classification,
};
use densecode::{EntangledState, Error, Result, Tolerance};

#[derive(Parser)]
#[command(
    name = "densecode",
    version,
    about = "Deterministic and unambiguous dense coding over partially entangled states"
)]
struct Cli {
    /// Absolute tolerance (overrides DENSECODE_ABS_TOL).
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    /// Relative rank tolerance (overrides DENSECODE_RANK_TOL).
    #[arg(long, global = true)]
    rank_tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Constructor {
    DeterministicUniform,
    Saturated,
    Tailored,
    Subspace,
    Factorized,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound for a state and a channel dimension.
    Bounds {
        /// State JSON file: {"lambda_sq": [...]}.
        #[arg(long)]
        state: PathBuf,
        /// Channel dimension D.
        #[arg(long)]
        dchan: usize,
        /// Emit JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Construct a protocol (or load one), simulate it, and check bounds.
    Run {
        /// Named construction; omit when loading with --protocol.
        constructor: Option<Constructor>,
        /// State JSON file (constructions other than deterministic-uniform).
        #[arg(long)]
        state: Option<PathBuf>,
        /// Schmidt rank for the deterministic-uniform construction.
        #[arg(long)]
        dbar: Option<usize>,
        /// Channel dimension D.
        #[arg(long)]
        dchan: Option<usize>,
        /// Explicit protocol JSON to run instead of a constructor.
        #[arg(long)]
        protocol: Option<PathBuf>,
        /// Write the constructed protocol as JSON for replay.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Emit the report as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Load a protocol JSON, simulate it, and verify its classification.
    Verify {
        #[arg(long)]
        protocol: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Sweep bounds and saturated-protocol simulation over the coefficient
    /// simplex of a fixed rank; prints CSV.
    Sweep {
        #[arg(long)]
        dbar: usize,
        #[arg(long)]
        dchan: usize,
        /// Grid resolution: squared coefficients are multiples of
        /// 1/resolution.
        #[arg(long, default_value_t = 20)]
        resolution: usize,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Feasibility search for a deterministic protocol, or a boundary scan
    /// along a largest-coefficient path when --boundary-from/to are given.
    Search {
        /// State JSON file (point search).
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        dchan: usize,
        /// Number of messages to make deterministic.
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        max_iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Kraus operators per encoder (rank above channel only).
        #[arg(long)]
        kraus_budget: Option<usize>,
        /// Write the best family as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// On a feasible search, write the completed protocol JSON here
        /// for replay through `run --protocol` or `verify --protocol`.
        #[arg(long)]
        emit_protocol: Option<PathBuf>,
        /// Boundary scan: starting largest squared coefficient.
        #[arg(long)]
        boundary_from: Option<f64>,
        /// Boundary scan: final largest squared coefficient.
        #[arg(long)]
        boundary_to: Option<f64>,
        /// Rank of the states along the boundary path.
        #[arg(long, default_value_t = 2)]
        dbar: usize,
        /// Bisection resolution in the path parameter.
        #[arg(long, default_value_t = 0.04)]
        t_resolution: f64,
        /// Write boundary probes as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Apply the concentration (default) or truncation filter to a state.
    Concentrate {
        #[arg(long)]
        state: PathBuf,
        /// Use the truncation filter instead.
        #[arg(long)]
        truncate: bool,
        #[arg(long)]
        json: bool,
    },
}

fn tolerance_from(cli_abs: Option<f64>, cli_rank: Option<f64>) -> Result<Tolerance> {
    let env_f = |key: &str| -> Result<Option<f64>> {
        match std::env::var(key) {
            Ok(v) => v
                .parse::<f64>()
                .map(Some)
                .map_err(|_| Error::InvalidSearchConfig(format!("{key} is not a number: {v}"))),
            Err(_) => Ok(None),
        }
    };
    let default = Tolerance::default();
    let abs = cli_abs
        .or(env_f("DENSECODE_ABS_TOL")?)
        .unwrap_or(default.abs_tol);
    let rank = cli_rank
        .or(env_f("DENSECODE_RANK_TOL")?)
        .unwrap_or(default.rank_tol);
    Tolerance::new(abs, rank)
}

fn load_state(path: &Path) -> Result<EntangledState> {
    let text = std::fs::read_to_string(path)?;
    let j: StateJson = serde_json::from_str(&text)?;
    state_from_json(&j)
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn print_report_with_checks(
    p: &Protocol,
    tol: &Tolerance,
    as_json: bool,
) -> Result<Classification> {
    let report = simulate(p, tol)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print!("{}", render::report_text(&report));
        let info = check_info_bound(&report, &p.state, p.channel_dim);
        println!("{}", render::info_bound_text(&info));
        let bounds = check_unambiguous_bounds(&report, &p.state, tol);
        println!("{}", render::unambiguous_bounds_text(&bounds));
    }
    Ok(report.classification)
}

fn cmd_run(
    constructor: Option<Constructor>,
    state: Option<PathBuf>,
    dbar: Option<usize>,
    dchan: Option<usize>,
    protocol: Option<PathBuf>,
    emit: Option<PathBuf>,
    json: bool,
    tol: &Tolerance,
) -> Result<u8> {
    let (p, promise): (Protocol, Box<dyn Fn(Classification) -> bool>) =
        match (&protocol, constructor) {
            (Some(path), _) => {
                let text = std::fs::read_to_string(path)?;
                let j: ProtocolJson = serde_json::from_str(&text)?;
                let p = protocol_from_json(&j, tol)?;
                (p, Box::new(|c| c != Classification::Invalid))
            }
            (None, Some(ctor)) => {
                let dchan = dchan.ok_or_else(|| {
                    Error::InvalidProtocol("--dchan is required for constructions".into())
                })?;
                let need_state = || -> Result<EntangledState> {
                    let path = state.as_ref().ok_or_else(|| {
                        Error::InvalidProtocol("--state is required for this construction".into())
                    })?;
                    load_state(path)
                };
                match ctor {
                    Constructor::DeterministicUniform => {
                        let d_bar = match (dbar, &state) {
                            (Some(d), _) => d,
                            (None, Some(_)) => need_state()?.schmidt_rank(),
                            (None, None) => {
                                return Err(Error::InvalidProtocol(
                                    "--dbar or --state is required".into(),
                                ))
                            }
                        };
                        let p = deterministic_uniform_protocol(d_bar, dchan, tol)?;
                        (p, Box::new(|c| c == Classification::Deterministic))
                    }
                    Constructor::Saturated => {
                        let s = need_state()?;
                        let (p, _) = saturated_unambiguous_protocol(&s, dchan, None, tol)?;
                        (p, Box::new(|c| c != Classification::Invalid))
                    }
                    Constructor::Tailored => {
                        let s = need_state()?;
                        let p = tailored_protocol(&s, dchan, tol)?;
                        (p, Box::new(|c| c == Classification::Unambiguous))
                    }
                    Constructor::Subspace => {
                        let s = need_state()?;
                        let sp = subspace_protocol(&s, dchan, tol)?;
                        println!(
                            "leading-block probability = {:.6}; per-message success = {:.6}; \
                         doubly-weighted reading = {:.6}; readings agree: {}",
                            sp.p_m, sp.tau_each, sp.tau_literal, sp.literal_matches
                        );
                        (sp.protocol, Box::new(|c| c == Classification::Unambiguous))
                    }
                    Constructor::Factorized => {
                        let s = need_state()?;
                        let p = factorized_deterministic_protocol(&s, dchan, tol)?;
                        (p, Box::new(|c| c == Classification::Deterministic))
                    }
                }
            }
            (None, None) => {
                return Err(Error::InvalidProtocol(
                    "give a constructor name or --protocol <file>".into(),
                ))
            }
        };

    if let Some(path) = emit {
        std::fs::write(&path, serde_json::to_string_pretty(&protocol_to_json(&p))?)?;
    }
    let classification = print_report_with_checks(&p, tol, json)?;
    Ok(if promise(classification) { 0 } else { 1 })
}

/// Descending compositions of `total` into `parts` positive summands, in
/// lexicographically decreasing order.
fn descending_compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(
        total: usize,
        parts: usize,
        max: usize,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if parts == 1 {
            if total >= 1 && total <= max {
                prefix.push(total);
                out.push(prefix.clone());
                prefix.pop();
            }
            return;
        }
        let lo = total.div_ceil(parts);
        let hi = max.min(total - (parts - 1));
        for first in (lo..=hi).rev() {
            prefix.push(first);
            rec(total - first, parts - 1, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, total, &mut Vec::new(), &mut out);
    out
}

fn cmd_sweep(
    d_bar: usize,
    d_chan: usize,
    resolution: usize,
    csv: Option<PathBuf>,
    tol: &Tolerance,
) -> Result<u8> {
    if resolution < 2 || d_bar == 0 || d_chan == 0 {
        return Err(Error::InvalidSearchConfig(
            "sweep needs resolution >= 2 and positive dimensions".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(&render::sweep_csv_header(d_bar));
    out.push('\n');
    for comp in descending_compositions(resolution, d_bar) {
        let lambda_sq: Vec<f64> = comp.iter().map(|&m| m as f64 / resolution as f64).collect();
        let s = EntangledState::from_lambda_sq(&lambda_sq)?;
        let b = evaluate_bounds(&s, d_chan);
        let tau = if d_bar <= d_chan {
            let (p, _) = saturated_unambiguous_protocol(&s, d_chan, None, tol)?;
            let report = simulate(&p, tol)?;
            Some(report.mean_tau())
        } else {
            None
        };
        out.push_str(&render::sweep_csv_row(&lambda_sq, &b, tau));
        out.push('\n');
    }
    write_or_print(&csv, &out)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_search(
    state: Option<PathBuf>,
    d_chan: usize,
    l: usize,
    restarts: usize,
    max_iters: usize,
    seed: u64,
    kraus_budget: Option<usize>,
    out: Option<PathBuf>,
    emit_protocol: Option<PathBuf>,
    boundary: Option<(f64, f64)>,
    d_bar: usize,
    t_resolution: f64,
    csv: Option<PathBuf>,
    tol: &Tolerance,
) -> Result<u8> {
    let cfg = SearchConfig {
        restarts,
        max_iters,
        seed,
        ..SearchConfig::default()
    };

    if let Some((from, to)) = boundary {
        if d_bar < 2 {
            return Err(Error::InvalidSearchConfig(
                "boundary paths need rank >= 2".into(),
            ));
        }
        let path = move |t: f64| {
            let lead = from + (to - from) * t;
            let mut sq = vec![(1.0 - lead) / (d_bar - 1) as f64; d_bar];
            sq[0] = lead;
            EntangledState::from_lambda_sq(&sq).expect("valid path point")
        };
        let pb = phase_boundary(d_chan, l, path, &cfg, t_resolution)?;
        println!(
            "threshold t = {:.4} (width {:.4}), largest squared coefficient = {:.6}, bracketed: {}",
            pb.threshold_t,
            pb.interval_width,
            pb.threshold_state.largest_sq(),
            pb.bracketed
        );
        if let Some(p) = csv {
            std::fs::write(p, render::boundary_csv(&pb.probes))?;
        }
        return Ok(if pb.bracketed { 0 } else { 1 });
    }

    let path = state.ok_or_else(|| {
        Error::InvalidSearchConfig("--state is required for a point search".into())
    })?;
    let s = load_state(&path)?;
    let result = if s.schmidt_rank() <= d_chan {
        search_deterministic(&s, d_chan, l, &cfg)?
    } else {
        let budget = kraus_budget.unwrap_or_else(|| s.schmidt_rank().div_ceil(d_chan));
        search_deterministic_kraus(&s, d_chan, l, budget, &cfg)?
    };
    println!(
        "defect = {:.6e}  feasible = {}  iterations = {}  restarts = {}  seed = {}",
        result.defect, result.feasible, result.iterations_used, result.restarts, result.seed
    );
    if let Some(p) = out {
        std::fs::write(
            &p,
            serde_json::to_string_pretty(&search_result_to_json(&result))?,
        )?;
    }
    if let Some(p) = emit_protocol {
        if result.feasible {
            let protocol = protocol_from_feasible_family(&s, d_chan, &result.best_family, tol)?;
            std::fs::write(
                &p,
                serde_json::to_string_pretty(&protocol_to_json(&protocol))?,
            )?;
        } else {
            eprintln!("no protocol emitted: the search did not certify feasibility");
        }
    }
    Ok(if result.feasible { 0 } else { 1 })
}

fn cmd_concentrate(state: PathBuf, truncate: bool, json: bool, tol: &Tolerance) -> Result<u8> {
    let s = load_state(&state)?;
    let filter = if truncate {
        s.truncation_filter()?
    } else {
        s.concentration_filter()?
    };
    let (post, p) = filter.apply(&s, tol)?;
    if json {
        let value = serde_json::json!({
            "success_prob": filter.success_prob,
            "applied_prob": p,
            "post_lambda_sq": post.lambda_sq(),
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        println!(
            "filter: {}",
            if truncate {
                "truncation"
            } else {
                "concentration"
            }
        );
        println!("success probability = {:.6}", filter.success_prob);
        let sq: Vec<String> = post.lambda_sq().iter().map(|v| format!("{v:.6}")).collect();
        println!("post-success squared coefficients: [{}]", sq.join(", "));
    }
    Ok(0)
}

fn dispatch(cli: Cli) -> Result<u8> {
    let tol = tolerance_from(cli.abs_tol, cli.rank_tol)?;
    match cli.command {
        Command::Bounds { state, dchan, json } => {
            if dchan == 0 {
                return Err(Error::InvalidSearchConfig(
                    "channel dimension must be positive".into(),
                ));
            }
            let s = load_state(&state)?;
            let b = evaluate_bounds(&s, dchan);
            if json {
                println!("{}", serde_json::to_string_pretty(&b)?);
            } else {
                print!("{}", render::bounds_text(&b));
            }
            Ok(0)
        }
        Command::Run {
            constructor,
            state,
            dbar,
            dchan,
            protocol,
            emit,
            json,
        } => cmd_run(constructor, state, dbar, dchan, protocol, emit, json, &tol),
        Command::Verify { protocol, json } => {
            let text = std::fs::read_to_string(&protocol)?;
            let j: ProtocolJson = serde_json::from_str(&text)?;
            let p = protocol_from_json(&j, &tol)?;
            let classification = print_report_with_checks(&p, &tol, json)?;
            Ok(if classification == Classification::Invalid {
                1
            } else {
                0
            })
        }
        Command::Sweep {
            dbar,
            dchan,
            resolution,
            csv,
        } => cmd_sweep(dbar, dchan, resolution, csv, &tol),
        Command::Search {
            state,
            dchan,
            l,
            restarts,
            max_iters,
            seed,
            kraus_budget,
            out,
            emit_protocol,
            boundary_from,
            boundary_to,
            dbar,
            t_resolution,
            csv,
        } => {
            let boundary = match (boundary_from, boundary_to) {
                (Some(a), Some(b)) => Some((a, b)),
                (None, None) => None,
                _ => {
                    return Err(Error::InvalidSearchConfig(
                        "give both --boundary-from and --boundary-to".into(),
                    ))
                }
            };
            cmd_search(
                state,
                dchan,
                l,
                restarts,
                max_iters,
                seed,
                kraus_budget,
                out,
                emit_protocol,
                boundary,
                dbar,
                t_resolution,
                csv,
                &tol,
            )
        }
        Command::Concentrate {
            state,
            truncate,
            json,
        } => cmd_concentrate(state, truncate, json, &tol),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
