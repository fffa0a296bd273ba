//! `hyperslender` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 inadmissible body, 3 weak-form
//! residual above threshold.

use crate::analysis::{converge, hsd_eigen, HsdState};
use crate::closed_forms::{solve, pressure_force_density, Problem, SolveConfig};
use crate::error::Error;
use crate::flow_state::{scaled_upstream, upstream};
use crate::geometry::{
    admissible_a3_with, admissible_a_with, admissible_b3_with, admissible_b_with, AdmissibilityOptions, BodyProfile,
};
use crate::output::{
    convergence_rows, parse_grid, render_csv, render_json, solution_rows, write_text, CONVERGENCE_HEADER,
};
use crate::quadrature::QuadratureConfig;
use crate::verifier::{classify, max_normalized, sample_bumps, verify_weak, BumpClass, DEFAULT_RESIDUAL_TOL};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_ADMISSIBLE: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const THREADS_ENV: &str = "HYPERSLENDER_THREADS";

#[derive(Parser, Debug)]
#[command(name = "hyperslender", version, about = "Radon measure solutions for hypersonic slender-body flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample weights and traces of a closed-form solution on a grid
    Solve {
        #[command(flatten)]
        flow: FlowArgs,
        /// start:end:count
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weak-form residuals against seeded bumps
    Verify {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = 50)]
        bumps: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 0.1)]
        radius_min: f64,
        #[arg(long, default_value_t = 0.5)]
        radius_max: f64,
        #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
        residual_tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Similarity-law sweep in tau at fixed K (problem A or A3)
    Converge {
        #[arg(long, default_value = "A")]
        problem: String,
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 5.0)]
        domain_end: f64,
        #[arg(long = "K")]
        k: f64,
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        /// comma-separated, e.g. 0.2,0.1,0.05,0.025
        #[arg(long, default_value = "0.2,0.1,0.05,0.025")]
        taus: String,
        /// start:end:count; default 1e-3:X:201
        #[arg(long)]
        grid: Option<String>,
        /// CSV path; rates go to the same path with a .json extension
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenstructure of the small-disturbance system at one state
    Eigen {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        u: f64,
        #[arg(long)]
        v: f64,
        #[arg(long = "E")]
        e: f64,
        #[arg(long, default_value_t = 1.4)]
        gamma: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Admissibility verdict of a body
    Admissible {
        #[command(flatten)]
        flow: FlowArgs,
        #[arg(long, default_value_t = crate::geometry::DEFAULT_ADMISSIBILITY_POINTS)]
        grid_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
struct FlowArgs {
    #[arg(long)]
    problem: String,
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 5.0)]
    domain_end: f64,
    #[arg(long = "K")]
    k: f64,
    #[arg(long, default_value_t = 1.4)]
    gamma: f64,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    rho_inf: Option<f64>,
    #[arg(long)]
    u_inf: Option<f64>,
}

/// Fully resolved flow parameters, echoed into every artifact.
#[derive(Debug, Clone, Serialize)]
struct ResolvedFlow {
    problem: Problem,
    profile: String,
    domain_end: f64,
    #[serde(rename = "K")]
    k: f64,
    gamma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rho_inf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    u_inf: Option<f64>,
}

struct Usage(String);

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u.0)
    }
}

type CliResult = std::result::Result<i32, Failure>;

impl FlowArgs {
    fn resolve(&self) -> std::result::Result<ResolvedFlow, Usage> {
        let problem: Problem = self.problem.parse().map_err(|e: Error| Usage(format!("--problem: {e}")))?;
        if problem.is_scaled() {
            for (flag, v) in [("--tau", self.tau), ("--rho-inf", self.rho_inf), ("--u-inf", self.u_inf)] {
                if v.is_some() {
                    return Err(Usage(format!(
                        "{flag} does not apply to problem {problem}, which is already scaled"
                    )));
                }
            }
        } else if self.tau.is_none() {
            return Err(Usage(format!("--tau is required for problem {problem}")));
        }
        Ok(ResolvedFlow {
            problem,
            profile: self.profile.clone(),
            domain_end: self.domain_end,
            k: self.k,
            gamma: self.gamma,
            tau: self.tau,
            rho_inf: (!problem.is_scaled()).then(|| self.rho_inf.unwrap_or(1.0)),
            u_inf: (!problem.is_scaled()).then(|| self.u_inf.unwrap_or(1.0)),
        })
    }
}

impl ResolvedFlow {
    fn body(&self) -> crate::Result<BodyProfile> {
        let p = BodyProfile::parse(&self.profile, self.domain_end)?;
        Ok(p)
    }
}

fn emit(config: &Value) {
    println!("{}", serde_json::to_string(config).expect("config serializes"));
}

fn sidecar(path: &Path) -> PathBuf {
    path.with_extension("json")
}

fn not_admissible_exit(e: Error) -> CliResult {
    match e {
        Error::NotAdmissible { .. } => {
            eprintln!("error: {e}");
            Ok(EXIT_NOT_ADMISSIBLE)
        }
        other => Err(Failure::Lib(other)),
    }
}

fn build_solution(flow: &ResolvedFlow, cfg: &SolveConfig) -> crate::Result<crate::closed_forms::MeasureSolution> {
    let body = flow.body()?;
    let scaled = scaled_upstream(flow.k, flow.gamma)?;
    let dim = match flow.tau {
        Some(t) => Some(upstream(
            flow.k,
            t,
            flow.gamma,
            flow.rho_inf.unwrap_or(1.0),
            flow.u_inf.unwrap_or(1.0),
        )?),
        None => None,
    };
    solve(flow.problem, &body, dim.as_ref(), &scaled, cfg)
}

fn cmd_solve(flow: FlowArgs, grid: Option<String>, out: Option<PathBuf>) -> CliResult {
    let flow = flow.resolve()?;
    let grid_spec = grid.unwrap_or_else(|| format!("0:{}:101", flow.domain_end));
    let cfg = SolveConfig::default();
    let config = json!({
        "command": "solve",
        "flow": flow,
        "grid": grid_spec,
        "quadrature": cfg.quad,
        "out": out,
    });
    emit(&config);
    let grid = parse_grid(&grid_spec).map_err(|e| Failure::Usage(format!("--grid: {e}")))?;
    let sol = match build_solution(&flow, &cfg) {
        Ok(s) => s,
        Err(e) => return not_admissible_exit(e),
    };
    let rows = solution_rows(&sol, &grid)?;
    if let Some(path) = &out {
        write_text(path, &render_csv(&config, sol.csv_header(), &rows))?;
    }
    let mid = grid[grid.len() / 2];
    let summary = json!({
        "rows": rows.len(),
        "admissibility": sol.verdict,
        "pressure_violations": sol.pressure_violations.len(),
        "force_density_at_mid_grid": pressure_force_density(&sol, mid)?,
    });
    println!("{summary}");
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    flow: FlowArgs,
    bumps: usize,
    seed: u64,
    radius_min: f64,
    radius_max: f64,
    residual_tol: f64,
    out: Option<PathBuf>,
) -> CliResult {
    let flow = flow.resolve()?;
    if !(residual_tol > 0.0) {
        return Err(Failure::Usage(format!("--residual-tol must be positive, got {residual_tol}")));
    }
    let cfg = SolveConfig::default();
    let config = json!({
        "command": "verify",
        "flow": flow,
        "bumps": bumps,
        "seed": seed,
        "radius_range": [radius_min, radius_max],
        "residual_tol": residual_tol,
        "quadrature": cfg.quad,
        "out": out,
    });
    emit(&config);
    let sol = match build_solution(&flow, &cfg) {
        Ok(s) => s,
        Err(e) => return not_admissible_exit(e),
    };
    let batch = sample_bumps(&sol.region, bumps, seed, (radius_min, radius_max))
        .map_err(|e| Failure::Usage(format!("--bumps/--radius-*: {e}")))?;
    let reports = verify_weak(&sol, &batch)?;
    let worst = max_normalized(&reports);
    let pass = worst <= residual_tol;
    let count = |c: BumpClass| batch.iter().filter(|b| classify(&sol.region, b) == c).count();
    let equations: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "equation": r.equation,
                "max_normalized": r.max_normalized,
                "pass": r.max_normalized <= residual_tol,
                "residuals": r.residuals,
            })
        })
        .collect();
    let report = json!({
        "config": config,
        "problem": sol.problem,
        "coverage": {
            "near_body": count(BumpClass::NearBody),
            "interior": count(BumpClass::Interior),
            "inflow": count(BumpClass::Inflow),
        },
        "equations": equations,
        "max_normalized": worst,
        "threshold": residual_tol,
        "pass": pass,
    });
    if let Some(path) = &out {
        write_text(path, &render_json(&report))?;
    }
    let summary: Vec<Value> = reports
        .iter()
        .map(|r| json!({"equation": r.equation, "max_normalized": r.max_normalized}))
        .collect();
    println!("{}", json!({"equations": summary, "max_normalized": worst, "pass": pass}));
    Ok(if pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

#[allow(clippy::too_many_arguments)]
fn cmd_converge(
    problem: String,
    profile: String,
    domain_end: f64,
    k: f64,
    gamma: f64,
    taus: String,
    grid: Option<String>,
    out: Option<PathBuf>,
) -> CliResult {
    let problem: Problem = problem.parse().map_err(|e: Error| Failure::Usage(format!("--problem: {e}")))?;
    if problem.is_scaled() {
        return Err(Failure::Usage(format!(
            "--problem {problem}: sweeps compare A or A3 against their scaled problems"
        )));
    }
    let tau_list: Vec<f64> = taus
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--taus: cannot parse '{taus}'")))?;
    let grid_spec = grid.unwrap_or_else(|| format!("{}:{}:201", crate::analysis::convergence::GRID_X_MIN, domain_end));
    let opts = AdmissibilityOptions::default();
    let config = json!({
        "command": "converge",
        "problem": problem,
        "profile": profile,
        "domain_end": domain_end,
        "K": k,
        "gamma": gamma,
        "taus": tau_list,
        "grid": grid_spec,
        "quadrature": opts.quad,
        "out": out,
    });
    emit(&config);
    let grid = parse_grid(&grid_spec).map_err(|e| Failure::Usage(format!("--grid: {e}")))?;
    let body = BodyProfile::parse(&profile, domain_end)?;
    let sweep = converge(problem, &body, k, gamma, &tau_list, &grid, &opts)?;
    let rates: Value = sweep
        .reports
        .iter()
        .map(|r| (r.quantity.column().to_string(), json!(r.fitted_rate)))
        .collect::<serde_json::Map<_, _>>()
        .into();
    let report = json!({
        "config": config,
        "fitted_rates": rates,
        "skipped": sweep.skipped,
        "apex_u_errors": sweep.apex_u_errors,
        "taus": sweep.reports[0].taus,
    });
    if let Some(path) = &out {
        write_text(path, &render_csv(&config, CONVERGENCE_HEADER, &convergence_rows(&sweep)))?;
        write_text(&sidecar(path), &render_json(&report))?;
    }
    println!("{}", json!({"fitted_rates": rates, "skipped": sweep.skipped}));
    Ok(EXIT_OK)
}

fn cmd_eigen(rho: f64, u: f64, v: f64, e: f64, gamma: f64, out: Option<PathBuf>) -> CliResult {
    let config = json!({
        "command": "eigen",
        "rho": rho, "u": u, "v": v, "E": e, "gamma": gamma,
        "out": out,
    });
    emit(&config);
    let state = HsdState::new(rho, u, v, e)?;
    let rep = hsd_eigen(&state, gamma)?;
    let report = json!({"config": config, "report": rep});
    if let Some(path) = &out {
        write_text(path, &render_json(&report))?;
    }
    println!("{}", json!({"eigenvalues": rep.eigenvalues, "sound_speed": rep.sound_speed}));
    Ok(EXIT_OK)
}

fn cmd_admissible(flow: FlowArgs, grid_points: usize, out: Option<PathBuf>) -> CliResult {
    let flow = flow.resolve()?;
    let opts = AdmissibilityOptions {
        grid_points,
        quad: QuadratureConfig::default(),
    };
    let config = json!({
        "command": "admissible",
        "flow": flow,
        "grid_points": grid_points,
        "out": out,
    });
    emit(&config);
    let body = flow.body()?;
    let tau = flow.tau.unwrap_or(0.0);
    let verdict = match flow.problem {
        Problem::A => admissible_a_with(&body, tau, flow.gamma, flow.k, &opts)?,
        Problem::A3 => admissible_a3_with(&body, tau, flow.gamma, flow.k, &opts)?,
        Problem::B => admissible_b_with(&body, flow.gamma, flow.k, &opts)?,
        Problem::B3 => admissible_b3_with(&body, flow.gamma, flow.k, &opts)?,
    };
    if let Some(path) = &out {
        write_text(path, &render_json(&json!({"config": config, "verdict": verdict})))?;
    }
    println!("{}", json!(verdict));
    Ok(if verdict.admissible { EXIT_OK } else { EXIT_NOT_ADMISSIBLE })
}

fn configure_threads() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                // a second call in the same process keeps the first pool
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring {THREADS_ENV}={v}"),
        }
    }
}

/// Entry point; `args[0]` is the program name.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let result = match cli.command {
        Command::Solve { flow, grid, out } => cmd_solve(flow, grid, out),
        Command::Verify {
            flow,
            bumps,
            seed,
            radius_min,
            radius_max,
            residual_tol,
            out,
        } => cmd_verify(flow, bumps, seed, radius_min, radius_max, residual_tol, out),
        Command::Converge {
            problem,
            profile,
            domain_end,
            k,
            gamma,
            taus,
            grid,
            out,
        } => cmd_converge(problem, profile, domain_end, k, gamma, taus, grid, out),
        Command::Eigen { rho, u, v, e, gamma, out } => cmd_eigen(rho, u, v, e, gamma, out),
        Command::Admissible { flow, grid_points, out } => cmd_admissible(flow, grid_points, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::NotAdmissible { .. } => EXIT_NOT_ADMISSIBLE,
                _ => EXIT_USAGE,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &str) -> Vec<String> {
        std::iter::once("hyperslender")
            .chain(s.split_whitespace())
            .map(String::from)
            .collect()
    }

    #[test]
    fn flag_combinations() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let base = "solve --problem B --profile linear:a=1 --K 1 --gamma 1.4";
        assert_eq!(run(&argv(&format!("{base} --tau 0.1"))), EXIT_USAGE);
        assert_eq!(run(&argv(&format!("{base} --rho-inf 2"))), EXIT_USAGE);
        assert_eq!(run(&argv("solve --problem A --profile linear:a=1 --K 1")), EXIT_USAGE);
        assert_eq!(run(&argv("solve --problem Q --profile linear:a=1 --K 1")), EXIT_USAGE);
        assert_eq!(run(&argv("bogus")), EXIT_USAGE);
        assert_eq!(
            run(&argv(&format!("{base} --grid 0:5:11 --out {}", out.display()))),
            EXIT_OK
        );
        assert!(std::fs::read_to_string(&out).unwrap().starts_with("# config: "));
    }

    #[test]
    fn resolve_names_the_flag() {
        let f = FlowArgs {
            problem: "B3".into(),
            profile: "linear:a=1".into(),
            domain_end: 5.0,
            k: 1.0,
            gamma: 1.4,
            tau: None,
            rho_inf: None,
            u_inf: Some(2.0),
        };
        let Err(Usage(msg)) = f.resolve() else { panic!() };
        assert!(msg.contains("--u-inf"));
    }

    #[test]
    fn inadmissible_exit_code() {
        let a = "solve --problem B --profile log:a=1 --domain-end 20 --K 10 --gamma 1.4";
        assert_eq!(run(&argv(a)), EXIT_NOT_ADMISSIBLE);
        let a = "admissible --problem B --profile log:a=1 --domain-end 20 --K 10 --gamma 1.4";
        assert_eq!(run(&argv(a)), EXIT_NOT_ADMISSIBLE);
    }
}
