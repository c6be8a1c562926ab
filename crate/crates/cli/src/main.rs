//! Command-line surface of the verification lab: compute constants, export
//! radial solutions, run the inequality suite, scan the small-exponent
//! threshold over dimension, and sweep parameter grids.

// Negated comparisons in the argument guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use config::RunConfig;
use ellbounds_core::constants::{self, ExponentWindow};
use ellbounds_core::{suite, ProblemParams};

#[derive(Parser)]
#[command(
    name = "ellbounds",
    version,
    about = "Explicit-constant local bounds for -Δu = λuᵖ: constants, radial solutions, and an executable inequality suite"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate every applicable constant for one problem instance
    Constants(ProblemCmd),
    /// Solve the radial equation outward from the center and export r,u,u'
    Solve(SolveCmd),
    /// Run the verification suite; exit code 0 means no check failed
    Verify(VerifyCmd),
    /// Scan the small-exponent threshold q0(d, eps) over continuous dimension
    Q0Scan(Q0Cmd),
    /// Run the verification suite over a parameter grid
    Sweep(SweepCmd),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON config file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Space dimension (d >= 3)
    #[arg(long)]
    d: Option<u32>,
    /// Nonlinearity exponent p >= 0
    #[arg(long)]
    p: Option<f64>,
    /// Coefficient λ > 0
    #[arg(long)]
    lambda: Option<f64>,
    /// Center value of the fixture solution
    #[arg(long)]
    u0: Option<f64>,
    /// Inner verification radius
    #[arg(long = "r-inf")]
    r_inf: Option<f64>,
    /// Middle verification radius
    #[arg(long = "r-bar")]
    r_bar: Option<f64>,
    /// Outer verification radius
    #[arg(long)]
    r0: Option<f64>,
    /// Sup-bound norm exponent override
    #[arg(long)]
    q: Option<f64>,
    /// John–Nirenberg slack override
    #[arg(long)]
    eps: Option<f64>,
    /// Solver tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Sobolev constant override
    #[arg(long)]
    s2: Option<f64>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads for sweeps
    #[arg(long)]
    jobs: Option<usize>,
    /// Multiply the fixture by (1+x): the negative control. At p = 1 the
    /// equation is linear, so a scaled solution still solves it and no
    /// check fails; use any p != 1 to see the detector trip.
    #[arg(long = "inject-perturbation")]
    inject_perturbation: Option<f64>,
}

impl CommonArgs {
    fn effective(&self) -> Result<RunConfig, String> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.d {
            cfg.d = v;
        }
        if let Some(v) = self.p {
            cfg.p = v;
        }
        if let Some(v) = self.lambda {
            cfg.lambda = v;
        }
        if let Some(v) = self.u0 {
            cfg.u0 = v;
        }
        cfg.r_inf = self.r_inf.or(cfg.r_inf);
        cfg.r_bar = self.r_bar.or(cfg.r_bar);
        cfg.r0 = self.r0.or(cfg.r0);
        cfg.q = self.q.or(cfg.q);
        cfg.eps = self.eps.or(cfg.eps);
        if let Some(v) = self.tol {
            cfg.tol = v;
        }
        cfg.s2 = self.s2.or(cfg.s2);
        cfg.jobs = self.jobs.or(cfg.jobs);
        cfg.inject_perturbation = self.inject_perturbation.or(cfg.inject_perturbation);
        Ok(cfg)
    }
}

#[derive(Args)]
struct ProblemCmd {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct SolveCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Integrate out to this radius (stops earlier at the zero crossing)
    #[arg(long = "r-max", default_value_t = 10.0)]
    r_max: f64,
    /// Number of exported sample rows
    #[arg(long, default_value_t = 800)]
    rows: usize,
}

#[derive(Args)]
struct VerifyCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated check-name prefixes to run (default: all)
    #[arg(long, value_delimiter = ',')]
    select: Vec<String>,
}

#[derive(Args)]
struct Q0Cmd {
    /// John–Nirenberg slack
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Scan start (continuous dimension)
    #[arg(long = "d-min", default_value_t = 1.0)]
    d_min: f64,
    /// Scan end
    #[arg(long = "d-max", default_value_t = 16.0)]
    d_max: f64,
    /// Scan step
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    common: CommonArgs,
    /// Dimensions, comma separated
    #[arg(long = "d-grid", value_delimiter = ',', default_value = "3,4,5")]
    d_grid: Vec<u32>,
    /// Exponents p, comma separated
    #[arg(long = "p-grid", value_delimiter = ',', default_value = "0,0.5,1,2")]
    p_grid: Vec<f64>,
    /// Coefficients λ, comma separated
    #[arg(long = "lambda-grid", value_delimiter = ',', default_value = "0.5,1,4")]
    lambda_grid: Vec<f64>,
    /// Center values, comma separated
    #[arg(long = "u0-grid", value_delimiter = ',', default_value = "1,5")]
    u0_grid: Vec<f64>,
    /// Geometry scale factors on the default radii
    #[arg(long = "scale-grid", value_delimiter = ',', default_value = "1")]
    scale_grid: Vec<f64>,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a RunConfig,
    results: &'a [ellbounds_core::CheckResult],
    summary: suite::Summary,
}

fn cmd_constants(cmd: &ProblemCmd) -> Result<ExitCode, String> {
    let cfg = cmd.common.effective()?;
    let params = cfg.problem()?;
    let s2 = constants::sobolev_constant(params.d, cfg.s2).map_err(|e| e.to_string())?;
    let chain = match cfg.chain()? {
        Some(c) => c,
        None => {
            let fixture =
                suite::build_fixture(params, cfg.u0, cfg.tol).map_err(|e| e.to_string())?;
            suite::default_chain(&fixture).map_err(|e| e.to_string())?
        }
    };
    let mut window = ExponentWindow::defaults(params);
    if let Some(q) = cfg.q {
        window.q = q;
    }
    if let Some(eps) = cfg.eps {
        window.eps = eps;
    }
    let report =
        constants::constant_report(params, &chain, &window, s2).map_err(|e| e.to_string())?;

    #[derive(Serialize)]
    struct ConstReport<'a> {
        config: &'a RunConfig,
        chain: &'a ellbounds_core::RadiiChain,
        report: &'a constants::ConstantReport,
    }
    let content = match cmd.common.format {
        Format::Json => {
            serde_json::to_string_pretty(&ConstReport {
                config: &cfg,
                chain: &chain,
                report: &report,
            })
            .map_err(|e| e.to_string())?
                + "\n"
        }
        Format::Csv => {
            let mut out = format!("# config-hash: {:016x}\n", cfg.hash());
            out.push_str("name,value,log10,regime,applicable,detail,anchor\n");
            for e in &report.entries {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    e.name,
                    e.value.map(|v| format!("{v:.12e}")).unwrap_or_default(),
                    e.log10.map(|v| format!("{v:.6}")).unwrap_or_default(),
                    e.regime,
                    e.applicable,
                    e.detail.replace(',', ";"),
                    e.anchor
                ));
            }
            out
        }
    };
    report::write_output(cmd.common.out.as_deref(), &content)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(cmd: &SolveCmd) -> Result<ExitCode, String> {
    let cfg = cmd.common.effective()?;
    let params = cfg.problem()?;
    if !(cmd.r_max > 0.0) {
        return Err("r-max must be positive".into());
    }
    let profile = build_solve_profile(params, cfg.u0, cmd.r_max, cfg.tol)?;
    let hi = profile.domain_end().min(cmd.r_max);
    let rows = cmd.rows.max(2);
    let grid: Vec<f64> = (0..rows)
        .map(|i| hi * i as f64 / (rows - 1) as f64)
        .collect();
    let residual = profile.residual(&grid).map_err(|e| e.to_string())?;

    let mut out = String::new();
    out.push_str(&format!("# config-hash: {:016x}\n", cfg.hash()));
    out.push_str(&format!(
        "# d={} p={} lambda={} u0={} kind={:?}\n",
        params.d,
        params.p,
        params.lambda,
        cfg.u0,
        profile.kind()
    ));
    out.push_str(&format!(
        "# residual-certificate: {residual:.6e} (scaled, sup over export grid)\n"
    ));
    if profile.positivity_radius().is_finite() && profile.positivity_radius() <= cmd.r_max {
        out.push_str(&format!(
            "# note: truncated at the positivity radius {:.12} (u crosses zero there)\n",
            profile.positivity_radius()
        ));
    }
    out.push_str("r,u,du_dr\n");
    for r in &grid {
        let (u, du, _) = profile.eval2(*r);
        out.push_str(&format!("{r:.12e},{u:.12e},{du:.12e}\n"));
    }
    report::write_output(cmd.common.out.as_deref(), &out)?;
    Ok(ExitCode::SUCCESS)
}

fn build_solve_profile(
    params: ProblemParams,
    u0: f64,
    r_max: f64,
    tol: f64,
) -> Result<ellbounds_core::RadialProfile, String> {
    use ellbounds_core::profile;
    let prof = if params.p == 0.0 {
        profile::explicit_p0(params, u0)
    } else if params.p == 1.0 && params.d == 3 {
        profile::explicit_linear_d3(params.lambda, u0)
    } else {
        profile::solve_lane_emden(params, u0, r_max, profile::SolveOptions { tol })
    };
    prof.map_err(|e| e.to_string())
}

fn cmd_verify(cmd: &VerifyCmd) -> Result<ExitCode, String> {
    let cfg = cmd.common.effective()?;
    let params = cfg.problem()?;
    let selection = if cmd.select.is_empty() {
        None
    } else {
        Some(cmd.select.clone())
    };
    let opts = cfg.suite_options(selection);
    let chain = cfg.chain()?;
    let results = suite::run_with(params, cfg.u0, chain, &opts).map_err(|e| e.to_string())?;
    let summary = suite::summarize(&results);

    let content = match cmd.common.format {
        Format::Json => {
            serde_json::to_string_pretty(&VerifyReport {
                config: &cfg,
                results: &results,
                summary: summary.clone(),
            })
            .map_err(|e| e.to_string())?
                + "\n"
        }
        Format::Csv => report::results_csv(&results, cfg.hash()),
    };
    report::write_output(cmd.common.out.as_deref(), &content)?;
    eprintln!(
        "verify: pass={} fail={} inapplicable={} inconclusive={}",
        summary.pass, summary.fail, summary.inapplicable, summary.inconclusive
    );
    Ok(if summary.fail == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_q0_scan(cmd: &Q0Cmd) -> Result<ExitCode, String> {
    if !(cmd.step > 0.0) {
        return Err("step must be positive".into());
    }
    if !(cmd.d_min >= 1.0 && cmd.d_max > cmd.d_min) {
        return Err("need 1 <= d-min < d-max".into());
    }
    let mut rows = Vec::new();
    let mut minimizer = (f64::NAN, f64::INFINITY);
    let mut d = cmd.d_min;
    while d <= cmd.d_max + 1e-12 {
        let q0 =
            constants::lower::small_exponent_threshold(d, cmd.eps).map_err(|e| e.to_string())?;
        if q0 < minimizer.1 {
            minimizer = (d, q0);
        }
        rows.push((d, q0));
        d += cmd.step;
    }
    let mut out = format!(
        "# q0(d, eps) scan: eps={}, d in [{}, {}], step {}\n# minimizer: d={:.6}, q0={:.9e}\nd,q0\n",
        cmd.eps, cmd.d_min, cmd.d_max, cmd.step, minimizer.0, minimizer.1
    );
    for (d, q0) in rows {
        out.push_str(&format!("{d:.6},{q0:.12e}\n"));
    }
    report::write_output(cmd.out.as_deref(), &out)?;
    eprintln!("q0-scan: minimizer at d = {:.4}", minimizer.0);
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepPoint {
    d: u32,
    p: f64,
    lambda: f64,
    u0: f64,
    scale: f64,
    summary: suite::Summary,
    failures: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_sweep(cmd: &SweepCmd) -> Result<ExitCode, String> {
    use rayon::prelude::*;
    let cfg = cmd.common.effective()?;
    let mut grid = Vec::new();
    for &d in &cmd.d_grid {
        for &p in &cmd.p_grid {
            for &lambda in &cmd.lambda_grid {
                for &u0 in &cmd.u0_grid {
                    for &scale in &cmd.scale_grid {
                        grid.push((d, p, lambda, u0, scale));
                    }
                }
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.unwrap_or(0))
        .build()
        .map_err(|e| e.to_string())?;
    let base_opts = cfg.suite_options(None);
    let points: Vec<SweepPoint> = pool.install(|| {
        grid.par_iter()
            .map(|&(d, p, lambda, u0, scale)| {
                let mut opts = base_opts.clone();
                opts.geometry_scale = scale;
                let point = ProblemParams::new(d, p, lambda)
                    .map_err(|e| e.to_string())
                    .and_then(|params| {
                        suite::run_default(params, u0, &opts).map_err(|e| e.to_string())
                    });
                match point {
                    Ok(results) => {
                        let summary = suite::summarize(&results);
                        let failures = results
                            .iter()
                            .filter(|r| r.failed())
                            .map(|r| r.name.clone())
                            .collect();
                        SweepPoint {
                            d,
                            p,
                            lambda,
                            u0,
                            scale,
                            summary,
                            failures,
                            error: None,
                        }
                    }
                    Err(e) => SweepPoint {
                        d,
                        p,
                        lambda,
                        u0,
                        scale,
                        summary: suite::summarize(&[]),
                        failures: vec![],
                        error: Some(e),
                    },
                }
            })
            .collect()
    });

    let mut aggregate = suite::summarize(&[]);
    let mut errors = 0usize;
    for pt in &points {
        aggregate.pass += pt.summary.pass;
        aggregate.fail += pt.summary.fail;
        aggregate.inapplicable += pt.summary.inapplicable;
        aggregate.inconclusive += pt.summary.inconclusive;
        if let Some(m) = pt.summary.worst_margin_log10 {
            aggregate.worst_margin_log10 =
                Some(aggregate.worst_margin_log10.map_or(m, |w: f64| w.min(m)));
        }
        if pt.error.is_some() {
            errors += 1;
        }
    }
    if let Some(m) = aggregate.worst_margin_log10 {
        let lin = 10f64.powf(m);
        if lin.is_finite() {
            aggregate.worst_margin = Some(lin);
        }
    }

    #[derive(Serialize)]
    struct SweepReport<'a> {
        config: &'a RunConfig,
        points: &'a [SweepPoint],
        aggregate: &'a suite::Summary,
        errors: usize,
    }
    let content = serde_json::to_string_pretty(&SweepReport {
        config: &cfg,
        points: &points,
        aggregate: &aggregate,
        errors,
    })
    .map_err(|e| e.to_string())?
        + "\n";
    report::write_output(cmd.common.out.as_deref(), &content)?;
    eprintln!(
        "sweep: {} points, pass={} fail={} inapplicable={} errors={}",
        points.len(),
        aggregate.pass,
        aggregate.fail,
        aggregate.inapplicable,
        errors
    );
    Ok(if aggregate.fail == 0 && errors == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.cmd {
        Cmd::Constants(c) => cmd_constants(c),
        Cmd::Solve(c) => cmd_solve(c),
        Cmd::Verify(c) => cmd_verify(c),
        Cmd::Q0Scan(c) => cmd_q0_scan(c),
        Cmd::Sweep(c) => cmd_sweep(c),
    };
    match outcome {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
