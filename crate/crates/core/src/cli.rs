//! The `cellsearch` command line.
//!
//! Every command writes its tables as comma-separated files plus a
//! `manifest.json` into `--out`, and echoes the main table on stdout.
//! Exit codes: 0 success, 1 usage or configuration error, 2 runtime or
//! numerical failure, 3 `compare` found a point with `|z| > 4`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{
    lower_bound_mean_cycles, mean_cycles_with, noise_limited_critical_product, phase_classifier,
    upper_bound_mean_cycles_interference, ConditionalEngine,
};
use crate::config::RunConfig;
use crate::distribution::{build_delay_distribution, distribution_truncation, DelayDistribution};
use crate::error::{Error, Result};
use crate::model::{delay_from_excess, Preset, Scenario};
use crate::report::{fmt_f64, fmt_opt, write_output, RunManifest, Table, TOOL_VERSION};
use crate::rng::{derive_seed, stream};
use crate::simulate::{run_trials, write_outcomes_csv, MeanEstimate, TopologySource, TrialConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_REGRESSION: i32 = 3;
/// `|z|` above which `compare` reports a regression.
pub const Z_GUARD: f64 = 4.0;

#[derive(Debug, Parser)]
#[command(
    name = "cellsearch",
    version,
    about = "Directional cell-search delay in PPP cellular networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Named parameter set (mmwave-73ghz, mmwave-73ghz-1ghz, sub6-2ghz).
    #[arg(long)]
    pub preset: Option<String>,
    /// TOML configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Beam counts, e.g. `4,8,18` or `1..12`.
    #[arg(long, value_name = "LIST")]
    pub m: Option<String>,
    /// BS intensity override in BS per km² (a grid for `phase-diagram`).
    #[arg(long = "lambda-km2", value_name = "GRID")]
    pub lambda_km2: Option<String>,
    /// Series term cap.
    #[arg(long)]
    pub j_cap: Option<usize>,
    /// Series absolute tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output directory.
    #[arg(long, default_value = "cellsearch-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct R0Arg {
    /// Distances to the nearest BS in metres: `a:b:n`, `log:a:b:n` or a list.
    #[arg(long, default_value = "10:100:10")]
    pub r0: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Unconditional mean cycles with bounds and phase verdict per beam count.
    EvalMean(Common),
    /// Mean cycles conditioned on the nearest-BS distance.
    Conditional {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        r0: R0Arg,
    },
    /// Monte Carlo of the conditioned protocol.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        r0: R0Arg,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Also write every trial outcome.
        #[arg(long)]
        outcomes: bool,
    },
    /// Analytic against simulated conditional means, with z-scores.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        r0: R0Arg,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// CCDF of the conditional mean delay and its tail fit.
    Ccdf {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
    },
    /// Delay quantiles; the p-th percentile user is the one beaten by p% of users.
    Quantiles {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value = "95,50,10")]
        percentiles: String,
    },
    /// Finite/infinite-mean verdict over an intensity by beam-count grid.
    PhaseDiagram(Common),
    /// Re-executes the run described by a manifest.
    Rerun {
        manifest: PathBuf,
        /// Output directory, defaults to `rerun` next to the manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalMean(_) => "eval-mean",
            Command::Conditional { .. } => "conditional",
            Command::Simulate { .. } => "simulate",
            Command::Compare { .. } => "compare",
            Command::Ccdf { .. } => "ccdf",
            Command::Quantiles { .. } => "quantiles",
            Command::PhaseDiagram(_) => "phase-diagram",
            Command::Rerun { .. } => "rerun",
        }
    }

    fn common(&self) -> Option<&Common> {
        match self {
            Command::EvalMean(c) | Command::PhaseDiagram(c) => Some(c),
            Command::Conditional { common, .. }
            | Command::Simulate { common, .. }
            | Command::Compare { common, .. }
            | Command::Ccdf { common, .. }
            | Command::Quantiles { common, .. } => Some(common),
            Command::Rerun { .. } => None,
        }
    }
}

/// Parses `a:b:n` (linear, inclusive), `log:a:b:n` or a comma-separated list.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = |why: &str| Error::config("grid", format!("`{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts.as_slice() {
        [a, b, n] | ["log", a, b, n] => {
            let (a, b) = (num(a)?, num(b)?);
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| bad("point count must be an integer"))?;
            if n == 0 {
                return Err(bad("point count must be >= 1"));
            }
            let log = parts.len() == 4;
            if log && !(a > 0.0 && b > 0.0) {
                return Err(bad("log grids need positive ends"));
            }
            (0..n)
                .map(|i| {
                    let f = if n == 1 {
                        0.0
                    } else {
                        i as f64 / (n - 1) as f64
                    };
                    if i == 0 {
                        a
                    } else if i + 1 == n {
                        b
                    } else if log {
                        (a.ln() + (b.ln() - a.ln()) * f).exp()
                    } else {
                        a + (b - a) * f
                    }
                })
                .collect()
        }
        [list] => list
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(num)
            .collect::<Result<Vec<_>>>()?,
        _ => return Err(bad("expected a:b:n, log:a:b:n or a comma-separated list")),
    };
    if values.is_empty() {
        return Err(bad("empty grid"));
    }
    Ok(values)
}

/// Parses `4,8,18`, `1..12` or a mix of both.
pub fn parse_beams(spec: &str) -> Result<Vec<u32>> {
    let bad = |why: &str| Error::config("m", format!("`{spec}`: {why}"));
    let mut out = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let int = |s: &str| {
            s.trim()
                .parse::<u32>()
                .map_err(|_| bad("beam counts are positive integers"))
        };
        if let Some((a, b)) = item.split_once("..") {
            let (a, b) = (int(a)?, int(b)?);
            if a > b {
                return Err(bad("empty range"));
            }
            out.extend(a..=b);
        } else {
            out.push(int(item)?);
        }
    }
    if out.is_empty() {
        return Err(bad("empty beam list"));
    }
    if out.contains(&0) {
        return Err(bad("beam counts must be >= 1"));
    }
    Ok(out)
}

struct Resolved {
    run: RunConfig,
    beams: Vec<u32>,
}

fn resolve(common: &Common, lambda_is_grid: bool) -> Result<Resolved> {
    let mut run = match (&common.preset, &common.config) {
        (Some(_), Some(_)) => {
            return Err(Error::config(
                "preset",
                "give --preset or --config, not both",
            ))
        }
        (None, None) => {
            return Err(Error::config(
                "preset",
                "one of --preset or --config is required",
            ))
        }
        (Some(p), None) => {
            let p = Preset::from_name(p)?;
            RunConfig::from_preset(p, p.reference_beams()[0])?
        }
        (None, Some(path)) => RunConfig::from_file(path)?,
    };
    if let Some(j) = common.j_cap {
        run.truncation.j_cap = j;
    }
    if let Some(t) = common.tol {
        run.truncation.abs_tolerance = t;
    }
    run.truncation.validate()?;
    if !lambda_is_grid {
        if let Some(spec) = &common.lambda_km2 {
            let v = parse_grid(spec)?;
            if v.len() != 1 {
                return Err(Error::config(
                    "lambda-km2",
                    "this command takes a single intensity",
                ));
            }
            run.network = run
                .network
                .with_intensity(v[0] * 1e-6)
                .map_err(|e| match e {
                    Error::InvalidConfig { reason, .. } => Error::config("lambda-km2", reason),
                    other => other,
                })?;
        }
    }
    let beams = match &common.m {
        Some(spec) => parse_beams(spec)?,
        None => match run.preset {
            Some(p) => p.reference_beams().to_vec(),
            None => vec![run.network.m_beams],
        },
    };
    Ok(Resolved { run, beams })
}

/// Tables produced by one command, in output order; the first is echoed.
struct Output {
    files: Vec<(String, String)>,
    exit: i32,
}

impl Output {
    fn one(name: &str, table: &Table) -> Self {
        Output {
            files: vec![(name.to_string(), table.to_csv_string())],
            exit: EXIT_OK,
        }
    }
}

fn cmd_eval_mean(r: &Resolved) -> Result<Output> {
    let mut t = Table::new(&[
        "m_beams",
        "mean_cycles",
        "status",
        "terms_used",
        "tail_exponent",
        "lower_bound",
        "upper_bound",
        "verdict",
    ]);
    for &m in &r.beams {
        let run = r.run.with_beams(m)?;
        let (cfg, plm) = (&run.network, &run.path_loss);
        let s = mean_cycles_with(cfg, plm, &run.truncation, &run.quadrature)?;
        let lower = lower_bound_mean_cycles(cfg, plm).ok();
        let upper = upper_bound_mean_cycles_interference(cfg, plm).ok();
        let verdict =
            phase_classifier(cfg, plm).map_or("unsupported".to_string(), |v| v.to_string());
        t.push(vec![
            m.to_string(),
            fmt_f64(s.value),
            s.status.to_string(),
            s.terms_used.to_string(),
            fmt_opt(s.tail_exponent_estimate),
            fmt_opt(lower),
            fmt_opt(upper),
            verdict,
        ]);
    }
    Ok(Output::one("eval_mean.csv", &t))
}

fn cmd_conditional(r: &Resolved, r0s: &[f64]) -> Result<Output> {
    let mut t = Table::new(&[
        "m_beams",
        "r0_m",
        "cond_mean_cycles",
        "status",
        "terms_used",
        "delay_seconds",
    ]);
    for &m in &r.beams {
        let run = r.run.with_beams(m)?;
        let engine = ConditionalEngine::new(
            &run.network,
            &run.path_loss,
            &run.truncation,
            &run.quadrature,
        )?;
        for &r0 in r0s {
            let s = engine.eval(r0)?;
            t.push(vec![
                m.to_string(),
                fmt_f64(r0),
                fmt_f64(s.value),
                s.status.to_string(),
                s.terms_used.to_string(),
                fmt_f64(delay_from_excess(&run.network, s.beyond_first)),
            ]);
        }
    }
    Ok(Output::one("conditional.csv", &t))
}

fn trial_for(
    run: &RunConfig,
    trials: usize,
    seed: u64,
    m: u32,
    idx: usize,
    r0: f64,
) -> TrialConfig {
    let seed = derive_seed(seed, &format!("conditioned/m{m}/{idx}"));
    TrialConfig::for_scenario(run.network.scenario, trials, seed).conditioned_on(r0)
}

fn cmd_simulate(
    r: &Resolved,
    r0s: &[f64],
    trials: usize,
    seed: u64,
    outcomes: bool,
) -> Result<Output> {
    let mut t = Table::new(&[
        "m_beams",
        "r0_m",
        "trials",
        "mean_cycles",
        "stderr",
        "censored_fraction",
        "lower_bound",
    ]);
    let mut files = Vec::new();
    for &m in &r.beams {
        let run = r.run.with_beams(m)?;
        for (i, &r0) in r0s.iter().enumerate() {
            let trial = trial_for(&run, trials, seed, m, i, r0);
            let outs = run_trials(
                TopologySource::Sampled,
                &run.network,
                &run.path_loss,
                &trial,
            )?;
            let est = MeanEstimate::from_outcomes(&outs, trial.max_cycles);
            t.push(vec![
                m.to_string(),
                fmt_f64(r0),
                trials.to_string(),
                fmt_f64(est.mean),
                fmt_f64(est.stderr),
                fmt_f64(est.censored_fraction),
                est.lower_bound.to_string(),
            ]);
            if outcomes {
                let mut buf = Vec::new();
                write_outcomes_csv(&mut buf, &outs)?;
                files.push((
                    format!("outcomes_m{m}_r{i}.csv"),
                    String::from_utf8(buf).expect("ASCII"),
                ));
            }
        }
    }
    files.insert(0, ("simulate.csv".to_string(), t.to_csv_string()));
    Ok(Output {
        files,
        exit: EXIT_OK,
    })
}

/// One analytic/simulated pair. The analytic series is cut at the simulator's
/// cycle cap, so both sides estimate `E[min(L, cap)]`, and `z` uses the
/// analytic variance of that capped count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparePoint {
    pub m_beams: u32,
    pub r0: f64,
    pub analytic: f64,
    pub analytic_converged: bool,
    pub simulated: MeanEstimate,
    pub z: f64,
    pub rel_gap: f64,
}

pub fn compare_point(
    run: &RunConfig,
    m: u32,
    r0: f64,
    trial: &TrialConfig,
) -> Result<ComparePoint> {
    let run = run.with_beams(m)?;
    let mut trunc = run.truncation;
    trunc.j_cap = trial.max_cycles as usize;
    trunc.precision_cap = trunc.precision_cap.max(trunc.j_cap);
    let engine = ConditionalEngine::new(&run.network, &run.path_loss, &trunc, &run.quadrature)?;
    let (a, var) = engine.eval_series_with_variance(r0)?;
    let outs = run_trials(TopologySource::Sampled, &run.network, &run.path_loss, trial)?;
    let sim = MeanEstimate::from_outcomes(&outs, trial.max_cycles);
    // standard error under the analytic model, floored at one count in n
    let se = (var / sim.trials as f64)
        .sqrt()
        .max(1.0 / sim.trials as f64);
    Ok(ComparePoint {
        m_beams: m,
        r0,
        analytic: a.value,
        analytic_converged: a.is_converged(),
        z: (sim.mean - a.value) / se,
        rel_gap: (sim.mean - a.value).abs() / a.value,
        simulated: sim,
    })
}

fn cmd_compare(r: &Resolved, r0s: &[f64], trials: usize, seed: u64) -> Result<Output> {
    let mut t = Table::new(&[
        "m_beams",
        "r0_m",
        "analytic",
        "analytic_converged",
        "sim_mean",
        "sim_stderr",
        "censored_fraction",
        "z",
        "rel_gap",
    ]);
    let mut worst: f64 = 0.0;
    for &m in &r.beams {
        for (i, &r0) in r0s.iter().enumerate() {
            let trial = trial_for(&r.run, trials, seed, m, i, r0);
            let p = compare_point(&r.run, m, r0, &trial)?;
            worst = worst.max(p.z.abs());
            t.push(vec![
                m.to_string(),
                fmt_f64(r0),
                fmt_f64(p.analytic),
                p.analytic_converged.to_string(),
                fmt_f64(p.simulated.mean),
                fmt_f64(p.simulated.stderr),
                fmt_f64(p.simulated.censored_fraction),
                fmt_f64(p.z),
                fmt_f64(p.rel_gap),
            ]);
        }
    }
    let mut out = Output::one("compare.csv", &t);
    if worst > Z_GUARD {
        eprintln!("compare: largest |z| = {worst:.2} exceeds {Z_GUARD}");
        out.exit = EXIT_REGRESSION;
    }
    Ok(out)
}

pub fn delay_distribution(
    run: &RunConfig,
    m: u32,
    samples: usize,
    seed: u64,
) -> Result<DelayDistribution> {
    let run = run.with_beams(m)?;
    let trunc = distribution_truncation(&run.truncation, run.network.scenario);
    let mut rng = stream(derive_seed(seed, &format!("r0/m{m}")), 0);
    build_delay_distribution(
        &run.network,
        &run.path_loss,
        samples,
        &trunc,
        &run.quadrature,
        &mut rng,
    )
}

fn cmd_ccdf(r: &Resolved, samples: usize, seed: u64) -> Result<Output> {
    let mut t = Table::new(&[
        "m_beams",
        "slope",
        "ci_low",
        "ci_high",
        "r_squared",
        "fit_t_low",
        "fit_t_high",
        "curvature_flag",
        "censored_fraction",
        "grid_points",
        "audit_max_rel_error",
    ]);
    let mut files = Vec::new();
    for &m in &r.beams {
        let d = delay_distribution(&r.run, m, samples, seed)?;
        let f = d.tail_fit;
        t.push(vec![
            m.to_string(),
            fmt_opt(f.map(|f| f.slope)),
            fmt_opt(f.map(|f| f.ci.0)),
            fmt_opt(f.map(|f| f.ci.1)),
            fmt_opt(f.map(|f| f.r_squared)),
            fmt_opt(f.map(|f| f.fit_range.0)),
            fmt_opt(f.map(|f| f.fit_range.1)),
            f.map_or(String::new(), |f| f.curvature_flag.to_string()),
            fmt_f64(d.censored_fraction()),
            d.grid_points.to_string(),
            fmt_opt(d.audit.map(|a| a.max_rel_error)),
        ]);
        let mut buf = Vec::new();
        d.write_ccdf_csv(&mut buf)?;
        files.push((
            format!("ccdf_m{m}.csv"),
            String::from_utf8(buf).expect("ASCII"),
        ));
    }
    files.insert(0, ("tail_fit.csv".to_string(), t.to_csv_string()));
    Ok(Output {
        files,
        exit: EXIT_OK,
    })
}

fn cmd_quantiles(r: &Resolved, samples: usize, seed: u64, percentiles: &[f64]) -> Result<Output> {
    let mut t = Table::new(&["m_beams", "percentile", "delay_seconds_or_censored"]);
    for &m in &r.beams {
        let d = delay_distribution(&r.run, m, samples, seed)?;
        for &p in percentiles {
            t.push(vec![
                m.to_string(),
                p.to_string(),
                d.quantile_value(p)?.to_string(),
            ]);
        }
    }
    Ok(Output::one("quantiles.csv", &t))
}

fn cmd_phase_diagram(r: &Resolved, common: &Common) -> Result<Output> {
    let lambdas = parse_grid(common.lambda_km2.as_deref().unwrap_or("log:10:1000:9"))?;
    let mut t = Table::new(&["lambda_km2", "m_beams", "lambda_m_km2", "verdict"]);
    for &lk in &lambdas {
        for &m in &r.beams {
            let run = r.run.with_beams(m)?;
            let cfg = run.network.with_intensity(lk * 1e-6)?;
            let verdict = phase_classifier(&cfg, &run.path_loss)
                .map_or("unsupported".to_string(), |v| v.to_string());
            t.push(vec![
                fmt_f64(lk),
                m.to_string(),
                fmt_f64(lk * m as f64),
                verdict,
            ]);
        }
    }
    let mut files = vec![("phase.csv".to_string(), t.to_csv_string())];
    let run = &r.run;
    if run.network.scenario == Scenario::NoiseLimited && run.path_loss.alpha_nlos == 2.0 {
        // λM = Γ C_N W/(Pπ)
        let crit_km2 = noise_limited_critical_product(&run.network, &run.path_loss) * 1e6;
        let mut b = Table::new(&["lambda_km2", "m_on_boundary"]);
        for &lk in &lambdas {
            b.push(vec![fmt_f64(lk), fmt_f64(crit_km2 / lk)]);
        }
        files.push(("phase_boundary.csv".to_string(), b.to_csv_string()));
    }
    Ok(Output {
        files,
        exit: EXIT_OK,
    })
}

fn execute(command: &Command) -> Result<(Output, RunConfig, u64)> {
    let common = command.common().expect("rerun is handled before dispatch");
    let r = resolve(common, matches!(command, Command::PhaseDiagram(_)))?;
    let seed = common.seed;
    let out = match command {
        Command::EvalMean(_) => cmd_eval_mean(&r)?,
        Command::Conditional { r0, .. } => cmd_conditional(&r, &positive_grid(&r0.r0)?)?,
        Command::Simulate {
            r0,
            trials,
            outcomes,
            ..
        } => cmd_simulate(&r, &positive_grid(&r0.r0)?, *trials, seed, *outcomes)?,
        Command::Compare { r0, trials, .. } => {
            cmd_compare(&r, &positive_grid(&r0.r0)?, *trials, seed)?
        }
        Command::Ccdf { samples, .. } => cmd_ccdf(&r, *samples, seed)?,
        Command::Quantiles {
            samples,
            percentiles,
            ..
        } => cmd_quantiles(&r, *samples, seed, &parse_grid(percentiles)?)?,
        Command::PhaseDiagram(c) => cmd_phase_diagram(&r, c)?,
        Command::Rerun { .. } => unreachable!(),
    };
    Ok((out, r.run, seed))
}

fn positive_grid(spec: &str) -> Result<Vec<f64>> {
    let g = parse_grid(spec)?;
    if g.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
        return Err(Error::config(
            "r0",
            format!("`{spec}`: distances must be > 0"),
        ));
    }
    Ok(g)
}

/// Runs one parsed command and writes its files; returns the exit code.
fn run_command(command: &Command, invocation: &[String]) -> Result<i32> {
    let started = Instant::now();
    let (out, config, seed) = execute(command)?;
    let dir = &command.common().expect("not rerun").out;
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (name, body) in &out.files {
        paths.push(write_output(dir, name, command.name(), body)?);
    }
    // a closed pipe on stdout is not an error, the files are already written
    let _ = std::io::stdout().write_all(out.files[0].1.as_bytes());
    RunManifest {
        command: command.name().to_string(),
        invocation: invocation.to_vec(),
        config,
        seed,
        tool_version: TOOL_VERSION.to_string(),
        wall_clock_seconds: started.elapsed().as_secs_f64(),
        outputs: paths,
    }
    .write(dir)?;
    Ok(out.exit)
}

/// Flags replaced when re-running from a manifest.
const REPLACED: [&str; 3] = ["--preset", "--config", "--out"];

fn rerun(manifest: &Path, out: Option<&Path>) -> Result<i32> {
    let m = RunManifest::read(manifest)?;
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => manifest.parent().unwrap_or(Path::new(".")).join("rerun"),
    };
    std::fs::create_dir_all(&dir)?;
    let snapshot = dir.join("config.snapshot.toml");
    std::fs::write(&snapshot, m.config.to_toml_string()?)?;
    let mut args = Vec::new();
    let mut skip = false;
    for a in &m.invocation {
        if skip {
            skip = false;
            continue;
        }
        if REPLACED.contains(&a.as_str()) {
            skip = true;
            continue;
        }
        if REPLACED.iter().any(|f| a.starts_with(&format!("{f}="))) {
            continue;
        }
        args.push(a.clone());
    }
    args.extend([
        "--config".to_string(),
        snapshot.display().to_string(),
        "--out".to_string(),
        dir.display().to_string(),
    ]);
    let cli =
        Cli::try_parse_from(std::iter::once("cellsearch".to_string()).chain(args.iter().cloned()))
            .map_err(|e| Error::Parse(format!("manifest invocation no longer parses: {e}")))?;
    if matches!(cli.command, Command::Rerun { .. }) {
        return Err(Error::Parse("a manifest cannot describe a rerun".into()));
    }
    run_command(&cli.command, &args)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidConfig { .. } | Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_RUNTIME,
    }
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let invocation: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match &cli.command {
        Command::Rerun { manifest, out } => rerun(manifest, out.as_deref()),
        c => run_command(c, &invocation),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("cellsearch {}: {e}", cli.command.name());
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        assert_eq!(parse_grid("1:3:3").unwrap(), vec![1.0, 2.0, 3.0]);
        let g = parse_grid("log:1:100:3").unwrap();
        assert!((g[1] - 10.0).abs() < 1e-12);
        assert_eq!(parse_grid("5, 7.5").unwrap(), vec![5.0, 7.5]);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2:x").is_err());
        assert!(parse_grid("log:0:1:3").is_err());
    }

    #[test]
    fn beam_lists() {
        assert_eq!(parse_beams("1..4,8").unwrap(), vec![1, 2, 3, 4, 8]);
        assert!(parse_beams("").is_err());
        assert!(parse_beams("0").is_err());
        assert!(parse_beams("5..2").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(
            run([
                "cellsearch",
                "eval-mean",
                "--preset",
                "sub6-2ghz",
                "--m",
                ""
            ]),
            EXIT_USAGE
        );
        assert_eq!(run(["cellsearch", "eval-mean"]), EXIT_USAGE);
        assert_eq!(run(["cellsearch", "no-such-command"]), EXIT_USAGE);
        assert_eq!(run(["cellsearch", "--version"]), EXIT_OK);
    }
}
