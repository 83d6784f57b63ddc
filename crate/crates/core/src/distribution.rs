//! Distribution of the conditional mean delay `D(R₀) = (E[L | R₀] − 1)T + Mτ`
//! over the random nearest-BS distance `R₀`.
//!
//! `E[L | R₀]` is smooth and increasing in `R₀`, so it is evaluated on an
//! adaptive grid in `ln R₀` and interpolated with a monotone cubic on
//! `ln(E[L | R₀] − 1)`. Samples whose series did not converge are carried as
//! right-censored lower bounds and sort above every finite value.

use std::io::Write;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{ConditionalEngine, QuadratureSpec, Truncation};
use crate::error::{Error, Result};
use crate::geometry::sample_r0;
use crate::model::{NetworkConfig, PathLossModel, Scenario};
use crate::rng::{derive_seed, stream};

/// Smallest sample size accepted by [`build_delay_distribution`].
pub const MIN_SAMPLES: usize = 10_000;
/// Interpolation target for the grid, relative on `E[L | R₀]`.
pub const GRID_TOLERANCE: f64 = 2.5e-4;
/// Maximum relative error tolerated by the exactness audit.
pub const AUDIT_TOLERANCE: f64 = 1e-3;
const AUDIT_POINTS: usize = 50;
const INITIAL_GRID: usize = 40;
const MAX_GRID: usize = 4000;
const BOUNDARY_WIDTH: f64 = 1e-7;
const LN_FLOOR: f64 = -690.0;
/// Percentiles tabulated by default.
pub const DEFAULT_PERCENTILES: [f64; 5] = [5.0, 10.0, 50.0, 90.0, 95.0];

/// Fritsch–Carlson monotone cubic interpolant.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 2 || y.len() != n {
            return Err(Error::domain(
                "monotone interpolation needs at least two points",
            ));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain(
                "interpolation nodes must be strictly increasing",
            ));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let s: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        if n == 2 {
            d[0] = s[0];
            d[1] = s[0];
        } else {
            for i in 1..n - 1 {
                if s[i - 1] * s[i] > 0.0 {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    d[i] = (w1 + w2) / (w1 / s[i - 1] + w2 / s[i]);
                }
            }
            d[0] = end_slope(h[0], h[1], s[0], s[1]);
            d[n - 1] = end_slope(h[n - 2], h[n - 3], s[n - 2], s[n - 3]);
        }
        Ok(Pchip { x, y, d })
    }

    /// Clamped to the end values outside the node range.
    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        if t <= self.x[0] {
            return self.y[0];
        }
        if t >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = self.x.partition_point(|&v| v <= t) - 1;
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }

    pub fn nodes(&self) -> &[f64] {
        &self.x
    }
}

fn end_slope(h0: f64, h1: f64, s0: f64, s1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * s0 - h0 * s1) / (h0 + h1);
    if d * s0 <= 0.0 {
        0.0
    } else if s0 * s1 <= 0.0 && d.abs() > 3.0 * s0.abs() {
        3.0 * s0
    } else {
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct GridPoint {
    ln_r: f64,
    ln_excess: f64,
    censored: bool,
}

/// `E[L | R₀]` tabulated on an adaptive grid, one interpolant per
/// continuous piece of the path loss.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionalGrid {
    /// `(lowest R₀ covered, interpolant in ln R₀)`, ascending.
    pieces: Vec<(f64, Pchip)>,
    /// Every `R₀` at or beyond this distance is censored.
    censored_from: Option<f64>,
}

fn to_ln_excess(beyond_first: f64) -> f64 {
    if beyond_first > 0.0 {
        beyond_first.ln().clamp(LN_FLOOR, f64::MAX.ln())
    } else {
        LN_FLOOR
    }
}

fn excess_from_ln(y: f64) -> f64 {
    if y <= LN_FLOOR {
        0.0
    } else {
        y.exp()
    }
}

fn eval_point(engine: &ConditionalEngine, ln_r: f64) -> Result<GridPoint> {
    let s = engine.eval(ln_r.exp())?;
    Ok(GridPoint {
        ln_r,
        ln_excess: to_ln_excess(s.beyond_first),
        censored: !s.is_converged(),
    })
}

fn rel_gap(y_interp: f64, y_true: f64) -> f64 {
    let a = 1.0 + excess_from_ln(y_interp);
    let b = 1.0 + excess_from_ln(y_true);
    ((a - b) / b).abs()
}

fn interpolant(pts: &[GridPoint]) -> Result<Pchip> {
    Pchip::new(
        pts.iter().map(|p| p.ln_r).collect(),
        pts.iter().map(|p| p.ln_excess).collect(),
    )
}

/// Adaptive refinement on `[a, b]` in `ln R₀`. An interval is split when the
/// value at its midpoint misses the current interpolant; intervals near a new
/// node are rechecked because the node changes their slopes.
fn refine(engine: &ConditionalEngine, a: f64, b: f64) -> Result<Vec<GridPoint>> {
    let b = b.max(a + 1e-6);
    let mut pts: Vec<GridPoint> = (0..INITIAL_GRID)
        .into_par_iter()
        .map(|i| eval_point(engine, a + (b - a) * i as f64 / (INITIAL_GRID - 1) as f64))
        .collect::<Result<_>>()?;
    let mut open: Vec<usize> = (0..pts.len() - 1).collect();
    while !open.is_empty() && pts.len() < MAX_GRID {
        let interp = interpolant(&pts)?;
        let mids: Vec<GridPoint> = open
            .par_iter()
            .map(|&i| eval_point(engine, 0.5 * (pts[i].ln_r + pts[i + 1].ln_r)))
            .collect::<Result<_>>()?;
        let mut next = Vec::with_capacity(pts.len() + mids.len());
        let mut marks = Vec::new();
        let mut k = 0;
        for i in 0..pts.len() {
            next.push(pts[i]);
            if k < open.len() && open[k] == i {
                let (lo, mid, hi) = (pts[i], mids[k], pts[i + 1]);
                k += 1;
                if hi.ln_r - lo.ln_r <= 2.0 * BOUNDARY_WIDTH {
                    continue;
                }
                let flip = lo.censored != hi.censored;
                if flip || rel_gap(interp.eval(mid.ln_r), mid.ln_excess) > GRID_TOLERANCE {
                    next.push(mid);
                    let at = next.len() - 1;
                    marks.extend(at.saturating_sub(3)..at + 3);
                }
            }
        }
        let intervals = next.len() - 1;
        marks.retain(|&i| i < intervals);
        marks.sort_unstable();
        marks.dedup();
        pts = next;
        open = marks;
    }
    Ok(pts)
}

impl ConditionalGrid {
    /// Refines until midpoint interpolation errors fall below [`GRID_TOLERANCE`].
    pub fn build(engine: &ConditionalEngine, r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max.is_finite() && r_max >= r_min) {
            return Err(Error::domain(format!("bad grid range [{r_min}, {r_max}]")));
        }
        let plm = engine.path_loss();
        let rc = plm.r_critical;
        let mut ranges = vec![(r_min, r_max)];
        if !plm.is_single_slope() && r_min < rc && rc <= r_max {
            ranges = vec![(r_min, rc * (1.0 - 1e-12)), (rc, r_max)];
        }
        let mut pieces = Vec::new();
        let mut censored_from = None;
        for (lo, hi) in ranges {
            let pts = refine(engine, lo.ln(), hi.ln())?;
            if censored_from.is_none() {
                censored_from = pts.iter().find(|p| p.censored).map(|p| p.ln_r.exp());
            }
            pieces.push((lo, interpolant(&pts)?));
        }
        Ok(ConditionalGrid {
            pieces,
            censored_from,
        })
    }

    /// Interpolated `(E[L | R₀] − 1, censored)`.
    pub fn excess(&self, r0: f64) -> (f64, bool) {
        let censored = self.censored_from.is_some_and(|c| r0 >= c);
        let idx = self.pieces.partition_point(|(lo, _)| *lo <= r0).max(1) - 1;
        (
            excess_from_ln(self.pieces[idx].1.eval(r0.max(1e-300).ln())),
            censored,
        )
    }

    pub fn len(&self) -> usize {
        self.pieces.iter().map(|(_, p)| p.nodes().len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn censored_from(&self) -> Option<f64> {
        self.censored_from
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridAudit {
    pub points: usize,
    pub max_rel_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "seconds")]
pub enum QuantileValue {
    Value(f64),
    /// The quantile sits inside the censored mass; only a lower bound is known.
    AtLeast(f64),
}

impl std::fmt::Display for QuantileValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QuantileValue::Value(v) => write!(f, "{v:e}"),
            QuantileValue::AtLeast(v) => write!(f, ">{v:e}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub slope: f64,
    pub intercept: f64,
    pub fit_range: (f64, f64),
    pub r_squared: f64,
    /// 95% Poisson-bootstrap interval for the slope.
    pub ci: (f64, f64),
    pub points_in_range: usize,
    /// Lower- and upper-half slopes differ by more than a factor 1.5.
    pub curvature_flag: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DelayDistribution {
    /// Finite delays ascending, then censored lower bounds ascending.
    pub sorted_delays: Vec<f64>,
    pub censored_count: usize,
    /// `(t, P(D ≥ t))`.
    pub ccdf_grid: Vec<(f64, f64)>,
    pub quantiles: Vec<(f64, QuantileValue)>,
    pub tail_fit: Option<TailFit>,
    /// Offset `Mτ` and period `T` used to map cycles to seconds.
    pub sweep_duration: f64,
    pub cycle_period: f64,
    pub grid_points: usize,
    pub audit: Option<GridAudit>,
}

impl DelayDistribution {
    /// Wraps a synthetic sample; `censored[i]` marks lower bounds.
    pub fn from_samples(delays: &[f64], censored: &[bool]) -> Result<Self> {
        if delays.is_empty() || censored.len() != delays.len() {
            return Err(Error::domain(
                "need one censoring flag per delay and at least one delay",
            ));
        }
        if delays.iter().any(|d| d.is_nan()) {
            return Err(Error::domain("delays must not be NaN"));
        }
        let mut fin: Vec<f64> = delays
            .iter()
            .zip(censored)
            .filter(|(_, c)| !**c)
            .map(|(d, _)| *d)
            .collect();
        let mut cen: Vec<f64> = delays
            .iter()
            .zip(censored)
            .filter(|(_, c)| **c)
            .map(|(d, _)| *d)
            .collect();
        fin.sort_by(f64::total_cmp);
        cen.sort_by(f64::total_cmp);
        let censored_count = cen.len();
        fin.extend(cen);
        let mut dist = DelayDistribution {
            sorted_delays: fin,
            censored_count,
            ccdf_grid: Vec::new(),
            quantiles: Vec::new(),
            tail_fit: None,
            sweep_duration: 0.0,
            cycle_period: 1.0,
            grid_points: 0,
            audit: None,
        };
        dist.ccdf_grid = dist.ccdf_table(200);
        dist.quantiles = DEFAULT_PERCENTILES
            .iter()
            .map(|&p| {
                (
                    p,
                    dist.quantile_value(p)
                        .expect("default percentiles are valid"),
                )
            })
            .collect();
        dist.tail_fit = tail_exponent(&dist).ok();
        Ok(dist)
    }

    pub fn len(&self) -> usize {
        self.sorted_delays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted_delays.is_empty()
    }

    pub fn censored_fraction(&self) -> f64 {
        self.censored_count as f64 / self.len() as f64
    }

    /// Finite (non-censored) delays, ascending.
    pub fn finite_delays(&self) -> &[f64] {
        &self.sorted_delays[..self.len() - self.censored_count]
    }

    /// Empirical `P(D ≥ t)`, counting censored lower bounds at face value.
    pub fn ccdf(&self, t: f64) -> f64 {
        let fin = self.finite_delays();
        let cen = &self.sorted_delays[fin.len()..];
        let above = fin.len() - fin.partition_point(|&d| d < t) + cen.len()
            - cen.partition_point(|&d| d < t);
        above as f64 / self.len() as f64
    }

    /// `n` log-spaced points spanning the sample.
    pub fn ccdf_table(&self, n: usize) -> Vec<(f64, f64)> {
        let lo = self
            .sorted_delays
            .iter()
            .copied()
            .filter(|&d| d > 0.0)
            .fold(f64::INFINITY, f64::min);
        let hi = self.sorted_delays.iter().copied().fold(0.0, f64::max);
        if !lo.is_finite() || n < 2 {
            return vec![(0.0, 1.0)];
        }
        if hi <= lo {
            return vec![(lo, 1.0)];
        }
        let (a, b) = (lo.ln(), hi.ln());
        (0..n)
            .map(|i| {
                let t = match i {
                    0 => lo,
                    _ if i == n - 1 => hi,
                    _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
                };
                (t, self.ccdf(t))
            })
            .collect()
    }

    /// Quantile for the `p`-th percentile user: cell-centre users sit at high
    /// percentiles, so the CDF level is `1 − p/100`.
    pub fn quantile_value(&self, percentile: f64) -> Result<QuantileValue> {
        if !(percentile > 0.0 && percentile < 100.0) {
            return Err(Error::domain(format!(
                "percentile must be in (0, 100), got {percentile}"
            )));
        }
        let n = self.len();
        let idx = (((100.0 - percentile) * n as f64 / 100.0).ceil() as usize).clamp(1, n) - 1;
        let v = self.sorted_delays[idx];
        Ok(if idx >= n - self.censored_count {
            QuantileValue::AtLeast(v)
        } else {
            QuantileValue::Value(v)
        })
    }

    /// Sample mean and standard error of `E[L | R₀]`, censored values at their lower bound.
    pub fn cycles_mean(&self) -> (f64, f64) {
        let n = self.len() as f64;
        let l = |d: f64| (d - self.sweep_duration) / self.cycle_period + 1.0;
        let mean = self.sorted_delays.iter().map(|&d| l(d)).sum::<f64>() / n;
        let var = self
            .sorted_delays
            .iter()
            .map(|&d| (l(d) - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0).max(1.0);
        (mean, (var / n).sqrt())
    }

    pub fn write_ccdf_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t_seconds,ccdf")?;
        for (t, p) in &self.ccdf_grid {
            writeln!(w, "{t:e},{p:e}")?;
        }
        Ok(())
    }

    pub fn write_quantiles_csv<W: Write>(&self, mut w: W, percentiles: &[f64]) -> Result<()> {
        writeln!(w, "percentile,delay_seconds_or_censored")?;
        for &p in percentiles {
            writeln!(w, "{p},{}", self.quantile_value(p)?)?;
        }
        Ok(())
    }
}

/// Truncation used for distributions: an interference-limited run left at the
/// default term cap is raised to the extended-precision cap, so the heavy
/// upper tail of `R₀` is resolved rather than censored.
pub fn distribution_truncation(trunc: &Truncation, scenario: Scenario) -> Truncation {
    let default = Truncation::for_scenario(scenario);
    if scenario.has_interference() && trunc.j_cap == default.j_cap {
        trunc.with_cap(trunc.precision_cap)
    } else {
        *trunc
    }
}

/// Draws `n_samples` values of `R₀` and maps each to its conditional mean delay.
pub fn build_delay_distribution<R: Rng + ?Sized>(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    n_samples: usize,
    trunc: &Truncation,
    quad: &QuadratureSpec,
    rng: &mut R,
) -> Result<DelayDistribution> {
    if n_samples < MIN_SAMPLES {
        return Err(Error::config(
            "samples",
            format!("must be >= {MIN_SAMPLES}, got {n_samples}"),
        ));
    }
    let engine = ConditionalEngine::new(cfg, plm, trunc, quad)?;
    let r0: Vec<f64> = (0..n_samples)
        .map(|_| sample_r0(cfg.lambda_bs, rng))
        .collect();
    let (r_min, r_max) = r0
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(a, b), &r| (a.min(r), b.max(r)));
    let grid = ConditionalGrid::build(&engine, r_min, r_max)?;

    let audit_idx: Vec<usize> = (0..AUDIT_POINTS)
        .map(|_| rng.random_range(0..n_samples))
        .collect();
    let errors: Vec<f64> = audit_idx
        .par_iter()
        .map(|&i| {
            let exact = engine.eval(r0[i])?;
            let (excess, _) = grid.excess(r0[i]);
            Ok(((1.0 + excess) - exact.value).abs() / exact.value)
        })
        .collect::<Result<_>>()?;
    let audit = GridAudit {
        points: AUDIT_POINTS,
        max_rel_error: errors.iter().copied().fold(0.0, f64::max),
    };

    let sweep = cfg.sweep_duration();
    let (delays, flags): (Vec<f64>, Vec<bool>) = r0
        .par_iter()
        .map(|&r| {
            let (excess, censored) = grid.excess(r);
            (excess * cfg.cycle_period + sweep, censored)
        })
        .unzip();
    let mut dist = DelayDistribution::from_samples(&delays, &flags)?;
    dist.sweep_duration = sweep;
    dist.cycle_period = cfg.cycle_period;
    dist.grid_points = grid.len();
    dist.audit = Some(audit);
    Ok(dist)
}

/// Delay of the `percentile`-th percentile user; errors inside the censored mass.
pub fn quantile_delay(dist: &DelayDistribution, percentile: f64) -> Result<f64> {
    match dist.quantile_value(percentile)? {
        QuantileValue::Value(v) => Ok(v),
        QuantileValue::AtLeast(v) => Err(Error::IndeterminateQuantile { lower_bound: v }),
    }
}

const TAIL_ANCHOR: usize = 100;
const TAIL_GRID: usize = 40;
const BOOTSTRAP_ROUNDS: usize = 200;

/// Least-squares slope of `ln P(D ≥ t)` against `ln t` over `[t_hi/10, t_hi]`,
/// where `t_hi` is the 100th largest finite delay.
pub fn tail_exponent(dist: &DelayDistribution) -> Result<TailFit> {
    let fin = dist.finite_delays();
    if fin.len() < TAIL_ANCHOR {
        return Err(Error::FitUnavailable(format!(
            "only {} finite delays, need at least {TAIL_ANCHOR}",
            fin.len()
        )));
    }
    let t_hi = fin[fin.len() - TAIL_ANCHOR];
    let t_lo = t_hi / 10.0;
    let start = fin.partition_point(|&d| d < t_lo);
    let in_range = fin.len() - start;
    if !(t_lo > 0.0) || in_range < TAIL_ANCHOR || fin[start] >= t_hi {
        return Err(Error::FitUnavailable(format!(
            "{in_range} delays in the top decade [{t_lo:e}, {t_hi:e}], need at least {TAIL_ANCHOR} distinct"
        )));
    }
    let ts: Vec<f64> = (0..TAIL_GRID)
        .map(|i| (t_lo.ln() + (t_hi / t_lo).ln() * i as f64 / (TAIL_GRID - 1) as f64).exp())
        .collect();
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = ts.iter().map(|&t| dist.ccdf(t).ln()).collect();
    let (slope, intercept, r_squared) = fit_with_r2(&xs, &ys)
        .ok_or_else(|| Error::FitUnavailable("degenerate tail window".into()))?;

    let half = TAIL_GRID / 2;
    let (s_lo, _, _) = fit_with_r2(&xs[..=half], &ys[..=half]).unwrap_or((slope, 0.0, 0.0));
    let (s_hi, _, _) = fit_with_r2(&xs[half..], &ys[half..]).unwrap_or((slope, 0.0, 0.0));
    let curvature_flag = !(s_lo < 0.0 && s_hi < 0.0) || (s_hi / s_lo).ln().abs() > 1.5f64.ln();

    let ci = bootstrap_ci(dist, start, &ts, &xs);
    Ok(TailFit {
        slope,
        intercept,
        fit_range: (t_lo, t_hi),
        r_squared,
        ci,
        points_in_range: in_range,
        curvature_flag,
    })
}

fn fit_with_r2(x: &[f64], y: &[f64]) -> Option<(f64, f64, f64)> {
    let (slope, intercept) = crate::analytic::series::linear_fit(x, y)?;
    let my = y.iter().sum::<f64>() / y.len() as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Some((slope, intercept, r2))
}

/// Every sample gets a Poisson(1) weight; the mass below the window only
/// enters through its total, drawn as one Poisson variate.
fn bootstrap_ci(dist: &DelayDistribution, start: usize, ts: &[f64], xs: &[f64]) -> (f64, f64) {
    let tail = &dist.sorted_delays[start..];
    let below = start as f64;
    let seed = derive_seed(dist.len() as u64, "tail-bootstrap");
    let mut slopes: Vec<f64> = (0..BOOTSTRAP_ROUNDS)
        .into_par_iter()
        .filter_map(|b| {
            let mut rng = stream(seed, b as u64);
            let unit = Poisson::new(1.0).ok()?;
            let mut total = if below > 0.0 {
                Poisson::new(below).ok()?.sample(&mut rng)
            } else {
                0.0
            };
            let w: Vec<f64> = tail.iter().map(|_| unit.sample(&mut rng)).collect();
            total += w.iter().sum::<f64>();
            // tail is sorted, so suffix sums give the weighted counts above t
            let mut suffix = vec![0.0; w.len() + 1];
            for i in (0..w.len()).rev() {
                suffix[i] = suffix[i + 1] + w[i];
            }
            let ys: Vec<f64> = ts
                .iter()
                .map(|&t| (suffix[tail.partition_point(|&d| d < t)] / total).ln())
                .collect();
            if ys.iter().any(|y| !y.is_finite()) {
                return None;
            }
            crate::analytic::series::linear_fit(xs, &ys).map(|(s, _)| s)
        })
        .collect();
    if slopes.len() < 10 {
        return (f64::NAN, f64::NAN);
    }
    slopes.sort_by(f64::total_cmp);
    let q =
        |p: f64| slopes[((p * (slopes.len() - 1) as f64).round() as usize).min(slopes.len() - 1)];
    (q(0.025), q(0.975))
}
