//! Truncated-series accumulation with convergence and divergence diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Scenario;

/// Series truncation knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Maximum number of terms, i.e. indices `j = 0 … j_cap − 1`.
    pub j_cap: usize,
    pub abs_tolerance: f64,
    /// Slack on the `−1` slope that separates summable from non-summable tails.
    pub fit_margin: f64,
    /// Largest index for which extended-precision alternating sums are attempted.
    pub precision_cap: usize,
    /// Scales the working precision of the alternating sums.
    #[serde(default = "one")]
    pub precision_multiplier: u32,
}

fn one() -> u32 {
    1
}

impl Truncation {
    pub const DEFAULT_PRECISION_CAP: usize = 500;

    /// 1500 terms for noise-limited networks, 100 otherwise.
    pub fn for_scenario(scenario: Scenario) -> Self {
        let j_cap = match scenario {
            Scenario::NoiseLimited => 1500,
            Scenario::InterferenceLimited | Scenario::General => 100,
        };
        Truncation {
            j_cap,
            abs_tolerance: 1e-10,
            fit_margin: 0.05,
            precision_cap: Self::DEFAULT_PRECISION_CAP,
            precision_multiplier: 1,
        }
    }

    pub fn with_cap(self, j_cap: usize) -> Self {
        Truncation { j_cap, ..self }
    }

    pub fn with_tolerance(self, abs_tolerance: f64) -> Self {
        Truncation {
            abs_tolerance,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.j_cap < 2 {
            return Err(Error::config("truncation.j_cap", "must be >= 2"));
        }
        if !(self.abs_tolerance > 0.0) {
            return Err(Error::config("truncation.abs_tolerance", "must be > 0"));
        }
        if !(self.fit_margin >= 0.0) {
            return Err(Error::config("truncation.fit_margin", "must be >= 0"));
        }
        if self.precision_multiplier == 0 {
            return Err(Error::config(
                "truncation.precision_multiplier",
                "must be >= 1",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeriesStatus {
    Converged,
    TruncatedAtCap,
    DivergenceSuspected,
}

impl std::fmt::Display for SeriesStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SeriesStatus::Converged => "converged",
            SeriesStatus::TruncatedAtCap => "truncated-at-cap",
            SeriesStatus::DivergenceSuspected => "divergence-suspected",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    /// Partial sum over the terms used.
    pub value: f64,
    /// Partial sum without the `j = 0` term, exact even when `value` is close to 1.
    pub beyond_first: f64,
    pub terms_used: usize,
    pub last_term: f64,
    pub status: SeriesStatus,
    /// `β` in `term_j ≈ c·j^{−β}` over the last decade of terms.
    pub tail_exponent_estimate: Option<f64>,
    /// Power-law extrapolation of the omitted tail, when the fit is summable.
    pub remainder_estimate: Option<f64>,
    /// The cap came from the extended-precision budget rather than `j_cap`.
    pub precision_limited: bool,
}

impl SeriesResult {
    /// A value known in closed form.
    pub fn exact(value: f64, beyond_first: f64) -> Self {
        let status = if value.is_finite() {
            SeriesStatus::Converged
        } else {
            SeriesStatus::DivergenceSuspected
        };
        SeriesResult {
            value,
            beyond_first,
            terms_used: 0,
            last_term: 0.0,
            status,
            tail_exponent_estimate: None,
            remainder_estimate: None,
            precision_limited: false,
        }
    }

    /// `value`, or `+∞` when the tail looks non-summable.
    pub fn mean_or_infinite(&self) -> f64 {
        match self.status {
            SeriesStatus::DivergenceSuspected => f64::INFINITY,
            _ => self.value,
        }
    }

    pub fn is_converged(&self) -> bool {
        self.status == SeriesStatus::Converged
    }
}

/// Least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<(f64, f64)> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    if sxx <= 0.0 {
        return None;
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Slope of `ln term_j` against `ln j` over `j ∈ [len/10, len)`, `j ≥ 1`.
pub fn last_decade_slope(terms: &[f64]) -> Option<f64> {
    let n = terms.len();
    let lo = (n / 10).max(1);
    let (xs, ys): (Vec<f64>, Vec<f64>) = (lo..n)
        .filter(|&j| terms[j] > 0.0)
        .map(|j| ((j as f64).ln(), terms[j].ln()))
        .unzip();
    if xs.len() < 5 {
        return None;
    }
    linear_fit(&xs, &ys).map(|(s, _)| s)
}

/// Feeds terms `j = 0, 1, …` and decides when to stop.
#[derive(Debug, Clone)]
pub struct SeriesAccumulator {
    trunc: Truncation,
    cap: usize,
    terms: Vec<f64>,
    // Neumaier-compensated sum of terms j ≥ 1
    sum: f64,
    comp: f64,
    converged: bool,
    precision_limited: bool,
}

impl SeriesAccumulator {
    pub fn new(trunc: &Truncation) -> Self {
        SeriesAccumulator {
            trunc: *trunc,
            cap: trunc.j_cap,
            terms: Vec::with_capacity(trunc.j_cap.min(4096)),
            sum: 0.0,
            comp: 0.0,
            converged: false,
            precision_limited: false,
        }
    }

    /// Lowers the effective cap to `cap` because of the precision budget.
    pub fn limit_by_precision(&mut self, cap: usize) {
        if cap < self.cap {
            self.cap = cap;
            self.precision_limited = true;
        }
    }

    /// Number of terms that may still be requested.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds the next term; returns `true` once no further terms are wanted.
    pub fn push(&mut self, term: f64) -> bool {
        if self.is_done() {
            return true;
        }
        let j = self.terms.len();
        let term = if term.is_nan() { 0.0 } else { term.max(0.0) };
        if j > 0 {
            let t = self.sum + term;
            if self.sum.abs() >= term.abs() {
                self.comp += (self.sum - t) + term;
            } else {
                self.comp += (term - t) + self.sum;
            }
            self.sum = t;
        }
        let prev = self.terms.last().copied();
        self.terms.push(term);
        if j > 0 && term < self.trunc.abs_tolerance && prev.is_none_or(|p| term <= p) {
            self.converged = true;
        }
        self.is_done()
    }

    pub fn is_done(&self) -> bool {
        self.converged || self.terms.len() >= self.cap
    }

    pub fn finish(self) -> SeriesResult {
        let beyond_first = self.sum + self.comp;
        let first = self.terms.first().copied().unwrap_or(0.0);
        let last_term = self.terms.last().copied().unwrap_or(0.0);
        let slope = if self.terms.len() >= 20 {
            last_decade_slope(&self.terms)
        } else {
            None
        };
        let tail_exponent_estimate = slope.map(|s| -s);
        let status = if self.converged {
            SeriesStatus::Converged
        } else {
            match slope {
                Some(s) if s < -1.0 - self.trunc.fit_margin => SeriesStatus::TruncatedAtCap,
                // no usable fit (all-zero or too few terms) only happens with tiny caps
                None if last_term == 0.0 => SeriesStatus::TruncatedAtCap,
                _ => SeriesStatus::DivergenceSuspected,
            }
        };
        let remainder_estimate = match tail_exponent_estimate {
            Some(beta) if beta > 1.0 => {
                let j = (self.terms.len() - 1) as f64;
                Some(last_term * j / (beta - 1.0))
            }
            _ => None,
        };
        SeriesResult {
            value: first + beyond_first,
            beyond_first,
            terms_used: self.terms.len(),
            last_term,
            status,
            tail_exponent_estimate,
            remainder_estimate,
            precision_limited: self.precision_limited,
        }
    }

    pub fn terms(&self) -> &[f64] {
        &self.terms
    }
}

/// Runs `next(j)` for `j = 0, 1, …` until the accumulator stops.
pub fn sum_series<F: FnMut(usize) -> Result<f64>>(
    trunc: &Truncation,
    mut next: F,
) -> Result<SeriesResult> {
    let mut acc = SeriesAccumulator::new(trunc);
    let mut j = 0;
    while !acc.is_done() {
        acc.push(next(j)?);
        j += 1;
    }
    Ok(acc.finish())
}
