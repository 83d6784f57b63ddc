//! Conditional mean number of cycles given sector distances or the distance
//! `R₀` to the nearest BS.
//!
//! Given `R₀` the sector holding the nearest BS contributes `g_j(R₀)` and the
//! other `M − 1` sectors are i.i.d. with nearest distances beyond `R₀`, so
//!
//! ```text
//! E[L | R₀] = Σ_j g_j(R₀) · G_j(R₀)^{M−1},   G_j(R₀) = ∫_{v₀}^∞ g_j(v) e^{−(v−v₀)} dv
//! ```
//!
//! with `v = λπr²/M`. In the single-slope interference-limited case both
//! factors are alternating sums of closed forms in `H(k, α, Γ)`.

use rug::Float;

use super::hfunc::HTable;
use super::kernel::SectorKernel;
use super::precision::{precision_bits, AltSum};
use super::quadrature::QuadratureSpec;
use super::series::{SeriesAccumulator, SeriesResult, Truncation};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PathLossModel, Scenario};

/// Probability that a sector whose nearest BS is at `r` is still undetected
/// after `j` cycles.
pub fn sector_non_detection(
    r: f64,
    j: usize,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(Error::domain(format!("distance must be >= 0, got {r}")));
    }
    let k = SectorKernel::new(cfg, plm, j)?;
    let mut g = vec![0.0; j + 1];
    k.non_detection(r, &mut g)?;
    Ok(g[j])
}

/// Probability that the nearest BS of a sector at distance `r` is detected
/// within the first `j` cycles.
pub fn f_j_sector(r: f64, j: usize, cfg: &NetworkConfig, plm: &PathLossModel) -> Result<f64> {
    Ok((1.0 - sector_non_detection(r, j, cfg, plm)?).clamp(0.0, 1.0))
}

fn effective_cap(cfg: &NetworkConfig, trunc: &Truncation, acc: &mut SeriesAccumulator) -> usize {
    if cfg.scenario.has_interference() {
        acc.limit_by_precision(trunc.precision_cap + 1);
    }
    acc.cap()
}

/// `Σ_j Π_i g_j(R_i)` for the given nearest distance of every sector
/// (`+∞` marks an empty sector).
pub fn cond_mean_cycles_given_all_sectors(
    distances: &[f64],
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
) -> Result<SeriesResult> {
    if distances.len() != cfg.m_beams as usize {
        return Err(Error::domain(format!(
            "expected {} sector distances, got {}",
            cfg.m_beams,
            distances.len()
        )));
    }
    if distances.iter().any(|d| !(*d > 0.0)) {
        return Err(Error::domain("sector distances must be > 0"));
    }
    let mut acc = SeriesAccumulator::new(trunc);
    let n = effective_cap(cfg, trunc, &mut acc);
    let kernel = SectorKernel::new(cfg, plm, n - 1)?;
    let mut prod = vec![1.0; n];
    let mut g = vec![0.0; n];
    for &d in distances {
        kernel.non_detection(d, &mut g)?;
        prod.iter_mut().zip(&g).for_each(|(p, x)| *p *= x);
    }
    for &t in &prod {
        if acc.push(t) {
            break;
        }
    }
    Ok(acc.finish())
}

/// Reusable evaluator of `E[L | R₀]` for one configuration.
#[derive(Debug, Clone)]
pub struct ConditionalEngine {
    cfg: NetworkConfig,
    plm: PathLossModel,
    trunc: Truncation,
    quad: QuadratureSpec,
    cap: usize,
    precision_limited: bool,
    kernel: SectorKernel,
    // single-slope interference-limited closed forms
    closed: Option<ClosedForm>,
}

#[derive(Debug, Clone)]
struct ClosedForm {
    prec: u32,
    h: HTable,
    // 1/(1 + 2H(k))
    inv: Vec<Float>,
}

impl ConditionalEngine {
    pub fn new(
        cfg: &NetworkConfig,
        plm: &PathLossModel,
        trunc: &Truncation,
        quad: &QuadratureSpec,
    ) -> Result<Self> {
        cfg.validate()?;
        trunc.validate()?;
        quad.validate()?;
        let mut acc = SeriesAccumulator::new(trunc);
        let cap = effective_cap(cfg, trunc, &mut acc);
        let precision_limited = cap < trunc.j_cap;
        let closed = if cfg.scenario == Scenario::InterferenceLimited
            && plm.is_single_slope()
            && plm.alpha_nlos > 2.0
        {
            let prec = precision_bits(cap - 1) * trunc.precision_multiplier;
            let h = HTable::new(plm.alpha_nlos, cfg.sinr_threshold, cap - 1, prec)?;
            let inv = (0..cap)
                .map(|k| (Float::with_val(prec, h.get(k) * 2u32) + 1u32).recip())
                .collect();
            Some(ClosedForm { prec, h, inv })
        } else {
            None
        };
        // the closed form never touches the kernel beyond index 0
        let kernel_jmax = if closed.is_some() { 1 } else { cap - 1 };
        let kernel = SectorKernel::with_precision_multiplier(
            cfg,
            plm,
            kernel_jmax,
            trunc.precision_multiplier,
        )?;
        Ok(ConditionalEngine {
            cfg: cfg.clone(),
            plm: *plm,
            trunc: *trunc,
            quad: *quad,
            cap,
            precision_limited,
            kernel,
            closed,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn path_loss(&self) -> &PathLossModel {
        &self.plm
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    fn accumulator(&self) -> SeriesAccumulator {
        let mut acc = SeriesAccumulator::new(&self.trunc);
        if self.precision_limited {
            acc.limit_by_precision(self.cap);
        }
        acc
    }

    /// `E[L | R₀ = r0]`.
    pub fn eval(&self, r0: f64) -> Result<SeriesResult> {
        if !(r0 >= 0.0 && r0.is_finite()) {
            return Err(Error::domain(format!(
                "r0 must be finite and >= 0, got {r0}"
            )));
        }
        if self.cfg.m_beams == 1 {
            return Ok(self.eval_single_sector(r0));
        }
        self.eval_series(r0)
    }

    /// Partial sums `Σ_{j<cap} P(L > j | R₀)` without the single-sector
    /// shortcut, i.e. `E[min(L, j_cap) | R₀]` when the cap is reached.
    pub fn eval_series(&self, r0: f64) -> Result<SeriesResult> {
        Ok(self.accumulate(r0)?.finish())
    }

    /// [`eval_series`](Self::eval_series) together with the variance of
    /// `min(L, n)`, where `n` is the number of terms summed:
    /// `E[min(L, n)²] = Σ_{j<n} (2j+1)·P(L > j)`.
    pub fn eval_series_with_variance(&self, r0: f64) -> Result<(SeriesResult, f64)> {
        let acc = self.accumulate(r0)?;
        let second: f64 = acc
            .terms()
            .iter()
            .enumerate()
            .map(|(j, t)| (2 * j + 1) as f64 * t)
            .sum();
        let res = acc.finish();
        Ok((res.clone(), (second - res.value * res.value).max(0.0)))
    }

    fn accumulate(&self, r0: f64) -> Result<SeriesAccumulator> {
        if !(r0 >= 0.0 && r0.is_finite()) {
            return Err(Error::domain(format!(
                "r0 must be finite and >= 0, got {r0}"
            )));
        }
        let m = self.cfg.m_beams;
        if let Some(cf) = &self.closed {
            return Ok(self.accumulate_closed(cf, r0));
        }
        let v0 = self.kernel.v_of_r(r0);
        let n = match self.cfg.scenario {
            Scenario::NoiseLimited => {
                // terms are bounded by q₀^j, so stop computing once that is negligible
                let wl = self.cfg.noise_exponent_scale() * self.plm.eval(r0);
                let q0 = -(-wl).exp_m1();
                let need = if q0 <= 0.0 {
                    2
                } else if q0 >= 1.0 {
                    self.cap
                } else {
                    ((self.trunc.abs_tolerance.ln() / q0.ln()).ceil() as usize).saturating_add(8)
                };
                need.clamp(2, self.cap)
            }
            _ => self.cap,
        };
        let mut g0 = vec![0.0; n];
        self.kernel.non_detection(r0, &mut g0)?;
        let tail = self.kernel.tail_moments(v0, n, &self.quad)?;
        let mut acc = self.accumulator();
        for j in 0..n {
            let t = g0[j] * tail[j].powi(m as i32 - 1);
            if acc.push(t) {
                break;
            }
        }
        Ok(acc)
    }

    /// With one sector `E[L | R₀] = E[1/F | R₀]`, and the PPP Laplace
    /// functional gives `exp(w l₀ + 2πλΓ l₀ ∫_{R₀}^∞ r/l(r) dr)`.
    fn eval_single_sector(&self, r0: f64) -> SeriesResult {
        let l0 = self.plm.eval(r0);
        let mut exponent = 0.0;
        if self.cfg.scenario.has_noise() {
            exponent += self.cfg.noise_exponent_scale() * l0;
        }
        if self.cfg.scenario.has_interference() && l0 > 0.0 {
            exponent += 2.0
                * std::f64::consts::PI
                * self.cfg.lambda_bs
                * self.cfg.sinr_threshold
                * l0
                * self.plm.inverse_moment_beyond(r0);
        }
        SeriesResult::exact(exponent.exp(), exponent.exp_m1())
    }

    fn accumulate_closed(&self, cf: &ClosedForm, r0: f64) -> SeriesAccumulator {
        let prec = cf.prec;
        let m = self.cfg.m_beams;
        let two_v = Float::with_val(prec, 2.0 * self.kernel.v_of_r(r0));
        let mut own = AltSum::with_capacity(prec, self.cap);
        let mut others = AltSum::with_capacity(prec, self.cap);
        let mut acc = self.accumulator();
        for k in 0..self.cap {
            let e = Float::with_val(prec, &two_v * cf.h.get(k));
            let mk = (-e).exp();
            let gk = Float::with_val(prec, &mk * &cf.inv[k]);
            let big_g = others.push(gk).clamp(0.0, 1.0);
            let t = own.push(mk).clamp(0.0, 1.0) * big_g.powi(m as i32 - 1);
            if acc.push(t) {
                break;
            }
        }
        acc
    }
}

/// One-shot `E[L | R₀ = r0]`.
pub fn cond_mean_cycles_given_r0(
    r0: f64,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
) -> Result<SeriesResult> {
    if !(r0 > 0.0) {
        return Err(Error::domain(format!("r0 must be > 0, got {r0}")));
    }
    ConditionalEngine::new(cfg, plm, trunc, &QuadratureSpec::default())?.eval(r0)
}
