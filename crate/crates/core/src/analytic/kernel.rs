//! Per-sector non-detection probabilities `g_j(r) = E[(1 − F)^j | nearest at r]`
//! and their averages over the nearest-distance law.
//!
//! With `w = WΓ/(PM)` the moments of the detection probability `F` are
//! `m_k(r) = exp(−k w l(r) − (2πλ/M) I_k(r))`, and `g_j` is their alternating
//! binomial sum. Without interference this collapses to `(1 − e^{−w l(r)})^j`,
//! which is evaluated directly in double precision.

use std::f64::consts::PI;

use rug::Float;

use super::hfunc::{interference_integral, HTable};
use super::precision::{precision_bits, AltSum};
use super::quadrature::{integrate_exp_tail_vec, QuadratureSpec};
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PathLossModel};

#[derive(Debug, Clone)]
enum Mode {
    /// `g_j = q^j`
    NoiseOnly,
    /// Alternating sums at `prec` bits; `h` caches `H(k, α_N, Γ)`.
    Alternating { prec: u32, h: Option<HTable> },
}

#[derive(Debug, Clone)]
pub struct SectorKernel {
    cfg: NetworkConfig,
    plm: PathLossModel,
    j_max: usize,
    mode: Mode,
}

impl SectorKernel {
    /// Kernel able to produce `g_0 … g_{j_max}`.
    pub fn new(cfg: &NetworkConfig, plm: &PathLossModel, j_max: usize) -> Result<Self> {
        Self::with_precision_multiplier(cfg, plm, j_max, 1)
    }

    pub fn with_precision_multiplier(
        cfg: &NetworkConfig,
        plm: &PathLossModel,
        j_max: usize,
        multiplier: u32,
    ) -> Result<Self> {
        let mode = if cfg.scenario.has_interference() {
            let prec = precision_bits(j_max) * multiplier;
            let h = if plm.alpha_nlos > 2.0 {
                Some(HTable::new(
                    plm.alpha_nlos,
                    cfg.sinr_threshold,
                    j_max,
                    prec,
                )?)
            } else {
                None
            };
            Mode::Alternating { prec, h }
        } else {
            Mode::NoiseOnly
        };
        Ok(SectorKernel {
            cfg: cfg.clone(),
            plm: *plm,
            j_max,
            mode,
        })
    }

    /// Same kernel but forced through the alternating sums, whatever the scenario.
    pub fn new_alternating(cfg: &NetworkConfig, plm: &PathLossModel, j_max: usize) -> Result<Self> {
        let mut k = SectorKernel::new(cfg, plm, j_max)?;
        if matches!(k.mode, Mode::NoiseOnly) {
            k.mode = Mode::Alternating {
                prec: precision_bits(j_max),
                h: None,
            };
        }
        Ok(k)
    }

    pub fn j_max(&self) -> usize {
        self.j_max
    }

    pub fn is_alternating(&self) -> bool {
        matches!(self.mode, Mode::Alternating { .. })
    }

    /// `λπr²/M`.
    pub fn v_of_r(&self, r: f64) -> f64 {
        self.cfg.sector_area_rate() * r * r
    }

    pub fn r_of_v(&self, v: f64) -> f64 {
        (v.max(0.0) / self.cfg.sector_area_rate()).sqrt()
    }

    /// Breakpoint of the path loss in `v`, if any.
    pub fn kinks(&self) -> Vec<f64> {
        if self.plm.is_single_slope() {
            Vec::new()
        } else {
            vec![self.v_of_r(self.plm.r_critical)]
        }
    }

    /// Writes `g_0(r) … g_{n−1}(r)` into `out[..n]`.
    pub fn non_detection(&self, r: f64, out: &mut [f64]) -> Result<()> {
        let n = out.len();
        if n == 0 {
            return Ok(());
        }
        if n > self.j_max + 1 {
            return Err(Error::PrecisionExceeded {
                j: n - 1,
                cap: self.j_max,
            });
        }
        if r.is_infinite() {
            out.iter_mut().for_each(|g| *g = 1.0);
            return Ok(());
        }
        let l = self.plm.eval(r);
        if l == 0.0 {
            out.iter_mut()
                .enumerate()
                .for_each(|(j, g)| *g = if j == 0 { 1.0 } else { 0.0 });
            return Ok(());
        }
        let wl = self.cfg.noise_exponent_scale() * l;
        match &self.mode {
            Mode::NoiseOnly => {
                let q = -(-wl).exp_m1();
                let mut p = 1.0;
                for g in out.iter_mut() {
                    *g = p;
                    p *= q;
                }
                Ok(())
            }
            Mode::Alternating { prec, h } => {
                let prec = *prec;
                let mut alt = AltSum::with_capacity(prec, n);
                let wl_f = Float::with_val(prec, wl);
                let interference = self.cfg.scenario.has_interference();
                let rate = Float::with_val(prec, 2.0 * PI * self.cfg.lambda_bs / self.cfg.m());
                let single = self.plm.is_single_slope() || r >= self.plm.r_critical;
                let two_v = Float::with_val(prec, 2.0 * self.v_of_r(r));
                for (k, g) in out.iter_mut().enumerate() {
                    let mut e = Float::with_val(prec, &wl_f * k as u64);
                    if interference && k > 0 {
                        match h {
                            None => {
                                // α_N ≤ 2: infinite interference, every k ≥ 1 moment vanishes
                                *g = alt.push(Float::with_val(prec, 0)).clamp(0.0, 1.0);
                                continue;
                            }
                            Some(h) if single => e += Float::with_val(prec, &two_v * h.get(k)),
                            Some(_) => {
                                let i_k = interference_integral(
                                    k as u64,
                                    r,
                                    &self.plm,
                                    self.cfg.sinr_threshold,
                                    prec,
                                )?;
                                e += Float::with_val(prec, &rate * &i_k);
                            }
                        }
                    }
                    let m = (-e).exp();
                    *g = alt.push(m).clamp(0.0, 1.0);
                }
                Ok(())
            }
        }
    }

    /// `∫_{v₀}^∞ g_j(v) e^{−(v−v₀)} dv` for `j < n`, i.e. the non-detection
    /// probabilities averaged over a sector's nearest BS beyond `r(v₀)`.
    pub fn tail_moments(&self, v0: f64, n: usize, quad: &QuadratureSpec) -> Result<Vec<f64>> {
        let mut err: Option<Error> = None;
        let res = integrate_exp_tail_vec(
            |v, out| {
                if err.is_some() {
                    out.iter_mut().for_each(|x| *x = 0.0);
                    return;
                }
                if let Err(e) = self.non_detection(self.r_of_v(v), out) {
                    err = Some(e);
                }
            },
            n,
            v0,
            &self.kinks(),
            quad,
        );
        if let Some(e) = err {
            return Err(e);
        }
        Ok(res?.values.into_iter().map(|x| x.clamp(0.0, 1.0)).collect())
    }
}
