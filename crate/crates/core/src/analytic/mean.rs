//! Unconditional mean number of cycles, `E[L] = Σ_j A_j^M` with
//! `A_j = E[(1 − F)^j]` the probability that one sector stays undetected for
//! `j` cycles.

use rand::Rng;
use rug::Float;

use super::hfunc::HTable;
use super::kernel::SectorKernel;
use super::precision::{precision_bits, AltSum};
use super::quadrature::QuadratureSpec;
use super::series::{SeriesAccumulator, SeriesResult, Truncation};
use crate::error::{Error, Result};
use crate::geometry::{
    default_window_radius, nearest_per_sector, norm, sample_ppp_disk, sector_of,
};
use crate::model::{NetworkConfig, PathLossModel, Scenario};
use crate::rng::stream;

/// `A_0 … A_{n−1}`.
pub fn a_sequence(
    n: usize,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    quad: &QuadratureSpec,
) -> Result<Vec<f64>> {
    a_sequence_capped(n, cfg, plm, quad, Truncation::DEFAULT_PRECISION_CAP, 1)
}

pub(crate) fn a_sequence_capped(
    n: usize,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    quad: &QuadratureSpec,
    precision_cap: usize,
    precision_multiplier: u32,
) -> Result<Vec<f64>> {
    if n == 0 {
        return Ok(Vec::new());
    }
    let j_max = n - 1;
    let needs_mp = cfg.scenario.has_interference();
    if needs_mp && j_max > precision_cap {
        return Err(Error::PrecisionExceeded {
            j: j_max,
            cap: precision_cap,
        });
    }
    if cfg.scenario == Scenario::InterferenceLimited && plm.is_single_slope() {
        return interference_limited_a(n, plm.alpha_nlos, cfg.sinr_threshold, precision_multiplier);
    }
    let mut a = SectorKernel::with_precision_multiplier(cfg, plm, j_max, precision_multiplier)?
        .tail_moments(0.0, n, quad)?;
    a[0] = 1.0;
    a.iter_mut().for_each(|x| *x = x.clamp(0.0, 1.0));
    Ok(a)
}

/// `A_j = Σ_k (−1)^k C(j,k) / (1 + 2H(k))`, free of the intensity.
fn interference_limited_a(n: usize, alpha: f64, gamma: f64, multiplier: u32) -> Result<Vec<f64>> {
    if alpha <= 2.0 {
        // every sector is drowned by interference
        return Ok(vec![1.0; n]);
    }
    let prec = precision_bits(n - 1) * multiplier;
    let h = HTable::new(alpha, gamma, n - 1, prec)?;
    let mut alt = AltSum::with_capacity(prec, n);
    Ok((0..n)
        .map(|k| {
            let den = Float::with_val(prec, h.get(k) * 2u32) + 1u32;
            alt.push(den.recip()).clamp(0.0, 1.0)
        })
        .collect())
}

/// A single `A_j`.
pub fn a_j(j: usize, cfg: &NetworkConfig, plm: &PathLossModel) -> Result<f64> {
    Ok(a_sequence(j + 1, cfg, plm, &QuadratureSpec::default())?[j])
}

fn sum_powers(a: &[f64], m: u32, acc: &mut SeriesAccumulator) {
    for &x in a {
        if acc.push(x.powi(m as i32)) {
            break;
        }
    }
}

/// `Σ_j A_j^M` up to convergence or the cap.
pub fn mean_cycles(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
) -> Result<SeriesResult> {
    mean_cycles_with(cfg, plm, trunc, &QuadratureSpec::default())
}

pub fn mean_cycles_with(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
    quad: &QuadratureSpec,
) -> Result<SeriesResult> {
    cfg.validate()?;
    trunc.validate()?;
    let mut acc = SeriesAccumulator::new(trunc);
    if cfg.scenario.has_interference() {
        acc.limit_by_precision(trunc.precision_cap + 1);
    }
    let n = acc.cap();
    let a = a_sequence_capped(
        n,
        cfg,
        plm,
        quad,
        trunc.precision_cap,
        trunc.precision_multiplier,
    )?;
    debug_assert!(
        a.windows(2).all(|w| w[1] <= w[0] + 1e-9),
        "A_j must be non-increasing"
    );
    sum_powers(&a, cfg.m_beams, &mut acc);
    Ok(acc.finish())
}

/// The noise-limited series, evaluated with the direct power form.
pub fn mean_cycles_noise_limited(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
) -> Result<SeriesResult> {
    if cfg.scenario != Scenario::NoiseLimited {
        return Err(Error::domain(format!(
            "mean_cycles_noise_limited needs a noise-limited configuration, got {}",
            cfg.scenario
        )));
    }
    mean_cycles(cfg, plm, trunc)
}

/// The same partial sums computed through the alternating-sum kernel even
/// when a direct form exists; used to cross-check the two.
pub fn mean_cycles_alternating(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trunc: &Truncation,
    quad: &QuadratureSpec,
) -> Result<SeriesResult> {
    let mut acc = SeriesAccumulator::new(trunc);
    acc.limit_by_precision(trunc.precision_cap + 1);
    let n = acc.cap();
    let a = SectorKernel::new_alternating(cfg, plm, n - 1)?.tail_moments(0.0, n, quad)?;
    sum_powers(&a, cfg.m_beams, &mut acc);
    Ok(acc.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
}

/// `A_j` estimated over sampled topologies, for indices beyond the precision
/// budget. Interference beyond the sampling window enters through its exact
/// mean multiplicative effect on `F`.
pub fn a_j_monte_carlo(
    j: usize,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    cfg.validate()?;
    if samples < 2 {
        return Err(Error::config("samples", "must be >= 2"));
    }
    let window = default_window_radius(cfg.lambda_bs, cfg.m_beams);
    let m = cfg.m_beams;
    let g = cfg.sinr_threshold;
    let mut sum = 0.0;
    let mut sum2 = 0.0;
    for i in 0..samples {
        let mut rng = stream(seed, i as u64);
        let topo = sample_ppp_disk(cfg.lambda_bs, window, &mut rng);
        // isotropy: any sector will do, pick one at random
        let sector = rng.random_range(0..m as usize);
        let nearest = nearest_per_sector(&topo, m)[sector];
        let f = match nearest {
            None => 0.0,
            Some((d0, _)) => {
                let l0 = plm.eval(d0);
                let mut ln_f = -cfg.noise_exponent_scale() * l0;
                if cfg.scenario.has_interference() {
                    for &p in &topo.points {
                        let d = norm(p);
                        if d > d0 && sector_of(p, m).is_ok_and(|s| s.slot() == sector) {
                            ln_f -= (g * l0 / plm.eval(d)).ln_1p();
                        }
                    }
                    ln_f -= far_field_log_factor(cfg, plm, l0, window);
                }
                ln_f.exp()
            }
        };
        let x = (1.0 - f).powi(j as i32);
        sum += x;
        sum2 += x * x;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        stderr: (var / n).sqrt(),
        samples,
    })
}

/// Expected `−ln F` contribution of the BSs of one sector beyond `window`:
/// `(2πλ/M) ∫_window^∞ x/(1+x) r dr` with `x = Γ l₀/l(r)`.
pub(crate) fn far_field_log_factor(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    l0: f64,
    window: f64,
) -> f64 {
    let rate = 2.0 * std::f64::consts::PI * cfg.lambda_bs / cfg.m();
    let g = cfg.sinr_threshold;
    let alpha = plm.alpha_nlos;
    if alpha <= 2.0 {
        return f64::INFINITY;
    }
    let spec = QuadratureSpec {
        rel_tolerance: 1e-8,
        abs_tolerance: 1e-300,
        ..QuadratureSpec::default()
    };
    // u = (window/r)^{α−2} on (0, 1], r dr = window²/(α−2) · u^{−2/(α−2) − 1} du
    let b = alpha - 2.0;
    let w2 = window * window;
    super::quadrature::integrate(
        |u: f64| {
            if u <= 0.0 {
                return g * l0 / (plm.c_nlos * window.powf(alpha)) * w2 / b;
            }
            let r = window * u.powf(-1.0 / b);
            let x = g * l0 / plm.eval(r);
            x / (1.0 + x) * w2 / b * u.powf(-2.0 / b - 1.0)
        },
        &[0.0, 1.0],
        &spec,
    )
    .map(|r| rate * r.value)
    .unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::hfunc::h_integral;
    use crate::model::Preset;
    use approx::assert_relative_eq;

    #[test]
    fn a0_is_one() {
        for p in [Preset::Sub6Ghz2, Preset::Mmwave73Ghz] {
            let cfg = p.network(4).unwrap();
            assert_eq!(a_j(0, &cfg, &p.path_loss()).unwrap(), 1.0);
        }
    }

    #[test]
    fn a1_interference_limited() {
        let cfg = Preset::Sub6Ghz2.network(1).unwrap();
        let h1 = h_integral(1, 2.5, cfg.sinr_threshold).unwrap();
        let a1 = a_j(1, &cfg, &Preset::Sub6Ghz2.path_loss()).unwrap();
        assert_relative_eq!(a1, 1.0 - 1.0 / (1.0 + 2.0 * h1), max_relative = 1e-9);
    }

    #[test]
    fn interference_a_is_lambda_free_and_quadrature_agrees() {
        let plm = Preset::Sub6Ghz2.path_loss();
        let cfg = Preset::Sub6Ghz2.network(4).unwrap();
        let a = a_sequence(30, &cfg, &plm, &QuadratureSpec::default()).unwrap();
        let b = a_sequence(
            30,
            &cfg.with_intensity(1e-3).unwrap(),
            &plm,
            &QuadratureSpec::default(),
        )
        .unwrap();
        for j in 0..30 {
            assert_relative_eq!(a[j], b[j], max_relative = 1e-12);
        }
        // the same numbers through the generic kernel and quadrature
        let k = SectorKernel::new(&cfg, &plm, 29)
            .unwrap()
            .tail_moments(0.0, 30, &QuadratureSpec::default())
            .unwrap();
        for j in 0..30 {
            assert_relative_eq!(a[j], k[j], max_relative = 1e-8);
        }
    }

    #[test]
    fn precision_budget_is_enforced() {
        let cfg = Preset::Sub6Ghz2.network(4).unwrap();
        let r = a_sequence_capped(
            12,
            &cfg,
            &Preset::Sub6Ghz2.path_loss(),
            &QuadratureSpec::default(),
            10,
            1,
        );
        assert!(matches!(
            r,
            Err(Error::PrecisionExceeded { j: 11, cap: 10 })
        ));
    }
}
