//! Closed-form bounds on the mean number of cycles and finite/infinite-mean
//! classification.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mean::a_j;
use crate::error::{Error, Result};
use crate::model::{NetworkConfig, PathLossModel, Scenario};

/// `1/(1 − A₁^M)`, from Jensen's inequality applied to the conditional mean.
pub fn lower_bound_mean_cycles(cfg: &NetworkConfig, plm: &PathLossModel) -> Result<f64> {
    let a1 = a_j(1, cfg, plm)?;
    lower_bound_from_a1(a1, cfg.m_beams)
}

pub fn lower_bound_from_a1(a1: f64, m_beams: u32) -> Result<f64> {
    if !(a1 < 1.0) {
        return Err(Error::domain("A_1 = 1: no sector is ever detected"));
    }
    Ok(1.0 / (1.0 - a1.powi(m_beams as i32)))
}

/// `M(α−2)/(M(α−2) − 2Γ)` for a single-slope interference-limited network,
/// `+∞` when `M ≤ 2Γ/(α−2)`.
pub fn upper_bound_mean_cycles_interference(
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> Result<f64> {
    if cfg.scenario != Scenario::InterferenceLimited {
        return Err(Error::domain(
            "the closed-form upper bound needs an interference-limited network",
        ));
    }
    if !plm.is_single_slope() {
        return Err(Error::Unsupported(
            "the closed-form upper bound assumes a single-slope path loss".into(),
        ));
    }
    let alpha = plm.alpha_nlos;
    if alpha <= 2.0 {
        return Err(Error::domain(format!(
            "path-loss exponent {alpha} <= 2: the mean is infinite for every M"
        )));
    }
    Ok(upper_bound_formula(cfg.m(), alpha, cfg.sinr_threshold))
}

pub fn upper_bound_formula(m: f64, alpha: f64, gamma: f64) -> f64 {
    let d = m * (alpha - 2.0);
    if d <= 2.0 * gamma {
        f64::INFINITY
    } else {
        d / (d - 2.0 * gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseVerdict {
    FiniteMean,
    InfiniteMean,
    UndeterminedBand,
}

impl std::fmt::Display for PhaseVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PhaseVerdict::FiniteMean => "finite-mean",
            PhaseVerdict::InfiniteMean => "infinite-mean",
            PhaseVerdict::UndeterminedBand => "undetermined-band",
        })
    }
}

/// Critical product `λM = Γ C_N W/(Pπ)` for a noise-limited network with `α_N = 2`.
pub fn noise_limited_critical_product(cfg: &NetworkConfig, plm: &PathLossModel) -> f64 {
    cfg.sinr_threshold * plm.c_nlos * cfg.noise_power / (cfg.power_tx * PI)
}

/// Beam count above which a single-slope interference-limited mean is finite.
pub fn interference_critical_beams(alpha: f64, gamma: f64) -> f64 {
    2.0 * gamma / (alpha - 2.0)
}

pub fn phase_classifier(cfg: &NetworkConfig, plm: &PathLossModel) -> Result<PhaseVerdict> {
    match cfg.scenario {
        Scenario::General => Err(Error::Unsupported(
            "phase classification needs a noise-limited or interference-limited scenario".into(),
        )),
        Scenario::NoiseLimited => {
            let a = plm.alpha_nlos;
            if a > 2.0 {
                Ok(PhaseVerdict::InfiniteMean)
            } else {
                let crit = noise_limited_critical_product(cfg, plm);
                let prod = cfg.lambda_bs * cfg.m();
                Ok(match prod.partial_cmp(&crit) {
                    Some(std::cmp::Ordering::Greater) => PhaseVerdict::FiniteMean,
                    Some(std::cmp::Ordering::Less) => PhaseVerdict::InfiniteMean,
                    _ => PhaseVerdict::UndeterminedBand,
                })
            }
        }
        Scenario::InterferenceLimited => {
            if !plm.is_single_slope() {
                return Err(Error::Unsupported(
                    "interference-limited classification assumes a single-slope path loss".into(),
                ));
            }
            let a = plm.alpha_nlos;
            let g = cfg.sinr_threshold;
            if a <= 2.0 {
                Ok(PhaseVerdict::InfiniteMean)
            } else if a > 2.0 + 2.0 * g {
                Ok(PhaseVerdict::FiniteMean)
            } else if cfg.m_beams == 1 {
                Ok(PhaseVerdict::InfiniteMean)
            } else if cfg.m() > interference_critical_beams(a, g) {
                Ok(PhaseVerdict::FiniteMean)
            } else {
                Ok(PhaseVerdict::UndeterminedBand)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Preset;
    use approx::assert_relative_eq;

    #[test]
    fn upper_bound_examples() {
        let g = 10f64.powf(-0.4);
        assert!(upper_bound_formula(1.0, 2.5, g).is_infinite());
        assert_relative_eq!(
            upper_bound_formula(4.0, 2.5, g),
            2.0 / (2.0 - 2.0 * g),
            max_relative = 1e-14
        );
        assert_relative_eq!(upper_bound_formula(4.0, 2.5, g), 1.6615, epsilon = 1e-4);
        let b8 = upper_bound_formula(8.0, 2.5, g);
        assert_relative_eq!(b8, 4.0 / (4.0 - 2.0 * g), max_relative = 1e-14);
        assert!(b8 <= 1.2487);
        assert!((upper_bound_formula(1e9, 2.5, g) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn classifier_presets() {
        let mm = Preset::Mmwave73Ghz;
        assert_eq!(
            phase_classifier(&mm.network(4).unwrap(), &mm.path_loss()).unwrap(),
            PhaseVerdict::InfiniteMean
        );
        let s6 = Preset::Sub6Ghz2;
        assert_eq!(
            phase_classifier(&s6.network(4).unwrap(), &s6.path_loss()).unwrap(),
            PhaseVerdict::FiniteMean
        );
        assert_eq!(
            phase_classifier(&s6.network(1).unwrap(), &s6.path_loss()).unwrap(),
            PhaseVerdict::InfiniteMean
        );
        let general = s6.network(4).unwrap().with_scenario(Scenario::General);
        assert!(phase_classifier(&general, &s6.path_loss()).is_err());
    }

    #[test]
    fn lower_bound_degenerate() {
        assert!(lower_bound_from_a1(1.0, 4).is_err());
        assert_eq!(lower_bound_from_a1(0.0, 4).unwrap(), 1.0);
    }
}
