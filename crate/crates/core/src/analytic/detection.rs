//! Per-sector detection probabilities and conditional mean cycles for one
//! fixed topology under Rayleigh fading.

use crate::geometry::{norm, sector_of, SectorIndex, Topology};
use crate::model::{NetworkConfig, PathLossModel};

/// Path losses in one sector, nearest first.
pub(crate) fn sector_losses(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<(f64, f64)>> = vec![Vec::new(); cfg.m_beams as usize];
    for &p in &topology.points {
        if let Ok(s) = sector_of(p, cfg.m_beams) {
            let d = norm(p);
            out[s.slot()].push((d, plm.eval(d)));
        }
    }
    out.into_iter()
        .map(|mut v| {
            v.sort_by(|a, b| a.0.total_cmp(&b.0));
            v.into_iter().map(|(_, l)| l).collect()
        })
        .collect()
}

/// `exp(−WΓl₀/(PM)) · Π_j 1/(1 + Γ l₀/l_j)` for the losses of one sector,
/// nearest first.
pub(crate) fn detection_from_losses(losses: &[f64], cfg: &NetworkConfig) -> f64 {
    let Some((&l0, rest)) = losses.split_first() else {
        return 0.0;
    };
    if l0 == 0.0 {
        return 1.0;
    }
    let g = cfg.sinr_threshold;
    let mut ln_p = -cfg.noise_exponent_scale() * l0;
    if cfg.scenario.has_interference() {
        ln_p -= rest.iter().map(|&lj| (g * l0 / lj).ln_1p()).sum::<f64>();
    }
    ln_p.exp()
}

pub fn detection_probability_given_topology(
    topology: &Topology,
    sector: SectorIndex,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> f64 {
    let losses = sector_losses(topology, cfg, plm);
    losses
        .get(sector.slot())
        .map_or(0.0, |l| detection_from_losses(l, cfg))
}

/// Detection probability of every sector, in sector order.
pub fn sector_detection_probabilities(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> Vec<f64> {
    sector_losses(topology, cfg, plm)
        .iter()
        .map(|l| detection_from_losses(l, cfg))
        .collect()
}

/// Probability that a cycle succeeds: `1 − Π_i (1 − ê_i)`.
pub fn cycle_success_probability(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> f64 {
    let ln_miss: f64 = sector_detection_probabilities(topology, cfg, plm)
        .iter()
        .map(|p| (-p).ln_1p())
        .sum();
    -ln_miss.exp_m1()
}

/// `1/(1 − Π_i (1 − ê_i))`; `+∞` when no sector can ever be detected.
pub fn mean_cycles_given_topology(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
) -> f64 {
    let p = cycle_success_probability(topology, cfg, plm);
    if p > 0.0 {
        1.0 / p
    } else {
        f64::INFINITY
    }
}
