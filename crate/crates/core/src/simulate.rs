//! Cycle-by-cycle Monte Carlo of the beam-sweeping cell search.
//!
//! The topology stays fixed for a whole trial. Every cycle draws fresh
//! unit-mean exponential fades; a sector is detected when its nearest BS has
//! SINR above the threshold against the other BSs of the same sector, and a
//! cycle succeeds when any sector is detected. The serving sector is the
//! detected one with the smallest path loss.

use std::f64::consts::PI;
use std::io::Write;

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    default_window_radius, sample_conditioned_on_nearest, sample_ppp_disk, sector_of, SectorIndex,
    Topology,
};
use crate::model::{NetworkConfig, PathLossModel, Scenario};
use crate::rng::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conditioning {
    None,
    /// Nearest BS at exactly this distance, void disk enforced.
    NearestAt(f64),
}

/// Treatment of BSs beyond the sampling window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FarField {
    /// Nothing exists beyond the window (hand-built topologies).
    Ignore,
    /// Add the mean interference power of a PPP beyond the window.
    MeanField,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub max_cycles: u32,
    /// `None` selects the default window for the beam count.
    pub window_radius: Option<f64>,
    pub master_seed: u64,
    pub conditioning: Conditioning,
    pub far_field: FarField,
}

impl TrialConfig {
    /// 1500-cycle cap for noise-limited networks, 100 otherwise.
    pub fn for_scenario(scenario: Scenario, trials: usize, master_seed: u64) -> Self {
        TrialConfig {
            trials,
            max_cycles: match scenario {
                Scenario::NoiseLimited => 1500,
                _ => 100,
            },
            window_radius: None,
            master_seed,
            conditioning: Conditioning::None,
            far_field: FarField::MeanField,
        }
    }

    pub fn conditioned_on(mut self, r0: f64) -> Self {
        self.conditioning = Conditioning::NearestAt(r0);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "must be >= 1"));
        }
        if self.max_cycles == 0 {
            return Err(Error::config("max_cycles", "must be >= 1"));
        }
        if let Some(w) = self.window_radius {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::config("window_radius", "must be finite and > 0"));
            }
        }
        if let Conditioning::NearestAt(r0) = self.conditioning {
            if !(r0 > 0.0 && r0.is_finite()) {
                return Err(Error::config(
                    "r0",
                    format!("must be finite and > 0, got {r0}"),
                ));
            }
        }
        Ok(())
    }

    /// Window used for a sampled topology under this configuration.
    pub fn window_for(&self, cfg: &NetworkConfig) -> f64 {
        let base = default_window_radius(cfg.lambda_bs, cfg.m_beams);
        match (self.window_radius, self.conditioning) {
            (Some(w), _) => w,
            (None, Conditioning::NearestAt(r0)) => (r0 * r0 + base * base).sqrt(),
            (None, Conditioning::None) => base,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    /// First successful cycle, `None` when censored at the cap.
    pub cycles: Option<u32>,
    pub serving_sector: Option<SectorIndex>,
    pub serving_distance: Option<f64>,
}

impl TrialOutcome {
    pub fn censored() -> Self {
        TrialOutcome {
            cycles: None,
            serving_sector: None,
            serving_distance: None,
        }
    }

    pub fn is_censored(&self) -> bool {
        self.cycles.is_none()
    }

    /// Cycle count with censored trials counted at the cap.
    pub fn capped_cycles(&self, max_cycles: u32) -> u32 {
        self.cycles.unwrap_or(max_cycles)
    }
}

#[derive(Debug, Clone)]
struct Sector {
    index: SectorIndex,
    distance: f64,
    /// `1/(Γ l₀)`
    inv_gamma_l0: f64,
    /// `1/l_j` of the other BSs, strongest first.
    inv_interferers: Vec<f64>,
    /// Deterministic part of the interference-plus-noise budget.
    floor: f64,
}

/// A topology digested for fast repeated cycles.
#[derive(Debug, Clone)]
pub struct PreparedTopology {
    /// Non-empty sectors ordered by increasing candidate path loss.
    sectors: Vec<Sector>,
}

/// Mean interference power, in units of `P·M`, from a PPP in one sector beyond `window`.
pub fn far_field_interference(cfg: &NetworkConfig, plm: &PathLossModel, window: f64) -> f64 {
    2.0 * PI * cfg.lambda_bs / cfg.m() * plm.inverse_moment_beyond(window)
}

impl PreparedTopology {
    pub fn new(
        topology: &Topology,
        cfg: &NetworkConfig,
        plm: &PathLossModel,
        far_field: FarField,
    ) -> Self {
        let m = cfg.m_beams as usize;
        let mut per: Vec<Vec<f64>> = vec![Vec::new(); m];
        for (i, &p) in topology.points.iter().enumerate() {
            if let Ok(s) = sector_of(p, cfg.m_beams) {
                per[s.slot()].push(topology.distance(i));
            }
        }
        let g = cfg.sinr_threshold;
        let noise = cfg.effective_noise() / (cfg.power_tx * cfg.m());
        let interference = cfg.scenario.has_interference();
        let far = if interference && far_field == FarField::MeanField {
            far_field_interference(cfg, plm, topology.window_radius)
        } else {
            0.0
        };
        let mut sectors: Vec<Sector> = per
            .into_iter()
            .enumerate()
            .filter(|(_, d)| !d.is_empty())
            .map(|(i, mut d)| {
                d.sort_by(f64::total_cmp);
                let l0 = plm.eval(d[0]);
                let inv_interferers = if interference {
                    d[1..].iter().map(|&r| 1.0 / plm.eval(r)).collect()
                } else {
                    Vec::new()
                };
                Sector {
                    index: SectorIndex(i as u32 + 1),
                    distance: d[0],
                    inv_gamma_l0: 1.0 / (g * l0),
                    inv_interferers,
                    floor: noise + far,
                }
            })
            .collect();
        sectors.sort_by(|a, b| a.distance.total_cmp(&b.distance));
        PreparedTopology { sectors }
    }

    /// One cycle: the index into `sectors` of the serving sector, if any.
    fn cycle<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        'sectors: for (i, s) in self.sectors.iter().enumerate() {
            let f0: f64 = rng.sample(Exp1);
            // SINR > Γ  ⇔  F₀/(Γ l₀) − N − Σ F_j/l_j > 0
            let mut budget = f0 * s.inv_gamma_l0 - s.floor;
            if budget <= 0.0 {
                continue;
            }
            for &inv in &s.inv_interferers {
                let fj: f64 = rng.sample(Exp1);
                budget -= fj * inv;
                if budget <= 0.0 {
                    continue 'sectors;
                }
            }
            return Some(i);
        }
        None
    }

    pub fn run<R: Rng + ?Sized>(&self, max_cycles: u32, rng: &mut R) -> TrialOutcome {
        if self.sectors.is_empty() {
            return TrialOutcome::censored();
        }
        for c in 1..=max_cycles {
            if let Some(i) = self.cycle(rng) {
                let s = &self.sectors[i];
                return TrialOutcome {
                    cycles: Some(c),
                    serving_sector: Some(s.index),
                    serving_distance: Some(s.distance),
                };
            }
        }
        TrialOutcome::censored()
    }

    /// Success indicator of `n` consecutive cycles.
    pub fn success_sequence<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<bool> {
        (0..n).map(|_| self.cycle(rng).is_some()).collect()
    }
}

pub fn run_cell_search<R: Rng + ?Sized>(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trial: &TrialConfig,
    rng: &mut R,
) -> TrialOutcome {
    PreparedTopology::new(topology, cfg, plm, trial.far_field).run(trial.max_cycles, rng)
}

pub fn run_conditioned_on_r0<R: Rng + ?Sized>(
    r0: f64,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trial: &TrialConfig,
    rng: &mut R,
) -> Result<TrialOutcome> {
    if !(r0 > 0.0) {
        return Err(Error::config("r0", format!("must be > 0, got {r0}")));
    }
    let window = trial.window_for(cfg);
    if trial.window_radius.is_some() && r0 >= window {
        return Err(Error::config(
            "window_radius",
            format!("r0 = {r0} m must be smaller than the window radius {window} m"),
        ));
    }
    let topo = sample_conditioned_on_nearest(cfg.lambda_bs, r0, window, rng)?;
    Ok(run_cell_search(&topo, cfg, plm, trial, rng))
}

/// Where each trial's topology comes from.
#[derive(Debug, Clone, Copy)]
pub enum TopologySource<'a> {
    Fixed(&'a Topology),
    /// Fresh PPP per trial, conditioned as the trial configuration says.
    Sampled,
}

/// Runs every trial; trial `i` draws from stream `(master_seed, i)`.
pub fn run_trials(
    source: TopologySource<'_>,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trial: &TrialConfig,
) -> Result<Vec<TrialOutcome>> {
    cfg.validate()?;
    trial.validate()?;
    match source {
        TopologySource::Fixed(t) => {
            let prepared = PreparedTopology::new(t, cfg, plm, trial.far_field);
            Ok((0..trial.trials)
                .into_par_iter()
                .map(|i| prepared.run(trial.max_cycles, &mut stream(trial.master_seed, i as u64)))
                .collect())
        }
        TopologySource::Sampled => (0..trial.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(trial.master_seed, i as u64);
                match trial.conditioning {
                    Conditioning::NearestAt(r0) => {
                        run_conditioned_on_r0(r0, cfg, plm, trial, &mut rng)
                    }
                    Conditioning::None => {
                        let topo = sample_ppp_disk(cfg.lambda_bs, trial.window_for(cfg), &mut rng);
                        Ok(run_cell_search(&topo, cfg, plm, trial, &mut rng))
                    }
                }
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub censored_fraction: f64,
    pub trials: usize,
    /// Censored trials were counted at the cap, so `mean` under-estimates.
    pub lower_bound: bool,
}

impl MeanEstimate {
    pub fn from_outcomes(outcomes: &[TrialOutcome], max_cycles: u32) -> Self {
        let n = outcomes.len();
        let xs: Vec<f64> = outcomes
            .iter()
            .map(|o| o.capped_cycles(max_cycles) as f64)
            .collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        let censored = outcomes.iter().filter(|o| o.is_censored()).count();
        MeanEstimate {
            mean,
            stderr: (var / n as f64).sqrt(),
            censored_fraction: censored as f64 / n as f64,
            trials: n,
            lower_bound: censored > 0,
        }
    }

    /// `(mean − reference)/s` with `s = max(stderr, 1/trials)`: a mean of
    /// integer counts cannot resolve differences below one count in `n`.
    pub fn z_score(&self, reference: f64) -> f64 {
        let s = self.stderr.max(1.0 / self.trials as f64);
        (self.mean - reference) / s
    }
}

pub fn estimate_mean_cycles(
    source: TopologySource<'_>,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    trial: &TrialConfig,
) -> Result<MeanEstimate> {
    let outcomes = run_trials(source, cfg, plm, trial)?;
    Ok(MeanEstimate::from_outcomes(&outcomes, trial.max_cycles))
}

pub fn write_outcomes_csv<W: Write>(mut w: W, outcomes: &[TrialOutcome]) -> Result<()> {
    writeln!(w, "trial_id,cycles,censored,serving_distance")?;
    for (i, o) in outcomes.iter().enumerate() {
        let cycles = o.cycles.map_or(String::new(), |c| c.to_string());
        let dist = o
            .serving_distance
            .map_or(String::new(), |d| format!("{d:e}"));
        writeln!(w, "{i},{cycles},{},{dist}", o.is_censored())?;
    }
    Ok(())
}

/// How often a non-nearest BS would have cleared the threshold in a cycle
/// where the nearest BS of its sector did not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NeglectedEventStats {
    pub sector_cycles: u64,
    pub nearest_missed: u64,
    pub other_detectable: u64,
}

impl NeglectedEventStats {
    /// Fraction of missed sector-cycles in which another BS was detectable.
    pub fn rate_given_miss(&self) -> f64 {
        if self.nearest_missed == 0 {
            0.0
        } else {
            self.other_detectable as f64 / self.nearest_missed as f64
        }
    }
}

pub fn neglected_event_diagnostic<R: Rng + ?Sized>(
    topology: &Topology,
    cfg: &NetworkConfig,
    plm: &PathLossModel,
    cycles: usize,
    rng: &mut R,
) -> NeglectedEventStats {
    let m = cfg.m_beams as usize;
    let mut per: Vec<Vec<f64>> = vec![Vec::new(); m];
    for (i, &p) in topology.points.iter().enumerate() {
        if let Ok(s) = sector_of(p, cfg.m_beams) {
            per[s.slot()].push(plm.eval(topology.distance(i)));
        }
    }
    per.iter_mut().for_each(|v| v.sort_by(f64::total_cmp));
    let noise = cfg.effective_noise() / (cfg.power_tx * cfg.m());
    let interference = cfg.scenario.has_interference();
    let g = cfg.sinr_threshold;
    let mut stats = NeglectedEventStats {
        sector_cycles: 0,
        nearest_missed: 0,
        other_detectable: 0,
    };
    let mut rx = Vec::new();
    for _ in 0..cycles {
        for losses in per.iter().filter(|v| !v.is_empty()) {
            rx.clear();
            rx.extend(losses.iter().map(|&l| rng.sample::<f64, _>(Exp1) / l));
            let total: f64 = if interference { rx.iter().sum() } else { 0.0 };
            let ok = |s: f64| s > g * (total - if interference { s } else { 0.0 } + noise);
            stats.sector_cycles += 1;
            if !ok(rx[0]) {
                stats.nearest_missed += 1;
                if rx[1..].iter().any(|&s| ok(s)) {
                    stats.other_detectable += 1;
                }
            }
        }
    }
    stats
}
