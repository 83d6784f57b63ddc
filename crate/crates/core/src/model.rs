//! Network configuration, path loss, unit conversions and the cycle/delay relation.
//!
//! Everything here is in linear SI units (watts, metres, seconds, BS per m²).
//! dB-valued inputs are converted once at ingestion, see [`crate::config`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which terms of the SINR are retained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    /// Noise and same-sector interference.
    General,
    /// Interference is exactly zero.
    NoiseLimited,
    /// Noise power is exactly zero.
    InterferenceLimited,
}

impl Scenario {
    pub fn has_noise(self) -> bool {
        !matches!(self, Scenario::InterferenceLimited)
    }

    pub fn has_interference(self) -> bool {
        !matches!(self, Scenario::NoiseLimited)
    }
}

impl std::fmt::Display for Scenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scenario::General => "general",
            Scenario::NoiseLimited => "noise-limited",
            Scenario::InterferenceLimited => "interference-limited",
        })
    }
}

/// Radio, antenna, timing and intensity parameters of the network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    /// BS intensity in BS per m².
    pub lambda_bs: f64,
    /// Number of beams M, which is also the main-lobe directivity gain.
    pub m_beams: u32,
    /// BS transmit power in watts.
    pub power_tx: f64,
    /// Total thermal noise power in watts.
    pub noise_power: f64,
    /// Detection threshold (linear).
    pub sinr_threshold: f64,
    /// Initial-access cycle period T in seconds.
    pub cycle_period: f64,
    /// Symbol period τ in seconds.
    pub symbol_period: f64,
    pub scenario: Scenario,
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        fn positive(field: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    field,
                    format!("must be finite and > 0, got {v}"),
                ))
            }
        }
        positive("lambda_bs", self.lambda_bs)?;
        positive("power_tx", self.power_tx)?;
        positive("sinr_threshold", self.sinr_threshold)?;
        positive("symbol_period", self.symbol_period)?;
        positive("cycle_period", self.cycle_period)?;
        if self.m_beams == 0 {
            return Err(Error::config("m_beams", "must be >= 1"));
        }
        if !(self.noise_power.is_finite() && self.noise_power >= 0.0) {
            return Err(Error::config("noise_power", "must be finite and >= 0"));
        }
        if self.cycle_period <= self.sweep_duration() {
            return Err(Error::config(
                "cycle_period",
                format!(
                    "must exceed m_beams * symbol_period = {} s",
                    self.sweep_duration()
                ),
            ));
        }
        Ok(())
    }

    /// Copy of this configuration with a different beam count.
    pub fn with_beams(&self, m_beams: u32) -> Result<Self> {
        let cfg = NetworkConfig {
            m_beams,
            ..self.clone()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_scenario(&self, scenario: Scenario) -> Self {
        NetworkConfig {
            scenario,
            ..self.clone()
        }
    }

    pub fn with_intensity(&self, lambda_bs: f64) -> Result<Self> {
        let cfg = NetworkConfig {
            lambda_bs,
            ..self.clone()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn m(&self) -> f64 {
        self.m_beams as f64
    }

    /// Duration of one beam sweep, M·τ.
    pub fn sweep_duration(&self) -> f64 {
        self.m() * self.symbol_period
    }

    /// Noise power as seen by the detector: zero in the interference-limited mode.
    pub fn effective_noise(&self) -> f64 {
        if self.scenario.has_noise() {
            self.noise_power
        } else {
            0.0
        }
    }

    /// W·Γ/(P·M): multiplying by a path loss gives the noise exponent of a
    /// unit-mean exponential fade.
    pub fn noise_exponent_scale(&self) -> f64 {
        self.effective_noise() * self.sinr_threshold / (self.power_tx * self.m())
    }

    /// λπ/M, the intensity of squared distances inside one sector.
    pub fn sector_area_rate(&self) -> f64 {
        self.lambda_bs * std::f64::consts::PI / self.m()
    }
}

/// Dual-slope path loss `l(r) = C_L r^α_L` below `R_c` and `C_N r^α_N` from `R_c` on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathLossModel {
    pub c_los: f64,
    pub c_nlos: f64,
    pub alpha_los: f64,
    pub alpha_nlos: f64,
    pub r_critical: f64,
}

impl PathLossModel {
    pub fn dual_slope(
        c_los: f64,
        c_nlos: f64,
        alpha_los: f64,
        alpha_nlos: f64,
        r_critical: f64,
    ) -> Result<Self> {
        let plm = PathLossModel {
            c_los,
            c_nlos,
            alpha_los,
            alpha_nlos,
            r_critical,
        };
        plm.validate()?;
        Ok(plm)
    }

    pub fn single_slope(c: f64, alpha: f64) -> Result<Self> {
        Self::dual_slope(c, c, alpha, alpha, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("c_los", self.c_los),
            ("c_nlos", self.c_nlos),
            ("alpha_los", self.alpha_los),
            ("alpha_nlos", self.alpha_nlos),
            ("r_critical", self.r_critical),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::config(
                    field,
                    format!("must be finite and > 0, got {v}"),
                ));
            }
        }
        if self.alpha_nlos < self.alpha_los.max(2.0) {
            return Err(Error::config(
                "alpha_nlos",
                format!("must be >= max(alpha_los, 2) = {}", self.alpha_los.max(2.0)),
            ));
        }
        if !self.is_single_slope() {
            // compare in log space, the linear values overflow easily
            let los = self.c_los.ln() + self.alpha_los * self.r_critical.ln();
            let nlos = self.c_nlos.ln() + self.alpha_nlos * self.r_critical.ln();
            if los > nlos * (1.0 + 1e-12) + 1e-12 {
                return Err(Error::config(
                    "c_nlos",
                    "path loss must be non-decreasing at r_critical (C_L R_c^α_L <= C_N R_c^α_N)",
                ));
            }
        }
        Ok(())
    }

    pub fn is_single_slope(&self) -> bool {
        self.c_los == self.c_nlos && self.alpha_los == self.alpha_nlos
    }

    /// Linear attenuation at distance `r` (metres). `l(0) = 0`.
    pub fn eval(&self, r: f64) -> f64 {
        let (c, a) = self.segment(r);
        c * r.powf(a)
    }

    /// Natural log of the attenuation, `-inf` at the origin.
    pub fn ln_eval(&self, r: f64) -> f64 {
        let (c, a) = self.segment(r);
        c.ln() + a * r.ln()
    }

    /// `∫_r^∞ s/l(s) ds`, infinite when `α_N ≤ 2`.
    pub fn inverse_moment_beyond(&self, r: f64) -> f64 {
        fn piece(c: f64, a: f64, lo: f64, hi: f64) -> f64 {
            if (a - 2.0).abs() < 1e-12 {
                (hi / lo).ln() / c
            } else if hi.is_infinite() {
                lo.powf(2.0 - a) / (c * (a - 2.0))
            } else {
                (hi.powf(2.0 - a) - lo.powf(2.0 - a)) / (c * (2.0 - a))
            }
        }
        if self.alpha_nlos <= 2.0 {
            return f64::INFINITY;
        }
        if self.is_single_slope() || r >= self.r_critical {
            return piece(self.c_nlos, self.alpha_nlos, r, f64::INFINITY);
        }
        let mut total = piece(self.c_nlos, self.alpha_nlos, self.r_critical, f64::INFINITY);
        {
            total += piece(self.c_los, self.alpha_los, r, self.r_critical);
        }
        total
    }

    /// `(coefficient, exponent)` of the branch that applies at `r`.
    pub fn segment(&self, r: f64) -> (f64, f64) {
        if r < self.r_critical && !self.is_single_slope() {
            (self.c_los, self.alpha_los)
        } else {
            (self.c_nlos, self.alpha_nlos)
        }
    }
}

/// Alias matching the formula's name; see [`PathLossModel::eval`].
pub fn path_loss(model: &PathLossModel, r: f64) -> f64 {
    model.eval(r)
}

pub fn db_to_linear(x_db: f64) -> f64 {
    10f64.powf(x_db / 10.0)
}

pub fn linear_to_db(x: f64) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(10.0 * x.log10())
    } else {
        Err(Error::domain(format!(
            "linear_to_db requires x > 0, got {x}"
        )))
    }
}

pub fn dbm_to_watts(x_dbm: f64) -> f64 {
    db_to_linear(x_dbm - 30.0)
}

pub fn watts_to_dbm(x: f64) -> Result<f64> {
    Ok(linear_to_db(x)? + 30.0)
}

/// Thermal noise in watts for `-174 dBm/Hz + 10 log10(B)`.
pub fn noise_power_from_bandwidth(bandwidth_hz: f64) -> Result<f64> {
    if !(bandwidth_hz > 0.0 && bandwidth_hz.is_finite()) {
        return Err(Error::domain(format!(
            "bandwidth must be > 0, got {bandwidth_hz}"
        )));
    }
    Ok(dbm_to_watts(-174.0 + 10.0 * bandwidth_hz.log10()))
}

/// Cycle count together with the resulting delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimingResult {
    pub cycles: f64,
    pub delay_seconds: f64,
}

/// `D = (L − 1)·T + M·τ`. Infinite cycle counts give an infinite delay.
pub fn delay_from_cycles(cfg: &NetworkConfig, cycles: f64) -> Result<TimingResult> {
    if cycles.is_nan() || cycles < 1.0 {
        return Err(Error::domain(format!("cycles must be >= 1, got {cycles}")));
    }
    Ok(TimingResult {
        cycles,
        delay_seconds: delay_from_excess(cfg, cycles - 1.0),
    })
}

/// Delay from `L − 1` directly, avoiding cancellation when `L` is close to one.
pub fn delay_from_excess(cfg: &NetworkConfig, excess_cycles: f64) -> f64 {
    excess_cycles * cfg.cycle_period + cfg.sweep_duration()
}

/// Named parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// 73 GHz, 2 GHz bandwidth, dual slope (2.1, 3.3) with R_c = 50 m, noise limited.
    Mmwave73Ghz,
    /// Same as [`Preset::Mmwave73Ghz`] with the 1 GHz bandwidth listed in the parameter table.
    Mmwave73Ghz1GhzBandwidth,
    /// 2 GHz, 200 MHz bandwidth, single slope 2.5, interference limited.
    Sub6Ghz2,
}

impl Preset {
    pub const ALL: [Preset; 3] = [
        Preset::Mmwave73Ghz,
        Preset::Mmwave73Ghz1GhzBandwidth,
        Preset::Sub6Ghz2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Mmwave73Ghz => "mmwave-73ghz",
            Preset::Mmwave73Ghz1GhzBandwidth => "mmwave-73ghz-1ghz",
            Preset::Sub6Ghz2 => "sub6-2ghz",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == name)
            .ok_or_else(|| {
                Error::config(
                    "preset",
                    format!(
                        "unknown preset `{name}` (known: {})",
                        Preset::ALL.map(|p| p.name()).join(", ")
                    ),
                )
            })
    }

    /// Beam counts shown for this preset in the conditional-cycles comparison.
    pub fn reference_beams(self) -> &'static [u32] {
        match self {
            Preset::Mmwave73Ghz | Preset::Mmwave73Ghz1GhzBandwidth => &[4, 8, 18, 36],
            Preset::Sub6Ghz2 => &[1, 4, 8, 12],
        }
    }

    pub fn bandwidth_hz(self) -> f64 {
        match self {
            Preset::Mmwave73Ghz => 2e9,
            Preset::Mmwave73Ghz1GhzBandwidth => 1e9,
            Preset::Sub6Ghz2 => 0.2e9,
        }
    }

    pub fn network(self, m_beams: u32) -> Result<NetworkConfig> {
        let noise_power = noise_power_from_bandwidth(self.bandwidth_hz())?;
        let (symbol_period, cycle_period, scenario) = match self {
            Preset::Mmwave73Ghz | Preset::Mmwave73Ghz1GhzBandwidth => {
                (14.3e-6, 20e-3, Scenario::NoiseLimited)
            }
            Preset::Sub6Ghz2 => (71.4e-6, 100e-3, Scenario::InterferenceLimited),
        };
        let cfg = NetworkConfig {
            lambda_bs: 100.0 / 1e6,
            m_beams,
            power_tx: dbm_to_watts(30.0),
            noise_power,
            sinr_threshold: db_to_linear(-4.0),
            cycle_period,
            symbol_period,
            scenario,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn path_loss(self) -> PathLossModel {
        match self {
            Preset::Mmwave73Ghz | Preset::Mmwave73Ghz1GhzBandwidth => {
                let c = db_to_linear(69.71);
                PathLossModel {
                    c_los: c,
                    c_nlos: c,
                    alpha_los: 2.1,
                    alpha_nlos: 3.3,
                    r_critical: 50.0,
                }
            }
            Preset::Sub6Ghz2 => {
                let c = db_to_linear(38.46);
                PathLossModel {
                    c_los: c,
                    c_nlos: c,
                    alpha_los: 2.5,
                    alpha_nlos: 2.5,
                    r_critical: 50.0,
                }
            }
        }
    }
}
