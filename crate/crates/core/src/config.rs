//! TOML run configuration: an optional preset overridden field by field.
//!
//! ```toml
//! preset = "sub6-2ghz"
//!
//! [network]
//! m_beams = 8
//! sinr_threshold_db = -4.0
//!
//! [path_loss]
//! alpha = 2.5
//! c_db = 38.46
//!
//! [truncation]
//! j_cap = 500
//! ```
//!
//! Quantities given in decibels carry a `_db` (or `_dbm`) suffix and are
//! converted to linear units on load; giving both forms of one quantity is an
//! error.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytic::{QuadratureSpec, Transform, Truncation};
use crate::error::{Error, Result};
use crate::model::{
    db_to_linear, dbm_to_watts, noise_power_from_bandwidth, NetworkConfig, PathLossModel, Preset,
    Scenario,
};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    preset: Option<String>,
    #[serde(default)]
    network: RawNetwork,
    #[serde(default)]
    path_loss: RawPathLoss,
    #[serde(default)]
    truncation: RawTruncation,
    #[serde(default)]
    quadrature: RawQuadrature,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNetwork {
    lambda_bs: Option<f64>,
    m_beams: Option<u32>,
    power_tx: Option<f64>,
    power_tx_dbm: Option<f64>,
    noise_power: Option<f64>,
    noise_power_dbm: Option<f64>,
    bandwidth_hz: Option<f64>,
    sinr_threshold: Option<f64>,
    sinr_threshold_db: Option<f64>,
    cycle_period: Option<f64>,
    symbol_period: Option<f64>,
    scenario: Option<Scenario>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPathLoss {
    c_los: Option<f64>,
    c_los_db: Option<f64>,
    c_nlos: Option<f64>,
    c_nlos_db: Option<f64>,
    alpha_los: Option<f64>,
    alpha_nlos: Option<f64>,
    r_critical: Option<f64>,
    /// Single-slope shorthand.
    c: Option<f64>,
    c_db: Option<f64>,
    alpha: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTruncation {
    j_cap: Option<usize>,
    abs_tolerance: Option<f64>,
    fit_margin: Option<f64>,
    precision_cap: Option<usize>,
    precision_multiplier: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    rel_tolerance: Option<f64>,
    abs_tolerance: Option<f64>,
    max_subdivisions: Option<usize>,
    transform: Option<Transform>,
}

/// A fully resolved configuration in linear units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub network: NetworkConfig,
    pub path_loss: PathLossModel,
    pub truncation: Truncation,
    pub quadrature: QuadratureSpec,
}

fn one_of(
    section: &str,
    linear: (&str, Option<f64>),
    other: (&str, Option<f64>),
    conv: impl Fn(f64) -> Result<f64>,
) -> Result<Option<f64>> {
    match (linear.1, other.1) {
        (Some(_), Some(_)) => Err(Error::config(
            format!("{section}.{}", linear.0),
            format!("give either `{}` or `{}`, not both", linear.0, other.0),
        )),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(v)) => conv(v).map(Some),
        (None, None) => Ok(None),
    }
}

fn prefixed(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidConfig { field, reason } if !field.contains('.') => Error::InvalidConfig {
            field: format!("{section}.{field}"),
            reason,
        },
        other => other,
    }
}

fn required<T>(section: &str, field: &str, v: Option<T>) -> Result<T> {
    v.ok_or_else(|| {
        Error::config(
            format!("{section}.{field}"),
            "missing (no preset to inherit it from)",
        )
    })
}

impl RunConfig {
    pub fn from_preset(preset: Preset, m_beams: u32) -> Result<Self> {
        let network = preset.network(m_beams)?;
        Ok(RunConfig {
            preset: Some(preset),
            truncation: Truncation::for_scenario(network.scenario),
            network,
            path_loss: preset.path_loss(),
            quadrature: QuadratureSpec::default(),
        })
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::resolve(raw)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Same configuration with another beam count.
    pub fn with_beams(&self, m_beams: u32) -> Result<Self> {
        Ok(RunConfig {
            network: self
                .network
                .with_beams(m_beams)
                .map_err(|e| prefixed("network", e))?,
            ..self.clone()
        })
    }

    fn resolve(raw: RawFile) -> Result<Self> {
        let preset = raw.preset.as_deref().map(Preset::from_name).transpose()?;
        let base_m = raw
            .network
            .m_beams
            .or_else(|| preset.map(|p| p.reference_beams()[0]));
        let base = match preset {
            Some(p) => Some(RunConfig::from_preset(p, base_m.unwrap_or(1))?),
            None => None,
        };
        let network = resolve_network(&raw.network, base.as_ref().map(|b| &b.network))?;
        let path_loss = resolve_path_loss(&raw.path_loss, base.as_ref().map(|b| &b.path_loss))?;

        let t = &raw.truncation;
        let mut truncation = Truncation::for_scenario(network.scenario);
        truncation.j_cap = t.j_cap.unwrap_or(truncation.j_cap);
        truncation.abs_tolerance = t.abs_tolerance.unwrap_or(truncation.abs_tolerance);
        truncation.fit_margin = t.fit_margin.unwrap_or(truncation.fit_margin);
        truncation.precision_cap = t.precision_cap.unwrap_or(truncation.precision_cap);
        truncation.precision_multiplier = t
            .precision_multiplier
            .unwrap_or(truncation.precision_multiplier);
        truncation
            .validate()
            .map_err(|e| prefixed("truncation", e))?;

        let q = &raw.quadrature;
        let mut quadrature = QuadratureSpec::default();
        quadrature.rel_tolerance = q.rel_tolerance.unwrap_or(quadrature.rel_tolerance);
        quadrature.abs_tolerance = q.abs_tolerance.unwrap_or(quadrature.abs_tolerance);
        quadrature.max_subdivisions = q.max_subdivisions.unwrap_or(quadrature.max_subdivisions);
        quadrature.transform = q.transform.unwrap_or(quadrature.transform);
        quadrature
            .validate()
            .map_err(|e| prefixed("quadrature", e))?;

        Ok(RunConfig {
            preset,
            network,
            path_loss,
            truncation,
            quadrature,
        })
    }

    /// TOML in linear units that loads back to the same configuration.
    pub fn to_toml_string(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(skip_serializing_if = "Option::is_none")]
            preset: Option<&'static str>,
            network: &'a NetworkConfig,
            path_loss: &'a PathLossModel,
            truncation: &'a Truncation,
            quadrature: &'a QuadratureSpec,
        }
        toml::to_string(&Out {
            preset: self.preset.map(Preset::name),
            network: &self.network,
            path_loss: &self.path_loss,
            truncation: &self.truncation,
            quadrature: &self.quadrature,
        })
        .map_err(|e| Error::Parse(e.to_string()))
    }
}

fn resolve_network(raw: &RawNetwork, base: Option<&NetworkConfig>) -> Result<NetworkConfig> {
    const S: &str = "network";
    let power = one_of(
        S,
        ("power_tx", raw.power_tx),
        ("power_tx_dbm", raw.power_tx_dbm),
        |v| Ok(dbm_to_watts(v)),
    )?;
    let threshold = one_of(
        S,
        ("sinr_threshold", raw.sinr_threshold),
        ("sinr_threshold_db", raw.sinr_threshold_db),
        |v| Ok(db_to_linear(v)),
    )?;
    let given_noise = [
        raw.noise_power.is_some(),
        raw.noise_power_dbm.is_some(),
        raw.bandwidth_hz.is_some(),
    ];
    if given_noise.iter().filter(|x| **x).count() > 1 {
        return Err(Error::config(
            "network.noise_power",
            "give only one of `noise_power`, `noise_power_dbm` and `bandwidth_hz`",
        ));
    }
    let noise = match (raw.noise_power, raw.noise_power_dbm, raw.bandwidth_hz) {
        (Some(v), _, _) => Some(v),
        (_, Some(v), _) => Some(dbm_to_watts(v)),
        (_, _, Some(b)) => Some(noise_power_from_bandwidth(b).map_err(|e| match e {
            Error::Domain(reason) => Error::config("network.bandwidth_hz", reason),
            other => other,
        })?),
        _ => None,
    };
    let pick = |field: &str, v: Option<f64>, b: Option<f64>| required(S, field, v.or(b));
    let cfg = NetworkConfig {
        lambda_bs: pick("lambda_bs", raw.lambda_bs, base.map(|b| b.lambda_bs))?,
        m_beams: required(S, "m_beams", raw.m_beams.or(base.map(|b| b.m_beams)))?,
        power_tx: pick("power_tx", power, base.map(|b| b.power_tx))?,
        noise_power: pick("noise_power", noise, base.map(|b| b.noise_power))?,
        sinr_threshold: pick("sinr_threshold", threshold, base.map(|b| b.sinr_threshold))?,
        cycle_period: pick(
            "cycle_period",
            raw.cycle_period,
            base.map(|b| b.cycle_period),
        )?,
        symbol_period: pick(
            "symbol_period",
            raw.symbol_period,
            base.map(|b| b.symbol_period),
        )?,
        scenario: required(S, "scenario", raw.scenario.or(base.map(|b| b.scenario)))?,
    };
    cfg.validate().map_err(|e| prefixed(S, e))?;
    Ok(cfg)
}

fn resolve_path_loss(raw: &RawPathLoss, base: Option<&PathLossModel>) -> Result<PathLossModel> {
    const S: &str = "path_loss";
    let lin = |v: f64| Ok(db_to_linear(v));
    let single_c = one_of(S, ("c", raw.c), ("c_db", raw.c_db), lin)?;
    let c_los = one_of(S, ("c_los", raw.c_los), ("c_los_db", raw.c_los_db), lin)?;
    let c_nlos = one_of(S, ("c_nlos", raw.c_nlos), ("c_nlos_db", raw.c_nlos_db), lin)?;
    let shorthand = single_c.is_some() || raw.alpha.is_some();
    let explicit =
        c_los.is_some() || c_nlos.is_some() || raw.alpha_los.is_some() || raw.alpha_nlos.is_some();
    if shorthand && (explicit || raw.r_critical.is_some()) {
        return Err(Error::config(
            "path_loss.c",
            "the single-slope shorthand (`c`/`c_db`, `alpha`) cannot be mixed with dual-slope fields",
        ));
    }
    let plm = if shorthand {
        let c = required(
            S,
            "c",
            single_c.or(base.filter(|b| b.is_single_slope()).map(|b| b.c_nlos)),
        )?;
        let alpha = required(
            S,
            "alpha",
            raw.alpha
                .or(base.filter(|b| b.is_single_slope()).map(|b| b.alpha_nlos)),
        )?;
        PathLossModel {
            c_los: c,
            c_nlos: c,
            alpha_los: alpha,
            alpha_nlos: alpha,
            r_critical: base.map_or(1.0, |b| b.r_critical),
        }
    } else {
        PathLossModel {
            c_los: required(S, "c_los", c_los.or(base.map(|b| b.c_los)))?,
            c_nlos: required(S, "c_nlos", c_nlos.or(base.map(|b| b.c_nlos)))?,
            alpha_los: required(S, "alpha_los", raw.alpha_los.or(base.map(|b| b.alpha_los)))?,
            alpha_nlos: required(
                S,
                "alpha_nlos",
                raw.alpha_nlos.or(base.map(|b| b.alpha_nlos)),
            )?,
            r_critical: required(
                S,
                "r_critical",
                raw.r_critical.or(base.map(|b| b.r_critical)),
            )?,
        }
    };
    plm.validate().map_err(|e| prefixed(S, e))?;
    Ok(plm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field_of(e: Error) -> String {
        match e {
            Error::InvalidConfig { field, .. } => field,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn preset_with_overrides() {
        let c = RunConfig::from_toml_str(
            r#"
            preset = "sub6-2ghz"
            [network]
            m_beams = 8
            sinr_threshold_db = -4.0
            [truncation]
            j_cap = 300
            "#,
        )
        .unwrap();
        let reference = RunConfig::from_preset(Preset::Sub6Ghz2, 8).unwrap();
        assert_eq!(c.network, reference.network);
        assert_eq!(c.path_loss, reference.path_loss);
        assert_eq!(c.truncation.j_cap, 300);
    }

    #[test]
    fn full_file_without_preset() {
        let c = RunConfig::from_toml_str(
            r#"
            [network]
            lambda_bs = 1e-4
            m_beams = 4
            power_tx_dbm = 30.0
            bandwidth_hz = 2e9
            sinr_threshold_db = -4.0
            cycle_period = 0.02
            symbol_period = 14.3e-6
            scenario = "noise-limited"
            [path_loss]
            c_los_db = 69.71
            c_nlos_db = 69.71
            alpha_los = 2.1
            alpha_nlos = 3.3
            r_critical = 50.0
            "#,
        )
        .unwrap();
        let reference = RunConfig::from_preset(Preset::Mmwave73Ghz, 4).unwrap();
        assert!((c.network.power_tx - 1.0).abs() < 1e-12);
        assert!((c.network.noise_power / reference.network.noise_power - 1.0).abs() < 1e-12);
        assert!((c.path_loss.c_los / reference.path_loss.c_los - 1.0).abs() < 1e-12);
        assert_eq!(c.truncation.j_cap, 1500);
    }

    #[test]
    fn errors_name_the_field() {
        let e = RunConfig::from_toml_str("preset = \"sub6-2ghz\"\n[network]\nlambda_bs = -1.0\n")
            .unwrap_err();
        assert_eq!(field_of(e), "network.lambda_bs");
        let e = RunConfig::from_toml_str(
            "preset = \"sub6-2ghz\"\n[network]\npower_tx = 1.0\npower_tx_dbm = 30.0\n",
        )
        .unwrap_err();
        assert_eq!(field_of(e), "network.power_tx");
        let e = RunConfig::from_toml_str("[network]\nlambda_bs = 1e-4\n").unwrap_err();
        assert_eq!(field_of(e), "network.m_beams");
        let e = RunConfig::from_toml_str("preset = \"sub6-2ghz\"\n[path_loss]\nalpha = 1.5\n")
            .unwrap_err();
        assert_eq!(field_of(e), "path_loss.alpha_nlos");
        let e = RunConfig::from_toml_str("preset = \"nope\"\n").unwrap_err();
        assert_eq!(field_of(e), "preset");
        let e = RunConfig::from_toml_str("preset = \"sub6-2ghz\"\n[truncation]\nj_cap = 1\n")
            .unwrap_err();
        assert_eq!(field_of(e), "truncation.j_cap");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            RunConfig::from_toml_str("[network]\nlambda = 1.0\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn toml_round_trip() {
        let c = RunConfig::from_preset(Preset::Mmwave73Ghz, 18).unwrap();
        let back = RunConfig::from_toml_str(&c.to_toml_string().unwrap()).unwrap();
        assert_eq!(back.network, c.network);
        assert_eq!(back.path_loss, c.path_loss);
        assert_eq!(back.truncation, c.truncation);
        assert_eq!(back.quadrature, c.quadrature);
        assert_eq!(back.preset, Some(Preset::Mmwave73Ghz));
    }
}
