//! Directional cell-search delay in Poisson cellular networks with Rayleigh fading.
//!
//! Two engines are provided and cross-check each other:
//!
//! * [`analytic`] evaluates mean-cycle series, bounds, phase verdicts and the
//!   conditional mean given the nearest-BS distance, with extended-precision
//!   alternating sums where cancellation demands it.
//! * [`simulate`] runs the beam-sweeping protocol cycle by cycle on sampled
//!   topologies with fresh exponential fades.
//!
//! [`distribution`] turns the conditional mean into delay CCDFs with their
//! quantiles and tail-slope fits. [`cli`] wires everything to the `cellsearch` binary.
//!
//! ```
//! use cellsearch::{analytic, model::Preset, Truncation};
//!
//! let cfg = Preset::Sub6Ghz2.network(8).unwrap();
//! let plm = Preset::Sub6Ghz2.path_loss();
//! let res = analytic::mean_cycles(&cfg, &plm, &Truncation::for_scenario(cfg.scenario)).unwrap();
//! assert!(res.value > 1.0 && res.value < 1.2487);
//! ```

// `!(x > 0.0)` style checks are meant to reject NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod cli;
pub mod config;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod model;
pub mod report;
pub mod rng;
pub mod simulate;

pub use analytic::{QuadratureSpec, SeriesResult, SeriesStatus, Truncation};
pub use config::RunConfig;
pub use distribution::DelayDistribution;
pub use error::{Error, Result};
pub use geometry::{SectorIndex, Topology};
pub use model::{NetworkConfig, PathLossModel, Preset, Scenario, TimingResult};
