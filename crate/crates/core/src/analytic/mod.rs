//! Numerical evaluation of the mean-cycle series, bounds, phase verdicts and
//! conditional means.

pub mod bounds;
pub mod conditional;
pub mod detection;
pub mod hfunc;
pub mod kernel;
pub mod mean;
pub mod precision;
pub mod quadrature;
pub mod series;

pub use bounds::{
    interference_critical_beams, lower_bound_mean_cycles, noise_limited_critical_product,
    phase_classifier, upper_bound_mean_cycles_interference, PhaseVerdict,
};
pub use conditional::{
    cond_mean_cycles_given_all_sectors, cond_mean_cycles_given_r0, f_j_sector,
    sector_non_detection, ConditionalEngine,
};
pub use detection::{
    cycle_success_probability, detection_probability_given_topology, mean_cycles_given_topology,
    sector_detection_probabilities,
};
pub use hfunc::{h_integral, HTable};
pub use kernel::SectorKernel;
pub use mean::{
    a_j, a_j_monte_carlo, a_sequence, mean_cycles, mean_cycles_alternating,
    mean_cycles_noise_limited, mean_cycles_with, MonteCarloEstimate,
};
pub use quadrature::{QuadratureSpec, Transform};
pub use series::{SeriesResult, SeriesStatus, Truncation};
