// Unconditional mean number of cycles against beam count, with the Jensen
// lower bound and the phase verdict.

use cellsearch::analytic::{
    lower_bound_mean_cycles, mean_cycles, phase_classifier, upper_bound_mean_cycles_interference,
};
use cellsearch::{Preset, Truncation};

pub fn run_example() -> cellsearch::Result<()> {
    let preset = Preset::Sub6Ghz2;
    let plm = preset.path_loss();
    println!(
        "{:>3} {:>12} {:>22} {:>8} {:>8} verdict",
        "M", "E[L]", "status", "lower", "upper"
    );
    for m in [1, 2, 4, 8, 12] {
        let cfg = preset.network(m)?;
        let s = mean_cycles(&cfg, &plm, &Truncation::for_scenario(cfg.scenario))?;
        let lo = lower_bound_mean_cycles(&cfg, &plm)?;
        let hi = upper_bound_mean_cycles_interference(&cfg, &plm)?;
        let verdict = phase_classifier(&cfg, &plm)?;
        println!(
            "{m:>3} {:>12.6} {:>22} {lo:>8.4} {hi:>8.4} {verdict}",
            s.value, s.status
        );
        if s.is_converged() {
            assert!(lo <= s.value && s.value <= hi);
        }
    }
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
