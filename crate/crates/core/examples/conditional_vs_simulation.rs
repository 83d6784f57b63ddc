// Conditional mean cycles given the nearest-BS distance, computed exactly and
// by simulating the protocol.

use cellsearch::cli::compare_point;
use cellsearch::simulate::TrialConfig;
use cellsearch::{Preset, RunConfig};

pub fn run_example() -> cellsearch::Result<()> {
    let run = RunConfig::from_preset(Preset::Sub6Ghz2, 8)?;
    println!(
        "{:>7} {:>10} {:>10} {:>9} {:>6}",
        "r0 [m]", "analytic", "simulated", "stderr", "z"
    );
    for (i, r0) in [10.0, 40.0, 120.0].into_iter().enumerate() {
        let trial = TrialConfig::for_scenario(run.network.scenario, 4_000, 100 + i as u64)
            .conditioned_on(r0);
        let p = compare_point(&run, 8, r0, &trial)?;
        println!(
            "{r0:>7} {:>10.5} {:>10.5} {:>9.2e} {:>6.2}",
            p.analytic, p.simulated.mean, p.simulated.stderr, p.z
        );
        assert!(p.z.abs() < 5.0);
    }
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
