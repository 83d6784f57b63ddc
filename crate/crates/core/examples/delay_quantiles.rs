// Delay of the 95th, 50th and 10th percentile user for the mmWave preset.
// Users whose conditional mean does not converge are reported as lower bounds.

use cellsearch::distribution::{build_delay_distribution, distribution_truncation};
use cellsearch::rng::stream;
use cellsearch::{Preset, QuadratureSpec, Truncation};

pub fn run_example() -> cellsearch::Result<()> {
    let preset = Preset::Mmwave73Ghz;
    let plm = preset.path_loss();
    for m in [4, 12, 36] {
        let cfg = preset.network(m)?;
        let trunc = distribution_truncation(&Truncation::for_scenario(cfg.scenario), cfg.scenario);
        let dist = build_delay_distribution(
            &cfg,
            &plm,
            20_000,
            &trunc,
            &QuadratureSpec::default(),
            &mut stream(1, m as u64),
        )?;
        let q: Vec<String> = [95.0, 50.0, 10.0]
            .iter()
            .map(|&p| dist.quantile_value(p).map(|v| v.to_string()))
            .collect::<cellsearch::Result<_>>()?;
        println!(
            "M = {m:>2}: 95th {} s, 50th {} s, 10th {} s ({:.1}% censored)",
            q[0],
            q[1],
            q[2],
            100.0 * dist.censored_fraction()
        );
    }
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
