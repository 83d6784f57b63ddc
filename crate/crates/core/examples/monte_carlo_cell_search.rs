// Runs the beam-sweeping protocol on one fixed topology, checks the sample
// mean against the exact topology-conditional mean and writes trial outcomes.

use cellsearch::analytic::mean_cycles_given_topology;
use cellsearch::geometry::sample_ppp_disk;
use cellsearch::rng::stream;
use cellsearch::simulate::{
    run_trials, write_outcomes_csv, FarField, MeanEstimate, TopologySource, TrialConfig,
};
use cellsearch::Preset;

pub fn run_example() -> cellsearch::Result<()> {
    let cfg = Preset::Sub6Ghz2.network(4)?;
    let plm = Preset::Sub6Ghz2.path_loss();
    let topo = sample_ppp_disk(cfg.lambda_bs, 1_000.0, &mut stream(11, 0));
    let trial = TrialConfig {
        far_field: FarField::Ignore,
        window_radius: Some(1_000.0),
        ..TrialConfig::for_scenario(cfg.scenario, 20_000, 5)
    };
    let outcomes = run_trials(TopologySource::Fixed(&topo), &cfg, &plm, &trial)?;
    let est = MeanEstimate::from_outcomes(&outcomes, trial.max_cycles);
    let exact = mean_cycles_given_topology(&topo, &cfg, &plm);
    println!(
        "{} BSs: simulated {:.4} ± {:.4}, exact {:.4}",
        topo.len(),
        est.mean,
        est.stderr,
        exact
    );
    let mut csv = Vec::new();
    write_outcomes_csv(&mut csv, &outcomes[..5])?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
