// Log-log slope of the delay CCDF for the sub-6 GHz preset. More beams give
// a lighter tail.

use cellsearch::distribution::{build_delay_distribution, distribution_truncation, tail_exponent};
use cellsearch::rng::stream;
use cellsearch::{Preset, QuadratureSpec, Truncation};

pub fn run_example() -> cellsearch::Result<()> {
    let preset = Preset::Sub6Ghz2;
    let plm = preset.path_loss();
    let mut slopes = Vec::new();
    for m in [1, 4, 8] {
        let cfg = preset.network(m)?;
        let trunc = distribution_truncation(&Truncation::for_scenario(cfg.scenario), cfg.scenario);
        let dist = build_delay_distribution(
            &cfg,
            &plm,
            50_000,
            &trunc,
            &QuadratureSpec::default(),
            &mut stream(3, m as u64),
        )?;
        let fit = tail_exponent(&dist)?;
        println!(
            "M = {m}: slope {:.3} (95% CI {:.3} .. {:.3}) over [{:.2e}, {:.2e}] s{}",
            fit.slope,
            fit.ci.0,
            fit.ci.1,
            fit.fit_range.0,
            fit.fit_range.1,
            if fit.curvature_flag { ", curved" } else { "" }
        );
        slopes.push(fit.slope);
    }
    assert!(slopes[0] > slopes[1] && slopes[1] > slopes[2]);
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
