// Link-budget view of the two presets: path loss, SNR at a few distances and
// the delay of the first and fifth cycle.
//
// ```text
// cargo run --example path_loss_presets
// ```

use cellsearch::model::{delay_from_cycles, linear_to_db, watts_to_dbm, Preset};

pub fn run_example() -> cellsearch::Result<()> {
    for preset in [Preset::Mmwave73Ghz, Preset::Sub6Ghz2] {
        let cfg = preset.network(8)?;
        let plm = preset.path_loss();
        println!(
            "{}: P = {:.1} dBm, N = {:.1} dBm, threshold {:.1} dB, slopes {}/{}",
            preset.name(),
            watts_to_dbm(cfg.power_tx)?,
            watts_to_dbm(cfg.noise_power)?,
            linear_to_db(cfg.sinr_threshold)?,
            plm.alpha_los,
            plm.alpha_nlos,
        );
        for r in [10.0, 50.0, 200.0] {
            let snr = cfg.power_tx / (plm.eval(r) * cfg.noise_power);
            println!(
                "  r = {r:>5} m  loss {:6.1} dB  SNR {:6.1} dB",
                linear_to_db(plm.eval(r))?,
                linear_to_db(snr)?
            );
        }
        let first = delay_from_cycles(&cfg, 1.0)?;
        let fifth = delay_from_cycles(&cfg, 5.0)?;
        assert!((first.delay_seconds - cfg.sweep_duration()).abs() < 1e-15);
        println!(
            "  delay after 1 cycle {:.3e} s, after 5 cycles {:.3e} s",
            first.delay_seconds, fifth.delay_seconds
        );
    }
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
