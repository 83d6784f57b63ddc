#![allow(dead_code)]

mod path_loss_presets {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/path_loss_presets.rs"
    ));
}

#[test]
fn path_loss_presets_example_runs() {
    path_loss_presets::run_example().expect("path_loss_presets example should run");
}

mod ppp_geometry {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/ppp_geometry.rs"
    ));
}

#[test]
fn ppp_geometry_example_runs() {
    ppp_geometry::run_example().expect("ppp_geometry example should run");
}

mod mean_cycles_phase {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/mean_cycles_phase.rs"
    ));
}

#[test]
fn mean_cycles_phase_example_runs() {
    mean_cycles_phase::run_example().expect("mean_cycles_phase example should run");
}

mod conditional_vs_simulation {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/conditional_vs_simulation.rs"
    ));
}

#[test]
fn conditional_vs_simulation_example_runs() {
    conditional_vs_simulation::run_example().expect("conditional_vs_simulation example should run");
}

mod delay_quantiles {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/delay_quantiles.rs"
    ));
}

#[test]
fn delay_quantiles_example_runs() {
    delay_quantiles::run_example().expect("delay_quantiles example should run");
}

mod tail_fit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tail_fit.rs"));
}

#[test]
fn tail_fit_example_runs() {
    tail_fit::run_example().expect("tail_fit example should run");
}

mod monte_carlo_cell_search {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/monte_carlo_cell_search.rs"
    ));
}

#[test]
fn monte_carlo_cell_search_example_runs() {
    monte_carlo_cell_search::run_example().expect("monte_carlo_cell_search example should run");
}

mod config_file {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/config_file.rs"
    ));
}

#[test]
fn config_file_example_runs() {
    config_file::run_example().expect("config_file example should run");
}
