// Builds a run configuration from TOML, overriding part of a preset.

use cellsearch::{RunConfig, Scenario};

const TOML: &str = r#"
preset = "mmwave-73ghz"

[network]
m_beams = 12
lambda_bs = 2e-4

[truncation]
j_cap = 800
"#;

pub fn run_example() -> cellsearch::Result<()> {
    let run = RunConfig::from_toml_str(TOML)?;
    assert_eq!(run.network.scenario, Scenario::NoiseLimited);
    assert_eq!(run.truncation.j_cap, 800);
    println!("{}", run.to_toml_string()?);
    let again = RunConfig::from_toml_str(&run.to_toml_string()?)?;
    assert_eq!(again, run);
    Ok(())
}

fn main() -> cellsearch::Result<()> {
    run_example()
}
