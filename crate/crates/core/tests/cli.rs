use std::fs;
use std::path::Path;

use cellsearch::cli::{run, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE};
use cellsearch::report::{RunManifest, MANIFEST_FILE};

fn cli(args: &[&str]) -> i32 {
    run(std::iter::once("cellsearch").chain(args.iter().copied()))
}

fn out(dir: &Path) -> String {
    dir.display().to_string()
}

#[test]
fn usage_and_config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    assert_eq!(cli(&["eval-mean", "--out", &o]), EXIT_USAGE);
    assert_eq!(
        cli(&["eval-mean", "--preset", "nope", "--out", &o]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&["eval-mean", "--preset", "sub6-2ghz", "--m", "", "--out", &o]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "eval-mean",
            "--preset",
            "sub6-2ghz",
            "--config",
            "x.toml",
            "--out",
            &o
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "conditional",
            "--preset",
            "sub6-2ghz",
            "--r0=-5",
            "--out",
            &o
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "simulate",
            "--preset",
            "sub6-2ghz",
            "--trials",
            "0",
            "--out",
            &o
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "eval-mean",
            "--preset",
            "sub6-2ghz",
            "--lambda-km2=-1",
            "--out",
            &o
        ]),
        EXIT_USAGE
    );
    assert_eq!(
        cli(&[
            "quantiles",
            "--preset",
            "sub6-2ghz",
            "--samples",
            "10",
            "--out",
            &o
        ]),
        EXIT_USAGE
    );
    assert_eq!(cli(&["frobnicate"]), EXIT_USAGE);
    assert_eq!(cli(&["--help"]), EXIT_OK);
}

#[test]
fn missing_config_file_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("absent.toml");
    assert_eq!(
        cli(&[
            "eval-mean",
            "--config",
            &out(&missing),
            "--out",
            &out(tmp.path())
        ]),
        EXIT_RUNTIME
    );
}

#[test]
fn eval_mean_writes_table_and_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    assert_eq!(
        cli(&[
            "eval-mean",
            "--preset",
            "sub6-2ghz",
            "--m",
            "4,8",
            "--out",
            &o
        ]),
        EXIT_OK
    );
    let text = fs::read_to_string(tmp.path().join("eval_mean.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# produced by cellsearch"));
    assert!(lines
        .next()
        .unwrap()
        .starts_with("m_beams,mean_cycles,status"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("8,") && rows[1].ends_with("finite-mean"));
    let m = RunManifest::read(&tmp.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(m.command, "eval-mean");
    assert_eq!(m.outputs, vec![tmp.path().join("eval_mean.csv")]);
}

#[test]
fn config_file_matches_preset() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, "preset = \"sub6-2ghz\"\n[network]\nm_beams = 8\n").unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(
        cli(&[
            "eval-mean",
            "--config",
            &out(&cfg),
            "--m",
            "8",
            "--out",
            &out(&a)
        ]),
        EXIT_OK
    );
    assert_eq!(
        cli(&[
            "eval-mean",
            "--preset",
            "sub6-2ghz",
            "--m",
            "8",
            "--out",
            &out(&b)
        ]),
        EXIT_OK
    );
    assert_eq!(
        fs::read_to_string(a.join("eval_mean.csv")).unwrap(),
        fs::read_to_string(b.join("eval_mean.csv")).unwrap()
    );
}

#[test]
fn phase_diagram_boundary_for_unit_nlos_exponent() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(
        &cfg,
        "preset = \"mmwave-73ghz\"\n[path_loss]\nc_db = 69.71\nalpha = 2.0\n",
    )
    .unwrap();
    let o = out(tmp.path());
    let args = [
        "phase-diagram",
        "--config",
        &out(&cfg),
        "--m",
        "4,36",
        "--lambda-km2",
        "log:10:1000:3",
        "--out",
        &o,
    ];
    assert_eq!(cli(&args), EXIT_OK);
    let phase = fs::read_to_string(tmp.path().join("phase.csv")).unwrap();
    assert_eq!(phase.lines().count(), 2 + 6);
    let boundary = fs::read_to_string(tmp.path().join("phase_boundary.csv")).unwrap();
    assert_eq!(boundary.lines().count(), 2 + 3);
}

#[test]
fn rerun_reproduces_outputs_byte_for_byte() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let args = [
        "compare",
        "--preset",
        "sub6-2ghz",
        "--m",
        "4,8",
        "--r0",
        "20,60",
        "--trials",
        "400",
        "--seed",
        "9",
        "--out",
    ];
    let mut full: Vec<&str> = args.to_vec();
    let o = out(&first);
    full.push(&o);
    assert_eq!(cli(&full), EXIT_OK);
    let again = tmp.path().join("again");
    let manifest = out(&first.join(MANIFEST_FILE));
    assert_eq!(cli(&["rerun", &manifest, "--out", &out(&again)]), EXIT_OK);
    let a = fs::read(first.join("compare.csv")).unwrap();
    let b = fs::read(again.join("compare.csv")).unwrap();
    assert_eq!(a, b);
    let m = RunManifest::read(&again.join(MANIFEST_FILE)).unwrap();
    assert!(m.invocation.iter().any(|a| a == "--config"));
}

#[test]
fn quantiles_mark_censored_values() {
    let tmp = tempfile::tempdir().unwrap();
    let o = out(tmp.path());
    let args = [
        "quantiles",
        "--preset",
        "mmwave-73ghz",
        "--m",
        "4",
        "--samples",
        "20000",
        "--out",
        &o,
    ];
    assert_eq!(cli(&args), EXIT_OK);
    let text = fs::read_to_string(tmp.path().join("quantiles.csv")).unwrap();
    let ten = text.lines().find(|l| l.starts_with("4,10,")).unwrap();
    assert!(ten.split(',').nth(2).unwrap().starts_with('>'));
    let ccdf_args = [
        "ccdf",
        "--preset",
        "mmwave-73ghz",
        "--m",
        "4",
        "--samples",
        "20000",
        "--out",
        &o,
    ];
    assert_eq!(cli(&ccdf_args), EXIT_OK);
    assert!(tmp.path().join("ccdf_m4.csv").exists());
}
