use std::fs;
use std::process::Command;

use rmtlab::harness::{Report, MANIFEST_NAME};

fn rmtlab() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_rmtlab"));
    c.env_remove("RMTLAB_OUT");
    c
}

#[test]
fn semicircle_run_writes_artifacts_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = rmtlab()
        .args(["semicircle", "--n", "100", "--reps", "5", "--dist", "uniform", "--seed", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["semicircle.csv", "semicircle.json", "semicircle.plot", MANIFEST_NAME] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let csv = fs::read_to_string(dir.path().join("semicircle.csv")).unwrap();
    assert_eq!(csv.lines().count(), 6);
    let plot = fs::read_to_string(dir.path().join("semicircle.plot")).unwrap();
    assert_eq!(plot.lines().next().unwrap(), "# t ecdf semicircle_cdf");
    let g: Vec<f64> = plot.lines().skip(1).map(|l| l.split_whitespace().nth(2).unwrap().parse().unwrap()).collect();
    assert!(g.windows(2).all(|w| w[1] >= w[0]));
    let json = fs::read_to_string(dir.path().join("semicircle.json")).unwrap();
    assert_eq!(Report::from_json(&json).unwrap().to_json().unwrap(), json);
}

#[test]
fn refuses_overwrite_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let run = |force: bool| {
        let mut c = rmtlab();
        c.args(["trace-moment", "--n", "20", "--reps", "3", "--format", "csv", "--out"]).arg(dir.path());
        if force {
            c.arg("--force");
        }
        c.output().unwrap()
    };
    assert!(matches!(run(false).status.code(), Some(0 | 1)));
    let second = run(false);
    assert_eq!(second.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&second.stderr).contains("--force"));
    assert!(matches!(run(true).status.code(), Some(0 | 1)));
}

#[test]
fn missing_parameter_is_a_configuration_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = rmtlab().args(["bulk-clt", "--n", "50", "--reps", "5", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'k'"));
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn unknown_distribution_and_kind_exit_2() {
    let out = rmtlab().args(["semicircle", "--n", "5", "--reps", "1", "--dist", "cauchy"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = rmtlab().args(["nonsense", "--n", "5", "--reps", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn statistical_failure_exits_1() {
    // a tolerance no finite sample meets
    let dir = tempfile::tempdir().unwrap();
    let out = rmtlab()
        .args(["semicircle", "--n", "20", "--reps", "2", "--param", "tol=1e-9", "--format", "json", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL pooled_ks_d"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = rmtlab().env("RMTLAB_OUT", dir.path()).args(["tw-table", "--format", "plot"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("tw-table.plot").exists());
}

#[test]
fn config_file_sections_run_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lab.cfg");
    fs::write(
        &cfg,
        "# two quick runs\n[quick-semicircle]\nkind = semicircle\nn = 40\nreps = 3\ndist = rademacher\nseed = 9\ntol = 0.2\n\n[table]\nkind = tw-table\ngrid = -3:3:1\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = rmtlab().arg("--config").arg(&cfg).arg("--out").arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out_dir.join("quick-semicircle.json").exists());
    let table = fs::read_to_string(out_dir.join("table.csv")).unwrap();
    assert_eq!(table.lines().count(), 8);

    let only = dir.path().join("only");
    let out = rmtlab().arg("--config").arg(&cfg).args(["--section", "table", "--out"]).arg(&only).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(!only.join("quick-semicircle.json").exists());
}

#[test]
fn manifest_digests_match_files() {
    use sha2::{Digest, Sha256};
    let dir = tempfile::tempdir().unwrap();
    let out = rmtlab().args(["tw-table", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let manifest = fs::read_to_string(dir.path().join(MANIFEST_NAME)).unwrap();
    assert_eq!(manifest.lines().count(), 3);
    for line in manifest.lines() {
        let (digest, name) = line.split_once("  ").unwrap();
        let bytes = fs::read(dir.path().join(name)).unwrap();
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        assert_eq!(hex, digest, "{name}");
    }
}
