use std::path::{Path, PathBuf};
use std::process::Command;

use rdars_cli::{config_digest, run_command, ConfigFile, Figure, Overrides, RunOptions};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn opts(config: Option<PathBuf>, out: &Path, trials: usize) -> RunOptions {
    RunOptions {
        config_path: config,
        out_dir: out.to_path_buf(),
        overrides: Overrides {
            trials: Some(trials),
            ..Overrides::default()
        },
        workers: None,
    }
}

fn architectures(csv: &str) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().to_string()).collect()
}

#[test]
fn cdf_output_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = RunOptions {
        overrides: Overrides::default(),
        ..opts(Some(golden("cdf_small.toml")), dir.path(), 0)
    };
    run_command(Figure::Cdf, &o).unwrap();
    let got = std::fs::read(dir.path().join("cdf_sub6.csv")).unwrap();
    let want = std::fs::read(golden("cdf_sub6.csv")).unwrap();
    assert!(got == want, "CSV drifted from the golden file:\n{}", String::from_utf8_lossy(&got));
}

#[test]
fn cdf_run_writes_all_architectures() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = run_command(Figure::Cdf, &opts(None, dir.path(), 20)).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("cdf_sub6.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "sweep_value,architecture,mean_snr_db,mean_capacity_bps,mean_ee_bpj,total_power_w,stderr_ee"
    );
    assert_eq!(
        architectures(&csv),
        ["RIS", "ARIS", "RDARS a=1", "RDARS a=2", "RDARS a=3", "RDARS a=4"]
    );
    assert!(csv.lines().skip(1).all(|l| l.starts_with("1024,")));

    let ecdf = std::fs::read_to_string(dir.path().join("cdf_sub6_ecdf.csv")).unwrap();
    assert_eq!(ecdf.lines().count(), 1 + 6 * 20);
    assert_eq!(manifest.output_paths.len(), 4);
    for p in &manifest.output_paths {
        assert!(p.exists(), "{}", p.display());
    }
    let script = std::fs::read_to_string(dir.path().join("cdf_sub6_plot.py")).unwrap();
    assert!(script.contains("cdf_sub6_ecdf.csv"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut o = opts(None, a.path(), 50);
    o.workers = Some(1);
    run_command(Figure::EeVsUe, &o).unwrap();
    let mut o = opts(None, b.path(), 50);
    o.workers = Some(3);
    run_command(Figure::EeVsUe, &o).unwrap();
    let read = |d: &Path| std::fs::read(d.join("ee_vs_ue_sub6.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn element_sweep_row_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "band = \"mmwave\"\nconnected_modes = [1, 4]\n[sweep]\npoints = [16, 64, 128]\n").unwrap();
    run_command(Figure::EeVsN, &opts(Some(cfg), dir.path(), 10)).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("ee_vs_n_mmwave.csv")).unwrap();
    assert_eq!(csv.lines().count() - 1, 3 * 4);
    assert!(!dir.path().join("ee_vs_n_mmwave_ecdf.csv").exists());
}

#[test]
fn digest_ignores_key_order() {
    let a = ConfigFile::parse("band = \"mmwave\"\nseed = 3\n[power]\np_c = 0.001\np_dc = 0.002\n").unwrap();
    let b = ConfigFile::parse("[power]\np_dc = 0.002\np_c = 0.001\n").unwrap();
    let b = ConfigFile {
        seed: Some(3),
        band: Some(rdars_core::Band::MmWave),
        ..b
    };
    let ra = a.resolve(Figure::EeVsN, &Overrides::default()).unwrap();
    let rb = b.resolve(Figure::EeVsN, &Overrides::default()).unwrap();
    assert_eq!(config_digest(&ra).unwrap(), config_digest(&rb).unwrap());

    let reordered = ConfigFile::parse("seed = 3\nband = \"mmwave\"\n[power]\np_dc = 0.002\np_c = 0.001\n").unwrap();
    let rc = reordered.resolve(Figure::EeVsN, &Overrides::default()).unwrap();
    assert_eq!(config_digest(&ra).unwrap(), config_digest(&rc).unwrap());

    let other = ConfigFile::parse("band = \"mmwave\"\nseed = 4\n").unwrap();
    let rd = other.resolve(Figure::EeVsN, &Overrides::default()).unwrap();
    assert_ne!(config_digest(&ra).unwrap(), config_digest(&rd).unwrap());
}

#[test]
fn manifest_reproduces_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = run_command(Figure::EeVsXrs, &opts(None, dir.path(), 15)).unwrap();
    let text = std::fs::read_to_string(dir.path().join("ee_vs_xrs_sub6_manifest.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["config_digest"], manifest.config_digest);
    assert_eq!(json["config"]["n_trials"], 15);
    let cfg: rdars_core::ExperimentConfig = serde_json::from_value(json["config"].clone()).unwrap();
    assert_eq!(config_digest(&cfg).unwrap(), manifest.config_digest);
    let rerun = rdars_core::run_sweep(&cfg).unwrap();
    let again = tempfile::tempdir().unwrap();
    rdars_cli::commands::write_outputs(Figure::EeVsXrs, &cfg, &rerun, again.path()).unwrap();
    assert_eq!(
        std::fs::read(dir.path().join("ee_vs_xrs_sub6.csv")).unwrap(),
        std::fs::read(again.path().join("ee_vs_xrs_sub6.csv")).unwrap()
    );
}

#[test]
fn missing_config_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let err = run_command(Figure::Cdf, &opts(Some(missing.clone()), dir.path(), 1)).unwrap_err();
    assert!(err.to_string().contains("nope.toml"), "{err}");
}

#[test]
fn binary_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rdars-sim"))
        .args(["ee-vs-xrs", "--band", "mmwave", "--trials", "5", "--seed", "11", "--workers", "2"])
        .env("RDARS_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("ee_vs_xrs_mmwave.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 9 * 6);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "n_elements = 2\nconnected_modes = [3]\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_rdars-sim"))
        .args(["cdf", "--config"])
        .arg(&bad)
        .args(["--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid configuration"));
}
