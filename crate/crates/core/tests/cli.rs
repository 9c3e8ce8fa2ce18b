use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sqfock::experiment::ScenarioConfig;
use sqfock::Error;

fn sqfock(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sqfock"));
    cmd.args(args).env_remove("SQFOCK_WORKERS");
    if let Some(w) = workers {
        cmd.env("SQFOCK_WORKERS", w);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn list_scenarios_names_every_scenario() {
    let out = sqfock(&["list-scenarios"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for name in ["fig1c", "fig2", "fig3b", "fig3c", "sm-s1", "sm-s2", "feasibility", "sweep"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from:\n{text}");
    }
}

#[test]
fn validate_reports_hash_and_rwa() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "[model]\nkerr = 1000.0\n");
    let out = sqfock(&["validate", "--config", &cfg], None);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let expected = ScenarioConfig::load(Path::new(&cfg)).unwrap().hash();
    assert!(text.contains(&expected), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("rwa ratio")).count(), 3);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let unknown = write_config(dir.path(), "unknown.toml", "[model]\nkerrr = 1.0\n");
    assert_eq!(sqfock(&["validate", "--config", &unknown], None).status.code(), Some(2));
    let missing = dir.path().join("nope.toml");
    assert_eq!(sqfock(&["validate", "--config", missing.to_str().unwrap()], None).status.code(), Some(2));
    let ok = write_config(dir.path(), "ok.toml", "");
    let out_dir = dir.path().join("out");
    let out = out_dir.to_str().unwrap();
    assert_eq!(sqfock(&["run", "--scenario", "fig9", "--config", &ok, "--out", out], None).status.code(), Some(2));
    assert_eq!(sqfock(&["run", "--scenario", "fig1c", "--config", &ok, "--out", out], Some("0")).status.code(), Some(2));
    let bad_axis = write_config(
        dir.path(),
        "axis.toml",
        "[sweep]\nobservables = [\"alpha\"]\n[[sweep.axes]]\nvariable = \"spin\"\nmin = 0.0\nmax = 1.0\npoints = 2\n",
    );
    assert_eq!(sqfock(&["run", "--scenario", "sweep", "--config", &bad_axis, "--out", out], None).status.code(), Some(2));
}

#[test]
fn truncation_guard_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s1.toml", "[protocol.sm_s1]\ndim = 40\n");
    let out_dir = dir.path().join("out");
    let out = sqfock(&["run", "--scenario", "sm-s1", "--config", &cfg, "--out", out_dir.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn exit_code_mapping() {
    assert_eq!(Error::Config("x".into()).exit_code(), 2);
    assert_eq!(Error::NonconvergentIntegration { refinements: 3, change: 1.0 }.exit_code(), 3);
    assert_eq!(Error::TruncationTooSmall { dim: 8, required: 64 }.exit_code(), 4);
}

#[test]
fn csv_is_deterministic_and_carries_units_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", "[protocol.fig1c]\nr_points = 31\n");
    let hash = ScenarioConfig::load(Path::new(&cfg)).unwrap().hash();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for d in [&a, &b] {
        let out = sqfock(&["run", "--scenario", "fig1c", "--config", &cfg, "--out", d.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0));
    }
    let first = fs::read(a.join("fig1c.csv")).unwrap();
    assert_eq!(first, fs::read(b.join("fig1c.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("# units: r [1], alpha [K]"));
    assert_eq!(lines.last().unwrap(), &format!("# config-sha256: {hash}"));
    let data: Vec<&str> = lines.iter().copied().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 31);
    // 17 significant digits: one leading digit and 16 decimals
    let cell = data[5].split(',').nth(1).unwrap();
    let mantissa = cell.split('e').next().unwrap().trim_start_matches('-');
    assert_eq!(mantissa.len(), 18, "{cell}");
}

#[test]
fn sweep_rows_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "sweep.toml",
        "[sweep]\nobservables = [\"alpha\", \"delta_k_ratio\"]\n\
         [[sweep.axes]]\nvariable = \"r\"\nmin = 0.0\nmax = 2.0\npoints = 5\n\
         [[sweep.axes]]\nvariable = \"gamma0\"\nmin = 1e3\nmax = 1e5\npoints = 3\nspacing = \"log\"\n",
    );
    let mut files = Vec::new();
    for w in ["1", "3"] {
        let d = dir.path().join(format!("w{w}"));
        let out = sqfock(&["run", "--scenario", "sweep", "--config", &cfg, "--out", d.to_str().unwrap()], Some(w));
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        files.push(fs::read(d.join("sweep.csv")).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn field_files_have_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "fig2.toml",
        "[protocol.fig2]\ntime_points = 9\nwigner_points = 11\nsnapshots = [0.0]\nphase_max = 1.0\n",
    );
    let d = dir.path().join("out");
    let out = sqfock(&["run", "--scenario", "fig2", "--config", &cfg, "--out", d.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let field = fs::read_to_string(d.join("fig2_wigner_squeezed_phase0.csv")).unwrap();
    let rows: Vec<&str> = field.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "re,im,value");
    assert_eq!(rows.len(), 1 + 11 * 11);
    assert!(rows[1..].iter().all(|r| r.split(',').count() == 3));
}
