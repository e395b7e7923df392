//! End-to-end checks of the `speclog` binary: exit codes, table bytes and
//! the matrix cache behaviour.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_speclog"))
}

fn write_config(dir: &Path, basis: u32, k_max: u32) -> std::path::PathBuf {
    let path = dir.join("config.json");
    let out = dir.join("out");
    let text = format!(
        r#"{{
  "n": 1,
  "s": 0.5,
  "box_lengths": [3.141592653589793],
  "basis_size": {basis},
  "k_max": {k_max},
  "output_dir": {:?},
  "seed": 7
}}"#,
        out.to_str().unwrap()
    );
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bounds_then_rerun_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 16, 8);
    let status = bin()
        .args(["bounds", "--config", config.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let table = dir.path().join("out/bounds.csv");
    let first = std::fs::read(&table).unwrap();
    assert!(first.starts_with(b"k,lower_bound,regime,"));
    let status = bin()
        .args(["bounds", "--config", config.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(first, std::fs::read(&table).unwrap());
}

#[test]
fn solve_reports_cache_hit_on_second_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 16, 8);
    let out = bin()
        .args(["solve", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(!String::from_utf8_lossy(&out.stdout).contains("cache hit"));
    let again = bin()
        .args(["solve", "--config", config.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(again.status.success());
    assert!(String::from_utf8_lossy(&again.stdout).contains("cache hit"));

    // classical symbol: eigenvalues approximate j^2
    let classical = dir.path().join("classical.json");
    std::fs::write(
        &classical,
        format!(
            r#"{{"n":1,"s":0.5,"box_lengths":[3.141592653589793],"basis_size":50,"k_max":25,
"symbol":"fractional","fractional_order":1.0,"output_dir":{:?},"seed":0}}"#,
            dir.path().join("out2").to_str().unwrap()
        ),
    )
    .unwrap();
    let status = bin()
        .args(["solve", "--config", classical.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("out2/spectrum.csv")).unwrap();
    for (i, line) in text.lines().skip(1).take(20).enumerate() {
        let value: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        let want = ((i + 1) * (i + 1)) as f64;
        assert!(
            (value - want).abs() <= 1e-4 * want,
            "index {}: {value} vs {want}",
            i + 1
        );
    }
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    // k_max beyond the resolved range
    let bad = write_config(dir.path(), 16, 9);
    let status = bin()
        .args(["bounds", "--config", bad.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
    // missing config file
    let status = bin()
        .args([
            "bounds",
            "--config",
            dir.path().join("absent.json").to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn cutoff_sweep_writes_probe_and_fit_tables() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 16, 8);
    let status = bin()
        .args([
            "cutoff",
            "--config",
            config.to_str().unwrap(),
            "--r-list",
            "20,25",
            "--sigma-list",
            "0.05",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let probe = std::fs::read_to_string(dir.path().join("out/cutoff_probe.csv")).unwrap();
    assert!(probe.starts_with("r,sigma,lhs,main_term,remainder,identity_ratio"));
    assert_eq!(probe.lines().count(), 3);
    // identity column holds to 1e-10
    for line in probe.lines().skip(1) {
        let identity: f64 = line.split(',').nth(5).unwrap().parse().unwrap();
        assert!((identity - 1.0).abs() <= 1e-10, "{identity}");
    }
    let fit = std::fs::read_to_string(dir.path().join("out/cutoff_fit.csv")).unwrap();
    assert!(fit.starts_with("varied,fixed_value,exponent"));

    // precondition violations name the offending element
    let out = bin()
        .args([
            "cutoff",
            "--config",
            config.to_str().unwrap(),
            "--r-list",
            "20,1.0",
            "--sigma-list",
            "0.05",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("r = 1"));
}

#[test]
fn spectrum_bytes_are_thread_count_invariant() {
    // assembly parallelism must not change a single bit of the output
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 24, 12);
    let spectrum = dir.path().join("out/spectrum.csv");
    let mut runs = Vec::new();
    for threads in ["1", "2"] {
        std::fs::remove_dir_all(dir.path().join("out")).ok();
        let status = bin()
            .env("SPECLOG_THREADS", threads)
            .args(["solve", "--config", config.to_str().unwrap()])
            .status()
            .unwrap();
        assert!(status.success());
        runs.push(std::fs::read(&spectrum).unwrap());
    }
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn asymptotics_table_has_increasing_ranks() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), 16, 8);
    let status = bin()
        .args(["asymptotics", "--config", config.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(dir.path().join("out/asymptotics.csv")).unwrap();
    let ks: Vec<u64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ks, vec![1_000, 10_000, 100_000, 1_000_000]);
}
