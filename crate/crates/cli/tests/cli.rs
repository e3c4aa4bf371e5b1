//! End-to-end tests of the zetafrac binary: spawn the real executable,
//! check outputs, exit codes, and byte-level determinism.

use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use zetafrac::relations::examples::example2;
use zetafrac::relations::RelationSystem;
use zetafrac::zeros::ZeroSet;

const BIN: &str = env!("CARGO_BIN_EXE_zetafrac");

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .output()
        .expect("failed to spawn zetafrac")
}

fn assert_ok(out: &Output) {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn write_synthetic_zeros(path: &Path, n: usize) {
    let mut text = String::new();
    let mut t = 14.134725;
    for k in 0..n {
        text.push_str(&format!("{t:.9}\n"));
        t += 0.7337 + 0.1 * ((k as f64).sin() + 1.01);
    }
    std::fs::write(path, text).unwrap();
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

fn p(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

#[test]
fn ingest_roundtrip_and_errors() {
    let dir = tmp();
    let txt = p(&dir, "zeros.txt");
    write_synthetic_zeros(&txt, 1_000);
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "ingest",
        "--input",
        txt.to_str().unwrap(),
    ]);
    assert_ok(&out);
    let summary = stdout_json(&out);
    assert_eq!(summary["count"], 1_000);
    let cache = p(&dir, "zeros.zfpz");
    let zs = ZeroSet::load_cache(BufReader::new(std::fs::File::open(&cache).unwrap())).unwrap();
    assert_eq!(zs.count(), 1_000);

    // empty input → count 0 cache
    let empty = p(&dir, "empty.txt");
    std::fs::write(&empty, "").unwrap();
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "ingest",
        "--input",
        empty.to_str().unwrap(),
        "--out",
        "empty.zfpz",
    ]);
    assert_ok(&out);
    assert_eq!(stdout_json(&out)["count"], 0);

    // non-monotone input → exit 2 with a line-numbered message
    let bad = p(&dir, "bad.txt");
    std::fs::write(&bad, "14.1\n21.0\n20.9\n").unwrap();
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "ingest",
        "--input",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr: {stderr}");
}

#[test]
fn density_outputs_are_deterministic() {
    let dir_a = tmp();
    let dir_b = tmp();
    for dir in [&dir_a, &dir_b] {
        let out = run(&[
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--format",
            "csv",
            "density",
            "--relations",
            "example1",
            "--resolution",
            "16",
        ]);
        assert_ok(&out);
    }
    for name in ["density.csv", "density.meta.json"] {
        let a = std::fs::read(p(&dir_a, name)).unwrap();
        let b = std::fs::read(p(&dir_b, name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
}

#[test]
fn density_pgm_and_flat_case() {
    let dir = tmp();
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "pgm",
        "density",
        "--relations",
        "example2",
        "--resolution",
        "8",
        "--diverging",
    ]);
    assert_ok(&out);
    let pgm = std::fs::read(p(&dir, "density.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n8 8\n255\n"));
    assert!(p(&dir, "density.ppm").exists());
    assert!(p(&dir, "density.meta.json").exists());

    // rank-0 system → g ≡ 0 → uniform mid-gray heatmap
    let r0 = p(&dir, "r0.json");
    std::fs::write(
        &r0,
        serde_json::to_string(&RelationSystem::empty(2)).unwrap(),
    )
    .unwrap();
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--format",
        "pgm",
        "density",
        "--relations",
        r0.to_str().unwrap(),
        "--resolution",
        "8",
        "--out",
        "flat",
    ]);
    assert_ok(&out);
    let pgm = std::fs::read(p(&dir, "flat.pgm")).unwrap();
    let header = b"P5\n8 8\n255\n";
    assert!(pgm[header.len()..].iter().all(|&v| v == 128));

    // resolution too small → exit 5
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "density",
        "--relations",
        "example1",
        "--resolution",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn dm_is_worker_invariant_byte_for_byte() {
    let dir = tmp();
    let txt = p(&dir, "zeros.txt");
    write_synthetic_zeros(&txt, 20_000);
    for (workers, name) in [("1", "a"), ("4", "b")] {
        let out = run(&[
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--format",
            "csv",
            "--workers",
            workers,
            "dm",
            "--zeros",
            txt.to_str().unwrap(),
            "--alpha",
            "0.37,0.11",
            "--resolution",
            "10",
            "--t-index",
            "20000",
            "--out",
            name,
        ]);
        assert_ok(&out);
        assert_eq!(stdout_json(&out)["mass"], 0.0);
    }
    let a = std::fs::read(p(&dir, "a.csv")).unwrap();
    let b = std::fs::read(p(&dir, "b.csv")).unwrap();
    assert_eq!(a, b, "dm grid differs across worker counts");
}

#[test]
fn landau_reports_nearest_prime_power() {
    let dir = tmp();
    let txt = p(&dir, "zeros.txt");
    write_synthetic_zeros(&txt, 2_000);
    let out = run(&[
        "landau",
        "--zeros",
        txt.to_str().unwrap(),
        "--x",
        "6.1",
        "--t-index",
        "2000",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--out",
        "landau",
    ]);
    assert_ok(&out);
    let report = stdout_json(&out);
    assert_eq!(report["n_x"], 7);
    assert_eq!(report["x"], 6.1);
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p(&dir, "landau.json")).unwrap()).unwrap();
    assert_eq!(file, report);
}

#[test]
fn compare_writes_table_and_report() {
    let dir = tmp();
    let txt = p(&dir, "zeros.txt");
    write_synthetic_zeros(&txt, 5_000);
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "compare",
        "--zeros",
        txt.to_str().unwrap(),
        "--relations",
        "example1",
        "--t-indices",
        "2000,5000",
    ]);
    assert_ok(&out);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("h_sum"), "missing table header: {text}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(p(&dir, "compare.json")).unwrap()).unwrap();
    assert_eq!(report["rows"].as_array().unwrap().len(), 2);
    assert_eq!(report["rows"][0]["n_obs"], 2000);
}

#[test]
fn cf_golden_ratio_quotients() {
    let out = run(&[
        "cf",
        "--alpha",
        "1.61803398874989484820458683436563811772,1.0",
        "--terms",
        "12",
    ]);
    assert_ok(&out);
    let doc = stdout_json(&out);
    let quotients: Vec<String> = doc["cf"]["quotients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    assert_eq!(quotients, vec!["1"; 12]);
}

#[test]
fn scan_finds_exact_rational_relation() {
    let dir = tmp();
    // α = (log2/2π, log2/4π): m = (1, −2) kills it exactly
    let alpha_file = p(&dir, "alpha.json");
    std::fs::write(
        &alpha_file,
        r#"{"exact": [[{"num": 1, "den": 1, "p": 2}], [{"num": 1, "den": 2, "p": 2}]]}"#,
    )
    .unwrap();
    let out = run(&["scan", "--alpha-file", alpha_file.to_str().unwrap(), "--j", "5"]);
    assert_ok(&out);
    let doc = stdout_json(&out);
    assert_eq!(doc["condition15"]["holds"], false);
    let witness = doc["condition15"]["zero_witness"].as_array().unwrap();
    let m: Vec<i64> = witness.iter().map(|v| v.as_i64().unwrap()).collect();
    // any nonzero multiple of (1, −2) annihilates (log2/2π, log2/4π)
    assert!(m != [0, 0] && 2 * m[0] + m[1] == 0, "witness {m:?}");
}

#[test]
fn detect_recovers_example2() {
    let dir = tmp();
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "detect",
        "--relations",
        "example2",
        "--tol",
        "1e-30",
    ]);
    assert_ok(&out);
    assert_eq!(stdout_json(&out)["rank"], 2);
    let system: RelationSystem =
        serde_json::from_str(&std::fs::read_to_string(p(&dir, "relations.json")).unwrap())
            .unwrap();
    assert_eq!(system, example2());
}

#[test]
fn config_file_layers_under_flags() {
    let dir = tmp();
    let cfg = p(&dir, "cfg.json");
    std::fs::write(&cfg, r#"{"version": 1, "resolution": 12, "format": "csv"}"#).unwrap();
    // config supplies resolution + format
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "density",
        "--relations",
        "example1",
    ]);
    assert_ok(&out);
    assert_eq!(stdout_json(&out)["r"], 12);
    assert!(p(&dir, "density.csv").exists());
    // explicit flag overrides the config file
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--config",
        cfg.to_str().unwrap(),
        "density",
        "--relations",
        "example1",
        "--resolution",
        "8",
        "--out",
        "density8",
    ]);
    assert_ok(&out);
    assert_eq!(stdout_json(&out)["r"], 8);
    // unsupported version → exit 10
    std::fs::write(&cfg, r#"{"version": 99}"#).unwrap();
    let out = run(&[
        "--config",
        cfg.to_str().unwrap(),
        "density",
        "--relations",
        "example1",
    ]);
    assert_eq!(out.status.code(), Some(10));
}

#[test]
fn alpha_source_is_mandatory_and_exclusive() {
    let dir = tmp();
    let txt = p(&dir, "zeros.txt");
    write_synthetic_zeros(&txt, 100);
    // no α source → config error (exit 10)
    let out = run(&[
        "--out-dir",
        dir.path().to_str().unwrap(),
        "dm",
        "--zeros",
        txt.to_str().unwrap(),
        "--t-index",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(10));
    // two α sources → clap usage error (exit 2)
    let out = run(&[
        "dm",
        "--zeros",
        txt.to_str().unwrap(),
        "--alpha",
        "0.3,0.1",
        "--relations",
        "example1",
        "--t-index",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
