// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn divrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divrank"))
        .args(args)
        .output()
        .expect("spawn divrank")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn field(out: &str, key: &str) -> String {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .to_string()
}

fn dir_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn stats_link_count() {
    let o = divrank(&["--n", "1000", "stats"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(field(&s, "links"), "6005");
    assert_eq!(field(&s, "l"), "9");
    assert_eq!(field(&s, "dangling"), "169");
}

#[test]
fn stats_single_node() {
    let o = divrank(&["--n", "1", "stats", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["links"], 0);
    assert_eq!(v["dangling"], 1);
}

#[test]
fn link_ratio_between_variants() {
    for (n, want) in [("1000", 1184.0), ("100000", 1102.0)] {
        let o = divrank(&["--n", n, "stats", "--compare-variants", "--format", "json"]);
        assert!(o.status.success());
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let r = v["r_ms"].as_f64().unwrap();
        let links = v["links"].as_u64().unwrap();
        let simp = v["links_simplified"].as_u64().unwrap();
        assert!((r - links as f64 / simp as f64).abs() < 1e-15);
        // Reference values are truncated, not rounded, to three decimals.
        assert_eq!((r * 1000.0).floor(), want, "N = {n}: {r}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(divrank(&["--n", "0", "stats"]).status.code(), Some(1));
    assert_eq!(divrank(&["--alpha", "1.5", "stats"]).status.code(), Some(1));
    assert_eq!(divrank(&["--alpha", "0.85", "pagerank"]).status.code(), Some(1));
    assert_eq!(divrank(&["nonsense"]).status.code(), Some(1));
    assert_eq!(divrank(&["--help"]).status.code(), Some(0));
    assert_eq!(
        divrank(&["--n", "100000000", "--mem-budget-mb", "1", "pagerank"]).status.code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.bin");
    assert_eq!(divrank(&["analyze", dir_str(&missing)]).status.code(), Some(3));
    let power = divrank(&[
        "--n", "1000", "--method", "power", "--max-iter", "2", "--out", dir_str(dir.path()),
        "pagerank",
    ]);
    assert_eq!(power.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [a.path(), b.path()] {
        for args in [
            vec!["pagerank", "--top", "0"],
            vec!["spectrum", "--na", "20"],
            vec!["arnoldi", "--na", "20", "--start", "random", "--seed", "7"],
        ] {
            let mut full = vec!["--n", "3000", "--out", dir_str(d)];
            full.extend(args);
            assert!(divrank(&full).status.success());
        }
    }
    let mut names: Vec<_> = std::fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    names.sort();
    assert!(names.len() >= 7, "{names:?}");
    for name in names {
        let x = std::fs::read(a.path().join(&name)).unwrap();
        let y = std::fs::read(b.path().join(&name)).unwrap();
        assert!(x == y, "{name:?} differs between runs");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for (d, t) in [(a.path(), "1"), (b.path(), "4")] {
        let o = divrank(&["--n", "20000", "--threads", t, "--out", dir_str(d), "pagerank"]);
        assert!(o.status.success());
    }
    let f = "pagerank_20000_mult.bin";
    assert_eq!(
        std::fs::read(a.path().join(f)).unwrap(),
        std::fs::read(b.path().join(f)).unwrap()
    );
}

#[test]
fn snapshots_feed_analyze() {
    let d = tempfile::tempdir().unwrap();
    for n in ["1000", "4000"] {
        assert!(divrank(&["--n", n, "--out", dir_str(d.path()), "pagerank"]).status.success());
    }
    let s1 = d.path().join("pagerank_1000_mult.bin");
    let s2 = d.path().join("pagerank_4000_mult.bin");
    let o = divrank(&["--out", dir_str(d.path()), "analyze", dir_str(&s2), dir_str(&s1)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.path().join("fits_4000_mult.json")).unwrap()).unwrap();
    assert_eq!(report["sizes"][0]["n"], 1000);
    assert_eq!(report["sizes"][0]["links"], 6005);
    assert_eq!(report["sizes"][0]["k_d"], 27);
    assert!(d.path().join("stability_1000_4000_mult.csv").exists());
    assert!(d.path().join("branch_4000_mult.csv").exists());

    // Mixed variants are refused.
    assert!(divrank(&["--n", "500", "--variant", "simplified", "--out", dir_str(d.path()), "pagerank"])
        .status
        .success());
    let s3 = d.path().join("pagerank_500_simplified.bin");
    let o = divrank(&["--out", dir_str(d.path()), "analyze", dir_str(&s1), dir_str(&s3)]);
    assert_eq!(o.status.code(), Some(1));

    // A truncated snapshot is an I/O error.
    let bytes = std::fs::read(&s1).unwrap();
    let bad = d.path().join("bad.bin");
    std::fs::write(&bad, &bytes[..bytes.len() / 2]).unwrap();
    assert_eq!(divrank(&["analyze", dir_str(&bad)]).status.code(), Some(3));
}

#[test]
fn rank_table_matches_snapshot_order() {
    let d = tempfile::tempdir().unwrap();
    assert!(divrank(&["--n", "1000", "--out", dir_str(d.path()), "pagerank", "--top", "13"])
        .status
        .success());
    let csv = std::fs::read_to_string(d.path().join("rank_1000_mult.csv")).unwrap();
    let ns: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(ns, ["2", "3", "5", "7", "4", "11", "13", "6", "17", "19", "9", "23", "8"]);
}

#[test]
fn cache_hit_and_rebuild_on_corruption() {
    let d = tempfile::tempdir().unwrap();
    let cache = d.path().join("cache");
    let args = ["--n", "5000", "--cache-dir", dir_str(&cache), "stats"];
    let first = divrank(&args);
    assert!(String::from_utf8_lossy(&first.stderr).contains("cache stored"));
    let second = divrank(&args);
    assert!(String::from_utf8_lossy(&second.stderr).contains("cache hit"));
    assert_eq!(first.stdout, second.stdout);

    let bin = cache.join("table_5000_mult.bin");
    let mut bytes = std::fs::read(&bin).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0xff;
    std::fs::write(&bin, &bytes).unwrap();
    let third = divrank(&args);
    assert!(String::from_utf8_lossy(&third.stderr).contains("cache stored"));
    assert_eq!(first.stdout, third.stdout);
}

#[test]
fn json_tables() {
    let d = tempfile::tempdir().unwrap();
    let o = divrank(&["--n", "1000", "--format", "json", "--out", dir_str(d.path()), "spectrum"]);
    assert!(o.status.success());
    let rows: serde_json::Value =
        serde_json::from_slice(&std::fs::read(d.path().join("spectrum_1000_mult.json")).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 18);
    assert_eq!(rows[0]["provenance"], "roots");
    assert!((rows[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn jordan_demo_radius() {
    let d = tempfile::tempdir().unwrap();
    let o = divrank(&["--out", dir_str(d.path()), "demo-jordan", "--d", "10", "--eps", "1e-10"]);
    assert!(o.status.success());
    let s = stdout(&o);
    let lo: f64 = field(&s, "min_modulus").parse().unwrap();
    let hi: f64 = field(&s, "max_modulus").parse().unwrap();
    assert!((lo - 0.1).abs() < 1e-8 && (hi - 0.1).abs() < 1e-8);
}
