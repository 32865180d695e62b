//! CLI behavior: exit codes, file products, provenance and reruns.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sistercity"))
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

fn write_triangle(dir: &Path) -> PathBuf {
    let path = dir.join("triangle.csv");
    std::fs::write(
        &path,
        "city_a,country_a,city_b,country_b\n\
         A,X,B,X\n\
         B,X,C,Y\n\
         C,Y,A,X\n",
    )
    .unwrap();
    path
}

#[test]
fn unknown_subcommand_exits_2() {
    let status = bin().arg("frobnicate").output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_2() {
    let status = bin().args(["stats", "--bogus"]).output().unwrap();
    assert_eq!(status.status.code(), Some(2));
}

#[test]
fn missing_input_exits_1_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["stats", "--input", "/nonexistent/edges.csv", "--out"])
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("does not exist"), "stderr: {stderr}");
}

#[test]
fn stats_on_triangle_matches_hand_values() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_triangle(dir.path());
    let out_dir = dir.path().join("out");
    let out = bin()
        .args(["stats", "--format", "json"])
        .arg("--input")
        .arg(&input)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    let stats: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("stats.json")).unwrap())
            .unwrap();
    let city = &stats["city_network"];
    assert_eq!(city["n_nodes"], 3);
    assert_eq!(city["n_edges"], 3);
    assert_eq!(city["avg_clustering"], 1.0);
    assert_eq!(city["giant_component_fraction"], 1.0);
    assert_eq!(city["avg_path_length"], 1.0);
    // countries X,Y: one international link of weight 2, one X-internal edge
    let country = &stats["country_network"];
    assert_eq!(country["n_nodes"], 2);
    assert_eq!(country["n_edges"], 1);
    assert_eq!(stats["country_self_partnerships"], 1);
    assert!(out_dir.join("manifest.json").exists());
    assert!(out_dir.join("stats.txt").exists());
}

#[test]
fn ingest_wikitext_then_stats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let ingest_out = dir.path().join("ingest");
    let status = bin()
        .arg("ingest")
        .arg("--input")
        .arg(fixture("wikitext"))
        .arg("--out")
        .arg(&ingest_out)
        .status()
        .unwrap();
    assert!(status.success());
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ingest_out.join("ingest.json")).unwrap())
            .unwrap();
    // spain.wiki has 12 items, germany.wiki 7; Berlin--Madrid is reported
    // from both pages and collapses to one edge
    assert_eq!(summary["raw_pairings"], 19);
    assert_eq!(summary["edges"], 18);
    assert_eq!(summary["warnings"], 2);
    let bidir = summary["bidirectional_fraction"].as_f64().unwrap();
    assert!((bidir - 1.0 / 18.0).abs() < 1e-12);

    let stats_out = dir.path().join("stats");
    let status = bin()
        .arg("stats")
        .arg("--input")
        .arg(ingest_out.join("edges.csv"))
        .arg("--out")
        .arg(&stats_out)
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn assort_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &Path| {
        let status = bin()
            .args(["assort", "--replicas", "20", "--seed", "7"])
            .arg("--input")
            .arg(fixture("snapshot/edges.csv"))
            .arg("--attribute")
            .arg(format!("GDP={}", fixture("attributes/gdp.csv").display()))
            .arg("--out")
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    };
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&a);
    run(&b);
    for name in ["assortativity.json", "assortativity.txt", "manifest.json"] {
        let fa = std::fs::read(a.join(name)).unwrap();
        let fb = std::fs::read(b.join(name)).unwrap();
        assert_eq!(fa, fb, "{name} differs between identical runs");
    }
}

#[test]
fn manifest_checksums_match_outputs() {
    use sha2::{Digest, Sha256};
    let dir = tempfile::tempdir().unwrap();
    let input = write_triangle(dir.path());
    let out_dir = dir.path().join("out");
    assert!(bin()
        .arg("degree-dist")
        .arg("--input")
        .arg(&input)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap()
        .success());
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("manifest.json")).unwrap())
            .unwrap();
    let outputs = manifest["outputs"].as_array().unwrap();
    assert!(!outputs.is_empty());
    for entry in outputs {
        let name = entry["path"].as_str().unwrap();
        let data = std::fs::read(out_dir.join(name)).unwrap();
        let digest = format!("{:x}", Sha256::digest(&data));
        assert_eq!(entry["sha256"].as_str().unwrap(), digest, "{name}");
    }
    assert_eq!(manifest["command"], "degree-dist");
}

#[test]
fn distances_does_not_mutate_a_complete_cache() {
    let dir = tempfile::tempdir().unwrap();
    // private copy of the fixture cache
    let cache = dir.path().join("geocache.txt");
    std::fs::copy(fixture("snapshot/geocache.txt"), &cache).unwrap();
    let before = std::fs::read(&cache).unwrap();
    let status = bin()
        .arg("distances")
        .arg("--input")
        .arg(fixture("snapshot/edges.csv"))
        .arg("--geocache")
        .arg(&cache)
        .arg("--out")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(before, std::fs::read(&cache).unwrap());
}
