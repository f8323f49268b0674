use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn looplab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_looplab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("LOOPLAB_OUT_DIR")
        .output()
        .unwrap()
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.to_string_lossy().ends_with(ext))
        .collect();
    v.sort();
    v
}

fn records(dir: &Path) -> Vec<serde_json::Value> {
    files(dir, ".jsonl")
        .iter()
        .filter(|p| !p.to_string_lossy().ends_with(".trunks.jsonl"))
        .flat_map(|p| fs::read_to_string(p).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect::<Vec<_>>())
        .collect()
}

#[test]
fn exact_size_tree_file() {
    let d = tempfile::tempdir().unwrap();
    let o = looplab(&["sample-tree", "--law", "binary", "--n", "9", "--exact-size"], d.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let trees = files(d.path(), ".dsv1");
    assert_eq!(trees.len(), 1);
    let text = fs::read_to_string(&trees[0]).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("9"));
    let degs: Vec<u32> = lines.next().unwrap().split(' ').map(|x| x.parse().unwrap()).collect();
    assert_eq!(degs.len(), 9);
    assert_eq!(degs.iter().sum::<u32>(), 8);
    assert!(degs.iter().all(|&k| k == 0 || k == 2));
}

#[test]
fn identical_configs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for d in [&a, &b] {
        for args in [
            &["sample-tree", "--law", "geometric", "--n", "200", "--count", "3", "--seed", "5"][..],
            &["trunk", "--law", "geometric", "--h", "6", "--count", "20", "--seed", "5"],
            &["walk", "--law", "heavy-tail", "--n", "30", "--count", "4", "--seed", "5"],
            &["oracle", "--law", "binary", "--n", "7"],
        ] {
            assert!(looplab(args, d.path()).status.success());
        }
    }
    let fa = files(a.path(), "");
    let fb = files(b.path(), "");
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(x.file_name(), y.file_name());
        assert_eq!(fs::read(x).unwrap(), fs::read(y).unwrap(), "{}", x.display());
    }
}

#[test]
fn records_carry_hash_seed_and_version() {
    let d = tempfile::tempdir().unwrap();
    let o = looplab(&["verify", "--suite", "exact-identities", "--scale", "quick", "--seed", "3"], d.path());
    assert!(o.status.success());
    let rs = records(d.path());
    assert!(!rs.is_empty());
    let name = files(d.path(), ".jsonl")[0].file_name().unwrap().to_string_lossy().to_string();
    for r in &rs {
        let h = r["config_hash"].as_str().unwrap();
        assert_eq!(h.len(), 64);
        assert!(name.contains(&h[..16]));
        assert_eq!(r["seed"], 3);
        assert_eq!(r["module_version"], env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn rerun_is_skipped() {
    let d = tempfile::tempdir().unwrap();
    let args = ["loop", "--law", "geometric", "--n", "50"];
    assert!(looplab(&args, d.path()).status.success());
    let before = fs::metadata(&files(d.path(), ".edges.csv")[0]).unwrap().modified().unwrap();
    let o = looplab(&args, d.path());
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipping"));
    let after = fs::metadata(&files(d.path(), ".edges.csv")[0]).unwrap().modified().unwrap();
    assert_eq!(before, after);
    let mut force = args.to_vec();
    force.push("--force");
    assert!(looplab(&force, d.path()).status.success());
}

#[test]
fn config_file_and_overrides() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.json");
    fs::write(&cfg, r#"{"law": {"kind": "geometric", "p": 0.5}, "n": 12, "seed": 9}"#).unwrap();
    let out = d.path().join("out");
    let o = looplab(&["sample-tree", "--config", cfg.to_str().unwrap(), "--n", "15"], &out);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&files(&out, ".dsv1")[0]).unwrap();
    assert!(text.starts_with("15\n"));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(&files(&out, ".config.json")[0]).unwrap()).unwrap();
    assert_eq!(meta["config"]["seed"], 9);
    assert!((meta["law"]["mean"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    fs::write(&cfg, r#"{"law": "binary", "bogus": 1}"#).unwrap();
    let o = looplab(&["sample-tree", "--config", cfg.to_str().unwrap()], &out);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_threshold_exits_nonzero() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("c.json");
    fs::write(&cfg, r#"{"law": {"kind": "binary"}, "n": 5, "thresholds": {"kemperman": -1.0}}"#).unwrap();
    let o = looplab(&["oracle", "--config", cfg.to_str().unwrap()], &d.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    let o = looplab(&["oracle", "--law", "binary", "--n", "5"], &d.path().join("out"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn infeasible_size_is_an_error() {
    let d = tempfile::tempdir().unwrap();
    let o = looplab(&["sample-tree", "--law", "binary", "--n", "4", "--exact-size"], d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("feasible"));
}

#[test]
fn output_dir_from_environment() {
    let d = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_looplab"))
        .args(["trunk", "--law", "binary", "--h", "4"])
        .env("LOOPLAB_OUT_DIR", d.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    let rs = records(d.path());
    assert!(rs.iter().any(|r| r["statistic"] == "leaf_identity_failures" && r["value"] == 0.0));
}
