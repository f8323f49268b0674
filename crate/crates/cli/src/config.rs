use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use looplab::lab::suites::Record;
use looplab::LawSpec;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const OUT_DIR_ENV: &str = "LOOPLAB_OUT_DIR";

/// Everything that determines an output. Flags on the command line override the
/// matching fields of a `--config` document.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub law: Option<LawSpec>,
    pub n: Option<u64>,
    pub ladder: Vec<u64>,
    pub replicates: Option<u64>,
    pub thresholds: BTreeMap<String, f64>,
    pub suite: Option<String>,
    pub scale: Option<String>,
    pub mode: Option<String>,
    pub kind: Option<String>,
    pub h: Option<u64>,
    pub horizon: Option<u64>,
    pub window: Option<u64>,
    pub shift: Option<u64>,
    pub max_vertices: Option<u64>,
    pub tree: Option<PathBuf>,
    pub vertex: Option<u64>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// sha256 over the config and any extra resolved inputs. The input tree enters
    /// by content, not by path.
    pub fn hash(&self, extra: &serde_json::Value) -> Result<String, String> {
        let mut me = self.clone();
        let tree = match me.tree.take() {
            Some(p) => {
                let bytes = fs::read(&p).map_err(|e| format!("{}: {e}", p.display()))?;
                Some(hex(&Sha256::digest(&bytes)))
            }
            None => None,
        };
        let doc = serde_json::json!({ "config": me, "tree_sha256": tree, "extra": extra, "version": looplab::VERSION });
        Ok(hex(&Sha256::digest(doc.to_string().as_bytes())))
    }

    pub fn law(&self) -> Result<LawSpec, String> {
        self.law.clone().ok_or_else(|| "no law given (--law or \"law\" in the config)".to_string())
    }

    pub fn n(&self) -> Result<u64, String> {
        self.n.ok_or_else(|| "no size given (--n or \"n\" in the config)".to_string())
    }

    pub fn threshold(&self, key: &str, default: f64) -> f64 {
        self.thresholds.get(key).copied().unwrap_or(default)
    }
}

fn hex(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}

/// Output location for one run: `<dir>/<experiment>-<hash prefix>.*`.
pub struct Outputs {
    pub dir: PathBuf,
    pub stem: String,
    pub hash: String,
}

impl Outputs {
    pub fn new(out: Option<PathBuf>, experiment: &str, hash: String) -> Self {
        let dir = out
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("looplab-out"));
        Outputs { dir, stem: format!("{experiment}-{}", &hash[..16]), hash }
    }

    pub fn path(&self, suffix: &str) -> PathBuf {
        self.dir.join(format!("{}{suffix}", self.stem))
    }

    /// Write through a temporary file so that an existing output is always complete.
    pub fn write(&self, suffix: &str, contents: &str) -> Result<PathBuf, String> {
        fs::create_dir_all(&self.dir).map_err(|e| format!("{}: {e}", self.dir.display()))?;
        let path = self.path(suffix);
        let tmp = self.dir.join(format!(".{}{suffix}.tmp", self.stem));
        fs::write(&tmp, contents).map_err(|e| format!("{}: {e}", tmp.display()))?;
        fs::rename(&tmp, &path).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(path)
    }
}

/// Builder for the records of one run.
pub struct RecordSink<'a> {
    cfg: &'a ExperimentConfig,
    hash: &'a str,
    pub records: Vec<Record>,
}

impl<'a> RecordSink<'a> {
    pub fn new(cfg: &'a ExperimentConfig, hash: &'a str) -> Self {
        RecordSink { cfg, hash, records: Vec::new() }
    }

    pub fn info(&mut self, law: &str, n: u64, statistic: &str, value: f64) {
        self.push(law, n, statistic, value, f64::NAN, true, false);
    }

    pub fn le(&mut self, law: &str, n: u64, statistic: &str, value: f64, threshold: f64) {
        self.push(law, n, statistic, value, threshold, value <= threshold, true);
    }

    #[allow(clippy::too_many_arguments)]
    pub fn push(&mut self, law: &str, n: u64, statistic: &str, value: f64, threshold: f64, pass: bool, gate: bool) {
        self.records.push(Record {
            experiment: self.cfg.experiment.clone(),
            law: law.to_string(),
            n,
            seed: self.cfg.seed,
            statistic: statistic.to_string(),
            value,
            threshold,
            pass,
            gate,
            config_hash: self.hash.to_string(),
            module_version: looplab::VERSION.to_string(),
        });
    }
}

/// Whether an existing records file passes: every gating record has `pass = true`.
pub fn jsonl_passes(text: &str) -> Result<bool, String> {
    let mut ok = true;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
        if v["gate"].as_bool().unwrap_or(true) && !v["pass"].as_bool().unwrap_or(false) {
            ok = false;
        }
    }
    Ok(ok)
}
