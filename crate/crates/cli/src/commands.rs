use std::fmt::Write as _;
use std::fs;

use looplab::lab::coupling::coupling_check;
use looplab::lab::exact::{bias_identity_check, kemperman_check, kemperman_forest_check};
use looplab::lab::suites::{params, run_suite, suite_passes, to_jsonl, Scale, SuiteConfig};
use looplab::looptree::{LoopGraph, LoopKind};
use looplab::sampling::{at_least_n_sampler, sample_bgw_at_least_n, sample_bgw_capped, sample_bgw_exact_n, sample_trunk_star};
use looplab::walk::{sample_conditioned_walk, sample_free_walk, zeta_tail_dp, ConditionedSampler, WalkLaw};
use looplab::{OffspringLaw, PlaneTree, RandomSource};

use crate::config::{ExperimentConfig, Outputs, RecordSink};

pub type Outcome = Result<bool, String>;

fn err(e: looplab::Error) -> String {
    e.to_string()
}

fn build_law(cfg: &ExperimentConfig) -> Result<OffspringLaw, String> {
    cfg.law()?.build().map_err(err)
}

/// Solved constants of the law, echoed next to the outputs.
pub fn law_metadata(cfg: &ExperimentConfig) -> serde_json::Value {
    match cfg.law.as_ref().map(|l| l.build()) {
        Some(Ok(law)) => serde_json::json!({
            "name": law.name(),
            "mean": law.mean(),
            "variance": if law.variance().is_finite() { serde_json::json!(law.variance()) } else { serde_json::json!("inf") },
            "truncation_error": law.truncation_error(),
            "constants": law.constants().iter().cloned().collect::<std::collections::BTreeMap<_, _>>(),
        }),
        _ => serde_json::Value::Null,
    }
}

/// Parameters resolved outside the config that still determine the output.
pub fn extra_inputs(cfg: &ExperimentConfig) -> Result<serde_json::Value, String> {
    if cfg.experiment == "verify" {
        let (suite, scale) = suite_of(cfg)?;
        return params(&suite, scale).map_err(err);
    }
    Ok(serde_json::Value::Null)
}

fn suite_of(cfg: &ExperimentConfig) -> Result<(String, Scale), String> {
    let suite = cfg.suite.clone().ok_or("no suite given (--suite)")?;
    let scale = match cfg.scale.as_deref().unwrap_or("full") {
        "full" => Scale::Full,
        "quick" => Scale::Quick,
        s => return Err(format!("unknown scale {s:?} (full or quick)")),
    };
    Ok((suite, scale))
}

fn finish(out: &Outputs, sink: RecordSink) -> Outcome {
    let pass = suite_passes(&sink.records);
    let path = out.write(".jsonl", &to_jsonl(&sink.records))?;
    println!("{}", path.display());
    Ok(pass)
}

fn load_tree(cfg: &ExperimentConfig, src: &RandomSource) -> Result<(PlaneTree, String), String> {
    match &cfg.tree {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            Ok((PlaneTree::from_dsv1(&text).map_err(err)?, "file".to_string()))
        }
        None => {
            let law = build_law(cfg)?;
            let t = sample_bgw_exact_n(&law, cfg.n()?, &mut src.rng()).map_err(err)?;
            Ok((t, law.name().to_string()))
        }
    }
}

pub fn sample_tree(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let law = build_law(cfg)?;
    let src = RandomSource::new(cfg.seed).named("sample-tree");
    let count = cfg.replicates.unwrap_or(1);
    let cap = cfg.max_vertices.unwrap_or(10_000_000);
    let mode = cfg.mode.as_deref().unwrap_or("exact");
    let sampler = match mode {
        "at-least" => Some(at_least_n_sampler(&law, cfg.n()?)),
        "exact" | "free" => None,
        m => return Err(format!("unknown mode {m:?} (exact, at-least or free)")),
    };
    let mut sink = RecordSink::new(cfg, &out.hash);
    for i in 0..count {
        let mut rng = src.child(i).rng();
        let t = match (mode, &sampler) {
            ("exact", _) => sample_bgw_exact_n(&law, cfg.n()?, &mut rng),
            (_, Some(s)) => sample_bgw_at_least_n(s, &law, 1_000_000_000, &mut rng),
            _ => sample_bgw_capped(&law, cap, &mut rng),
        }
        .map_err(err)?;
        let suffix = if count == 1 { ".dsv1".to_string() } else { format!(".{i:04}.dsv1") };
        println!("{}", out.write(&suffix, &t.to_dsv1())?.display());
        let n = t.len() as u64;
        sink.info(law.name(), n, "vertices", n as f64);
        sink.info(law.name(), n, "height", t.max_depth() as f64);
        sink.info(law.name(), n, "leaves", t.leaf_count() as f64);
        sink.info(law.name(), n, "max_degree", *t.degrees().iter().max().unwrap() as f64);
    }
    finish(out, sink)
}

pub fn looptree(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let src = RandomSource::new(cfg.seed).named("loop");
    let (t, name) = load_tree(cfg, &src)?;
    let kind = match cfg.kind.as_deref().unwrap_or("loop") {
        "loop" => LoopKind::Loop,
        "loop-bar" => LoopKind::LoopBar,
        k => return Err(format!("unknown looptree kind {k:?} (loop or loop-bar)")),
    };
    let g = LoopGraph::build(&t, kind);
    println!("{}", out.write(".edges.csv", &g.to_edge_csv())?.display());
    let h = g.profile_hcirc();
    let w = t.lukasiewicz();
    let mut csv = String::from("vertex,depth,lukasiewicz,hcirc,class\n");
    for v in 0..t.len() {
        writeln!(csv, "{v},{},{},{},{}", t.depth(v), w[v], h[v], g.class_of[v]).unwrap();
    }
    println!("{}", out.write(".profile.csv", &csv)?.display());
    let n = t.len() as u64;
    let mut sink = RecordSink::new(cfg, &out.hash);
    sink.info(&name, n, "loop_vertices", g.vertex_count() as f64);
    sink.info(&name, n, "loop_edges", g.edge_count() as f64);
    sink.info(&name, n, "largest_cycle", g.largest_cycle().0 as f64);
    sink.info(&name, n, "max_hcirc", *h.iter().max().unwrap() as f64);
    sink.info(&name, n, "tree_height", t.max_depth() as f64);
    finish(out, sink)
}

pub fn trunk(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let mut sink = RecordSink::new(cfg, &out.hash);
    let mut lines = String::new();
    let push = |sk: &looplab::TrunkSkeleton, lines: &mut String| {
        let w: u64 = sk.child_counts.iter().sum();
        let doc = serde_json::json!({
            "h": sk.h(), "child_counts": sk.child_counts, "spine_pos": sk.spine_pos,
            "leaf_count": sk.leaf_count(), "w_star": w,
        });
        lines.push_str(&doc.to_string());
        lines.push('\n');
        u64::from(sk.leaf_count() as i64 != w as i64 - sk.h() as i64 + 1)
    };
    if let Some(v) = cfg.vertex {
        let (t, name) = load_tree(cfg, &RandomSource::new(cfg.seed).named("trunk"))?;
        if v as usize >= t.len() {
            return Err(format!("vertex {v} out of range (tree has {} vertices)", t.len()));
        }
        let sk = t.trunk_of(v as usize).map_err(err)?;
        push(&sk, &mut lines);
        sink.info(&name, t.len() as u64, "trunk_height", sk.h() as f64);
        sink.info(&name, t.len() as u64, "trunk_leaves", sk.leaf_count() as f64);
    } else {
        let law = build_law(cfg)?;
        let sb = law.size_biased().map_err(err)?;
        let h = cfg.h.ok_or("no trunk height given (--h)")? as usize;
        let src = RandomSource::new(cfg.seed).named("trunk");
        let count = cfg.replicates.unwrap_or(1);
        let mut bad = 0;
        let mut total = 0.0;
        for i in 0..count {
            let sk = sample_trunk_star(&sb, h, &mut src.child(i).rng());
            total += sk.leaf_count() as f64;
            bad += push(&sk, &mut lines);
        }
        sink.info(law.name(), h as u64, "mean_leaf_count", total / count.max(1) as f64);
        sink.le(law.name(), h as u64, "leaf_identity_failures", bad as f64, 0.0);
    }
    println!("{}", out.write(".trunks.jsonl", &lines)?.display());
    finish(out, sink)
}

pub fn walk(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let law = build_law(cfg)?;
    let wl = WalkLaw::with_shift(law.clone(), cfg.shift.unwrap_or(1)).map_err(err)?;
    let n = cfg.n.unwrap_or(0);
    let horizon = cfg.horizon.unwrap_or(n.max(1) * 2) as usize;
    let count = cfg.replicates.unwrap_or(1);
    let src = RandomSource::new(cfg.seed).named("walk");
    let sampler = (n > 1).then(|| ConditionedSampler::new(&wl, n as usize - 1));
    let mut csv = String::from("path,step,w\n");
    let mut sink = RecordSink::new(cfg, &out.hash);
    let mut passages = 0u64;
    for i in 0..count {
        let mut rng = src.child(i).rng();
        let p = match &sampler {
            Some(s) => sample_conditioned_walk(s, horizon, 1_000_000_000, &mut rng).map_err(err)?,
            None => sample_free_walk(&wl, horizon, &mut rng),
        };
        for (j, w) in p.values.iter().enumerate() {
            writeln!(csv, "{i},{j},{w}").unwrap();
        }
        if let Some(z) = p.zeta {
            passages += 1;
            if n > 1 && (z as u64) < n {
                return Err(format!("conditioned path {i} went negative at {z} < {n}"));
            }
        }
    }
    println!("{}", out.write(".csv", &csv)?.display());
    sink.info(law.name(), n, "paths", count as f64);
    sink.info(law.name(), n, "passage_within_horizon_frequency", passages as f64 / count.max(1) as f64);
    sink.info(law.name(), n, "gamma", wl.gamma());
    finish(out, sink)
}

pub fn couple(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let law = build_law(cfg)?;
    let wl = WalkLaw::tree(law.clone());
    let ns = if cfg.ladder.is_empty() { vec![cfg.n()?] } else { cfg.ladder.clone() };
    let window = cfg.window.unwrap_or(10) as usize;
    let samples = cfg.replicates.unwrap_or(100_000) as usize;
    let table = zeta_tail_dp(&wl, 2000, 8192).map_err(err)?;
    println!("{}", out.write(".tail.csv", &table.to_csv())?.display());
    let src = RandomSource::new(cfg.seed).named("couple");
    let mut sink = RecordSink::new(cfg, &out.hash);
    let mut tvs = Vec::new();
    for &n in &ns {
        let c = coupling_check(&wl, n, window, 0, samples, samples / 10, &table, &src.child(n)).map_err(err)?;
        sink.info(law.name(), n, "windowed_tv", c.tv);
        sink.info(law.name(), n, "good_event_frequency", c.gn_freq);
        tvs.push(c.tv);
    }
    if tvs.len() > 1 {
        let worst = tvs.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        sink.push(law.name(), *ns.last().unwrap(), "windowed_tv_max_increment", worst, 0.0, worst < 0.0, true);
    }
    sink.le(law.name(), *ns.last().unwrap(), "windowed_tv_final", *tvs.last().unwrap(), cfg.threshold("tv", 0.1));
    finish(out, sink)
}

pub fn verify(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let (suite, scale) = suite_of(cfg)?;
    let mut records = run_suite(&SuiteConfig::new(&suite, cfg.seed, scale)).map_err(err)?;
    for r in &mut records {
        r.config_hash = out.hash.clone();
    }
    let mut sink = RecordSink::new(cfg, &out.hash);
    sink.records = records;
    finish(out, sink)
}

pub fn oracle(cfg: &ExperimentConfig, out: &Outputs) -> Outcome {
    let law = build_law(cfg)?;
    let nmax = cfg.n.unwrap_or(9).min(10);
    let ktol = cfg.threshold("kemperman", 1e-12);
    let btol = cfg.threshold("bias", 1e-10);
    let mut sink = RecordSink::new(cfg, &out.hash);
    let mut csv = String::from("n,p_size_enumeration,p_size_convolution,bias_max_abs_diff\n");
    for n in 1..=nmax {
        let (a, b) = kemperman_check(&law, n).map_err(err)?;
        sink.le(law.name(), n, "kemperman_abs_diff", (a - b).abs(), ktol);
        let bias = if n <= 9 && law.feasible_size(n) {
            let r = bias_identity_check(&law, n).map_err(err)?;
            sink.le(law.name(), n, "bias_identity_max_abs_diff", r.max_discrepancy, btol);
            r.max_discrepancy
        } else {
            f64::NAN
        };
        writeln!(csv, "{n},{a:e},{b:e},{bias:e}").unwrap();
        for k in 2..=3.min(n) {
            if n <= 8 {
                let (a, b) = kemperman_forest_check(&law, k, n).map_err(err)?;
                sink.le(law.name(), n, &format!("forest_kemperman_k{k}_abs_diff"), (a - b).abs(), ktol);
            }
        }
    }
    println!("{}", out.write(".csv", &csv)?.display());
    finish(out, sink)
}
