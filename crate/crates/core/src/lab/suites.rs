//! Named verification suites producing machine-readable records.

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::condensation::condensation_stats;
use super::constants::{c_bar_mu, c_mu, c_mu_oracle};
use super::coupling::{coupling_check, first_passage_check};
use super::exact::{bias_identity_check, kemperman_check, kemperman_forest_check, llt_check};
use super::height::{drift_check, height_law_check, trunk_tv_check, TrunkSummary};
use super::next_feasible;
use super::spinal::{loop_vs_scaled_tree_distortion, profile_coupling_stats, spinal_ratio_stats};
use crate::error::{Error, Result};
use crate::law::{LawSpec, OffspringLaw};
use crate::looptree::{hcirc_from_tree, LoopGraph, LoopKind};
use crate::rng::RandomSource;
use crate::sampling::{sample_bgw_exact_n, sample_trunk_star};
use crate::tree::PlaneTree;
use crate::walk::{zeta_tail_dp, WalkLaw};

pub const SUITES: [&str; 9] = [
    "exact-identities",
    "structural",
    "constants",
    "llt",
    "condensation",
    "crt",
    "coupling",
    "first-passage",
    "height",
];

/// One numeric outcome. `gate = false` marks diagnostics that do not decide the suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub experiment: String,
    pub law: String,
    pub n: u64,
    pub seed: u64,
    pub statistic: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
    pub gate: bool,
    pub config_hash: String,
    pub module_version: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Full,
    Quick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: String,
    pub seed: u64,
    pub scale: Scale,
}

impl SuiteConfig {
    pub fn new(suite: &str, seed: u64, scale: Scale) -> Self {
        SuiteConfig { suite: suite.to_string(), seed, scale }
    }

    /// sha256 of the config together with its resolved parameters.
    pub fn hash(&self) -> Result<String> {
        let doc = serde_json::json!({ "config": self, "params": params(&self.suite, self.scale)? });
        let h = Sha256::digest(doc.to_string().as_bytes());
        Ok(h.iter().map(|b| format!("{b:02x}")).collect())
    }
}

/// Resolved parameters per suite; every tunable lives here so it enters the hash.
pub fn params(suite: &str, scale: Scale) -> Result<serde_json::Value> {
    let full = scale == Scale::Full;
    let pick = |a: u64, b: u64| if full { a } else { b };
    let v = match suite {
        "exact-identities" => serde_json::json!({
            "kemperman_max_n": 10, "forest_max_k": 3, "forest_max_n": 8, "bias_max_n": 9,
            "kemperman_tol": 1e-12, "bias_tol": 1e-10, "trunk_draws": pick(100_000, 2_000), "trunk_h": 50,
        }),
        "structural" => serde_json::json!({
            "trees": pick(10_000, 100), "max_n": pick(1000, 200), "pairs_per_tree": 5,
        }),
        "constants" => serde_json::json!({ "draws": pick(10_000_000, 20_000) }),
        "llt" => serde_json::json!({ "n": 5000, "ladder": [500, 2000, 8000], "tol": 0.02 }),
        "condensation" => serde_json::json!({
            "beta": 2.5, "mean": 0.6, "n": pick(10_000, 500), "replicates": pick(2000, 100),
            "ks_tol": 0.05, "second_tol": 0.05, "gh_tol": 0.1, "max_attempts": 1_000_000_000u64,
        }),
        "crt" => serde_json::json!({
            "n": pick(100_000, 2000), "replicates": pick(1000, 20), "ladder": if full { vec![1000, 10_000, 100_000] } else { vec![100, 400, 1600] },
            "distortion_trees": pick(20, 3), "pair_budget": 4096, "quantile": 0.9,
            "ratio_tol": 0.05, "coupling_tol": 0.15,
        }),
        "coupling" => serde_json::json!({
            "beta": 2.5, "mean": 0.6, "ladder": if full { vec![50, 200, 800] } else { vec![20, 40, 80] },
            "window": 10, "cap": 0, "samples": pick(2_000_000, 5_000), "gn_samples": pick(100_000, 1000),
            "table_jmax": 2000, "table_cap": 8192, "tv_tol": 0.1, "gn_tol": 0.9,
        }),
        "first-passage" => serde_json::json!({
            "beta": 2.5, "mean": 0.6, "n": pick(2000, 200), "replicates": 500, "diagnostic_replicates": pick(4000, 500), "ks_tol": 0.05,
        }),
        "height" => serde_json::json!({
            "n": pick(100_000, 2000), "replicates": pick(2000, 200), "ks_tol": 0.05,
            "ladder": if full { vec![1000, 10_000, 100_000] } else { vec![100, 400, 1600] },
            "trunk_t": 1.0, "trunk_trees": pick(2000, 100), "bin_width": 0.5, "bin_cap": 6,
            "prefix_window": 5, "prefix_cap": 4, "drift_t": 1.0,
        }),
        _ => return Err(Error::Parse(format!("unknown suite {suite:?}"))),
    };
    Ok(v)
}

struct Ctx {
    seed: u64,
    hash: String,
    src: RandomSource,
    out: Vec<Record>,
    experiment: String,
}

impl Ctx {
    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, law: &str, n: u64, statistic: &str, value: f64, threshold: f64, pass: bool, gate: bool) {
        self.out.push(Record {
            experiment: self.experiment.clone(),
            law: law.to_string(),
            n,
            seed: self.seed,
            statistic: statistic.to_string(),
            value,
            threshold,
            pass,
            gate,
            config_hash: self.hash.clone(),
            module_version: crate::VERSION.to_string(),
        });
    }

    fn le(&mut self, law: &str, n: u64, statistic: &str, value: f64, threshold: f64) {
        self.push(law, n, statistic, value, threshold, value <= threshold, true);
    }

    fn info(&mut self, law: &str, n: u64, statistic: &str, value: f64, reference: f64) {
        self.push(law, n, statistic, value, reference, true, false);
    }

    /// Strictly decreasing sequence; the value is the largest successive difference.
    fn decreasing(&mut self, law: &str, ns: &[u64], statistic: &str, values: &[f64]) {
        let worst = values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max);
        for (&n, &v) in ns.iter().zip(values) {
            self.info(law, n, statistic, v, f64::NAN);
        }
        self.push(law, *ns.last().unwrap(), &format!("{statistic}_max_increment"), worst, 0.0, worst < 0.0, true);
    }
}

fn u(p: &serde_json::Value, k: &str) -> u64 {
    p[k].as_u64().unwrap_or_else(|| panic!("missing parameter {k}"))
}

fn f(p: &serde_json::Value, k: &str) -> f64 {
    p[k].as_f64().unwrap_or_else(|| panic!("missing parameter {k}"))
}

fn ladder(p: &serde_json::Value, k: &str) -> Vec<u64> {
    p[k].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

fn binary() -> OffspringLaw {
    LawSpec::Binary.build().unwrap()
}

fn geometric() -> OffspringLaw {
    LawSpec::Geometric { p: 0.5 }.build().unwrap()
}

/// Run a suite and return its records in a fixed order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<Record>> {
    let p = params(&cfg.suite, cfg.scale)?;
    let mut ctx = Ctx {
        seed: cfg.seed,
        hash: cfg.hash()?,
        src: RandomSource::new(cfg.seed).named(&cfg.suite),
        out: Vec::new(),
        experiment: cfg.suite.clone(),
    };
    match cfg.suite.as_str() {
        "exact-identities" => exact_identities(&mut ctx, &p)?,
        "structural" => structural(&mut ctx, &p)?,
        "constants" => constants(&mut ctx, &p)?,
        "llt" => llt(&mut ctx, &p)?,
        "condensation" => condensation(&mut ctx, &p)?,
        "crt" => crt(&mut ctx, &p)?,
        "coupling" => coupling(&mut ctx, &p)?,
        "first-passage" => first_passage(&mut ctx, &p)?,
        "height" => height(&mut ctx, &p)?,
        _ => unreachable!(),
    }
    Ok(ctx.out)
}

pub fn suite_passes(records: &[Record]) -> bool {
    records.iter().filter(|r| r.gate).all(|r| r.pass)
}

pub fn to_jsonl(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialise"));
        s.push('\n');
    }
    s
}

fn exact_identities(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let truncated = LawSpec::GeometricTruncated { p: 0.5, kmax: 4 }.build()?;
    for law in [truncated, binary()] {
        let name = law.name().to_string();
        let mut worst: f64 = 0.0;
        for n in 1..=u(p, "kemperman_max_n") {
            let (a, b) = kemperman_check(&law, n)?;
            worst = worst.max((a - b).abs());
        }
        ctx.le(&name, u(p, "kemperman_max_n"), "kemperman_max_abs_diff", worst, f(p, "kemperman_tol"));
        let mut worst: f64 = 0.0;
        for k in 1..=u(p, "forest_max_k") {
            for n in k..=u(p, "forest_max_n") {
                let (a, b) = kemperman_forest_check(&law, k, n)?;
                worst = worst.max((a - b).abs());
            }
        }
        ctx.le(&name, u(p, "forest_max_n"), "forest_kemperman_max_abs_diff", worst, f(p, "kemperman_tol"));
        let mut worst: f64 = 0.0;
        let mut root_err: f64 = 0.0;
        for n in 1..=u(p, "bias_max_n") {
            if !law.feasible_size(n) {
                continue;
            }
            let r = bias_identity_check(&law, n)?;
            worst = worst.max(r.max_discrepancy);
            root_err = root_err.max((r.height_mass[0] - 1.0 / n as f64).abs());
        }
        ctx.le(&name, u(p, "bias_max_n"), "bias_identity_max_abs_diff", worst, f(p, "bias_tol"));
        ctx.le(&name, u(p, "bias_max_n"), "root_height_mass_abs_diff", root_err, f(p, "bias_tol"));
    }
    let g = geometric();
    let sb = g.size_biased()?;
    let mut rng = ctx.src.named("trunk-star").rng();
    let h = u(p, "trunk_h") as usize;
    let mut bad = 0u64;
    for _ in 0..u(p, "trunk_draws") {
        let hh = rng.random_range(1..=h);
        let sk = sample_trunk_star(&sb, hh, &mut rng);
        let w: u64 = sk.child_counts.iter().sum();
        let (tree, tip) = sk.to_tree();
        if sk.leaf_count() != w - hh as u64 + 1 || tree.leaf_count() as u64 != sk.leaf_count() || tree.depth(tip) as usize != hh {
            bad += 1;
        }
    }
    ctx.le(g.name(), u(p, "trunk_draws"), "trunk_star_leaf_identity_violations", bad as f64, 0.0);
    Ok(())
}

#[derive(Default)]
struct StructuralCounts {
    ancestor: u64,
    mrca: u64,
    contour: u64,
    profile: u64,
    pairs: u64,
}

fn contour_first_visits(t: &PlaneTree) -> Vec<usize> {
    let sizes = t.subtree_sizes();
    let mut first = vec![usize::MAX; t.len()];
    let mut time = 0usize;
    // explicit stack of (vertex, next child index)
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
    first[0] = 0;
    let kids: Vec<Vec<usize>> = (0..t.len()).map(|v| t.children_with(v, &sizes)).collect();
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if *next < kids[v].len() {
            let c = kids[v][*next];
            *next += 1;
            time += 1;
            first[c] = time;
            stack.push((c, 0));
        } else {
            stack.pop();
            time += 1;
        }
    }
    first
}

fn structural_tree(t: &PlaneTree, pairs: usize, rng: &mut impl Rng, c: &mut StructuralCounts) {
    let n = t.len();
    let g = LoopGraph::build_loop(t);
    let hc = g.profile_hcirc();
    if hc != hcirc_from_tree(t, LoopKind::Loop) {
        c.profile += 1;
    }
    let w = t.lukasiewicz();
    let h = t.depths();
    let contour = t.contour();
    let first = contour_first_visits(t);
    for i in 0..n {
        let b = t.lex_to_contour_index(i);
        if b != 2 * i - h[i] as usize || first[i] != b || contour[b] != h[i] {
            c.contour += 1;
        }
        if i > 0 && t.lex_to_contour_index(i) <= t.lex_to_contour_index(i - 1) {
            c.contour += 1;
        }
    }
    for _ in 0..pairs {
        c.pairs += 1;
        let j = rng.random_range(0..n);
        let mut anc = t.ancestors(j);
        anc.push(j);
        let i = anc[rng.random_range(0..anc.len())];
        let dh = hc[j] as i64 - hc[i] as i64;
        let bound = (w[j] - w[i]) + (h[j] as i64 - h[i] as i64);
        if dh < 0 || dh > bound {
            c.ancestor += 1;
        }
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let m = t.mrca(a, b);
        let d = g.tree_dist(a, b) as i64;
        let est = hc[a] as i64 + hc[b] as i64 - 2 * hc[m] as i64;
        if (d - est).abs() > t.degree(m) as i64 {
            c.mrca += 1;
        }
    }
}

fn structural(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let laws = [geometric(), binary()];
    let mut c = StructuralCounts::default();
    let trees = u(p, "trees");
    for k in 0..trees {
        let mut rng = ctx.src.child(k).rng();
        let law = &laws[(k % 2) as usize];
        let n = next_feasible(law, rng.random_range(1..=u(p, "max_n")));
        let t = sample_bgw_exact_n(law, n, &mut rng)?;
        structural_tree(&t, u(p, "pairs_per_tree") as usize, &mut rng, &mut c);
    }
    let law = "geometric(0.5)+binary";
    ctx.info(law, trees, "pairs_checked", c.pairs as f64, f64::NAN);
    ctx.le(law, trees, "ancestor_bound_violations", c.ancestor as f64, 0.0);
    ctx.le(law, trees, "mrca_bound_violations", c.mrca as f64, 0.0);
    ctx.le(law, trees, "contour_index_violations", c.contour as f64, 0.0);
    ctx.le(law, trees, "profile_bfs_mismatches", c.profile as f64, 0.0);
    Ok(())
}

fn constants(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let draws = u(p, "draws");
    for (law, exact_c, exact_bar) in [(binary(), 1.0, Some(0.5)), (geometric(), 4.0 / 3.0, None)] {
        let name = law.name().to_string();
        let c = c_mu(&law)?;
        ctx.le(&name, 0, "c_mu_formula_abs_diff", (c - exact_c).abs(), 1e-12);
        let mut rng = ctx.src.named(&name).rng();
        let (m, se) = c_mu_oracle(&law, draws, false, &mut rng)?;
        ctx.le(&name, draws, "c_mu_oracle_abs_diff_over_3se", (m - c).abs(), 3.0 * se + 1e-12);
        let cb = c_bar_mu(&law)?;
        if let Some(e) = exact_bar {
            ctx.le(&name, 0, "c_bar_mu_formula_abs_diff", (cb - e).abs(), 1e-12);
        }
        let (m, se) = c_mu_oracle(&law, draws, true, &mut rng)?;
        ctx.le(&name, draws, "c_bar_mu_oracle_abs_diff_over_3se", (m - cb).abs(), 3.0 * se + 1e-12);
    }
    Ok(())
}

fn llt(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let g = geometric();
    let n = u(p, "n");
    let r = llt_check(&g, n)?;
    ctx.le(g.name(), n, "llt_sup", r.statistic, f(p, "tol"));
    ctx.info(g.name(), n, "b_n_phi_n_at_zero", r.at_zero, 1.0 / (4.0 * std::f64::consts::PI).sqrt());
    let ns = ladder(p, "ladder");
    let vals: Vec<f64> = ns.iter().map(|&m| llt_check(&g, m).map(|r| r.statistic)).collect::<Result<_>>()?;
    ctx.decreasing(g.name(), &ns, "llt_sup", &vals);
    Ok(())
}

fn condensation(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let law = LawSpec::HeavyTail { beta: f(p, "beta"), mean: f(p, "mean") }.build()?;
    let n = u(p, "n");
    let s = condensation_stats(&law, n, u(p, "replicates") as usize, u(p, "max_attempts"), &ctx.src)?;
    let name = law.name().to_string();
    ctx.le(&name, n, "ks_maxdeg_over_n_vs_j", s.ks_j, f(p, "ks_tol"));
    ctx.le(&name, n, "median_second_component_over_n", s.second.median(), f(p, "second_tol"));
    ctx.le(&name, n, "median_gh_circle_bound", s.gh.median(), f(p, "gh_tol"));
    ctx.info(&name, n, "mean_maxdeg_over_n", s.maxdeg.mean(), f64::NAN);
    Ok(())
}

fn crt(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let reps = u(p, "replicates") as usize;
    for law in [binary(), geometric()] {
        let name = law.name().to_string();
        let n = next_feasible(&law, u(p, "n"));
        let c = c_mu(&law)?;
        let src = ctx.src.named(&name);
        let s = spinal_ratio_stats(&law, n, reps, &src.named("spinal"))?;
        let med = s.ratios.median();
        ctx.le(&name, n, "spinal_ratio_median_rel_err", (med / c - 1.0).abs(), f(p, "ratio_tol"));
        ctx.le(&name, n, "spinal_identity_failures", s.identity_failures as f64, 0.0);
        ctx.info(&name, n, "spinal_ratio_zero_r", s.zero_r as f64, f64::NAN);
        ctx.info(&name, n, "spinal_ratio_median", med, 2.0 * c / law.variance());
        let q = f(p, "quantile");
        let cp = profile_coupling_stats(&law, n, reps, &src.named("coupling"))?;
        ctx.le(&name, n, "profile_coupling_q90", cp.quantile(q), f(p, "coupling_tol"));
        let ns = ladder(p, "ladder");
        let mut vals = Vec::new();
        let mut ns_used = Vec::new();
        for &m in &ns {
            let m = next_feasible(&law, m);
            let d = loop_vs_scaled_tree_distortion(&law, m, u(p, "distortion_trees") as usize, u(p, "pair_budget") as usize, &src.named("distortion"))?;
            vals.push(d.values.quantile(q));
            ns_used.push(m);
            ctx.info(&name, m, "loop_diameter_over_b_n", d.loop_diameter, f64::NAN);
        }
        ctx.decreasing(&name, &ns_used, "distortion_q90", &vals);
    }
    Ok(())
}

fn coupling(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let law = WalkLaw::tree(LawSpec::HeavyTail { beta: f(p, "beta"), mean: f(p, "mean") }.build()?);
    let name = law.offspring().name().to_string();
    let table = zeta_tail_dp(&law, u(p, "table_jmax") as usize, u(p, "table_cap") as usize)?;
    let ns = ladder(p, "ladder");
    let mut tvs = Vec::new();
    let mut last = None;
    for &n in &ns {
        let c = coupling_check(
            &law,
            n,
            u(p, "window") as usize,
            p["cap"].as_i64().unwrap(),
            u(p, "samples") as usize,
            u(p, "gn_samples") as usize,
            &table,
            &ctx.src.child(n),
        )?;
        ctx.info(&name, n, "good_event_frequency", c.gn_freq, f64::NAN);
        tvs.push(c.tv);
        last = Some(c);
    }
    ctx.decreasing(&name, &ns, "windowed_tv", &tvs);
    let c = last.unwrap();
    ctx.le(&name, c.n, "windowed_tv_final", c.tv, f(p, "tv_tol"));
    ctx.push(&name, c.n, "good_event_frequency_final", c.gn_freq, f(p, "gn_tol"), c.gn_freq >= f(p, "gn_tol"), true);
    Ok(())
}

fn first_passage(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    let law = WalkLaw::tree(LawSpec::HeavyTail { beta: f(p, "beta"), mean: f(p, "mean") }.build()?);
    let name = law.offspring().name().to_string();
    let n = u(p, "n");
    let r = first_passage_check(&law, n, u(p, "replicates") as usize, &ctx.src)?;
    ctx.le(&name, n, "ks_zeta_over_n_vs_j_over_gamma", r.ks, f(p, "ks_tol"));
    let d = first_passage_check(&law, n, u(p, "diagnostic_replicates") as usize, &ctx.src.named("diagnostic"))?;
    ctx.info(&name, n, "ks_zeta_over_n_vs_j_over_gamma_large_sample", d.ks, f(p, "ks_tol"));
    Ok(())
}

fn height(ctx: &mut Ctx, p: &serde_json::Value) -> Result<()> {
    for law in [geometric(), binary()] {
        let name = law.name().to_string();
        let n = next_feasible(&law, u(p, "n"));
        let r = height_law_check(&law, n, u(p, "replicates") as usize, &ctx.src.named(&name))?;
        ctx.le(&name, n, "ks_rescaled_height_vs_r", r.ks, f(p, "ks_tol"));
    }
    let g = geometric();
    let ns = ladder(p, "ladder");
    let leaf = TrunkSummary::LeafCount { width: f(p, "bin_width"), cap: u(p, "bin_cap") as i64 };
    let prefix = TrunkSummary::Prefix { window: u(p, "prefix_window") as usize, count_cap: u(p, "prefix_cap") };
    let t = f(p, "trunk_t");
    let trees = u(p, "trunk_trees") as usize;
    let mut tvs = Vec::new();
    for &n in &ns {
        let r = trunk_tv_check(&g, n, t, leaf, trees, None, &ctx.src.named("trunk").child(n))?;
        ctx.info(g.name(), n, "trunk_tv_no_vertex_trees", r.no_vertex as f64, f64::NAN);
        tvs.push(r.tv);
        let r = trunk_tv_check(&g, n, t, prefix, trees, None, &ctx.src.named("trunk").child(n))?;
        ctx.info(g.name(), n, "trunk_tv_prefix_window", r.tv, f64::NAN);
    }
    ctx.decreasing(g.name(), &ns, "trunk_tv_leaf_count", &tvs);
    let b = binary();
    for &n in &ns {
        let n = next_feasible(&b, n);
        let d = drift_check(&b, n, f(p, "drift_t"), &ctx.src.named("drift"))?;
        let t = f(p, "drift_t");
        ctx.le(b.name(), n, "drift_w_star_abs_diff", (d.w_star - 4.0 * t).abs(), 2.0 / d.b_n);
        ctx.le(b.name(), n, "drift_leaf_count_abs_diff", (d.leaves - 2.0 * t).abs(), 2.0 / d.b_n);
    }
    Ok(())
}

/// Runs the suite twice and compares the serialised records byte for byte.
pub fn determinism_check(cfg: &SuiteConfig) -> Result<bool> {
    let a = to_jsonl(&run_suite(cfg)?);
    let b = to_jsonl(&run_suite(cfg)?);
    Ok(a == b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_visits() {
        let t = PlaneTree::from_degree_sequence(&[2, 1, 0, 0]).unwrap();
        assert_eq!(contour_first_visits(&t), vec![0, 1, 2, 5]);
    }

    #[test]
    fn hash_depends_on_scale_and_seed() {
        let a = SuiteConfig::new("llt", 1, Scale::Full).hash().unwrap();
        assert_ne!(a, SuiteConfig::new("llt", 1, Scale::Quick).hash().unwrap());
        assert_ne!(a, SuiteConfig::new("llt", 2, Scale::Full).hash().unwrap());
        assert_eq!(a.len(), 64);
        assert!(SuiteConfig::new("nope", 1, Scale::Full).hash().is_err());
    }

    #[test]
    fn quick_suites_run() {
        for s in ["exact-identities", "structural", "constants", "llt"] {
            let r = run_suite(&SuiteConfig::new(s, 7, Scale::Quick)).unwrap();
            assert!(suite_passes(&r), "{s}: {r:?}");
        }
    }
}
