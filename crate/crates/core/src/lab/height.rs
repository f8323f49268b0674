//! Heights of uniform vertices and the law of the trunk below them.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::bn_values;
use super::exact::phi;
use super::stats::{ks_one_sample, tv_weighted, EmpiricalLaw};
use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::rng::RandomSource;
use crate::sampling::{sample_bgw_exact_n, sample_trunk_star};
use crate::tree::{PlaneTree, TrunkSkeleton};

/// `P(R ≤ x) = 1 − e^{−x²}`, the law with density `2x·e^{−x²}`.
pub fn r_cdf(x: f64) -> f64 {
    if x <= 0.0 { 0.0 } else { 1.0 - (-x * x).exp() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HeightCheck {
    pub heights: EmpiricalLaw,
    pub ks: f64,
}

/// KS distance between `|V|·B_n/n` for a uniform vertex `V` and `R`.
pub fn height_law_check(law: &OffspringLaw, n: u64, replicates: usize, src: &RandomSource) -> Result<HeightCheck> {
    let b = bn_values(law, &[n])?[0];
    let xs: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = src.child(i as u64).rng();
            let t = sample_bgw_exact_n(law, n, &mut rng)?;
            let v = rng.random_range(0..t.len());
            Ok(t.depth(v) as f64 * b / n as f64)
        })
        .collect::<Result<_>>()?;
    let ks = ks_one_sample(&xs, r_cdf);
    Ok(HeightCheck { heights: EmpiricalLaw::from_samples(xs), ks })
}

/// How a trunk is reduced to a histogram key.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TrunkSummary {
    /// `(x_i, u_i)` for the first `window` spine steps; counts `≥ count_cap` are lumped
    /// together with their positions.
    Prefix { window: usize, count_cap: u64 },
    /// `Λ` standardised by the mean and spread of `Λ(Trunk*_h)`, in bins of `width`
    /// standard deviations, clamped to `±cap` bins.
    LeafCount { width: f64, cap: i64 },
}

struct Keyer {
    summary: TrunkSummary,
    mean: f64,
    sd: f64,
}

impl Keyer {
    fn new(summary: TrunkSummary, sb: &OffspringLaw, h: usize) -> Self {
        let hf = h as f64;
        Keyer { summary, mean: hf * (sb.mean() - 1.0) + 1.0, sd: (hf * sb.variance()).sqrt().max(1.0) }
    }

    fn step(&self, x: u64, u: u64) -> i64 {
        let TrunkSummary::Prefix { count_cap, .. } = self.summary else { unreachable!() };
        if x >= count_cap { (count_cap * count_cap) as i64 } else { (x * count_cap + u) as i64 }
    }

    fn leaf_bin(&self, lam: u64) -> i64 {
        let TrunkSummary::LeafCount { width, cap } = self.summary else { unreachable!() };
        (((lam as f64 - self.mean) / (width * self.sd)).floor() as i64).clamp(-cap, cap)
    }

    fn key(&self, sk: &TrunkSkeleton) -> Vec<i64> {
        match self.summary {
            TrunkSummary::Prefix { window, .. } => {
                sk.child_counts.iter().zip(&sk.spine_pos).take(window).map(|(&x, &u)| self.step(x, u)).collect()
            }
            TrunkSummary::LeafCount { .. } => vec![self.leaf_bin(sk.leaf_count())],
        }
    }

    /// Exact histogram of the key under `Trunk*_h`.
    fn star_law(&self, sb: &OffspringLaw, h: usize) -> Result<Vec<(Vec<i64>, f64)>> {
        match self.summary {
            TrunkSummary::Prefix { window, count_cap } => {
                let mut steps: Vec<(i64, f64)> = Vec::new();
                for x in 1..count_cap {
                    for u in 1..=x {
                        steps.push((self.step(x, u), sb.pmf(x) / x as f64));
                    }
                }
                steps.push((self.step(count_cap, 0), sb.sf(count_cap)));
                let mut law: Vec<(Vec<i64>, f64)> = vec![(vec![], 1.0)];
                for _ in 0..window.min(h) {
                    law = law
                        .iter()
                        .flat_map(|(k, p)| {
                            steps.iter().map(move |&(s, q)| {
                                let mut k = k.clone();
                                k.push(s);
                                (k, p * q)
                            })
                        })
                        .collect();
                }
                Ok(law)
            }
            TrunkSummary::LeafCount { .. } => {
                // Λ = ΣX* − h + 1
                let p = phi(sb, h as u64)?;
                let mut bins: BTreeMap<i64, f64> = BTreeMap::new();
                for (s, &q) in p.sums().iter().enumerate() {
                    if s >= h && q > 0.0 {
                        *bins.entry(self.leaf_bin((s - h + 1) as u64)).or_default() += q;
                    }
                }
                *bins.entry(self.leaf_bin(u64::MAX / 2)).or_default() += p.outside_mass();
                Ok(bins.into_iter().map(|(k, q)| (vec![k], q)).collect())
            }
        }
    }
}

/// `Λ` of the trunk below every vertex at height `h`, from one pass over the tree.
pub fn leaf_counts_at_height(t: &PlaneTree, h: u32) -> Vec<u64> {
    let mut acc = vec![0u64; t.len()];
    let mut out = Vec::new();
    for v in 1..t.len() {
        let p = t.parent(v).unwrap();
        acc[v] = acc[p] + t.degree(p) as u64 - 1;
        if t.depth(v) == h {
            out.push(acc[v] + 1);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrunkTv {
    pub n: u64,
    pub h: usize,
    pub tv: f64,
    /// vertices at height `h` over all trees
    pub vertices: usize,
    /// trees without a vertex at height `h`
    pub no_vertex: usize,
}

/// Binned TV between `Trunk(T_n, V)` given `|V| = ⌊t·n/B_n⌋` and `Trunk*_h`.
///
/// Every vertex at the target height of every tree is used with equal weight. The
/// `Trunk*` side is the exact law when `star_draws` is `None`.
pub fn trunk_tv_check(
    law: &OffspringLaw,
    n: u64,
    t: f64,
    summary: TrunkSummary,
    trees: usize,
    star_draws: Option<usize>,
    src: &RandomSource,
) -> Result<TrunkTv> {
    let b = bn_values(law, &[n])?[0];
    let h = (t * n as f64 / b).floor() as usize;
    if h == 0 {
        return Err(Error::NoVertexAtHeight { height: 0 });
    }
    let sb = law.size_biased()?;
    let keyer = Keyer::new(summary, &sb, h);
    let per_tree: Vec<Vec<Vec<i64>>> = (0..trees)
        .into_par_iter()
        .map(|i| {
            let mut rng = src.child(i as u64).rng();
            let tree = sample_bgw_exact_n(law, n, &mut rng)?;
            Ok(match summary {
                TrunkSummary::LeafCount { .. } => {
                    leaf_counts_at_height(&tree, h as u32).into_iter().map(|l| vec![keyer.leaf_bin(l)]).collect()
                }
                TrunkSummary::Prefix { .. } => {
                    let sizes = tree.subtree_sizes();
                    (1..tree.len())
                        .filter(|&v| tree.depth(v) as usize == h)
                        .map(|v| tree.trunk_of_with(v, &sizes).map(|sk| keyer.key(&sk)))
                        .collect::<Result<_>>()?
                }
            })
        })
        .collect::<Result<_>>()?;
    let no_vertex = per_tree.iter().filter(|v| v.is_empty()).count();
    let mut counts: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
    for k in per_tree.into_iter().flatten() {
        *counts.entry(k).or_default() += 1.0;
    }
    let vertices = counts.values().sum::<f64>() as usize;
    if vertices == 0 {
        return Err(Error::NoVertexAtHeight { height: h as u64 });
    }
    let star: Vec<(Vec<i64>, f64)> = match star_draws {
        None => keyer.star_law(&sb, h)?,
        Some(nd) => {
            let mut rng = src.named("trunk-star").rng();
            let mut c: BTreeMap<Vec<i64>, f64> = BTreeMap::new();
            for _ in 0..nd {
                *c.entry(keyer.key(&sample_trunk_star(&sb, h, &mut rng))).or_default() += 1.0;
            }
            c.into_iter().collect()
        }
    };
    let tree_side: Vec<(Vec<i64>, f64)> = counts.into_iter().collect();
    Ok(TrunkTv { n, h, tv: tv_weighted(&tree_side, &star), vertices, no_vertex })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DriftCheck {
    pub h: usize,
    pub b_n: f64,
    /// `W*_h/B_n` with `W*_h = Σ x_i`
    pub w_star: f64,
    /// `Λ/B_n`
    pub leaves: f64,
}

/// One `Trunk*_h` draw at `h = ⌊t·n/B_n⌋`, rescaled by `B_n`.
pub fn drift_check(law: &OffspringLaw, n: u64, t: f64, src: &RandomSource) -> Result<DriftCheck> {
    let b = bn_values(law, &[n])?[0];
    let h = (t * n as f64 / b).floor() as usize;
    let sk = sample_trunk_star(&law.size_biased()?, h, &mut src.rng());
    let w: u64 = sk.child_counts.iter().sum();
    Ok(DriftCheck { h, b_n: b, w_star: w as f64 / b, leaves: sk.leaf_count() as f64 / b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawSpec;

    #[test]
    fn single_vertex_height() {
        let b = LawSpec::Binary.build().unwrap();
        let r = height_law_check(&b, 1, 5, &RandomSource::new(1)).unwrap();
        assert!(r.heights.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn leaf_counts_match_trunks() {
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let t = sample_bgw_exact_n(&g, 500, &mut RandomSource::new(4).rng()).unwrap();
        for h in 1..6 {
            let fast = leaf_counts_at_height(&t, h);
            let slow: Vec<u64> = (1..t.len())
                .filter(|&v| t.depth(v) == h)
                .map(|v| t.trunk_of(v).unwrap().leaf_count())
                .collect();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn binary_window_one_is_degenerate() {
        let b = LawSpec::Binary.build().unwrap();
        let s = TrunkSummary::Prefix { window: 1, count_cap: 3 };
        let r = trunk_tv_check(&b, 1001, 1.0, s, 50, None, &RandomSource::new(2)).unwrap();
        assert!(r.tv <= 0.01 + 1.0 / (r.vertices as f64).sqrt() * 2.0, "{}", r.tv);
    }

    #[test]
    fn exact_star_law_matches_draws() {
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let sb = g.size_biased().unwrap();
        for s in [TrunkSummary::Prefix { window: 2, count_cap: 4 }, TrunkSummary::LeafCount { width: 0.5, cap: 6 }] {
            let k = Keyer::new(s, &sb, 40);
            let exact = k.star_law(&sb, 40).unwrap();
            let total: f64 = exact.iter().map(|x| x.1).sum();
            assert!((total - 1.0).abs() < 1e-12);
            let mut rng = RandomSource::new(8).rng();
            let draws: Vec<(Vec<i64>, f64)> = (0..200_000).map(|_| (k.key(&sample_trunk_star(&sb, 40, &mut rng)), 1.0)).collect();
            assert!(tv_weighted(&draws, &exact) < 0.01);
        }
    }

    #[test]
    fn spine_positions_uniform() {
        // chi-square over positions given x = 3
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let sb = g.size_biased().unwrap();
        let mut rng = RandomSource::new(9).rng();
        let mut c = [0f64; 3];
        for _ in 0..20_000 {
            let sk = sample_trunk_star(&sb, 5, &mut rng);
            for (&x, &u) in sk.child_counts.iter().zip(&sk.spine_pos) {
                if x == 3 {
                    c[u as usize - 1] += 1.0;
                }
            }
        }
        let e = c.iter().sum::<f64>() / 3.0;
        let chi2: f64 = c.iter().map(|o| (o - e).powi(2) / e).sum();
        // 2 degrees of freedom, 0.999 quantile
        assert!(chi2 < 13.8, "{chi2}");
    }

    #[test]
    fn binary_drift_is_deterministic() {
        let b = LawSpec::Binary.build().unwrap();
        for n in [1001u64, 100_001] {
            let d = drift_check(&b, n, 1.0, &RandomSource::new(0)).unwrap();
            assert!((d.w_star - 4.0).abs() <= 2.0 / d.b_n);
            assert!((d.leaves - 2.0).abs() <= 2.0 / d.b_n);
        }
    }
}
