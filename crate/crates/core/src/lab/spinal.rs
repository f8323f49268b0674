//! Spinal and profile statistics of looptrees of critical conditioned trees.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constants::{bn_values, c_mu};
use super::stats::EmpiricalLaw;
use crate::error::Result;
use crate::law::OffspringLaw;
use crate::looptree::{hcirc_from_tree, LoopGraph, LoopKind};
use crate::rng::RandomSource;
use crate::sampling::sample_bgw_exact_n;
use crate::tree::PlaneTree;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpinalRatios {
    pub ratios: EmpiricalLaw,
    /// draws with `R(V) = 0`, left out of `ratios`
    pub zero_r: usize,
    /// draws where the right-branching count differs from `W_U`
    pub identity_failures: usize,
}

struct SpineDraw {
    hcirc: u32,
    w: i64,
    r: u64,
}

fn spine_draw<R: Rng + ?Sized>(law: &OffspringLaw, n: u64, rng: &mut R) -> Result<SpineDraw> {
    let t = sample_bgw_exact_n(law, n, rng)?;
    let u = rng.random_range(0..t.len());
    let h = hcirc_from_tree(&t, LoopKind::Loop);
    let w = t.lukasiewicz()[u];
    let r = t.right_branching_count(u, &t.subtree_sizes());
    Ok(SpineDraw { hcirc: h[u], w, r })
}

/// Sample of `d°(∅, V)/R(V)` for a uniform vertex `V` of a size-`n` tree.
pub fn spinal_ratio_stats(law: &OffspringLaw, n: u64, replicates: usize, src: &RandomSource) -> Result<SpinalRatios> {
    let draws: Vec<SpineDraw> = (0..replicates)
        .into_par_iter()
        .map(|i| spine_draw(law, n, &mut src.child(i as u64).rng()))
        .collect::<Result<_>>()?;
    let mut ratios = Vec::new();
    let (mut zero_r, mut identity_failures) = (0, 0);
    for d in &draws {
        if d.r as i64 != d.w {
            identity_failures += 1;
        }
        if d.r == 0 {
            zero_r += 1;
        } else {
            ratios.push(d.hcirc as f64 / d.r as f64);
        }
    }
    Ok(SpinalRatios { ratios: EmpiricalLaw::from_samples(ratios), zero_r, identity_failures })
}

/// `|H°_u − c·W_u|/B` for one vertex.
pub fn profile_coupling_on(t: &PlaneTree, u: usize, c: f64, b_n: f64) -> f64 {
    let h = hcirc_from_tree(t, LoopKind::Loop)[u] as f64;
    let w = t.lukasiewicz()[u] as f64;
    (h - c * w).abs() / b_n
}

/// `|H°_U − c_μ·W_U|/B_n` for a uniform vertex of one size-`n` tree.
pub fn profile_coupling_stat(law: &OffspringLaw, n: u64, src: &RandomSource) -> Result<f64> {
    let c = c_mu(law)?;
    let b = bn_values(law, &[n])?[0];
    let mut rng = src.rng();
    let t = sample_bgw_exact_n(law, n, &mut rng)?;
    let u = rng.random_range(0..t.len());
    Ok(profile_coupling_on(&t, u, c, b))
}

pub fn profile_coupling_stats(law: &OffspringLaw, n: u64, replicates: usize, src: &RandomSource) -> Result<EmpiricalLaw> {
    let xs: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|i| profile_coupling_stat(law, n, &src.child(i as u64)))
        .collect::<Result<_>>()?;
    Ok(EmpiricalLaw::from_samples(xs))
}

/// Tree distances from `u` to every vertex.
pub fn tree_distances_from(t: &PlaneTree, u: usize) -> Vec<u32> {
    let depth = t.depths();
    let mut on_path = vec![false; t.len()];
    let mut x = u;
    on_path[x] = true;
    while let Some(p) = t.parent(x) {
        on_path[p] = true;
        x = p;
    }
    let mut d = vec![0u32; t.len()];
    for v in 0..t.len() {
        d[v] = if on_path[v] {
            depth[u] - depth[v]
        } else {
            d[t.parent(v).unwrap()] + 1
        };
    }
    d
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairDistance {
    pub u: u32,
    pub v: u32,
    pub loop_dist: u32,
    pub tree_dist: u32,
}

/// Pairs `(u, v)` with both distances: `sources` BFS roots, `per_source` targets each.
pub fn sample_pair_distances<R: Rng + ?Sized>(
    t: &PlaneTree,
    g: &LoopGraph,
    sources: usize,
    per_source: usize,
    rng: &mut R,
) -> Vec<PairDistance> {
    let n = t.len();
    let src: Vec<usize> = (0..sources).map(|_| rng.random_range(0..n)).collect();
    let targets: Vec<Vec<usize>> = src.iter().map(|_| (0..per_source).map(|_| rng.random_range(0..n)).collect()).collect();
    src.par_iter()
        .zip(targets.par_iter())
        .flat_map_iter(|(&u, ts)| {
            let dl = g.bfs(g.class_of[u] as usize);
            let dt = tree_distances_from(t, u);
            ts.iter()
                .map(|&v| PairDistance {
                    u: u as u32,
                    v: v as u32,
                    loop_dist: dl[g.class_of[v] as usize],
                    tree_dist: dt[v],
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Distortion {
    pub values: EmpiricalLaw,
    /// largest sampled `d°/B_n`, a lower estimate of the rescaled diameter
    pub loop_diameter: f64,
}

/// `|d°(u,v)/B_n − c_μ·(B_n/n)·d(u,v)|` over sampled pairs of `replicates` trees.
pub fn loop_vs_scaled_tree_distortion(
    law: &OffspringLaw,
    n: u64,
    replicates: usize,
    pair_budget: usize,
    src: &RandomSource,
) -> Result<Distortion> {
    let c = c_mu(law)?;
    let b = bn_values(law, &[n])?[0];
    let sources = 64.min(pair_budget.max(1));
    let per = pair_budget.div_ceil(sources);
    let mut values = Vec::new();
    let mut diam: f64 = 0.0;
    for r in 0..replicates {
        let mut rng = src.child(r as u64).rng();
        let t = sample_bgw_exact_n(law, n, &mut rng)?;
        let g = LoopGraph::build_loop(&t);
        for p in sample_pair_distances(&t, &g, sources, per, &mut rng) {
            let dl = p.loop_dist as f64 / b;
            diam = diam.max(dl);
            values.push((dl - c * b / n as f64 * p.tree_dist as f64).abs());
        }
    }
    Ok(Distortion { values: EmpiricalLaw::from_samples(values), loop_diameter: diam })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawSpec;
    use std::collections::VecDeque;

    fn apsp(adj: &[Vec<usize>]) -> Vec<Vec<u32>> {
        (0..adj.len())
            .map(|s| {
                let mut d = vec![u32::MAX; adj.len()];
                d[s] = 0;
                let mut q = VecDeque::from([s]);
                while let Some(x) = q.pop_front() {
                    for &y in &adj[x] {
                        if d[y] == u32::MAX {
                            d[y] = d[x] + 1;
                            q.push_back(y);
                        }
                    }
                }
                d
            })
            .collect()
    }

    #[test]
    fn pair_distances_match_apsp() {
        let law = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let mut rng = RandomSource::new(11).rng();
        let t = sample_bgw_exact_n(&law, 300, &mut rng).unwrap();
        let g = LoopGraph::build_loop(&t);
        let mut tree_adj = vec![vec![]; t.len()];
        let mut loop_adj = vec![vec![]; g.vertex_count()];
        for v in 1..t.len() {
            let p = t.parent(v).unwrap();
            tree_adj[v].push(p);
            tree_adj[p].push(v);
        }
        for &(a, b, _) in &g.edges {
            if a != b {
                loop_adj[a as usize].push(b as usize);
                loop_adj[b as usize].push(a as usize);
            }
        }
        let (dt, dl) = (apsp(&tree_adj), apsp(&loop_adj));
        let pairs = sample_pair_distances(&t, &g, 16, 20, &mut rng);
        assert_eq!(pairs.len(), 320);
        for p in pairs {
            let (u, v) = (p.u as usize, p.v as usize);
            assert_eq!(p.tree_dist, dt[u][v]);
            assert_eq!(p.loop_dist, dl[g.class_of[u] as usize][g.class_of[v] as usize]);
        }
    }

    #[test]
    fn single_vertex_coupling() {
        assert_eq!(profile_coupling_on(&PlaneTree::single(), 0, 1.0, 1.0), 0.0);
    }

    #[test]
    fn spinal_identity_holds() {
        let law = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let s = spinal_ratio_stats(&law, 2000, 40, &RandomSource::new(3)).unwrap();
        assert_eq!(s.identity_failures, 0);
        assert_eq!(s.ratios.len() + s.zero_r, 40);
    }
}
