//! Condensation in subcritical heavy-tailed trees conditioned to be large.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::gh::circle_gh_bound;
use super::stats::{ks_one_sample, EmpiricalLaw};
use crate::error::Result;
use crate::law::OffspringLaw;
use crate::looptree::LoopGraph;
use crate::rng::RandomSource;
use crate::sampling::{at_least_n_sampler, sample_bgw_at_least_n};
use crate::tree::PlaneTree;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CondensationDraw {
    pub size: u64,
    pub max_degree: u64,
    /// largest component of the tree with the max-degree vertex removed
    pub second: u64,
    pub gh_bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CondensationStats {
    pub n: u64,
    pub maxdeg: EmpiricalLaw,
    pub second: EmpiricalLaw,
    pub gh: EmpiricalLaw,
    /// KS distance of `maxdeg/n` from `J`, `P(J ≤ x) = 1 − (γ/x)^β`
    pub ks_j: f64,
}

/// `P(J ≤ x)` for `J` with `P(J ≥ x) = (γ/x)^β`, `x ≥ γ`.
pub fn j_cdf(gamma: f64, beta: f64, x: f64) -> f64 {
    if x <= gamma { 0.0 } else { 1.0 - (gamma / x).powf(beta) }
}

pub fn condensation_draw(t: &PlaneTree, n: u64) -> CondensationDraw {
    let g = LoopGraph::build_loop(t);
    let (_, v) = g.largest_cycle();
    let sizes = t.subtree_sizes();
    let k = t.degree(v) as u64;
    let mut second = t.len() as u64 - sizes[v] as u64;
    for c in t.children_with(v, &sizes) {
        second = second.max(sizes[c] as u64);
    }
    let j = k as f64 / n as f64;
    CondensationDraw { size: t.len() as u64, max_degree: k, second, gh_bound: circle_gh_bound(t, &g, n as f64, j).gh_bound }
}

pub fn condensation_stats(
    law: &OffspringLaw,
    n: u64,
    replicates: usize,
    max_attempts: u64,
    src: &RandomSource,
) -> Result<CondensationStats> {
    let sampler = at_least_n_sampler(law, n);
    let draws: Vec<CondensationDraw> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = src.child(i as u64).rng();
            let t = sample_bgw_at_least_n(&sampler, law, max_attempts, &mut rng)?;
            Ok(condensation_draw(&t, n))
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let maxdeg: Vec<f64> = draws.iter().map(|d| d.max_degree as f64 / nf).collect();
    let gamma = 1.0 - law.mean();
    let beta = law.tail_exponent().unwrap_or(f64::INFINITY);
    let ks_j = ks_one_sample(&maxdeg, |x| j_cdf(gamma, beta, x));
    Ok(CondensationStats {
        n,
        maxdeg: EmpiricalLaw::from_samples(maxdeg),
        second: EmpiricalLaw::from_samples(draws.iter().map(|d| d.second as f64 / nf).collect()),
        gh: EmpiricalLaw::from_samples(draws.iter().map(|d| d.gh_bound).collect()),
        ks_j,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_draw() {
        let n = 50usize;
        let mut seq = vec![(n - 1) as u32];
        seq.extend(std::iter::repeat_n(0, n - 1));
        let d = condensation_draw(&PlaneTree::from_degree_sequence(&seq).unwrap(), n as u64);
        assert_eq!(d.max_degree, 49);
        assert_eq!(d.second, 1);
        assert!(d.gh_bound <= 3.0 / n as f64);
    }

    #[test]
    fn j_cdf_shape() {
        assert_eq!(j_cdf(0.4, 2.5, 0.3), 0.0);
        assert!((j_cdf(0.4, 2.5, 0.8) - (1.0 - 0.5f64.powf(2.5))).abs() < 1e-15);
    }
}
