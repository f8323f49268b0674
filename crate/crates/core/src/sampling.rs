//! Random plane trees and the auxiliary scalar laws.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Binomial, Distribution};

use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::tree::{PlaneTree, TrunkSkeleton, VERTEX_CAP};
use crate::walk::{ConditionedSampler, WalkLaw};

pub const MAX_ENUMERATION: u64 = 12;

/// Unconditioned BGW tree, generated in depth-first order.
pub fn sample_bgw<R: Rng + ?Sized>(law: &OffspringLaw, rng: &mut R) -> Result<PlaneTree> {
    sample_bgw_capped(law, VERTEX_CAP, rng)
}

pub fn sample_bgw_capped<R: Rng + ?Sized>(law: &OffspringLaw, cap: u64, rng: &mut R) -> Result<PlaneTree> {
    let mut seq = Vec::new();
    let mut w: i64 = 0;
    while w >= 0 {
        if seq.len() as u64 >= cap {
            return Err(Error::TreeTooLarge { cap });
        }
        let k = law.sample(rng);
        seq.push(k as u32);
        w += k as i64 - 1;
    }
    PlaneTree::from_degree_sequence(&seq)
}

/// Index right after the first time the partial sums of `d − 1` reach their minimum.
pub fn cycle_lemma_start(degrees: &[u32]) -> usize {
    let mut s: i64 = 0;
    let mut best = i64::MAX;
    let mut at = 0;
    for (i, &k) in degrees.iter().enumerate() {
        s += k as i64 - 1;
        if s < best {
            best = s;
            at = i + 1;
        }
    }
    at % degrees.len()
}

/// Rotate a degree sequence with sum `n − 1` into the unique first-passage rotation.
pub fn cycle_lemma_rotate(degrees: &mut [u32]) {
    let r = cycle_lemma_start(degrees);
    degrees.rotate_left(r);
}

/// Exact draw from `BGW_μ(· | |τ| = n)`.
///
/// Child-count multiplicities are drawn as a multinomial (conditional binomials,
/// aborting once the running total exceeds `n − 1`) and accepted when the total is
/// exactly `n − 1`; a uniform shuffle and the cycle-lemma rotation give the tree.
pub fn sample_bgw_exact_n<R: Rng + ?Sized>(law: &OffspringLaw, n: u64, rng: &mut R) -> Result<PlaneTree> {
    sample_bgw_exact_n_budget(law, n, u64::MAX, rng)
}

pub fn sample_bgw_exact_n_budget<R: Rng + ?Sized>(
    law: &OffspringLaw,
    n: u64,
    max_attempts: u64,
    rng: &mut R,
) -> Result<PlaneTree> {
    if n > VERTEX_CAP {
        return Err(Error::TreeTooLarge { cap: VERTEX_CAP });
    }
    if !law.feasible_size(n) {
        return Err(Error::InfeasibleSize { n });
    }
    if n == 1 {
        return Ok(PlaneTree::single());
    }
    let head = law.head();
    let tail_mass = law.power_tail().map_or(0.0, |t| t.mass);
    // mass of categories j.. (head suffix plus tail)
    let mut rest = vec![0.0; head.len() + 1];
    rest[head.len()] = tail_mass;
    for j in (0..head.len()).rev() {
        rest[j] = rest[j + 1] + head[j];
    }
    let target = n - 1;
    let mut counts = vec![0u64; head.len()];
    let mut extra: Vec<u64> = Vec::new();
    for _ in 0..max_attempts {
        counts.iter_mut().for_each(|c| *c = 0);
        extra.clear();
        let mut remaining = n;
        let mut total = 0u64;
        let mut ok = true;
        for j in 0..head.len() {
            if remaining == 0 {
                break;
            }
            let p = (head[j] / rest[j]).min(1.0);
            let c = if p >= 1.0 {
                remaining
            } else if p <= 0.0 {
                0
            } else {
                Binomial::new(remaining, p).unwrap().sample(rng)
            };
            counts[j] = c;
            remaining -= c;
            total += c * j as u64;
            if total > target {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        if remaining > 0 {
            let t = law.power_tail().expect("leftover mass belongs to the tail");
            for _ in 0..remaining {
                let k = t.sample(rng);
                total += k;
                if total > target {
                    ok = false;
                    break;
                }
                extra.push(k);
            }
        }
        if !ok || total != target {
            continue;
        }
        let mut seq: Vec<u32> = Vec::with_capacity(n as usize);
        for (j, &c) in counts.iter().enumerate() {
            seq.extend(std::iter::repeat_n(j as u32, c as usize));
        }
        seq.extend(extra.iter().map(|&k| k as u32));
        seq.shuffle(rng);
        cycle_lemma_rotate(&mut seq);
        return PlaneTree::from_degree_sequence(&seq);
    }
    Err(Error::BudgetExhausted { attempts: max_attempts })
}

/// Exact draw from `BGW_μ(· | |τ| ≥ n)` for subcritical `μ`.
///
/// `|τ| ≥ n` is the event that the Łukasiewicz path stays non-negative up to time
/// `n − 1`; that prefix is drawn exactly by [`ConditionedSampler`] and the path is
/// then continued freely until it hits `−1`.
pub fn sample_bgw_at_least_n<R: Rng + ?Sized>(
    sampler: &ConditionedSampler,
    law: &OffspringLaw,
    max_attempts: u64,
    rng: &mut R,
) -> Result<PlaneTree> {
    let (inc, _) = sampler.sample(max_attempts, rng)?;
    let mut w: i64 = inc.iter().sum();
    let mut seq: Vec<u32> = inc.iter().map(|&x| (x + 1) as u32).collect();
    loop {
        if seq.len() as u64 >= VERTEX_CAP {
            return Err(Error::TreeTooLarge { cap: VERTEX_CAP });
        }
        let k = law.sample(rng);
        seq.push(k as u32);
        w += k as i64 - 1;
        if w < 0 {
            break;
        }
    }
    PlaneTree::from_degree_sequence(&seq)
}

pub fn at_least_n_sampler(law: &OffspringLaw, n: u64) -> ConditionedSampler {
    ConditionedSampler::new(&WalkLaw::tree(law.clone()), n.saturating_sub(1) as usize)
}

/// Full-tree rejection: resample unconditioned trees until `|τ| ≥ n`.
/// Returns the tree and the number of attempts.
pub fn sample_bgw_at_least_n_rejection<R: Rng + ?Sized>(
    law: &OffspringLaw,
    n: u64,
    max_attempts: u64,
    rng: &mut R,
) -> Result<(PlaneTree, u64)> {
    for attempt in 1..=max_attempts {
        match sample_bgw(law, rng) {
            Ok(t) if t.len() as u64 >= n => return Ok((t, attempt)),
            Ok(_) => {}
            Err(Error::TreeTooLarge { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExhausted { attempts: max_attempts })
}

/// `Trunk*_h`: spine child counts i.i.d. `μ*`, spine child uniform among them.
pub fn sample_trunk_star<R: Rng + ?Sized>(size_biased: &OffspringLaw, h: usize, rng: &mut R) -> TrunkSkeleton {
    let mut child_counts = Vec::with_capacity(h);
    let mut spine_pos = Vec::with_capacity(h);
    for _ in 0..h {
        let x = size_biased.sample(rng);
        child_counts.push(x);
        spine_pos.push(rng.random_range(1..=x));
    }
    TrunkSkeleton { child_counts, spine_pos }
}

/// `J = γ·U^(−1/β)`, so `P(J ≥ x) = (γ/x)^β` for `x ≥ γ`.
pub fn sample_j<R: Rng + ?Sized>(gamma: f64, beta: f64, rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    j_from_uniform(gamma, beta, u)
}

pub fn j_from_uniform(gamma: f64, beta: f64, u: f64) -> f64 {
    gamma * u.powf(-1.0 / beta)
}

/// `R = sqrt(−ln U)`, with density `2x·e^(−x²)`.
pub fn sample_r<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = 1.0 - rng.random::<f64>();
    (-u.ln()).sqrt()
}

/// All forests of `k` plane trees with `n` vertices in total and their BGW weights.
/// Only `μ(0..n)` enters, so any law is accepted.
pub fn enumerate_forests(law: &OffspringLaw, k: u64, n: u64) -> Result<Vec<(Vec<u32>, f64)>> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLargeToEnumerate { n, max: MAX_ENUMERATION });
    }
    let mut out = Vec::new();
    if n == 0 || k == 0 {
        return Ok(out);
    }
    let probs: Vec<f64> = (0..n).map(|j| law.pmf(j)).collect();
    let mut seq = Vec::with_capacity(n as usize);
    fn rec(probs: &[f64], n: usize, k: i64, w: i64, weight: f64, seq: &mut Vec<u32>, out: &mut Vec<(Vec<u32>, f64)>) {
        let i = seq.len();
        if i == n {
            if w == -k {
                out.push((seq.clone(), weight));
            }
            return;
        }
        for (j, &p) in probs.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let next = w + j as i64 - 1;
            // stay above −k until the end, and leave room to reach −k
            let last = i + 1 == n;
            if (!last && next < -k + 1) || (last && next != -k) {
                continue;
            }
            if next + k > (n - i - 1) as i64 {
                break;
            }
            seq.push(j as u32);
            rec(probs, n, k, next, weight * p, seq, out);
            seq.pop();
        }
    }
    rec(&probs, n as usize, k as i64, 0, 1.0, &mut seq, &mut out);
    Ok(out)
}

/// All plane trees with `n` vertices and positive weight `∏ μ(k_u)`.
pub fn enumerate_trees(law: &OffspringLaw, n: u64) -> Result<Vec<(PlaneTree, f64)>> {
    Ok(enumerate_forests(law, 1, n)?
        .into_iter()
        .map(|(s, w)| (PlaneTree::from_degree_sequence(&s).expect("enumerated paths are valid"), w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawSpec;
    use crate::rng::RandomSource;

    #[test]
    fn single_vertex_law() {
        let law = OffspringLaw::finite("x", vec![1.0]).unwrap_err();
        let _ = law;
        let l = OffspringLaw::finite("leaf-heavy", vec![0.75, 0.0, 0.25]).unwrap();
        let mut rng = RandomSource::new(1).rng();
        for _ in 0..1000 {
            assert_eq!(sample_bgw(&l, &mut rng).unwrap().len() % 2, 1);
        }
    }

    #[test]
    fn cycle_lemma_unique() {
        let inc = [1i64, 0, -1, -1];
        let deg: Vec<u32> = inc.iter().map(|x| (x + 1) as u32).collect();
        let good: Vec<usize> = (0..4)
            .filter(|&r| {
                let mut d = deg.clone();
                d.rotate_left(r);
                PlaneTree::from_degree_sequence(&d).is_ok()
            })
            .collect();
        assert_eq!(good, vec![0]);
        for r in 0..4 {
            let mut d = deg.clone();
            d.rotate_left(r);
            cycle_lemma_rotate(&mut d);
            assert_eq!(d, deg);
        }
    }

    #[test]
    fn enumeration_small() {
        let g = LawSpec::GeometricTruncated { p: 0.5, kmax: 4 }.build().unwrap();
        let t1 = enumerate_trees(&g, 1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].1, g.pmf(0));
        let t3 = enumerate_trees(&g, 3).unwrap();
        assert_eq!(t3.len(), 2);
        let geo = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        for (_, w) in enumerate_trees(&geo, 3).unwrap() {
            assert!((w - 1.0 / 32.0).abs() < 1e-15);
        }
        assert_eq!(enumerate_trees(&geo, 8).unwrap().len(), 429);
        assert!(enumerate_trees(&geo, 13).is_err());
    }

    #[test]
    fn exact_n_infeasible() {
        let b = LawSpec::Binary.build().unwrap();
        let mut rng = RandomSource::new(0).rng();
        assert!(matches!(sample_bgw_exact_n(&b, 4, &mut rng), Err(Error::InfeasibleSize { n: 4 })));
        assert_eq!(sample_bgw_exact_n(&b, 1, &mut rng).unwrap().len(), 1);
        assert_eq!(sample_bgw_exact_n(&b, 9, &mut rng).unwrap().len(), 9);
    }

    #[test]
    fn exact_n_geometric_three() {
        let geo = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let mut rng = RandomSource::new(3).rng();
        let n = 100_000;
        let chains = (0..n)
            .filter(|_| sample_bgw_exact_n(&geo, 3, &mut rng).unwrap().degrees() == [1, 1, 0])
            .count();
        let f = chains as f64 / n as f64;
        assert!((f - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt());
    }

    #[test]
    fn j_and_r() {
        assert_eq!(j_from_uniform(0.4, 2.5, 1.0), 0.4);
        let mut rng = RandomSource::new(8).rng();
        let n = 1_000_000;
        let pj = 2f64.powf(-2.5);
        let fj = (0..n).filter(|_| sample_j(0.4, 2.5, &mut rng) >= 0.8).count() as f64 / n as f64;
        assert!((fj - pj).abs() < 3.0 * (pj * (1.0 - pj) / n as f64).sqrt());
        let pr = (-1f64).exp();
        let fr = (0..n).filter(|_| sample_r(&mut rng) >= 1.0).count() as f64 / n as f64;
        assert!((fr - pr).abs() < 3.0 * (pr * (1.0 - pr) / n as f64).sqrt());
    }

    #[test]
    fn trunk_star_binary() {
        let b = LawSpec::Binary.build().unwrap().size_biased().unwrap();
        let mut rng = RandomSource::new(2).rng();
        let s = sample_trunk_star(&b, 17, &mut rng);
        assert!(s.child_counts.iter().all(|&x| x == 2));
        assert_eq!(s.leaf_count(), 18);
    }
}
