//! Exact finite-n identities: walk marginals `φ_n`, Kemperman's formula, the
//! trunk bias identity and the local limit statistic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::OffspringLaw;
use crate::sampling::{enumerate_forests, enumerate_trees};
use crate::tree::TrunkSkeleton;
use crate::walk::FftConv;

/// Table of `P(S_n = s)`, `S_n` the sum of `n` offspring draws, for `0 ≤ s ≤ cap`.
/// Then `φ_n(j) = P(W_n = −j) = P(S_n = n − j)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Phi {
    n: u64,
    sums: Vec<f64>,
    bound: f64,
}

impl Phi {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn cap(&self) -> u64 {
        self.sums.len() as u64 - 1
    }

    /// `φ_n(j)`; zero outside the table.
    pub fn at(&self, j: i64) -> f64 {
        let s = self.n as i64 - j;
        if s < 0 || s as usize >= self.sums.len() {
            0.0
        } else {
            self.sums[s as usize]
        }
    }

    /// Smallest `j` held in the table.
    pub fn min_j(&self) -> i64 {
        self.n as i64 - self.cap() as i64
    }

    /// Per-entry error bound: law truncation plus floating-point round-off.
    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Mass of `S_n` above the cap.
    pub fn outside_mass(&self) -> f64 {
        (1.0 - self.sums.iter().sum::<f64>()).max(0.0)
    }

    pub fn sums(&self) -> &[f64] {
        &self.sums
    }
}

fn default_cap(law: &OffspringLaw, n: u64) -> u64 {
    if let Some(k) = law.max_support() {
        return k * n;
    }
    let nf = n as f64;
    let v = law.variance();
    if v.is_finite() {
        (nf + 50.0 * (nf * v).sqrt()).ceil() as u64 + 64
    } else {
        4 * n + 64
    }
}

fn truncate_conv(a: &[f64], b: &[f64], len: usize) -> Vec<f64> {
    let mut c = if (a.len() as u64) * (b.len() as u64) < 1 << 20 {
        let mut c = vec![0.0; (a.len() + b.len() - 1).min(len)];
        for (i, &x) in a.iter().enumerate() {
            if x == 0.0 || i >= len {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                c[i + j] += x * y;
            }
        }
        c
    } else {
        FftConv::new(b, a.len()).apply(a)
    };
    c.truncate(len);
    c
}

pub fn phi(law: &OffspringLaw, n: u64) -> Result<Phi> {
    phi_with_cap(law, n, default_cap(law, n))
}

/// Exact `φ_n` on `S_n ≤ cap`; entries below the cap do not depend on what lies above it.
pub fn phi_with_cap(law: &OffspringLaw, n: u64, cap: u64) -> Result<Phi> {
    if n == 0 {
        return Ok(Phi { n, sums: vec![1.0], bound: 0.0 });
    }
    let len = (cap + 1) as usize;
    let kmax = law.max_support().map_or(cap, |k| k.min(cap));
    let kernel: Vec<f64> = (0..=kmax).map(|j| law.pmf(j)).collect();
    let mut result = vec![1.0];
    let mut base = kernel;
    let mut e = n;
    let mut convs = 0u32;
    while e > 0 {
        if e & 1 == 1 {
            result = truncate_conv(&result, &base, len);
            convs += 1;
        }
        e >>= 1;
        if e > 0 {
            base = truncate_conv(&base, &base, len);
            convs += 1;
        }
    }
    let log_len = (len.max(2) as f64).log2();
    let bound = n as f64 * law.truncation_error() + convs as f64 * (log_len + 1.0) * 4.0 * f64::EPSILON;
    let phi = Phi { n, sums: result, bound };
    if cap + 1 < n {
        return Err(Error::CapTooSmall { bound: phi.outside_mass() });
    }
    Ok(phi)
}

/// `P(|T| = n)` by enumeration against `(1/n)·φ_n(1)`.
pub fn kemperman_check(law: &OffspringLaw, n: u64) -> Result<(f64, f64)> {
    kemperman_forest_check(law, 1, n)
}

/// `P(forest of k trees has n vertices)` by enumeration against `(k/n)·φ_n(k)`.
pub fn kemperman_forest_check(law: &OffspringLaw, k: u64, n: u64) -> Result<(f64, f64)> {
    let lhs: f64 = enumerate_forests(law, k, n)?.iter().map(|(_, w)| w).sum();
    let rhs = k as f64 / n as f64 * phi_with_cap(law, n, n)?.at(k as i64);
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiasReport {
    pub n: u64,
    pub max_discrepancy: f64,
    /// `P(|V_n| = h)` from the tree side.
    pub height_mass: Vec<f64>,
    pub skeletons: usize,
}

fn skeletons(law: &OffspringLaw, budget: u64, cur: &mut TrunkSkeleton, out: &mut Vec<TrunkSkeleton>) {
    out.push(cur.clone());
    for x in 1..=budget {
        if law.pmf(x) == 0.0 {
            continue;
        }
        for u in 1..=x {
            cur.child_counts.push(x);
            cur.spine_pos.push(u);
            skeletons(law, budget - x, cur, out);
            cur.child_counts.pop();
            cur.spine_pos.pop();
        }
    }
}

/// Both sides of the trunk bias identity, for `F` the indicator of each skeleton.
///
/// Tree side: uniform vertex of a size-`n` tree. Skeleton side:
/// `Πμ(x_i)·Λ·φ_{n−h}(Λ)/((n−h)·φ_n(1))`.
pub fn bias_identity_check(law: &OffspringLaw, n: u64) -> Result<BiasReport> {
    let trees = enumerate_trees(law, n)?;
    let z: f64 = trees.iter().map(|(_, w)| w).sum();
    if z == 0.0 {
        return Err(Error::InfeasibleSize { n });
    }
    let mut lhs: BTreeMap<TrunkSkeleton, f64> = BTreeMap::new();
    let mut height_mass = vec![0.0; n as usize];
    let empty = TrunkSkeleton { child_counts: vec![], spine_pos: vec![] };
    for (t, w) in &trees {
        let sizes = t.subtree_sizes();
        let p = w / (z * n as f64);
        for v in 0..t.len() {
            let key = if v == 0 { empty.clone() } else { t.trunk_of_with(v, &sizes)? };
            height_mass[key.h()] += p;
            *lhs.entry(key).or_default() += p;
        }
    }
    let phis: Vec<Phi> = (0..=n).map(|m| phi_with_cap(law, m, n)).collect::<Result<_>>()?;
    let denom = phis[n as usize].at(1);
    let mut all = Vec::new();
    skeletons(law, n - 1, &mut empty.clone(), &mut all);
    let mut max_discrepancy: f64 = 0.0;
    for sk in &all {
        let h = sk.h() as u64;
        let lam = sk.leaf_count();
        let prod: f64 = sk.child_counts.iter().map(|&x| law.pmf(x)).product();
        let rhs = prod * lam as f64 * phis[(n - h) as usize].at(lam as i64) / ((n - h) as f64 * denom);
        let l = lhs.remove(sk).unwrap_or(0.0);
        max_discrepancy = max_discrepancy.max((l - rhs).abs());
    }
    // trunks that the skeleton side never produced
    for (_, l) in lhs {
        max_discrepancy = max_discrepancy.max(l);
    }
    Ok(BiasReport { n, max_discrepancy, height_mass, skeletons: all.len() })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LltReport {
    pub n: u64,
    pub b_n: f64,
    pub statistic: f64,
    /// `B_n·φ_n(0)`.
    pub at_zero: f64,
    pub bound: f64,
}

/// `sup_k |B_n φ_n(k) − e^{−k²/(4B_n²)}/√(4π)|` with `B_n = σ·sqrt(n/2)`.
pub fn llt_check(law: &OffspringLaw, n: u64) -> Result<LltReport> {
    if !law.is_critical() {
        return Err(Error::NotCritical { mean: law.mean() });
    }
    let s2 = law.variance();
    if !s2.is_finite() {
        return Err(Error::InvalidLaw("local limit check needs finite variance".into()));
    }
    let p = phi(law, n)?;
    let b = (s2 * n as f64 / 2.0).sqrt();
    let g = |k: i64| (-(k as f64).powi(2) / (4.0 * b * b)).exp() / (4.0 * std::f64::consts::PI).sqrt();
    let mut stat: f64 = 0.0;
    for k in p.min_j() - 1..=n as i64 + 1 {
        stat = stat.max((b * p.at(k) - g(k)).abs());
    }
    Ok(LltReport { n, b_n: b, statistic: stat, at_zero: b * p.at(0), bound: b * (p.bound() + p.outside_mass()) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawSpec;

    fn ln_choose(a: u64, b: u64) -> f64 {
        (1..=b).map(|i| ((a - b + i) as f64 / i as f64).ln()).sum()
    }

    #[test]
    fn phi_small_values() {
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let b = LawSpec::Binary.build().unwrap();
        assert!((phi(&b, 1).unwrap().at(1) - 0.5).abs() < 1e-15);
        assert!((phi(&g, 2).unwrap().at(1) - 0.25).abs() < 1e-15);
        let p = phi(&b, 7).unwrap();
        let total: f64 = (p.min_j()..=7).map(|j| p.at(j)).sum();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phi_geometric_negative_binomial() {
        // S_n is negative binomial: C(s+n−1, n−1)·2^{−n−s}
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        for n in [3u64, 40, 700] {
            let p = phi(&g, n).unwrap();
            for s in (0..3 * n).step_by(7) {
                let exact = (ln_choose(s + n - 1, n - 1) - (n + s) as f64 * 2f64.ln()).exp();
                let got = p.at(n as i64 - s as i64);
                assert!((got - exact).abs() < 1e-13 + p.bound(), "n {n} s {s}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn phi_cap_too_small() {
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        assert!(matches!(phi_with_cap(&g, 50, 10), Err(Error::CapTooSmall { .. })));
    }

    #[test]
    fn kemperman_small() {
        let g = LawSpec::GeometricTruncated { p: 0.5, kmax: 4 }.build().unwrap();
        for n in 1..=8 {
            let (a, b) = kemperman_check(&g, n).unwrap();
            assert!((a - b).abs() < 1e-14, "{n}: {a} {b}");
            let (a, b) = kemperman_forest_check(&g, 3, n).unwrap();
            assert!((a - b).abs() < 1e-14, "{n}: {a} {b}");
        }
    }

    #[test]
    fn bias_identity_small() {
        let g = LawSpec::GeometricTruncated { p: 0.5, kmax: 4 }.build().unwrap();
        for n in 1..=6 {
            let r = bias_identity_check(&g, n).unwrap();
            assert!(r.max_discrepancy < 1e-12, "{n}: {}", r.max_discrepancy);
            assert!((r.height_mass[0] - 1.0 / n as f64).abs() < 1e-14);
        }
        let b = LawSpec::Binary.build().unwrap();
        let r = bias_identity_check(&b, 5).unwrap();
        assert!(r.max_discrepancy < 1e-12);
        assert!(matches!(bias_identity_check(&b, 4), Err(Error::InfeasibleSize { .. })));
    }

    #[test]
    fn llt_geometric() {
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let r = llt_check(&g, 2000).unwrap();
        assert!(r.statistic < 0.02);
        assert!((r.at_zero - 1.0 / (4.0 * std::f64::consts::PI).sqrt()).abs() < 0.01);
    }
}
