//! Empirical laws and Kolmogorov–Smirnov statistics.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Weighted sample, sorted by value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalLaw {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl EmpiricalLaw {
    pub fn from_samples(mut xs: Vec<f64>) -> Self {
        xs.sort_by(f64::total_cmp);
        let w = if xs.is_empty() { 0.0 } else { 1.0 / xs.len() as f64 };
        let weights = vec![w; xs.len()];
        EmpiricalLaw { values: xs, weights }
    }

    pub fn from_weighted(pairs: Vec<(f64, f64)>) -> Self {
        let mut pairs = pairs;
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        EmpiricalLaw {
            values: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(x, w)| x * w).sum()
    }

    /// Smallest value whose cumulative weight reaches `q`.
    pub fn quantile(&self, q: f64) -> f64 {
        let mut c = 0.0;
        for (x, w) in self.values.iter().zip(&self.weights) {
            c += w;
            if c >= q - 1e-12 {
                return *x;
            }
        }
        *self.values.last().unwrap_or(&f64::NAN)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        self.values
            .iter()
            .zip(&self.weights)
            .take_while(|(v, _)| **v <= x)
            .map(|(_, w)| w)
            .sum()
    }
}

/// `sup_x |F_n(x) − F(x)|` for a continuous reference CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Two-sample statistic `sup_x |F_a(x) − F_b(x)|`, ties handled exactly.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(f64::total_cmp);
    xb.sort_by(f64::total_cmp);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic `P(D > d)` for the one-sample statistic on `n` points.
pub fn kolmogorov_pvalue(d: f64, n: usize) -> f64 {
    let x = d * (n as f64).sqrt();
    if x < 0.2 {
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..200 {
        let t = 2.0 * (-1f64).powi(k - 1) * (-2.0 * (k as f64 * x).powi(2)).exp();
        s += t;
        if t.abs() < 1e-16 {
            break;
        }
    }
    s.clamp(0.0, 1.0)
}

/// Total variation between two weighted histograms over the same keys.
pub fn tv_weighted<K: Ord + Clone>(a: &[(K, f64)], b: &[(K, f64)]) -> f64 {
    let mut h: BTreeMap<K, (f64, f64)> = BTreeMap::new();
    let sa: f64 = a.iter().map(|x| x.1).sum();
    let sb: f64 = b.iter().map(|x| x.1).sum();
    for (k, w) in a {
        h.entry(k.clone()).or_default().0 += w / sa;
    }
    for (k, w) in b {
        h.entry(k.clone()).or_default().1 += w / sb;
    }
    0.5 * h.values().map(|(x, y)| (x - y).abs()).sum::<f64>()
}

pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let e = EmpiricalLaw::from_samples(vec![3.0, 1.0, 2.0, 4.0]);
        assert_eq!(e.median(), 2.0);
        assert_eq!(e.quantile(0.9), 4.0);
        assert_eq!(e.cdf(2.5), 0.5);
        assert_eq!(e.mean(), 2.5);
    }

    #[test]
    fn ks_hand_values() {
        // uniform reference, one point at 0.5: D = 0.5
        assert!((ks_one_sample(&[0.5], |x| x) - 0.5).abs() < 1e-15);
        assert!((ks_one_sample(&[0.25, 0.75], |x| x) - 0.25).abs() < 1e-15);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[1.0, 2.0]), 0.0);
        assert_eq!(ks_two_sample(&[1.0, 2.0], &[3.0, 4.0]), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0, 3.0], &[2.0]) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn pvalue_limits() {
        assert!((kolmogorov_pvalue(1.358 / 10.0, 100) - 0.05).abs() < 1e-3);
        assert_eq!(kolmogorov_pvalue(0.0, 10), 1.0);
    }

    #[test]
    fn weighted_tv() {
        let a = vec![(0, 1.0), (1, 1.0)];
        let b = vec![(1, 2.0), (2, 2.0)];
        assert!((tv_weighted(&a, &b) - 0.5).abs() < 1e-15);
    }
}
