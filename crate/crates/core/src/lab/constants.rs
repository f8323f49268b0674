//! The looptree constants `c_μ`, `c̄_μ` and the scaling sequence `B_n`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::OffspringLaw;

fn require_critical(law: &OffspringLaw) -> Result<()> {
    if law.is_critical() {
        Ok(())
    } else {
        Err(Error::NotCritical { mean: law.mean() })
    }
}

/// `c_μ = ¼(σ² + 4 − μ(2ℤ₊))`, and `1/2` when `σ² = ∞`.
pub fn c_mu(law: &OffspringLaw) -> Result<f64> {
    require_critical(law)?;
    let s2 = law.variance();
    if s2.is_infinite() {
        return Ok(0.5);
    }
    Ok(0.25 * (s2 + 4.0 - law.even_mass()))
}

/// `c̄_μ = ¼(σ² + μ(2ℤ₊))`, finite variance only.
pub fn c_bar_mu(law: &OffspringLaw) -> Result<f64> {
    require_critical(law)?;
    let s2 = law.variance();
    if s2.is_infinite() {
        return Err(Error::InvalidLaw("c_bar needs finite variance".into()));
    }
    Ok(0.25 * (s2 + law.even_mass()))
}

/// `min(U, X* − U + 1)` (Loop) or `min(U, X* − U)` (Loop-bar) for one trunk step.
fn step_cost(x: u64, u: u64, bar: bool) -> u64 {
    if bar { u.min(x - u) } else { u.min(x + 1 - u) }
}

/// `E[min(U_{X*}, X* − U_{X*} + 1)]` summed over the head of `μ*`.
pub fn c_mu_exact_sum(law: &OffspringLaw, bar: bool) -> Result<f64> {
    require_critical(law)?;
    let sb = law.size_biased()?;
    let mut s = 0.0;
    for (x, &p) in sb.head().iter().enumerate().skip(1) {
        let x = x as u64;
        let tot: u64 = (1..=x).map(|u| step_cost(x, u, bar)).sum();
        s += p * tot as f64 / x as f64;
    }
    Ok(s)
}

/// Monte Carlo estimate of the trunk-step expectation: `(mean, standard error)`.
pub fn c_mu_oracle<R: Rng + ?Sized>(law: &OffspringLaw, draws: u64, bar: bool, rng: &mut R) -> Result<(f64, f64)> {
    require_critical(law)?;
    let sb = law.size_biased()?;
    let (mut s, mut s2) = (0.0f64, 0.0f64);
    for _ in 0..draws {
        let x = sb.sample(rng);
        let u = rng.random_range(1..=x);
        let c = step_cost(x, u, bar) as f64;
        s += c;
        s2 += c * c;
    }
    let n = draws as f64;
    let m = s / n;
    let var = (s2 / n - m * m).max(0.0) * n / (n - 1.0);
    Ok((m, (var / n).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalingMode {
    FiniteVariance,
    InfiniteVariance,
}

/// `B_n`: `σ·sqrt(n/2)` for finite variance, else the solution of `n·v(B)/B² = 2`
/// with `v(m) = Var(X·1{X ≤ m})`.
#[derive(Clone, Debug)]
pub struct ScalingSequence {
    mode: ScalingMode,
    sigma: f64,
    // cumulative E[K; K ≤ m] and E[K²; K ≤ m]
    m1: Vec<f64>,
    m2: Vec<f64>,
    law: OffspringLaw,
}

impl ScalingSequence {
    pub fn new(law: &OffspringLaw) -> Result<Self> {
        require_critical(law)?;
        let s2 = law.variance();
        let mode = if s2.is_finite() { ScalingMode::FiniteVariance } else { ScalingMode::InfiniteVariance };
        Ok(ScalingSequence { mode, sigma: s2.sqrt(), m1: vec![0.0], m2: vec![0.0], law: law.clone() })
    }

    pub fn mode(&self) -> ScalingMode {
        self.mode
    }

    fn extend_to(&mut self, m: usize) {
        while self.m1.len() <= m {
            let j = self.m1.len() - 1 + 1;
            let p = self.law.pmf(j as u64);
            let (a, b) = (*self.m1.last().unwrap(), *self.m2.last().unwrap());
            self.m1.push(a + j as f64 * p);
            self.m2.push(b + (j as f64).powi(2) * p);
        }
    }

    /// `Var(X·1{X ≤ m})` with the truncated variable set to 0 above `m`.
    pub fn truncated_variance(&mut self, m: f64) -> f64 {
        let k = m.floor().max(0.0) as usize;
        self.extend_to(k);
        let (a, b) = (self.m1[k], self.m2[k]);
        b - a * a
    }

    pub fn b_n(&mut self, n: u64) -> f64 {
        let nf = n as f64;
        match self.mode {
            ScalingMode::FiniteVariance => self.sigma * (nf / 2.0).sqrt(),
            ScalingMode::InfiniteVariance => {
                let (mut lo, mut hi) = (1.0f64, 1.0f64);
                while nf * self.truncated_variance(hi) / (hi * hi) > 2.0 {
                    lo = hi;
                    hi *= 2.0;
                }
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if nf * self.truncated_variance(mid) / (mid * mid) > 2.0 { lo = mid } else { hi = mid }
                    if hi - lo < 1e-12 * hi {
                        break;
                    }
                }
                0.5 * (lo + hi)
            }
        }
    }
}

/// `B_n` for each `n`, made non-decreasing in `n`.
pub fn bn_values(law: &OffspringLaw, ns: &[u64]) -> Result<Vec<f64>> {
    let mut s = ScalingSequence::new(law)?;
    let mut order: Vec<usize> = (0..ns.len()).collect();
    order.sort_by_key(|&i| ns[i]);
    let mut out = vec![0.0; ns.len()];
    let mut run: f64 = 0.0;
    for i in order {
        run = run.max(s.b_n(ns[i]));
        out[i] = run;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawSpec;

    #[test]
    fn closed_forms() {
        let b = LawSpec::Binary.build().unwrap();
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        assert_eq!(c_mu(&b).unwrap(), 1.0);
        assert!((c_mu(&g).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(c_bar_mu(&b).unwrap(), 0.5);
        assert_eq!(c_mu(&LawSpec::CriticalInfVar.build().unwrap()).unwrap(), 0.5);
        assert!(matches!(c_mu(&LawSpec::HeavyTail { beta: 2.5, mean: 0.6 }.build().unwrap()), Err(Error::NotCritical { .. })));
    }

    #[test]
    fn exact_sum_agrees() {
        for spec in [LawSpec::Binary, LawSpec::Geometric { p: 0.5 }] {
            let l = spec.build().unwrap();
            assert!((c_mu_exact_sum(&l, false).unwrap() - c_mu(&l).unwrap()).abs() < 1e-12);
            assert!((c_mu_exact_sum(&l, true).unwrap() - c_bar_mu(&l).unwrap()).abs() < 1e-12);
        }
        let f = OffspringLaw::finite("f", vec![0.45, 0.3, 0.1, 0.1, 0.05]).unwrap();
        assert!(f.is_critical());
        assert!((c_mu_exact_sum(&f, false).unwrap() - c_mu(&f).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn scaling() {
        let b = LawSpec::Binary.build().unwrap();
        let g = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        assert!((bn_values(&b, &[50]).unwrap()[0] - 5.0).abs() < 1e-12);
        assert!((bn_values(&g, &[400]).unwrap()[0] - 20.0).abs() < 1e-9);
        let c = LawSpec::CriticalInfVar.build().unwrap();
        let ns: Vec<u64> = (3..=7).map(|e| 10u64.pow(e)).collect();
        let bn = bn_values(&c, &ns).unwrap();
        let r: Vec<f64> = bn.iter().zip(&ns).map(|(b, &n)| b / (n as f64).sqrt()).collect();
        assert!(r.windows(2).all(|w| w[1] > w[0]), "{r:?}");
    }
}
