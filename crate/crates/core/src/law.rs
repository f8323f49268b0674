//! Offspring laws on the non-negative integers.
//!
//! A law is stored as a finite head table `μ(0..K)` plus an optional power tail
//! `μ(j) = coeff·(j/stride)^(−exponent)` on multiples of `stride` from `K` on.
//! Light-tailed families are truncated once the remaining mass is below
//! [`TRUNCATION`]; the dropped mass is kept in [`OffspringLaw::truncation_error`].

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const TRUNCATION: f64 = 1e-17;
const DIRECT_TERMS: u64 = 64;

/// `Σ_{k ≥ k0} k^(−a)` for `a > 1`, `k0 ≥ 1`.
pub fn hurwitz_tail(a: f64, k0: u64) -> f64 {
    assert!(a > 1.0 && k0 >= 1);
    let m = k0.max(DIRECT_TERMS);
    let mut s = 0.0;
    // small terms first
    for k in (k0..m).rev() {
        s += (k as f64).powf(-a);
    }
    let x = m as f64;
    let f = x.powf(-a);
    let mut em = x.powf(1.0 - a) / (a - 1.0) + 0.5 * f;
    em += a / 12.0 * x.powf(-a - 1.0);
    em -= a * (a + 1.0) * (a + 2.0) / 720.0 * x.powf(-a - 3.0);
    em += a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) / 30240.0 * x.powf(-a - 5.0);
    s + em
}

pub fn zeta(a: f64) -> f64 {
    hurwitz_tail(a, 1)
}

/// Power tail `μ(j) = coeff·(j/stride)^(−exponent)` for `j ≥ start`, `stride | j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTail {
    pub start: u64,
    pub stride: u64,
    pub coeff: f64,
    pub exponent: f64,
    pub mass: f64,
}

impl PowerTail {
    fn new(start: u64, stride: u64, coeff: f64, exponent: f64) -> Self {
        assert!(start % stride == 0 && start > 0);
        let mass = coeff * hurwitz_tail(exponent, start / stride);
        PowerTail { start, stride, coeff, exponent, mass }
    }

    fn k0(&self) -> u64 {
        self.start / self.stride
    }

    fn pmf(&self, j: u64) -> f64 {
        if j < self.start || j % self.stride != 0 {
            0.0
        } else {
            self.coeff * ((j / self.stride) as f64).powf(-self.exponent)
        }
    }

    /// Mass of `{j ≥ x}` restricted to the tail.
    fn sf(&self, x: u64) -> f64 {
        let k = x.div_ceil(self.stride).max(self.k0());
        self.coeff * hurwitz_tail(self.exponent, k)
    }

    /// `Σ j^p μ(j)` over the tail; infinite when it diverges.
    fn moment(&self, p: i32) -> f64 {
        let a = self.exponent - p as f64;
        if a <= 1.0 {
            f64::INFINITY
        } else {
            self.coeff * (self.stride as f64).powi(p) * hurwitz_tail(a, self.k0())
        }
    }

    /// Draw from the tail conditioned on itself, by rejection from a discretised Pareto.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let a = self.exponent;
        let k0 = self.k0() as f64;
        let bound = (1.0 + 1.0 / k0).powf(a);
        loop {
            let u: f64 = 1.0 - rng.random::<f64>();
            let x = k0 * u.powf(-1.0 / (a - 1.0));
            if x >= 9.0e18 / self.stride as f64 {
                continue;
            }
            let k = x.floor();
            // ∫_k^{k+1} u^{-a} du
            let integral = -k.powf(1.0 - a) * ((1.0 - a) * (1.0 / k).ln_1p()).exp_m1() / (a - 1.0);
            let ratio = k.powf(-a) / integral / bound;
            if rng.random::<f64>() < ratio {
                return k as u64 * self.stride;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LawSpec {
    Finite { probs: Vec<f64> },
    Binary,
    Geometric { p: f64 },
    GeometricTruncated { p: f64, kmax: usize },
    HeavyTail { beta: f64, mean: f64 },
    CriticalInfVar,
    EvenOdd { beta: f64, mean: f64 },
}

impl LawSpec {
    pub fn build(&self) -> Result<OffspringLaw> {
        OffspringLaw::from_spec(self)
    }

    /// Parse either a JSON document or one of the short names
    /// `binary`, `geometric`, `heavy-tail`, `critical-inf-var`, `even-odd`.
    pub fn parse(s: &str) -> Result<LawSpec> {
        let t = s.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()));
        }
        Ok(match t {
            "binary" => LawSpec::Binary,
            "geometric" => LawSpec::Geometric { p: 0.5 },
            "geometric-truncated" => LawSpec::GeometricTruncated { p: 0.5, kmax: 4 },
            "heavy-tail" => LawSpec::HeavyTail { beta: 2.5, mean: 0.6 },
            "critical-inf-var" => LawSpec::CriticalInfVar,
            "even-odd" => LawSpec::EvenOdd { beta: 2.5, mean: 0.6 },
            _ => return Err(Error::Parse(format!("unknown law {t:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct OffspringLaw {
    name: String,
    head: Vec<f64>,
    tail: Option<PowerTail>,
    head_suffix: Vec<f64>,
    mean: f64,
    variance: f64,
    tail_exponent: Option<f64>,
    truncation_error: f64,
    constants: Vec<(String, f64)>,
    alias: WeightedAliasIndex<f64>,
}

fn geometric_head(p: f64) -> (Vec<f64>, f64) {
    let q = 1.0 - p;
    let k = ((TRUNCATION.ln() / q.ln()).ceil() as usize).clamp(2, 1 << 22);
    let head: Vec<f64> = (0..k).map(|i| p * q.powi(i as i32)).collect();
    (head, q.powi(k as i32))
}

impl OffspringLaw {
    pub fn from_spec(spec: &LawSpec) -> Result<Self> {
        match *spec {
            LawSpec::Finite { ref probs } => Self::finite("finite", probs.clone()),
            LawSpec::Binary => Self::finite("binary", vec![0.5, 0.0, 0.5]),
            LawSpec::Geometric { p } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::InvalidLaw(format!("geometric p = {p}")));
                }
                let (head, dropped) = geometric_head(p);
                let mut law = Self::assemble(format!("geometric({p})"), head, None, vec![])?;
                law.truncation_error = dropped;
                Ok(law)
            }
            LawSpec::GeometricTruncated { p, kmax } => {
                if !(p > 0.0 && p < 1.0) {
                    return Err(Error::InvalidLaw(format!("geometric p = {p}")));
                }
                let raw: Vec<f64> = (0..=kmax).map(|i| p * (1.0 - p).powi(i as i32)).collect();
                let z: f64 = raw.iter().sum();
                let probs = raw.iter().map(|x| x / z).collect();
                let mut law = Self::finite("geometric-truncated", probs)?;
                law.name = format!("geometric-truncated({p},{kmax})");
                law.constants = vec![("normaliser".into(), z)];
                Ok(law)
            }
            LawSpec::HeavyTail { beta, mean } => Self::power_family(
                format!("heavy-tail({beta},{mean})"),
                beta,
                mean,
            ),
            LawSpec::CriticalInfVar => Self::power_family("critical-inf-var".into(), 2.0, 1.0),
            LawSpec::EvenOdd { beta, mean } => Self::even_odd(beta, mean),
        }
    }

    pub fn finite(name: &str, probs: Vec<f64>) -> Result<Self> {
        let s: f64 = probs.iter().sum();
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) || (s - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidLaw(format!("probabilities must be non-negative and sum to 1 (sum {s})")));
        }
        let mut probs = probs;
        while probs.len() > 1 && *probs.last().unwrap() == 0.0 {
            probs.pop();
        }
        Self::assemble(name.to_string(), probs, None, vec![])
    }

    /// `μ(i) = c·i^(−β−1)` for `i ≥ 1`, `c = mean/ζ(β)`, `μ(0) = 1 − cζ(β+1)`.
    fn power_family(name: String, beta: f64, mean: f64) -> Result<Self> {
        if !(beta > 1.0) || !(mean > 0.0 && mean <= 1.0) {
            return Err(Error::InvalidLaw(format!("need beta > 1 and 0 < mean <= 1, got {beta}, {mean}")));
        }
        let a = beta + 1.0;
        let c = mean / zeta(beta);
        let mu0 = 1.0 - c * zeta(a);
        if !(mu0 > 0.0) {
            return Err(Error::InvalidLaw(format!("mean {mean} forces mu(0) = {mu0}")));
        }
        let k = DIRECT_TERMS;
        let mut head = vec![mu0];
        head.extend((1..k).map(|i| c * (i as f64).powf(-a)));
        let tail = PowerTail::new(k, 1, c, a);
        let consts = vec![("c".into(), c), ("mu0".into(), mu0)];
        Self::assemble(name, head, Some(tail), consts)
    }

    /// `μ(2k) = c·k^(−β−1)`, `μ(2k+1) = c·e^(−k)` for `k ≥ 1`, `μ(1) = 0`.
    fn even_odd(beta: f64, mean: f64) -> Result<Self> {
        if !(beta > 1.0) || !(mean > 0.0 && mean <= 1.0) {
            return Err(Error::InvalidLaw(format!("need beta > 1 and 0 < mean <= 1, got {beta}, {mean}")));
        }
        let a = beta + 1.0;
        let kk: u64 = 40;
        let odd_mass: f64 = (1..kk).map(|k| (-(k as f64)).exp()).sum();
        let odd_mean: f64 = (1..kk).map(|k| (2 * k + 1) as f64 * (-(k as f64)).exp()).sum();
        let c = mean / (2.0 * zeta(beta) + odd_mean);
        let mu0 = 1.0 - c * (zeta(a) + odd_mass);
        if !(mu0 > 0.0) {
            return Err(Error::InvalidLaw(format!("mean {mean} forces mu(0) = {mu0}")));
        }
        let start = 2 * kk;
        let mut head = vec![0.0; start as usize];
        head[0] = mu0;
        for k in 1..kk {
            head[(2 * k) as usize] = c * (k as f64).powf(-a);
            head[(2 * k + 1) as usize] = c * (-(k as f64)).exp();
        }
        let tail = PowerTail::new(start, 2, c, a);
        let dropped = c * (-(kk as f64)).exp() / (1.0 - (-1.0f64).exp());
        let mut law = Self::assemble(
            format!("even-odd({beta},{mean})"),
            head,
            Some(tail),
            vec![("c".into(), c), ("mu0".into(), mu0)],
        )?;
        law.truncation_error = dropped;
        Ok(law)
    }

    fn assemble(name: String, head: Vec<f64>, tail: Option<PowerTail>, constants: Vec<(String, f64)>) -> Result<Self> {
        let mu0 = head[0];
        let mu1 = head.get(1).copied().unwrap_or(0.0);
        if !(mu0 > 0.0) || !(mu0 + mu1 < 1.0) {
            return Err(Error::InvalidLaw(format!("need mu(0) > 0 and mu(0)+mu(1) < 1, got {mu0}, {mu1}")));
        }
        let mut head_suffix = vec![0.0; head.len() + 1];
        for i in (0..head.len()).rev() {
            head_suffix[i] = head_suffix[i + 1] + head[i];
        }
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (j, &p) in head.iter().enumerate() {
            m1 += j as f64 * p;
            m2 += (j as f64).powi(2) * p;
        }
        let mut tail_exponent = None;
        if let Some(t) = &tail {
            m1 += t.moment(1);
            m2 += t.moment(2);
            tail_exponent = Some(t.exponent - 1.0);
        }
        let variance = if m2.is_finite() { m2 - m1 * m1 } else { f64::INFINITY };
        let mut weights = head.clone();
        weights.push(tail.as_ref().map_or(0.0, |t| t.mass));
        let alias = WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidLaw(e.to_string()))?;
        Ok(OffspringLaw {
            name,
            head,
            tail,
            head_suffix,
            mean: m1,
            variance,
            tail_exponent,
            truncation_error: 0.0,
            constants,
            alias,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `σ²`, infinite when the second moment diverges.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// `β` with `μ([i,∞)) ≈ L·i^(−β)`, for laws with a power tail.
    pub fn tail_exponent(&self) -> Option<f64> {
        self.tail_exponent
    }

    pub fn truncation_error(&self) -> f64 {
        self.truncation_error
    }

    /// Solved normalisation constants, for echoing in output metadata.
    pub fn constants(&self) -> &[(String, f64)] {
        &self.constants
    }

    pub fn head(&self) -> &[f64] {
        &self.head
    }

    pub fn power_tail(&self) -> Option<&PowerTail> {
        self.tail.as_ref()
    }

    pub fn is_critical(&self) -> bool {
        (self.mean - 1.0).abs() < 1e-9
    }

    pub fn is_finite_support(&self) -> bool {
        self.tail.is_none()
    }

    /// Largest `j` with `μ(j) > 0`, or `None` for infinite support.
    pub fn max_support(&self) -> Option<u64> {
        match self.tail {
            Some(_) => None,
            None => Some(self.head.len() as u64 - 1),
        }
    }

    pub fn pmf(&self, j: u64) -> f64 {
        if (j as usize) < self.head.len() {
            self.head[j as usize]
        } else {
            self.tail.as_ref().map_or(0.0, |t| t.pmf(j))
        }
    }

    /// `μ([j, ∞))`.
    pub fn sf(&self, j: u64) -> f64 {
        let tail = |x: u64| self.tail.as_ref().map_or(0.0, |t| t.sf(x));
        if (j as usize) < self.head.len() {
            self.head_suffix[j as usize] + tail(self.head.len() as u64)
        } else {
            tail(j)
        }
    }

    /// `μ(2ℤ₊)`.
    pub fn even_mass(&self) -> f64 {
        let mut s: f64 = self.head.iter().step_by(2).sum();
        if let Some(t) = &self.tail {
            if t.stride % 2 == 0 {
                s += t.mass;
            } else {
                // j = k·stride is even iff k is even
                let k = t.k0().div_ceil(2);
                s += t.coeff * 2f64.powf(-t.exponent) * hurwitz_tail(t.exponent, k);
            }
        }
        s
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let i = self.alias.sample(rng);
        if i < self.head.len() {
            i as u64
        } else {
            self.tail.as_ref().unwrap().sample(rng)
        }
    }

    /// Draw from `μ` conditioned on `[a, ∞)`, `a ≥ 1`.
    pub fn sample_at_least<R: Rng + ?Sized>(&self, a: u64, rng: &mut R) -> u64 {
        let h = self.head.len() as u64;
        if let Some(t) = &self.tail {
            if a >= t.start {
                let sub = PowerTail::new(a.div_ceil(t.stride) * t.stride, t.stride, t.coeff, t.exponent);
                return sub.sample(rng);
            }
        }
        let total = self.sf(a);
        assert!(total > 0.0, "no mass at or above {a}");
        loop {
            let mut u = rng.random::<f64>() * total;
            for j in a..h {
                u -= self.head[j as usize];
                if u < 0.0 {
                    return j;
                }
            }
            if let Some(t) = &self.tail {
                return t.sample(rng);
            }
        }
    }

    /// `μ*(j) = jμ(j)/m`.
    pub fn size_biased(&self) -> Result<OffspringLaw> {
        let m = self.mean;
        let head: Vec<f64> = self.head.iter().enumerate().map(|(j, p)| j as f64 * p / m).collect();
        let tail = match &self.tail {
            None => None,
            Some(t) => {
                if t.exponent - 1.0 <= 1.0 {
                    return Err(Error::InvalidLaw("size-biased law needs a finite mean".into()));
                }
                Some(PowerTail::new(t.start, t.stride, t.coeff * t.stride as f64 / m, t.exponent - 1.0))
            }
        };
        let mut weights = head.clone();
        weights.push(tail.as_ref().map_or(0.0, |t| t.mass));
        let mut head_suffix = vec![0.0; head.len() + 1];
        for i in (0..head.len()).rev() {
            head_suffix[i] = head_suffix[i + 1] + head[i];
        }
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (j, &p) in head.iter().enumerate() {
            m1 += j as f64 * p;
            m2 += (j as f64).powi(2) * p;
        }
        if let Some(t) = &tail {
            m1 += t.moment(1);
            m2 += t.moment(2);
        }
        let alias = WeightedAliasIndex::new(weights).map_err(|e| Error::InvalidLaw(e.to_string()))?;
        Ok(OffspringLaw {
            name: format!("size-biased {}", self.name),
            tail_exponent: tail.as_ref().map(|t| t.exponent - 1.0),
            head,
            tail,
            head_suffix,
            mean: m1,
            variance: if m2.is_finite() { m2 - m1 * m1 } else { f64::INFINITY },
            truncation_error: self.truncation_error,
            constants: vec![],
            alias,
        })
    }

    /// gcd of the positive support points.
    pub fn span(&self) -> u64 {
        let mut g = self.tail.as_ref().map_or(0, |t| t.stride);
        for (j, &p) in self.head.iter().enumerate().skip(1) {
            if p > 0.0 {
                g = gcd(g, j as u64);
            }
        }
        g
    }

    /// Whether some plane tree with `n` vertices has positive weight.
    pub fn feasible_size(&self, n: u64) -> bool {
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let target = n - 1;
        if target % self.span() != 0 {
            return false;
        }
        if n > 4096 {
            return true;
        }
        // fewest summands (from the positive support) reaching each total
        let t = target as usize;
        let mut best = vec![u64::MAX; t + 1];
        best[0] = 0;
        for s in 1..=t {
            for j in 1..=s {
                if self.pmf(j as u64) > 0.0 && best[s - j] != u64::MAX {
                    best[s] = best[s].min(best[s - j] + 1);
                }
            }
        }
        best[t] <= n
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}
