//! Integer random walks with negative drift and a heavy upper tail.
//!
//! Increments are `X = K − shift` with `K` drawn from an [`OffspringLaw`]; the
//! tree case is `shift = 1`, where `W` is the Łukasiewicz path of a BGW tree.

use std::collections::BTreeMap;

use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::OffspringLaw;

#[derive(Clone, Debug)]
pub struct WalkLaw {
    law: OffspringLaw,
    shift: u64,
}

impl WalkLaw {
    /// Łukasiewicz increments `K − 1`.
    pub fn tree(law: OffspringLaw) -> Self {
        WalkLaw { law, shift: 1 }
    }

    pub fn with_shift(law: OffspringLaw, shift: u64) -> Result<Self> {
        if shift == 0 || law.mean() >= shift as f64 {
            return Err(Error::InvalidLaw(format!(
                "increments need negative drift (mean {} vs shift {shift})",
                law.mean()
            )));
        }
        Ok(WalkLaw { law, shift })
    }

    pub fn offspring(&self) -> &OffspringLaw {
        &self.law
    }

    pub fn shift(&self) -> u64 {
        self.shift
    }

    pub fn min_step(&self) -> i64 {
        -(self.shift as i64)
    }

    /// `γ = −E[X]`.
    pub fn gamma(&self) -> f64 {
        self.shift as f64 - self.law.mean()
    }

    pub fn beta(&self) -> Option<f64> {
        self.law.tail_exponent()
    }

    pub fn max_step(&self) -> Option<i64> {
        self.law.max_support().map(|k| k as i64 - self.shift as i64)
    }

    pub fn pmf(&self, x: i64) -> f64 {
        let k = x + self.shift as i64;
        if k < 0 { 0.0 } else { self.law.pmf(k as u64) }
    }

    /// `P(X ≥ x)`.
    pub fn sf(&self, x: i64) -> f64 {
        let k = x + self.shift as i64;
        if k <= 0 { 1.0 } else { self.law.sf(k as u64) }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.law.sample(rng) as i64 - self.shift as i64
    }

    /// Draw from `X | X ≥ x`.
    pub fn sample_at_least<R: Rng + ?Sized>(&self, x: i64, rng: &mut R) -> i64 {
        let k = x + self.shift as i64;
        if k <= 0 {
            self.sample(rng)
        } else {
            self.law.sample_at_least(k as u64, rng) as i64 - self.shift as i64
        }
    }

    /// The smallest integer `≥ γn`.
    pub fn big_jump_threshold(&self, n: u64) -> i64 {
        (self.gamma() * n as f64 - 1e-9).ceil() as i64
    }
}

/// Trajectory `W_0..W_T` with `ζ = inf{i ≥ 1 : W_i < 0}` when observed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkPath {
    pub values: Vec<i64>,
    pub zeta: Option<usize>,
}

impl WalkPath {
    pub fn from_increments(inc: &[i64]) -> Self {
        let mut values = Vec::with_capacity(inc.len() + 1);
        values.push(0);
        let mut w = 0;
        let mut zeta = None;
        for (i, &x) in inc.iter().enumerate() {
            w += x;
            values.push(w);
            if w < 0 && zeta.is_none() {
                zeta = Some(i + 1);
            }
        }
        WalkPath { values, zeta }
    }

    pub fn increments(&self) -> Vec<i64> {
        self.values.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

pub fn sample_free_increments<R: Rng + ?Sized>(law: &WalkLaw, steps: usize, rng: &mut R) -> Vec<i64> {
    (0..steps).map(|_| law.sample(rng)).collect()
}

pub fn sample_free_walk<R: Rng + ?Sized>(law: &WalkLaw, horizon: usize, rng: &mut R) -> WalkPath {
    WalkPath::from_increments(&sample_free_increments(law, horizon, rng))
}

fn log_sum_exp(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// Exact sampler for the first `m` increments conditioned on `W_1, …, W_m ≥ 0`.
///
/// Proposal is a two-part mixture: with probability `1 − ε` one uniformly placed
/// step is drawn from `X | X ≥ a` and the others freely; with probability `ε` all
/// steps come from the law restricted to `X < a` and exponentially tilted by `θ`.
/// Acceptance probabilities `1/N` (with `N` the number of steps `≥ a`) and
/// `e^(−θW_m)` make the output exact.
#[derive(Clone, Debug)]
pub struct ConditionedSampler {
    law: WalkLaw,
    m: usize,
    a: i64,
    eps: f64,
    theta: f64,
    tilted: Option<WeightedAliasIndex<f64>>,
    acceptance_bound: f64,
}

impl ConditionedSampler {
    pub fn new(law: &WalkLaw, m: usize) -> Self {
        let mut best: Option<ConditionedSampler> = None;
        if m == 0 {
            return ConditionedSampler {
                law: law.clone(),
                m,
                a: 1,
                eps: 0.0,
                theta: 0.0,
                tilted: None,
                acceptance_bound: 1.0,
            };
        }
        let upper = match law.max_step() {
            Some(k) => k + 1,
            None => ((2.0 * law.gamma() * m as f64).ceil() as i64 + 2).max(2),
        };
        let mut a = 1i64;
        let mut cands = Vec::new();
        while a <= upper {
            cands.push(a);
            a = ((a as f64 * 1.15).ceil() as i64).max(a + 1);
        }
        cands.push(upper);
        for a in cands {
            let s = Self::with_threshold(law, m, a);
            let cost = s.acceptance_bound.ln();
            if best.as_ref().is_none_or(|b| cost < b.acceptance_bound.ln()) {
                best = Some(s);
            }
        }
        best.unwrap()
    }

    pub fn with_threshold(law: &WalkLaw, m: usize, a: i64) -> Self {
        let lo = law.min_step();
        let p_a = law.sf(a);
        // log M(θ) for the law restricted to [lo, a)
        let log_m = |theta: f64| log_sum_exp((lo..a).filter_map(|x| {
            let p = law.pmf(x);
            (p > 0.0).then(|| p.ln() + theta * x as f64)
        }));
        let (mut l, mut r) = (0.0f64, 20.0f64);
        for _ in 0..100 {
            let x1 = l + (r - l) / 3.0;
            let x2 = r - (r - l) / 3.0;
            if log_m(x1) <= log_m(x2) { r = x2 } else { l = x1 }
        }
        let theta = if log_m(0.5 * (l + r)) < log_m(0.0) { 0.5 * (l + r) } else { 0.0 };
        let lm = log_m(theta);
        let log_b = m as f64 * lm;
        let log_a = if p_a > 0.0 { (m as f64).ln() + p_a.ln() } else { f64::NEG_INFINITY };
        // ε/(1−ε) = M^m/(m p_a)
        let eps = if log_a == f64::NEG_INFINITY {
            1.0
        } else {
            1.0 / (1.0 + (log_a - log_b).exp())
        };
        let log_bound = log_sum_exp([log_a, log_b].into_iter());
        let tilted = if eps > 0.0 {
            let w: Vec<f64> = (lo..a).map(|x| {
                let p = law.pmf(x);
                if p > 0.0 { (p.ln() + theta * x as f64 - lm).exp() } else { 0.0 }
            }).collect();
            WeightedAliasIndex::new(w).ok()
        } else {
            None
        };
        ConditionedSampler {
            law: law.clone(),
            m,
            a,
            eps,
            theta,
            tilted,
            acceptance_bound: log_bound.exp(),
        }
    }

    pub fn threshold(&self) -> i64 {
        self.a
    }

    /// `P(accept) = P(ζ > m) / bound`.
    pub fn acceptance_bound(&self) -> f64 {
        self.acceptance_bound
    }

    /// Returns the increments and the number of attempts used.
    pub fn sample<R: Rng + ?Sized>(&self, max_attempts: u64, rng: &mut R) -> Result<(Vec<i64>, u64)> {
        let m = self.m;
        let mut inc = Vec::with_capacity(m);
        if m == 0 {
            return Ok((inc, 1));
        }
        let lo = self.law.min_step();
        for attempt in 1..=max_attempts {
            inc.clear();
            let mut w = 0i64;
            let mut ok = true;
            if rng.random::<f64>() < self.eps {
                let t = self.tilted.as_ref().unwrap();
                for _ in 0..m {
                    let x = lo + t.sample(rng) as i64;
                    w += x;
                    inc.push(x);
                    if w < 0 {
                        ok = false;
                        break;
                    }
                }
                if ok && rng.random::<f64>() < (-self.theta * w as f64).exp() {
                    return Ok((inc, attempt));
                }
            } else {
                let j = rng.random_range(0..m);
                let mut big = 0u64;
                for i in 0..m {
                    let x = if i == j {
                        self.law.sample_at_least(self.a, rng)
                    } else {
                        self.law.sample(rng)
                    };
                    if x >= self.a {
                        big += 1;
                    }
                    w += x;
                    inc.push(x);
                    if w < 0 {
                        ok = false;
                        break;
                    }
                }
                if ok && (big == 1 || rng.random::<f64>() * (big as f64) < 1.0) {
                    return Ok((inc, attempt));
                }
            }
        }
        Err(Error::BudgetExhausted { attempts: max_attempts })
    }
}

/// Plain rejection: resample until `W_1..W_m ≥ 0`.
pub fn sample_nonneg_prefix_naive<R: Rng + ?Sized>(
    law: &WalkLaw,
    m: usize,
    max_attempts: u64,
    rng: &mut R,
) -> Result<(Vec<i64>, u64)> {
    let mut inc = Vec::with_capacity(m);
    'outer: for attempt in 1..=max_attempts {
        inc.clear();
        let mut w = 0;
        for _ in 0..m {
            let x = law.sample(rng);
            w += x;
            inc.push(x);
            if w < 0 {
                continue 'outer;
            }
        }
        return Ok((inc, attempt));
    }
    Err(Error::BudgetExhausted { attempts: max_attempts })
}

/// `(W_i : 0 ≤ i ≤ horizon)` under `P(· | ζ ≥ n)`.
pub fn sample_conditioned_walk<R: Rng + ?Sized>(
    sampler: &ConditionedSampler,
    horizon: usize,
    max_attempts: u64,
    rng: &mut R,
) -> Result<WalkPath> {
    let (mut inc, _) = sampler.sample(max_attempts, rng)?;
    while inc.len() < horizon {
        inc.push(sampler.law.sample(rng));
    }
    inc.truncate(horizon);
    Ok(WalkPath::from_increments(&inc))
}

/// Conditioned walk continued freely until it first goes negative (at most `cap` steps).
pub fn sample_conditioned_until_passage<R: Rng + ?Sized>(
    sampler: &ConditionedSampler,
    cap: usize,
    max_attempts: u64,
    rng: &mut R,
) -> Result<(Vec<i64>, Option<usize>)> {
    let (mut inc, _) = sampler.sample(max_attempts, rng)?;
    let mut w: i64 = inc.iter().sum();
    while w >= 0 {
        if inc.len() >= cap {
            return Ok((inc, None));
        }
        let x = sampler.law.sample(rng);
        w += x;
        inc.push(x);
    }
    let z = inc.len();
    Ok((inc, Some(z)))
}

/// Table of `P(ζ ≥ j)` for `0 ≤ j ≤ jmax`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TailTable {
    pub p: Vec<f64>,
    /// half-widths of 95% Wilson intervals (Monte Carlo tables) or the rigorous truncation bound.
    pub err: Vec<f64>,
    pub mean_zeta: f64,
    pub exact: bool,
}

impl TailTable {
    pub fn jmax(&self) -> usize {
        self.p.len() - 1
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("j,p_zeta_ge_j,err\n");
        for (j, (p, e)) in self.p.iter().zip(&self.err).enumerate() {
            s.push_str(&format!("{j},{p:e},{e:e}\n"));
        }
        s
    }
}

/// Repeated linear convolution against a fixed kernel.
pub(crate) struct FftConv {
    len: usize,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    kernel: Vec<Complex<f64>>,
}

impl FftConv {
    pub(crate) fn new(kernel: &[f64], signal_len: usize) -> Self {
        let len = (kernel.len() + signal_len - 1).next_power_of_two();
        let mut planner = FftPlanner::<f64>::new();
        let fwd = planner.plan_fft_forward(len);
        let inv = planner.plan_fft_inverse(len);
        let mut k: Vec<Complex<f64>> = kernel.iter().map(|&x| Complex::new(x, 0.0)).collect();
        k.resize(len, Complex::new(0.0, 0.0));
        fwd.process(&mut k);
        FftConv { len, fwd, inv, kernel: k }
    }

    /// Full linear convolution; negative round-off is clipped to zero.
    pub(crate) fn apply(&self, a: &[f64]) -> Vec<f64> {
        let mut fa: Vec<Complex<f64>> = a.iter().map(|&x| Complex::new(x, 0.0)).collect();
        fa.resize(self.len, Complex::new(0.0, 0.0));
        self.fwd.process(&mut fa);
        for (x, y) in fa.iter_mut().zip(&self.kernel) {
            *x *= y;
        }
        self.inv.process(&mut fa);
        let scale = 1.0 / self.len as f64;
        fa.iter().map(|z| (z.re * scale).max(0.0)).collect()
    }
}

/// Dynamic program for `P(ζ ≥ j)`, `j ≤ jmax`, on the value range `[0, cap)`.
///
/// Mass jumping to `cap` or above is lumped into an overflow state that is counted
/// as surviving; its total is the reported error bound.
pub fn zeta_tail_dp(law: &WalkLaw, jmax: usize, cap: usize) -> Result<TailTable> {
    let lo = law.min_step();
    let s = (-lo) as usize;
    // kernel[x + s] = P(X = x) for x in [lo, cap)
    let kernel: Vec<f64> = (lo..cap as i64).map(|x| law.pmf(x)).collect();
    let exceed: Vec<f64> = (0..cap).map(|v| law.sf(cap as i64 - v as i64)).collect();
    let direct = law.max_step().is_some_and(|k| (k as usize + s) * cap < 4_000_000);
    let fft = (!direct).then(|| FftConv::new(&kernel, cap));
    let mut dist = vec![0.0; cap];
    dist[0] = 1.0;
    let mut overflow = 0.0;
    let mut p = vec![1.0, 1.0];
    let mut err = vec![0.0, 0.0];
    for _ in 2..=jmax {
        let mut next = vec![0.0; cap];
        let mut spill = 0.0;
        if direct {
            let hi = law.max_step().unwrap();
            for (v, &d) in dist.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                for x in lo..=hi {
                    let t = v as i64 + x;
                    if t >= 0 && (t as usize) < cap {
                        next[t as usize] += d * kernel[(x - lo) as usize];
                    }
                }
            }
        } else {
            let c = fft.as_ref().unwrap().apply(&dist);
            next.copy_from_slice(&c[s..s + cap]);
        }
        for (v, &d) in dist.iter().enumerate() {
            spill += d * exceed[v];
        }
        overflow += spill;
        dist = next;
        let surv: f64 = dist.iter().sum::<f64>() + overflow;
        p.push(surv.min(1.0));
        err.push(overflow);
    }
    p.truncate(jmax + 1);
    err.truncate(jmax + 1);
    if overflow > 1e-9 {
        return Err(Error::CapTooSmall { bound: overflow });
    }
    let mean_zeta = zeta_mean(law, &p);
    Ok(TailTable { p, err, mean_zeta, exact: true })
}

/// `E[ζ]`: exactly `1/γ` for skip-free walks, else the table sum plus a tail estimate.
fn zeta_mean(law: &WalkLaw, p: &[f64]) -> f64 {
    if law.shift() == 1 {
        return 1.0 / law.gamma();
    }
    let s: f64 = p[1..].iter().sum();
    let jmax = p.len() - 1;
    let mut rest = 0.0;
    let ratio = p[jmax] / (law.sf(law.big_jump_threshold(jmax as u64))).max(f64::MIN_POSITIVE);
    for j in jmax + 1..jmax * 64 {
        rest += ratio * law.sf(law.big_jump_threshold(j as u64));
    }
    s + rest
}

/// Monte Carlo table of `P(ζ ≥ j)` from `paths` independent walks.
pub fn zeta_tail_mc<R: Rng + ?Sized>(law: &WalkLaw, jmax: usize, paths: u64, rng: &mut R) -> TailTable {
    let mut count = vec![0u64; jmax + 2];
    for _ in 0..paths {
        let mut w = 0i64;
        let mut i = 0usize;
        while w >= 0 && i <= jmax {
            i += 1;
            w += law.sample(rng);
        }
        // ζ = i if w < 0, else ζ > jmax
        count[i.min(jmax + 1)] += 1;
    }
    let nf = paths as f64;
    let mut p = vec![1.0; jmax + 1];
    let mut err = vec![0.0; jmax + 1];
    let mut dead = 0u64;
    for j in 1..=jmax {
        dead += count[j - 1];
        let k = (paths - dead) as f64;
        let ph = k / nf;
        let z = 1.96f64;
        let centre = (ph + z * z / (2.0 * nf)) / (1.0 + z * z / nf);
        let half = z * (ph * (1.0 - ph) / nf + z * z / (4.0 * nf * nf)).sqrt() / (1.0 + z * z / nf);
        p[j] = ph;
        err[j] = (centre - ph).abs() + half;
    }
    let mean_zeta = zeta_mean(law, &p);
    TailTable { p, err, mean_zeta, exact: false }
}

/// Sampler for the coupled process `Z^(n)`.
#[derive(Clone, Debug)]
pub struct CoupledSampler {
    law: WalkLaw,
    n: u64,
    jump: i64,
    i_head: WeightedAliasIndex<f64>,
    i_head_len: usize,
    i_tail_mass: f64,
    i_tail: Option<WeightedAliasIndex<f64>>,
    prefix: BTreeMap<usize, ConditionedSampler>,
    table: TailTable,
}

/// A draw of `Z^(n)` with its jump index `I`.
#[derive(Clone, Debug)]
pub struct CoupledDraw {
    pub path: WalkPath,
    pub i: usize,
}

impl CoupledSampler {
    pub fn new(law: &WalkLaw, n: u64, table: Option<&TailTable>) -> Result<Self> {
        let table = table.ok_or(Error::TailTableMissing)?.clone();
        let e = table.mean_zeta;
        let w: Vec<f64> = table.p[1..].iter().map(|&p| p / e).collect();
        let head_mass: f64 = w.iter().sum();
        let i_tail_mass = (1.0 - head_mass).max(0.0);
        let i_head_len = w.len();
        let i_head = WeightedAliasIndex::new(w).map_err(|e| Error::InvalidLaw(e.to_string()))?;
        let ext: Vec<f64> = (i_head_len + 1..=100 * i_head_len)
            .map(|j| law.sf(law.big_jump_threshold(j as u64)))
            .collect();
        let i_tail = WeightedAliasIndex::new(ext).ok();
        Ok(CoupledSampler {
            law: law.clone(),
            n,
            jump: law.big_jump_threshold(n),
            i_head,
            i_head_len,
            i_tail_mass,
            i_tail,
            prefix: BTreeMap::new(),
            table,
        })
    }

    pub fn jump_threshold(&self) -> i64 {
        self.jump
    }

    /// `P(I > jmax)`, whose shape beyond the table follows `P(X ≥ γj)`.
    pub fn tail_mass(&self) -> f64 {
        self.i_tail_mass
    }

    pub fn sample_i<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        if self.i_tail_mass == 0.0 || rng.random::<f64>() >= self.i_tail_mass {
            return self.i_head.sample(rng) + 1;
        }
        // beyond the table the shape follows P(X ≥ γj)
        match &self.i_tail {
            Some(t) => self.i_head_len + 1 + t.sample(rng),
            None => self.i_head.sample(rng) + 1,
        }
    }

    fn prefix_sampler(&mut self, j: usize) -> &ConditionedSampler {
        let law = &self.law;
        self.prefix.entry(j).or_insert_with(|| ConditionedSampler::new(law, j - 1))
    }

    pub fn sample<R: Rng + ?Sized>(&mut self, horizon: usize, rng: &mut R) -> Result<CoupledDraw> {
        let i = self.sample_i(rng);
        let easy = self.table.p.get(i).is_some_and(|&p| p > 1e-3);
        let mut inc = if easy {
            sample_nonneg_prefix_naive(&self.law, i - 1, u64::MAX, rng)?.0
        } else {
            self.prefix_sampler(i).sample(u64::MAX, rng)?.0
        };
        inc.push(self.law.sample_at_least(self.jump, rng));
        while inc.len() < horizon {
            inc.push(self.law.sample(rng));
        }
        Ok(CoupledDraw { path: WalkPath::from_increments(&inc), i })
    }

    pub fn n(&self) -> u64 {
        self.n
    }
}

/// Exactly one step among the first `n` is `≥ γn`.
pub fn check_gn(path: &WalkPath, n: usize, gamma: f64) -> bool {
    let t = gamma * n as f64;
    path.values
        .windows(2)
        .take(n)
        .filter(|w| (w[1] - w[0]) as f64 >= t)
        .count()
        == 1
}

/// Per-coordinate binning: integers in `[lo, cap)` individually, `[cap, big)` and `[big, ∞)` lumped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Binning {
    pub lo: i64,
    pub cap: i64,
    pub big: i64,
}

impl Binning {
    pub fn bin(&self, x: i64) -> u32 {
        if x >= self.big {
            (self.cap - self.lo + 1) as u32
        } else if x >= self.cap {
            (self.cap - self.lo) as u32
        } else {
            (x.max(self.lo) - self.lo) as u32
        }
    }

    pub fn key(&self, inc: &[i64], window: usize) -> Vec<u32> {
        inc.iter().take(window).map(|&x| self.bin(x)).collect()
    }
}

/// Plug-in total variation between the empirical laws of two samples of keys.
pub fn empirical_tv<K: Ord>(a: &[K], b: &[K]) -> f64 {
    let mut h: BTreeMap<&K, (u64, u64)> = BTreeMap::new();
    for k in a {
        h.entry(k).or_default().0 += 1;
    }
    for k in b {
        h.entry(k).or_default().1 += 1;
    }
    let (na, nb) = (a.len() as u128, b.len() as u128);
    let diff: u128 = h.values().map(|&(x, y)| (x as u128 * nb).abs_diff(y as u128 * na)).sum();
    diff as f64 / (2 * na * nb) as f64
}

/// Binned TV of the first `window` increments of two path samplers.
pub fn windowed_tv<R, FA, FB>(mut a: FA, mut b: FB, window: usize, bins: Binning, samples: usize, rng: &mut R) -> f64
where
    R: Rng + ?Sized,
    FA: FnMut(&mut R) -> Vec<i64>,
    FB: FnMut(&mut R) -> Vec<i64>,
{
    let ka: Vec<Vec<u32>> = (0..samples).map(|_| bins.key(&a(rng), window)).collect();
    let kb: Vec<Vec<u32>> = (0..samples).map(|_| bins.key(&b(rng), window)).collect();
    empirical_tv(&ka, &kb)
}

/// Rescaled trajectory `W_{⌊tn⌋}/n` on `grid` and `ζ/n` for a walk conditioned on `ζ ≥ n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FirstPassageScaling {
    pub grid: Vec<f64>,
    pub profile: Vec<f64>,
    pub zeta_over_n: f64,
}

pub fn first_passage_scaling<R: Rng + ?Sized>(
    sampler: &ConditionedSampler,
    grid: &[f64],
    max_attempts: u64,
    rng: &mut R,
) -> Result<FirstPassageScaling> {
    let n = sampler.m + 1;
    let cap = (n as f64 * 1e6) as usize;
    let (inc, zeta) = sample_conditioned_until_passage(sampler, cap, max_attempts, rng)?;
    let path = WalkPath::from_increments(&inc);
    let zeta = zeta.ok_or(Error::BudgetExhausted { attempts: max_attempts })?;
    let profile = grid
        .iter()
        .map(|&t| {
            let i = (t * n as f64).floor() as usize;
            path.values.get(i).copied().unwrap_or(0).max(0) as f64 / n as f64
        })
        .collect();
    Ok(FirstPassageScaling { grid: grid.to_vec(), profile, zeta_over_n: zeta as f64 / n as f64 })
}

/// `η_n = sqrt(n·E|W_n + γn|)`, estimated from `reps` free walks.
pub fn eta_n<R: Rng + ?Sized>(law: &WalkLaw, n: usize, reps: usize, rng: &mut R) -> f64 {
    let g = law.gamma();
    let mut s = 0.0;
    for _ in 0..reps {
        let w: i64 = (0..n).map(|_| law.sample(rng)).sum();
        s += (w as f64 + g * n as f64).abs();
    }
    (n as f64 * s / reps as f64).sqrt()
}
