//! Conditioned walks with negative drift against the one-big-jump coupling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{ks_one_sample, EmpiricalLaw};
use crate::error::Result;
use crate::rng::RandomSource;
use crate::walk::{
    check_gn, empirical_tv, sample_conditioned_until_passage, sample_conditioned_walk, Binning, ConditionedSampler,
    CoupledSampler, TailTable, WalkLaw,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CouplingCheck {
    pub n: u64,
    pub window: usize,
    pub samples: usize,
    pub bins: Binning,
    /// binned TV between the first `window` increments of `W^(n)` and `Z^(n)`
    pub tv: f64,
    /// frequency of the one-big-jump event under `Z^(n)`
    pub gn_freq: f64,
}

/// Increments below `cap` kept exactly, then `[cap, ⌈γn⌉)` and `[⌈γn⌉, ∞)` lumped.
pub fn coupling_bins(law: &WalkLaw, n: u64, cap: i64) -> Binning {
    Binning { lo: law.min_step(), cap, big: law.big_jump_threshold(n).max(cap + 1) }
}

const CHUNK: usize = 4096;

pub fn coupling_check(
    law: &WalkLaw,
    n: u64,
    window: usize,
    cap: i64,
    samples: usize,
    gn_samples: usize,
    table: &TailTable,
    src: &RandomSource,
) -> Result<CouplingCheck> {
    let bins = coupling_bins(law, n, cap);
    let cond = ConditionedSampler::new(law, n as usize - 1);
    let chunks = samples.div_ceil(CHUNK);
    let keys = |label: &str, coupled: bool| -> Result<Vec<Vec<u32>>> {
        let s = src.named(label);
        let out: Vec<Vec<Vec<u32>>> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = s.child(c as u64).rng();
                let mut z = CoupledSampler::new(law, n, Some(table))?;
                let m = CHUNK.min(samples - c * CHUNK);
                (0..m)
                    .map(|_| {
                        let inc = if coupled {
                            z.sample(window, &mut rng)?.path.increments()
                        } else {
                            sample_conditioned_walk(&cond, window, u64::MAX, &mut rng)?.increments()
                        };
                        Ok(bins.key(&inc, window))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(out.concat())
    };
    let w = keys("conditioned", false)?;
    let z = keys("coupled", true)?;
    let tv = empirical_tv(&w, &z);
    let gs = src.named("good-event");
    let hits: usize = (0..gn_samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| -> Result<usize> {
            let mut rng = gs.child(c as u64).rng();
            let mut z = CoupledSampler::new(law, n, Some(table))?;
            let m = CHUNK.min(gn_samples - c * CHUNK);
            let mut k = 0;
            for _ in 0..m {
                if check_gn(&z.sample(n as usize, &mut rng)?.path, n as usize, law.gamma()) {
                    k += 1;
                }
            }
            Ok(k)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(CouplingCheck { n, window, samples, bins, tv, gn_freq: hits as f64 / gn_samples.max(1) as f64 })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PassageCheck {
    pub n: u64,
    pub zeta_over_n: EmpiricalLaw,
    /// KS distance from `J/γ`, `P(J/γ ≤ x) = 1 − x^{−β}` on `x ≥ 1`
    pub ks: f64,
}

/// `ζ/n` for the walk conditioned on `ζ ≥ n`, against `J/γ`.
pub fn first_passage_check(law: &WalkLaw, n: u64, replicates: usize, src: &RandomSource) -> Result<PassageCheck> {
    let sampler = ConditionedSampler::new(law, n as usize - 1);
    let beta = law.beta().unwrap_or(f64::INFINITY);
    let xs: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = src.child(i as u64).rng();
            let (_, z) = sample_conditioned_until_passage(&sampler, usize::MAX, u64::MAX, &mut rng)?;
            Ok(z.expect("uncapped") as f64 / n as f64)
        })
        .collect::<Result<_>>()?;
    let ks = ks_one_sample(&xs, |x| if x <= 1.0 { 0.0 } else { 1.0 - x.powf(-beta) });
    Ok(PassageCheck { n, zeta_over_n: EmpiricalLaw::from_samples(xs), ks })
}
