//! Gromov–Hausdorff distances: exact search on small spaces, correspondence bounds
//! at scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::looptree::{LoopGraph, UNREACHED};
use crate::tree::PlaneTree;

pub const GH_EXACT_MAX: usize = 7;

/// A finite metric space given by a full matrix, or distances on sampled pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSample {
    pub points: Vec<u64>,
    matrix: Option<Vec<f64>>,
    pub pairs: Vec<(u32, u32, f64)>,
}

impl MetricSample {
    pub fn from_matrix(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidLaw("distance matrix must be square".into()));
        }
        let m = MetricSample { points: (0..n as u64).collect(), matrix: Some(rows.concat()), pairs: vec![] };
        m.validate(1e-12)?;
        Ok(m)
    }

    pub fn from_pairs(points: Vec<u64>, pairs: Vec<(u32, u32, f64)>) -> Self {
        MetricSample { points, matrix: None, pairs }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        match &self.matrix {
            Some(m) => m[i * self.len() + j],
            None => {
                if i == j {
                    return 0.0;
                }
                let (a, b) = (i.min(j) as u32, i.max(j) as u32);
                self.pairs
                    .iter()
                    .find(|p| (p.0.min(p.1), p.0.max(p.1)) == (a, b))
                    .map_or(f64::NAN, |p| p.2)
            }
        }
    }

    pub fn has_matrix(&self) -> bool {
        self.matrix.is_some()
    }

    /// Symmetry, zero diagonal, non-negativity and the triangle inequality on all stored triples.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let bad = |s: &str| Err(Error::InvalidLaw(format!("not a metric: {s}")));
        let Some(_) = &self.matrix else {
            if self.pairs.iter().any(|p| !(p.2 >= 0.0) || (p.0 == p.1 && p.2 != 0.0)) {
                return bad("pair distance");
            }
            return Ok(());
        };
        let n = self.len();
        for i in 0..n {
            if self.d(i, i) != 0.0 {
                return bad("diagonal");
            }
            for j in 0..n {
                let x = self.d(i, j);
                if !(x >= 0.0) || (x - self.d(j, i)).abs() > tol {
                    return bad("symmetry");
                }
                for k in 0..n {
                    if x > self.d(i, k) + self.d(k, j) + tol {
                        return bad("triangle inequality");
                    }
                }
            }
        }
        Ok(())
    }
}

struct Search<'a> {
    a: &'a MetricSample,
    b: &'a MetricSample,
    delta: f64,
}

impl Search<'_> {
    fn ok(&self, rel: &[(usize, usize)], x: usize, y: usize) -> bool {
        rel.iter().all(|&(p, q)| (self.a.d(p, x) - self.b.d(q, y)).abs() <= self.delta)
    }

    fn assign(&self, i: usize, rel: &mut Vec<(usize, usize)>) -> bool {
        if i == self.a.len() {
            return self.cover(0, rel);
        }
        for y in 0..self.b.len() {
            if self.ok(rel, i, y) {
                rel.push((i, y));
                if self.assign(i + 1, rel) {
                    return true;
                }
                rel.pop();
            }
        }
        false
    }

    fn cover(&self, y: usize, rel: &mut Vec<(usize, usize)>) -> bool {
        if y == self.b.len() {
            return true;
        }
        if rel.iter().any(|p| p.1 == y) {
            return self.cover(y + 1, rel);
        }
        for x in 0..self.a.len() {
            if self.ok(rel, x, y) {
                rel.push((x, y));
                if self.cover(y + 1, rel) {
                    return true;
                }
                rel.pop();
            }
        }
        false
    }
}

/// Exact `d_GH = ½·min dis(R)` over correspondences, for spaces of at most 7 points.
pub fn gh_exact_small(a: &MetricSample, b: &MetricSample) -> Result<f64> {
    for s in [a, b] {
        if s.len() > GH_EXACT_MAX || !s.has_matrix() {
            return Err(Error::TooLarge { size: s.len(), max: GH_EXACT_MAX });
        }
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::TooLarge { size: 0, max: GH_EXACT_MAX });
    }
    let mut cands = vec![0.0];
    for i in 0..a.len() {
        for j in 0..a.len() {
            for p in 0..b.len() {
                for q in 0..b.len() {
                    cands.push((a.d(i, j) - b.d(p, q)).abs());
                }
            }
        }
    }
    cands.sort_by(f64::total_cmp);
    cands.dedup();
    let feasible = |delta: f64| Search { a, b, delta }.assign(0, &mut Vec::new());
    // the largest candidate is always feasible
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(cands[mid]) { hi = mid } else { lo = mid + 1 }
    }
    Ok(cands[lo] / 2.0)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CircleBound {
    /// vertices on the largest cycle
    pub cycle_len: u64,
    /// largest graph distance from a vertex to that cycle
    pub max_dist: u32,
    pub distortion: f64,
    pub gh_bound: f64,
}

/// Upper bound on `d_GH((1/scale)·Loop(τ), j·𝕊₁)` from projecting every vertex to the
/// largest cycle and spreading the cycle evenly around the circle of length `j`.
pub fn circle_gh_bound(t: &PlaneTree, g: &LoopGraph, scale: f64, j: f64) -> CircleBound {
    let (len, v) = g.largest_cycle();
    let mut cyc: Vec<usize> = vec![g.class_of[v] as usize];
    cyc.extend(t.children(v).into_iter().map(|c| g.class_of[c] as usize));
    cyc.sort_unstable();
    cyc.dedup();
    let d = g.bfs_from(&cyc);
    let max_dist = d.iter().copied().filter(|&x| x != UNREACHED).max().unwrap_or(0);
    let l = len.max(1) as f64;
    let distortion = if len == 0 {
        // one point against a circle: every pair of circle points is matched to it
        j / 2.0
    } else {
        2.0 * max_dist as f64 / scale + (l / scale - j).abs() / 2.0 + j / l
    };
    CircleBound { cycle_len: len, max_dist, distortion, gh_bound: distortion / 2.0 }
}
