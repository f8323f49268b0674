//! Looptrees: every vertex with `k ≥ 1` children becomes a cycle through itself
//! and its children.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::tree::PlaneTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoopKind {
    Loop,
    LoopBar,
}

/// Multigraph `Loop(τ)` or `Loop-bar(τ)` with a CSR view of its simple quotient.
#[derive(Clone, Debug)]
pub struct LoopGraph {
    pub kind: LoopKind,
    /// `(a, b, multiplicity)` with `a ≤ b`; `a == b` marks a self-loop.
    pub edges: Vec<(u32, u32, u32)>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    /// looptree vertex of every tree vertex
    pub class_of: Vec<u32>,
    /// smallest tree vertex in each looptree vertex
    pub origin: Vec<u32>,
    max_degree: u32,
    argmax: usize,
}

pub const UNREACHED: u32 = u32::MAX;

fn find(p: &mut [u32], mut x: u32) -> u32 {
    while p[x as usize] != x {
        let g = p[p[x as usize] as usize];
        p[x as usize] = g;
        x = g;
    }
    x
}

impl LoopGraph {
    pub fn build_loop(t: &PlaneTree) -> Self {
        Self::build(t, LoopKind::Loop)
    }

    pub fn build_loopbar(t: &PlaneTree) -> Self {
        Self::build(t, LoopKind::LoopBar)
    }

    pub fn build(t: &PlaneTree, kind: LoopKind) -> Self {
        let n = t.len();
        let sizes = t.subtree_sizes();
        let mut raw: Vec<(u32, u32)> = Vec::new();
        let mut uf: Vec<u32> = (0..n as u32).collect();
        for u in 0..n {
            if t.degree(u) == 0 {
                continue;
            }
            let ch = t.children_with(u, &sizes);
            let k = ch.len();
            raw.push((u as u32, ch[0] as u32));
            for w in ch.windows(2) {
                raw.push((w[0] as u32, w[1] as u32));
            }
            match kind {
                LoopKind::Loop => raw.push((ch[k - 1] as u32, u as u32)),
                LoopKind::LoopBar => {
                    let a = find(&mut uf, u as u32);
                    let b = find(&mut uf, ch[k - 1] as u32);
                    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                    uf[hi as usize] = lo;
                }
            }
        }
        // relabel classes in order of their smallest member
        let mut class_of = vec![0u32; n];
        let mut origin = Vec::new();
        let mut label = vec![u32::MAX; n];
        for v in 0..n {
            let r = find(&mut uf, v as u32) as usize;
            if label[r] == u32::MAX {
                label[r] = origin.len() as u32;
                origin.push(v as u32);
            }
            class_of[v] = label[r];
        }
        let nv = origin.len();
        let mut mult: BTreeMap<(u32, u32), u32> = BTreeMap::new();
        for (a, b) in raw {
            let (x, y) = (class_of[a as usize], class_of[b as usize]);
            *mult.entry((x.min(y), x.max(y))).or_default() += 1;
        }
        let edges: Vec<(u32, u32, u32)> = mult.into_iter().map(|((a, b), m)| (a, b, m)).collect();
        let mut deg = vec![0usize; nv + 1];
        for &(a, b, _) in &edges {
            if a != b {
                deg[a as usize] += 1;
                deg[b as usize] += 1;
            }
        }
        let mut offsets = vec![0usize; nv + 1];
        for v in 0..nv {
            offsets[v + 1] = offsets[v] + deg[v];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; offsets[nv]];
        for &(a, b, _) in &edges {
            if a != b {
                targets[fill[a as usize]] = b;
                fill[a as usize] += 1;
                targets[fill[b as usize]] = a;
                fill[b as usize] += 1;
            }
        }
        let (mut max_degree, mut argmax) = (0u32, 0usize);
        for (v, &k) in t.degrees().iter().enumerate() {
            if k > max_degree {
                max_degree = k;
                argmax = v;
            }
        }
        LoopGraph { kind, edges, offsets, targets, class_of, origin, max_degree, argmax }
    }

    pub fn vertex_count(&self) -> usize {
        self.origin.len()
    }

    /// Number of edges of the multigraph, self-loops included.
    pub fn edge_count(&self) -> u64 {
        self.edges.iter().map(|e| e.2 as u64).sum()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn root(&self) -> usize {
        self.class_of[0] as usize
    }

    /// Multi-source BFS distances on the simple quotient.
    pub fn bfs_from(&self, sources: &[usize]) -> Vec<u32> {
        let mut d = vec![UNREACHED; self.vertex_count()];
        let mut q = VecDeque::with_capacity(self.vertex_count());
        for &s in sources {
            if d[s] != 0 {
                d[s] = 0;
                q.push_back(s as u32);
            }
        }
        while let Some(v) = q.pop_front() {
            let dv = d[v as usize] + 1;
            for &w in self.neighbors(v as usize) {
                if d[w as usize] == UNREACHED {
                    d[w as usize] = dv;
                    q.push_back(w);
                }
            }
        }
        d
    }

    pub fn bfs(&self, source: usize) -> Vec<u32> {
        self.bfs_from(&[source])
    }

    /// One BFS per source, run in parallel.
    pub fn bfs_many(&self, sources: &[usize]) -> Vec<Vec<u32>> {
        sources.par_iter().map(|&s| self.bfs(s)).collect()
    }

    /// Distance between two looptree vertices.
    pub fn dist(&self, a: usize, b: usize) -> u32 {
        if a == b {
            return 0;
        }
        self.bfs(a)[b]
    }

    /// Distance between the images of tree vertices `u` and `v`.
    pub fn tree_dist(&self, u: usize, v: usize) -> u32 {
        self.dist(self.class_of[u] as usize, self.class_of[v] as usize)
    }

    /// `H°_i = d°(∅, u_i)` in lexicographic order.
    pub fn profile_hcirc(&self) -> Vec<u32> {
        let d = self.bfs(self.root());
        self.class_of.iter().map(|&c| d[c as usize]).collect()
    }

    /// Length of the largest cycle and the tree vertex carrying it (smallest index on ties).
    /// `(0, 0)` for a single vertex.
    pub fn largest_cycle(&self) -> (u64, usize) {
        if self.max_degree == 0 {
            return (0, 0);
        }
        let len = match self.kind {
            LoopKind::Loop => self.max_degree as u64 + 1,
            LoopKind::LoopBar => self.max_degree as u64,
        };
        (len, self.argmax)
    }

    /// CSV edge list `source,target,multiplicity`.
    pub fn to_edge_csv(&self) -> String {
        let mut s = String::from("source,target,multiplicity\n");
        for &(a, b, m) in &self.edges {
            s.push_str(&format!("{a},{b},{m}\n"));
        }
        s
    }
}

/// `H°` computed from the tree alone: the `j`-th of `k` children sits at distance
/// `min(j, k+1−j)` (Loop) or `min(j, k−j)` (Loop-bar) beyond its parent.
pub fn hcirc_from_tree(t: &PlaneTree, kind: LoopKind) -> Vec<u32> {
    let n = t.len();
    let sizes = t.subtree_sizes();
    let mut h = vec![0u32; n];
    for u in 0..n {
        let k = t.degree(u);
        let mut c = u + 1;
        for j in 1..=k {
            let step = match kind {
                LoopKind::Loop => j.min(k + 1 - j),
                LoopKind::LoopBar => j.min(k - j),
            };
            h[c] = h[u] + step;
            c += sizes[c] as usize;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tree(seq: &[u32]) -> PlaneTree {
        PlaneTree::from_degree_sequence(seq).unwrap()
    }

    #[test]
    fn single_vertex() {
        let t = PlaneTree::single();
        for g in [LoopGraph::build_loop(&t), LoopGraph::build_loopbar(&t)] {
            assert_eq!(g.vertex_count(), 1);
            assert_eq!(g.edge_count(), 0);
            assert_eq!(g.profile_hcirc(), vec![0]);
            assert_eq!(g.largest_cycle(), (0, 0));
        }
    }

    #[test]
    fn cherry() {
        let t = tree(&[2, 0, 0]);
        let g = LoopGraph::build_loop(&t);
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges, vec![(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
        let b = LoopGraph::build_loopbar(&t);
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.edges, vec![(0, 1, 2)]);
    }

    #[test]
    fn tau3() {
        let t = tree(&[2, 1, 0, 0]);
        let g = LoopGraph::build_loop(&t);
        assert_eq!(g.edges, vec![(0, 1, 1), (0, 3, 1), (1, 2, 2), (1, 3, 1)]);
        assert_eq!(g.tree_dist(0, 2), 2);
        assert_eq!(g.tree_dist(2, 3), 2);
        assert_eq!(g.profile_hcirc(), vec![0, 1, 2, 1]);
        assert_eq!(g.largest_cycle(), (3, 0));
        let b = LoopGraph::build_loopbar(&t);
        // 1 and 11 merge into a vertex with a self-loop; ∅ and 2 merge
        assert_eq!(b.vertex_count(), 2);
        assert_eq!(b.edges, vec![(0, 1, 2), (1, 1, 1)]);
    }

    #[test]
    fn star_cycle() {
        let mut seq = vec![6];
        seq.extend([0; 6]);
        let t = tree(&seq);
        let g = LoopGraph::build_loop(&t);
        assert_eq!(g.largest_cycle(), (7, 0));
        let h = g.profile_hcirc();
        for j in 1..=6u32 {
            assert_eq!(h[j as usize], j.min(7 - j));
        }
    }

    #[test]
    fn edge_csv() {
        let g = LoopGraph::build_loop(&tree(&[1, 0]));
        assert_eq!(g.to_edge_csv(), "source,target,multiplicity\n0,1,2\n");
    }
}
