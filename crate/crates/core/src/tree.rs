//! Plane trees stored by their depth-first degree sequence.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const VERTEX_CAP: u64 = (1 << 31) - 1;
pub const NO_PARENT: u32 = u32::MAX;

/// Rooted ordered tree; vertices are numbered in lexicographic (depth-first) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaneTree {
    degrees: Vec<u32>,
    parent: Vec<u32>,
    depth: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodingPaths {
    pub lukasiewicz: Vec<i64>,
    pub height: Vec<u32>,
    pub contour: Vec<u32>,
}

/// Spine child counts `x_1..x_h` and 1-based spine positions `u_1..u_h`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TrunkSkeleton {
    pub child_counts: Vec<u64>,
    pub spine_pos: Vec<u64>,
}

impl TrunkSkeleton {
    pub fn h(&self) -> usize {
        self.child_counts.len()
    }

    /// `Λ = Σ(x_i − 1) + 1`.
    pub fn leaf_count(&self) -> u64 {
        self.child_counts.iter().map(|&x| x - 1).sum::<u64>() + 1
    }

    /// Realise the skeleton as a plane tree. Returns the tree and the index of the spine tip.
    pub fn to_tree(&self) -> (PlaneTree, usize) {
        let mut seq = Vec::new();
        let mut tip = 0;
        self.push_from(0, &mut seq, &mut tip);
        (PlaneTree::from_degree_sequence(&seq).expect("skeleton is a valid tree"), tip)
    }

    fn push_from(&self, i: usize, seq: &mut Vec<u32>, tip: &mut usize) {
        // iterative: left leaves, descend, then right leaves in reverse nesting order
        let h = self.h();
        for j in i..h {
            seq.push(self.child_counts[j] as u32);
            seq.extend(std::iter::repeat_n(0, (self.spine_pos[j] - 1) as usize));
        }
        *tip = seq.len();
        seq.push(0);
        for j in (i..h).rev() {
            seq.extend(std::iter::repeat_n(0, (self.child_counts[j] - self.spine_pos[j]) as usize));
        }
    }
}

impl PlaneTree {
    pub fn from_degree_sequence(seq: &[u32]) -> Result<Self> {
        let n = seq.len();
        if n == 0 {
            return Err(Error::NotAFirstPassagePath { index: 0 });
        }
        if n as u64 > VERTEX_CAP {
            return Err(Error::TreeTooLarge { cap: VERTEX_CAP });
        }
        let mut w: i64 = 0;
        for (i, &k) in seq.iter().enumerate() {
            w += k as i64 - 1;
            if (w < 0) != (i + 1 == n) {
                return Err(Error::NotAFirstPassagePath { index: i + 1 });
            }
        }
        Ok(Self::build_unchecked(seq.to_vec()))
    }

    fn build_unchecked(degrees: Vec<u32>) -> Self {
        let n = degrees.len();
        let mut parent = vec![NO_PARENT; n];
        let mut depth = vec![0u32; n];
        let mut stack: Vec<(u32, u32)> = Vec::new();
        for i in 0..n {
            if let Some(top) = stack.last_mut() {
                parent[i] = top.0;
                depth[i] = depth[top.0 as usize] + 1;
                top.1 -= 1;
                if top.1 == 0 {
                    stack.pop();
                }
            }
            if degrees[i] > 0 {
                stack.push((i as u32, degrees[i]));
            }
        }
        PlaneTree { degrees, parent, depth }
    }

    pub fn single() -> Self {
        Self::build_unchecked(vec![0])
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degrees[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        match self.parent[v] {
            NO_PARENT => None,
            p => Some(p as usize),
        }
    }

    pub fn parents(&self) -> &[u32] {
        &self.parent
    }

    /// Generation `|v|` of every vertex, i.e. the height process.
    pub fn depths(&self) -> &[u32] {
        &self.depth
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn leaf_count(&self) -> usize {
        self.degrees.iter().filter(|&&k| k == 0).count()
    }

    pub fn max_depth(&self) -> u32 {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Subtree sizes `|θ_v|`.
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let n = self.len();
        let mut size = vec![1u32; n];
        for v in (1..n).rev() {
            let p = self.parent[v] as usize;
            size[p] += size[v];
        }
        size
    }

    /// Children of `v` in order, given precomputed subtree sizes.
    pub fn children_with(&self, v: usize, sizes: &[u32]) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degrees[v] as usize);
        let mut c = v + 1;
        for _ in 0..self.degrees[v] {
            out.push(c);
            c += sizes[c] as usize;
        }
        out
    }

    pub fn children(&self, v: usize) -> Vec<usize> {
        self.children_with(v, &self.subtree_sizes())
    }

    /// Łukasiewicz path `W_0..W_n`.
    pub fn lukasiewicz(&self) -> Vec<i64> {
        let mut w = Vec::with_capacity(self.len() + 1);
        w.push(0);
        let mut x = 0i64;
        for &k in &self.degrees {
            x += k as i64 - 1;
            w.push(x);
        }
        w
    }

    /// Contour process of length `2(n−1)+1`.
    pub fn contour(&self) -> Vec<u32> {
        let n = self.len();
        let mut c = Vec::with_capacity(2 * n - 1);
        c.push(0);
        let mut cur = 0u32;
        for i in 1..n {
            let d = self.depth[i];
            while cur + 1 > d {
                cur -= 1;
                c.push(cur);
            }
            cur += 1;
            c.push(cur);
        }
        while cur > 0 {
            cur -= 1;
            c.push(cur);
        }
        c
    }

    pub fn coding_paths(&self) -> CodingPaths {
        CodingPaths {
            lukasiewicz: self.lukasiewicz(),
            height: self.depth.clone(),
            contour: self.contour(),
        }
    }

    /// `b(i) = 2i − H_i`, the contour time at which `u_i` is first visited.
    pub fn lex_to_contour_index(&self, i: usize) -> usize {
        2 * i - self.depth[i] as usize
    }

    /// Reverse the order of children everywhere. Returns the mirror tree and the
    /// map from old vertex indices to new ones.
    pub fn mirror(&self) -> (PlaneTree, Vec<usize>) {
        let n = self.len();
        let sizes = self.subtree_sizes();
        let mut seq = Vec::with_capacity(n);
        let mut map = vec![0usize; n];
        let mut stack = vec![0usize];
        while let Some(v) = stack.pop() {
            map[v] = seq.len();
            seq.push(self.degrees[v]);
            stack.extend(self.children_with(v, &sizes));
        }
        (Self::build_unchecked(seq), map)
    }

    /// The fringe subtree `θ_v`.
    pub fn subtree_at(&self, v: usize) -> PlaneTree {
        let s = self.subtree_sizes()[v] as usize;
        Self::build_unchecked(self.degrees[v..v + s].to_vec())
    }

    /// `Cut_v`: the tree with the descendants of `v` removed.
    pub fn cut_at(&self, v: usize) -> PlaneTree {
        let s = self.subtree_sizes()[v] as usize;
        let mut seq = Vec::with_capacity(self.len() - s + 1);
        seq.extend_from_slice(&self.degrees[..v]);
        seq.push(0);
        seq.extend_from_slice(&self.degrees[v + s..]);
        Self::build_unchecked(seq)
    }

    /// Strict ancestors of `v`, root first.
    pub fn ancestors(&self, v: usize) -> Vec<usize> {
        let mut a = Vec::with_capacity(self.depth[v] as usize);
        let mut x = v;
        while let Some(p) = self.parent(x) {
            a.push(p);
            x = p;
        }
        a.reverse();
        a
    }

    /// 1-based position of `c` among the children of its parent.
    pub fn child_position(&self, c: usize, sizes: &[u32]) -> u64 {
        let p = self.parent(c).expect("root has no position");
        let mut x = p + 1;
        let mut pos = 1;
        while x != c {
            x += sizes[x] as usize;
            pos += 1;
        }
        pos
    }

    pub fn trunk_of(&self, v: usize) -> Result<TrunkSkeleton> {
        self.trunk_of_with(v, &self.subtree_sizes())
    }

    pub fn trunk_of_with(&self, v: usize, sizes: &[u32]) -> Result<TrunkSkeleton> {
        if v == 0 {
            return Err(Error::RootHasNoTrunk);
        }
        let mut path = self.ancestors(v);
        path.push(v);
        let child_counts = path[..path.len() - 1].iter().map(|&a| self.degrees[a] as u64).collect();
        let spine_pos = path[1..].iter().map(|&c| self.child_position(c, sizes)).collect();
        Ok(TrunkSkeleton { child_counts, spine_pos })
    }

    pub fn mrca(&self, i: usize, j: usize) -> usize {
        let (mut a, mut b) = (i, j);
        while self.depth[a] > self.depth[b] {
            a = self.parent[a] as usize;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b] as usize;
        }
        while a != b {
            a = self.parent[a] as usize;
            b = self.parent[b] as usize;
        }
        a
    }

    pub fn is_ancestor(&self, a: usize, v: usize) -> bool {
        let mut x = v;
        while self.depth[x] > self.depth[a] {
            x = self.parent[x] as usize;
        }
        x == a
    }

    /// Number of children of strict ancestors of `v` lying strictly to the right of
    /// the ancestral line. Equals `W_v`.
    pub fn right_branching_count(&self, v: usize, sizes: &[u32]) -> u64 {
        let mut r = 0;
        let mut x = v;
        while let Some(p) = self.parent(x) {
            r += self.degrees[p] as u64 - self.child_position(x, sizes);
            x = p;
        }
        r
    }

    /// Neveu word of `v`, `∅` for the root; indices above 9 are dot-separated.
    pub fn neveu_word(&self, v: usize) -> String {
        if v == 0 {
            return "∅".to_string();
        }
        let sizes = self.subtree_sizes();
        let mut path = self.ancestors(v);
        path.push(v);
        let pos: Vec<u64> = path[1..].iter().map(|&c| self.child_position(c, &sizes)).collect();
        let sep = if pos.iter().any(|&p| p > 9) { "." } else { "" };
        let mut s = String::new();
        for (k, p) in pos.iter().enumerate() {
            if k > 0 {
                s.push_str(sep);
            }
            write!(s, "{p}").unwrap();
        }
        s
    }

    pub fn write_dsv1<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.len())?;
        let mut line = String::with_capacity(self.len() * 2);
        for (i, k) in self.degrees.iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            write!(line, "{k}").unwrap();
        }
        writeln!(w, "{line}")?;
        Ok(())
    }

    pub fn to_dsv1(&self) -> String {
        let mut buf = Vec::new();
        self.write_dsv1(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    pub fn read_dsv1<R: BufRead>(r: R) -> Result<PlaneTree> {
        let mut lines = r.lines();
        let first = lines.next().ok_or_else(|| Error::Parse("missing size line".into()))??;
        let n: usize = first.trim().parse().map_err(|e| Error::Parse(format!("size line: {e}")))?;
        let second = lines.next().ok_or_else(|| Error::Parse("missing degree line".into()))??;
        let seq: Vec<u32> = second
            .split_ascii_whitespace()
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("child count {t:?}: {e}"))))
            .collect::<Result<_>>()?;
        if seq.len() != n {
            return Err(Error::Parse(format!("expected {n} child counts, found {}", seq.len())));
        }
        PlaneTree::from_degree_sequence(&seq)
    }

    pub fn from_dsv1(s: &str) -> Result<PlaneTree> {
        Self::read_dsv1(s.as_bytes())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tau3() -> PlaneTree {
        PlaneTree::from_degree_sequence(&[2, 1, 0, 0]).unwrap()
    }

    #[test]
    fn reconstruct() {
        let t = tau3();
        assert_eq!(t.parents(), &[NO_PARENT, 0, 1, 0]);
        assert_eq!(t.children(0), vec![1, 3]);
        assert_eq!(t.neveu_word(2), "11");
        assert_eq!(t.neveu_word(3), "2");
        assert_eq!(PlaneTree::from_degree_sequence(&[0]).unwrap(), PlaneTree::single());
        assert!(matches!(
            PlaneTree::from_degree_sequence(&[1, 1, 0, 0]),
            Err(Error::NotAFirstPassagePath { index: 3 })
        ));
        assert!(matches!(
            PlaneTree::from_degree_sequence(&[2, 0]),
            Err(Error::NotAFirstPassagePath { index: 2 })
        ));
    }

    #[test]
    fn paths() {
        let p = tau3().coding_paths();
        assert_eq!(p.lukasiewicz, vec![0, 1, 1, 0, -1]);
        assert_eq!(p.height, vec![0, 1, 2, 1]);
        assert_eq!(p.contour, vec![0, 1, 2, 1, 0, 1, 0]);
        let s = PlaneTree::single().coding_paths();
        assert_eq!(s.lukasiewicz, vec![0, -1]);
        assert_eq!(s.contour, vec![0]);
        let cherry = PlaneTree::from_degree_sequence(&[2, 0, 0]).unwrap().coding_paths();
        assert_eq!(cherry.lukasiewicz, vec![0, 1, 0, -1]);
        assert_eq!(cherry.height, vec![0, 1, 1]);
        assert_eq!(cherry.contour, vec![0, 1, 0, 1, 0]);
    }

    #[test]
    fn contour_index() {
        let t = tau3();
        assert_eq!(t.lex_to_contour_index(0), 0);
        assert_eq!(t.lex_to_contour_index(2), 2);
        assert_eq!(t.lex_to_contour_index(3), 5);
    }

    #[test]
    fn mirror_tau3() {
        let (m, map) = tau3().mirror();
        assert_eq!(m.degrees(), &[2, 0, 1, 0]);
        assert_eq!(map, vec![0, 2, 3, 1]);
        assert_eq!(m.mirror().0, tau3());
    }

    #[test]
    fn cut_and_subtree() {
        let t = tau3();
        assert_eq!(t.subtree_at(0), t);
        assert_eq!(t.cut_at(0), PlaneTree::single());
        assert_eq!(t.subtree_at(1).degrees(), &[1, 0]);
        assert_eq!(t.cut_at(1).degrees(), &[2, 0, 0]);
    }

    #[test]
    fn trunks() {
        let t = tau3();
        let s = t.trunk_of(2).unwrap();
        assert_eq!(s.child_counts, vec![2, 1]);
        assert_eq!(s.spine_pos, vec![1, 1]);
        assert_eq!(s.leaf_count(), 2);
        let s = t.trunk_of(3).unwrap();
        assert_eq!((s.child_counts.clone(), s.spine_pos.clone()), (vec![2], vec![2]));
        assert_eq!(s.leaf_count(), 2);
        assert!(matches!(t.trunk_of(0), Err(Error::RootHasNoTrunk)));
        let chain = PlaneTree::from_degree_sequence(&[1, 1, 1, 0]).unwrap();
        let s = chain.trunk_of(3).unwrap();
        assert_eq!(s.child_counts, vec![1, 1, 1]);
        assert_eq!(s.spine_pos, vec![1, 1, 1]);
        assert_eq!(s.leaf_count(), 1);
    }

    #[test]
    fn skeleton_realisation() {
        let s = TrunkSkeleton { child_counts: vec![3, 2], spine_pos: vec![2, 1] };
        let (t, tip) = s.to_tree();
        assert_eq!(t.degrees(), &[3, 0, 2, 0, 0, 0]);
        assert_eq!(tip, 3);
        assert_eq!(t.trunk_of(tip).unwrap(), s);
        assert_eq!(t.leaf_count() as u64, s.leaf_count());
    }

    #[test]
    fn ancestry() {
        let t = tau3();
        assert_eq!(t.mrca(1, 2), 1);
        assert_eq!(t.mrca(2, 3), 0);
        assert_eq!(t.mrca(2, 2), 2);
        assert!(t.is_ancestor(1, 2));
        assert!(!t.is_ancestor(3, 2));
    }

    #[test]
    fn dsv1() {
        let t = tau3();
        let s = t.to_dsv1();
        assert_eq!(s, "4\n2 1 0 0\n");
        assert_eq!(PlaneTree::from_dsv1(&s).unwrap(), t);
        assert!(PlaneTree::from_dsv1("3\n2 0\n").is_err());
        assert!(PlaneTree::from_dsv1("x\n").is_err());
    }
}
