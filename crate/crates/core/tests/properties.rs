use approx::assert_relative_eq;
use proptest::prelude::*;

use looplab::lab::constants::bn_values;
use looplab::lab::exact::{kemperman_check, kemperman_forest_check};
use looplab::lab::gh::{gh_exact_small, MetricSample};
use looplab::lab::stats::EmpiricalLaw;
use looplab::looptree::{hcirc_from_tree, LoopGraph, LoopKind};
use looplab::sampling::{sample_bgw_exact_n, sample_trunk_star};
use looplab::{LawSpec, OffspringLaw, PlaneTree, RandomSource};

/// Any prefix of child counts, closed off with leaves once it runs out.
fn tree_from_counts(ks: &[u32]) -> PlaneTree {
    let mut seq = Vec::new();
    let mut w: i64 = 0;
    for &k in ks {
        seq.push(k);
        w += k as i64 - 1;
        if w == -1 {
            break;
        }
    }
    if w >= 0 {
        seq.extend(std::iter::repeat_n(0, (w + 1) as usize));
    }
    PlaneTree::from_degree_sequence(&seq).unwrap()
}

fn tree() -> impl Strategy<Value = PlaneTree> {
    let k = prop_oneof![4 => 0u32..3, 1 => 3u32..7];
    (prop_oneof![1 => Just(0u32), 9 => 1u32..5], prop::collection::vec(k, 0..60)).prop_map(|(first, mut ks)| {
        ks.insert(0, first);
        tree_from_counts(&ks)
    })
}

fn tree_and_vertex() -> impl Strategy<Value = (PlaneTree, usize)> {
    tree().prop_flat_map(|t| {
        let n = t.len();
        (Just(t), 0..n)
    })
}

fn tree_and_pair() -> impl Strategy<Value = (PlaneTree, usize, usize)> {
    tree().prop_flat_map(|t| {
        let n = t.len();
        (Just(t), 0..n, 0..n)
    })
}

fn critical_finite_law() -> impl Strategy<Value = OffspringLaw> {
    // mass a at 0, b at 1, rest split between k and k+1 so that the mean is 1
    (0.05f64..0.6, 0.0f64..0.3, 2usize..5).prop_filter_map("not a law", |(a, b, k)| {
        let r = 1.0 - a - b;
        if r <= 0.01 {
            return None;
        }
        // r·(k + θ) + b = 1 with θ ∈ [0, 1] the share of k+1
        let theta = (1.0 - b) / r - k as f64;
        if !(0.0..=1.0).contains(&theta) {
            return None;
        }
        let mut p = vec![0.0; k + 2];
        p[0] = a;
        p[1] = b;
        p[k] = r * (1.0 - theta);
        p[k + 1] += r * theta;
        OffspringLaw::finite("random", p).ok()
    })
}

proptest! {
    #[test]
    fn degree_sequence_round_trip(t in tree()) {
        let n = t.len();
        prop_assert_eq!(t.degrees().iter().map(|&k| k as usize).sum::<usize>(), n - 1);
        let again = PlaneTree::from_degree_sequence(t.degrees()).unwrap();
        prop_assert_eq!(&again, &t);
        prop_assert_eq!(PlaneTree::from_dsv1(&t.to_dsv1()).unwrap(), t.clone());
        let w = t.lukasiewicz();
        prop_assert_eq!(w[0], 0);
        prop_assert!(w[..n].iter().all(|&x| x >= 0));
        prop_assert_eq!(w[n], -1);
    }

    #[test]
    fn coding_paths_shape(t in tree()) {
        let h = t.depths();
        prop_assert_eq!(h[0], 0);
        prop_assert!(h.windows(2).all(|p| p[1] <= p[0] + 1));
        let c = t.contour();
        prop_assert_eq!(c.len(), 2 * t.len() - 1);
        prop_assert_eq!(c[0], 0);
        prop_assert_eq!(*c.last().unwrap(), 0);
        prop_assert!(c.windows(2).all(|p| p[0].abs_diff(p[1]) == 1));
        for v in 1..t.len() {
            prop_assert_eq!(h[v], h[t.parent(v).unwrap()] + 1);
        }
    }

    #[test]
    fn first_visit_times(t in tree()) {
        let c = t.contour();
        let b: Vec<usize> = (0..t.len()).map(|i| t.lex_to_contour_index(i)).collect();
        prop_assert!(b.windows(2).all(|p| p[0] < p[1]));
        let mut fresh = Vec::new();
        fresh.push(0);
        for j in 1..c.len() {
            if c[j] > c[j - 1] {
                fresh.push(j);
            }
        }
        prop_assert_eq!(&fresh, &b);
        for i in 0..t.len() {
            prop_assert_eq!(c[b[i]], t.depth(i));
        }
    }

    #[test]
    fn mirror_is_an_involution(t in tree()) {
        let (m, map) = t.mirror();
        prop_assert_eq!(m.len(), t.len());
        prop_assert_eq!(m.leaf_count(), t.leaf_count());
        let mut a = t.degrees().to_vec();
        let mut b = m.degrees().to_vec();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
        let (back, map2) = m.mirror();
        prop_assert_eq!(&back, &t);
        for v in 0..t.len() {
            prop_assert_eq!(map2[map[v]], v);
            prop_assert_eq!(m.depth(map[v]), t.depth(v));
            prop_assert_eq!(m.degree(map[v]), t.degree(v));
        }
    }

    #[test]
    fn cut_and_subtree_sizes((t, v) in tree_and_vertex()) {
        let s = t.subtree_at(v);
        let c = t.cut_at(v);
        prop_assert_eq!(s.len() + c.len(), t.len() + 1);
        prop_assert_eq!(s.len() as u32, t.subtree_sizes()[v]);
        prop_assert_eq!(s.degrees(), &t.degrees()[v..v + s.len()]);
        prop_assert_eq!(c.degree(v), 0);
    }

    #[test]
    fn right_branching_equals_lukasiewicz(t in tree()) {
        let sizes = t.subtree_sizes();
        let w = t.lukasiewicz();
        for v in 0..t.len() {
            prop_assert_eq!(t.right_branching_count(v, &sizes) as i64, w[v]);
        }
    }

    #[test]
    fn trunk_skeletons((t, v) in tree_and_vertex()) {
        prop_assume!(v > 0);
        let sk = t.trunk_of(v).unwrap();
        prop_assert_eq!(sk.h(), t.depth(v) as usize);
        let (s, tip) = sk.to_tree();
        prop_assert_eq!(s.depth(tip) as usize, sk.h());
        prop_assert_eq!((0..s.len()).filter(|&u| s.degree(u) > 0).count(), sk.h());
        prop_assert_eq!(s.leaf_count() as u64, sk.leaf_count());
        prop_assert_eq!(s.trunk_of(tip).unwrap(), sk);
    }

    #[test]
    fn ancestor_bound((t, j, _) in tree_and_pair(), pick in any::<prop::sample::Index>()) {
        let mut up = t.ancestors(j);
        up.push(j);
        let i = up[pick.index(up.len())];
        prop_assert!(t.is_ancestor(i, j));
        let hc = LoopGraph::build_loop(&t).profile_hcirc();
        let w = t.lukasiewicz();
        let d = hc[j] as i64 - hc[i] as i64;
        prop_assert!(d >= 0);
        prop_assert!(d <= (w[j] - w[i]) + (t.depth(j) as i64 - t.depth(i) as i64));
    }

    #[test]
    fn mrca_bound((t, i, j) in tree_and_pair()) {
        let g = LoopGraph::build_loop(&t);
        let hc = g.profile_hcirc();
        let m = t.mrca(i, j);
        let est = hc[i] as i64 + hc[j] as i64 - 2 * hc[m] as i64;
        prop_assert!((g.tree_dist(i, j) as i64 - est).abs() <= t.degree(m) as i64);
    }

    #[test]
    fn loop_metric_axioms((t, a, b) in tree_and_pair(), c in any::<prop::sample::Index>()) {
        let c = c.index(t.len());
        for kind in [LoopKind::Loop, LoopKind::LoopBar] {
            let g = LoopGraph::build(&t, kind);
            let d = |x: usize, y: usize| g.tree_dist(x, y);
            prop_assert_eq!(d(a, b), d(b, a));
            prop_assert_eq!(d(a, a), 0);
            prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        }
    }

    #[test]
    fn loop_edges_are_short(t in tree()) {
        let g = LoopGraph::build_loop(&t);
        for v in 1..t.len() {
            let p = t.parent(v).unwrap();
            prop_assert!(g.tree_dist(p, v) <= t.degree(p).div_ceil(2).max(1));
        }
    }

    #[test]
    fn loopbar_vertex_count(t in tree()) {
        let internal = (0..t.len()).filter(|&u| t.degree(u) > 0).count();
        prop_assert_eq!(LoopGraph::build_loopbar(&t).vertex_count(), t.len() - internal);
        prop_assert_eq!(LoopGraph::build_loop(&t).vertex_count(), t.len());
    }

    #[test]
    fn hcirc_matches_bfs(t in tree()) {
        for kind in [LoopKind::Loop, LoopKind::LoopBar] {
            let g = LoopGraph::build(&t, kind);
            prop_assert_eq!(hcirc_from_tree(&t, kind), g.profile_hcirc());
        }
    }

    #[test]
    fn largest_cycle_is_max_degree(t in tree()) {
        let k = t.degrees().iter().copied().max().unwrap() as u64;
        let (len, at) = LoopGraph::build_loop(&t).largest_cycle();
        if k == 0 {
            prop_assert_eq!(len, 0);
        } else {
            prop_assert_eq!(len, k + 1);
            prop_assert_eq!(t.degree(at) as u64, k);
        }
    }

    #[test]
    fn gh_self_zero_and_symmetric((t, a, b) in tree_and_pair(), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..5)) {
        let g = LoopGraph::build_loop(&t);
        let space = |pts: &[usize]| {
            MetricSample::from_matrix(pts.iter().map(|&x| pts.iter().map(|&y| g.tree_dist(x, y) as f64).collect()).collect()).unwrap()
        };
        let mut xs: Vec<usize> = picks.iter().map(|i| i.index(t.len())).collect();
        let x = space(&xs);
        xs.push(a);
        xs.push(b);
        let y = space(&xs);
        prop_assert_eq!(gh_exact_small(&x, &x).unwrap(), 0.0);
        let (p, q) = (gh_exact_small(&x, &y).unwrap(), gh_exact_small(&y, &x).unwrap());
        assert_relative_eq!(p, q, epsilon = 1e-12);
        prop_assert!(p >= 0.0);
    }

    #[test]
    fn exact_size_samples(seed in any::<u64>(), n in 1u64..200) {
        let law = LawSpec::Geometric { p: 0.5 }.build().unwrap();
        let src = RandomSource::new(seed);
        let t = sample_bgw_exact_n(&law, n, &mut src.rng()).unwrap();
        prop_assert_eq!(t.len() as u64, n);
        prop_assert_eq!(*t.lukasiewicz().last().unwrap(), -1);
        prop_assert_eq!(sample_bgw_exact_n(&law, n, &mut src.rng()).unwrap(), t);
    }

    #[test]
    fn trunk_star_leaf_identity(seed in any::<u64>(), h in 0usize..40) {
        let sb = LawSpec::Geometric { p: 0.5 }.build().unwrap().size_biased().unwrap();
        let sk = sample_trunk_star(&sb, h, &mut RandomSource::new(seed).rng());
        let w: u64 = sk.child_counts.iter().sum();
        prop_assert_eq!(sk.leaf_count() as i64, w as i64 - h as i64 + 1);
        prop_assert!(sk.spine_pos.iter().zip(&sk.child_counts).all(|(u, x)| 1 <= *u && u <= x));
        prop_assert_eq!(sk.to_tree().0.leaf_count() as u64, sk.leaf_count());
    }

    #[test]
    fn kemperman_random_laws(law in critical_finite_law(), n in 1u64..9, k in 1u64..4) {
        let (lhs, rhs) = kemperman_check(&law, n).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-14, max_relative = 1e-12);
        prop_assume!(k <= n);
        let (lhs, rhs) = kemperman_forest_check(&law, k, n).unwrap();
        assert_relative_eq!(lhs, rhs, epsilon = 1e-14, max_relative = 1e-12);
    }

    #[test]
    fn scaling_is_monotone(mut ns in prop::collection::vec(1u64..1_000_000, 2..6)) {
        ns.sort_unstable();
        let law = LawSpec::CriticalInfVar.build().unwrap();
        let b = bn_values(&law, &ns).unwrap();
        prop_assert!(b.windows(2).all(|p| p[0] <= p[1]));
        let g = bn_values(&LawSpec::Geometric { p: 0.5 }.build().unwrap(), &ns).unwrap();
        for (x, m) in g.iter().zip(&ns) {
            assert_relative_eq!(*x, (*m as f64).sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn empirical_weights_sum_to_one(xs in prop::collection::vec(-1e6f64..1e6, 1..100), ws in prop::collection::vec(0.01f64..10.0, 100)) {
        let e = EmpiricalLaw::from_samples(xs.clone());
        assert_relative_eq!(e.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
        prop_assert!(e.values.windows(2).all(|p| p[0] <= p[1]));
        let e = EmpiricalLaw::from_weighted(xs.iter().copied().zip(ws).collect());
        assert_relative_eq!(e.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
    }
}
