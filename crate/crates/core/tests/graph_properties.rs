use std::collections::{HashMap, HashSet, VecDeque};

use graph_shift::{
    euclidean_ratio, gamma_sequence, make_homogeneous, make_infinite_comb, make_tail_graph, make_tree, truncate,
    GraphFamily, Homogeneous, NamedSequence, TSequence, TailKind, TailRole, TreeSpec, VertexId,
};
use proptest::prelude::*;

fn all_families() -> Vec<GraphFamily> {
    let mut out: Vec<GraphFamily> = [
        Homogeneous::Lattice(1),
        Homogeneous::Lattice(2),
        Homogeneous::Lattice(3),
        Homogeneous::Triangular,
        Homogeneous::Hexagonal,
        Homogeneous::Ladder,
        Homogeneous::Ray,
    ]
    .into_iter()
    .map(|h| make_homogeneous(h).unwrap())
    .collect();
    for kind in [TailKind::Kite(5), TailKind::FlySwatter(4), TailKind::CombWithTail(6)] {
        out.push(make_tail_graph(kind).unwrap());
    }
    out.push(make_infinite_comb());
    for spec in [
        TreeSpec::Alternating { m: 2, big_m: 4 },
        TreeSpec::AlmostRegular { k: 3, root_children: None },
        TreeSpec::Stretched { big_m: 2, t: TSequence::Named(NamedSequence::Squares) },
        TreeSpec::ExplicitBeta { levels: vec![1, 2, 1], default: 2 },
    ] {
        out.push(make_tree(spec).unwrap());
    }
    out
}

fn radius_for(f: &GraphFamily) -> usize {
    match f.name().as_str() {
        n if n.starts_with("alternating") => 6,
        n if n.starts_with("almost_regular") || n.starts_with("explicit") => 9,
        _ => 14,
    }
}

#[test]
fn adjacency_is_symmetric() {
    for fam in all_families() {
        let t = truncate(&fam, radius_for(&fam)).unwrap();
        let mut sampled = 0;
        for v in t.vertices().iter().take(2000) {
            for w in fam.neighbors(v).unwrap() {
                assert!(fam.neighbors(&w).unwrap().contains(v), "{}: {v} -> {w}", fam.name());
            }
            sampled += 1;
        }
        assert!(sampled >= 1000.min(t.len()), "{}", fam.name());
    }
}

/// Distances from the root by a plain queue over the truncation's adjacency lists,
/// independent of the levels recorded during construction.
fn recomputed_levels(t: &graph_shift::Truncation) -> Vec<usize> {
    let mut dist = vec![usize::MAX; t.len()];
    let mut queue = VecDeque::from([0usize]);
    dist[0] = 0;
    while let Some(i) = queue.pop_front() {
        for &j in t.neighbors(i) {
            let j = j as usize;
            if dist[j] == usize::MAX {
                dist[j] = dist[i] + 1;
                queue.push_back(j);
            }
        }
    }
    dist
}

#[test]
fn levels_are_shortest_path_lengths() {
    for fam in all_families() {
        let t = truncate(&fam, radius_for(&fam)).unwrap();
        let dist = recomputed_levels(&t);
        for i in 0..t.len() {
            assert_eq!(t.level(i), dist[i], "{}: {}", fam.name(), t.vertex(i));
        }
    }
}

#[test]
fn gamma_sums_to_ball_size() {
    for fam in all_families() {
        for nmax in [0, 1, 3, radius_for(&fam)] {
            let g = gamma_sequence(&fam, nmax).unwrap();
            let t = truncate(&fam, nmax).unwrap();
            assert_eq!(g.counts.iter().sum::<u64>(), t.len() as u64, "{} nmax={nmax}", fam.name());
            assert_eq!(g.nmax(), nmax);
        }
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Lattice points at L1 distance `n` in `Z^d`: choose the `k` nonzero axes, their signs and a composition of `n`.
fn l1_sphere(d: u64, n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    (1..=d.min(n)).map(|k| (1u64 << k) * binom(d, k) * binom(n - 1, k - 1)).sum()
}

#[test]
fn lattice_counts_match_sphere_oracle() {
    for d in 1..=4usize {
        let nmax = if d <= 2 { 60 } else { 20 };
        let g = gamma_sequence(&make_homogeneous(Homogeneous::Lattice(d)).unwrap(), nmax).unwrap();
        for n in 0..=nmax {
            assert_eq!(g.counts[n], l1_sphere(d as u64, n as u64), "d={d} n={n}");
        }
    }
}

#[test]
fn euclidean_ratio_drops_below_threshold() {
    // First n past which the ratio stays below 0.05, per family.
    for (kind, n0, nmax) in [
        (Homogeneous::Lattice(2), 81, 300),
        (Homogeneous::Triangular, 81, 300),
        (Homogeneous::Hexagonal, 81, 300),
        (Homogeneous::Ladder, 40, 300),
        (Homogeneous::Ray, 40, 300),
    ] {
        let fam = make_homogeneous(kind).unwrap();
        let g = gamma_sequence(&fam, nmax + 1).unwrap();
        let ratios: Vec<f64> = (0..=nmax).map(|n| euclidean_ratio(&g, n).unwrap()).collect();
        for (n, r) in ratios.iter().enumerate().skip(n0) {
            assert!(*r < 0.05, "{} n={n} ratio={r}", fam.name());
        }
        for w in ratios[n0..].windows(2) {
            assert!(w[1] <= w[0] + 1e-15, "{}", fam.name());
        }
    }
}

#[test]
fn alternating_level_counts() {
    for (m, big_m) in [(2u64, 4u64), (1, 3)] {
        let g = gamma_sequence(&make_tree(TreeSpec::Alternating { m, big_m }).unwrap(), 12).unwrap();
        for k in 0..=6u32 {
            assert_eq!(g.counts[2 * k as usize], (m * big_m).pow(k));
        }
    }
}

#[test]
fn regular_tree_level_counts() {
    for k in 3..=4u64 {
        let g = gamma_sequence(&make_tree(TreeSpec::AlmostRegular { k, root_children: None }).unwrap(), 10).unwrap();
        for j in 1..=10u32 {
            assert_eq!(g.counts[j as usize], k * (k - 1).pow(j - 1));
        }
    }
}

#[test]
fn stretched_degrees() {
    for (big_m, t) in [(2u64, TSequence::Named(NamedSequence::Squares)), (3, TSequence::Prefix(vec![1, 2, 1]))] {
        let fam = make_tree(TreeSpec::Stretched { big_m, t: t.clone() }).unwrap();
        let trunc = truncate(&fam, 12).unwrap();
        let mut bifurcations: HashSet<usize> = HashSet::new();
        let mut acc = 0usize;
        for j in 1.. {
            if acc > 12 {
                break;
            }
            bifurcations.insert(acc);
            acc += 2 * t.term(j) as usize;
        }
        for i in 0..trunc.len() {
            let l = trunc.level(i);
            if l >= 12 {
                continue;
            }
            let want = match (l, bifurcations.contains(&l)) {
                (0, _) => big_m as usize,
                (_, true) => big_m as usize + 1,
                _ => 2,
            };
            assert_eq!(trunc.degree(i), want, "M={big_m} level {l}");
        }
    }
}

#[test]
fn trees_are_leafless() {
    for fam in all_families().into_iter().filter(|f| f.name().contains("tree")) {
        let t = truncate(&fam, radius_for(&fam)).unwrap();
        for i in 0..t.len() {
            if t.level(i) < t.radius() {
                assert!(t.neighbors(i).iter().any(|&j| t.level(j as usize) > t.level(i)), "{}", fam.name());
            }
        }
    }
}

fn finite_part(kind: TailKind) -> HashMap<VertexId, HashSet<VertexId>> {
    let fam = make_tail_graph(kind).unwrap();
    let t = truncate(&fam, 2 * kind.n() + 4).unwrap();
    let is_tail = |v: &VertexId| matches!(v, VertexId::TailVertex { role: TailRole::U, .. });
    t.vertices()
        .iter()
        .filter(|v| !is_tail(v))
        .map(|v| (v.clone(), fam.neighbors(v).unwrap().into_iter().filter(|w| !is_tail(w)).collect()))
        .collect()
}

#[test]
fn removing_tail_leaves_finite_graph() {
    let n = 6u64;
    let kite = finite_part(TailKind::Kite(n as usize));
    assert_eq!(kite.len(), n as usize + 1);
    for k in 0..=n {
        let want: HashSet<VertexId> = [VertexId::v((k + 1) % (n + 1)), VertexId::v((k + n) % (n + 1))].into();
        assert_eq!(kite[&VertexId::v(k)], want);
    }
    let fly = finite_part(TailKind::FlySwatter(n as usize));
    for k in 0..=n {
        assert_eq!(fly[&VertexId::v(k)].len(), n as usize);
        assert!(!fly[&VertexId::v(k)].contains(&VertexId::v(k)));
    }
    let comb = finite_part(TailKind::CombWithTail(n as usize));
    assert_eq!(comb.len(), 2 * n as usize);
    for j in 1..=n {
        let mut want: HashSet<VertexId> = [VertexId::w(j)].into();
        if j > 1 {
            want.insert(VertexId::v(j - 1));
        }
        if j < n {
            want.insert(VertexId::v(j + 1));
        }
        assert_eq!(comb[&VertexId::v(j)], want);
        assert_eq!(comb[&VertexId::w(j)], [VertexId::v(j)].into());
    }
}

proptest! {
    #[test]
    fn lattice_neighbors_differ_by_unit_step(c in prop::collection::vec(-10_000i64..10_000, 3)) {
        let fam = make_homogeneous(Homogeneous::Lattice(3)).unwrap();
        let v = VertexId::LatticePoint(c.clone());
        let nbrs = fam.neighbors(&v).unwrap();
        prop_assert_eq!(nbrs.len(), 6);
        for w in nbrs {
            let VertexId::LatticePoint(d) = &w else { panic!("{w}") };
            prop_assert_eq!(c.iter().zip(d).map(|(a, b)| (a - b).abs()).sum::<i64>(), 1);
        }
    }

    #[test]
    fn hexagonal_is_cubic_and_symmetric(x in -5000i64..5000, y in -5000i64..5000) {
        let fam = make_homogeneous(Homogeneous::Hexagonal).unwrap();
        let v = VertexId::PlanarPoint(x, y);
        let nbrs = fam.neighbors(&v).unwrap();
        prop_assert_eq!(nbrs.len(), 3);
        for w in nbrs {
            prop_assert!(fam.neighbors(&w).unwrap().contains(&v));
        }
    }
}
