//! Neighbor oracles, BFS truncations and coordination sequences.
//!
//! An infinite graph is never stored. A [`GraphFamily`] answers neighbor
//! queries on demand; a [`Truncation`] is the finite BFS ball of some radius
//! around the family's distinguished vertex. Every edge of the shipped
//! families changes the BFS level by at most one, so vertices strictly inside
//! the ball (level <= radius - 1) see their complete neighborhood.

mod vertex;

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{self, FamilyKind};

pub use vertex::{TailRole, VertexId};

/// Default cap on the number of vertices a truncation may hold.
pub const DEFAULT_VERTEX_CAP: usize = 5_000_000;

/// Immutable neighbor oracle with a distinguished vertex and a degree bound.
///
/// Built by the constructors in [`crate::families`].
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFamily {
    kind: FamilyKind,
    distinguished: VertexId,
    degree_bound: usize,
}

impl GraphFamily {
    pub(crate) fn new(kind: FamilyKind, distinguished: VertexId, degree_bound: usize) -> Self {
        Self { kind, distinguished, degree_bound }
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn distinguished_vertex(&self) -> &VertexId {
        &self.distinguished
    }

    /// Maximum degree over all vertices of the (infinite) graph.
    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Short stable name, used in JSON outputs.
    pub fn name(&self) -> String {
        self.kind.name()
    }

    /// Whether the family is a tree (acyclic and connected).
    pub fn is_tree(&self) -> bool {
        self.kind.is_tree()
    }

    /// Ordered neighbor list of `v`. The order is fixed per family.
    pub fn neighbors(&self, v: &VertexId) -> Result<Vec<VertexId>> {
        families::neighbors(&self.kind, v)
    }

    pub fn degree(&self, v: &VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    /// A vertex of maximum degree, close to the distinguished vertex.
    pub fn max_degree_vertex(&self) -> VertexId {
        families::max_degree_vertex(&self.kind)
    }
}

/// BFS ball of radius `R` around the distinguished vertex.
///
/// Vertices are stored in BFS order, so each level occupies a contiguous
/// index range. Adjacency is kept in compressed (offset/target) form and
/// contains every edge between two vertices of the ball.
#[derive(Debug, Clone)]
pub struct Truncation {
    family: GraphFamily,
    radius: usize,
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    levels: Vec<u32>,
    level_starts: Vec<usize>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Truncation {
    pub fn family(&self) -> &GraphFamily {
        &self.family
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Largest level whose vertices have all their neighbors in the ball,
    /// `None` for the radius-0 ball.
    pub fn interior_radius(&self) -> Option<usize> {
        self.radius.checked_sub(1)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    /// BFS level `|v| = d(o, v)` of vertex index `i`.
    pub fn level(&self, i: usize) -> usize {
        self.levels[i] as usize
    }

    /// Index range of the vertices at level `l`.
    pub fn level_range(&self, l: usize) -> Range<usize> {
        if l > self.radius {
            return self.len()..self.len();
        }
        self.level_starts[l]..self.level_starts[l + 1]
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Degree inside the ball; equals the true degree for interior vertices.
    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn is_interior(&self, i: usize) -> bool {
        self.level(i) < self.radius
    }

    /// Number of vertices at each level `0..=radius`.
    pub fn level_counts(&self) -> Vec<u64> {
        (0..=self.radius).map(|l| self.level_range(l).len() as u64).collect()
    }
}

/// BFS truncation with the default vertex cap.
pub fn truncate(family: &GraphFamily, radius: usize) -> Result<Truncation> {
    truncate_with_cap(family, radius, DEFAULT_VERTEX_CAP)
}

/// BFS truncation that fails with [`Error::ResourceCap`] instead of growing past `cap` vertices.
pub fn truncate_with_cap(family: &GraphFamily, radius: usize, cap: usize) -> Result<Truncation> {
    if let Some(expected) = families::predicted_ball_size(family.kind(), radius) {
        if expected > cap as f64 {
            return Err(Error::ResourceCap { cap });
        }
    }
    let root = family.distinguished_vertex().clone();
    let mut vertices = vec![root.clone()];
    let mut levels = vec![0u32];
    let mut index = HashMap::new();
    index.insert(root, 0usize);
    let mut offsets = vec![0usize];
    let mut targets: Vec<u32> = Vec::new();

    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let level_u = levels[u] as usize;
        for w in family.neighbors(&vertices[u])? {
            let j = match index.get(&w) {
                Some(&j) => j,
                None if level_u < radius => {
                    if vertices.len() >= cap {
                        return Err(Error::ResourceCap { cap });
                    }
                    let j = vertices.len();
                    index.insert(w.clone(), j);
                    vertices.push(w);
                    levels.push(level_u as u32 + 1);
                    queue.push_back(j);
                    j
                }
                None => continue,
            };
            targets.push(j as u32);
        }
        offsets.push(targets.len());
    }

    let mut level_starts = vec![0usize; radius + 2];
    for &l in &levels {
        level_starts[l as usize + 1] += 1;
    }
    for l in 1..level_starts.len() {
        level_starts[l] += level_starts[l - 1];
    }

    Ok(Truncation {
        family: family.clone(),
        radius,
        vertices,
        index,
        levels,
        level_starts,
        offsets,
        targets,
    })
}

/// Coordination sequence `gamma(0..=nmax)`: number of vertices at each BFS level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GammaSequence {
    pub family: String,
    pub counts: Vec<u64>,
}

impl GammaSequence {
    pub fn nmax(&self) -> usize {
        self.counts.len().saturating_sub(1)
    }

    /// CSV with header `n,gamma`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,gamma\n");
        for (n, c) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{n},{c}");
        }
        out
    }
}

pub fn gamma_sequence(family: &GraphFamily, nmax: usize) -> Result<GammaSequence> {
    gamma_sequence_with_cap(family, nmax, DEFAULT_VERTEX_CAP)
}

pub fn gamma_sequence_with_cap(family: &GraphFamily, nmax: usize, cap: usize) -> Result<GammaSequence> {
    let trunc = truncate_with_cap(family, nmax, cap)?;
    Ok(GammaSequence { family: family.name(), counts: trunc.level_counts() })
}

/// `(gamma(n) + gamma(n+1)) / sum_{j<=n} gamma(j)`.
pub fn euclidean_ratio(gamma: &GammaSequence, n: usize) -> Result<f64> {
    if n + 1 > gamma.nmax() {
        return Err(Error::OutOfRange(format!(
            "euclidean ratio at n={n} needs gamma up to {}, have {}",
            n + 1,
            gamma.nmax()
        )));
    }
    let partial: u64 = gamma.counts[..=n].iter().sum();
    Ok((gamma.counts[n] + gamma.counts[n + 1]) as f64 / partial as f64)
}

/// (max, min) degree over the interior vertices of a truncation.
pub fn degree_bounds(trunc: &Truncation) -> Result<(usize, usize)> {
    let interior = trunc
        .interior_radius()
        .ok_or_else(|| Error::InvalidParameter("degree bounds need radius >= 1".into()))?;
    let range = 0..trunc.level_range(interior).end;
    let mut degrees = range.map(|i| trunc.degree(i));
    let first = degrees
        .next()
        .ok_or_else(|| Error::InvalidParameter("empty interior".into()))?;
    Ok(degrees.fold((first, first), |(hi, lo), d| (hi.max(d), lo.min(d))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{make_homogeneous, make_tail_graph, make_tree, Homogeneous, TailKind, TreeSpec};

    #[test]
    fn lattice_origin_neighbor_order() {
        let g = make_homogeneous(Homogeneous::Lattice(2)).unwrap();
        let got = g.neighbors(&VertexId::origin(2)).unwrap();
        let want: Vec<VertexId> = ["z:(1,0)", "z:(-1,0)", "z:(0,1)", "z:(0,-1)"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn ray_truncation() {
        let ray = make_homogeneous(Homogeneous::Ray).unwrap();
        let t = truncate(&ray, 3).unwrap();
        assert_eq!(t.vertices(), &[VertexId::u(1), VertexId::u(2), VertexId::u(3), VertexId::u(4)]);
        assert_eq!((0..4).map(|i| t.level(i)).collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert_eq!(t.interior_radius(), Some(2));
    }

    #[test]
    fn ball_sizes() {
        let lat = make_homogeneous(Homogeneous::Lattice(2)).unwrap();
        assert_eq!(truncate(&lat, 2).unwrap().len(), 13);
        let hex = make_homogeneous(Homogeneous::Hexagonal).unwrap();
        assert_eq!(truncate(&hex, 2).unwrap().len(), 10);
        assert_eq!(truncate(&hex, 0).unwrap().interior_radius(), None);
    }

    #[test]
    fn gamma_examples() {
        let tri = make_homogeneous(Homogeneous::Triangular).unwrap();
        assert_eq!(gamma_sequence(&tri, 4).unwrap().counts, vec![1, 6, 12, 18, 24]);
        let z3 = make_homogeneous(Homogeneous::Lattice(3)).unwrap();
        assert_eq!(gamma_sequence(&z3, 3).unwrap().counts, vec![1, 6, 18, 38]);
        let ladder = make_homogeneous(Homogeneous::Ladder).unwrap();
        assert_eq!(gamma_sequence(&ladder, 3).unwrap().counts, vec![1, 2, 2, 2]);
    }

    #[test]
    fn gamma_csv() {
        let ladder = make_homogeneous(Homogeneous::Ladder).unwrap();
        let g = gamma_sequence(&ladder, 2).unwrap();
        assert_eq!(g.to_csv(), "n,gamma\n0,1\n1,2\n2,2\n");
        let json = serde_json::to_value(&g).unwrap();
        assert_eq!(json["counts"], serde_json::json!([1, 2, 2]));
        assert_eq!(json["family"], "ladder");
    }

    #[test]
    fn euclidean_ratio_examples() {
        let hex = make_homogeneous(Homogeneous::Hexagonal).unwrap();
        let g = gamma_sequence(&hex, 11).unwrap();
        assert!((euclidean_ratio(&g, 10).unwrap() - 63.0 / 166.0).abs() < 1e-12);
        assert!((euclidean_ratio(&g, 0).unwrap() - 4.0).abs() < 1e-12);
        assert!(euclidean_ratio(&g, 11).is_err());

        let ladder = make_homogeneous(Homogeneous::Ladder).unwrap();
        let g = gamma_sequence(&ladder, 11).unwrap();
        assert!((euclidean_ratio(&g, 10).unwrap() - 4.0 / 21.0).abs() < 1e-12);
    }

    #[test]
    fn degree_bound_examples() {
        let lat = make_homogeneous(Homogeneous::Lattice(2)).unwrap();
        assert_eq!(degree_bounds(&truncate(&lat, 5).unwrap()).unwrap(), (4, 4));
        let kite = make_tail_graph(TailKind::Kite(4)).unwrap();
        assert_eq!(degree_bounds(&truncate(&kite, 6).unwrap()).unwrap(), (3, 2));
        // The root (degree m = 2) is an interior vertex and sets the minimum.
        let alt = make_tree(TreeSpec::Alternating { m: 2, big_m: 4 }).unwrap();
        assert_eq!(degree_bounds(&truncate(&alt, 4).unwrap()).unwrap(), (5, 2));
        assert!(degree_bounds(&truncate(&lat, 0).unwrap()).is_err());
    }

    #[test]
    fn resource_cap() {
        let tree = make_tree(TreeSpec::AlmostRegular { k: 4, root_children: None }).unwrap();
        assert_eq!(truncate_with_cap(&tree, 30, 1000).unwrap_err(), Error::ResourceCap { cap: 1000 });
        let lat = make_homogeneous(Homogeneous::Lattice(2)).unwrap();
        assert!(matches!(truncate_with_cap(&lat, 10, 50), Err(Error::ResourceCap { .. })));
        assert!(gamma_sequence_with_cap(&lat, 10, 1000).is_ok());
    }
}
