//! Constructors for the graph families: homogeneous infinite graphs, finite
//! graphs with an infinite tail, the infinite comb, and rooted trees.
//!
//! Neighbor order is fixed per family:
//!
//! * lattice `Z^d`: `+e_1, -e_1, +e_2, -e_2, ...`
//! * triangular: `(1,0), (-1,0), (0,1), (0,-1), (1,-1), (-1,1)`
//! * hexagonal (brick wall): `(x+1,y), (x-1,y)`, then `(x,y+1)` if `x+y` is even, else `(x,y-1)`
//! * ladder: `(i+1,s), (i-1,s), (i,1-s)`
//! * tail graphs and combs: finite-part `v` vertices in ascending index, then the tooth `w`, then tail `u`
//! * trees: parent first, then children in index order

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphFamily, TailRole, VertexId};

/// Homogeneous infinite graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Homogeneous {
    Lattice(usize),
    Triangular,
    Hexagonal,
    Ladder,
    /// The semi-infinite path `u_1 ~ u_2 ~ ...`.
    Ray,
}

/// A finite graph on `v_0..v_n` (or `v_1..v_n, w_1..w_n`) with an infinite tail attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum TailKind {
    /// (n+1)-cycle with the tail at `v_0`.
    Kite(usize),
    /// Complete graph `K_{n+1}` with the tail at `v_0`.
    FlySwatter(usize),
    /// Path `v_1..v_n` with teeth `w_j ~ v_j`, tail at `v_n`.
    CombWithTail(usize),
}

impl TailKind {
    pub fn n(self) -> usize {
        match self {
            TailKind::Kite(n) | TailKind::FlySwatter(n) | TailKind::CombWithTail(n) => n,
        }
    }

    /// The vertex carrying the tail.
    pub fn attachment(self) -> VertexId {
        match self {
            TailKind::Kite(_) | TailKind::FlySwatter(_) => VertexId::v(0),
            TailKind::CombWithTail(n) => VertexId::v(n as u64),
        }
    }

    pub fn name(self) -> String {
        match self {
            TailKind::Kite(n) => format!("kite(n={n})"),
            TailKind::FlySwatter(n) => format!("fly_swatter(n={n})"),
            TailKind::CombWithTail(n) => format!("comb_with_tail(n={n})"),
        }
    }
}

/// Named divergent path-length sequences for the stretched tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedSequence {
    /// `t_j = 2^((j-1)^2)`
    Squares,
    /// `t_j = j^(j-1)`
    Selfpow,
}

/// Path-length sequence `t_1, t_2, ...` of a stretched tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TSequence {
    Named(NamedSequence),
    /// Explicit prefix; the last entry repeats afterwards.
    Prefix(Vec<u64>),
}

impl TSequence {
    /// `t_j` for `j >= 1`, saturating at `u64::MAX`.
    pub fn term(&self, j: usize) -> u64 {
        assert!(j >= 1, "t-sequence is indexed from 1");
        match self {
            TSequence::Named(NamedSequence::Squares) => {
                let e = ((j - 1) * (j - 1)) as u32;
                2u64.checked_pow(e).unwrap_or(u64::MAX)
            }
            TSequence::Named(NamedSequence::Selfpow) => {
                (j as u64).checked_pow((j - 1) as u32).unwrap_or(u64::MAX)
            }
            TSequence::Prefix(ts) => *ts.get(j - 1).or(ts.last()).expect("validated nonempty"),
        }
    }

    /// Term as a float, exact while representable.
    pub fn term_f64(&self, j: usize) -> f64 {
        match self {
            TSequence::Named(NamedSequence::Squares) => 2f64.powi(((j - 1) * (j - 1)) as i32),
            TSequence::Named(NamedSequence::Selfpow) => (j as f64).powi((j - 1) as i32),
            TSequence::Prefix(_) => self.term(j) as f64,
        }
    }

    fn label(&self) -> String {
        match self {
            TSequence::Named(NamedSequence::Squares) => "squares".into(),
            TSequence::Named(NamedSequence::Selfpow) => "selfpow".into(),
            TSequence::Prefix(ts) => format!("{ts:?}").replace(' ', ""),
        }
    }
}

/// Rooted leafless trees whose child count depends only on the level.
///
/// JSON form, e.g. `{"kind":"alternating","m":2,"M":4}`,
/// `{"kind":"almost_regular","k":3}`, `{"kind":"stretched","M":2,"t":"squares"}`,
/// `{"kind":"explicit_beta","levels":[3,1],"default":2}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeSpec {
    /// `m` children at even levels, `M` at odd levels.
    Alternating {
        m: u64,
        #[serde(rename = "M")]
        big_m: u64,
    },
    /// Root has `root_children` (default `k`) children, every other vertex `k - 1`.
    AlmostRegular {
        k: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        root_children: Option<u64>,
    },
    /// Root has `M` children; each child heads a path of `2 t_1 - 1` edges whose
    /// endpoint (a bifurcation node) has `M` children heading paths of `2 t_2 - 1` edges, and so on.
    Stretched {
        #[serde(rename = "M")]
        big_m: u64,
        t: TSequence,
    },
    /// Child counts by level from `levels`, then `default`.
    ExplicitBeta { levels: Vec<u64>, default: u64 },
}

impl TreeSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            TreeSpec::Alternating { m, big_m } if *m == 0 || *big_m == 0 => {
                bad("alternating tree needs m, M >= 1".into())
            }
            TreeSpec::AlmostRegular { k, .. } if *k < 2 => bad("almost-regular tree needs k >= 2".into()),
            TreeSpec::AlmostRegular { root_children: Some(0), .. } => {
                bad("almost-regular tree needs root_children >= 1".into())
            }
            TreeSpec::Stretched { big_m, .. } if *big_m < 2 => bad("stretched tree needs M >= 2".into()),
            TreeSpec::Stretched { t: TSequence::Prefix(ts), .. } if ts.is_empty() || ts.contains(&0) => {
                bad("stretched tree prefix must be nonempty with t_j >= 1".into())
            }
            TreeSpec::ExplicitBeta { levels, default } if *default == 0 || levels.contains(&0) => {
                bad("explicit child counts must all be >= 1 (leafless)".into())
            }
            _ => Ok(()),
        }
    }

    /// `beta` at the given level.
    pub fn children_at_level(&self, level: usize) -> u64 {
        match self {
            TreeSpec::Alternating { m, big_m } => {
                if level % 2 == 0 {
                    *m
                } else {
                    *big_m
                }
            }
            TreeSpec::AlmostRegular { k, root_children } => {
                if level == 0 {
                    root_children.unwrap_or(*k)
                } else {
                    k - 1
                }
            }
            TreeSpec::Stretched { big_m, t } => {
                if is_bifurcation_level(t, level) {
                    *big_m
                } else {
                    1
                }
            }
            TreeSpec::ExplicitBeta { levels, default } => *levels.get(level).unwrap_or(default),
        }
    }

    /// Degree of a vertex at `level`.
    pub fn degree_at_level(&self, level: usize) -> u64 {
        self.children_at_level(level) + u64::from(level > 0)
    }

    /// Exact maximum degree and the first level where it occurs.
    fn max_degree(&self) -> (u64, usize) {
        // Every family is eventually periodic; scanning past the exceptional prefix plus one
        // period (or the first two bifurcation levels) sees every degree value.
        let horizon = match self {
            TreeSpec::Alternating { .. } => 3,
            TreeSpec::AlmostRegular { .. } => 2,
            TreeSpec::Stretched { t, .. } => 2 * t.term(1) as usize + 1,
            TreeSpec::ExplicitBeta { levels, .. } => levels.len() + 2,
        };
        let mut best = (0, 0);
        for level in 0..horizon {
            let d = self.degree_at_level(level);
            if d > best.0 {
                best = (d, level);
            }
        }
        best
    }

    /// Number of vertices at each level `0..=nmax` as floats (may be astronomically large).
    pub fn level_counts(&self, nmax: usize) -> Vec<f64> {
        let mut counts = Vec::with_capacity(nmax + 1);
        let mut c = 1.0f64;
        for level in 0..=nmax {
            counts.push(c);
            c *= self.children_at_level(level) as f64;
        }
        counts
    }

    pub fn name(&self) -> String {
        match self {
            TreeSpec::Alternating { m, big_m } => format!("alternating_tree(m={m},M={big_m})"),
            TreeSpec::AlmostRegular { k, root_children } => {
                format!("almost_regular_tree(k={k},root_children={})", root_children.unwrap_or(*k))
            }
            TreeSpec::Stretched { big_m, t } => format!("stretched_tree(M={big_m},t={})", t.label()),
            TreeSpec::ExplicitBeta { levels, default } => {
                format!("explicit_beta_tree(levels={levels:?},default={default})").replace(' ', "")
            }
        }
    }
}

/// Bifurcation levels are `0, 2t_1, 2t_1 + 2t_2, ...`.
fn is_bifurcation_level(t: &TSequence, level: usize) -> bool {
    let mut b = 0usize;
    let mut j = 1;
    while b < level {
        b = b.saturating_add(2usize.saturating_mul(t.term(j).min(usize::MAX as u64) as usize));
        j += 1;
    }
    b == level
}

/// Every family the library knows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    Homogeneous(Homogeneous),
    Tail(TailKind),
    InfiniteComb,
    Tree(TreeSpec),
}

impl FamilyKind {
    pub fn name(&self) -> String {
        match self {
            FamilyKind::Homogeneous(Homogeneous::Lattice(d)) => format!("lattice(d={d})"),
            FamilyKind::Homogeneous(Homogeneous::Triangular) => "triangular".into(),
            FamilyKind::Homogeneous(Homogeneous::Hexagonal) => "hexagonal".into(),
            FamilyKind::Homogeneous(Homogeneous::Ladder) => "ladder".into(),
            FamilyKind::Homogeneous(Homogeneous::Ray) => "ray".into(),
            FamilyKind::Tail(t) => t.name(),
            FamilyKind::InfiniteComb => "infinite_comb".into(),
            FamilyKind::Tree(spec) => spec.name(),
        }
    }

    pub fn is_tree(&self) -> bool {
        matches!(
            self,
            FamilyKind::Homogeneous(Homogeneous::Ray)
                | FamilyKind::Tail(TailKind::CombWithTail(_))
                | FamilyKind::InfiniteComb
                | FamilyKind::Tree(_)
        )
    }
}

pub fn make_homogeneous(kind: Homogeneous) -> Result<GraphFamily> {
    let (root, bound) = match kind {
        Homogeneous::Lattice(0) => {
            return Err(Error::InvalidParameter("lattice dimension must be >= 1".into()))
        }
        Homogeneous::Lattice(d) => (VertexId::origin(d), 2 * d),
        Homogeneous::Triangular => (VertexId::PlanarPoint(0, 0), 6),
        Homogeneous::Hexagonal => (VertexId::PlanarPoint(0, 0), 3),
        Homogeneous::Ladder => (VertexId::LadderPoint { i: 0, side: 0 }, 3),
        Homogeneous::Ray => (VertexId::u(1), 2),
    };
    Ok(GraphFamily::new(FamilyKind::Homogeneous(kind), root, bound))
}

pub fn make_tail_graph(kind: TailKind) -> Result<GraphFamily> {
    let n = kind.n();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("{} needs n >= 2", kind.name())));
    }
    let (root, bound) = match kind {
        TailKind::Kite(_) => (VertexId::v(0), 3),
        TailKind::FlySwatter(n) => (VertexId::v(0), n + 1),
        TailKind::CombWithTail(_) => (VertexId::v(1), 3),
    };
    Ok(GraphFamily::new(FamilyKind::Tail(kind), root, bound))
}

pub fn make_infinite_comb() -> GraphFamily {
    GraphFamily::new(FamilyKind::InfiniteComb, VertexId::v(1), 3)
}

pub fn make_tree(spec: TreeSpec) -> Result<GraphFamily> {
    spec.validate()?;
    let bound = spec.max_degree().0 as usize;
    Ok(GraphFamily::new(FamilyKind::Tree(spec), VertexId::root(), bound))
}

fn wrong_family(v: &VertexId, kind: &FamilyKind) -> Error {
    Error::Encoding(format!("{v} is not a vertex of {}", kind.name()))
}

pub(crate) fn neighbors(kind: &FamilyKind, v: &VertexId) -> Result<Vec<VertexId>> {
    use VertexId::*;
    match (kind, v) {
        (FamilyKind::Homogeneous(Homogeneous::Lattice(d)), LatticePoint(c)) if c.len() == *d => {
            let mut out = Vec::with_capacity(2 * d);
            for axis in 0..*d {
                for step in [1, -1] {
                    let mut w = c.clone();
                    w[axis] += step;
                    out.push(LatticePoint(w));
                }
            }
            Ok(out)
        }
        (FamilyKind::Homogeneous(Homogeneous::Triangular), PlanarPoint(x, y)) => Ok([
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, -1),
            (-1, 1),
        ]
        .iter()
        .map(|(dx, dy)| PlanarPoint(x + dx, y + dy))
        .collect()),
        (FamilyKind::Homogeneous(Homogeneous::Hexagonal), PlanarPoint(x, y)) => {
            let vertical = if (x + y).rem_euclid(2) == 0 { y + 1 } else { y - 1 };
            Ok(vec![PlanarPoint(x + 1, *y), PlanarPoint(x - 1, *y), PlanarPoint(*x, vertical)])
        }
        (FamilyKind::Homogeneous(Homogeneous::Ladder), LadderPoint { i, side }) => {
            let mut out = vec![LadderPoint { i: i + 1, side: *side }];
            if *i > 0 {
                out.push(LadderPoint { i: i - 1, side: *side });
            }
            out.push(LadderPoint { i: *i, side: 1 - side });
            Ok(out)
        }
        (FamilyKind::Homogeneous(Homogeneous::Ray), TailVertex { role: TailRole::U, index }) => {
            let mut out = Vec::with_capacity(2);
            if *index > 1 {
                out.push(VertexId::u(index - 1));
            }
            out.push(VertexId::u(index + 1));
            Ok(out)
        }
        (FamilyKind::Tail(t), TailVertex { role, index }) => tail_neighbors(*t, *role, *index)
            .ok_or_else(|| wrong_family(v, kind)),
        (FamilyKind::InfiniteComb, TailVertex { role, index }) if *index >= 1 => match role {
            TailRole::V => {
                let mut out = Vec::with_capacity(3);
                if *index > 1 {
                    out.push(VertexId::v(index - 1));
                }
                out.push(VertexId::v(index + 1));
                out.push(VertexId::w(*index));
                Ok(out)
            }
            TailRole::W => Ok(vec![VertexId::v(*index)]),
            TailRole::U => Err(wrong_family(v, kind)),
        },
        (FamilyKind::Tree(spec), TreePath(path)) => {
            for (level, &c) in path.iter().enumerate() {
                if u64::from(c) >= spec.children_at_level(level) {
                    return Err(wrong_family(v, kind));
                }
            }
            let beta = spec.children_at_level(path.len());
            let mut out = Vec::with_capacity(beta as usize + 1);
            if let Some((_, parent)) = path.split_last() {
                out.push(TreePath(parent.to_vec()));
            }
            for c in 0..beta {
                let mut child = path.clone();
                child.push(c as u32);
                out.push(TreePath(child));
            }
            Ok(out)
        }
        _ => Err(wrong_family(v, kind)),
    }
}

/// Tail vertices `u_j` are shared by all tail graphs; the attachment vertex gains `u_1`.
fn tail_neighbors(kind: TailKind, role: TailRole, index: u64) -> Option<Vec<VertexId>> {
    let n = kind.n() as u64;
    let attach = kind.attachment();
    let mut out = match (kind, role) {
        (_, TailRole::U) => {
            let prev = if index == 1 { attach.clone() } else { VertexId::u(index - 1) };
            return Some(vec![prev, VertexId::u(index + 1)]);
        }
        (TailKind::Kite(_), TailRole::V) if index <= n => {
            let prev = if index == 0 { n } else { index - 1 };
            let next = if index == n { 0 } else { index + 1 };
            let (a, b) = (prev.min(next), prev.max(next));
            vec![VertexId::v(a), VertexId::v(b)]
        }
        (TailKind::FlySwatter(_), TailRole::V) if index <= n => {
            (0..=n).filter(|&j| j != index).map(VertexId::v).collect()
        }
        (TailKind::CombWithTail(_), TailRole::V) if (1..=n).contains(&index) => {
            let mut out = Vec::with_capacity(4);
            if index > 1 {
                out.push(VertexId::v(index - 1));
            }
            if index < n {
                out.push(VertexId::v(index + 1));
            }
            out.push(VertexId::w(index));
            out
        }
        (TailKind::CombWithTail(_), TailRole::W) if (1..=n).contains(&index) => {
            return Some(vec![VertexId::v(index)]);
        }
        _ => return None,
    };
    if (VertexId::TailVertex { role, index }) == attach {
        out.push(VertexId::u(1));
    }
    Some(out)
}

pub(crate) fn max_degree_vertex(kind: &FamilyKind) -> VertexId {
    match kind {
        FamilyKind::Homogeneous(Homogeneous::Lattice(d)) => VertexId::origin(*d),
        FamilyKind::Homogeneous(Homogeneous::Triangular | Homogeneous::Hexagonal) => {
            VertexId::PlanarPoint(0, 0)
        }
        FamilyKind::Homogeneous(Homogeneous::Ladder) => VertexId::LadderPoint { i: 1, side: 0 },
        FamilyKind::Homogeneous(Homogeneous::Ray) => VertexId::u(2),
        FamilyKind::Tail(t) => t.attachment(),
        FamilyKind::InfiniteComb => VertexId::v(2),
        FamilyKind::Tree(spec) => VertexId::TreePath(vec![0; spec.max_degree().1]),
    }
}

/// Exact ball size for families whose level counts are known in closed form.
pub(crate) fn predicted_ball_size(kind: &FamilyKind, radius: usize) -> Option<f64> {
    match kind {
        FamilyKind::Tree(spec) => Some(spec.level_counts(radius).iter().sum()),
        _ => None,
    }
}
