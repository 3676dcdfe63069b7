//! Applying the shift on truncations, lp norms, witness functions and
//! certified norm brackets.
//!
//! A [`LpFunction`] lives on a [`Truncation`] and is zero off it. Its shift is
//! therefore exact at every vertex of the ball; the only thing a finite ball
//! can miss is mass of `Sf` one level beyond the radius. Norm ratios refuse to
//! evaluate unless `support_radius + 1 <= radius`, so every ratio reported here
//! is an exact value of `||Sf||_p / ||f||_p` for a finitely supported `f`, hence
//! a certified lower bound for `||S||`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{FamilyKind, TreeSpec};
use crate::graph::{truncate, GraphFamily, Truncation, VertexId};

/// Exponent `p` in `[1, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("exponent p = {p} is outside [1, inf]")));
        }
        Ok(Exponent(p))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Conjugate exponent `q = p / (p - 1)`, with `q(1) = inf` and `q(inf) = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INFINITY
        } else if self.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }

    /// `1/p`, zero for `p = inf`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }

    /// `Some(p)` when `p` is a finite integer.
    pub fn as_integer(self) -> Option<u32> {
        (self.0.is_finite() && self.0.fract() == 0.0 && self.0 <= u32::MAX as f64).then_some(self.0 as u32)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::INFINITY),
            other => other
                .parse::<f64>()
                .map_err(|_| Error::InvalidParameter(format!("cannot parse exponent {s:?}")))
                .and_then(Exponent::new),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(p) => Exponent::new(p),
            Raw::Text(s) => s.parse(),
        }
        .map_err(serde::de::Error::custom)
    }
}

/// Vertex values, indexed like the truncation's vertices.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Float(Vec<f64>),
    Exact(Vec<BigRational>),
}

/// Scalar coefficient matching a [`Values`] representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Float(f64),
    Exact(BigRational),
}

/// Finitely supported function on the vertices of a truncation.
#[derive(Debug, Clone)]
pub struct LpFunction {
    trunc: Arc<Truncation>,
    values: Values,
}

impl LpFunction {
    pub fn new(trunc: Arc<Truncation>, values: Values) -> Result<Self> {
        let len = match &values {
            Values::Float(v) => v.len(),
            Values::Exact(v) => v.len(),
        };
        if len != trunc.len() {
            return Err(Error::InvalidParameter(format!(
                "{len} values for a truncation of {} vertices",
                trunc.len()
            )));
        }
        Ok(Self { trunc, values })
    }

    pub fn from_float(trunc: Arc<Truncation>, values: Vec<f64>) -> Result<Self> {
        Self::new(trunc, Values::Float(values))
    }

    pub fn from_exact(trunc: Arc<Truncation>, values: Vec<BigRational>) -> Result<Self> {
        Self::new(trunc, Values::Exact(values))
    }

    pub fn zeros(trunc: Arc<Truncation>, exact: bool) -> Self {
        let n = trunc.len();
        let values =
            if exact { Values::Exact(vec![BigRational::zero(); n]) } else { Values::Float(vec![0.0; n]) };
        Self { trunc, values }
    }

    /// Indicator of a single vertex (floating).
    pub fn indicator(trunc: Arc<Truncation>, v: &VertexId) -> Result<Self> {
        let i = trunc
            .index_of(v)
            .ok_or_else(|| Error::Encoding(format!("{v} is not in the truncation")))?;
        let mut values = vec![0.0; trunc.len()];
        values[i] = 1.0;
        Self::from_float(trunc, values)
    }

    /// Floating function given by its value at each level.
    pub fn radial(trunc: Arc<Truncation>, by_level: impl Fn(usize) -> f64) -> Self {
        let values = (0..trunc.len()).map(|i| by_level(trunc.level(i))).collect();
        Self { trunc, values: Values::Float(values) }
    }

    pub fn truncation(&self) -> &Arc<Truncation> {
        &self.trunc
    }

    pub fn values(&self) -> &Values {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.values, Values::Exact(_))
    }

    pub fn len(&self) -> usize {
        self.trunc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trunc.is_empty()
    }

    pub fn get_f64(&self, i: usize) -> f64 {
        match &self.values {
            Values::Float(v) => v[i],
            Values::Exact(v) => v[i].to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn get_exact(&self, i: usize) -> Option<&BigRational> {
        match &self.values {
            Values::Exact(v) => Some(&v[i]),
            Values::Float(_) => None,
        }
    }

    pub fn value_at(&self, v: &VertexId) -> Option<f64> {
        self.trunc.index_of(v).map(|i| self.get_f64(i))
    }

    fn is_nonzero(&self, i: usize) -> bool {
        match &self.values {
            Values::Float(v) => v[i] != 0.0,
            Values::Exact(v) => !v[i].is_zero(),
        }
    }

    /// Largest level carrying a nonzero value; `None` for the zero function.
    pub fn support_radius(&self) -> Option<usize> {
        (0..self.len()).rev().find(|&i| self.is_nonzero(i)).map(|i| self.trunc.level(i))
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: &Scalar, other: &LpFunction, b: &Scalar) -> Result<LpFunction> {
        if !Arc::ptr_eq(&self.trunc, &other.trunc) {
            return Err(Error::InvalidParameter("functions live on different truncations".into()));
        }
        let values = match (&self.values, &other.values, a, b) {
            (Values::Float(x), Values::Float(y), Scalar::Float(a), Scalar::Float(b)) => {
                Values::Float(x.iter().zip(y).map(|(x, y)| a * x + b * y).collect())
            }
            (Values::Exact(x), Values::Exact(y), Scalar::Exact(a), Scalar::Exact(b)) => {
                Values::Exact(x.iter().zip(y).map(|(x, y)| a * x + b * y).collect())
            }
            _ => return Err(Error::MixedRepresentation),
        };
        Ok(LpFunction { trunc: self.trunc.clone(), values })
    }

    /// Exact or floating representation of the bilinear pairing `sum_v f(v) g(v)`, as a float.
    pub fn pairing(&self, other: &LpFunction) -> Result<f64> {
        match (&self.values, &other.values) {
            (Values::Float(x), Values::Float(y)) => Ok(x.iter().zip(y).map(|(x, y)| x * y).sum()),
            (Values::Exact(x), Values::Exact(y)) => {
                let s: BigRational = x.iter().zip(y).map(|(x, y)| x * y).sum();
                Ok(s.to_f64().unwrap_or(f64::NAN))
            }
            _ => Err(Error::MixedRepresentation),
        }
    }
}

/// Image of the shift and the radius up to which it is the complete `Sf`.
#[derive(Debug, Clone)]
pub struct ShiftImage {
    pub image: LpFunction,
    /// Levels `<= validity_radius` hold exact values of `Sf`, and `Sf` vanishes
    /// beyond it. Equals the truncation radius when `support_radius(f) + 1 <= radius`,
    /// otherwise the interior radius (mass of `Sf` beyond the ball is unseen).
    pub validity_radius: usize,
    /// Whether the ball contains the whole support of `Sf`.
    pub complete: bool,
}

/// `(Sf)(u) = sum_{v ~ u} f(v)` at every vertex of the truncation.
pub fn apply_shift(f: &LpFunction) -> ShiftImage {
    let t = f.truncation();
    let values = match f.values() {
        Values::Float(x) => {
            Values::Float((0..t.len()).map(|i| t.neighbors(i).iter().map(|&j| x[j as usize]).sum()).collect())
        }
        Values::Exact(x) => Values::Exact(
            (0..t.len())
                .map(|i| t.neighbors(i).iter().map(|&j| &x[j as usize]).sum())
                .collect(),
        ),
    };
    let complete = f.support_radius().is_none_or(|r| r < t.radius());
    let validity_radius = if complete { t.radius() } else { t.radius().saturating_sub(1) };
    ShiftImage { image: LpFunction { trunc: t.clone(), values }, validity_radius, complete }
}

fn norm_f64(values: impl Iterator<Item = f64>, p: Exponent) -> f64 {
    if p.is_infinite() {
        values.fold(0.0, |m, x| m.max(x.abs()))
    } else if p.value() == 1.0 {
        values.map(f64::abs).sum()
    } else if p.value() == 2.0 {
        values.map(|x| x * x).sum::<f64>().sqrt()
    } else {
        values.map(|x| x.abs().powf(p.value())).sum::<f64>().powf(p.reciprocal())
    }
}

/// `||f||_p`, with the supremum norm at `p = inf`.
pub fn lp_norm(f: &LpFunction, p: Exponent) -> f64 {
    norm_f64((0..f.len()).map(|i| f.get_f64(i)), p)
}

/// Exact `||f||_p^p = sum |f(v)|^p` for an exact function and integer `p`.
pub fn lp_norm_pow_exact(f: &LpFunction, p: u32) -> Result<BigRational> {
    match f.values() {
        Values::Exact(x) => Ok(x.iter().map(|v| num_traits::pow(v.abs(), p as usize)).sum()),
        Values::Float(_) => Err(Error::MixedRepresentation),
    }
}

/// Witness functions from the sharpness arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessKind {
    /// `f(v) = 1` for `|v| <= n`.
    BallIndicator { n: usize },
    /// `f(v) = (k-1)^(-|v|/p)` for `N < |v| <= n`.
    TreeWeight {
        k: u64,
        p: Exponent,
        #[serde(rename = "N")]
        big_n: usize,
        n: usize,
    },
}

impl WitnessKind {
    /// Largest level the witness touches.
    pub fn radius(&self) -> usize {
        match self {
            WitnessKind::BallIndicator { n } | WitnessKind::TreeWeight { n, .. } => *n,
        }
    }

    /// Rejects parameter combinations no witness can realize.
    pub fn validate(&self) -> Result<()> {
        if let WitnessKind::TreeWeight { k, p, big_n, n } = self {
            if *k < 2 || p.is_infinite() || big_n >= n {
                return Err(Error::InvalidParameter(
                    "tree weight needs k >= 2, finite p and N < n".into(),
                ));
            }
        }
        Ok(())
    }

    /// Value at a vertex of the given level.
    pub fn level_value(&self, level: usize) -> f64 {
        match self {
            WitnessKind::BallIndicator { n } => f64::from(u8::from(level <= *n)),
            WitnessKind::TreeWeight { k, p, big_n, n } => {
                if *big_n < level && level <= *n {
                    ((k - 1) as f64).powf(-(level as f64) / p.value())
                } else {
                    0.0
                }
            }
        }
    }
}

/// The witness function on `trunc`, which must have radius at least `n + 1`.
pub fn witness_function(trunc: Arc<Truncation>, kind: &WitnessKind) -> Result<LpFunction> {
    kind.validate()?;
    let needed = kind.radius() + 1;
    if trunc.radius() < needed {
        return Err(Error::InsufficientRadius { needed, available: trunc.radius() });
    }
    Ok(LpFunction::radial(trunc, |l| kind.level_value(l)))
}

/// Witness on a fresh truncation of radius `n + 1` of `family`.
pub fn family_witness(family: &GraphFamily, kind: &WitnessKind) -> Result<LpFunction> {
    kind.validate()?;
    let trunc = Arc::new(truncate(family, kind.radius() + 1)?);
    witness_function(trunc, kind)
}

/// `||Sf||_p / ||f||_p`, evaluated only when the ball holds all of `Sf`.
pub fn rayleigh_ratio(f: &LpFunction, p: Exponent) -> Result<f64> {
    let support = f
        .support_radius()
        .ok_or_else(|| Error::InvalidParameter("rayleigh ratio of the zero function".into()))?;
    let radius = f.truncation().radius();
    if support + 1 > radius {
        return Err(Error::InsufficientRadius { needed: support + 1, available: radius });
    }
    let sf = apply_shift(f);
    Ok(lp_norm(&sf.image, p) / lp_norm(f, p))
}

/// Rayleigh ratio of a level-dependent function on a tree whose child count
/// depends only on the level, computed by summing whole levels at once.
///
/// `by_level[j]` is the value at level `j`; levels past the slice are zero.
pub fn radial_rayleigh_ratio(spec: &TreeSpec, by_level: &[f64], p: Exponent) -> Result<f64> {
    let depth = by_level.len();
    let counts = spec.level_counts(depth);
    let at = |j: usize| by_level.get(j).copied().unwrap_or(0.0);
    let shifted = |j: usize| {
        let parent = if j > 0 { at(j - 1) } else { 0.0 };
        parent + spec.children_at_level(j) as f64 * at(j + 1)
    };
    let norm = |vals: &dyn Fn(usize) -> f64, levels: usize| -> f64 {
        if p.is_infinite() {
            (0..levels).fold(0.0, |m, j| m.max(vals(j).abs()))
        } else {
            (0..levels)
                .map(|j| counts[j] * vals(j).abs().powf(p.value()))
                .sum::<f64>()
                .powf(p.reciprocal())
        }
    };
    let denom = norm(&at, depth);
    if denom == 0.0 {
        return Err(Error::InvalidParameter("rayleigh ratio of the zero function".into()));
    }
    Ok(norm(&shifted, depth + 1) / denom)
}

/// Upper bound provenance in a [`NormBracket`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UpperFormula {
    /// `||S|| <= max deg`.
    MaxDegree,
    /// `||S|| <= (k-1)^(1/p) + (k-1)^(1/q)` on trees with degree `<= k`, `1 < p < inf`.
    TreeBound,
}

/// The witness that produced the lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessInfo {
    pub family: String,
    /// `ball_indicator`, `tree_weight`, `vertex_indicator` or `neighborhood_indicator`.
    pub kind: String,
    pub n: usize,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<usize>,
    pub ratio: f64,
}

/// Certified bracket `lower <= ||S||_p <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBracket {
    pub family: String,
    pub p: Exponent,
    pub lower: f64,
    pub upper: f64,
    pub upper_formula: UpperFormula,
    pub witness: WitnessInfo,
}

/// `(k-1)^(1/p) + (k-1)^(1/q)`.
pub fn tree_norm_bound(k: u64, p: Exponent) -> Result<f64> {
    if k < 2 || p.value() <= 1.0 || p.is_infinite() {
        return Err(Error::InvalidParameter("tree bound needs k >= 2 and 1 < p < inf".into()));
    }
    let base = (k - 1) as f64;
    Ok(base.powf(p.reciprocal()) + base.powf(p.conjugate().reciprocal()))
}

fn ratio_with_backoff(family: &GraphFamily, budget: usize, make: impl Fn(usize) -> WitnessKind, p: Exponent) -> Result<(f64, usize)> {
    let mut n = budget;
    loop {
        match family_witness(family, &make(n)) {
            Ok(f) => return Ok((rayleigh_ratio(&f, p)?, n)),
            Err(Error::ResourceCap { .. }) if n > 1 => n /= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Certified bracket for `||S||_p` on `family`.
///
/// The upper end is the smallest applicable theorem formula; the lower end is
/// the best ratio among explicit witnesses: the indicator of a max-degree vertex
/// (its neighborhood at `p = inf`), ball indicators of radius `budget`, and on
/// trees with `1 < p < inf` the decaying tree weights.
pub fn norm_bounds(family: &GraphFamily, p: Exponent, budget: usize) -> Result<NormBracket> {
    if budget == 0 {
        return Err(Error::InvalidParameter("witness budget must be >= 1".into()));
    }
    let k = family.degree_bound() as u64;
    let mut upper = (k as f64, UpperFormula::MaxDegree);
    if family.is_tree() {
        if let Ok(b) = tree_norm_bound(k, p) {
            if b < upper.0 {
                upper = (b, UpperFormula::TreeBound);
            }
        }
    }

    let name = family.name();
    let info = |kind: &str, n: usize, big_n: Option<usize>, ratio: f64| WitnessInfo {
        family: name.clone(),
        kind: kind.into(),
        n,
        big_n,
        ratio,
    };
    let mut candidates = vec![vertex_witness(family, p)?];
    let candidates_info = |c: &mut Vec<WitnessInfo>, w| c.push(w);
    let spec = match family.kind() {
        FamilyKind::Tree(spec) => Some(spec),
        _ => None,
    };

    let ball = |n: usize| WitnessKind::BallIndicator { n };
    if let Some(spec) = spec {
        let levels = vec![1.0; budget + 1];
        candidates_info(&mut candidates, info("ball_indicator", budget, None, radial_rayleigh_ratio(spec, &levels, p)?));
    } else {
        let (r, n) = ratio_with_backoff(family, budget, ball, p)?;
        candidates_info(&mut candidates, info("ball_indicator", n, None, r));
    }

    if family.is_tree() && k >= 2 && p.value() > 1.0 && !p.is_infinite() && budget >= 2 {
        for big_n in 0..budget.min(4) {
            let kind = |n: usize| WitnessKind::TreeWeight { k, p, big_n, n };
            let (r, n) = match spec {
                Some(spec) => {
                    let w = kind(budget);
                    let levels: Vec<f64> = (0..=budget).map(|l| w.level_value(l)).collect();
                    (radial_rayleigh_ratio(spec, &levels, p)?, budget)
                }
                None => ratio_with_backoff(family, budget, kind, p)?,
            };
            candidates_info(&mut candidates, info("tree_weight", n, Some(big_n), r));
        }
    }

    let best = candidates
        .into_iter()
        .fold(None::<WitnessInfo>, |best, c| match best {
            Some(b) if b.ratio >= c.ratio => Some(b),
            _ => Some(c),
        })
        .expect("at least one witness");
    debug_assert!(best.ratio <= upper.0 + 1e-12, "witness {best:?} beats the upper bound {upper:?}");
    Ok(NormBracket {
        family: name,
        p,
        lower: best.ratio,
        upper: upper.0,
        upper_formula: upper.1,
        witness: best,
    })
}

/// Indicator of a max-degree vertex `v` (finite `p`), or of its neighborhood `A` (`p = inf`).
fn vertex_witness(family: &GraphFamily, p: Exponent) -> Result<WitnessInfo> {
    let v = family.max_degree_vertex();
    let nbrs = family.neighbors(&v)?;
    let (kind, ratio) = if p.is_infinite() {
        // ||S chi_A||_inf = max_u |N(u) ∩ A|, attained within distance 1 of A.
        let mut best = 0usize;
        for a in &nbrs {
            for u in family.neighbors(a)? {
                let hits = family.neighbors(&u)?.iter().filter(|w| nbrs.contains(w)).count();
                best = best.max(hits);
            }
        }
        ("neighborhood_indicator", best as f64)
    } else {
        ("vertex_indicator", (nbrs.len() as f64).powf(p.reciprocal()))
    };
    Ok(WitnessInfo { family: family.name(), kind: kind.into(), n: 0, big_n: None, ratio })
}

/// Power-iteration estimate of the largest singular value of the truncated
/// adjacency matrix. A `p = 2` cross-check only; never used in [`NormBracket`].
pub fn power_iteration_estimate(trunc: &Arc<Truncation>, iterations: usize) -> f64 {
    let n = trunc.len();
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + (i % 7) as f64 * 0.01).collect();
    let mut estimate = 0.0;
    for _ in 0..iterations {
        let norm_x = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let y: Vec<f64> =
            (0..n).map(|i| trunc.neighbors(i).iter().map(|&j| x[j as usize]).sum::<f64>() / norm_x).collect();
        estimate = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        if estimate == 0.0 {
            break;
        }
        x = y;
    }
    estimate
}
