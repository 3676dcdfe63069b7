//! Kernel elements of the shift on leafless trees.
//!
//! A kernel element vanishes on odd levels; at every odd vertex `w` the values
//! on the children of `w` must cancel the value on its parent. Both
//! constructors below fill in even levels one generation at a time and run in
//! exact rational arithmetic by default.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::families::{make_tree, FamilyKind, NamedSequence, TSequence, TreeSpec};
use crate::graph::{truncate, GraphFamily, Truncation};
use crate::lp::{apply_shift, Exponent, LpFunction, Values};

/// Essential branching numbers of a leafless tree.
///
/// Beyond level `2N` every child count lies in `[m, M]`, and both `m` and `M`
/// occur infinitely often.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingBounds {
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    #[serde(rename = "N")]
    pub big_n: usize,
}

impl BranchingBounds {
    pub fn new(m: u64, big_m: u64, big_n: usize) -> Result<Self> {
        if m == 0 || m > big_m {
            return Err(Error::InvalidParameter(format!("branching bounds need 1 <= m <= M, got m={m}, M={big_m}")));
        }
        Ok(Self { m, big_m, big_n })
    }

    pub fn from_tree(spec: &TreeSpec) -> Result<Self> {
        spec.validate()?;
        match spec {
            TreeSpec::Alternating { m, big_m } => Self::new(*m.min(big_m), *m.max(big_m), 0),
            TreeSpec::AlmostRegular { k, root_children } => {
                let exceptional = root_children.is_some_and(|r| r != k - 1);
                Self::new(k - 1, k - 1, usize::from(exceptional))
            }
            TreeSpec::Stretched { big_m, .. } => Self::new(1, *big_m, 0),
            TreeSpec::ExplicitBeta { levels, default } => Self::new(*default, *default, levels.len().div_ceil(2)),
        }
    }

    /// `M / m^(p-1)`, the growth bound for level sums of the inductive kernel.
    pub fn upper_growth(&self, p: Exponent) -> f64 {
        self.big_m as f64 / (self.m as f64).powf(p.value() - 1.0)
    }

    /// `m / M^(p-1)`, the decay bound for level sums of any kernel element.
    pub fn lower_growth(&self, p: Exponent) -> f64 {
        self.m as f64 / (self.big_m as f64).powf(p.value() - 1.0)
    }
}

fn even_depth(depth: usize) -> Result<()> {
    if depth % 2 != 0 {
        return Err(Error::InvalidParameter(format!("kernel depth must be even, got {depth}")));
    }
    Ok(())
}

fn check_radius(trunc: &Truncation, depth: usize) -> Result<()> {
    if trunc.radius() < depth + 1 {
        return Err(Error::InsufficientRadius { needed: depth + 1, available: trunc.radius() });
    }
    Ok(())
}

/// `(-M)^(-k)` at level `2k <= depth`, zero elsewhere, on the alternating tree
/// with `m` children at even levels and `M` at odd levels.
pub fn alternating_kernel(m: u64, big_m: u64, depth: usize) -> Result<LpFunction> {
    even_depth(depth)?;
    let family = make_tree(TreeSpec::Alternating { m, big_m })?;
    alternating_kernel_on(Arc::new(truncate(&family, depth + 1)?), depth)
}

/// [`alternating_kernel`] on an existing truncation of an alternating tree.
pub fn alternating_kernel_on(trunc: Arc<Truncation>, depth: usize) -> Result<LpFunction> {
    even_depth(depth)?;
    check_radius(&trunc, depth)?;
    let big_m = match trunc.family().kind() {
        FamilyKind::Tree(TreeSpec::Alternating { big_m, .. }) => *big_m,
        _ => return Err(Error::InvalidParameter("alternating kernel needs an alternating tree".into())),
    };
    let base = BigInt::from(-(big_m as i64));
    let by_level: Vec<BigRational> = (0..=depth)
        .map(|l| {
            if l % 2 == 0 {
                BigRational::new(BigInt::one(), num_traits::pow(base.clone(), l / 2))
            } else {
                BigRational::zero()
            }
        })
        .collect();
    let values = (0..trunc.len())
        .map(|i| by_level.get(trunc.level(i)).cloned().unwrap_or_else(BigRational::zero))
        .collect();
    LpFunction::from_exact(trunc, values)
}

/// Kernel element built by `f(root) = 1`, `f = 0` on odd levels and
/// `f(v) = -f(Par^2 v) / beta(Par v)` on even levels up to `depth`.
pub fn inductive_kernel(family: &GraphFamily, depth: usize) -> Result<LpFunction> {
    even_depth(depth)?;
    inductive_kernel_on(Arc::new(truncate(family, depth + 1)?), depth, true)
}

/// [`inductive_kernel`] on an existing truncation, exactly or in floating point.
pub fn inductive_kernel_on(trunc: Arc<Truncation>, depth: usize, exact: bool) -> Result<LpFunction> {
    even_depth(depth)?;
    check_radius(&trunc, depth)?;
    if !trunc.family().is_tree() {
        return Err(Error::InvalidParameter(format!("{} is not a tree", trunc.family().name())));
    }
    let parent = |i: usize| -> usize {
        let l = trunc.level(i);
        trunc.neighbors(i).iter().map(|&j| j as usize).find(|&j| trunc.level(j) + 1 == l).expect("non-root vertex has a parent")
    };
    let children = |i: usize| trunc.neighbors(i).iter().filter(|&&j| trunc.level(j as usize) > trunc.level(i)).count();
    for i in 0..trunc.len() {
        if trunc.level(i) < depth && children(i) == 0 {
            return Err(Error::Leaf(trunc.vertex(i).to_string()));
        }
    }

    let mut ratio = vec![BigRational::zero(); trunc.len()];
    if !trunc.is_empty() {
        ratio[0] = BigRational::one();
    }
    for i in 1..trunc.len() {
        let l = trunc.level(i);
        if l % 2 == 0 && l <= depth {
            let p = parent(i);
            let beta = BigRational::from_integer(BigInt::from(children(p)));
            ratio[i] = -&ratio[parent(p)] / beta;
        }
    }
    if exact {
        LpFunction::from_exact(trunc, ratio)
    } else {
        let values = ratio.iter().map(|r| r.to_f64().unwrap_or(f64::NAN)).collect();
        LpFunction::from_float(trunc, values)
    }
}

/// Outcome of checking `Sf = 0` on levels `0..=depth`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelCheck {
    pub depth: usize,
    pub vertices_checked: usize,
    /// Every checked entry of `Sf` is zero: exactly for rational input, below `1e-12` otherwise.
    pub is_zero: bool,
    pub max_abs: f64,
}

/// Float zero test for kernel elements.
pub const FLOAT_KERNEL_TOL: f64 = 1e-12;

/// Checks `(Sf)(v) = 0` at every vertex of level at most `depth < radius`.
pub fn kernel_check(f: &LpFunction, depth: usize) -> Result<KernelCheck> {
    let t = f.truncation();
    if depth >= t.radius() {
        return Err(Error::InsufficientRadius { needed: depth + 1, available: t.radius() });
    }
    let sf = apply_shift(f).image;
    let checked = t.level_range(depth).end;
    let (is_zero, max_abs) = match sf.values() {
        Values::Exact(v) => {
            let zero = v[..checked].iter().all(Zero::is_zero);
            let max = v[..checked].iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max);
            (zero, max)
        }
        Values::Float(v) => {
            let max = v[..checked].iter().fold(0.0f64, |m, x| m.max(x.abs()));
            (max < FLOAT_KERNEL_TOL, max)
        }
    };
    Ok(KernelCheck { depth, vertices_checked: checked, is_zero, max_abs })
}

fn serialize_exact<S: Serializer>(v: &Option<Vec<BigRational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    v.as_ref().map(|xs| xs.iter().map(ToString::to_string).collect::<Vec<_>>()).serialize(s)
}

/// Even-level power sums `sigma_k = sum_{|u| = 2k} |f(u)|^p`, `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelPowerSums {
    pub p: Exponent,
    pub sigma: Vec<f64>,
    /// `sigma_{k+1} / sigma_k`, `None` where `sigma_k = 0`.
    pub ratios: Vec<Option<f64>>,
    /// Exact sums for exact input and integer `p`.
    #[serde(serialize_with = "serialize_exact", skip_serializing_if = "Option::is_none")]
    pub exact_sigma: Option<Vec<BigRational>>,
}

impl LevelPowerSums {
    /// Exact `sigma_{k+1} / sigma_k` where available.
    pub fn exact_ratios(&self) -> Option<Vec<Option<BigRational>>> {
        let s = self.exact_sigma.as_ref()?;
        Some(s.windows(2).map(|w| (!w[0].is_zero()).then(|| &w[1] / &w[0])).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,sigma_k,ratio\n");
        for (k, s) in self.sigma.iter().enumerate() {
            let ratio = self.ratios.get(k).copied().flatten().map(|r| r.to_string()).unwrap_or_default();
            out.push_str(&format!("{k},{s},{ratio}\n"));
        }
        out
    }
}

/// Level power sums of a kernel-shaped function, for `k` up to `(radius - 1) / 2`.
pub fn level_power_sums(f: &LpFunction, p: Exponent) -> Result<LevelPowerSums> {
    if p.is_infinite() {
        return Err(Error::InvalidParameter("level power sums need finite p".into()));
    }
    let t = f.truncation();
    if t.radius() == 0 {
        return Err(Error::InsufficientRadius { needed: 1, available: 0 });
    }
    if let Some(i) = (0..f.len()).find(|&i| t.level(i) % 2 == 1 && f.get_f64(i) != 0.0) {
        return Err(Error::InvalidParameter(format!("function is nonzero on odd-level vertex {}", t.vertex(i))));
    }
    let big_k = (t.radius() - 1) / 2;
    let sigma: Vec<f64> = (0..=big_k)
        .map(|k| t.level_range(2 * k).map(|i| f.get_f64(i).abs().powf(p.value())).sum())
        .collect();
    let ratios = sigma.windows(2).map(|w| (w[0] > 0.0).then(|| w[1] / w[0])).collect();
    let exact_sigma = match (p.as_integer(), f.is_exact()) {
        (Some(pi), true) => Some(
            (0..=big_k)
                .map(|k| {
                    t.level_range(2 * k)
                        .map(|i| num_traits::pow(f.get_exact(i).expect("exact").abs(), pi as usize))
                        .sum()
                })
                .collect(),
        ),
        _ => None,
    };
    Ok(LevelPowerSums { p, sigma, ratios, exact_sigma })
}

/// Kernel triviality verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Trivial,
    Nontrivial,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Trivial => "Trivial",
            Verdict::Nontrivial => "Nontrivial",
            Verdict::Undetermined => "Undetermined",
        })
    }
}

/// Verdict on `ker S` in lp together with the rule that decided it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelClass {
    pub m: u64,
    #[serde(rename = "M")]
    pub big_m: u64,
    pub p: Exponent,
    pub verdict: Verdict,
    pub theorem: String,
}

const THRESHOLD_TOL: f64 = 1e-12;

/// Classifies `ker S` in lp from the essential branching bounds alone.
///
/// * `Trivial` when `M = 1` and `p < inf`, or `p <= 1 + log_M m` (boundary included);
/// * `Nontrivial` when `m > 1` and `p > 1 + log_m M`, or `p = inf`;
/// * `Undetermined` in the band between the two thresholds.
pub fn classify_kernel(bounds: &BranchingBounds, p: Exponent) -> KernelClass {
    let (m, big_m) = (bounds.m, bounds.big_m);
    let (ln_m, ln_big_m) = ((m as f64).ln(), (big_m as f64).ln());
    let (verdict, theorem) = if p.is_infinite() {
        (Verdict::Nontrivial, "nontrivial: p = inf")
    } else if big_m == 1 {
        (Verdict::Trivial, "trivial: M = 1, p < inf")
    } else if (p.value() - 1.0) * ln_big_m <= ln_m + THRESHOLD_TOL {
        (Verdict::Trivial, "trivial: p <= 1 + log_M(m)")
    } else if m > 1 && (p.value() - 1.0) * ln_m > ln_big_m + THRESHOLD_TOL {
        (Verdict::Nontrivial, "nontrivial: p > 1 + log_m(M)")
    } else {
        (Verdict::Undetermined, "open: 1 + log_M(m) < p <= 1 + log_m(M)")
    };
    KernelClass { m, big_m, p, verdict, theorem: theorem.into() }
}

fn ln_term(t: &TSequence, j: usize) -> f64 {
    match t {
        TSequence::Named(NamedSequence::Squares) => ((j - 1) * (j - 1)) as f64 * std::f64::consts::LN_2,
        TSequence::Named(NamedSequence::Selfpow) => (j - 1) as f64 * (j as f64).ln(),
        TSequence::Prefix(_) => (t.term(j) as f64).ln(),
    }
}

/// Partial sums `S_J = sum_{j <= J} t_j M^(-(j-1)p)` for `J = 1..=big_j`.
pub fn stretched_partial_sums(big_m: u64, t: &TSequence, p: Exponent, big_j: usize) -> Result<Vec<f64>> {
    if big_j == 0 || big_m < 2 || p.is_infinite() {
        return Err(Error::InvalidParameter("stretched partial sums need J >= 1, M >= 2 and finite p".into()));
    }
    TreeSpec::Stretched { big_m, t: t.clone() }.validate()?;
    let ln_big_m = (big_m as f64).ln();
    let mut total = 0.0;
    Ok((1..=big_j)
        .map(|j| {
            let direct = t.term_f64(j) / (big_m as f64).powf((j - 1) as f64 * p.value());
            total += if direct.is_finite() && direct > 0.0 {
                direct
            } else {
                (ln_term(t, j) - (j - 1) as f64 * p.value() * ln_big_m).exp()
            };
            total
        })
        .collect())
}
