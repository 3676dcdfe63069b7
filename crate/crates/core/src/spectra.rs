//! Spectra of finite graphs with an infinite tail attached, and of the infinite comb.
//!
//! An eigenvector either vanishes on the tail (zero branch, `|lambda| <= 2`) or
//! decays along it as `f(u_j) = b^j` with `lambda = b + 1/b`, `0 < |b| < 1`
//! (tail branch). The essential spectrum of every tail graph is `[-2, 2]`.
//!
//! Vertex conventions: the kite is the cycle `v_0 .. v_n` with the tail at `v_0`;
//! the fly-swatter is the complete graph on `v_0 .. v_n` with the tail at `v_0`;
//! the comb is the spine `v_1 .. v_n` with teeth `w_j ~ v_j` and the tail at `v_n`.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{make_tail_graph, TailKind};
use crate::graph::{truncate, TailRole, VertexId};
use crate::lp::{apply_shift, LpFunction};
use crate::poly::{family_polynomial, nonzero_roots_in_open_interval, PolyFamily, ROOT_TOL};

/// Which kind of eigenvector an eigenvalue carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    ZeroBranch,
    TailBranch,
}

/// Eigenvalue of a tail graph with the certificate of its eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEigenpair {
    pub lambda: f64,
    /// Tail decay parameter; absent on the zero branch.
    pub b: Option<f64>,
    pub branch: Branch,
    /// `max |(Sf)(v) - lambda f(v)|` over the interior of the certifying truncation.
    pub residual: f64,
    /// Lies inside the essential spectrum `[-2, 2]`.
    pub embedded: bool,
}

impl TailEigenpair {
    fn zero(lambda: f64) -> Self {
        Self { lambda, b: None, branch: Branch::ZeroBranch, residual: 0.0, embedded: lambda.abs() <= 2.0 }
    }

    fn tail(b: f64) -> Self {
        let lambda = b + 1.0 / b;
        Self { lambda, b: Some(b), branch: Branch::TailBranch, residual: 0.0, embedded: lambda.abs() <= 2.0 }
    }
}

/// Essential intervals plus point spectrum sorted by eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub essential: Vec<[f64; 2]>,
    pub point: Vec<TailEigenpair>,
}

impl Spectrum {
    /// Distinct point eigenvalues, merging values closer than `1e-10`.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.point.iter().map(|e| e.lambda).collect();
        out.sort_by(f64::total_cmp);
        out.dedup_by(|a, b| (*a - *b).abs() < 1e-10);
        out
    }

    /// Membership in the union of the essential intervals and the point spectrum.
    pub fn contains(&self, lambda: f64, tol: f64) -> bool {
        self.essential.iter().any(|[a, b]| *a - tol <= lambda && lambda <= *b + tol)
            || self.point.iter().any(|e| (e.lambda - lambda).abs() <= tol)
    }
}

/// Essential spectrum of every tail graph.
pub const TAIL_ESSENTIAL: [f64; 2] = [-2.0, 2.0];

/// Depth of the truncation that certifies eigenvectors by default.
pub const CERTIFICATE_DEPTH: usize = 60;

/// The decaying root `b` of `t^2 - lambda t + 1 = 0`; `|b| < 1`, `sign(b) = sign(lambda)`.
pub fn tail_parameter(lambda: f64) -> Result<f64> {
    if !(lambda.abs() > 2.0) {
        return Err(Error::Spectral(format!("|lambda| = {} <= 2 admits no decaying tail", lambda.abs())));
    }
    // 2 / (lambda + sign * sqrt) avoids cancellation in (lambda - sign * sqrt) / 2.
    Ok(2.0 / (lambda + lambda.signum() * (lambda * lambda - 4.0).sqrt()))
}

/// Eigenvalues whose eigenvectors vanish on the tail.
pub fn zero_branch_eigenvalues(kind: TailKind) -> Result<Vec<f64>> {
    check_n(kind)?;
    Ok(match kind {
        TailKind::Kite(n) => (1..=n / 2).map(|j| 2.0 * (2.0 * PI * j as f64 / (n + 1) as f64).cos()).collect(),
        TailKind::FlySwatter(_) => vec![-1.0],
        TailKind::CombWithTail(_) => Vec::new(),
    })
}

fn check_n(kind: TailKind) -> Result<()> {
    if kind.n() < 2 {
        return Err(Error::InvalidParameter(format!("{} needs n >= 2", kind.name())));
    }
    Ok(())
}

/// `b = -1/2 + sqrt((n + 3) / (n - 1)) / 2`, the fly-swatter's decay parameter.
pub fn fly_swatter_parameter(n: usize) -> Result<f64> {
    check_n(TailKind::FlySwatter(n))?;
    Ok(-0.5 + 0.5 * ((n as f64 + 3.0) / (n as f64 - 1.0)).sqrt())
}

fn tail_branch_uncertified(kind: TailKind) -> Result<Vec<TailEigenpair>> {
    check_n(kind)?;
    let poly = match kind {
        TailKind::Kite(n) => family_polynomial(PolyFamily::KiteP(n))?,
        TailKind::CombWithTail(n) => family_polynomial(PolyFamily::CombH(n))?,
        TailKind::FlySwatter(n) => return Ok(vec![TailEigenpair::tail(fly_swatter_parameter(n)?)]),
    };
    let roots = nonzero_roots_in_open_interval(&poly, -1.0, 1.0, ROOT_TOL)?;
    let mut pairs: Vec<TailEigenpair> = roots.iter().map(|r| TailEigenpair::tail(r.x)).collect();
    pairs.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(pairs)
}

fn certify(kind: TailKind, mut pair: TailEigenpair) -> Result<TailEigenpair> {
    let depth = CERTIFICATE_DEPTH.max(kind.n() + 5);
    pair.residual = synthesize_eigenvector(kind, &pair, depth)?.1;
    Ok(pair)
}

/// Tail-branch eigenpairs, each certified by a synthesized eigenvector.
pub fn tail_branch_eigenvalues(kind: TailKind) -> Result<Vec<TailEigenpair>> {
    tail_branch_uncertified(kind)?.into_iter().map(|p| certify(kind, p)).collect()
}

/// Finite-part values of the eigenvector; the tail is `b^j` (or zero on the zero branch).
fn finite_part(kind: TailKind, pair: &TailEigenpair) -> Result<Vec<(VertexId, f64)>> {
    let n = kind.n();
    let lambda = pair.lambda;
    match (pair.branch, kind, pair.b) {
        (Branch::TailBranch, TailKind::Kite(_), Some(b)) => {
            let denom = 1.0 + b.powi(n as i32 + 1);
            Ok((0..=n)
                .map(|k| (VertexId::v(k as u64), (b.powi(k as i32) + b.powi((n - k + 1) as i32)) / denom))
                .collect())
        }
        (Branch::TailBranch, TailKind::FlySwatter(_), Some(_)) => {
            let x = 1.0 / (lambda - (n as f64 - 1.0));
            Ok(std::iter::once((VertexId::v(0), 1.0)).chain((1..=n).map(|k| (VertexId::v(k as u64), x))).collect())
        }
        (Branch::TailBranch, TailKind::CombWithTail(_), Some(b)) => {
            let mu = lambda - 1.0 / lambda;
            let mut x = vec![0.0; n + 2];
            x[n] = 1.0;
            x[n - 1] = mu - b;
            for j in (2..n).rev() {
                x[j - 1] = mu * x[j] - x[j + 1];
            }
            let mut out = Vec::with_capacity(2 * n);
            for (j, &xj) in x.iter().enumerate().take(n + 1).skip(1) {
                out.push((VertexId::v(j as u64), xj));
                out.push((VertexId::w(j as u64), xj / lambda));
            }
            Ok(out)
        }
        (Branch::ZeroBranch, TailKind::Kite(_), _) => {
            let theta = (lambda / 2.0).clamp(-1.0, 1.0).acos();
            Ok((0..=n).map(|k| (VertexId::v(k as u64), (k as f64 * theta).sin())).collect())
        }
        (Branch::ZeroBranch, TailKind::FlySwatter(_), _) => {
            if (lambda + 1.0).abs() > 1e-12 {
                return Err(Error::Spectral(format!("{lambda} is not a zero-branch eigenvalue of {}", kind.name())));
            }
            Ok((0..=n as u64).map(|k| (VertexId::v(k), [0.0, 1.0, -1.0].get(k as usize).copied().unwrap_or(0.0))).collect())
        }
        (Branch::ZeroBranch, TailKind::CombWithTail(_), _) => {
            Err(Error::Spectral("the comb with a tail has no zero-branch eigenvalues".into()))
        }
        (Branch::TailBranch, _, None) => Err(Error::Spectral("tail-branch pair without b".into())),
    }
}

/// Builds the eigenvector of `pair` on the ball of radius `depth` around the
/// distinguished vertex and returns it with its interior residual
/// `max |(Sf)(v) - lambda f(v)|`.
///
/// Kite and fly-swatter vectors satisfy `f(v_0) = 1` on the tail branch, the
/// comb satisfies `f(v_n) = 1`; tails carry `f(u_j) = b^j`.
pub fn synthesize_eigenvector(kind: TailKind, pair: &TailEigenpair, depth: usize) -> Result<(LpFunction, f64)> {
    check_n(kind)?;
    if depth < kind.n() + 5 {
        return Err(Error::InsufficientRadius { needed: kind.n() + 5, available: depth });
    }
    if let Some(b) = pair.b {
        if !(b.abs() < 1.0) || b == 0.0 {
            return Err(Error::Spectral(format!("tail parameter {b} does not decay")));
        }
    }
    let finite = finite_part(kind, pair)?;
    let family = make_tail_graph(kind)?;
    let trunc = Arc::new(truncate(&family, depth)?);
    let mut values = vec![0.0; trunc.len()];
    for (v, x) in finite {
        let i = trunc.index_of(&v).ok_or_else(|| Error::Spectral(format!("{v} outside the certifying ball")))?;
        values[i] = x;
    }
    if let Some(b) = pair.b {
        for (i, v) in trunc.vertices().iter().enumerate() {
            if let VertexId::TailVertex { role: TailRole::U, index } = v {
                values[i] = b.powi(*index as i32);
            }
        }
    }
    let f = LpFunction::from_float(trunc.clone(), values)?;
    let sf = apply_shift(&f).image;
    let residual = (0..trunc.len())
        .filter(|&i| trunc.is_interior(i))
        .map(|i| (sf.get_f64(i) - pair.lambda * f.get_f64(i)).abs())
        .fold(0.0, f64::max);
    Ok((f, residual))
}

/// `[-2, 2]` together with every certified eigenvalue.
pub fn full_spectrum(kind: TailKind) -> Result<Spectrum> {
    let mut point: Vec<TailEigenpair> = zero_branch_eigenvalues(kind)?
        .into_iter()
        .map(|l| certify(kind, TailEigenpair::zero(l)))
        .collect::<Result<_>>()?;
    point.extend(tail_branch_eigenvalues(kind)?);
    point.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    Ok(Spectrum { essential: vec![TAIL_ESSENTIAL], point })
}

/// `[-1 - sqrt 2, 1 - sqrt 2]` and `[-1 + sqrt 2, 1 + sqrt 2]`.
pub fn infinite_comb_intervals() -> [[f64; 2]; 2] {
    [[-1.0 - SQRT_2, 1.0 - SQRT_2], [-1.0 + SQRT_2, 1.0 + SQRT_2]]
}

/// Spectrum of the infinite comb; it has no eigenvalues.
pub fn infinite_comb_spectrum() -> Spectrum {
    Spectrum { essential: infinite_comb_intervals().to_vec(), point: Vec::new() }
}

const MEMBERSHIP_TOL: f64 = 1e-12;

/// `lambda != 0` and `lambda - 1/lambda` lies in the spectrum `[-2, 2]` of the ray-like spine.
pub fn infinite_comb_criterion(lambda: f64) -> bool {
    lambda != 0.0 && (lambda - 1.0 / lambda).abs() <= 2.0 + MEMBERSHIP_TOL
}

/// Membership in the two closed spectral intervals.
pub fn in_infinite_comb_intervals(lambda: f64) -> bool {
    infinite_comb_intervals().iter().any(|[a, b]| *a - MEMBERSHIP_TOL <= lambda && lambda <= *b + MEMBERSHIP_TOL)
}

/// Membership verdict for the infinite comb, computed both ways.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombMembership {
    pub lambda_in_spectrum: bool,
    pub criterion: bool,
    pub intervals: bool,
}

pub fn infinite_comb_membership(lambda: f64) -> CombMembership {
    let criterion = infinite_comb_criterion(lambda);
    let intervals = in_infinite_comb_intervals(lambda);
    CombMembership { lambda_in_spectrum: criterion && intervals, criterion, intervals }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{lp_norm, Exponent};
    use rand::{Rng, SeedableRng};

    #[test]
    fn tail_parameter_examples() {
        assert!((tail_parameter(2.5).unwrap() - 0.5).abs() < 1e-15);
        assert!((tail_parameter(5f64.sqrt()).unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((tail_parameter(-3.0).unwrap() - (-3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-15);
        for bad in [2.0, -2.0, 0.3, f64::NAN] {
            assert!(tail_parameter(bad).is_err());
        }
    }

    #[test]
    fn zero_branch_examples() {
        let k2 = zero_branch_eigenvalues(TailKind::Kite(2)).unwrap();
        assert_eq!(k2.len(), 1);
        assert!((k2[0] + 1.0).abs() < 1e-12);
        let k4 = zero_branch_eigenvalues(TailKind::Kite(4)).unwrap();
        assert!((k4[0] - 0.6180340).abs() < 1e-7 && (k4[1] + 1.6180340).abs() < 1e-7);
        assert!(zero_branch_eigenvalues(TailKind::CombWithTail(9)).unwrap().is_empty());
        assert_eq!(zero_branch_eigenvalues(TailKind::FlySwatter(5)).unwrap(), [-1.0]);
    }

    #[test]
    fn tail_branch_examples() {
        let k2 = tail_branch_eigenvalues(TailKind::Kite(2)).unwrap();
        assert_eq!(k2.len(), 1);
        assert!((k2[0].lambda - 5f64.sqrt()).abs() < 1e-10);

        let f3 = tail_branch_eigenvalues(TailKind::FlySwatter(3)).unwrap();
        assert!((f3[0].b.unwrap() - 0.3660254).abs() < 1e-7);
        assert!((f3[0].lambda - 3.0980762).abs() < 1e-7);

        let c2 = tail_branch_eigenvalues(TailKind::CombWithTail(2)).unwrap();
        assert_eq!(c2.len(), 2);
        // b^2 = u with u^3 + u^2 = 1, u = 0.7548776662466927...
        let b = 0.754_877_666_246_692_7f64.sqrt();
        assert!((c2[1].lambda - (b + 1.0 / b)).abs() < 1e-10);
        assert!((c2[1].lambda - 2.0198009).abs() < 1e-6 && (c2[0].lambda + c2[1].lambda).abs() < 1e-10);

        let k3 = tail_branch_eigenvalues(TailKind::Kite(3)).unwrap();
        let want = (2.0 + 2.0 * SQRT_2).sqrt();
        assert_eq!(k3.len(), 2);
        assert!((k3[0].lambda + want).abs() < 1e-10 && (k3[1].lambda - want).abs() < 1e-10);
    }

    #[test]
    fn synthesis_examples() {
        let b = (5f64.sqrt() - 1.0) / 2.0;
        let pair = TailEigenpair::tail(b);
        let (f, r) = synthesize_eigenvector(TailKind::Kite(2), &pair, 40).unwrap();
        assert!(r < 1e-10);
        assert_eq!(f.value_at(&VertexId::v(0)), Some(1.0));

        let (g, r) = synthesize_eigenvector(TailKind::FlySwatter(2), &pair, 40).unwrap();
        assert!(r < 1e-10);
        let x = 1.0 / (5f64.sqrt() - 1.0);
        assert!((g.value_at(&VertexId::v(1)).unwrap() - x).abs() < 1e-15);
        assert!((x - 0.8090170).abs() < 1e-7);

        let c2 = tail_branch_eigenvalues(TailKind::CombWithTail(2)).unwrap();
        let (h, r) = synthesize_eigenvector(TailKind::CombWithTail(2), &c2[1], 60).unwrap();
        assert!(r < 1e-8);
        assert_eq!(h.value_at(&VertexId::v(2)), Some(1.0));

        assert!(synthesize_eigenvector(TailKind::Kite(2), &pair, 6).is_err());
        assert!(synthesize_eigenvector(TailKind::CombWithTail(3), &TailEigenpair::zero(0.5), 60).is_err());
    }

    #[test]
    fn full_spectrum_examples() {
        for kind in [TailKind::Kite(2), TailKind::FlySwatter(2)] {
            let s = full_spectrum(kind).unwrap();
            assert_eq!(s.essential, vec![[-2.0, 2.0]]);
            let ev = s.eigenvalues();
            assert_eq!(ev.len(), 2);
            assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 5f64.sqrt()).abs() < 1e-9);
            assert!(s.point[0].embedded && !s.point[1].embedded);
            assert!(s.point.iter().all(|p| p.residual < 1e-10));
        }
        let c6 = full_spectrum(TailKind::CombWithTail(6)).unwrap();
        assert_eq!(c6.point.len(), 2);
        let json = serde_json::to_value(&c6).unwrap();
        assert_eq!(json["essential"], serde_json::json!([[-2.0, 2.0]]));
        assert_eq!(json["point"][0]["branch"], "TailBranch");
    }

    #[test]
    fn eigenpair_consistency() {
        let mut kinds: Vec<TailKind> = (2..=12).map(TailKind::Kite).collect();
        kinds.extend((2..=10).map(TailKind::FlySwatter));
        kinds.extend((2..=30).map(TailKind::CombWithTail));
        for kind in kinds {
            for pair in tail_branch_eigenvalues(kind).unwrap() {
                let b = pair.b.unwrap();
                assert!((pair.lambda - (b + 1.0 / b)).abs() < 1e-10);
                assert!(b.abs() < 1.0 - 1e-9 && pair.lambda.abs() > 2.0);
                let (f, r) = synthesize_eigenvector(kind, &pair, 60).unwrap();
                assert!(r < 1e-8, "{kind:?} {pair:?} residual {r}");
                assert_eq!(f.value_at(&VertexId::u(3)), Some(b.powi(3)));
                for p in [1.0, 2.0, 3.5] {
                    assert!(b.abs().powf(p) < 1.0);
                    assert!(lp_norm(&f, Exponent::new(p).unwrap()).is_finite());
                }
            }
        }
    }

    #[test]
    fn kite_zero_branch_certified() {
        for n in 2..=12 {
            for pair in full_spectrum(TailKind::Kite(n)).unwrap().point {
                if pair.branch == Branch::ZeroBranch {
                    assert!(pair.residual < 1e-10, "n={n} {pair:?}");
                    assert!(pair.lambda.abs() <= 2.0);
                }
            }
        }
    }

    #[test]
    fn comb_containment_and_symmetry() {
        for n in 2..=30 {
            let s = full_spectrum(TailKind::CombWithTail(n)).unwrap();
            let ev: Vec<f64> = s.point.iter().map(|p| p.lambda).collect();
            for l in &ev {
                assert!((2.0..=1.0 + SQRT_2).contains(&l.abs()), "n={n} {l}");
            }
            for (a, b) in ev.iter().zip(ev.iter().rev()) {
                assert!((a + b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn infinite_comb_examples() {
        let s = infinite_comb_spectrum();
        assert!(s.point.is_empty());
        assert!(!infinite_comb_membership(0.0).lambda_in_spectrum);
        assert!(infinite_comb_membership(1.0 + SQRT_2).lambda_in_spectrum);
        assert!(infinite_comb_membership(1.0).lambda_in_spectrum);
        assert!(infinite_comb_membership(2.0).lambda_in_spectrum);
        assert!(!infinite_comb_membership(3.0).criterion);
    }

    #[test]
    fn criterion_matches_intervals() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..10_000 {
            let l: f64 = rng.gen_range(-4.0..4.0);
            assert_eq!(infinite_comb_criterion(l), in_infinite_comb_intervals(l), "{l}");
        }
    }
}
