//! Exact polynomial families and real root isolation on open intervals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Polynomial with exact rational coefficients in ascending degree order.
///
/// The coefficient list carries no trailing zeros; the zero polynomial is empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    /// `c x^k`.
    pub fn monomial(c: i64, k: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = BigRational::from_integer(c.into());
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    /// Integer coefficients, if every coefficient is an integer.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        self.coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
    }

    fn coeffs_f64(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Horner evaluation in floating point.
    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Exact Horner evaluation.
    pub fn eval_exact(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Polynomial {
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() }).collect())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::default();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    /// Ascending coefficients; integers as JSON numbers when they fit, else as strings.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let items: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .map(|c| match (c.is_integer(), c.to_integer().to_i64()) {
                (true, Some(i)) => serde_json::Value::from(i),
                _ => serde_json::Value::from(c.to_string()),
            })
            .collect();
        items.serialize(s)
    }
}

/// Polynomial families attached to tail graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFamily {
    /// `x^(n+1) + 2x^2 - 1`, `n >= 2`.
    KiteP(usize),
    /// `h_1 = 1`, `h_2 = -x^6 - x^4 + 1`,
    /// `h_n = (x^4 + x^2 + 1) h_(n-1) - x^2 (x^2 + 1)^2 h_(n-2)`, `n >= 1`.
    CombH(usize),
}

/// Exact polynomial of the family.
pub fn family_polynomial(kind: PolyFamily) -> Result<Polynomial> {
    match kind {
        PolyFamily::KiteP(n) => {
            if n < 2 {
                return Err(Error::InvalidParameter(format!("kite polynomial needs n >= 2, got {n}")));
            }
            Ok(&(&Polynomial::monomial(1, n + 1) + &Polynomial::monomial(2, 2)) - &Polynomial::from_ints(&[1]))
        }
        PolyFamily::CombH(n) => {
            if n < 1 {
                return Err(Error::InvalidParameter("comb polynomial needs n >= 1".into()));
            }
            let a = Polynomial::from_ints(&[1, 0, 1, 0, 1]);
            // x^2 (x^2 + 1)^2 = x^6 + 2x^4 + x^2
            let c = Polynomial::from_ints(&[0, 0, 1, 0, 2, 0, 1]);
            let mut prev = Polynomial::from_ints(&[1]);
            let mut cur = Polynomial::from_ints(&[1, 0, 0, 0, -1, 0, -1]);
            if n == 1 {
                return Ok(prev);
            }
            for _ in 2..n {
                let next = &(&a * &cur) - &(&c * &prev);
                prev = std::mem::replace(&mut cur, next);
            }
            Ok(cur)
        }
    }
}

/// Root returned by [`roots_in_open_interval`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Root {
    pub x: f64,
    /// `|p(x)|` in floating point.
    pub residual: f64,
    /// Bound the residual is certified against: bracket width times `|p'|`
    /// plus the Horner rounding allowance.
    pub bound: f64,
}

/// Scan resolution used by [`roots_in_open_interval`]: `4 deg + 64` points.
pub fn scan_points(poly: &Polynomial) -> usize {
    4 * poly.degree().unwrap_or(0) + 64
}

/// Real roots in the open interval `(a, b)`, sorted.
///
/// Sign changes on a uniform grid over `[a + tol, b - tol]` are bisected to
/// width `tol`. Roots of even multiplicity that touch zero without crossing
/// can be missed.
pub fn roots_in_open_interval(poly: &Polynomial, a: f64, b: f64, tol: f64) -> Result<Vec<Root>> {
    roots_with_grid(poly, a, b, tol, scan_points(poly))
}

/// [`roots_in_open_interval`] with an explicit number of grid points.
pub fn roots_with_grid(poly: &Polynomial, a: f64, b: f64, tol: f64, grid: usize) -> Result<Vec<Root>> {
    if !(a < b) || !(tol > 0.0) || grid < 2 {
        return Err(Error::InvalidParameter(format!("bad root search ({a}, {b}), tol {tol}, grid {grid}")));
    }
    if poly.is_zero() {
        return Err(Error::InvalidParameter("the zero polynomial has no isolated roots".into()));
    }
    let (lo, hi) = (a + tol, b - tol);
    if !(lo < hi) {
        return Ok(Vec::new());
    }
    let coeffs = poly.coeffs_f64();
    let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let dcoeffs = poly.derivative().coeffs_f64();
    let deval = |x: f64| dcoeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);

    let xs: Vec<f64> = (0..grid).map(|i| lo + (hi - lo) * i as f64 / (grid - 1) as f64).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| eval(x)).collect();
    let mut found = Vec::new();
    for i in 0..grid {
        if ys[i] == 0.0 {
            found.push(xs[i]);
        } else if i + 1 < grid && ys[i + 1] != 0.0 && (ys[i] < 0.0) != (ys[i + 1] < 0.0) {
            let (mut l, mut r, mut fl) = (xs[i], xs[i + 1], ys[i]);
            while r - l > tol {
                let mid = 0.5 * (l + r);
                let fm = eval(mid);
                if fm == 0.0 {
                    l = mid;
                    r = mid;
                    break;
                }
                if (fm < 0.0) == (fl < 0.0) {
                    l = mid;
                    fl = fm;
                } else {
                    r = mid;
                }
            }
            found.push(0.5 * (l + r));
        }
    }
    found.sort_by(f64::total_cmp);
    found.dedup_by(|x, y| (*x - *y).abs() < 10.0 * tol);
    Ok(found
        .into_iter()
        .map(|x| {
            let scale: f64 = coeffs.iter().enumerate().map(|(k, c)| c.abs() * x.abs().powi(k as i32)).sum();
            let bound = deval(x).abs() * tol + 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE);
            Root { x, residual: eval(x).abs(), bound }
        })
        .collect())
}

/// Roots in `(a, b)` with `0` removed, searched on `(a, 0)` and `(0, b)` separately.
pub fn nonzero_roots_in_open_interval(poly: &Polynomial, a: f64, b: f64, tol: f64) -> Result<Vec<Root>> {
    if !(a < 0.0 && 0.0 < b) {
        return roots_in_open_interval(poly, a, b, tol);
    }
    let mut roots = roots_in_open_interval(poly, a, 0.0, tol)?;
    roots.extend(roots_in_open_interval(poly, 0.0, b, tol)?);
    Ok(roots)
}

/// Default bisection width.
pub const ROOT_TOL: f64 = 1e-12;

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(p: &Polynomial) -> Vec<i64> {
        p.integer_coeffs().unwrap().iter().map(|c| c.to_i64().unwrap()).collect()
    }

    #[test]
    fn family_examples() {
        assert_eq!(ints(&family_polynomial(PolyFamily::KiteP(2)).unwrap()), [-1, 0, 2, 1]);
        assert_eq!(ints(&family_polynomial(PolyFamily::CombH(1)).unwrap()), [1]);
        assert_eq!(ints(&family_polynomial(PolyFamily::CombH(2)).unwrap()), [1, 0, 0, 0, -1, 0, -1]);
        // (x^4+x^2+1)(1 - x^4 - x^6) - (x^6 + 2x^4 + x^2), expanded by hand.
        assert_eq!(
            ints(&family_polynomial(PolyFamily::CombH(3)).unwrap()),
            [1, 0, 0, 0, -2, 0, -3, 0, -2, 0, -1]
        );
        assert!(family_polynomial(PolyFamily::KiteP(1)).is_err());
        assert!(family_polynomial(PolyFamily::CombH(0)).is_err());
        assert_eq!(family_polynomial(PolyFamily::CombH(2)).unwrap().to_string(), "-x^6 - x^4 + 1");
    }

    #[test]
    fn evaluation_examples() {
        let p2 = family_polynomial(PolyFamily::KiteP(2)).unwrap();
        assert!(p2.eval_exact(&BigRational::from_integer((-1).into())).is_zero());
        assert_eq!(p2.eval_f64(-1.0), 0.0);
        for n in 1..=10 {
            let h = family_polynomial(PolyFamily::CombH(n)).unwrap();
            assert!(h.eval_exact(&BigRational::zero()).is_one());
        }
        let p = Polynomial::from_ints(&[7, 3, -2]);
        assert_eq!(p.eval_f64(0.0), 7.0);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(p.eval_exact(&half), BigRational::new(8.into(), 1.into()));
    }

    #[test]
    fn comb_structure() {
        for n in 2..=30 {
            let h = family_polynomial(PolyFamily::CombH(n)).unwrap();
            assert_eq!(h.degree(), Some(4 * n - 2));
            assert_eq!(h.leading(), -BigRational::one());
            assert!(h.coeff(0).is_one());
            assert_eq!(h.reflect(), h);
            assert!(h.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero));
        }
    }

    #[test]
    fn root_examples() {
        let p = Polynomial::new(vec![BigRational::new((-1).into(), 4.into()), BigRational::zero(), BigRational::one()]);
        let roots = roots_in_open_interval(&p, -1.0, 1.0, ROOT_TOL).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].x + 0.5).abs() < 1e-11 && (roots[1].x - 0.5).abs() < 1e-11);

        let p2 = family_polynomial(PolyFamily::KiteP(2)).unwrap();
        let roots = roots_in_open_interval(&p2, -1.0, 1.0, ROOT_TOL).unwrap();
        assert_eq!(roots.len(), 1, "{roots:?}");
        assert!((roots[0].x - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-11);

        let h2 = family_polynomial(PolyFamily::CombH(2)).unwrap();
        let roots = roots_in_open_interval(&h2, 0.0, 1.0, ROOT_TOL).unwrap();
        assert_eq!(roots.len(), 1);
        // u = b^2 solves u^3 + u^2 = 1; bisect that cubic independently.
        let (mut lo, mut hi) = (0.5f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid * mid * mid + mid * mid < 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((roots[0].x - lo.sqrt()).abs() < 1e-11);
        assert!((roots[0].x - 0.868837).abs() < 1e-6);
    }

    #[test]
    fn residuals_within_bound() {
        for n in 2..=30 {
            let h = family_polynomial(PolyFamily::CombH(n)).unwrap();
            for r in nonzero_roots_in_open_interval(&h, -1.0, 1.0, ROOT_TOL).unwrap() {
                assert!(r.residual <= r.bound, "n={n} {r:?}");
            }
        }
    }

    #[test]
    fn kite_roots_satisfy_relation() {
        for n in 2..=40 {
            let p = family_polynomial(PolyFamily::KiteP(n)).unwrap();
            for r in nonzero_roots_in_open_interval(&p, -1.0, 1.0, ROOT_TOL).unwrap() {
                let x = r.x;
                assert!((x.powi(n as i32 + 1) + 2.0 * x * x - 1.0).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn comb_root_counts_and_alpha_decreasing() {
        let expected = |n: usize| match n {
            2..=6 => 2,
            7..=10 => 4,
            11..=14 => 6,
            15..=19 => 8,
            20..=23 => 10,
            _ => 12,
        };
        let mut prev_alpha = f64::INFINITY;
        for n in 2..=30 {
            let h = family_polynomial(PolyFamily::CombH(n)).unwrap();
            let roots = nonzero_roots_in_open_interval(&h, -1.0, 1.0, ROOT_TOL).unwrap();
            if n <= 23 {
                assert_eq!(roots.len(), expected(n), "n={n}");
            } else {
                assert!(roots.len() >= 12, "n={n}");
            }
            let alpha = roots.iter().map(|r| r.x).filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
            assert!(alpha < prev_alpha, "n={n}");
            prev_alpha = alpha;
        }
    }

    #[test]
    fn endpoint_roots_excluded() {
        let p = Polynomial::from_ints(&[-1, 0, 1]);
        assert!(roots_in_open_interval(&p, -1.0, 1.0, ROOT_TOL).unwrap().is_empty());
        assert!(roots_in_open_interval(&p, 1.0, 1.0, ROOT_TOL).is_err());
    }

    #[test]
    fn serializes_coefficients() {
        let h2 = family_polynomial(PolyFamily::CombH(2)).unwrap();
        assert_eq!(serde_json::to_string(&h2).unwrap(), "[1,0,0,0,-1,0,-1]");
    }

    proptest! {
        #[test]
        fn finds_separated_simple_roots(mut rs in prop::collection::vec(-90i64..90, 1..6)) {
            rs.sort();
            rs.dedup();
            prop_assume!(rs.windows(2).all(|w| w[1] - w[0] >= 3));
            // prod (x - r/100)
            let mut p = Polynomial::from_ints(&[1]);
            for r in &rs {
                p = &p * &Polynomial::new(vec![BigRational::new((-r).into(), 100.into()), BigRational::one()]);
            }
            let found = roots_in_open_interval(&p, -1.0, 1.0, ROOT_TOL).unwrap();
            prop_assert_eq!(found.len(), rs.len());
            for (f, r) in found.iter().zip(&rs) {
                prop_assert!((f.x - *r as f64 / 100.0).abs() < 1e-10);
            }
        }

        #[test]
        fn ring_identities(a in prop::collection::vec(-5i64..5, 0..6), b in prop::collection::vec(-5i64..5, 0..6), x in -3i64..3) {
            let (pa, pb) = (Polynomial::from_ints(&a), Polynomial::from_ints(&b));
            let x = BigRational::from_integer(x.into());
            prop_assert_eq!((&pa * &pb).eval_exact(&x), pa.eval_exact(&x) * pb.eval_exact(&x));
            prop_assert_eq!((&pa - &pb).eval_exact(&x), pa.eval_exact(&x) - pb.eval_exact(&x));
        }
    }
}
