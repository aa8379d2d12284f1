//! Truncated complex power series with branch-consistent log, exp, and
//! square root.
//!
//! A [`PowerSeries`] is a finite coefficient list about a center; arithmetic
//! on two series truncates to the minimum common order. `log` and `sqrt` are
//! anchored at the series center with the principal value, so a single
//! consistent branch is carried on any disc where the series is zero-free
//! (the caller certifies zero-freeness, see the domain module).

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default truncation degree for derived series (square roots of
/// derivatives etc.). Kernel coefficients decay geometrically, so 64 terms
/// exceed any desk-scale need; adaptive callers may extend this.
pub const DEFAULT_ORDER: usize = 64;

/// Coefficients below this magnitude are flushed to zero to avoid denormal
/// drag; far below every tolerance in use.
const FLUSH: f64 = 1e-300;

fn flush(c: Complex64) -> Complex64 {
    let re = if c.re.abs() < FLUSH { 0.0 } else { c.re };
    let im = if c.im.abs() < FLUSH { 0.0 } else { c.im };
    Complex64::new(re, im)
}

/// Truncated complex Taylor series; `coeffs[k]` multiplies `(z - center)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
    center: Complex64,
}

impl PowerSeries {
    /// Series about 0 from a coefficient list. Panics on an empty list
    /// (the type's invariant is `coeffs` non-empty).
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self::with_center(coeffs, Complex64::new(0.0, 0.0))
    }

    /// Series about an arbitrary center.
    pub fn with_center(coeffs: Vec<Complex64>, center: Complex64) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least one coefficient");
        let coeffs = coeffs.into_iter().map(flush).collect();
        Self { coeffs, center }
    }

    /// Series about 0 with real coefficients.
    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// The constant series `[c]`.
    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity series `z` (coefficients `[0, 1]`).
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// Truncation degree (`len - 1`).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `(z - center)^k`, zero beyond the truncation.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// Degree of the underlying polynomial after dropping trailing zeros.
    pub fn polynomial_degree(&self) -> usize {
        let mut d = self.coeffs.len() - 1;
        while d > 0 && self.coeffs[d].norm() == 0.0 {
            d -= 1;
        }
        d
    }

    /// Same series padded or cut to the given truncation degree.
    pub fn truncated(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs, center: self.center }
    }

    /// Horner evaluation of the truncated polynomial at `z`. Truncation
    /// error within the radius of validity is the caller's budget.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let u = z - self.center;
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    /// Term-by-term derivative; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::DegreeTooLow(
                "cannot differentiate a series of order 0".into(),
            ));
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Ok(Self { coeffs, center: self.center })
    }

    /// Antiderivative with integration constant 0; the order grows by one.
    pub fn integrate(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| flush(c / (k as f64 + 1.0))),
        );
        Self { coeffs, center: self.center }
    }

    /// Cauchy product truncated to the minimum common order.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.center, other.center);
        let order = self.order().min(other.order());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().enumerate().take(order + 1) {
            for (j, &b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                coeffs[i + j] += a * b;
            }
        }
        for c in &mut coeffs {
            *c = flush(*c);
        }
        Self { coeffs, center: self.center }
    }

    /// Coefficientwise sum at the minimum common order.
    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.center, other.center);
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self { coeffs, center: self.center }
    }

    /// Coefficientwise difference at the minimum common order.
    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.center, other.center);
        let order = self.order().min(other.order());
        let coeffs = (0..=order).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self { coeffs, center: self.center }
    }

    /// Series division by recursive deconvolution, truncated to the minimum
    /// common order. The divisor needs a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self> {
        debug_assert_eq!(self.center, other.center);
        let b0 = other.coeff(0);
        if b0.norm() == 0.0 {
            return Err(Error::DivisionBySingularSeries);
        }
        let order = self.order().min(other.order());
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        for k in 0..=order {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                acc -= other.coeff(j) * coeffs[k - j];
            }
            coeffs[k] = flush(acc / b0);
        }
        Ok(Self { coeffs, center: self.center })
    }

    /// Exponential by the ODE recurrence: `e = exp(s)` satisfies
    /// `e' = s' * e`, so `k e_k = sum_{j=1..k} j s_j e_{k-j}`.
    pub fn exp(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = self.coeff(0).exp();
        for k in 1..=n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeff(j) * (j as f64) * coeffs[k - j];
            }
            coeffs[k] = flush(acc / k as f64);
        }
        Self { coeffs, center: self.center }
    }

    /// Branch-anchored logarithm: `L(center) = Log s(center)` (principal)
    /// and `L' = s'/s`. Valid on any disc about the center where `s` is
    /// zero-free.
    pub fn log_branch(&self) -> Result<Self> {
        let s0 = self.coeff(0);
        if s0.norm() == 0.0 {
            return Err(Error::LogOfVanishingSeries);
        }
        let n = self.order();
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[0] = s0.ln();
        for k in 1..=n {
            // k s_k = sum_{j=1..k} j L_j s_{k-j}, solved for L_k.
            let mut acc = self.coeff(k);
            for j in 1..k {
                acc -= coeffs[j] * (j as f64 / k as f64) * self.coeff(k - j);
            }
            coeffs[k] = flush(acc / s0);
        }
        Ok(Self { coeffs, center: self.center })
    }

    /// Branch-anchored square root, `exp(log_branch(s) / 2)`; its square
    /// reproduces `s` to the truncation order.
    pub fn sqrt_branch(&self) -> Result<Self> {
        let mut log = self.log_branch()?;
        for c in &mut log.coeffs {
            *c *= 0.5;
        }
        Ok(log.exp())
    }

    /// Taylor coefficients of the same polynomial about `z0` (exact for
    /// polynomials), padded or cut to `new_order`. Uses repeated synthetic
    /// division by `(z - z0)`.
    pub fn recenter(&self, z0: Complex64, new_order: usize) -> Self {
        let shift = z0 - self.center;
        let n = self.coeffs.len();
        let mut work = self.coeffs.clone();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for slot in out.iter_mut().take(n) {
            // One synthetic division pass; the remainder is the next
            // Taylor coefficient about z0.
            let mut rem = Complex64::new(0.0, 0.0);
            for c in work.iter_mut().rev() {
                let t = *c + rem * shift;
                rem = t;
                *c = t;
            }
            *slot = flush(rem);
            work.remove(0);
            if work.is_empty() {
                break;
            }
        }
        out.resize(new_order + 1, Complex64::new(0.0, 0.0));
        Self { coeffs: out, center: z0 }
    }
}

// Serialized form: a JSON array of [re, im] pairs, index = power.
impl Serialize for PowerSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.coeffs.iter().map(|c| [c.re, c.im]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PowerSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        if pairs.is_empty() {
            return Err(D::Error::custom("power series needs at least one coefficient"));
        }
        Ok(PowerSeries::new(
            pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "expected {b} within {tol:e}, got {a} (dev {:e})",
            (a - b).norm()
        );
    }

    #[test]
    fn eval_identity_series() {
        let s = PowerSeries::from_real(&[0.0, 1.0]);
        assert_close(s.eval(c(0.5, 0.0)), c(0.5, 0.0), 0.0);
    }

    #[test]
    fn eval_constant_term() {
        let s = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        assert_close(s.eval(c(0.0, 0.0)), c(1.0, 0.0), 0.0);
    }

    #[test]
    fn eval_perturbed_disk_map() {
        let s = PowerSeries::from_real(&[0.0, 1.0, 0.2]);
        assert_close(s.eval(c(0.5, 0.0)), c(0.55, 0.0), 1e-15);
    }

    #[test]
    fn derivative_term_by_term() {
        let s = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        let d = s.derivative().unwrap();
        assert_eq!(d.coeffs(), &[c(2.0, 0.0), c(6.0, 0.0)]);

        let id = PowerSeries::from_real(&[0.0, 1.0]);
        assert_eq!(id.derivative().unwrap().coeffs(), &[c(1.0, 0.0)]);

        let psi = PowerSeries::from_real(&[0.0, 1.0, 0.2]);
        assert_eq!(psi.derivative().unwrap().coeffs(), &[c(1.0, 0.0), c(0.4, 0.0)]);
    }

    #[test]
    fn derivative_of_order_zero_errors() {
        let s = PowerSeries::from_real(&[1.0]);
        assert!(matches!(s.derivative(), Err(Error::DegreeTooLow(_))));
    }

    #[test]
    fn mul_truncates_to_min_common_order() {
        let a = PowerSeries::from_real(&[1.0, 1.0]);
        let b = PowerSeries::from_real(&[1.0, -1.0]);
        let p = a.mul(&b);
        assert_eq!(p.order(), 1);
        assert_eq!(p.coeffs(), &[c(1.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn div_matches_long_division_oracle() {
        // (1 + 0.4 z) / (1 + 0.2 z), long division by hand:
        // 1, then 0.4 - 0.2 = 0.2, then -0.2 * 0.2 = -0.04, then 0.008, ...
        let a = PowerSeries::from_real(&[1.0, 0.4]).truncated(3);
        let b = PowerSeries::from_real(&[1.0, 0.2]).truncated(3);
        let q = a.div(&b).unwrap();
        let expect = [1.0, 0.2, -0.04, 0.008];
        for (k, &e) in expect.iter().enumerate() {
            assert_abs_diff_eq!(q.coeff(k).re, e, epsilon = 1e-14);
            assert_abs_diff_eq!(q.coeff(k).im, 0.0, epsilon = 1e-14);
        }
        // Unpadded inputs truncate at the minimum common order.
        let q1 = PowerSeries::from_real(&[1.0, 0.4])
            .div(&PowerSeries::from_real(&[1.0, 0.2]))
            .unwrap();
        assert_eq!(q1.order(), 1);
    }

    #[test]
    fn div_by_singular_series_errors() {
        let a = PowerSeries::from_real(&[1.0, 1.0]);
        let b = PowerSeries::from_real(&[0.0, 1.0]);
        assert!(matches!(a.div(&b), Err(Error::DivisionBySingularSeries)));
    }

    #[test]
    fn integrate_with_zero_constant() {
        let s = PowerSeries::from_real(&[1.0, 2.0, 3.0]);
        let i = s.integrate();
        assert_eq!(i.coeffs(), &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = PowerSeries::from_real(&[0.0]).exp();
        assert_eq!(e.coeffs(), &[c(1.0, 0.0)]);
    }

    #[test]
    fn exp_reproduces_scalar_exponential() {
        let e = PowerSeries::from_real(&[std::f64::consts::LN_2]).exp();
        assert_abs_diff_eq!(e.coeff(0).re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn exp_taylor_coefficients() {
        // exp(z): 1, 1, 1/2, 1/6, 1/24
        let e = PowerSeries::identity().truncated(4).exp();
        let expect = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        for (k, &x) in expect.iter().enumerate() {
            assert_abs_diff_eq!(e.coeff(k).re, x, epsilon = 1e-15);
        }
    }

    #[test]
    fn log_of_one_is_zero() {
        let l = PowerSeries::from_real(&[1.0]).log_branch().unwrap();
        assert_eq!(l.coeffs(), &[c(0.0, 0.0)]);
    }

    #[test]
    fn log_of_constant_e_is_one() {
        let l = PowerSeries::from_real(&[std::f64::consts::E]).log_branch().unwrap();
        assert_abs_diff_eq!(l.coeff(0).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn log_matches_mercator_series_oracle() {
        // log(1 + 0.4 z): coefficient k is (-1)^(k+1) 0.4^k / k.
        let s = PowerSeries::from_real(&[1.0, 0.4]).truncated(8);
        let l = s.log_branch().unwrap();
        assert_abs_diff_eq!(l.coeff(0).re, 0.0, epsilon = 1e-15);
        for k in 1..=8usize {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let expect = sign * 0.4f64.powi(k as i32) / k as f64;
            assert_abs_diff_eq!(l.coeff(k).re, expect, epsilon = 1e-14);
        }
    }

    #[test]
    fn log_of_vanishing_series_errors() {
        let s = PowerSeries::from_real(&[0.0, 1.0]);
        assert!(matches!(s.log_branch(), Err(Error::LogOfVanishingSeries)));
        assert!(matches!(s.sqrt_branch(), Err(Error::LogOfVanishingSeries)));
    }

    #[test]
    fn sqrt_of_constants() {
        let one = PowerSeries::from_real(&[1.0]).sqrt_branch().unwrap();
        assert_eq!(one.coeffs(), &[c(1.0, 0.0)]);
        let two = PowerSeries::from_real(&[4.0]).sqrt_branch().unwrap();
        assert_abs_diff_eq!(two.coeff(0).re, 2.0, epsilon = 1e-15);
    }

    /// Binomial coefficient C(1/2, k), the independent oracle for the
    /// square-root series.
    fn half_binomial(k: usize) -> f64 {
        let mut acc = 1.0;
        for j in 0..k {
            acc *= (0.5 - j as f64) / (j as f64 + 1.0);
        }
        acc
    }

    #[test]
    fn sqrt_matches_binomial_series_oracle() {
        // (1 + 0.4 z)^{1/2}: coefficient k is C(1/2, k) 0.4^k.
        let s = PowerSeries::from_real(&[1.0, 0.4]).truncated(8);
        let r = s.sqrt_branch().unwrap();
        for k in 0..=8usize {
            let expect = half_binomial(k) * 0.4f64.powi(k as i32);
            assert_abs_diff_eq!(r.coeff(k).re, expect, epsilon = 1e-14);
        }
        // Spot values from the expansion: 1, 0.2, -0.02, 0.004.
        assert_abs_diff_eq!(r.coeff(1).re, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(r.coeff(2).re, -0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(r.coeff(3).re, 0.004, epsilon = 1e-15);
    }

    #[test]
    fn sqrt_squares_back_to_input() {
        // Zero-free degree-<=8 polynomials: dominant constant term keeps
        // them zero-free on the closed unit disc.
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let deg = rng.random_range(1..=8);
            let mut coeffs = vec![c(1.0, 0.0)];
            for _ in 0..deg {
                coeffs.push(c(
                    rng.random_range(-0.08..0.08),
                    rng.random_range(-0.08..0.08),
                ));
            }
            let s = PowerSeries::new(coeffs).truncated(16);
            let r = s.sqrt_branch().unwrap();
            let sq = r.mul(&r);
            for k in 0..=16 {
                assert!(
                    (sq.coeff(k) - s.coeff(k)).norm() <= 1e-12,
                    "coefficient {k} off by {:e}",
                    (sq.coeff(k) - s.coeff(k)).norm()
                );
            }
        }
    }

    #[test]
    fn recenter_linear_and_square() {
        let id = PowerSeries::from_real(&[0.0, 1.0]);
        let r = id.recenter(c(0.3, 0.0), 1);
        assert_eq!(r.coeffs(), &[c(0.3, 0.0), c(1.0, 0.0)]);

        let sq = PowerSeries::from_real(&[0.0, 0.0, 1.0]);
        let r = sq.recenter(c(1.0, 0.0), 2);
        assert_eq!(r.coeffs(), &[c(1.0, 0.0), c(2.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn recenter_matches_shift_oracle() {
        // psi(z) = z + 0.2 z^2 about -0.5: substitute z = -0.5 + u.
        let psi = PowerSeries::from_real(&[0.0, 1.0, 0.2]);
        let r = psi.recenter(c(-0.5, 0.0), 2);
        assert_abs_diff_eq!(r.coeff(0).re, -0.45, epsilon = 1e-15);
        assert_abs_diff_eq!(r.coeff(1).re, 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(r.coeff(2).re, 0.2, epsilon = 1e-15);
    }

    #[test]
    fn recenter_preserves_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let coeffs: Vec<Complex64> = (0..6)
                .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let s = PowerSeries::new(coeffs);
            let z0 = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            let r = s.recenter(z0, 5);
            let z = c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
            assert_close(r.eval(z), s.eval(z), 1e-12);
        }
    }

    #[test]
    fn mul_is_consistent_with_eval() {
        // Pad so the product degree fits inside the common order; then the
        // truncated product is exact and evaluation must match pointwise.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let a = PowerSeries::new(
                (0..4).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
            )
            .truncated(8);
            let b = PowerSeries::new(
                (0..5).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect(),
            )
            .truncated(8);
            let p = a.mul(&b);
            let z = c(rng.random_range(-0.9..0.9), rng.random_range(-0.9..0.9));
            assert_close(p.eval(z), a.eval(z) * b.eval(z), 1e-10);
        }
    }

    #[test]
    fn derivative_commutes_with_exp() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = PowerSeries::new(
            (0..8).map(|_| c(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))).collect(),
        );
        let e = s.exp();
        let lhs = e.derivative().unwrap();
        let rhs = s.derivative().unwrap().mul(&e);
        for k in 0..=lhs.order().min(rhs.order()) {
            assert!(
                (lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-12,
                "exp'/(' exp) mismatch at {k}"
            );
        }
    }

    #[test]
    fn serde_round_trip_as_pairs() {
        let s = PowerSeries::new(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.2, -0.1)]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, "[[0.0,0.0],[1.0,0.0],[0.2,-0.1]]");
        let back: PowerSeries = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
