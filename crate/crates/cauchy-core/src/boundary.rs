//! Functions on circles and on the boundary curve: Fourier analysis and
//! synthesis, the normalized L^2 norms, the Riesz projection realizing
//! `C_Delta`, and the monomial multipliers `M_m`, `N_n`.
//!
//! Frequencies above `N/2 - 1` are treated as absent (band-limited model);
//! aliasing beyond the band is the caller's budget.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::domain::AnalyticDomain;
use crate::error::{Error, Result};
use crate::fft;
use crate::util::{is_power_of_two, pairwise_sum_real};

/// Samples at `theta_j = 2 pi j / N` on a circle (unit circle by default)
/// or at the matching nodes `zeta_j = psi(e^{i theta_j})` on the boundary
/// curve; `N` a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryFunction {
    samples: Vec<Complex64>,
    circle_radius: f64,
}

/// Discrete Fourier coefficients of a [`BoundaryFunction`], raw FFT index
/// order; signed access through [`FourierCoefficients::coeff`].
#[derive(Clone, Debug, PartialEq)]
pub struct FourierCoefficients {
    raw: Vec<Complex64>,
}

/// Element of the Hardy space as nonnegative-frequency Taylor
/// coefficients; the squared norm is the coefficient sum of squares.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HardyFunction {
    taylor: Vec<Complex64>,
}

impl BoundaryFunction {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        Self::with_radius(samples, 1.0)
    }

    pub fn with_radius(samples: Vec<Complex64>, circle_radius: f64) -> Result<Self> {
        if samples.len() < 8 || !is_power_of_two(samples.len()) {
            return Err(Error::SizeError(format!(
                "sample count must be a power of two >= 8, got {}",
                samples.len()
            )));
        }
        Ok(Self { samples, circle_radius })
    }

    /// Samples `f(theta_j)` for `j = 0..n`.
    pub fn from_fn(n: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        Self::new((0..n).map(|j| f(tau * j as f64)).collect())
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn circle_radius(&self) -> f64 {
        self.circle_radius
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * std::f64::consts::PI * j as f64 / self.n() as f64
    }

    /// Discrete Fourier analysis, unitary up to the `1/N` convention: the
    /// coefficient sum of squares equals the normalized sample norm.
    pub fn analyze(&self) -> FourierCoefficients {
        FourierCoefficients { raw: fft::forward(&self.samples) }
    }

    /// `sqrt((1/N) sum |f_j|^2)` — the normalized L^2(circle) norm.
    pub fn l2_norm_circle(&self) -> f64 {
        let sq: Vec<f64> = self.samples.iter().map(|s| s.norm_sqr()).collect();
        (pairwise_sum_real(&sq) / self.n() as f64).sqrt()
    }

    /// `sqrt((1/2 pi) sum |f(zeta_j)|^2 |weight_j|)` — the normalized
    /// arc-length L^2(boundary) norm, for samples taken at the domain's
    /// boundary nodes.
    pub fn l2_norm_curve(&self, dom: &AnalyticDomain) -> Result<f64> {
        let nodes = dom.boundary_nodes(self.n())?;
        let terms: Vec<f64> = self
            .samples
            .iter()
            .zip(&nodes)
            .map(|(f, node)| f.norm_sqr() * node.weight.norm())
            .collect();
        Ok((pairwise_sum_real(&terms) / (2.0 * std::f64::consts::PI)).sqrt())
    }

    /// The multiplier `N_n f = e^{i n theta} f`; unimodular, norm 1.
    pub fn monomial_multiply(&self, n: u32) -> Self {
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, &s)| s * Complex64::from_polar(1.0, n as f64 * self.theta(j)))
            .collect();
        Self { samples, circle_radius: self.circle_radius }
    }

    /// Keep nonnegative frequencies as Taylor coefficients, discard the
    /// rest: the boundary realization of the Cauchy integral `C_Delta`,
    /// an operator of norm 1.
    pub fn riesz_projection(&self) -> HardyFunction {
        let coeffs = self.analyze();
        HardyFunction { taylor: coeffs.raw[..self.n() / 2].to_vec() }
    }

    /// Trigonometric interpolation onto a finer grid (`n_new >= N`, power
    /// of two): signed frequencies are preserved, new bins are zero.
    pub fn resample(&self, n_new: usize) -> Result<Self> {
        let n = self.n();
        if n_new < n {
            return Err(Error::SizeError(format!(
                "resample target {n_new} is below the source size {n}"
            )));
        }
        if !is_power_of_two(n_new) {
            return Err(Error::SizeError(format!("resample target {n_new} is not a power of two")));
        }
        if n_new == n {
            return Ok(self.clone());
        }
        let coeffs = self.analyze();
        let mut raw = vec![Complex64::new(0.0, 0.0); n_new];
        raw[..n / 2].copy_from_slice(&coeffs.raw[..n / 2]);
        for k in 1..=n / 2 {
            raw[n_new - k] = coeffs.raw[n - k];
        }
        Ok(Self { samples: fft::inverse(&raw), circle_radius: self.circle_radius })
    }
}

impl FourierCoefficients {
    /// Coefficient of `e^{i k theta}` for signed `k` in `-N/2 .. N/2 - 1`.
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.raw.len() as i64;
        debug_assert!(k >= -n / 2 && k < n / 2);
        let idx = k.rem_euclid(n) as usize;
        self.raw[idx]
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.raw
    }

    pub fn n(&self) -> usize {
        self.raw.len()
    }

    /// Inverse transform back to samples.
    pub fn synthesize(&self) -> BoundaryFunction {
        BoundaryFunction { samples: fft::inverse(&self.raw), circle_radius: 1.0 }
    }

    /// Energy in the strictly negative frequencies.
    pub fn negative_energy(&self) -> f64 {
        let n = self.raw.len();
        let sq: Vec<f64> = self.raw[n / 2..].iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum_real(&sq)
    }
}

impl HardyFunction {
    pub fn new(taylor: Vec<Complex64>) -> Self {
        Self { taylor }
    }

    pub fn from_real(taylor: &[f64]) -> Self {
        Self { taylor: taylor.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn taylor(&self) -> &[Complex64] {
        &self.taylor
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.taylor.get(k).copied().unwrap_or_else(|| Complex64::new(0.0, 0.0))
    }

    /// `sqrt(sum |a_k|^2)`.
    pub fn norm(&self) -> f64 {
        let sq: Vec<f64> = self.taylor.iter().map(|c| c.norm_sqr()).collect();
        pairwise_sum_real(&sq).sqrt()
    }

    /// Horner evaluation at an interior point.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.taylor.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// The multiplier `M_m f = z^m f`: a coefficient shift, norm 1.
    pub fn monomial_multiply(&self, m: u32) -> Self {
        let mut taylor = vec![Complex64::new(0.0, 0.0); m as usize + self.taylor.len()];
        taylor[m as usize..].copy_from_slice(&self.taylor);
        Self { taylor }
    }

    /// Coefficientwise difference, padded with zeros.
    pub fn sub(&self, other: &Self) -> Self {
        let len = self.taylor.len().max(other.taylor.len());
        Self { taylor: (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect() }
    }

    /// Boundary samples on the unit circle (valid for band-limited data).
    pub fn to_boundary(&self, n: usize) -> Result<BoundaryFunction> {
        if self.taylor.len() > n / 2 {
            return Err(Error::SizeError(format!(
                "{} Taylor coefficients do not fit in {n} samples",
                self.taylor.len()
            )));
        }
        let mut raw = vec![Complex64::new(0.0, 0.0); n];
        raw[..self.taylor.len()].copy_from_slice(&self.taylor);
        Ok(BoundaryFunction { samples: fft::inverse(&raw), circle_radius: 1.0 })
    }
}

// JSON form: { "N": ..., "samples": [[re,im],...], "circle_radius": ... }
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoundaryFunctionRepr {
    #[serde(rename = "N")]
    n: usize,
    samples: Vec<[f64; 2]>,
    circle_radius: f64,
}

impl Serialize for BoundaryFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BoundaryFunctionRepr {
            n: self.n(),
            samples: self.samples.iter().map(|c| [c.re, c.im]).collect(),
            circle_radius: self.circle_radius,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BoundaryFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BoundaryFunctionRepr::deserialize(deserializer)?;
        if repr.n != repr.samples.len() {
            return Err(D::Error::custom(format!(
                "N = {} does not match {} samples",
                repr.n,
                repr.samples.len()
            )));
        }
        let samples = repr.samples.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        BoundaryFunction::with_radius(samples, repr.circle_radius).map_err(D::Error::custom)
    }
}

// JSON form: { "taylor": [[re,im],...] }
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HardyFunctionRepr {
    taylor: Vec<[f64; 2]>,
}

impl Serialize for HardyFunction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        HardyFunctionRepr { taylor: self.taylor.iter().map(|c| [c.re, c.im]).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HardyFunction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = HardyFunctionRepr::deserialize(deserializer)?;
        Ok(HardyFunction::new(
            repr.taylor.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
        ))
    }
}

/// Random trigonometric polynomial with independent complex-Gaussian
/// coefficients on the signed band `-degree ..= degree`.
pub fn random_trig_polynomial(
    n: usize,
    degree: usize,
    rng: &mut impl rand::Rng,
) -> Result<BoundaryFunction> {
    use rand_distr::StandardNormal;
    assert!(degree < n / 2);
    let mut raw = vec![Complex64::new(0.0, 0.0); n];
    for slot in raw.iter_mut().take(degree + 1) {
        *slot = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    for k in 1..=degree {
        raw[n - k] = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    Ok(BoundaryFunction { samples: fft::inverse(&raw), circle_radius: 1.0 })
}

/// Random analytic band-limited input: complex-Gaussian coefficients with
/// a flat variance profile on degrees `0 ..= n/4`. Excites every monomial
/// channel of the operator series without aliasing.
pub fn random_analytic_input(n: usize, rng: &mut impl rand::Rng) -> Result<BoundaryFunction> {
    use rand_distr::StandardNormal;
    let mut raw = vec![Complex64::new(0.0, 0.0); n];
    for slot in raw.iter_mut().take(n / 4 + 1) {
        *slot = Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    }
    Ok(BoundaryFunction { samples: fft::inverse(&raw), circle_radius: 1.0 })
}
