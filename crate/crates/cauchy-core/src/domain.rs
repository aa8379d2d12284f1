//! The domain `D = psi(Delta)` for a map `psi` analytic and conformal on a
//! disc of radius `R > 1`, together with the evidence backing that claim:
//! zero-freeness of `psi'` (exact for polynomials via root finding) and
//! sampled injectivity of the boundary circles (pairwise distances, segment
//! crossings, winding number).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::power_series::PowerSeries;

/// Hard cap on the certified radius for entire, everywhere-injective maps
/// such as the identity; keeps sup-norm evaluations well-conditioned.
pub const R_CAP: f64 = 4.0;

/// Safety factor applied to the smallest binding radius.
pub const R_SAFETY: f64 = 0.95;

/// Sample count for the injectivity evidence in [`validate_conformal`].
const INJECTIVITY_SAMPLES: usize = 2048;

/// The domain `D = psi(Delta)` with its certified radius and the
/// branch-anchored square root of `psi'`.
#[derive(Clone, Debug)]
pub struct AnalyticDomain {
    name: String,
    psi: PowerSeries,
    psi_prime: PowerSeries,
    half_derivative: PowerSeries,
    radius: f64,
    /// Coarse boundary samples cached for distance queries.
    boundary_cache: Vec<Complex64>,
    diameter: f64,
}

/// Radii `1 < r < s < R` for the double contour extraction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiiPair {
    pub r: f64,
    pub s: f64,
}

impl RadiiPair {
    /// Validates the strict chain `1 < r < s < big_r`.
    pub fn new(r: f64, s: f64, big_r: f64) -> Result<Self> {
        if !(1.0 < r && r < s && s < big_r) {
            return Err(Error::RadiiError { r, s, big_r });
        }
        Ok(Self { r, s })
    }

    /// Geometric spacing inside `(1, R)`: `r = R^(1/3)`, `s = R^(2/3)`.
    /// Balances coefficient decay (wants `r` large) against the growth of
    /// the kernel sup-norm near `R`.
    pub fn default_for(big_r: f64) -> Result<Self> {
        Self::new(big_r.powf(1.0 / 3.0), big_r.powf(2.0 / 3.0), big_r)
    }
}

/// Evidence gathered by [`validate_conformal`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValidationReport {
    pub r_check: f64,
    /// Minimum of |psi'| over a dense grid on the closed disc.
    pub min_abs_psi_prime: f64,
    /// Modulus of the smallest root of psi' (None when psi' is root-free).
    pub min_root_modulus: Option<f64>,
    /// Minimum distance between non-adjacent boundary samples.
    pub injectivity_min_distance: f64,
    /// Winding number of the image circle about psi(0).
    pub winding_number: i64,
    pub samples: usize,
}

/// One trapezoidal quadrature node on the boundary curve:
/// `zeta = psi(e^{i theta})`, `weight = psi'(e^{i theta}) i e^{i theta} (2 pi / N)`,
/// the exact `d zeta` element.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryNode {
    pub theta: f64,
    pub zeta: Complex64,
    pub weight: Complex64,
}

impl AnalyticDomain {
    /// Builds the domain, estimating `R` when not supplied, and runs the
    /// conformality + injectivity validation at that radius.
    pub fn new(name: impl Into<String>, psi: PowerSeries, radius: Option<f64>) -> Result<Self> {
        let radius = match radius {
            Some(r) if r > 1.0 => r,
            Some(r) => return Err(Error::BoundaryNotAnalytic(r)),
            None => estimate_radius(&psi)?,
        };
        validate_conformal(&psi, radius)?;
        let psi_prime = psi.derivative()?;
        let half_derivative = adaptive_sqrt(&psi_prime, radius)?;

        let n_cache = 512;
        let boundary_cache: Vec<Complex64> = (0..n_cache)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / n_cache as f64;
                psi.eval(Complex64::from_polar(1.0, theta))
            })
            .collect();
        let mut diameter = 0.0f64;
        for i in 0..n_cache {
            for j in (i + 1)..n_cache {
                diameter = diameter.max((boundary_cache[i] - boundary_cache[j]).norm());
            }
        }

        Ok(Self {
            name: name.into(),
            psi,
            psi_prime,
            half_derivative,
            radius,
            boundary_cache,
            diameter,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn psi(&self) -> &PowerSeries {
        &self.psi
    }

    pub fn psi_prime(&self) -> &PowerSeries {
        &self.psi_prime
    }

    /// The branch-anchored series for `psi'^{1/2}`; valid on `|z| <= R`.
    pub fn half_derivative(&self) -> &PowerSeries {
        &self.half_derivative
    }

    /// Certified radius of analyticity + injectivity.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Diameter of `D` from the cached boundary samples.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    /// Exclusion distance for interior quadrature: 5% of the diameter.
    pub fn delta_min(&self) -> f64 {
        0.05 * self.diameter
    }

    /// Distance from `w` to the sampled boundary.
    pub fn boundary_distance(&self, w: Complex64) -> f64 {
        self.boundary_cache
            .iter()
            .map(|&zeta| (zeta - w).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// `psi'(z)^{1/2}` along the branch anchored at the origin.
    pub fn half_derivative_at(&self, z: Complex64) -> Complex64 {
        self.half_derivative.eval(z)
    }

    /// Newton inversion of `psi` at `w`, starting from `z0 = w` (the map is
    /// a perturbation of the identity in all presets) with step halving on
    /// overshoot past `|z| = 1.5`.
    pub fn invert(&self, w: Complex64, tol: f64) -> Result<Complex64> {
        let mut z = w;
        for _ in 0..100 {
            let f = self.psi.eval(z) - w;
            if f.norm() <= tol {
                if z.norm() >= 1.0 + 1e-9 {
                    return Err(Error::InversionDiverged { w });
                }
                return Ok(z);
            }
            let d = self.psi_prime.eval(z);
            if d.norm() == 0.0 {
                return Err(Error::InversionDiverged { w });
            }
            let mut step = -f / d;
            let mut next = z + step;
            let mut halvings = 0;
            while next.norm() > 1.5 && halvings < 40 {
                step *= 0.5;
                next = z + step;
                halvings += 1;
            }
            z = next;
        }
        Err(Error::InversionDiverged { w })
    }

    /// Equispaced trapezoidal nodes for `∮_{∂D} · d zeta`; `n` a power of
    /// two, at least 8.
    pub fn boundary_nodes(&self, n: usize) -> Result<Vec<BoundaryNode>> {
        if n < 8 || !crate::util::is_power_of_two(n) {
            return Err(Error::SizeError(format!(
                "boundary node count must be a power of two >= 8, got {n}"
            )));
        }
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        Ok((0..n)
            .map(|j| {
                let theta = tau * j as f64;
                let w = Complex64::from_polar(1.0, theta);
                let zeta = self.psi.eval(w);
                let weight = self.psi_prime.eval(w) * Complex64::new(0.0, 1.0) * w * tau;
                BoundaryNode { theta, zeta, weight }
            })
            .collect())
    }

    /// Hash of the defining data; expansions record it so operators can
    /// verify provenance.
    pub fn provenance_hash(&self) -> u64 {
        let mut h = 0xcbf29ce484222325u64; // FNV-1a
        let mut eat = |bits: u64| {
            for byte in bits.to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x100000001b3);
            }
        };
        for c in self.psi.coeffs() {
            eat(c.re.to_bits());
            eat(c.im.to_bits());
        }
        eat(self.radius.to_bits());
        h
    }
}

/// Square root of `series` with the truncation order grown until the
/// evaluation tail at radius `rho` is below roundoff. The series for
/// `psi'^{1/2}` converges up to the nearest root of `psi'`, which the
/// certified radius keeps strictly outside `|z| = rho`.
fn adaptive_sqrt(series: &PowerSeries, rho: f64) -> Result<PowerSeries> {
    let mut order = crate::power_series::DEFAULT_ORDER.max(4 * series.order());
    loop {
        let hd = series.truncated(order).sqrt_branch()?;
        let coeffs = hd.coeffs();
        let scale = coeffs.iter().map(|c| c.norm()).fold(0.0f64, f64::max).max(1.0);
        let tail: f64 = coeffs
            .iter()
            .enumerate()
            .skip(order.saturating_sub(8))
            .map(|(k, c)| c.norm() * rho.powi(k as i32))
            .sum();
        if tail <= 1e-16 * scale || order >= 8192 {
            return Ok(hd);
        }
        order *= 2;
    }
}

/// Conformality and injectivity evidence for `psi` on the closed disc of
/// radius `r_check`: exact root exclusion for `psi'` (Durand-Kerner),
/// minimum of `|psi'|` on a dense grid, and on the boundary circle the
/// pairwise sample distances, polyline self-intersection test, and winding
/// number about `psi(0)`.
pub fn validate_conformal(psi: &PowerSeries, r_check: f64) -> Result<ValidationReport> {
    if r_check <= 1.0 {
        return Err(Error::Config(format!("R_check must exceed 1, got {r_check}")));
    }
    let psi_prime = psi.derivative()?;

    let roots = polynomial_roots(&psi_prime);
    let min_root_modulus = roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);
    let min_root = if min_root_modulus.is_finite() { Some(min_root_modulus) } else { None };
    if let Some(m) = min_root {
        if m <= r_check {
            return Err(Error::NotConformal {
                r_check,
                detail: format!("psi' has a root of modulus {m:.6} inside the closed disc"),
            });
        }
    }

    let mut min_abs = f64::INFINITY;
    for ir in 0..=16 {
        let rho = r_check * ir as f64 / 16.0;
        for ia in 0..256 {
            let theta = 2.0 * std::f64::consts::PI * ia as f64 / 256.0;
            min_abs = min_abs.min(psi_prime.eval(Complex64::from_polar(rho, theta)).norm());
        }
    }
    if min_abs == 0.0 {
        return Err(Error::NotConformal {
            r_check,
            detail: "psi' vanishes on the sampled grid".into(),
        });
    }

    let evidence = circle_injectivity(psi, r_check, INJECTIVITY_SAMPLES);
    if evidence.crossing {
        return Err(Error::NotInjective {
            r_check,
            detail: format!(
                "boundary polyline self-intersects (min pairwise distance {:.3e})",
                evidence.min_distance
            ),
        });
    }
    if evidence.winding != 1 {
        return Err(Error::NotInjective {
            r_check,
            detail: format!("winding number about psi(0) is {}", evidence.winding),
        });
    }

    Ok(ValidationReport {
        r_check,
        min_abs_psi_prime: min_abs,
        min_root_modulus: min_root,
        injectivity_min_distance: evidence.min_distance,
        winding_number: evidence.winding,
        samples: INJECTIVITY_SAMPLES,
    })
}

/// Certified radius for `psi`: `0.95 x min(smallest |root of psi'|,
/// largest circle passing the injectivity sampling)`, capped at
/// [`R_CAP`]. Errors when no radius above 1 survives.
pub fn estimate_radius(psi: &PowerSeries) -> Result<f64> {
    if psi.polynomial_degree() < 1 {
        return Err(Error::DegreeTooLow("psi must have degree >= 1".into()));
    }
    let psi_prime = psi.derivative()?;
    let roots = polynomial_roots(&psi_prime);
    let min_root = roots.iter().map(|r| r.norm()).fold(f64::INFINITY, f64::min);

    // Scan circles strictly inside the root radius; if every sampled circle
    // passes, the injectivity evidence does not bind below the root radius.
    let cap = min_root.min(R_CAP / R_SAFETY);
    let mut injectivity_sup = cap;
    if cap > 1.0 + 1e-9 {
        let fractions = [0.4, 0.55, 0.7, 0.8, 0.875, 0.925, 0.96, 0.98, 0.995];
        let mut largest_pass = f64::NAN;
        for &f in &fractions {
            let rho = 1.0 + f * (cap - 1.0);
            let ev = circle_injectivity(psi, rho, 512);
            if ev.crossing || ev.winding != 1 {
                injectivity_sup = if largest_pass.is_nan() { 1.0 } else { largest_pass };
                break;
            }
            largest_pass = rho;
        }
    }

    let r = (R_SAFETY * min_root.min(injectivity_sup)).min(R_CAP);
    if r <= 1.0 + 1e-6 {
        return Err(Error::BoundaryNotAnalytic(r));
    }
    Ok(r)
}

struct InjectivityEvidence {
    min_distance: f64,
    winding: i64,
    crossing: bool,
}

/// Samples `psi` on `|z| = rho` and gathers injectivity evidence: minimum
/// non-adjacent pairwise distance, polyline segment crossings, and the
/// winding number about `psi(0)`.
fn circle_injectivity(psi: &PowerSeries, rho: f64, n: usize) -> InjectivityEvidence {
    let pts: Vec<Complex64> = (0..n)
        .map(|j| {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            psi.eval(Complex64::from_polar(rho, theta))
        })
        .collect();

    let mut min_distance = f64::INFINITY;
    for i in 0..n {
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue; // circularly adjacent
            }
            min_distance = min_distance.min((pts[i] - pts[j]).norm());
        }
    }

    let mut crossing = false;
    'outer: for i in 0..n {
        let (a1, a2) = (pts[i], pts[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (b1, b2) = (pts[j], pts[(j + 1) % n]);
            if segments_cross(a1, a2, b1, b2) {
                crossing = true;
                break 'outer;
            }
        }
    }

    let center = psi.eval(Complex64::new(0.0, 0.0));
    let mut total = 0.0f64;
    for j in 0..n {
        let u = pts[j] - center;
        let v = pts[(j + 1) % n] - center;
        total += (v / u).arg();
    }
    let winding = (total / (2.0 * std::f64::consts::PI)).round() as i64;

    InjectivityEvidence { min_distance, winding, crossing }
}

fn cross(o: Complex64, a: Complex64, b: Complex64) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Proper segment intersection (shared endpoints excluded by the caller's
/// adjacency skip).
fn segments_cross(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> bool {
    let d1 = cross(b1, b2, a1);
    let d2 = cross(b1, b2, a2);
    let d3 = cross(a1, a2, b1);
    let d4 = cross(a1, a2, b2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

/// All roots of the polynomial carried by `series` (trailing zeros
/// trimmed) via the Durand-Kerner iteration. Empty for constants.
pub fn polynomial_roots(series: &PowerSeries) -> Vec<Complex64> {
    let deg = series.polynomial_degree();
    if deg == 0 {
        return Vec::new();
    }
    let lead = series.coeff(deg);
    let coeffs: Vec<Complex64> = (0..=deg).map(|k| series.coeff(k) / lead).collect();
    let eval = |z: Complex64| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };

    // Standard starting configuration on a spiral of non-unit modulus.
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..deg).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = eval(z[i]) / denom;
            z[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z
}

/// On-disk domain description: `{ "name": ..., "psi": [[re,im],...],
/// "R": number|null }`; a null radius triggers [`estimate_radius`].
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub name: String,
    pub psi: PowerSeries,
    #[serde(rename = "R")]
    pub radius: Option<f64>,
}

impl DomainSpec {
    pub fn build(self) -> Result<AnalyticDomain> {
        AnalyticDomain::new(self.name, self.psi, self.radius)
    }
}

/// Resolves a CLI domain argument: a shipped preset name (`disk`,
/// `perturbed-disk[-eps]`, `cubic-blob[-eps]`) or a path to a spec file.
pub fn load_domain(arg: &str) -> Result<AnalyticDomain> {
    if let Some(dom) = preset(arg)? {
        return Ok(dom);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        Error::Config(format!("domain {arg:?} is neither a preset nor a readable file: {e}"))
    })?;
    let spec: DomainSpec = serde_json::from_str(&text)?;
    spec.build()
}

/// Builds a shipped preset by name; `Ok(None)` when the name is not a
/// preset pattern.
pub fn preset(name: &str) -> Result<Option<AnalyticDomain>> {
    fn eps_suffix(rest: &str, default: f64, max: f64, what: &str) -> Result<f64> {
        if rest.is_empty() {
            return Ok(default);
        }
        let raw = rest.strip_prefix('-').unwrap_or(rest);
        let eps: f64 = raw
            .parse()
            .map_err(|_| Error::Config(format!("bad {what} parameter {raw:?}")))?;
        if !(eps > 0.0 && eps < max) {
            return Err(Error::Config(format!(
                "{what} parameter must lie in (0, {max}), got {eps}"
            )));
        }
        Ok(eps)
    }

    if name == "disk" {
        let dom = AnalyticDomain::new("disk", PowerSeries::identity(), None)?;
        return Ok(Some(dom));
    }
    if let Some(rest) = name.strip_prefix("perturbed-disk") {
        let eps = eps_suffix(rest, 0.2, 0.5, "perturbed-disk")?;
        let dom = AnalyticDomain::new(name, PowerSeries::from_real(&[0.0, 1.0, eps]), None)?;
        return Ok(Some(dom));
    }
    if let Some(rest) = name.strip_prefix("cubic-blob") {
        let eps = eps_suffix(rest, 0.1, 1.0 / 3.0, "cubic-blob")?;
        let dom = AnalyticDomain::new(name, PowerSeries::from_real(&[0.0, 1.0, 0.0, eps]), None)?;
        return Ok(Some(dom));
    }
    Ok(None)
}

/// The three domains every verification suite ships with.
pub fn shipped_presets() -> Result<Vec<AnalyticDomain>> {
    Ok(vec![
        preset("disk")?.expect("preset"),
        preset("perturbed-disk-0.2")?.expect("preset"),
        preset("cubic-blob-0.1")?.expect("preset"),
    ])
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

    fn perturbed(eps: f64) -> AnalyticDomain {
        AnalyticDomain::new("test", PowerSeries::from_real(&[0.0, 1.0, eps]), None).unwrap()
    }

    #[test]
    fn roots_of_quadratic_derivative() {
        // psi = z + 0.2 z^2 -> psi' = 1 + 0.4 z, root at -2.5.
        let psi = PowerSeries::from_real(&[0.0, 1.0, 0.2]);
        let roots = polynomial_roots(&psi.derivative().unwrap());
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(-2.5, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn validate_identity_map() {
        let report = validate_conformal(&PowerSeries::identity(), 2.0).unwrap();
        assert_abs_diff_eq!(report.min_abs_psi_prime, 1.0, epsilon = 1e-12);
        assert_eq!(report.winding_number, 1);
        assert!(report.min_root_modulus.is_none());
    }

    #[test]
    fn validate_perturbed_disk_inside_root() {
        // psi' root at -2.5; the pair condition z1 + z2 = -5 is unreachable
        // for |z| <= 2.4, so the map stays injective there.
        let psi = PowerSeries::from_real(&[0.0, 1.0, 0.2]);
        let report = validate_conformal(&psi, 2.4).unwrap();
        assert_eq!(report.winding_number, 1);
        assert_abs_diff_eq!(report.min_root_modulus.unwrap(), 2.5, epsilon = 1e-9);
    }

    #[test]
    fn validate_rejects_root_inside() {
        // psi = z + 0.6 z^2: psi' root at -0.8333 inside the unit disc.
        let psi = PowerSeries::from_real(&[0.0, 1.0, 0.6]);
        match validate_conformal(&psi, 1.0 + 1e-12) {
            Err(Error::NotConformal { .. }) => {}
            other => panic!("expected NotConformal, got {other:?}"),
        }
    }

    #[test]
    fn validate_rejects_wrapping_curve() {
        // Truncated e^{3z} - 1: psi' = 3 e^{3z} is zero-free, but the image
        // of a radius-2.2 circle wraps and self-intersects.
        let e3z = {
            let mut coeffs = vec![c(0.0, 0.0)];
            let mut term = 1.0f64;
            for k in 1..=48 {
                term *= 3.0 / k as f64;
                coeffs.push(c(term, 0.0));
            }
            PowerSeries::new(coeffs)
        };
        match validate_conformal(&e3z, 2.2) {
            Err(Error::NotInjective { .. }) => {}
            other => panic!("expected NotInjective, got {other:?}"),
        }
    }

    #[test]
    fn radius_estimates_match_hand_values() {
        // Identity: entire and injective, capped default.
        let r = estimate_radius(&PowerSeries::identity()).unwrap();
        assert_abs_diff_eq!(r, 4.0, epsilon = 1e-12);

        // psi = z + 0.2 z^2: the psi' root at -2.5 binds both checks.
        let r = estimate_radius(&PowerSeries::from_real(&[0.0, 1.0, 0.2])).unwrap();
        assert_abs_diff_eq!(r, 2.375, epsilon = 1e-6);

        // psi = z + 0.45 z^2: root of 1 + 0.9 z.
        let r = estimate_radius(&PowerSeries::from_real(&[0.0, 1.0, 0.45])).unwrap();
        assert_abs_diff_eq!(r, 0.95 / 0.9, epsilon = 1e-6);
    }

    #[test]
    fn radius_fails_when_root_too_close() {
        // psi = z + 0.6 z^2: 0.95 * 0.8333 < 1.
        let err = estimate_radius(&PowerSeries::from_real(&[0.0, 1.0, 0.6]));
        assert!(matches!(err, Err(Error::BoundaryNotAnalytic(_))));
    }

    #[test]
    fn invert_identity_and_round_trip() {
        let disk = AnalyticDomain::new("disk", PowerSeries::identity(), None).unwrap();
        let w = c(0.3, 0.1);
        assert!((disk.invert(w, 1e-13).unwrap() - w).norm() < 1e-13);

        let dom = perturbed(0.2);
        let z = dom.invert(c(0.55, 0.0), 1e-13).unwrap();
        assert!((z - c(0.5, 0.0)).norm() < 1e-12);

        let target = dom.psi().eval(c(0.0, 0.9));
        let z = dom.invert(target, 1e-14).unwrap();
        assert!((z - c(0.0, 0.9)).norm() < 1e-12);
    }

    #[test]
    fn invert_round_trips_randomly() {
        let dom = perturbed(0.2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..100 {
            let z = loop {
                let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if z.norm() <= 0.95 {
                    break z;
                }
            };
            let back = dom.invert(dom.psi().eval(z), 1e-13).unwrap();
            assert!((back - z).norm() < 1e-10);
        }
    }

    #[test]
    fn invert_rejects_exterior_point() {
        let dom = perturbed(0.2);
        assert!(matches!(
            dom.invert(c(5.0, 5.0), 1e-13),
            Err(Error::InversionDiverged { .. })
        ));
    }

    #[test]
    fn boundary_nodes_identity_small() {
        let disk = AnalyticDomain::new("disk", PowerSeries::identity(), None).unwrap();
        let nodes = disk.boundary_nodes(8).unwrap();
        assert!((nodes[0].zeta - c(1.0, 0.0)).norm() < 1e-15);
        assert!((nodes[2].zeta - c(0.0, 1.0)).norm() < 1e-15);
        assert!((nodes[4].zeta - c(-1.0, 0.0)).norm() < 1e-15);
        // weight_j = i e^{i theta_j} (2 pi / 8)
        let expect = Complex64::new(0.0, 1.0) * (std::f64::consts::PI / 4.0);
        assert!((nodes[0].weight - expect).norm() < 1e-15);
    }

    #[test]
    fn boundary_nodes_reject_bad_sizes() {
        let disk = AnalyticDomain::new("disk", PowerSeries::identity(), None).unwrap();
        assert!(disk.boundary_nodes(4).is_err());
        assert!(disk.boundary_nodes(100).is_err());
    }

    #[test]
    fn weights_sum_to_zero_around_closed_curve() {
        for dom in shipped_presets().unwrap() {
            let nodes = dom.boundary_nodes(256).unwrap();
            let total: Complex64 = nodes.iter().map(|n| n.weight).sum();
            assert!(total.norm() < 1e-13, "{}: {}", dom.name(), total.norm());
        }
    }

    #[test]
    fn argument_principle_winding() {
        // (1/2 pi i) sum w_j / zeta_j = winding of the boundary about 0.
        let dom = perturbed(0.2);
        let nodes = dom.boundary_nodes(256).unwrap();
        let sum: Complex64 = nodes.iter().map(|n| n.weight / n.zeta).sum();
        let winding = sum / Complex64::new(0.0, 2.0 * std::f64::consts::PI);
        assert!((winding - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn arc_length_is_stable_under_refinement() {
        for dom in shipped_presets().unwrap() {
            let len = |n: usize| -> f64 {
                dom.boundary_nodes(n).unwrap().iter().map(|nd| nd.weight.norm()).sum()
            };
            assert!((len(256) - len(512)).abs() < 1e-10, "{}", dom.name());
        }
    }

    #[test]
    fn half_derivative_squares_to_psi_prime() {
        for eps in [0.2, 0.45] {
            let dom = perturbed(eps);
            let hd = dom.half_derivative();
            let sq = hd.mul(hd);
            for k in 0..=sq.order() {
                let dev = (sq.coeff(k) - dom.psi_prime().coeff(k)).norm();
                assert!(dev <= 1e-12, "eps {eps}, coefficient {k}: {dev:e}");
            }
        }
    }

    #[test]
    fn half_derivative_matches_pointwise_sqrt_on_circle() {
        // Against the principal square root continued along radii; for
        // these maps psi' stays in the right half-plane on |z| = 1, so the
        // principal value is the continued branch.
        for eps in [0.2, 0.45] {
            let dom = perturbed(eps);
            for j in 0..64 {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / 64.0;
                let z = Complex64::from_polar(1.0, theta);
                let direct = dom.psi_prime().eval(z).sqrt();
                let dev = (dom.half_derivative_at(z) * dom.half_derivative_at(z)
                    - dom.psi_prime().eval(z))
                .norm();
                assert!(dev <= 1e-12, "square deviation {dev:e}");
                assert!((dom.half_derivative_at(z) - direct).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn radii_pair_validation() {
        assert!(RadiiPair::new(1.2, 1.5, 2.0).is_ok());
        assert!(matches!(RadiiPair::new(1.5, 1.2, 2.0), Err(Error::RadiiError { .. })));
        assert!(matches!(RadiiPair::new(0.9, 1.2, 2.0), Err(Error::RadiiError { .. })));
        assert!(matches!(RadiiPair::new(1.2, 1.5, 1.4), Err(Error::RadiiError { .. })));
        let d = RadiiPair::default_for(8.0).unwrap();
        assert_abs_diff_eq!(d.r, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.s, 4.0, epsilon = 1e-12);
    }

    #[test]
    fn preset_names_parse() {
        assert!(preset("disk").unwrap().is_some());
        assert!(preset("perturbed-disk").unwrap().is_some());
        assert!(preset("perturbed-disk-0.3").unwrap().is_some());
        assert!(preset("cubic-blob-0.05").unwrap().is_some());
        assert!(preset("no-such-thing").unwrap().is_none());
        assert!(preset("perturbed-disk-0.7").is_err());
    }

    #[test]
    fn domain_spec_json_round_trip() {
        let text = r#"{ "name": "custom", "psi": [[0.0,0.0],[1.0,0.0],[0.1,0.0]], "R": null }"#;
        let spec: DomainSpec = serde_json::from_str(text).unwrap();
        let dom = spec.build().unwrap();
        assert!(dom.radius() > 1.0);
        let bad = r#"{ "name": "x", "psi": [[0,0],[1,0]], "R": null, "extra": 1 }"#;
        assert!(serde_json::from_str::<DomainSpec>(bad).is_err());
    }
}
