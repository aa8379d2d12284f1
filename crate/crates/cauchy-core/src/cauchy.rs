//! The Cauchy transform on the domain by spectral trapezoidal quadrature,
//! the transplantation operators between the circle and the curve, the
//! Cauchy representation check, and the conjugated operator
//! `U_psi C_D U~_phi` evaluated directly as a boundary integral.

use num_complex::Complex64;

use crate::boundary::{BoundaryFunction, HardyFunction};
use crate::domain::AnalyticDomain;
use crate::error::{Error, Result};
use crate::util::pairwise_sum;

/// Transplant direction for boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransplantDirection {
    /// `f` on the curve to `g` on the circle: `g = (f o psi) psi'^{1/2}`.
    ToDisk,
    /// The inverse, dividing by the same branch of `psi'^{1/2}`.
    ToCurve,
}

/// Values of a function at strictly interior points (each at distance
/// greater than the domain's exclusion zone from the boundary).
#[derive(Clone, Debug)]
pub struct InteriorEvaluation {
    points: Vec<Complex64>,
    values: Vec<Complex64>,
}

impl InteriorEvaluation {
    pub fn new(
        dom: &AnalyticDomain,
        points: Vec<Complex64>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::SizeError(format!(
                "{} points vs {} values",
                points.len(),
                values.len()
            )));
        }
        for &p in &points {
            let distance = dom.boundary_distance(p);
            if distance <= dom.delta_min() {
                return Err(Error::NearBoundary { distance, delta_min: dom.delta_min() });
            }
        }
        Ok(Self { points, values })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

/// `(1/2 pi i) sum_j f(zeta_j) weight_j / (zeta_j - z)` — the Cauchy
/// integral of boundary data at an interior point, spectrally accurate for
/// analytic data. `f` must be sampled at the domain's boundary nodes; `z`
/// must keep the exclusion distance from the boundary (points outside `D`
/// are not detected — caller contract).
pub fn cauchy_transform_domain(
    dom: &AnalyticDomain,
    f: &BoundaryFunction,
    z: Complex64,
) -> Result<Complex64> {
    let distance = dom.boundary_distance(z);
    if distance < dom.delta_min() {
        return Err(Error::NearBoundary { distance, delta_min: dom.delta_min() });
    }
    let nodes = dom.boundary_nodes(f.n())?;
    let terms: Vec<Complex64> = f
        .samples()
        .iter()
        .zip(&nodes)
        .map(|(fj, node)| fj * node.weight / (node.zeta - z))
        .collect();
    Ok(pairwise_sum(&terms) / Complex64::new(0.0, 2.0 * std::f64::consts::PI))
}

/// Transplants boundary samples between `L^2(boundary)` and
/// `L^2(circle)` along `U~`: multiplication (or division) by the
/// branch-anchored `psi'^{1/2}` at the shared nodes. The two directions
/// invert each other exactly since they use the same branch values.
pub fn transplant_boundary(
    dom: &AnalyticDomain,
    f: &BoundaryFunction,
    direction: TransplantDirection,
) -> Result<BoundaryFunction> {
    let n = f.n();
    let samples = f
        .samples()
        .iter()
        .enumerate()
        .map(|(j, &fj)| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            let hd = dom.half_derivative_at(w);
            match direction {
                TransplantDirection::ToDisk => fj * hd,
                TransplantDirection::ToCurve => fj / hd,
            }
        })
        .collect();
    BoundaryFunction::new(samples)
}

/// Evaluates the Smirnov-class transplant `U_phi g` at `z` in `D`:
/// `g(phi(z)) phi'(z)^{1/2}` with `phi = psi^{-1}` by Newton inversion and
/// `phi'^{1/2} = 1 / psi'^{1/2}(phi(z))` — the reciprocal branch, never a
/// differentiated numerical inverse.
pub fn transplant_interior(
    dom: &AnalyticDomain,
    g: &HardyFunction,
    z: Complex64,
) -> Result<Complex64> {
    let zd = dom.invert(z, 1e-13)?;
    Ok(g.eval(zd) / dom.half_derivative_at(zd))
}

/// Checks the Cauchy representation of Smirnov-class elements: builds
/// `f = U_phi g`, takes its boundary trace, applies the Cauchy transform
/// at `psi(probes)`, and compares with the direct transplant values.
/// Returns the maximum absolute deviation over the probes.
pub fn cauchy_representation_check(
    dom: &AnalyticDomain,
    g: &HardyFunction,
    probes: &[Complex64],
    n: usize,
) -> Result<f64> {
    // Boundary trace of U_phi g at zeta_j = psi(e^{i theta_j}):
    // phi(zeta_j) is e^{i theta_j} itself, no inversion needed.
    let trace: Vec<Complex64> = (0..n)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / n as f64);
            g.eval(w) / dom.half_derivative_at(w)
        })
        .collect();
    let trace = BoundaryFunction::new(trace)?;

    let mut max_err = 0.0f64;
    for &p in probes {
        let z = dom.psi().eval(p);
        let via_cauchy = cauchy_transform_domain(dom, &trace, z)?;
        let direct = transplant_interior(dom, g, z)?;
        max_err = max_err.max((via_cauchy - direct).norm());
    }
    Ok(max_err)
}

/// The conjugated operator `U_psi C_D U~_phi` applied to `f` on the unit
/// circle, discretized directly from its boundary-integral form:
/// `psi'(z)^{1/2} (1/2 pi i) sum_j f_j psi'(w_j)^{1/2} / (psi(w_j) - psi(z))
/// i w_j (2 pi / N)`. Probes are restricted to `|z| <= 0.95` to keep the
/// kernel away from its diagonal.
pub fn direct_conjugated_operator(
    dom: &AnalyticDomain,
    f: &BoundaryFunction,
    z: Complex64,
) -> Result<Complex64> {
    if z.norm() > 0.95 {
        return Err(Error::ProbeOutOfRange { modulus: z.norm(), max_modulus: 0.95 });
    }
    let n = f.n();
    let tau = 2.0 * std::f64::consts::PI / n as f64;
    let psi_z = dom.psi().eval(z);
    let hd_z = dom.half_derivative_at(z);
    let terms: Vec<Complex64> = f
        .samples()
        .iter()
        .enumerate()
        .map(|(j, &fj)| {
            let w = Complex64::from_polar(1.0, tau * j as f64);
            let dw = Complex64::new(0.0, 1.0) * w * tau;
            fj * dom.half_derivative_at(w) * hd_z / (dom.psi().eval(w) - psi_z) * dw
        })
        .collect();
    Ok(pairwise_sum(&terms) / Complex64::new(0.0, 2.0 * std::f64::consts::PI))
}
