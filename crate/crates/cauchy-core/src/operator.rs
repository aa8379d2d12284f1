//! The operator series `A = sum a_mn M_m C_Delta N_n`: application by
//! factorized projections, the absolute-sum norm bound, an empirical
//! Monte-Carlo lower bound, partial-sum convergence against the geometric
//! tail, and the cross-check against the direct boundary-integral form of
//! `U_psi C_D U~_phi`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::boundary::{random_analytic_input, BoundaryFunction, HardyFunction};
use crate::cauchy::direct_conjugated_operator;
use crate::domain::AnalyticDomain;
use crate::error::{Error, Result};
use crate::kernel::{tail_sum_bound, KernelExpansion};

/// A kernel expansion paired with the domain that produced it.
#[derive(Clone, Debug)]
pub struct SeriesOperator {
    domain: AnalyticDomain,
    expansion: KernelExpansion,
}

/// One row of a partial-sum convergence study.
#[derive(Clone, Copy, Debug, serde::Serialize, serde::Deserialize)]
pub struct PartialSumDeviation {
    pub m: usize,
    /// `|| A_m f - A_M f ||` in the Hardy norm.
    pub deviation: f64,
    /// `tail_sum_bound(m) * ||f||`, the closed-form majorant.
    pub majorant: f64,
}

impl SeriesOperator {
    /// Pairs an expansion with its domain; the provenance hash recorded at
    /// extraction time must match.
    pub fn new(domain: AnalyticDomain, expansion: KernelExpansion) -> Result<Self> {
        if expansion.domain_hash() != domain.provenance_hash() {
            return Err(Error::ProvenanceMismatch);
        }
        Ok(Self { domain, expansion })
    }

    pub fn domain(&self) -> &AnalyticDomain {
        &self.domain
    }

    pub fn expansion(&self) -> &KernelExpansion {
        &self.expansion
    }

    pub fn truncation(&self) -> usize {
        self.expansion.truncation()
    }

    /// `A f = sum_{m,n <= M} a_mn M_m (C_Delta N_n f)` for `f` on the unit
    /// circle. The `M+1` projections `p_n = C_Delta N_n f` are computed
    /// once (a cyclic spectrum shift followed by the Riesz cut) and the
    /// double sum accumulates coefficient shifts of them — identical to
    /// the literal operator compositions by linearity, at
    /// `O(M^2 N)` instead of `O(M^2 N log N)`.
    pub fn apply(&self, f: &BoundaryFunction) -> HardyFunction {
        self.apply_truncated(f, self.truncation())
    }

    fn apply_truncated(&self, f: &BoundaryFunction, m_max: usize) -> HardyFunction {
        debug_assert!(m_max <= self.truncation());
        let n = f.n();
        let raw = f.analyze();
        let bins = raw.raw();
        let keep = n / 2;
        let mut out = vec![Complex64::new(0.0, 0.0); keep + m_max];
        for nn in 0..=m_max {
            // The spectrum of N_n f is the cyclic shift of the spectrum of
            // f (exact for the discrete transform); the Riesz projection
            // keeps raw bins 0 .. N/2 - 1.
            let p: Vec<Complex64> = (0..keep).map(|k| bins[(k + n - nn % n) % n]).collect();
            for mm in 0..=m_max {
                let a = self.expansion.coefficient(mm, nn);
                if a.norm() == 0.0 {
                    continue;
                }
                for (k, &pk) in p.iter().enumerate() {
                    out[mm + k] += a * pk;
                }
            }
        }
        HardyFunction::new(out)
    }

    /// `abs_sum + tail_bound` — the paper's upper bound for `||A||`, and
    /// by unitarity of the conjugating transplants for `||C_D||` too.
    pub fn norm_upper(&self) -> f64 {
        self.expansion.norm_upper()
    }

    /// Empirical lower bound: the largest Rayleigh quotient
    /// `||A f|| / ||f||` over seeded random analytic band-limited inputs.
    /// Deterministic for a fixed seed and trial count.
    pub fn norm_lower_mc(&self, trials: usize, seed: u64) -> f64 {
        let n = 256;
        let mut best = 0.0f64;
        for trial in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (trial as u64).wrapping_mul(0x9e3779b97f4a7c15));
            let f = random_analytic_input(n, &mut rng).expect("valid size");
            let denom = f.l2_norm_circle();
            if denom == 0.0 {
                continue;
            }
            best = best.max(self.apply(&f).norm() / denom);
        }
        best
    }

    /// For each truncation in `schedule`, the Hardy-norm deviation of the
    /// truncated application from the full one, paired with the
    /// closed-form majorant `tail_sum_bound(m) ||f||`.
    pub fn partial_sum_convergence(
        &self,
        f: &BoundaryFunction,
        schedule: &[usize],
    ) -> Result<Vec<PartialSumDeviation>> {
        let full = self.apply(f);
        let norm_f = f.l2_norm_circle();
        schedule
            .iter()
            .map(|&m| {
                if m > self.truncation() {
                    return Err(Error::Config(format!(
                        "schedule entry {m} exceeds the truncation {}",
                        self.truncation()
                    )));
                }
                let partial = self.apply_truncated(f, m);
                Ok(PartialSumDeviation {
                    m,
                    deviation: partial.sub(&full).norm(),
                    majorant: tail_sum_bound(self.expansion.sup_h, &self.expansion.radii, m)
                        * norm_f,
                })
            })
            .collect()
    }

    /// Maximum over probes of the difference between the series form and
    /// the direct boundary-integral form, with `f` resampled to `n_quad`
    /// quadrature nodes.
    pub fn equivalence_check(
        &self,
        f: &BoundaryFunction,
        probes: &[Complex64],
        n_quad: usize,
    ) -> Result<f64> {
        let fq = f.resample(n_quad.max(f.n()))?;
        let series = self.apply(f);
        let mut max_err = 0.0f64;
        for &z in probes {
            let direct = direct_conjugated_operator(&self.domain, &fq, z)?;
            max_err = max_err.max((series.eval(z) - direct).norm());
        }
        Ok(max_err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::random_trig_polynomial;
    use crate::domain::{preset, shipped_presets};
    use crate::kernel::kernel_coefficients_auto;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn operator_for(name: &str) -> SeriesOperator {
        let dom = preset(name).unwrap().unwrap();
        let exp = kernel_coefficients_auto(&dom).unwrap();
        SeriesOperator::new(dom, exp).unwrap()
    }

    #[test]
    fn disk_operator_is_riesz_projection() {
        let op = operator_for("disk");
        let f = BoundaryFunction::from_fn(128, |t| Complex64::from_polar(1.0, -t)).unwrap();
        assert!(op.apply(&f).norm() < 1e-13);

        let f = BoundaryFunction::from_fn(128, |t| Complex64::from_polar(1.0, t)).unwrap();
        let out = op.apply(&f);
        assert!((out.coeff(1) - c(1.0, 0.0)).norm() < 1e-12);
        assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disk_operator_matches_projection_on_random_input() {
        let op = operator_for("disk");
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..50 {
            let f = random_trig_polynomial(128, 30, &mut rng).unwrap();
            let series = op.apply(&f);
            let proj = f.riesz_projection();
            let dev = series.sub(&proj).norm();
            assert!(dev <= 1e-12, "deviation {dev:e}");
        }
    }

    #[test]
    fn series_matches_direct_operator_at_spec_point() {
        // f = e^{i theta} on the perturbed disk, evaluated at z = 0.4.
        let op = operator_for("perturbed-disk-0.2");
        let f = BoundaryFunction::from_fn(512, |t| Complex64::from_polar(1.0, t)).unwrap();
        let z = c(0.4, 0.0);
        let series = op.apply(&f).eval(z);
        let direct = direct_conjugated_operator(op.domain(), &f, z).unwrap();
        assert!((series - direct).norm() <= 1e-8, "{:e}", (series - direct).norm());
    }

    #[test]
    fn application_is_linear() {
        let op = operator_for("perturbed-disk-0.2");
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let f = random_trig_polynomial(128, 20, &mut rng).unwrap();
        let g = random_trig_polynomial(128, 20, &mut rng).unwrap();
        let (alpha, beta) = (c(0.3, -1.1), c(0.8, 0.2));
        let combo = BoundaryFunction::new(
            f.samples().iter().zip(g.samples()).map(|(a, b)| alpha * a + beta * b).collect(),
        )
        .unwrap();
        let lhs = op.apply(&combo);
        let fa = op.apply(&f);
        let gb = op.apply(&g);
        for k in 0..lhs.taylor().len() {
            let rhs = alpha * fa.coeff(k) + beta * gb.coeff(k);
            assert!((lhs.coeff(k) - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_upper_is_one_on_disk() {
        let op = operator_for("disk");
        assert!((op.norm_upper() - 1.0).abs() <= 1e-10, "{}", op.norm_upper());
    }

    #[test]
    fn norm_upper_exceeds_one_on_perturbed_disk() {
        let op = operator_for("perturbed-disk-0.2");
        assert!(op.norm_upper().is_finite());
        assert!(op.norm_upper() >= 1.0);
    }

    #[test]
    fn monte_carlo_attains_projection_norm_on_disk() {
        let op = operator_for("disk");
        let lower = op.norm_lower_mc(200, 7);
        assert!(lower > 0.99 && lower <= 1.0 + 1e-12, "lower {lower}");
    }

    #[test]
    fn monte_carlo_is_seed_stable_and_ordered() {
        for dom in shipped_presets().unwrap() {
            let exp = kernel_coefficients_auto(&dom).unwrap();
            let op = SeriesOperator::new(dom, exp).unwrap();
            let a = op.norm_lower_mc(50, 7);
            let b = op.norm_lower_mc(50, 7);
            assert_eq!(a, b);
            assert!(a <= op.norm_upper() + 1e-9);
        }
    }

    #[test]
    fn bounded_by_norm_upper_on_random_inputs() {
        let op = operator_for("perturbed-disk-0.2");
        let upper = op.norm_upper();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..50 {
            let f = random_trig_polynomial(256, 60, &mut rng).unwrap();
            assert!(op.apply(&f).norm() <= upper * f.l2_norm_circle() + 1e-9);
        }
    }

    #[test]
    fn partial_sums_collapse_on_disk() {
        let op = operator_for("disk");
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let f = random_trig_polynomial(128, 20, &mut rng).unwrap();
        for row in op.partial_sum_convergence(&f, &[2, 4, 8, 16]).unwrap() {
            assert!(row.deviation <= 1e-13, "M = {}: {:e}", row.m, row.deviation);
        }
    }

    #[test]
    fn partial_sums_are_dominated_and_decay() {
        let op = operator_for("perturbed-disk-0.2");
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        let f = random_trig_polynomial(256, 30, &mut rng).unwrap();
        let rows = op.partial_sum_convergence(&f, &[2, 4, 8, 16]).unwrap();
        for row in &rows {
            assert!(
                row.deviation <= row.majorant + 1e-10,
                "M = {}: {:e} vs {:e}",
                row.m,
                row.deviation,
                row.majorant
            );
        }
        // Decay at least at the tail-bound rate r^{-2} per schedule step,
        // with slack, until the deviations hit roundoff.
        let ratio_cap = 1.2 * op.expansion().radii.r.powi(-2);
        for pair in rows.windows(2) {
            if pair[0].deviation > 1e-13 && pair[1].deviation > 1e-13 {
                let per_step =
                    pair[1].deviation / pair[0].deviation;
                let steps = ((pair[1].m - pair[0].m) / 2) as i32;
                assert!(
                    per_step <= ratio_cap.powi(steps).max(ratio_cap),
                    "deviation ratio {per_step} over {steps} steps"
                );
            }
        }
    }

    #[test]
    fn equivalence_on_disk_is_tight() {
        let op = operator_for("disk");
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let f = random_trig_polynomial(128, 20, &mut rng).unwrap();
        let probes: Vec<Complex64> =
            (0..8).map(|k| Complex64::from_polar(0.9, 0.8 * k as f64)).collect();
        let err = op.equivalence_check(&f, &probes, 512).unwrap();
        assert!(err <= 1e-11, "{err:e}");
    }

    #[test]
    fn equivalence_on_perturbed_disk() {
        let op = operator_for("perturbed-disk-0.2");
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let probes: Vec<Complex64> = (0..16)
            .map(|_| loop {
                let z = c(rng.random_range(-0.8..0.8), rng.random_range(-0.8..0.8));
                if z.norm() <= 0.8 {
                    break z;
                }
            })
            .collect();
        let f = random_trig_polynomial(256, 8, &mut rng).unwrap();
        let err = op.equivalence_check(&f, &probes, 512).unwrap();
        assert!(err <= 1e-8, "{err:e}");
    }

    #[test]
    fn provenance_mismatch_is_rejected() {
        let dom_a = preset("perturbed-disk-0.2").unwrap().unwrap();
        let dom_b = preset("cubic-blob-0.1").unwrap().unwrap();
        let exp_a = kernel_coefficients_auto(&dom_a).unwrap();
        assert!(matches!(
            SeriesOperator::new(dom_b, exp_a),
            Err(Error::ProvenanceMismatch)
        ));
    }
}
