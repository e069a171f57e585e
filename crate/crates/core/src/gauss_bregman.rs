//! The inductive Gauss-Bregman center: iterate the arithmetic midpoint and
//! the `∇F`-quasi-arithmetic midpoint, starting from the right and left
//! Bregman centroids, until the two sequences merge.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::legendre::{
    check_domain, quasi_arithmetic_center, right_bregman_centroid, CenterDiagnostics, Generator, Vector,
    WeightedParamSet,
};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbOptions {
    pub tol: ToleranceConfig,
    pub keep_trace: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        Self { tol: ToleranceConfig::iterative(), keep_trace: false }
    }
}

impl GbOptions {
    pub fn with_tol(tol: ToleranceConfig) -> Self {
        Self { tol, keep_trace: false }
    }

    pub fn traced(mut self) -> Self {
        self.keep_trace = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GbResult {
    pub center: Vector,
    pub diagnostics: CenterDiagnostics,
    /// `(θ̄_t, θ̲_t)` for t = 0..=iterations, when requested.
    pub trace: Option<Vec<(Vector, Vector)>>,
    pub converged: bool,
}

impl GbResult {
    /// Gap norms along the trace, if one was kept.
    pub fn gaps<G: Generator>(&self, gen: &G) -> Option<Vec<f64>> {
        self.trace.as_ref().map(|t| t.iter().map(|(a, b)| gen.norm(&(a - b))).collect())
    }
}

/// One step: `((θ̄ + θ̲)/2, (∇F)^{-1}((∇F(θ̄) + ∇F(θ̲))/2))`.
pub fn gb_step<G: Generator>(gen: &G, upper: &Vector, lower: &Vector) -> Result<(Vector, Vector)> {
    check_domain(gen, upper)?;
    check_domain(gen, lower)?;
    let mid = (upper + lower) * 0.5;
    let dual_mid = (gen.grad(upper) + gen.grad(lower)) * 0.5;
    let qa = gen.grad_inv(&dual_mid)?;
    if !gen.in_domain(&mid) || !gen.in_domain(&qa) {
        return Err(Error::domain("Gauss-Bregman iterate left the generator domain"));
    }
    Ok((mid, qa))
}

/// Runs the double sequence from the sided centroids of `set`.
///
/// Stops once `‖θ̄_t - θ̲_t‖ <= rel_tol * max(1, ‖θ̄_t‖)` in the generator's
/// norm and returns `θ̄_t`. Hitting `max_iter` is not an error: the result
/// carries `converged = false`.
pub fn gb_center<G: Generator>(gen: &G, set: &WeightedParamSet, opts: GbOptions) -> Result<GbResult> {
    let start = Instant::now();
    set.validate(gen)?;
    let upper = right_bregman_centroid(set);
    let lower = quasi_arithmetic_center(gen, set)?;
    check_domain(gen, &upper)?;
    run_from(gen, upper, lower, opts, start)
}

/// The double sequence started from an explicit pair.
pub fn gb_from_pair<G: Generator>(gen: &G, upper: &Vector, lower: &Vector, opts: GbOptions) -> Result<GbResult> {
    let start = Instant::now();
    check_domain(gen, upper)?;
    check_domain(gen, lower)?;
    run_from(gen, upper.clone(), lower.clone(), opts, start)
}

fn run_from<G: Generator>(
    gen: &G,
    mut upper: Vector,
    mut lower: Vector,
    opts: GbOptions,
    start: Instant,
) -> Result<GbResult> {
    let mut trace = opts.keep_trace.then(|| vec![(upper.clone(), lower.clone())]);
    let mut iterations = 0;
    let mut gap = gen.norm(&(&upper - &lower));
    let converged = loop {
        if gap <= opts.tol.rel_tol * gen.norm(&upper).max(1.0) {
            break true;
        }
        if iterations >= opts.tol.max_iter {
            break false;
        }
        let (u, l) = gb_step(gen, &upper, &lower)?;
        upper = u;
        lower = l;
        iterations += 1;
        gap = gen.norm(&(&upper - &lower));
        if !gap.is_finite() {
            return Err(Error::numerical("non-finite Gauss-Bregman gap"));
        }
        if let Some(t) = trace.as_mut() {
            t.push((upper.clone(), lower.clone()));
        }
    };
    let residual = gen.norm(&(gen.grad(&upper) - gen.grad(&lower)));
    Ok(GbResult {
        center: upper,
        diagnostics: CenterDiagnostics {
            iterations,
            final_gap: gap,
            residual,
            elapsed_ns: start.elapsed().as_nanos() as u64,
            converged,
        },
        trace,
        converged,
    })
}

/// `‖m_GB(θ1, θ2) - m_GB(A(θ1, θ2), m_∇F(θ1, θ2))‖`: the first step of the
/// double sequence does not move its limit.
pub fn gb_invariance_check<G: Generator>(
    gen: &G,
    theta1: &Vector,
    theta2: &Vector,
    tol: ToleranceConfig,
) -> Result<f64> {
    let opts = GbOptions::with_tol(tol);
    let direct = gb_from_pair(gen, theta1, theta2, opts)?;
    let (a, m) = gb_step(gen, theta1, theta2)?;
    let stepped = gb_from_pair(gen, &a, &m, opts)?;
    if !(direct.converged && stepped.converged) {
        return Err(Error::NoConvergence {
            iterations: direct.diagnostics.iterations.max(stepped.diagnostics.iterations),
            gap: direct.diagnostics.final_gap.max(stepped.diagnostics.final_gap),
        });
    }
    Ok(gen.norm(&(direct.center - stepped.center)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::GeneratorSpec;
    use crate::special::{agm_closed_form, scalar_agm};
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    fn tight() -> ToleranceConfig {
        ToleranceConfig::new(1e-12, 200).unwrap()
    }

    #[test]
    fn step_examples() {
        let (a, h) = gb_step(&GeneratorSpec::burg(1), &v(&[1.0]), &v(&[4.0])).unwrap();
        assert_eq!((a[0], h[0]), (2.5, 1.6));
        let (a, g) = gb_step(&GeneratorSpec::positive_entropy(1), &v(&[1.0]), &v(&[4.0])).unwrap();
        assert_eq!(a[0], 2.5);
        assert!((g[0] - 2.0).abs() < 1e-15);
        let p = v(&[0.4, 2.0]);
        let (x, y) = gb_step(&GeneratorSpec::burg(2), &p, &p).unwrap();
        assert!((x - &p).amax() < 1e-15 && (y - &p).amax() < 1e-15);
    }

    #[test]
    fn all_equal_set_takes_no_iterations() {
        let set = WeightedParamSet::uniform(vec![v(&[0.7, 1.3]); 4]).unwrap();
        let r = gb_center(&GeneratorSpec::burg(2), &set, GbOptions::default()).unwrap();
        assert_eq!(r.diagnostics.iterations, 0);
        assert!(r.converged);
        assert!((r.center - v(&[0.7, 1.3])).amax() < 1e-15);
    }

    #[test]
    fn arithmetic_harmonic_gives_geometric_mean() {
        let set = WeightedParamSet::uniform(vec![v(&[1.0]), v(&[4.0])]).unwrap();
        let r = gb_center(&GeneratorSpec::burg(1), &set, GbOptions::with_tol(tight())).unwrap();
        assert!(r.converged);
        assert!((r.center[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_generator_gives_agm() {
        let set = WeightedParamSet::uniform(vec![v(&[1.0]), v(&[4.0])]).unwrap();
        let r = gb_center(&GeneratorSpec::positive_entropy(1), &set, GbOptions::with_tol(tight())).unwrap();
        let agm = scalar_agm(2.5, 2.0).unwrap();
        assert!((r.center[0] - agm).abs() < 1e-10);
        assert!((r.center[0] - agm_closed_form(2.5, 2.0).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn trace_length_matches_iterations() {
        let set = WeightedParamSet::uniform(vec![v(&[0.2]), v(&[9.0]), v(&[3.0])]).unwrap();
        let r = gb_center(&GeneratorSpec::burg(1), &set, GbOptions::default().traced()).unwrap();
        assert_eq!(r.trace.as_ref().unwrap().len(), r.diagnostics.iterations + 1);
        assert!(r.diagnostics.final_gap <= 1e-8 * r.center.norm().max(1.0));
    }

    #[test]
    fn max_iter_reports_non_convergence() {
        let set = WeightedParamSet::uniform(vec![v(&[0.01]), v(&[100.0])]).unwrap();
        let tol = ToleranceConfig::new(1e-12, 2).unwrap();
        let r = gb_center(&GeneratorSpec::burg(1), &set, GbOptions::with_tol(tol)).unwrap();
        assert!(!r.converged);
        assert_eq!(r.diagnostics.iterations, 2);
    }

    #[test]
    fn invariance_examples() {
        let g = GeneratorSpec::burg(1);
        assert_eq!(gb_invariance_check(&g, &v(&[3.0]), &v(&[3.0]), tight()).unwrap(), 0.0);
        assert!(gb_invariance_check(&g, &v(&[1.0]), &v(&[4.0]), tight()).unwrap() <= 1e-10);
    }

    proptest! {
        #[test]
        fn scalar_gap_halves(x in 0.1f64..10.0, y in 0.1f64..10.0) {
            for g in [GeneratorSpec::burg(1), GeneratorSpec::positive_entropy(1)] {
                let r = gb_from_pair(&g, &v(&[x]), &v(&[y]), GbOptions::with_tol(tight()).traced()).unwrap();
                let gaps = r.gaps(&g).unwrap();
                for w in gaps.windows(2) {
                    prop_assert!(w[1] <= 0.5 * w[0] + 4.0 * f64::EPSILON * x.max(y));
                }
                let gap0 = (x - y).abs();
                if gap0 > 1e-12 {
                    let bound = (gap0 / 1e-12).log2().ceil() as usize;
                    prop_assert!(r.diagnostics.iterations <= bound);
                }
            }
        }

        #[test]
        fn separable_gap_halves_per_coordinate(a in proptest::collection::vec(0.1f64..10.0, 3), b in proptest::collection::vec(0.1f64..10.0, 3)) {
            let g = GeneratorSpec::positive_entropy(3);
            let r = gb_from_pair(&g, &v(&a), &v(&b), GbOptions::with_tol(tight()).traced()).unwrap();
            for w in r.trace.unwrap().windows(2) {
                for k in 0..3 {
                    let g0 = (w[0].0[k] - w[0].1[k]).abs();
                    let g1 = (w[1].0[k] - w[1].1[k]).abs();
                    let ulp = 4.0 * f64::EPSILON * w[0].0[k].abs().max(w[0].1[k].abs());
                    prop_assert!(g1 <= 0.5 * g0 + ulp);
                }
            }
        }

        #[test]
        fn invariance_holds_for_entropy(x in 0.1f64..10.0, y in 0.1f64..10.0) {
            let g = GeneratorSpec::positive_entropy(1);
            prop_assert!(gb_invariance_check(&g, &v(&[x]), &v(&[y]), tight()).unwrap() <= 1e-10);
        }
    }
}
