//! Uni-order exponential families.
//!
//! The Fisher information of a one-parameter family with cumulant `f` is
//! `f''`, so `h(θ) = ∫_{θ0}^θ √f''(u) du` is an isometry onto the real line
//! and the Fisher-Rao midpoint of two parameters is the `h`-quasi-arithmetic
//! midpoint.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::legendre::Weights;
use crate::quadrature::integrate;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const H_ABS_TOL: f64 = 1e-10;
const H_REL_TOL: f64 = 1e-13;
const H_MAX_INTERVALS: usize = 4000;
// Largest excursion from θ0 tried when bracketing on an unbounded side.
const MAX_DOUBLINGS: usize = 64;

#[derive(Clone)]
pub struct ScalarGenerator {
    name: String,
    f: ScalarFn,
    f_prime: ScalarFn,
    f_second: ScalarFn,
    lo: f64,
    hi: f64,
    theta_ref: f64,
}

impl fmt::Debug for ScalarGenerator {
    fn fmt(&self, fmt: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt.debug_struct("ScalarGenerator")
            .field("name", &self.name)
            .field("domain", &(self.lo, self.hi))
            .field("theta_ref", &self.theta_ref)
            .finish()
    }
}

impl ScalarGenerator {
    /// `lo`/`hi` bound the open domain and may be infinite.
    pub fn new<F, G, H>(name: &str, f: F, f_prime: G, f_second: H, lo: f64, hi: f64, theta_ref: f64) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
        H: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::domain(format!("empty domain ({lo}, {hi})")));
        }
        if !(theta_ref > lo && theta_ref < hi && theta_ref.is_finite()) {
            return Err(Error::domain(format!("reference {theta_ref} outside ({lo}, {hi})")));
        }
        Ok(Self {
            name: name.to_string(),
            f: Arc::new(f),
            f_prime: Arc::new(f_prime),
            f_second: Arc::new(f_second),
            lo,
            hi,
            theta_ref,
        })
    }

    /// Normal with unit variance: `f(θ) = θ²/2`.
    pub fn gaussian_fixed_variance() -> Self {
        Self::new("gaussian", |t| 0.5 * t * t, |t| t, |_| 1.0, f64::NEG_INFINITY, f64::INFINITY, 0.0).unwrap()
    }

    /// `f(θ) = e^θ`.
    pub fn poisson() -> Self {
        Self::new("poisson", f64::exp, f64::exp, f64::exp, f64::NEG_INFINITY, f64::INFINITY, 0.0).unwrap()
    }

    /// `f(θ) = -log(-θ)` on `θ < 0` (rate `-θ`).
    pub fn exponential() -> Self {
        Self::new("exponential", |t: f64| -(-t).ln(), |t| -1.0 / t, |t| 1.0 / (t * t), f64::NEG_INFINITY, 0.0, -1.0)
            .unwrap()
    }

    /// `f(θ) = log(1 + e^θ)`, the two-bin categorical family in log-odds.
    pub fn bernoulli() -> Self {
        fn softplus(t: f64) -> f64 {
            t.max(0.0) + (-t.abs()).exp().ln_1p()
        }
        fn sigmoid(t: f64) -> f64 {
            if t >= 0.0 {
                1.0 / (1.0 + (-t).exp())
            } else {
                let e = t.exp();
                e / (1.0 + e)
            }
        }
        Self::new("bernoulli", softplus, sigmoid, |t| sigmoid(t) * sigmoid(-t), f64::NEG_INFINITY, f64::INFINITY, 0.0)
            .unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn theta_ref(&self) -> f64 {
        self.theta_ref
    }

    pub fn with_theta_ref(mut self, theta_ref: f64) -> Result<Self> {
        self.check_domain(theta_ref)?;
        self.theta_ref = theta_ref;
        Ok(self)
    }

    pub fn in_domain(&self, theta: f64) -> bool {
        theta > self.lo && theta < self.hi && theta.is_finite()
    }

    fn check_domain(&self, theta: f64) -> Result<()> {
        if self.in_domain(theta) {
            Ok(())
        } else {
            Err(Error::domain(format!("{theta} outside ({}, {})", self.lo, self.hi)))
        }
    }

    pub fn f(&self, theta: f64) -> f64 {
        (self.f)(theta)
    }

    pub fn f_prime(&self, theta: f64) -> f64 {
        (self.f_prime)(theta)
    }

    pub fn f_second(&self, theta: f64) -> f64 {
        (self.f_second)(theta)
    }

    /// Checks `f'' > 0` and that `f'` matches central differences of `f`.
    pub fn check(&self, samples: &[f64]) -> Result<()> {
        for &t in samples {
            self.check_domain(t)?;
            let fpp = self.f_second(t);
            if !(fpp > 0.0) {
                return Err(Error::domain(format!("f''({t}) = {fpp} is not positive")));
            }
            let mut h = f64::EPSILON.cbrt() * t.abs().max(1.0);
            while !(self.in_domain(t - h) && self.in_domain(t + h)) {
                h *= 0.5;
            }
            let fd = (self.f(t + h) - self.f(t - h)) / (2.0 * h);
            let fp = self.f_prime(t);
            if (fd - fp).abs() > 1e-6 * fp.abs().max(1.0) {
                return Err(Error::domain(format!("f'({t}) = {fp} but finite differences give {fd}")));
            }
        }
        Ok(())
    }
}

/// `h(θ) = ∫_{θ0}^θ √f''(u) du`.
pub fn h_of(gen: &ScalarGenerator, theta: f64) -> Result<f64> {
    gen.check_domain(theta)?;
    if theta == gen.theta_ref {
        return Ok(0.0);
    }
    let r = integrate(|u| gen.f_second(u).sqrt(), gen.theta_ref, theta, H_ABS_TOL, H_REL_TOL, H_MAX_INTERVALS)?;
    if !r.value.is_finite() {
        return Err(Error::numerical(format!("h({theta}) is not finite")));
    }
    Ok(r.value)
}

/// Walks from `start` toward the domain edge on the side of `dir` until
/// `g` changes sign; returns `(inner, outer)` with `g(inner) < 0 <= g(outer)`
/// for `dir = +1` (reversed for `-1`).
fn grow_bracket<G: Fn(f64) -> Result<f64>>(gen: &ScalarGenerator, start: f64, dir: f64, g: G) -> Result<(f64, f64)> {
    let edge = if dir > 0.0 { gen.hi } else { gen.lo };
    let mut inner = start;
    let mut step = 1.0_f64.max(start.abs());
    for _ in 0..=MAX_DOUBLINGS {
        let cand = if edge.is_finite() { edge - (edge - inner) * 0.5 } else { inner + dir * step };
        if !gen.in_domain(cand) || cand == inner {
            break;
        }
        let v = g(cand)?;
        if dir * v >= 0.0 {
            return Ok((inner, cand));
        }
        inner = cand;
        step *= 2.0;
    }
    Err(Error::domain("target outside the range of the map"))
}

/// Root of the increasing function `g` in `[a, b]` with `g(a) <= 0 <= g(b)`,
/// using Newton steps with derivative `dg` when they stay inside the bracket.
fn monotone_root<G, D>(mut a: f64, mut b: f64, g: G, dg: D, ftol: f64) -> Result<f64>
where
    G: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> f64,
{
    let mut x = 0.5 * (a + b);
    for _ in 0..300 {
        let v = g(x)?;
        if v.abs() <= ftol {
            return Ok(x);
        }
        if v < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return Ok(x);
        }
        let newton = x - v / dg(x);
        x = if newton > a && newton < b && newton.is_finite() { newton } else { mid };
    }
    Err(Error::NoConvergence { iterations: 300, gap: b - a })
}

/// Inverse of [`h_of`]; iterates to `|h(θ) - y| <= 1e-13 max(1, |y|)` or a
/// collapsed bracket.
pub fn h_inverse(gen: &ScalarGenerator, y: f64) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::domain("non-finite target"));
    }
    if y == 0.0 {
        return Ok(gen.theta_ref);
    }
    let g = |t: f64| Ok(h_of(gen, t)? - y);
    let dir = y.signum();
    let (inner, outer) = grow_bracket(gen, gen.theta_ref, dir, g)?;
    let (a, b) = if dir > 0.0 { (inner, outer) } else { (outer, inner) };
    monotone_root(a, b, g, |t| gen.f_second(t).sqrt(), 1e-13 * y.abs().max(1.0))
}

/// `(f')^{-1}(eta)` searched inside `[lo, hi]`, which must bracket the root.
pub fn f_prime_inverse_in(gen: &ScalarGenerator, eta: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo == hi {
        return Ok(lo);
    }
    let g = |t: f64| Ok(gen.f_prime(t) - eta);
    if g(lo)? > 0.0 || g(hi)? < 0.0 {
        return Err(Error::Bracket { s_lo: gen.f_prime(lo), s_hi: gen.f_prime(hi) });
    }
    monotone_root(lo, hi, g, |t| gen.f_second(t), 4.0 * f64::EPSILON * eta.abs().max(f64::MIN_POSITIVE))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jfr1d {
    pub center: f64,
    /// `Σ w_i θ_i`
    pub right: f64,
    /// `(f')^{-1}(Σ w_i f'(θ_i))`
    pub left: f64,
}

fn check_inputs(gen: &ScalarGenerator, thetas: &[f64], weights: &Weights) -> Result<(f64, f64)> {
    if thetas.is_empty() {
        return Err(Error::Empty);
    }
    if thetas.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: thetas.len(), got: weights.len() });
    }
    for &t in thetas {
        gen.check_domain(t)?;
    }
    let lo = thetas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = thetas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

/// Weighted sided KL centroids `(θ̄, θ̲)` in natural coordinates.
pub fn sided_centroids_1d(gen: &ScalarGenerator, thetas: &[f64], weights: &Weights) -> Result<(f64, f64)> {
    let (lo, hi) = check_inputs(gen, thetas, weights)?;
    let right = thetas.iter().zip(weights.iter()).map(|(t, w)| w * t).sum::<f64>().clamp(lo, hi);
    let eta = thetas.iter().zip(weights.iter()).map(|(&t, w)| w * gen.f_prime(t)).sum::<f64>();
    let eta = eta.clamp(gen.f_prime(lo), gen.f_prime(hi));
    let left = f_prime_inverse_in(gen, eta, lo, hi)?;
    Ok((right, left))
}

/// `h`-midpoint of the two sided KL centroids.
pub fn jfr_center_1d(gen: &ScalarGenerator, thetas: &[f64], weights: &Weights) -> Result<Jfr1d> {
    let (right, left) = sided_centroids_1d(gen, thetas, weights)?;
    if right == left {
        return Ok(Jfr1d { center: right, right, left });
    }
    // anchoring h at one end keeps the integrals short
    let anchored = gen.clone().with_theta_ref(right)?;
    let center = h_inverse(&anchored, 0.5 * h_of(&anchored, left)?)?;
    let (a, b) = if right < left { (right, left) } else { (left, right) };
    Ok(Jfr1d { center: center.clamp(a, b), right, left })
}

/// Scalar Gauss-Bregman double sequence: arithmetic mean paired with the
/// `f'`-quasi-arithmetic mean, both starting from the sided centroids.
pub fn gb_center_1d(
    gen: &ScalarGenerator,
    thetas: &[f64],
    weights: &Weights,
    rel_tol: f64,
    max_iter: usize,
) -> Result<(f64, usize)> {
    let (mut a, mut g) = sided_centroids_1d(gen, thetas, weights)?;
    for it in 0..max_iter {
        if (a - g).abs() <= rel_tol * a.abs().max(1.0) {
            return Ok((0.5 * (a + g), it));
        }
        let (lo, hi) = if a < g { (a, g) } else { (g, a) };
        let eta = (0.5 * (gen.f_prime(a) + gen.f_prime(g))).clamp(gen.f_prime(lo), gen.f_prime(hi));
        let next_g = f_prime_inverse_in(gen, eta, lo, hi)?;
        a = 0.5 * (a + g);
        g = next_g;
    }
    Err(Error::NoConvergence { iterations: max_iter, gap: (a - g).abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categorical::{cat_to_natural, jfr_center_cat, HistogramSet};
    use proptest::prelude::*;

    #[test]
    fn builtins_pass_their_checks() {
        let s = [-3.0, -0.5, 0.0, 0.7, 4.0];
        ScalarGenerator::gaussian_fixed_variance().check(&s).unwrap();
        ScalarGenerator::poisson().check(&s).unwrap();
        ScalarGenerator::bernoulli().check(&s).unwrap();
        ScalarGenerator::exponential().check(&[-5.0, -1.0, -0.01]).unwrap();
        assert!(ScalarGenerator::exponential().check(&[0.5]).is_err());
        let bad = ScalarGenerator::new("bad", |t| t * t, |t| t, |_| 2.0, -1.0, 1.0, 0.0).unwrap();
        assert!(bad.check(&[0.5]).is_err());
        assert!(ScalarGenerator::new("x", |t| t, |_| 1.0, |_| 1.0, 1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn h_examples() {
        let g = ScalarGenerator::gaussian_fixed_variance();
        assert_eq!(h_of(&g, 0.0).unwrap(), 0.0);
        assert!((h_of(&g, 2.5).unwrap() - 2.5).abs() < 1e-12);
        let p = ScalarGenerator::poisson();
        for t in [-4.0, -0.3, 1.0, 6.0] {
            let exact = 2.0 * ((t / 2.0_f64).exp() - 1.0);
            assert!((h_of(&p, t).unwrap() - exact).abs() < 1e-10 * exact.abs().max(1.0));
        }
        let y = 2.0 * (0.5_f64.exp() - 1.0);
        assert!((h_inverse(&p, y).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(h_inverse(&p, 0.0).unwrap(), 0.0);
        // Bernoulli: h = 2 asin(√σ(θ)) - π/2, bounded by ±π/2
        let b = ScalarGenerator::bernoulli();
        assert!(h_inverse(&b, 1.6).is_err());
        assert!(h_inverse(&p, -2.5).is_err());
        assert!(h_of(&ScalarGenerator::exponential(), 1.0).is_err());
    }

    #[test]
    fn exponential_midpoint_is_geometric() {
        let e = ScalarGenerator::exponential();
        let w = Weights::new(vec![0.25, 0.75]).unwrap();
        let r = jfr_center_1d(&e, &[-0.2, -5.0], &w).unwrap();
        assert!((r.right - (-0.25 * 0.2 - 0.75 * 5.0)).abs() < 1e-14);
        // f' = -1/θ, so the left centroid is the weighted harmonic mean
        let left = -1.0 / (0.25 / 0.2 + 0.75 / 5.0);
        assert!((r.left - left).abs() < 1e-12);
        assert!((r.center + (r.right * r.left).sqrt()).abs() < 1e-9, "{r:?}");
    }

    #[test]
    fn trivial_centers() {
        let w = Weights::uniform(3).unwrap();
        let p = ScalarGenerator::poisson();
        let r = jfr_center_1d(&p, &[0.4; 3], &w).unwrap();
        assert_eq!(r.center, 0.4);
        let g = ScalarGenerator::gaussian_fixed_variance();
        let r = jfr_center_1d(&g, &[1.0, 2.0, 6.0], &w).unwrap();
        assert!((r.center - 3.0).abs() < 1e-12 && (r.left - 3.0).abs() < 1e-12);
        assert!(jfr_center_1d(&g, &[], &Weights::uniform(1).unwrap()).is_err());
    }

    #[test]
    fn agrees_with_two_bin_categorical() {
        let b = ScalarGenerator::bernoulli();
        for rows in [vec![vec![0.3, 0.7], vec![0.9, 0.1]], vec![vec![0.01, 0.99], vec![0.5, 0.5], vec![0.8, 0.2]]] {
            let n = rows.len();
            let set = HistogramSet::from_rows(rows, Weights::uniform(n).unwrap()).unwrap();
            let thetas: Vec<f64> = set.rows().iter().map(|p| cat_to_natural(p)[0]).collect();
            let r = jfr_center_1d(&b, &thetas, set.weights()).unwrap();
            let c = cat_to_natural(&jfr_center_cat(&set))[0];
            assert!((r.center - c).abs() < 1e-8, "{} vs {c}", r.center);
        }
    }

    #[test]
    fn gb_and_jfr_differ_but_share_the_hull() {
        let p = ScalarGenerator::poisson();
        let w = Weights::uniform(2).unwrap();
        let j = jfr_center_1d(&p, &[-1.0, 2.0], &w).unwrap();
        let (gb, _) = gb_center_1d(&p, &[-1.0, 2.0], &w, 1e-14, 100).unwrap();
        let (lo, hi) = (j.right.min(j.left), j.right.max(j.left));
        assert!(gb >= lo && gb <= hi);
        assert!(j.center >= lo && j.center <= hi);
        assert!((gb - j.center).abs() > 1e-4);
    }

    proptest! {
        #[test]
        fn h_increasing_and_invertible(mut ts in proptest::collection::vec(-8.0f64..8.0, 2..6)) {
            let p = ScalarGenerator::poisson();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            let hs: Vec<f64> = ts.iter().map(|&t| h_of(&p, t).unwrap()).collect();
            prop_assert!(hs.windows(2).all(|w| w[0] < w[1]));
            for (&t, &h) in ts.iter().zip(&hs) {
                let back = h_inverse(&p, h).unwrap();
                prop_assert!((h_of(&p, back).unwrap() - h).abs() <= 1e-9 * h.abs().max(1.0));
                prop_assert!((back - t).abs() <= 1e-9 * t.abs().max(1.0));
            }
        }

        #[test]
        fn jfr_between_sided_centroids(ts in proptest::collection::vec(-0.99f64..-0.01, 1..5), scale in 0.1f64..50.0) {
            let e = ScalarGenerator::exponential();
            let ts: Vec<f64> = ts.iter().map(|t| t * scale).collect();
            let w = Weights::uniform(ts.len()).unwrap();
            let r = jfr_center_1d(&e, &ts, &w).unwrap();
            prop_assert!(r.center >= r.right.min(r.left) && r.center <= r.right.max(r.left));
        }
    }
}
