//! Legendre-type generators and the Bregman machinery built on them.
//!
//! Parameters are flat vectors. A generator fixes the inner product on its
//! parameter space; `grad` returns the Riesz representer of `dF` under that
//! inner product, so `B_F(p:q) = F(p) - F(q) - <p - q, grad F(q)>` holds for
//! every family, including the matrix-valued ones.

use std::sync::Arc;

use nalgebra::DVector;

use crate::error::{Error, Result};

pub type Vector = DVector<f64>;

pub trait Generator {
    /// Length of the flat parameter vector.
    fn dim(&self) -> usize;
    fn value(&self, theta: &Vector) -> f64;
    fn grad(&self, theta: &Vector) -> Vector;
    /// Inverse of `grad`, mapping a dual (moment) parameter back to `theta`.
    fn grad_inv(&self, eta: &Vector) -> Result<Vector>;
    fn in_domain(&self, theta: &Vector) -> bool;

    fn in_dual_domain(&self, eta: &Vector) -> bool {
        self.grad_inv(eta).map(|t| self.in_domain(&t)).unwrap_or(false)
    }

    fn is_separable(&self) -> bool {
        false
    }

    fn inner(&self, a: &Vector, b: &Vector) -> f64 {
        a.dot(b)
    }

    fn norm(&self, a: &Vector) -> f64 {
        self.inner(a, a).max(0.0).sqrt()
    }
}

impl<G: Generator + ?Sized> Generator for &G {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, theta: &Vector) -> f64 {
        (**self).value(theta)
    }
    fn grad(&self, theta: &Vector) -> Vector {
        (**self).grad(theta)
    }
    fn grad_inv(&self, eta: &Vector) -> Result<Vector> {
        (**self).grad_inv(eta)
    }
    fn in_domain(&self, theta: &Vector) -> bool {
        (**self).in_domain(theta)
    }
    fn in_dual_domain(&self, eta: &Vector) -> bool {
        (**self).in_dual_domain(eta)
    }
    fn is_separable(&self) -> bool {
        (**self).is_separable()
    }
    fn inner(&self, a: &Vector, b: &Vector) -> f64 {
        (**self).inner(a, b)
    }
}

type ScalarFn = Arc<dyn Fn(&Vector) -> f64 + Send + Sync>;
type VectorFn = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;
type Predicate = Arc<dyn Fn(&Vector) -> bool + Send + Sync>;

/// A generator assembled from closures.
#[derive(Clone)]
pub struct GeneratorSpec {
    dim: usize,
    eval_f: ScalarFn,
    eval_grad: VectorFn,
    eval_grad_inv: VectorFn,
    in_domain: Predicate,
    in_dual_domain: Option<Predicate>,
    separable: bool,
}

impl std::fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GeneratorSpec")
            .field("dim", &self.dim)
            .field("separable", &self.separable)
            .finish_non_exhaustive()
    }
}

impl GeneratorSpec {
    pub fn new<F, G, H, D>(dim: usize, eval_f: F, eval_grad: G, eval_grad_inv: H, in_domain: D) -> Self
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
        G: Fn(&Vector) -> Vector + Send + Sync + 'static,
        H: Fn(&Vector) -> Vector + Send + Sync + 'static,
        D: Fn(&Vector) -> bool + Send + Sync + 'static,
    {
        Self {
            dim,
            eval_f: Arc::new(eval_f),
            eval_grad: Arc::new(eval_grad),
            eval_grad_inv: Arc::new(eval_grad_inv),
            in_domain: Arc::new(in_domain),
            in_dual_domain: None,
            separable: false,
        }
    }

    pub fn separable(mut self, yes: bool) -> Self {
        self.separable = yes;
        self
    }

    pub fn with_dual_domain<D>(mut self, pred: D) -> Self
    where
        D: Fn(&Vector) -> bool + Send + Sync + 'static,
    {
        self.in_dual_domain = Some(Arc::new(pred));
        self
    }

    /// `F(θ) = Σ θ_k²`, whose Bregman divergence is the squared distance.
    pub fn squared_norm(dim: usize) -> Self {
        Self::new(dim, |t| t.norm_squared(), |t| t * 2.0, |e| e * 0.5, |t| t.iter().all(|x| x.is_finite()))
            .separable(true)
    }

    /// Burg entropy `F(θ) = -Σ log θ_k` on the positive orthant (Itakura-Saito).
    pub fn burg(dim: usize) -> Self {
        Self::new(
            dim,
            |t| -t.iter().map(|x| x.ln()).sum::<f64>(),
            |t| t.map(|x| -1.0 / x),
            |e| e.map(|y| -1.0 / y),
            |t| t.iter().all(|&x| x > 0.0 && x.is_finite()),
        )
        .with_dual_domain(|e| e.iter().all(|&y| y < 0.0 && y.is_finite()))
        .separable(true)
    }

    /// `F(θ) = Σ (θ_k log θ_k - θ_k)` on the positive orthant
    /// (extended KL on positive measures).
    pub fn positive_entropy(dim: usize) -> Self {
        Self::new(
            dim,
            |t| t.iter().map(|&x| x * x.ln() - x).sum(),
            |t| t.map(f64::ln),
            |e| e.map(f64::exp),
            |t| t.iter().all(|&x| x > 0.0 && x.is_finite()),
        )
        .with_dual_domain(|e| e.iter().all(|y| y.is_finite()))
        .separable(true)
    }
}

impl Generator for GeneratorSpec {
    fn dim(&self) -> usize {
        self.dim
    }
    fn value(&self, theta: &Vector) -> f64 {
        (self.eval_f)(theta)
    }
    fn grad(&self, theta: &Vector) -> Vector {
        (self.eval_grad)(theta)
    }
    fn grad_inv(&self, eta: &Vector) -> Result<Vector> {
        if eta.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: eta.len() });
        }
        if let Some(pred) = &self.in_dual_domain {
            if !pred(eta) {
                return Err(Error::domain("dual parameter outside the gradient image"));
            }
        }
        let t = (self.eval_grad_inv)(eta);
        if t.iter().all(|x| x.is_finite()) {
            Ok(t)
        } else {
            Err(Error::numerical("non-finite reciprocal gradient"))
        }
    }
    fn in_domain(&self, theta: &Vector) -> bool {
        theta.len() == self.dim && (self.in_domain)(theta)
    }
    fn in_dual_domain(&self, eta: &Vector) -> bool {
        match &self.in_dual_domain {
            Some(pred) => eta.len() == self.dim && pred(eta),
            None => self.grad_inv(eta).map(|t| self.in_domain(&t)).unwrap_or(false),
        }
    }
    fn is_separable(&self) -> bool {
        self.separable
    }
}

/// The convex conjugate `F*(η) = <η, θ(η)> - F(θ(η))`, with the roles of
/// `grad` and `grad_inv` exchanged.
#[derive(Debug, Clone, Copy)]
pub struct Dual<G>(pub G);

impl<G: Generator> Generator for Dual<G> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn value(&self, eta: &Vector) -> f64 {
        match self.0.grad_inv(eta) {
            Ok(theta) => self.0.inner(eta, &theta) - self.0.value(&theta),
            Err(_) => f64::NAN,
        }
    }
    fn grad(&self, eta: &Vector) -> Vector {
        self.0.grad_inv(eta).unwrap_or_else(|_| Vector::from_element(eta.len(), f64::NAN))
    }
    fn grad_inv(&self, theta: &Vector) -> Result<Vector> {
        if !self.0.in_domain(theta) {
            return Err(Error::domain("primal parameter outside the domain"));
        }
        Ok(self.0.grad(theta))
    }
    fn in_domain(&self, eta: &Vector) -> bool {
        self.0.in_dual_domain(eta)
    }
    fn in_dual_domain(&self, theta: &Vector) -> bool {
        self.0.in_domain(theta)
    }
    fn is_separable(&self) -> bool {
        self.0.is_separable()
    }
    fn inner(&self, a: &Vector, b: &Vector) -> f64 {
        self.0.inner(a, b)
    }
}

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights(Vec<f64>);

impl Weights {
    pub const SUM_TOL: f64 = 1e-12;

    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((i, x)) = w.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidWeights(format!("weight {i} = {x} is not strictly positive")));
        }
        let s: f64 = w.iter().sum();
        if (s - 1.0).abs() > Self::SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {s}, not 1")));
        }
        Ok(Self(w))
    }

    /// Rescales positive raw weights onto the simplex.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        let s: f64 = raw.iter().sum();
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::InvalidWeights("weights do not have a positive finite sum".into()));
        }
        Self::new(raw.iter().map(|x| x / s).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Empty);
        }
        Ok(Self(vec![1.0 / n as f64; n]))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}

/// Weighted points of a common parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedParamSet {
    points: Vec<Vector>,
    weights: Weights,
}

impl WeightedParamSet {
    pub fn new(points: Vec<Vector>, weights: Weights) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Empty);
        }
        if points.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: points.len(), got: weights.len() });
        }
        let d = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.len() });
        }
        Ok(Self { points, weights })
    }

    pub fn uniform(points: Vec<Vector>) -> Result<Self> {
        let w = Weights::uniform(points.len())?;
        Self::new(points, w)
    }

    /// Checks every point against the generator's domain.
    pub fn validate<G: Generator>(&self, gen: &G) -> Result<()> {
        for (i, p) in self.points.iter().enumerate() {
            if p.len() != gen.dim() {
                return Err(Error::DimensionMismatch { expected: gen.dim(), got: p.len() });
            }
            if !gen.in_domain(p) {
                return Err(Error::domain(format!("point {i} is outside the generator domain")));
            }
        }
        Ok(())
    }

    pub fn points(&self) -> &[Vector] {
        &self.points
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Vector)> {
        self.weights.iter().zip(self.points.iter())
    }
}

/// Per-computation record attached to every iterative center.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CenterDiagnostics {
    pub iterations: usize,
    /// Distance between the last two iterates, or the final bracket width.
    pub final_gap: f64,
    /// Method-specific optimality residual.
    pub residual: f64,
    pub elapsed_ns: u64,
    pub converged: bool,
}

pub(crate) fn check_domain<G: Generator>(gen: &G, theta: &Vector) -> Result<()> {
    if theta.len() != gen.dim() {
        return Err(Error::DimensionMismatch { expected: gen.dim(), got: theta.len() });
    }
    if !gen.in_domain(theta) {
        return Err(Error::domain("parameter outside the generator domain"));
    }
    Ok(())
}

/// `B_F(θ1:θ2) = F(θ1) - F(θ2) - <θ1 - θ2, ∇F(θ2)>`.
pub fn bregman_div<G: Generator>(gen: &G, theta1: &Vector, theta2: &Vector) -> Result<f64> {
    check_domain(gen, theta1)?;
    check_domain(gen, theta2)?;
    Ok(gen.value(theta1) - gen.value(theta2) - gen.inner(&(theta1 - theta2), &gen.grad(theta2)))
}

/// `S_F(θ1, θ2) = <θ1 - θ2, ∇F(θ1) - ∇F(θ2)>`.
pub fn symmetrized_bregman<G: Generator>(gen: &G, theta1: &Vector, theta2: &Vector) -> Result<f64> {
    check_domain(gen, theta1)?;
    check_domain(gen, theta2)?;
    Ok(gen.inner(&(theta1 - theta2), &(gen.grad(theta1) - gen.grad(theta2))))
}

/// `(∇F)^{-1}(Σ w_i ∇F(θ_i))`.
pub fn quasi_arithmetic_center<G: Generator>(gen: &G, set: &WeightedParamSet) -> Result<Vector> {
    set.validate(gen)?;
    if set.len() == 1 {
        return Ok(set.points()[0].clone());
    }
    let mut acc = Vector::zeros(set.dim());
    for (w, p) in set.iter() {
        acc += gen.grad(p) * w;
    }
    gen.grad_inv(&acc)
}

/// Weighted arithmetic mean of the parameters.
pub fn right_bregman_centroid(set: &WeightedParamSet) -> Vector {
    let mut acc = Vector::zeros(set.dim());
    for (w, p) in set.iter() {
        acc += p * w;
    }
    acc
}

/// `Δ_F(θ1:θ:θ2) = ½ B_F(θ1:θ) + ½ B_F(θ:θ2)`.
pub fn mixed_bregman<G: Generator>(gen: &G, theta1: &Vector, theta: &Vector, theta2: &Vector) -> Result<f64> {
    Ok(0.5 * bregman_div(gen, theta1, theta)? + 0.5 * bregman_div(gen, theta, theta2)?)
}

/// `L_J(θ) = Σ w_i S_F(θ_i, θ)`.
pub fn jeffreys_loss<G: Generator>(gen: &G, set: &WeightedParamSet, theta: &Vector) -> Result<f64> {
    check_domain(gen, theta)?;
    set.validate(gen)?;
    let g = gen.grad(theta);
    Ok(set.iter().map(|(w, p)| w * gen.inner(&(p - theta), &(gen.grad(p) - &g))).sum())
}

/// Centered finite-difference partial derivatives of `f` at `x`, with step
/// `cbrt(eps) * max(1, |x_k|)`. Steps are halved while they leave the domain.
pub fn fd_partials<F, D>(f: F, in_domain: D, x: &Vector) -> Result<Vector>
where
    F: Fn(&Vector) -> Result<f64>,
    D: Fn(&Vector) -> bool,
{
    let base = f64::EPSILON.cbrt();
    let mut out = Vector::zeros(x.len());
    for k in 0..x.len() {
        let mut h = base * x[k].abs().max(1.0);
        loop {
            let mut up = x.clone();
            let mut dn = x.clone();
            up[k] += h;
            dn[k] -= h;
            if in_domain(&up) && in_domain(&dn) {
                out[k] = (f(&up)? - f(&dn)?) / ((up[k] - dn[k]).max(f64::MIN_POSITIVE));
                break;
            }
            h *= 0.5;
            if h < f64::EPSILON * x[k].abs().max(1.0) {
                return Err(Error::numerical(format!("finite-difference step underflow in coordinate {k}")));
            }
        }
    }
    Ok(out)
}

/// Norm of the gradient of `L_J` at `θ`, by finite differences. The partials
/// are converted to the gradient under the generator's inner product.
pub fn energy_grad_residual<G: Generator>(gen: &G, set: &WeightedParamSet, theta: &Vector) -> Result<f64> {
    check_domain(gen, theta)?;
    set.validate(gen)?;
    let partials = fd_partials(|t| jeffreys_loss(gen, set, t), |t| gen.in_domain(t), theta)?;
    Ok(riesz_norm(gen, &partials))
}

pub(crate) fn riesz_norm<G: Generator>(gen: &G, partials: &Vector) -> f64 {
    let n = partials.len();
    let mut sum = 0.0;
    for k in 0..n {
        let mut e = Vector::zeros(n);
        e[k] = 1.0;
        let m = gen.inner(&e, &e);
        sum += partials[k] * partials[k] / m;
    }
    sum.sqrt()
}

/// Worst-case consistency of a generator over sample points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorCheck {
    /// max |grad_inv(grad θ) - θ|_∞
    pub round_trip: f64,
    /// max relative mismatch between `grad` and finite differences of `F`
    pub gradient: f64,
}

pub fn check_generator<G: Generator>(gen: &G, samples: &[Vector]) -> Result<GeneratorCheck> {
    let mut round_trip: f64 = 0.0;
    let mut gradient: f64 = 0.0;
    let n = gen.dim();
    for theta in samples {
        check_domain(gen, theta)?;
        let back = gen.grad_inv(&gen.grad(theta))?;
        round_trip = round_trip.max((back - theta).amax());
        let partials = fd_partials(|t| Ok(gen.value(t)), |t| gen.in_domain(t), theta)?;
        let g = gen.grad(theta);
        // partial_k = <e_k, grad> = m_k grad_k
        let mut expected = Vector::zeros(n);
        for k in 0..n {
            let mut e = Vector::zeros(n);
            e[k] = 1.0;
            expected[k] = gen.inner(&e, &g);
        }
        let scale = expected.amax().max(1.0);
        gradient = gradient.max((partials - expected).amax() / scale);
    }
    Ok(GeneratorCheck { round_trip, gradient })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::lambert_w0;
    use proptest::prelude::*;

    fn v(xs: &[f64]) -> Vector {
        Vector::from_column_slice(xs)
    }

    #[test]
    fn bregman_examples() {
        let sq = GeneratorSpec::squared_norm(1);
        assert_eq!(bregman_div(&sq, &v(&[3.0]), &v(&[1.0])).unwrap(), 4.0);
        let burg = GeneratorSpec::burg(1);
        let b = bregman_div(&burg, &v(&[1.0]), &v(&[2.0])).unwrap();
        assert!((b - (0.5 - 0.5f64.ln() - 1.0)).abs() < 1e-15);
        assert_eq!(bregman_div(&burg, &v(&[2.0]), &v(&[2.0])).unwrap(), 0.0);
        assert!(bregman_div(&burg, &v(&[-1.0]), &v(&[2.0])).is_err());
    }

    #[test]
    fn cosh_distance() {
        let burg = GeneratorSpec::burg(1);
        let (x, y) = (0.7, 3.1);
        let s = symmetrized_bregman(&burg, &v(&[x]), &v(&[y])).unwrap();
        assert!((s - (x / y + y / x - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn quasi_arithmetic_means() {
        let set = WeightedParamSet::uniform(vec![v(&[1.0]), v(&[4.0])]).unwrap();
        let h = quasi_arithmetic_center(&GeneratorSpec::burg(1), &set).unwrap();
        assert!((h[0] - 1.6).abs() < 1e-15);
        let g = quasi_arithmetic_center(&GeneratorSpec::positive_entropy(1), &set).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-15);
        let same = WeightedParamSet::uniform(vec![v(&[0.3, 2.0]); 3]).unwrap();
        let c = quasi_arithmetic_center(&GeneratorSpec::burg(2), &same).unwrap();
        assert!((c - v(&[0.3, 2.0])).amax() < 1e-15);
    }

    #[test]
    fn right_centroid_examples() {
        let one = WeightedParamSet::uniform(vec![v(&[5.0, -1.0])]).unwrap();
        assert_eq!(right_bregman_centroid(&one), v(&[5.0, -1.0]));
        let two = WeightedParamSet::uniform(vec![v(&[0.0, 0.0]), v(&[2.0, 2.0])]).unwrap();
        assert_eq!(right_bregman_centroid(&two), v(&[1.0, 1.0]));
        let w = WeightedParamSet::new(vec![v(&[1.0]), v(&[4.0])], Weights::new(vec![0.25, 0.75]).unwrap()).unwrap();
        assert_eq!(right_bregman_centroid(&w)[0], 3.25);
    }

    #[test]
    fn weights_validation() {
        assert!(Weights::new(vec![0.5, 0.5]).is_ok());
        assert!(Weights::new(vec![1.0, 0.0]).is_err());
        assert!(Weights::new(vec![0.5, 0.6]).is_err());
        assert!(Weights::new(vec![]).is_err());
        let w = Weights::normalized(&[1.0, 3.0]).unwrap();
        assert_eq!(w.as_slice(), &[0.25, 0.75]);
        assert!(WeightedParamSet::new(vec![v(&[1.0])], Weights::uniform(2).unwrap()).is_err());
    }

    #[test]
    fn mixed_bregman_identities() {
        let g = GeneratorSpec::positive_entropy(2);
        let (a, b) = (v(&[0.2, 1.5]), v(&[2.0, 0.4]));
        assert_eq!(mixed_bregman(&g, &a, &a, &a).unwrap(), 0.0);
        let m = mixed_bregman(&g, &a, &a, &b).unwrap();
        assert!((m - 0.5 * bregman_div(&g, &a, &b).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn loss_is_smaller_at_the_center() {
        let g = GeneratorSpec::burg(1);
        let set = WeightedParamSet::uniform(vec![v(&[1.0]), v(&[4.0])]).unwrap();
        let at_center = jeffreys_loss(&g, &set, &v(&[2.0])).unwrap();
        let at_end = jeffreys_loss(&g, &set, &v(&[4.0])).unwrap();
        assert!(at_center < at_end);
        let single = WeightedParamSet::uniform(vec![v(&[3.0])]).unwrap();
        assert_eq!(jeffreys_loss(&g, &single, &v(&[3.0])).unwrap(), 0.0);
    }

    #[test]
    fn scalar_closed_form_centroid_has_zero_gradient() {
        // F = θ log θ - θ on positive measures: c = a / W0((a/g) e)
        let g = GeneratorSpec::positive_entropy(1);
        let set = WeightedParamSet::uniform(vec![v(&[1.0]), v(&[4.0])]).unwrap();
        let (a, geo) = (2.5, 2.0);
        let c = a / lambert_w0(a / geo * std::f64::consts::E).unwrap();
        let r = energy_grad_residual(&g, &set, &v(&[c])).unwrap();
        assert!(r < 1e-6, "residual {r}");
        assert!(energy_grad_residual(&g, &set, &v(&[3.5])).unwrap() > 1e-2);
        let single = WeightedParamSet::uniform(vec![v(&[3.0])]).unwrap();
        assert!(energy_grad_residual(&g, &single, &v(&[3.0])).unwrap() < 1e-8);
    }

    #[test]
    fn builtin_generators_are_consistent() {
        let samples: Vec<Vector> = (1..20).map(|k| v(&[0.1 * k as f64, 3.0 / k as f64])).collect();
        for g in [GeneratorSpec::burg(2), GeneratorSpec::positive_entropy(2), GeneratorSpec::squared_norm(2)] {
            let c = check_generator(&g, &samples).unwrap();
            assert!(c.round_trip < 1e-9, "{c:?}");
            assert!(c.gradient < 1e-6, "{c:?}");
        }
    }

    proptest! {
        #[test]
        fn sided_and_symmetrized(a in 0.05f64..20.0, b in 0.05f64..20.0, c in 0.05f64..20.0, d in 0.05f64..20.0) {
            for g in [GeneratorSpec::burg(2), GeneratorSpec::positive_entropy(2)] {
                let (p, q) = (v(&[a, b]), v(&[c, d]));
                let bpq = bregman_div(&g, &p, &q).unwrap();
                let bqp = bregman_div(&g, &q, &p).unwrap();
                let s = symmetrized_bregman(&g, &p, &q).unwrap();
                let scale = s.abs().max(1.0);
                prop_assert!(bpq >= -1e-12 * scale && bqp >= -1e-12 * scale);
                prop_assert!((s - (bpq + bqp)).abs() <= 1e-10 * scale);
                prop_assert!((s - symmetrized_bregman(&g, &q, &p).unwrap()).abs() <= 1e-12 * scale);
                // duality
                let sd = symmetrized_bregman(&Dual(&g), &g.grad(&p), &g.grad(&q)).unwrap();
                prop_assert!((s - sd).abs() <= 1e-9 * scale);
            }
        }

        #[test]
        fn scalar_qa_center_in_hull(xs in proptest::collection::vec(0.01f64..100.0, 1..8)) {
            let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let set = WeightedParamSet::uniform(xs.iter().map(|&x| v(&[x])).collect()).unwrap();
            for g in [GeneratorSpec::burg(1), GeneratorSpec::positive_entropy(1)] {
                let c = quasi_arithmetic_center(&g, &set).unwrap()[0];
                prop_assert!(g.in_domain(&v(&[c])));
                prop_assert!(c >= lo * (1.0 - 1e-12) && c <= hi * (1.0 + 1e-12));
            }
        }
    }
}
