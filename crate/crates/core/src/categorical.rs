//! Categorical distributions (normalized histograms with non-empty bins).

use std::time::Instant;

use crate::error::{Error, Result};
use crate::legendre::{CenterDiagnostics, Generator, Vector, WeightedParamSet, Weights};
use crate::special::lambert_w0;

/// Tolerance on the unit mass of a simplex point.
pub const MASS_TOL: f64 = 1e-12;

/// Default bracket width for the Jeffreys bisection.
pub const DEFAULT_EPSILON: f64 = 1e-10;

/// Default TV stopping threshold for the Gauss-Bregman double sequence.
pub const GB_EPSILON: f64 = 1e-8;

const GB_MAX_ITER: usize = 200;

/// A point of the open probability simplex.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexPoint {
    probs: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        Self::check(&probs).map_err(|reason| Error::NotInSimplex { index: 0, reason })?;
        Ok(Self { probs })
    }

    /// Divides a positive vector by its sum.
    pub fn from_positive(values: &[f64]) -> Result<Self> {
        if let Some((j, x)) = values.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x.is_finite())) {
            return Err(Error::NotInSimplex { index: 0, reason: format!("bin {j} = {x} is not positive") });
        }
        let s: f64 = values.iter().sum();
        Self::new(values.iter().map(|x| x / s).collect())
    }

    fn check(probs: &[f64]) -> std::result::Result<(), String> {
        if probs.len() < 2 {
            return Err(format!("need at least 2 bins, got {}", probs.len()));
        }
        if let Some((j, x)) = probs.iter().enumerate().find(|(_, &x)| !(x > 0.0 && x.is_finite())) {
            return Err(format!("bin {j} = {x} is not strictly positive"));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > MASS_TOL {
            return Err(format!("bins sum to {s}"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Applies a bin permutation: `out[j] = self[perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { probs: perm.iter().map(|&j| self.probs[j]).collect() }
    }
}

/// Weighted histograms of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSet {
    rows: Vec<SimplexPoint>,
    weights: Weights,
}

impl HistogramSet {
    pub fn new(rows: Vec<SimplexPoint>, weights: Weights) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty);
        }
        if rows.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), got: weights.len() });
        }
        let d = rows[0].dim();
        if let Some(r) = rows.iter().find(|r| r.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: r.dim() });
        }
        Ok(Self { rows, weights })
    }

    pub fn uniform(rows: Vec<SimplexPoint>) -> Result<Self> {
        let w = Weights::uniform(rows.len())?;
        Self::new(rows, w)
    }

    /// Builds a set from raw rows, reporting the offending row index.
    pub fn from_rows(rows: Vec<Vec<f64>>, weights: Weights) -> Result<Self> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                SimplexPoint::new(r).map_err(|e| match e {
                    Error::NotInSimplex { reason, .. } => Error::NotInSimplex { index: i, reason },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows, weights)
    }

    pub fn rows(&self) -> &[SimplexPoint] {
        &self.rows
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.rows[0].dim()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &SimplexPoint)> {
        self.weights.iter().zip(self.rows.iter())
    }

    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self { rows: self.rows.iter().map(|r| r.permuted(perm)).collect(), weights: self.weights.clone() }
    }

    /// The same set in natural coordinates.
    pub fn to_natural(&self) -> WeightedParamSet {
        WeightedParamSet::new(self.rows.iter().map(cat_to_natural).collect(), self.weights.clone())
            .expect("rows share a dimension")
    }
}

/// `θ_i = log(p_i / p_d)`, i < d.
pub fn cat_to_natural(p: &SimplexPoint) -> Vector {
    let probs = p.probs();
    let last = probs[probs.len() - 1].ln();
    Vector::from_iterator(probs.len() - 1, probs[..probs.len() - 1].iter().map(|x| x.ln() - last))
}

pub fn cat_from_natural(theta: &Vector) -> SimplexPoint {
    let m = theta.iter().cloned().fold(0.0f64, f64::max);
    let mut probs: Vec<f64> = theta.iter().map(|t| (t - m).exp()).collect();
    probs.push((-m).exp());
    let s: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|x| *x /= s);
    SimplexPoint { probs }
}

/// The categorical cumulant `F(θ) = log(1 + Σ e^{θ_i})` on `R^{d-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CategoricalGenerator {
    bins: usize,
}

pub fn cat_generator(bins: usize) -> Result<CategoricalGenerator> {
    if bins < 2 {
        return Err(Error::domain("categorical family needs at least 2 bins"));
    }
    Ok(CategoricalGenerator { bins })
}

impl CategoricalGenerator {
    pub fn bins(&self) -> usize {
        self.bins
    }
}

impl Generator for CategoricalGenerator {
    fn dim(&self) -> usize {
        self.bins - 1
    }

    fn value(&self, theta: &Vector) -> f64 {
        let m = theta.iter().cloned().fold(0.0f64, f64::max);
        m + ((-m).exp() + theta.iter().map(|t| (t - m).exp()).sum::<f64>()).ln()
    }

    fn grad(&self, theta: &Vector) -> Vector {
        let p = cat_from_natural(theta);
        Vector::from_column_slice(&p.probs()[..self.bins - 1])
    }

    fn grad_inv(&self, eta: &Vector) -> Result<Vector> {
        if eta.len() != self.bins - 1 {
            return Err(Error::DimensionMismatch { expected: self.bins - 1, got: eta.len() });
        }
        if !self.in_dual_domain(eta) {
            return Err(Error::domain("moment parameter outside the open simplex"));
        }
        let rest = 1.0 - eta.sum();
        Ok(eta.map(|e| (e / rest).ln()))
    }

    fn in_domain(&self, theta: &Vector) -> bool {
        theta.len() == self.bins - 1 && theta.iter().all(|t| t.is_finite())
    }

    fn in_dual_domain(&self, eta: &Vector) -> bool {
        eta.len() == self.bins - 1 && eta.iter().all(|&e| e > 0.0) && eta.sum() < 1.0
    }
}

/// `a_j = Σ_i w_i p_ij`.
pub fn arithmetic_mean(set: &HistogramSet) -> SimplexPoint {
    let mut a = vec![0.0; set.dim()];
    for (w, p) in set.iter() {
        for (acc, x) in a.iter_mut().zip(p.probs()) {
            *acc += w * x;
        }
    }
    let s: f64 = a.iter().sum();
    a.iter_mut().for_each(|x| *x /= s);
    SimplexPoint { probs: a }
}

/// `g_j ∝ Π_i p_ij^{w_i}`, computed in the log domain.
pub fn normalized_geometric_mean(set: &HistogramSet) -> SimplexPoint {
    let mut lg = vec![0.0; set.dim()];
    for (w, p) in set.iter() {
        for (acc, x) in lg.iter_mut().zip(p.probs()) {
            *acc += w * x.ln();
        }
    }
    normalize_log(&lg)
}

fn normalize_log(lg: &[f64]) -> SimplexPoint {
    let m = lg.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut g: Vec<f64> = lg.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = g.iter().sum();
    g.iter_mut().for_each(|x| *x /= s);
    SimplexPoint { probs: g }
}

/// `c_j(λ) = a_j / W0((a_j / g_j) e^{1+λ})`; not normalized.
pub fn c_of_lambda(a: &SimplexPoint, g: &SimplexPoint, lambda: f64) -> Result<Vec<f64>> {
    if a.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: g.dim() });
    }
    let scale = (1.0 + lambda).exp();
    a.probs().iter().zip(g.probs()).map(|(&aj, &gj)| Ok(aj / lambert_w0(aj / gj * scale)?)).collect()
}

fn mass(a: &SimplexPoint, g: &SimplexPoint, lambda: f64) -> Result<f64> {
    Ok(c_of_lambda(a, g, lambda)?.iter().sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct JeffreysCatResult {
    /// `c(λ)` divided by its mass.
    pub center: SimplexPoint,
    pub lambda: f64,
    /// `|s(λ) - 1|` before renormalization.
    pub mass_residual: f64,
    /// `residual` holds the fixed-point gap `|λ + KL(c : g)|`.
    pub diagnostics: CenterDiagnostics,
}

/// Numerical Jeffreys centroid: bisection on the Lagrange multiplier `λ`
/// over `[max_j (a_j + log g_j) - 1, 0]` until the bracket is narrower than
/// `epsilon`.
pub fn jeffreys_centroid_cat(set: &HistogramSet, epsilon: f64) -> Result<JeffreysCatResult> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("bisection epsilon must be positive"));
    }
    let start = Instant::now();
    let a = arithmetic_mean(set);
    let g = normalized_geometric_mean(set);

    let mut hi = 0.0;
    let mut lo = a.probs().iter().zip(g.probs()).map(|(aj, gj)| aj + gj.ln()).fold(f64::NEG_INFINITY, f64::max) - 1.0;
    // s(λ) is decreasing in λ
    let s_lo = mass(&a, &g, lo)?;
    let s_hi = mass(&a, &g, hi)?;
    if s_lo < 1.0 - MASS_TOL || s_hi > 1.0 + MASS_TOL {
        return Err(Error::Bracket { s_lo, s_hi });
    }

    let mut iterations = 0;
    while hi - lo > epsilon {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(&a, &g, mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let lambda = 0.5 * (lo + hi);
    let raw = c_of_lambda(&a, &g, lambda)?;
    let s: f64 = raw.iter().sum();
    let center = SimplexPoint { probs: raw.iter().map(|c| c / s).collect() };
    let fixed_point = (lambda + kl_cat(&center, &g)).abs();
    Ok(JeffreysCatResult {
        center,
        lambda,
        mass_residual: (s - 1.0).abs(),
        diagnostics: CenterDiagnostics {
            iterations,
            final_gap: hi - lo,
            residual: fixed_point,
            elapsed_ns: start.elapsed().as_nanos() as u64,
            converged: true,
        },
    })
}

/// Closed-form Jeffreys-Fisher-Rao center: the spherical midpoint of `a` and
/// `g`, `c_j = (sqrt a_j + sqrt g_j)² / (2 (1 + Σ_l sqrt(a_l g_l)))`.
pub fn jfr_center_cat(set: &HistogramSet) -> SimplexPoint {
    let a = arithmetic_mean(set);
    let g = normalized_geometric_mean(set);
    jfr_from_means(&a, &g)
}

pub(crate) fn jfr_from_means(a: &SimplexPoint, g: &SimplexPoint) -> SimplexPoint {
    let bc: f64 = a.probs().iter().zip(g.probs()).map(|(x, y)| (x * y).sqrt()).sum();
    let denom = 2.0 * (1.0 + bc);
    let probs = a
        .probs()
        .iter()
        .zip(g.probs())
        .map(|(x, y)| {
            let r = x.sqrt() + y.sqrt();
            r * r / denom
        })
        .collect();
    SimplexPoint { probs }
}

/// Gauss-Bregman center by the arithmetic / normalized-geometric double
/// sequence, stopped when `½‖a_t - g_t‖₁ <= epsilon`. Returns the last
/// arithmetic iterate.
pub fn gb_center_cat(set: &HistogramSet, epsilon: f64) -> Result<(SimplexPoint, CenterDiagnostics)> {
    gb_center_cat_with(set, epsilon, GB_MAX_ITER)
}

pub fn gb_center_cat_with(
    set: &HistogramSet,
    epsilon: f64,
    max_iter: usize,
) -> Result<(SimplexPoint, CenterDiagnostics)> {
    if !(epsilon > 0.0) {
        return Err(Error::domain("Gauss-Bregman epsilon must be positive"));
    }
    let start = Instant::now();
    let mut a = arithmetic_mean(set).probs;
    let mut g = normalized_geometric_mean(set).probs;
    let mut u = vec![0.0; a.len()];
    let mut iterations = 0;
    let mut gap = tv(&a, &g);
    while gap > epsilon && iterations < max_iter {
        gb_cat_step(&mut a, &mut g, &mut u);
        iterations += 1;
        gap = tv(&a, &g);
    }
    let diagnostics = CenterDiagnostics {
        iterations,
        final_gap: gap,
        residual: gap,
        elapsed_ns: start.elapsed().as_nanos() as u64,
        converged: gap <= epsilon,
    };
    Ok((SimplexPoint { probs: a }, diagnostics))
}

fn gb_cat_step(a: &mut [f64], g: &mut [f64], u: &mut [f64]) {
    let mut s = 0.0;
    for j in 0..a.len() {
        u[j] = (a[j] * g[j]).sqrt();
        a[j] = 0.5 * (a[j] + g[j]);
        s += u[j];
    }
    for j in 0..a.len() {
        g[j] = u[j] / s;
    }
}

/// TV gaps `½‖a_t - g_t‖₁` of the categorical double sequence, t = 0..=max_iter
/// or until the gap is at most `epsilon`.
pub fn gb_cat_gaps(set: &HistogramSet, epsilon: f64, max_iter: usize) -> Vec<f64> {
    let mut a = arithmetic_mean(set).probs;
    let mut g = normalized_geometric_mean(set).probs;
    let mut u = vec![0.0; a.len()];
    let mut gaps = vec![tv(&a, &g)];
    while *gaps.last().unwrap() > epsilon && gaps.len() <= max_iter {
        gb_cat_step(&mut a, &mut g, &mut u);
        gaps.push(tv(&a, &g));
    }
    gaps
}

fn tv(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

/// `KL(p:q) = Σ p log(p/q)`.
pub fn kl_cat(p: &SimplexPoint, q: &SimplexPoint) -> f64 {
    p.probs().iter().zip(q.probs()).map(|(x, y)| x * (x / y).ln()).sum()
}

/// `KL(p:q) + KL(q:p) = Σ (p - q) log(p/q)`.
pub fn jeffreys_cat(p: &SimplexPoint, q: &SimplexPoint) -> f64 {
    p.probs().iter().zip(q.probs()).map(|(x, y)| (x - y) * (x / y).ln()).sum()
}

pub fn tv_cat(p: &SimplexPoint, q: &SimplexPoint) -> f64 {
    tv(p.probs(), q.probs())
}

/// `L_J(c) = Σ_i w_i D_J(p_i, c)`.
pub fn jeffreys_loss_cat(set: &HistogramSet, c: &SimplexPoint) -> Result<f64> {
    if c.dim() != set.dim() {
        return Err(Error::DimensionMismatch { expected: set.dim(), got: c.dim() });
    }
    Ok(set.iter().map(|(w, p)| w * jeffreys_cat(p, c)).sum())
}

/// `L_J(candidate) / L_J(reference) - 1`.
pub fn approximation_factor(set: &HistogramSet, candidate: &SimplexPoint, reference: &SimplexPoint) -> Result<f64> {
    let lref = jeffreys_loss_cat(set, reference)?;
    if !(lref > 0.0) {
        return Err(Error::domain("reference has zero Jeffreys loss (all rows identical)"));
    }
    Ok(jeffreys_loss_cat(set, candidate)? / lref - 1.0)
}

/// `c(0)` and its mass `s(0)`.
pub fn unnormalized_center(set: &HistogramSet) -> Result<(Vec<f64>, f64)> {
    let a = arithmetic_mean(set);
    let g = normalized_geometric_mean(set);
    let c = c_of_lambda(&a, &g, 0.0)?;
    let s = c.iter().sum();
    Ok((c, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::legendre::check_generator;

    fn sp(xs: &[f64]) -> SimplexPoint {
        SimplexPoint::new(xs.to_vec()).unwrap()
    }

    fn table2(alpha: f64) -> HistogramSet {
        HistogramSet::uniform(vec![
            SimplexPoint::from_positive(&[1.0, 1.0, 1.0]).unwrap(),
            sp(&[1.0 - alpha, alpha / 2.0, alpha / 2.0]),
        ])
        .unwrap()
    }

    fn mirrored() -> HistogramSet {
        HistogramSet::uniform(vec![sp(&[0.8, 0.2]), sp(&[0.2, 0.8])]).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn simplex_validation() {
        assert!(SimplexPoint::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexPoint::new(vec![1.0, 0.0]).is_err());
        assert!(SimplexPoint::new(vec![0.6, 0.6]).is_err());
        assert!(SimplexPoint::new(vec![1.0]).is_err());
        let e = HistogramSet::from_rows(vec![vec![0.5, 0.5], vec![0.7, 0.2]], Weights::uniform(2).unwrap());
        assert!(matches!(e, Err(Error::NotInSimplex { index: 1, .. })));
    }

    #[test]
    fn natural_coordinates() {
        let t = cat_to_natural(&SimplexPoint::from_positive(&[1.0, 1.0, 1.0]).unwrap());
        assert_eq!(t.as_slice(), &[0.0, 0.0]);
        let t = cat_to_natural(&sp(&[0.5, 0.25, 0.25]));
        assert!((t[0] - 2f64.ln()).abs() < 1e-15 && t[1].abs() < 1e-15);
        let p = sp(&[0.1, 0.2, 0.3, 0.4]);
        assert!(close(cat_from_natural(&cat_to_natural(&p)).probs(), p.probs(), 1e-12));
    }

    #[test]
    fn generator_examples() {
        let g = cat_generator(4).unwrap();
        let z = Vector::zeros(3);
        assert!(close(g.grad(&z).as_slice(), &[0.25; 3], 1e-15));
        assert!((g.value(&z) - 4f64.ln()).abs() < 1e-15);
        let samples: Vec<Vector> =
            (0..10).map(|k| Vector::from_column_slice(&[k as f64 * 0.3 - 1.0, 0.5, -(k as f64) * 0.2])).collect();
        let c = check_generator(&g, &samples).unwrap();
        assert!(c.round_trip < 1e-9 && c.gradient < 1e-6, "{c:?}");
        assert!(cat_generator(1).is_err());
    }

    #[test]
    fn means() {
        let one = HistogramSet::uniform(vec![sp(&[0.2, 0.3, 0.5])]).unwrap();
        assert!(close(arithmetic_mean(&one).probs(), &[0.2, 0.3, 0.5], 1e-15));
        assert!(close(normalized_geometric_mean(&one).probs(), &[0.2, 0.3, 0.5], 1e-15));
        assert!(close(arithmetic_mean(&mirrored()).probs(), &[0.5, 0.5], 1e-15));
        assert!(close(normalized_geometric_mean(&mirrored()).probs(), &[0.5, 0.5], 1e-15));
        let a = arithmetic_mean(&table2(0.1));
        assert!(close(
            a.probs(),
            &[(1.0 / 3.0 + 0.9) / 2.0, (1.0 / 3.0 + 0.05) / 2.0, (1.0 / 3.0 + 0.05) / 2.0],
            1e-15
        ));
    }

    #[test]
    fn c_of_lambda_at_zero_is_identity_when_means_agree() {
        let p = sp(&[0.2, 0.3, 0.5]);
        let c = c_of_lambda(&p, &p, 0.0).unwrap();
        assert!(close(&c, p.probs(), 1e-15));
    }

    #[test]
    fn mass_is_decreasing_in_lambda() {
        let set = table2(0.01);
        let (a, g) = (arithmetic_mean(&set), normalized_geometric_mean(&set));
        let s: Vec<f64> = (0..=50).map(|k| mass(&a, &g, -2.0 + 0.04 * k as f64).unwrap()).collect();
        assert!(s.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn jeffreys_examples() {
        let same = HistogramSet::uniform(vec![sp(&[0.2, 0.3, 0.5]); 3]).unwrap();
        let r = jeffreys_centroid_cat(&same, DEFAULT_EPSILON).unwrap();
        assert!(close(r.center.probs(), &[0.2, 0.3, 0.5], 1e-9));
        assert!(r.lambda.abs() <= 1e-9);
        let r = jeffreys_centroid_cat(&mirrored(), DEFAULT_EPSILON).unwrap();
        assert!(close(r.center.probs(), &[0.5, 0.5], 1e-12));

        let set = table2(0.1);
        let r = jeffreys_centroid_cat(&set, DEFAULT_EPSILON).unwrap();
        assert!(r.mass_residual <= 1e-8);
        assert!(r.diagnostics.residual <= 1e-6);
        assert!(r.lambda <= 0.0);
        assert!(jeffreys_centroid_cat(&set, 0.0).is_err());
    }

    #[test]
    fn jfr_examples() {
        let p = sp(&[0.2, 0.3, 0.5]);
        let same = HistogramSet::uniform(vec![p.clone(); 2]).unwrap();
        assert!(close(jfr_center_cat(&same).probs(), p.probs(), 1e-15));
        assert!(close(jfr_center_cat(&mirrored()).probs(), &[0.5, 0.5], 1e-15));
        let c = jfr_center_cat(&table2(0.1));
        assert!((c.probs().iter().sum::<f64>() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn gb_examples() {
        let p = sp(&[0.2, 0.3, 0.5]);
        let same = HistogramSet::uniform(vec![p.clone(); 2]).unwrap();
        let (c, d) = gb_center_cat(&same, GB_EPSILON).unwrap();
        assert_eq!(d.iterations, 0);
        assert!(close(c.probs(), p.probs(), 1e-15));
        let (c, d) = gb_center_cat(&mirrored(), GB_EPSILON).unwrap();
        assert!(close(c.probs(), &[0.5, 0.5], 1e-15));
        assert!(d.converged);
        let (_, d) = gb_center_cat_with(&table2(1e-6), 1e-15, 1).unwrap();
        assert!(!d.converged);
    }

    #[test]
    fn gb_matches_generic_double_sequence() {
        use crate::gauss_bregman::{gb_center, GbOptions};
        use crate::tolerance::ToleranceConfig;
        let set = table2(0.01);
        let (c, _) = gb_center_cat(&set, 1e-13).unwrap();
        let gen = cat_generator(3).unwrap();
        let r =
            gb_center(&gen, &set.to_natural(), GbOptions::with_tol(ToleranceConfig::new(1e-12, 200).unwrap())).unwrap();
        assert!(close(cat_from_natural(&r.center).probs(), c.probs(), 1e-10));
    }

    #[test]
    fn divergences() {
        let (p, q) = (sp(&[0.5, 0.5]), sp(&[0.25, 0.75]));
        assert_eq!(kl_cat(&p, &p), 0.0);
        assert_eq!(jeffreys_cat(&p, &p), 0.0);
        assert_eq!(tv_cat(&p, &p), 0.0);
        let kl = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        assert!((kl_cat(&p, &q) - kl).abs() < 1e-15);
        assert!((jeffreys_cat(&p, &q) - kl_cat(&p, &q) - kl_cat(&q, &p)).abs() < 1e-15);
        assert!((tv_cat(&p, &q) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn approximation_factor_cases() {
        let set = table2(0.1);
        let r = jeffreys_centroid_cat(&set, DEFAULT_EPSILON).unwrap();
        assert_eq!(approximation_factor(&set, &r.center, &r.center).unwrap(), 0.0);
        let same = HistogramSet::uniform(vec![sp(&[0.4, 0.6]); 2]).unwrap();
        let p = sp(&[0.4, 0.6]);
        assert!(approximation_factor(&same, &p, &p).is_err());
    }

    #[test]
    fn unnormalized_center_cases() {
        let p = sp(&[0.2, 0.3, 0.5]);
        let (c, s) = unnormalized_center(&HistogramSet::uniform(vec![p.clone(); 2]).unwrap()).unwrap();
        assert!(close(&c, p.probs(), 1e-15) && (s - 1.0).abs() < 1e-15);
        let (c, s) = unnormalized_center(&mirrored()).unwrap();
        assert!(close(&c, &[0.5, 0.5], 1e-15) && (s - 1.0).abs() < 1e-15);
        let (_, s) = unnormalized_center(&table2(0.1)).unwrap();
        assert!(s < 1.0);
    }
}
