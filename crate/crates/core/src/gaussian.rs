//! Multivariate normal distributions.
//!
//! Natural parameters are `θ = (Σ^{-1} μ, -½ Σ^{-1})` for the sufficient
//! statistic `t(x) = (x, x xᵀ)`, so that the cumulant gradient is the moment
//! parameter `η = (μ, Σ + μ μᵀ)`. The flat parameter vector is `θ_v`
//! followed by the upper triangle of `θ_M` (row-major); off-diagonal entries
//! carry weight 2 in the inner product so that `<X, Y> = tr(XY)` on the
//! matrix block.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::gauss_bregman::{gb_center, GbOptions};
use crate::legendre::{energy_grad_residual, CenterDiagnostics, Generator, Vector, WeightedParamSet, Weights};
use crate::spd::{
    from_upper_triangle, geometric_mean, upper_triangle, weighted_arithmetic, weighted_harmonic, Matrix, SpdMatrix,
};
use crate::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianParam {
    mean: DVector<f64>,
    cov: SpdMatrix,
}

impl GaussianParam {
    pub fn new(mean: DVector<f64>, cov: SpdMatrix) -> Result<Self> {
        if mean.len() != cov.dim() {
            return Err(Error::DimensionMismatch { expected: cov.dim(), got: mean.len() });
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("non-finite mean"));
        }
        Ok(Self { mean, cov })
    }

    pub fn standard(d: usize) -> Self {
        Self { mean: DVector::zeros(d), cov: SpdMatrix::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &SpdMatrix {
        &self.cov
    }

    /// Image under `x ↦ A x + b`: `N(A μ + b, A Σ Aᵀ)`.
    pub fn affine(&self, a: &Matrix, b: &DVector<f64>) -> Result<Self> {
        Self::new(a * &self.mean + b, self.cov.congruence(a)?)
    }
}

/// `(θ_v, θ_M) = (Σ^{-1} μ, -½ Σ^{-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct MvnNatural {
    pub theta_v: DVector<f64>,
    pub theta_m: Matrix,
}

/// `(η_v, η_M) = (μ, μ μᵀ + Σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MvnMoment {
    pub eta_v: DVector<f64>,
    pub eta_m: Matrix,
}

fn flat_len(d: usize) -> usize {
    d + d * (d + 1) / 2
}

fn split_flat(v: &Vector, d: usize) -> (DVector<f64>, Matrix) {
    let head = DVector::from_column_slice(&v.as_slice()[..d]);
    let m = from_upper_triangle(&v.as_slice()[d..], d);
    (head, m)
}

fn join_flat(v: &DVector<f64>, m: &Matrix) -> Vector {
    let tri = upper_triangle(m);
    Vector::from_iterator(v.len() + tri.len(), v.iter().chain(tri.iter()).copied())
}

fn chol_inverse(m: &Matrix) -> Option<Matrix> {
    m.clone().cholesky().map(|c| {
        let inv = c.inverse();
        (&inv + inv.transpose()) * 0.5
    })
}

impl MvnNatural {
    pub fn dim(&self) -> usize {
        self.theta_v.len()
    }

    pub fn to_flat(&self) -> Vector {
        join_flat(&self.theta_v, &self.theta_m)
    }

    pub fn from_flat(v: &Vector, d: usize) -> Result<Self> {
        if v.len() != flat_len(d) {
            return Err(Error::DimensionMismatch { expected: flat_len(d), got: v.len() });
        }
        let (theta_v, theta_m) = split_flat(v, d);
        Ok(Self { theta_v, theta_m })
    }
}

impl MvnMoment {
    pub fn to_flat(&self) -> Vector {
        join_flat(&self.eta_v, &self.eta_m)
    }

    pub fn from_flat(v: &Vector, d: usize) -> Result<Self> {
        if v.len() != flat_len(d) {
            return Err(Error::DimensionMismatch { expected: flat_len(d), got: v.len() });
        }
        let (eta_v, eta_m) = split_flat(v, d);
        Ok(Self { eta_v, eta_m })
    }
}

pub fn mvn_to_natural(p: &GaussianParam) -> Result<MvnNatural> {
    let prec = p.cov.inverse()?;
    Ok(MvnNatural { theta_v: prec.matrix() * &p.mean, theta_m: prec.matrix() * -0.5 })
}

pub fn natural_to_mvn(t: &MvnNatural) -> Result<GaussianParam> {
    let prec = &t.theta_m * -2.0;
    let cov = chol_inverse(&prec).ok_or_else(|| Error::NotSpd("-2 θ_M is not positive-definite".into()))?;
    let mean = &cov * &t.theta_v;
    GaussianParam::new(mean, SpdMatrix::new(cov)?)
}

pub fn mvn_to_moment(p: &GaussianParam) -> MvnMoment {
    MvnMoment { eta_v: p.mean.clone(), eta_m: p.cov.matrix() + &p.mean * p.mean.transpose() }
}

pub fn moment_to_mvn(e: &MvnMoment) -> Result<GaussianParam> {
    let cov = &e.eta_m - &e.eta_v * e.eta_v.transpose();
    GaussianParam::new(e.eta_v.clone(), SpdMatrix::new(cov)?)
}

/// The MVN cumulant over flat natural parameters:
/// `F(θ) = ½ θ_vᵀ Σ θ_v + ½ log det Σ + (d/2) log 2π` with `Σ = -½ θ_M^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MvnGenerator {
    d: usize,
}

pub fn mvn_generator(d: usize) -> Result<MvnGenerator> {
    if d == 0 {
        return Err(Error::domain("dimension must be positive"));
    }
    Ok(MvnGenerator { d })
}

impl MvnGenerator {
    pub fn data_dim(&self) -> usize {
        self.d
    }

    fn covariance(&self, theta: &Vector) -> Option<(DVector<f64>, Matrix)> {
        let (tv, tm) = split_flat(theta, self.d);
        let cov = chol_inverse(&(tm * -2.0))?;
        Some((tv, cov))
    }
}

impl Generator for MvnGenerator {
    fn dim(&self) -> usize {
        flat_len(self.d)
    }

    fn value(&self, theta: &Vector) -> f64 {
        let Some((tv, cov)) = self.covariance(theta) else {
            return f64::NAN;
        };
        let logdet = match cov.clone().cholesky() {
            Some(c) => 2.0 * c.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>(),
            None => return f64::NAN,
        };
        0.5 * tv.dot(&(&cov * &tv)) + 0.5 * logdet + 0.5 * self.d as f64 * (2.0 * PI).ln()
    }

    fn grad(&self, theta: &Vector) -> Vector {
        match self.covariance(theta) {
            Some((tv, cov)) => {
                let mu = &cov * tv;
                let second = &cov + &mu * mu.transpose();
                join_flat(&mu, &second)
            }
            None => Vector::from_element(theta.len(), f64::NAN),
        }
    }

    fn grad_inv(&self, eta: &Vector) -> Result<Vector> {
        if eta.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: eta.len() });
        }
        let (ev, em) = split_flat(eta, self.d);
        let cov = &em - &ev * ev.transpose();
        let prec = chol_inverse(&cov).ok_or_else(|| Error::domain("η_M - η_v η_vᵀ is not positive-definite"))?;
        Ok(join_flat(&(&prec * ev), &(prec * -0.5)))
    }

    fn in_domain(&self, theta: &Vector) -> bool {
        theta.len() == self.dim()
            && theta.iter().all(|x| x.is_finite())
            && (from_upper_triangle(&theta.as_slice()[self.d..], self.d) * -1.0).cholesky().is_some()
    }

    fn in_dual_domain(&self, eta: &Vector) -> bool {
        if eta.len() != self.dim() || eta.iter().any(|x| !x.is_finite()) {
            return false;
        }
        let (ev, em) = split_flat(eta, self.d);
        (em - &ev * ev.transpose()).cholesky().is_some()
    }

    fn inner(&self, a: &Vector, b: &Vector) -> f64 {
        let d = self.d;
        let mut s: f64 = a.as_slice()[..d].iter().zip(&b.as_slice()[..d]).map(|(x, y)| x * y).sum();
        let mut k = d;
        for i in 0..d {
            for j in i..d {
                let w = if i == j { 1.0 } else { 2.0 };
                s += w * a[k] * b[k];
                k += 1;
            }
        }
        s
    }
}

/// Weighted Gaussians of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSet {
    items: Vec<GaussianParam>,
    weights: Weights,
}

impl GaussianSet {
    pub fn new(items: Vec<GaussianParam>, weights: Weights) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Empty);
        }
        if items.len() != weights.len() {
            return Err(Error::DimensionMismatch { expected: items.len(), got: weights.len() });
        }
        let d = items[0].dim();
        if let Some(p) = items.iter().find(|p| p.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: p.dim() });
        }
        Ok(Self { items, weights })
    }

    pub fn uniform(items: Vec<GaussianParam>) -> Result<Self> {
        let w = Weights::uniform(items.len())?;
        Self::new(items, w)
    }

    pub fn items(&self) -> &[GaussianParam] {
        &self.items
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.items[0].dim()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// True when every member has the same mean (exactly).
    pub fn common_mean(&self) -> Option<&DVector<f64>> {
        let m = self.items[0].mean();
        self.items.iter().all(|p| p.mean() == m).then_some(m)
    }

    pub fn to_natural(&self) -> Result<WeightedParamSet> {
        let pts = self.items.iter().map(|p| Ok(mvn_to_natural(p)?.to_flat())).collect::<Result<Vec<_>>>()?;
        WeightedParamSet::new(pts, self.weights.clone())
    }

    pub fn affine(&self, a: &Matrix, b: &DVector<f64>) -> Result<Self> {
        let items = self.items.iter().map(|p| p.affine(a, b)).collect::<Result<Vec<_>>>()?;
        Self::new(items, self.weights.clone())
    }
}

/// Closed-form `KL(p : q)`.
pub fn kl_mvn(p: &GaussianParam, q: &GaussianParam) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: p.dim(), got: q.dim() });
    }
    let qi = q.cov.inverse()?;
    let dm = q.mean() - p.mean();
    let tr = (qi.matrix() * p.cov.matrix()).trace();
    let maha = dm.dot(&(qi.matrix() * &dm));
    Ok(0.5 * (tr + maha - p.dim() as f64 + q.cov.log_det()? - p.cov.log_det()?))
}

/// `KL(p:q) + KL(q:p)`.
pub fn jeffreys_mvn(p: &GaussianParam, q: &GaussianParam) -> Result<f64> {
    Ok(kl_mvn(p, q)? + kl_mvn(q, p)?)
}

/// `Σ w_i D_J(p_i, c)`.
pub fn jeffreys_loss_mvn(set: &GaussianSet, c: &GaussianParam) -> Result<f64> {
    set.items.iter().zip(set.weights.iter()).map(|(p, w)| Ok(w * jeffreys_mvn(p, c)?)).sum()
}

/// Finite-difference gradient norm of the Jeffreys loss in natural coordinates.
pub fn jeffreys_grad_residual_mvn(set: &GaussianSet, c: &GaussianParam) -> Result<f64> {
    let gen = mvn_generator(set.dim())?;
    energy_grad_residual(&gen, &set.to_natural()?, &mvn_to_natural(c)?.to_flat())
}

/// `(right, left)`: the weighted mean of natural parameters and the natural
/// parameter of the weighted mean of moment parameters.
pub fn sided_kl_centroids_mvn(set: &GaussianSet) -> Result<(MvnNatural, MvnNatural)> {
    let d = set.dim();
    let mut tv = DVector::zeros(d);
    let mut tm = Matrix::zeros(d, d);
    let mut ev = DVector::zeros(d);
    let mut em = Matrix::zeros(d, d);
    for (p, w) in set.items.iter().zip(set.weights.iter()) {
        let t = mvn_to_natural(p)?;
        tv += t.theta_v * w;
        tm += t.theta_m * w;
        let e = mvn_to_moment(p);
        ev += e.eta_v * w;
        em += e.eta_m * w;
    }
    let right = MvnNatural { theta_v: tv, theta_m: tm };
    let left = mvn_to_natural(&moment_to_mvn(&MvnMoment { eta_v: ev, eta_m: em })?)?;
    Ok((right, left))
}

/// `G = M D Mᵀ` with `D = diag(Σ^{-1}, 1, Σ)` and
/// `M = [[I, 0, 0], [μᵀ, 1, 0], [0, -μ, I]]`, a `(2d+1)`-square SPD matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSpd(SpdMatrix);

impl EmbeddedSpd {
    pub fn embed(p: &GaussianParam) -> Result<Self> {
        let d = p.dim();
        let n = 2 * d + 1;
        let prec = p.cov.inverse()?;
        let mut dm = Matrix::zeros(n, n);
        dm.view_mut((0, 0), (d, d)).copy_from(prec.matrix());
        dm[(d, d)] = 1.0;
        dm.view_mut((d + 1, d + 1), (d, d)).copy_from(p.cov.matrix());
        let mut m = Matrix::identity(n, n);
        for i in 0..d {
            m[(d, i)] = p.mean[i];
            m[(d + 1 + i, d)] = -p.mean[i];
        }
        Ok(Self(SpdMatrix::trusted(&m * dm * m.transpose())))
    }

    pub fn matrix(&self) -> &SpdMatrix {
        &self.0
    }

    /// `Σ = ([G]_{1:d,1:d})^{-1}`, `μ = Σ [G]_{1:d,d+1}`.
    pub fn extract(&self) -> Result<GaussianParam> {
        let n = self.0.dim();
        let d = (n - 1) / 2;
        let g = self.0.matrix();
        let block = g.view((0, 0), (d, d)).into_owned();
        let cov = chol_inverse(&block).ok_or_else(|| Error::NotSpd("precision block of the embedding".into()))?;
        let col = g.view((0, d), (d, 1)).into_owned();
        let mean = &cov * col;
        GaussianParam::new(DVector::from_column_slice(mean.as_slice()), SpdMatrix::new(cov)?)
    }
}

/// Midpoint of the trace-metric geodesic between the two embeddings, read
/// back through [`EmbeddedSpd::extract`]. The SPD midpoint generally leaves
/// the embedded submanifold, so this is not the Fisher-Rao midpoint (for
/// `N(0,1)` and `N(1,1)` it returns mean 0.555); kept for comparison.
pub fn embedded_trace_midpoint(p0: &GaussianParam, p1: &GaussianParam) -> Result<GaussianParam> {
    if p0.dim() != p1.dim() {
        return Err(Error::DimensionMismatch { expected: p0.dim(), got: p1.dim() });
    }
    let g0 = EmbeddedSpd::embed(p0)?;
    let g1 = EmbeddedSpd::embed(p1)?;
    EmbeddedSpd(geometric_mean(g0.matrix(), g1.matrix())?).extract()
}

/// Fisher-Rao geodesic between two normals.
///
/// After the affine change `x ↦ C^{-1}(x - μ0)` (with `Σ0 = C Cᵀ`) the start is
/// `N(0, I)`, and geodesics from there are the images of `t ↦ exp(t A)` with
/// `A = [[-B, x, 0], [xᵀ, 0, -xᵀ], [0, -x, B]]`, read back as `Σ = Δ^{-1}`,
/// `μ = Σ δ` from the leading block `Δ` and column `δ`. The initial velocity
/// `(x, B)` is found by Newton shooting with continuation on the target.
#[derive(Debug, Clone)]
pub struct FisherRaoGeodesic {
    shift: DVector<f64>,
    chol: Matrix,
    velocity_mean: DVector<f64>,
    velocity_cov: Matrix,
    pub newton_iterations: usize,
}

fn sym_exp(a: &Matrix) -> Matrix {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    let l = eig.eigenvalues.map(f64::exp);
    &eig.eigenvectors * Matrix::from_diagonal(&l) * eig.eigenvectors.transpose()
}

fn horizontal(x: &DVector<f64>, b: &Matrix) -> Matrix {
    let d = x.len();
    let mut a = Matrix::zeros(2 * d + 1, 2 * d + 1);
    a.view_mut((0, 0), (d, d)).copy_from(&(-b));
    a.view_mut((d + 1, d + 1), (d, d)).copy_from(b);
    for i in 0..d {
        a[(i, d)] = x[i];
        a[(d, i)] = x[i];
        a[(d, d + 1 + i)] = -x[i];
        a[(d + 1 + i, d)] = -x[i];
    }
    a
}

/// `(μ(t), Σ(t)^{-1})` on the geodesic from `N(0, I)` with velocity `(x, B)`.
fn normalized_point(x: &DVector<f64>, b: &Matrix, t: f64) -> Option<(DVector<f64>, Matrix)> {
    let d = x.len();
    let l = sym_exp(&(horizontal(x, b) * t));
    let delta = l.view((0, 0), (d, d)).into_owned();
    let col = DVector::from_iterator(d, (0..d).map(|i| l[(i, d)]));
    let mean = delta.clone().cholesky()?.solve(&col);
    if mean.iter().all(|v| v.is_finite()) {
        Some((mean, delta))
    } else {
        None
    }
}

fn unpack_velocity(z: &DVector<f64>, d: usize) -> (DVector<f64>, Matrix) {
    (DVector::from_column_slice(&z.as_slice()[..d]), from_upper_triangle(&z.as_slice()[d..], d))
}

fn shooting_residual(z: &DVector<f64>, mean: &DVector<f64>, prec: &Matrix) -> Option<DVector<f64>> {
    let d = mean.len();
    let (x, b) = unpack_velocity(z, d);
    let (m, p) = normalized_point(&x, &b, 1.0)?;
    let tri = upper_triangle(&(p - prec));
    Some(DVector::from_iterator(z.len(), (m - mean).iter().chain(tri.iter()).copied()))
}

/// Larger of the Mahalanobis mean error and the relative precision error
/// `‖L^{-1} (P - P_t) L^{-ᵀ}‖` at `t = 1`, with `P_t = L Lᵀ` the target.
fn endpoint_error(z: &DVector<f64>, mean: &DVector<f64>, prec: &Matrix) -> Option<f64> {
    let (x, b) = unpack_velocity(z, mean.len());
    let (m, p) = normalized_point(&x, &b, 1.0)?;
    let l = prec.clone().cholesky()?;
    let dm = m - mean;
    let maha = dm.dot(&(prec * &dm)).max(0.0).sqrt();
    let li = l.l().try_inverse()?;
    let rel = (&li * (p - prec) * li.transpose()).amax();
    Some(maha.max(rel))
}

const SHOOT_MAX_NEWTON: usize = 30;
const SHOOT_MIN_STEP: f64 = 1e-6;

fn shoot_newton(mut z: DVector<f64>, mean: &DVector<f64>, prec: &Matrix) -> Option<(DVector<f64>, usize)> {
    let n = z.len();
    let scale = 1.0 + prec.amax() + mean.amax();
    for it in 0..SHOOT_MAX_NEWTON {
        let r = shooting_residual(&z, mean, prec)?;
        let nr = r.norm();
        if nr <= 1e-12 * scale {
            return Some((z, it));
        }
        let mut jac = Matrix::zeros(n, n);
        for k in 0..n {
            let h = 1e-6 * z[k].abs().max(1.0);
            let mut zp = z.clone();
            let mut zm = z.clone();
            zp[k] += h;
            zm[k] -= h;
            let col = (shooting_residual(&zp, mean, prec)? - shooting_residual(&zm, mean, prec)?) / (2.0 * h);
            jac.set_column(k, &col);
        }
        let step = jac.svd(true, true).solve(&(-&r), 1e-14).ok()?;
        let mut t = 1.0;
        loop {
            let trial = &z + &step * t;
            if shooting_residual(&trial, mean, prec).is_some_and(|rt| rt.norm() < nr) {
                z = trial;
                break;
            }
            t *= 0.5;
            if t < SHOOT_MIN_STEP {
                // Stalled at the rounding floor of exp(A); accept only if the
                // endpoint matches in scale-free terms.
                return (endpoint_error(&z, mean, prec)? <= 1e-9).then_some((z, it));
            }
        }
    }
    None
}

impl FisherRaoGeodesic {
    pub fn new(p0: &GaussianParam, p1: &GaussianParam) -> Result<Self> {
        let d = p0.dim();
        if p1.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, got: p1.dim() });
        }
        let chol = p0.cov.matrix().clone().cholesky().ok_or_else(|| Error::NotSpd("covariance".into()))?.unpack();
        let ci = chol.clone().try_inverse().ok_or_else(|| Error::numerical("singular Cholesky factor"))?;
        let target_mean = &ci * (p1.mean() - p0.mean());
        let target_cov = SpdMatrix::new(&ci * p1.cov.matrix() * ci.transpose())?;
        let log_cov = crate::spd::spd_log(&target_cov)?;

        // Continuation along (s μ, exp(s log Σ)), doubling or halving the step.
        let mut z = DVector::zeros(d + d * (d + 1) / 2);
        let (mut s, mut ds, mut total) = (0.0_f64, 1.0_f64, 0_usize);
        while s < 1.0 {
            let s1 = (s + ds).min(1.0);
            let mean_s = &target_mean * s1;
            let log_s = &log_cov * s1;
            let prec_s = sym_exp(&(-&log_s));
            let guess = if s == 0.0 {
                let tri = upper_triangle(&log_s);
                DVector::from_iterator(z.len(), mean_s.iter().chain(tri.iter()).copied())
            } else {
                z.clone()
            };
            match shoot_newton(guess, &mean_s, &prec_s) {
                Some((zz, it)) => {
                    z = zz;
                    s = s1;
                    ds = (2.0 * ds).min(1.0);
                    total += it;
                }
                None => {
                    ds *= 0.5;
                    if ds < 1e-6 {
                        return Err(Error::NoConvergence { iterations: total, gap: 1.0 - s });
                    }
                }
            }
        }
        let (velocity_mean, velocity_cov) = unpack_velocity(&z, d);
        Ok(Self { shift: p0.mean().clone(), chol, velocity_mean, velocity_cov, newton_iterations: total })
    }

    /// Point at parameter `t`, with `t = 0` and `t = 1` the endpoints.
    pub fn at(&self, t: f64) -> Result<GaussianParam> {
        let (m, prec) = normalized_point(&self.velocity_mean, &self.velocity_cov, t)
            .ok_or_else(|| Error::numerical("geodesic point left the SPD cone"))?;
        let cov = chol_inverse(&prec).ok_or_else(|| Error::numerical("geodesic point left the SPD cone"))?;
        let cov = &self.chol * cov * self.chol.transpose();
        GaussianParam::new(&self.chol * m + &self.shift, SpdMatrix::new(cov)?)
    }

    /// The trace-metric geodesic `T exp(t A) Tᵀ` in the `(2d+1)` embedding,
    /// with `T = M(μ0) diag(C^{-ᵀ}, 1, C)` so that `lift(0)` is the embedding
    /// of the start. [`EmbeddedSpd::extract`] of `lift(t)` gives `at(t)`;
    /// `lift(1)` is generally a different lift of the end than its embedding.
    pub fn lift(&self, t: f64) -> Result<SpdMatrix> {
        let d = self.shift.len();
        let n = 2 * d + 1;
        let ci = self.chol.clone().try_inverse().ok_or_else(|| Error::numerical("singular Cholesky factor"))?;
        let mut k = Matrix::zeros(n, n);
        k.view_mut((0, 0), (d, d)).copy_from(&ci.transpose());
        k[(d, d)] = 1.0;
        k.view_mut((d + 1, d + 1), (d, d)).copy_from(&self.chol);
        let mut m = Matrix::identity(n, n);
        for i in 0..d {
            m[(d, i)] = self.shift[i];
            m[(d + 1 + i, d)] = -self.shift[i];
        }
        let tm = m * k;
        let g = &tm * sym_exp(&(horizontal(&self.velocity_mean, &self.velocity_cov) * t)) * tm.transpose();
        SpdMatrix::new((&g + g.transpose()) * 0.5)
    }
}

/// Fisher-Rao geodesic midpoint of two normals.
pub fn fisher_rao_midpoint_mvn(p0: &GaussianParam, p1: &GaussianParam) -> Result<GaussianParam> {
    if p0 == p1 {
        return Ok(p0.clone());
    }
    FisherRaoGeodesic::new(p0, p1)?.at(0.5)
}

/// Jeffreys-Fisher-Rao center: Fisher-Rao midpoint of the sided KL centroids.
pub fn jfr_center_mvn(set: &GaussianSet) -> Result<GaussianParam> {
    let (right, left) = sided_kl_centroids_mvn(set)?;
    fisher_rao_midpoint_mvn(&natural_to_mvn(&right)?, &natural_to_mvn(&left)?)
}

/// Gauss-Bregman center under the MVN cumulant. The generator is not
/// separable, so `diagnostics.converged` may be false.
pub fn gb_center_mvn(set: &GaussianSet, tol: ToleranceConfig) -> Result<(GaussianParam, CenterDiagnostics)> {
    let gen = mvn_generator(set.dim())?;
    let r = gb_center(&gen, &set.to_natural()?, GbOptions::with_tol(tol))?;
    let center = natural_to_mvn(&MvnNatural::from_flat(&r.center, set.dim())?)?;
    Ok((center, r.diagnostics))
}

/// Closed-form Jeffreys centroid of normals sharing the mean `mean`:
/// covariance `(Σ w_i Σ_i) # (Σ w_i Σ_i^{-1})^{-1}`.
pub fn jeffreys_centroid_centered(covs: &[SpdMatrix], weights: &Weights, mean: &DVector<f64>) -> Result<GaussianParam> {
    let a = weighted_arithmetic(covs, weights)?;
    let h = weighted_harmonic(covs, weights)?;
    GaussianParam::new(mean.clone(), geometric_mean(&a, &h)?)
}

/// Same as [`jeffreys_centroid_centered`] for a set whose members share a mean.
pub fn jeffreys_centroid_common_mean(set: &GaussianSet) -> Result<GaussianParam> {
    let mean =
        set.common_mean().ok_or_else(|| Error::domain("closed-form Jeffreys centroid needs a common mean"))?.clone();
    let covs: Vec<SpdMatrix> = set.items.iter().map(|p| p.cov.clone()).collect();
    jeffreys_centroid_centered(&covs, &set.weights, &mean)
}

/// Times a closure that yields a center, for callers that want diagnostics
/// on closed-form methods.
pub fn timed<T>(f: impl FnOnce() -> Result<T>) -> Result<(T, CenterDiagnostics)> {
    let start = Instant::now();
    let out = f()?;
    Ok((
        out,
        CenterDiagnostics { elapsed_ns: start.elapsed().as_nanos() as u64, converged: true, ..Default::default() },
    ))
}
