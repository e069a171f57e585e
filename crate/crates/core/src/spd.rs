//! Symmetric positive-definite matrices: spectral functions, the matrix
//! geometric mean, the trace (affine-invariant) metric and log-det
//! divergences.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::legendre::{fd_partials, CenterDiagnostics, Weights};
use crate::tolerance::ToleranceConfig;

pub type Matrix = DMatrix<f64>;

/// Largest accepted condition number.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest accepted relative asymmetry `‖M - Mᵀ‖_F / ‖M‖_F` before symmetrization.
pub const MAX_ASYMMETRY: f64 = 1e-8;

const EIGEN_MAX_ITER: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix(Matrix);

impl SpdMatrix {
    /// Symmetrizes `m` and checks positivity and conditioning.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::NotSpd(format!("shape {}x{}", m.nrows(), m.ncols())));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NotSpd("non-finite entry".into()));
        }
        let scale = m.norm().max(f64::MIN_POSITIVE);
        let asym = (&m - m.transpose()).norm() / scale;
        if asym > MAX_ASYMMETRY {
            return Err(Error::NotSpd(format!("relative asymmetry {asym:e}")));
        }
        let s = symmetrize(&m);
        let ev = eigen(&s)?.eigenvalues;
        let lo = ev.min();
        let hi = ev.max();
        if !(lo > 0.0) {
            return Err(Error::NotSpd(format!("smallest eigenvalue {lo:e}")));
        }
        if hi / lo > MAX_CONDITION {
            return Err(Error::NotSpd(format!("condition number {:e} exceeds {MAX_CONDITION:e}", hi / lo)));
        }
        Ok(Self(s))
    }

    /// Wraps the output of an SPD-preserving computation; only symmetrizes.
    pub(crate) fn trusted(m: Matrix) -> Self {
        Self(symmetrize(&m))
    }

    pub fn identity(d: usize) -> Self {
        Self(Matrix::identity(d, d))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch { expected: d, got: r.len() });
        }
        Self::new(Matrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_inner(self) -> Matrix {
        self.0
    }

    pub fn eigenvalues(&self) -> Result<DVector<f64>> {
        Ok(eigen(&self.0)?.eigenvalues)
    }

    /// `O f(L) Oᵀ` for the spectral decomposition `O L Oᵀ`.
    pub fn map_spectrum<F: Fn(f64) -> f64>(&self, f: F) -> Result<Matrix> {
        let e = eigen(&self.0)?;
        let fl = e.eigenvalues.map(f);
        let m = &e.eigenvectors * Matrix::from_diagonal(&fl) * e.eigenvectors.transpose();
        Ok(symmetrize(&m))
    }

    pub fn inverse(&self) -> Result<SpdMatrix> {
        let chol = self.0.clone().cholesky().ok_or_else(|| Error::NotSpd("Cholesky factorization failed".into()))?;
        Ok(Self::trusted(chol.inverse()))
    }

    pub fn log_det(&self) -> Result<f64> {
        let chol = self.0.clone().cholesky().ok_or_else(|| Error::NotSpd("Cholesky factorization failed".into()))?;
        Ok(2.0 * chol.l_dirty().diagonal().iter().map(|x| x.ln()).sum::<f64>())
    }

    /// `A X Aᵀ`.
    pub fn congruence(&self, a: &Matrix) -> Result<SpdMatrix> {
        if a.ncols() != self.dim() || a.nrows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: a.nrows() });
        }
        Ok(Self::trusted(a * &self.0 * a.transpose()))
    }

    pub fn scale(&self, s: f64) -> Result<SpdMatrix> {
        if !(s > 0.0) {
            return Err(Error::domain("SPD scale factor must be positive"));
        }
        Ok(Self(&self.0 * s))
    }
}

pub(crate) fn symmetrize(m: &Matrix) -> Matrix {
    (m + m.transpose()) * 0.5
}

fn eigen(m: &Matrix) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::numerical("symmetric eigensolver did not converge"))
}

fn same_dim(x: &SpdMatrix, y: &SpdMatrix) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    Ok(())
}

pub fn spd_sqrt(x: &SpdMatrix) -> Result<SpdMatrix> {
    Ok(SpdMatrix::trusted(x.map_spectrum(f64::sqrt)?))
}

pub fn spd_power(x: &SpdMatrix, p: f64) -> Result<SpdMatrix> {
    Ok(SpdMatrix::trusted(x.map_spectrum(|l| l.powf(p))?))
}

/// Matrix logarithm (a symmetric, not necessarily definite, matrix).
pub fn spd_log(x: &SpdMatrix) -> Result<Matrix> {
    x.map_spectrum(f64::ln)
}

/// `X^{1/2}` and `X^{-1/2}` from one decomposition.
fn half_powers(x: &SpdMatrix) -> Result<(Matrix, Matrix)> {
    let e = eigen(x.matrix())?;
    let o = &e.eigenvectors;
    let ot = o.transpose();
    let sq = e.eigenvalues.map(f64::sqrt);
    let isq = sq.map(|s| 1.0 / s);
    let h = symmetrize(&(o * Matrix::from_diagonal(&sq) * &ot));
    let ih = symmetrize(&(o * Matrix::from_diagonal(&isq) * &ot));
    Ok((h, ih))
}

/// `X # Y = X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{1/2}`, the trace-metric
/// geodesic midpoint.
pub fn geometric_mean(x: &SpdMatrix, y: &SpdMatrix) -> Result<SpdMatrix> {
    same_dim(x, y)?;
    let (h, ih) = half_powers(x)?;
    let inner = SpdMatrix::trusted(&ih * y.matrix() * &ih);
    let root = inner.map_spectrum(f64::sqrt)?;
    Ok(SpdMatrix::trusted(&h * root * &h))
}

/// Eigenvalues of `X^{-1/2} Y X^{-1/2}` (equivalently of `X^{-1} Y`).
pub fn relative_eigenvalues(x: &SpdMatrix, y: &SpdMatrix) -> Result<DVector<f64>> {
    same_dim(x, y)?;
    let (_, ih) = half_powers(x)?;
    SpdMatrix::trusted(&ih * y.matrix() * &ih).eigenvalues()
}

/// `ρ(P1, P2) = ‖log(P1^{-1/2} P2 P1^{-1/2})‖_F`.
pub fn trace_metric_distance(p1: &SpdMatrix, p2: &SpdMatrix) -> Result<f64> {
    let ev = relative_eigenvalues(p1, p2)?;
    Ok(ev.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// `D_ld(X:Y) = tr(X Y^{-1}) - log det(X Y^{-1}) - d`.
pub fn logdet_div(x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
    same_dim(x, y)?;
    let yi = y.inverse()?;
    let tr = (x.matrix() * yi.matrix()).trace();
    Ok(tr - x.log_det()? + y.log_det()? - x.dim() as f64)
}

/// `S_ld(X, Y) = tr(X^{-1} Y + Y^{-1} X - 2I)`.
pub fn symmetrized_logdet(x: &SpdMatrix, y: &SpdMatrix) -> Result<f64> {
    same_dim(x, y)?;
    let xi = x.inverse()?;
    let yi = y.inverse()?;
    Ok((xi.matrix() * y.matrix()).trace() + (yi.matrix() * x.matrix()).trace() - 2.0 * x.dim() as f64)
}

fn check_set(mats: &[SpdMatrix], weights: &Weights) -> Result<usize> {
    if mats.is_empty() {
        return Err(Error::Empty);
    }
    if mats.len() != weights.len() {
        return Err(Error::DimensionMismatch { expected: mats.len(), got: weights.len() });
    }
    let d = mats[0].dim();
    if let Some(m) = mats.iter().find(|m| m.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, got: m.dim() });
    }
    Ok(d)
}

/// `Σ w_i P_i`.
pub fn weighted_arithmetic(mats: &[SpdMatrix], weights: &Weights) -> Result<SpdMatrix> {
    let d = check_set(mats, weights)?;
    let mut acc = Matrix::zeros(d, d);
    for (w, m) in weights.iter().zip(mats) {
        acc += m.matrix() * w;
    }
    Ok(SpdMatrix::trusted(acc))
}

/// `(Σ w_i P_i^{-1})^{-1}`.
pub fn weighted_harmonic(mats: &[SpdMatrix], weights: &Weights) -> Result<SpdMatrix> {
    let d = check_set(mats, weights)?;
    let mut acc = Matrix::zeros(d, d);
    for (w, m) in weights.iter().zip(mats) {
        acc += m.inverse()?.matrix() * w;
    }
    SpdMatrix::trusted(acc).inverse()
}

/// Minimizer of `Σ w_i S_ld(X, P_i)`: `A # H` with `A`, `H` the weighted
/// arithmetic and harmonic means.
pub fn sld_centroid(mats: &[SpdMatrix], weights: &Weights) -> Result<SpdMatrix> {
    let a = weighted_arithmetic(mats, weights)?;
    let h = weighted_harmonic(mats, weights)?;
    geometric_mean(&a, &h)
}

/// `Σ w_i S_ld(X, P_i)`.
pub fn sld_loss(mats: &[SpdMatrix], weights: &Weights, x: &SpdMatrix) -> Result<f64> {
    check_set(mats, weights)?;
    weights.iter().zip(mats).map(|(w, p)| Ok(w * symmetrized_logdet(x, p)?)).sum()
}

/// Upper triangle, row-major.
pub fn upper_triangle(m: &Matrix) -> DVector<f64> {
    let d = m.nrows();
    DVector::from_iterator(d * (d + 1) / 2, (0..d).flat_map(|i| (i..d).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]))
}

pub fn from_upper_triangle(v: &[f64], d: usize) -> Matrix {
    let mut m = Matrix::zeros(d, d);
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            m[(i, j)] = v[k];
            m[(j, i)] = v[k];
            k += 1;
        }
    }
    m
}

/// Finite-difference gradient norm of `Σ w_i S_ld(·, P_i)` at `x`, over the
/// upper-triangular coordinates with the trace inner product.
pub fn sld_gradient_residual(mats: &[SpdMatrix], weights: &Weights, x: &SpdMatrix) -> Result<f64> {
    let d = check_set(mats, weights)?;
    let loss = |v: &DVector<f64>| sld_loss(mats, weights, &SpdMatrix::trusted(from_upper_triangle(v.as_slice(), d)));
    let is_pd = |v: &DVector<f64>| from_upper_triangle(v.as_slice(), d).cholesky().is_some();
    let partials = fd_partials(loss, is_pd, &upper_triangle(x.matrix()))?;
    let mut sum = 0.0;
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            let m = if i == j { 1.0 } else { 2.0 };
            sum += partials[k] * partials[k] / m;
            k += 1;
        }
    }
    Ok(sum.sqrt())
}

/// Arithmetic-harmonic double sequence `P <- (P+Q)/2`, `Q <- 2(P^{-1}+Q^{-1})^{-1}`.
/// Its common limit is `P # Q`.
pub fn nakamura_ah(p: &SpdMatrix, q: &SpdMatrix, tol: ToleranceConfig) -> Result<(SpdMatrix, CenterDiagnostics)> {
    same_dim(p, q)?;
    let start = std::time::Instant::now();
    let mut a = p.clone();
    let mut h = q.clone();
    let mut iterations = 0;
    let mut gap = (a.matrix() - h.matrix()).norm();
    while gap > tol.rel_tol * a.matrix().norm() {
        if iterations >= tol.max_iter {
            return Err(Error::NoConvergence { iterations, gap });
        }
        let next_a = SpdMatrix::trusted((a.matrix() + h.matrix()) * 0.5);
        let next_h = SpdMatrix::trusted(a.inverse()?.matrix() + h.inverse()?.matrix()).inverse()?.scale(2.0)?;
        a = next_a;
        h = next_h;
        iterations += 1;
        gap = (a.matrix() - h.matrix()).norm();
    }
    let diagnostics = CenterDiagnostics {
        iterations,
        final_gap: gap,
        residual: gap,
        elapsed_ns: start.elapsed().as_nanos() as u64,
        converged: true,
    };
    Ok((a, diagnostics))
}

/// `‖G(A, H) - G((A+H)/2, 2(A^{-1}+H^{-1})^{-1})‖_F` with `G` the geometric mean.
pub fn g_invariance_residual(a: &SpdMatrix, h: &SpdMatrix) -> Result<f64> {
    same_dim(a, h)?;
    let lhs = geometric_mean(a, h)?;
    let am = SpdMatrix::trusted((a.matrix() + h.matrix()) * 0.5);
    let hm = SpdMatrix::trusted(a.inverse()?.matrix() + h.inverse()?.matrix()).inverse()?.scale(2.0)?;
    let rhs = geometric_mean(&am, &hm)?;
    Ok((lhs.matrix() - rhs.matrix()).norm())
}
