//! Scalar special functions: principal Lambert W, complete elliptic integral
//! of the first kind, and the Gauss arithmetic-geometric mean.

use std::f64::consts::{E, FRAC_PI_2};

use crate::error::{Error, Result};
use crate::quadrature;
use crate::tolerance::ToleranceConfig;

const INV_E: f64 = 1.0 / E;

/// Principal branch `W0(x)` of the Lambert W function, `x >= -1/e`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    lambert_w0_with(x, ToleranceConfig::default())
}

pub fn lambert_w0_with(x: f64, tol: ToleranceConfig) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("lambert_w0 of NaN"));
    }
    let branch_gap = x + INV_E;
    if branch_gap < 0.0 {
        // tolerate the rounding of -1/e itself
        if branch_gap > -4.0 * f64::EPSILON * INV_E {
            return Ok(-1.0);
        }
        return Err(Error::domain(format!("lambert_w0 requires x >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }

    if x > E {
        return halley_log_form(x, tol);
    }

    let mut w = if branch_gap < 0.25 {
        // series about the branch point in p = sqrt(2(ex + 1))
        let p = (2.0 * E * branch_gap).sqrt();
        -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    } else if x < 0.0 {
        x * (1.0 - x + 1.5 * x * x)
    } else {
        let l = x.ln_1p();
        l * (1.0 - (1.0 + l).ln() / (2.0 + l))
    };

    for _ in 0..tol.max_iter {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = (w - step).max(-1.0);
        let done = (next - w).abs() <= tol.rel_tol * 0.01 * next.abs().max(1e-300);
        w = next;
        if done {
            break;
        }
    }
    Ok(w)
}

// Halley on g(w) = w + ln w - ln x, which avoids overflowing w e^w.
fn halley_log_form(x: f64, tol: ToleranceConfig) -> Result<f64> {
    let lx = x.ln();
    let llx = lx.ln();
    let mut w = lx - llx + llx / lx;
    for _ in 0..tol.max_iter {
        let g = w + w.ln() - lx;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = 2.0 * g * g1 / (2.0 * g1 * g1 - g * g2);
        let next = w - step;
        let done = (next - w).abs() <= tol.rel_tol * 0.01 * next.abs();
        w = next;
        if done {
            return Ok(w);
        }
    }
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::numerical(format!("lambert_w0 diverged at x = {x}")))
    }
}

/// Complete elliptic integral of the first kind, `K(u) = ∫_0^{π/2} dθ / sqrt(1 - u² sin²θ)`,
/// evaluated by adaptive quadrature of the defining integral.
pub fn elliptic_k(u: f64) -> Result<f64> {
    elliptic_k_with(u, ToleranceConfig::default())
}

pub fn elliptic_k_with(u: f64, tol: ToleranceConfig) -> Result<f64> {
    if !(u.abs() < 1.0) {
        return Err(Error::domain(format!("elliptic_k requires |u| < 1, got {u}")));
    }
    let m = u * u;
    let r = quadrature::integrate(
        |t| {
            let s = t.sin();
            1.0 / (1.0 - m * s * s).sqrt()
        },
        0.0,
        FRAC_PI_2,
        0.0,
        tol.rel_tol,
        20_000,
    )?;
    Ok(r.value)
}

/// Gauss arithmetic-geometric mean of two positive reals.
pub fn scalar_agm(x: f64, y: f64) -> Result<f64> {
    scalar_agm_with(x, y, ToleranceConfig::default())
}

pub fn scalar_agm_with(x: f64, y: f64, tol: ToleranceConfig) -> Result<f64> {
    let gaps = agm_iterates(x, y, tol)?;
    let (a, g) = *gaps.last().expect("at least the initial pair");
    Ok(0.5 * (a + g))
}

/// The full sequence of `(a_t, g_t)` pairs, starting from `(x, y)`.
pub fn agm_iterates(x: f64, y: f64, tol: ToleranceConfig) -> Result<Vec<(f64, f64)>> {
    if !(x > 0.0 && y > 0.0) || !x.is_finite() || !y.is_finite() {
        return Err(Error::domain(format!("agm requires positive finite arguments, got ({x}, {y})")));
    }
    let mut a = x;
    let mut g = y;
    let mut out = vec![(a, g)];
    for _ in 0..tol.max_iter {
        if (a - g).abs() <= tol.rel_tol * a.max(g) {
            return Ok(out);
        }
        let next_a = 0.5 * (a + g);
        let next_g = (a * g).sqrt();
        if next_a == a && next_g == g {
            return Ok(out);
        }
        a = next_a;
        g = next_g;
        out.push((a, g));
    }
    if (a - g).abs() <= 4.0 * f64::EPSILON * a.max(g) {
        Ok(out)
    } else {
        Err(Error::NoConvergence { iterations: tol.max_iter, gap: (a - g).abs() })
    }
}

/// `(π/4)(x + y) / K((x - y)/(x + y))`, the closed form of the AGM.
pub fn agm_closed_form(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0 && y > 0.0) {
        return Err(Error::domain("agm requires positive arguments"));
    }
    let k = elliptic_k((x - y) / (x + y))?;
    Ok(std::f64::consts::FRAC_PI_4 * (x + y) / k)
}
