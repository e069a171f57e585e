//! Jeffreys (symmetrized Kullback-Leibler) centroids and two fast proxy
//! centers for weighted sets of exponential-family distributions.
//!
//! * [`categorical`]: normalized histograms. Exact centroid via the Lambert
//!   W characterization, closed-form Jeffreys-Fisher-Rao (JFR) center and the
//!   arithmetic/normalized-geometric Gauss-Bregman (GB) double sequence.
//! * [`gaussian`]: multivariate normals. Sided KL centroids, Fisher-Rao
//!   midpoint, JFR and GB centers, closed-form centroid for a common mean.
//! * [`legendre`] and [`gauss_bregman`]: generator-agnostic Bregman machinery.
//! * [`spd`]: the SPD matrix kernel (geometric mean, trace metric, log-det).
//! * [`uniparam`]: JFR centers of uni-order families through `h = ∫ sqrt(f'')`.

pub mod categorical;
pub mod error;
pub mod gauss_bregman;
pub mod gaussian;
pub mod legendre;
pub mod quadrature;
pub mod spd;
pub mod special;
pub mod tolerance;
pub mod uniparam;

pub use error::{Error, Result};
pub use legendre::CenterDiagnostics;
pub use tolerance::ToleranceConfig;
