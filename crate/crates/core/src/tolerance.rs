use crate::error::{Error, Result};

/// Stopping rule shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl ToleranceConfig {
    pub fn new(rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(rel_tol > 0.0 && rel_tol < 1.0) {
            return Err(Error::domain(format!("rel_tol must lie in (0, 1), got {rel_tol}")));
        }
        if max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        Ok(Self { rel_tol, max_iter })
    }

    /// Defaults for the double sequences: 1e-8, 200 iterations.
    pub fn iterative() -> Self {
        Self { rel_tol: 1e-8, max_iter: 200 }
    }
}

impl Default for ToleranceConfig {
    /// Defaults for scalar special functions: 1e-12, 100 iterations.
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_iter: 100 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_out_of_range() {
        assert!(ToleranceConfig::new(0.0, 10).is_err());
        assert!(ToleranceConfig::new(1.0, 10).is_err());
        assert!(ToleranceConfig::new(1e-6, 0).is_err());
        assert!(ToleranceConfig::new(1e-6, 1).is_ok());
    }
}
