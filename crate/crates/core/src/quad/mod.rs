//! Quadrature and series engines.
//!
//! Everything here integrates over chart parameters. Singular integrands are
//! handled the way singular integrals are defined: by excluding a small
//! neighbourhood of the singular parameter and passing to the limit, here by
//! extrapolation over a geometric sequence of exclusion radii.

mod gauss_kronrod;
mod periodic;
mod series;

pub use gauss_kronrod::{
    gauss_kronrod_15, integrate_2d, integrate_adaptive, integrate_singular,
    try_integrate_2d, try_integrate_adaptive, try_integrate_singular, Rect,
};
pub use periodic::{integrate_periodic, integrate_periodic_adaptive, try_integrate_periodic_adaptive};
pub use series::sum_series;

use crate::error::{Error, Result};

/// Tolerances and limits shared by the quadrature and series engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of interval bisections for adaptive quadrature.
    pub max_subdivisions: usize,
    /// Exclusion radius around declared singular parameters, relative to the
    /// length of the interval being integrated.
    pub singularity_exclusion: f64,
    /// Maximum number of terms for [`sum_series`] and of sample points for
    /// periodic quadrature.
    pub max_terms: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-10,
            max_subdivisions: 2000,
            singularity_exclusion: 1e-6,
            max_terms: 1_000_000,
        }
    }
}

impl QuadConfig {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::invalid("abs_tol", "must be positive and finite"));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::invalid("rel_tol", "must be positive and finite"));
        }
        if !(self.singularity_exclusion >= 0.0 && self.singularity_exclusion < 0.5) {
            return Err(Error::invalid(
                "singularity_exclusion",
                "must lie in [0, 0.5)",
            ));
        }
        if self.max_subdivisions == 0 || self.max_terms == 0 {
            return Err(Error::invalid("max_subdivisions", "limits must be at least 1"));
        }
        Ok(())
    }

    /// The error target for a result of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Outcome of a quadrature or series summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl QuadResult {
    /// Multiplies value and error estimate by `s`.
    pub fn scaled(self, s: f64) -> Self {
        QuadResult {
            value: self.value * s,
            error_estimate: self.error_estimate * s.abs(),
            ..self
        }
    }

    /// Sum of two independent results.
    pub fn combine(self, other: QuadResult) -> Self {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}
