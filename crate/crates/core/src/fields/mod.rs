//! Potential evaluators and verification residuals.
//!
//! Signs are fixed by the physical limits: a positive static charge has a
//! positive potential `φ = q/(4πεR)`, and a current element `I dl` produces
//! `A = μ I dl/(4πR)`. With the Hodge–de Rham operator `Δ = dδ + δd = −∇²`
//! these read `Δφ = ρ/ε` and `ΔA = μJ`, and the Lorenz condition
//! `∇·A + εμ ∂φ/∂t = 0` becomes `δA − εμ ∂φ/∂t = 0` since `δ = −div` on
//! 1-forms. `docs/SIGN_CONVENTIONS.md` lists every such choice.

mod electro;
mod magneto;
mod model;
mod residuals;
mod retarded;

pub use electro::{
    coulomb_potential, dipole_potential, plate_wire_closed_form, plate_wire_potential, PlateWire,
};
pub use magneto::{
    curve_potential, curve_potential_quadrature, helix_potential, loop_lambda, loop_potential,
    piecewise_potential, solenoid_potential, solenoid_potential_with, InnerMethod,
};
pub use model::{FieldModel, FieldSource, FieldValues, Quantities, RETARDED_TOL};
pub use residuals::{
    ampere_residual, derive_b, divergence_residual, gauge_residual, lorenz_residual, AmpereResult,
    Circuit, Residual,
};
pub use retarded::{lienard_wiechert, solve_retarded_time, RetardedState};

use crate::error::{Error, Result};
use crate::exterior3::{Point3, Step, Vec3};
use crate::quad::{QuadConfig, QuadResult};

/// Vacuum permeability μ₀ in H/m (CODATA 2018).
pub const MU0: f64 = 1.256_637_062_12e-6;
/// Vacuum permittivity ε₀ in F/m (CODATA 2018).
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Distance to a source support, relative to the source's length scale,
/// below which evaluators refuse to integrate.
pub const SUPPORT_FLOOR: f64 = 1e-9;

/// Constant, lossless medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConstants {
    /// Permittivity ε in F/m.
    pub epsilon: f64,
    /// Permeability μ in H/m.
    pub mu: f64,
}

impl Default for MediumConstants {
    fn default() -> Self {
        MediumConstants::vacuum()
    }
}

impl MediumConstants {
    pub const fn vacuum() -> Self {
        MediumConstants {
            epsilon: EPS0,
            mu: MU0,
        }
    }

    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        let m = MediumConstants { epsilon, mu };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", "must be positive and finite"));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid("mu", "must be positive and finite"));
        }
        Ok(())
    }

    /// Wave speed `c = 1/√(εμ)` in m/s.
    pub fn c(&self) -> f64 {
        1.0 / (self.epsilon * self.mu).sqrt()
    }
}

/// Quadrature bookkeeping attached to every potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// Absolute error estimate in the units of the quantity it accompanies.
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Diagnostics::exact()
    }
}

impl Diagnostics {
    /// Diagnostics of a closed-form value.
    pub const fn exact() -> Self {
        Diagnostics {
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    /// Diagnostics of a quadrature whose value is later multiplied by `scale`.
    pub fn from_quad(q: &QuadResult, scale: f64) -> Self {
        Diagnostics {
            error_estimate: q.error_estimate * scale.abs(),
            evaluations: q.evaluations,
            converged: q.converged,
        }
    }

    pub fn merge(self, o: Diagnostics) -> Self {
        Diagnostics {
            error_estimate: self.error_estimate + o.error_estimate,
            evaluations: self.evaluations + o.evaluations,
            converged: self.converged && o.converged,
        }
    }
}

/// Vector potential `A` (T·m, Cartesian components of the 1-form) and scalar
/// potential `φ` (V) at one field point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialResult {
    pub a: Vec3,
    pub phi: f64,
    pub diagnostics: Diagnostics,
}

impl PotentialResult {
    pub fn zero() -> Self {
        PotentialResult {
            a: Vec3::ZERO,
            phi: 0.0,
            diagnostics: Diagnostics::exact(),
        }
    }

    pub fn magnetic(a: Vec3, diagnostics: Diagnostics) -> Self {
        PotentialResult {
            a,
            phi: 0.0,
            diagnostics,
        }
    }

    pub fn electric(phi: f64, diagnostics: Diagnostics) -> Self {
        PotentialResult {
            a: Vec3::ZERO,
            phi,
            diagnostics,
        }
    }

    /// `(A_r, A_φ, A_z)` about the `z` axis through `axis`.
    pub fn a_cylindrical(&self, y: Point3, axis: Point3) -> Vec3 {
        let q = y - axis;
        self.a.to_cylindrical_components(q.y.atan2(q.x))
    }

    /// Superposition.
    pub fn add(self, o: PotentialResult) -> Self {
        PotentialResult {
            a: self.a + o.a,
            phi: self.phi + o.phi,
            diagnostics: self.diagnostics.merge(o.diagnostics),
        }
    }

    pub fn scaled(self, s: f64) -> Self {
        PotentialResult {
            a: self.a * s,
            phi: self.phi * s,
            diagnostics: Diagnostics {
                error_estimate: self.diagnostics.error_estimate * s.abs(),
                ..self.diagnostics
            },
        }
    }
}

/// Finite-difference step for differentiating a quadrature-valued potential:
/// `h = rel_tol^{1/3} · scale`, which balances the `O(h²)` truncation error
/// against the `rel_tol/h` amplification of quadrature noise.
pub fn matched_step(cfg: &QuadConfig, scale: f64) -> Step {
    Step::Fixed(cfg.rel_tol.cbrt() * scale)
}
