//! Electrostatic potentials: point charge, point dipole, and a line charge
//! between grounded plates.

use std::f64::consts::PI;

use super::{Diagnostics, MediumConstants, PotentialResult};
use crate::error::{Error, Result};
use crate::exterior3::Point3;
use crate::kernels::{free_kernel, separation};
use crate::quad::{sum_series, QuadConfig};
use crate::sources::DipoleSource;

/// `q/(4πε|y − x₀|)`.
pub fn coulomb_potential(q: f64, x0: Point3, y: Point3, medium: &MediumConstants) -> Result<f64> {
    medium.validate()?;
    Ok(q / medium.epsilon * free_kernel(x0, y)?)
}

/// Potential of a point dipole, `p · (y − x₀)/(4πε|y − x₀|³)`, i.e. the limit
/// of charges `±q` at `x₀ ± s/2` with `p = q s`.
pub fn dipole_potential(dip: &DipoleSource, y: Point3, medium: &MediumConstants) -> Result<f64> {
    medium.validate()?;
    let r = separation(dip.location, y)?;
    let d = y - dip.location;
    Ok(dip.moment.dot(d) / (4.0 * PI * medium.epsilon * r * r * r))
}

/// Uniform line charge `λ` (C/m) parallel to `y`, at `x = x0`, `z = z0`,
/// between grounded plates `z = 0` and `z = L`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateWire {
    pub x0: f64,
    pub z0: f64,
    pub line_charge: f64,
    pub separation: f64,
}

/// Below this value of `(π|x|/L) · max_terms` the mode series would stall, and
/// the closed logarithmic form is used instead.
const SERIES_DECAY_MIN: f64 = 40.0;

impl PlateWire {
    pub fn new(x0: f64, z0: f64, line_charge: f64, separation: f64) -> Result<Self> {
        if !(separation > 0.0 && separation.is_finite()) {
            return Err(Error::invalid("separation", "plate separation must be positive"));
        }
        if !(z0 > 0.0 && z0 < separation) {
            return Err(Error::invalid(
                "z0",
                format!("wire height {z0} must lie strictly between the plates (0, {separation})"),
            ));
        }
        if !(x0.is_finite() && line_charge.is_finite()) {
            return Err(Error::invalid("line_charge", "wire position and charge must be finite"));
        }
        Ok(PlateWire {
            x0,
            z0,
            line_charge,
            separation,
        })
    }

    fn check(&self, y: Point3) -> Result<(f64, f64, f64, f64)> {
        let l = self.separation;
        if !(0.0..=l).contains(&y.z) {
            return Err(Error::OutOfSlab { z: y.z, thickness: l });
        }
        let x = y.x - self.x0;
        let distance = x.hypot(y.z - self.z0);
        if distance <= 1e-12 * l {
            return Err(Error::OnSupport { distance });
        }
        Ok((PI * x.abs() / l, PI * self.z0 / l, PI * y.z / l, self.line_charge / (PI * self.separation)))
    }

    /// `(λ/πε) Σ_n (1/n) sin(nπz₀/L) sin(nπz/L) e^{−nπ|x|/L}`, summed as a
    /// series while it decays fast enough and in closed form otherwise.
    pub fn potential(&self, y: Point3, medium: &MediumConstants, cfg: &QuadConfig) -> Result<PotentialResult> {
        medium.validate()?;
        let (a, b, c, _) = self.check(y)?;
        let prefactor = self.line_charge / (PI * medium.epsilon);
        if a * cfg.max_terms as f64 >= SERIES_DECAY_MIN {
            let q = sum_series(
                |n| {
                    let nf = n as f64;
                    (nf * b).sin() * (nf * c).sin() * (-nf * a).exp() / nf
                },
                cfg,
            )?;
            Ok(PotentialResult::electric(prefactor * q.value, Diagnostics::from_quad(&q, prefactor)))
        } else {
            Ok(PotentialResult::electric(
                prefactor * log_sum(a, b, c),
                Diagnostics::exact(),
            ))
        }
    }

    /// The same potential from the closed logarithmic form alone.
    pub fn closed_form(&self, y: Point3, medium: &MediumConstants) -> Result<f64> {
        medium.validate()?;
        let (a, b, c, _) = self.check(y)?;
        Ok(self.line_charge / (PI * medium.epsilon) * log_sum(a, b, c))
    }
}

/// `Σ (1/n) e^{−na} sin(nb) sin(nc) = ¼ ln[D(b + c)/D(b − c)]` with
/// `D(θ) = 1 − 2e^{−a}cos θ + e^{−2a} = (1 − e^{−a})² + 4e^{−a} sin²(θ/2)`;
/// the second form keeps full relative accuracy as `a → 0`.
fn log_sum(a: f64, b: f64, c: f64) -> f64 {
    let q = (-a).exp();
    let gap = -(-a).exp_m1();
    let d = |theta: f64| {
        let s = (0.5 * theta).sin();
        gap * gap + 4.0 * q * s * s
    };
    0.25 * (d(b + c) / d(b - c)).ln()
}

/// Potential of a line charge `λ` at height `z₀` on the `y` axis direction
/// through `x = 0`, between grounded plates `z = 0`, `z = L`.
pub fn plate_wire_potential(
    z0: f64,
    line_charge: f64,
    l: f64,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    PlateWire::new(0.0, z0, line_charge, l)?.potential(y, medium, cfg)
}

/// [`plate_wire_potential`] from the closed logarithmic form.
pub fn plate_wire_closed_form(
    z0: f64,
    line_charge: f64,
    l: f64,
    y: Point3,
    medium: &MediumConstants,
) -> Result<f64> {
    PlateWire::new(0.0, z0, line_charge, l)?.closed_form(y, medium)
}
