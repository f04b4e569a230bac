//! Scalar Green kernels.
//!
//! The fundamental double-form of bi-degree (p, p) on R³ is the scalar kernel
//! `f(X, Y) = 1/(4π|x − y|)` times the identity pairing of basis p-forms at X
//! and Y, so every degree shares the same scalar and only scalars are exposed
//! here. Contractions such as `i_W γ` are assembled componentwise in
//! [`crate::fields`].

mod bessel;
mod plate;

pub use bessel::{digamma, k0, k0e};
pub use plate::{plate_green, PlateGreen};

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exterior3::Point3;

/// Relative scale of the coincident-point floor `|x − y| < 10⁻¹²(1 + |x| + |y|)`.
pub const COINCIDENCE_FLOOR: f64 = 1e-12;

/// Separation `|x − y|`, refusing pairs closer than the coincident-point floor.
pub fn separation(x: Point3, y: Point3) -> Result<f64> {
    let r = x.distance(y);
    let floor = COINCIDENCE_FLOOR * (1.0 + x.norm() + y.norm());
    if !r.is_finite() {
        return Err(Error::NonFinite("separation"));
    }
    if r < floor {
        return Err(Error::CoincidentPoints {
            separation: r,
            floor,
        });
    }
    Ok(r)
}

/// The free-space static kernel `1/(4π|x − y|)`.
pub fn free_kernel(x: Point3, y: Point3) -> Result<f64> {
    Ok(1.0 / (4.0 * PI * separation(x, y)?))
}

/// Retardation delay `|x − y|/c` in seconds.
pub fn retarded_delay(x: Point3, y: Point3, c: f64) -> Result<f64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("c", "wave speed must be positive and finite"));
    }
    Ok(x.distance(y) / c)
}

/// Frequency-domain retarded kernel `e^{−iω|x−y|/c}/(4π|x − y|)`, a radially
/// outgoing wave for the `e^{iωt}` time convention.
pub fn helmholtz_kernel(x: Point3, y: Point3, omega: f64, c: f64) -> Result<Complex64> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("c", "wave speed must be positive and finite"));
    }
    if !omega.is_finite() {
        return Err(Error::invalid("omega", "must be finite"));
    }
    let r = separation(x, y)?;
    Ok(Complex64::from_polar(1.0 / (4.0 * PI * r), -omega * r / c))
}

/// Which Green kernel a potential is built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelSpec {
    /// `1/(4πR)`.
    FreeStatic,
    /// `e^{−iωR/c}/(4πR)`.
    FreeFrequency { omega: f64, c: f64 },
    /// `1/(4πR)` evaluated at the retarded time `t − R/c`.
    FreeRetarded { c: f64 },
    /// Dirichlet Green function of the slab `0 < z < L`.
    Plate(PlateGreen),
}

impl KernelSpec {
    /// Static part of the kernel, i.e. its magnitude at the retarded time for
    /// the time-domain variant and its modulus for the frequency-domain one.
    pub fn static_value(&self, x: Point3, y: Point3) -> Result<f64> {
        match self {
            KernelSpec::FreeStatic | KernelSpec::FreeRetarded { .. } => free_kernel(x, y),
            KernelSpec::FreeFrequency { omega, c } => Ok(helmholtz_kernel(x, y, *omega, *c)?.norm()),
            KernelSpec::Plate(g) => plate_green(x, y, g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior3::Vec3;
    use proptest::prelude::*;

    #[test]
    fn unit_separation() {
        let v = free_kernel(Vec3::ZERO, Vec3::X).unwrap();
        assert!((v - 0.079_577_471_545_947_67).abs() < 1e-16);
    }

    #[test]
    fn coincident_points_are_refused() {
        let p = Vec3::new(1.0, 2.0, 3.0);
        assert!(matches!(free_kernel(p, p), Err(Error::CoincidentPoints { .. })));
        let q = p + Vec3::new(1e-13, 0.0, 0.0);
        assert!(free_kernel(p, q).is_err());
        let far = p + Vec3::new(1e-9, 0.0, 0.0);
        assert!(free_kernel(p, far).is_ok());
    }

    #[test]
    fn harmonic_away_from_source() {
        let x = Vec3::new(0.1, -0.2, 0.3);
        for &d in &[0.5, 1.0, 1.5, 2.0] {
            let y = x + Vec3::new(0.6, 0.48, 0.64) * d;
            let h = 1e-3;
            let f = |p: Point3| free_kernel(x, p).unwrap();
            let mut lap = -6.0 * f(y);
            for e in [Vec3::X, Vec3::Y, Vec3::Z] {
                lap += f(y + e * h) + f(y - e * h);
            }
            lap /= h * h;
            // local second-derivative scale of 1/(4πR) is 1/(4πR³)
            let scale = 1.0 / (4.0 * PI * d.powi(3));
            assert!(lap.abs() < 1e-4 * scale, "d = {d}: {lap:e}");
        }
    }

    #[test]
    fn delay() {
        let c = 3.0e8;
        assert_eq!(retarded_delay(Vec3::X, Vec3::X, c).unwrap(), 0.0);
        assert!((retarded_delay(Vec3::ZERO, Vec3::new(c, 0.0, 0.0), c).unwrap() - 1.0).abs() < 1e-15);
        let d1 = retarded_delay(Vec3::ZERO, Vec3::new(1.0, 2.0, 2.0), c).unwrap();
        let d2 = retarded_delay(Vec3::ZERO, Vec3::new(2.0, 4.0, 4.0), c).unwrap();
        assert!((d2 - 2.0 * d1).abs() < 1e-24);
        assert!(retarded_delay(Vec3::ZERO, Vec3::X, 0.0).is_err());
    }

    #[test]
    fn helmholtz_reduces_to_static() {
        let (x, y) = (Vec3::new(0.3, 0.1, 0.0), Vec3::new(-1.0, 0.4, 2.0));
        let h = helmholtz_kernel(x, y, 0.0, 1.0).unwrap();
        assert_eq!(h.re, free_kernel(x, y).unwrap());
        assert_eq!(h.im, 0.0);
    }

    #[test]
    fn helmholtz_full_wavelength_has_unit_phase() {
        let (omega, c) = (3.0, 2.0);
        let r = 2.0 * PI * c / omega;
        let h = helmholtz_kernel(Vec3::ZERO, Vec3::new(0.0, r, 0.0), omega, c).unwrap();
        let f = free_kernel(Vec3::ZERO, Vec3::new(0.0, r, 0.0)).unwrap();
        assert!((h.re - f).abs() < 1e-15 * f);
        assert!(h.im.abs() < 1e-14 * f);
    }

    proptest! {
        #[test]
        fn symmetric_and_unimodular(
            ax in -3.0..3.0f64, ay in -3.0..3.0f64, az in -3.0..3.0f64,
            bx in -3.0..3.0f64, by in -3.0..3.0f64, bz in -3.0..3.0f64,
            omega in -50.0..50.0f64,
        ) {
            let (x, y) = (Vec3::new(ax, ay, az), Vec3::new(bx, by, bz));
            prop_assume!(x.distance(y) > 1e-6);
            prop_assert_eq!(free_kernel(x, y).unwrap(), free_kernel(y, x).unwrap());
            let h = helmholtz_kernel(x, y, omega, 7.0).unwrap();
            let f = free_kernel(x, y).unwrap();
            prop_assert!((h.norm() - f).abs() <= 1e-14 * f);
            prop_assert_eq!(h, helmholtz_kernel(y, x, omega, 7.0).unwrap());
        }
    }
}
