use std::f64::consts::PI;

use super::curve::{check_pitch, helix_wavenumber};
use super::{leray_weight_orthogonal, LerayForm};
use crate::error::{Error, Result};
use crate::exterior3::{Point3, Vec3};

/// Helically wound cylindrical current sheet `r = a`, `0 ≤ z − base.z ≤ L₀`,
/// coaxial with `z` through `base`.
///
/// Chart `(σ, ρ) ∈ [0, 2π] × [0, L₀]` with `σ` the azimuth and `ρ` the height;
/// foliation `f = r − a`, Leray form `Ω = r dφ ∧ dz`, and direction field
/// `W = P∂_φ + p∂_z` (a unit vector since `a²P² + p² = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceSource {
    pub base: Point3,
    pub radius: f64,
    pub pitch: f64,
    pub length: f64,
    /// `κ₀` in amps per meter.
    pub kappa0: f64,
}

impl SurfaceSource {
    /// `pitch = 0` gives a purely azimuthal winding.
    pub fn solenoid(base: Point3, radius: f64, pitch: f64, length: f64, kappa0: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("radius", "must be positive and finite"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::invalid("length", "must be positive and finite"));
        }
        if pitch != 0.0 {
            check_pitch(pitch)?;
        }
        if !kappa0.is_finite() {
            return Err(Error::invalid("kappa0", "must be finite"));
        }
        Ok(SurfaceSource {
            base,
            radius,
            pitch,
            length,
            kappa0,
        })
    }

    /// `P = √(1 − p²)/a`.
    pub fn wavenumber(&self) -> f64 {
        helix_wavenumber(self.radius, self.pitch)
    }

    pub fn domain(&self) -> ((f64, f64), (f64, f64)) {
        ((0.0, 2.0 * PI), (0.0, self.length))
    }

    fn check(&self, sigma: f64, rho: f64) -> Result<()> {
        if !(0.0..=2.0 * PI).contains(&sigma) {
            return Err(Error::OutOfDomain {
                value: sigma,
                min: 0.0,
                max: 2.0 * PI,
            });
        }
        if !(0.0..=self.length).contains(&rho) {
            return Err(Error::OutOfDomain {
                value: rho,
                min: 0.0,
                max: self.length,
            });
        }
        Ok(())
    }

    pub fn position(&self, sigma: f64, rho: f64) -> Result<Point3> {
        self.check(sigma, rho)?;
        Ok(self.base + Vec3::from_cylindrical(self.radius, sigma, rho))
    }

    /// Chart tangents `(∂X/∂σ, ∂X/∂ρ)`.
    pub fn tangents(&self, sigma: f64, rho: f64) -> Result<(Vec3, Vec3)> {
        self.check(sigma, rho)?;
        let (s, c) = sigma.sin_cos();
        Ok((Vec3::new(-self.radius * s, self.radius * c, 0.0), Vec3::Z))
    }

    /// Raw Leray form `⋆dr/|dr|²`.
    pub fn leray(&self, sigma: f64, rho: f64) -> Result<LerayForm> {
        self.check(sigma, rho)?;
        let (s, c) = sigma.sin_cos();
        leray_weight_orthogonal(&[Vec3::new(c, s, 0.0)])
    }

    /// Oriented chart measure `Ω⁺(∂σ, ∂ρ)` (= a).
    pub fn chart_weight(&self, sigma: f64, rho: f64) -> Result<f64> {
        let (t1, t2) = self.tangents(sigma, rho)?;
        Ok(self.leray(sigma, rho)?.on_surface(t1, t2)?.abs())
    }

    /// `W = aP e_φ + p e_z` at the sheet point.
    pub fn direction(&self, sigma: f64, rho: f64) -> Result<Vec3> {
        self.check(sigma, rho)?;
        let (s, c) = sigma.sin_cos();
        let e_phi = Vec3::new(-s, c, 0.0);
        Ok(e_phi * (self.radius * self.wavenumber()) + Vec3::Z * self.pitch)
    }

    /// Current crossing a unit length of the sheet curve with unit tangent
    /// `u`: `κ̆(u) = κ₀ Ω⁺(W, u)`, in amps per meter.
    pub fn crossing_density(&self, sigma: f64, rho: f64, u: Vec3) -> Result<f64> {
        let form = self.leray(sigma, rho)?;
        self.crossing_density_with(sigma, rho, u, &form)
    }

    /// [`Self::crossing_density`] for an arbitrary Leray representative.
    pub fn crossing_density_with(&self, sigma: f64, rho: f64, u: Vec3, form: &LerayForm) -> Result<f64> {
        let (t1, t2) = self.tangents(sigma, rho)?;
        let orientation = form.on_surface(t1, t2)?.signum();
        Ok(self.kappa0 * orientation * form.on_surface(self.direction(sigma, rho)?, u)?)
    }

    /// Sheet current vector `K = κ₀ W` in amps per meter: the current
    /// crossing a unit segment with unit tangent `u` is `n̂ · (K × u)`.
    pub fn surface_current(&self, sigma: f64, rho: f64) -> Result<Vec3> {
        Ok(self.direction(sigma, rho)? * self.kappa0)
    }

    /// Current per unit axial length crossing a line of constant azimuth,
    /// `κ₀ aP`.
    pub fn axial_crossing_density(&self) -> f64 {
        self.kappa0 * self.radius * self.wavenumber()
    }

    /// Distance from `y` to the sheet.
    pub fn distance_to(&self, y: Point3) -> f64 {
        let q = y - self.base;
        let dr = q.x.hypot(q.y) - self.radius;
        let dz = if q.z < 0.0 {
            q.z
        } else if q.z > self.length {
            q.z - self.length
        } else {
            0.0
        };
        if dz == 0.0 {
            dr.abs()
        } else {
            // beyond an end: nearest point is on the rim or inside the disc
            let r = q.x.hypot(q.y);
            let radial = (r - self.radius).abs();
            radial.hypot(dz)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn azimuthal_winding_crossing_density() {
        let s = SurfaceSource::solenoid(Vec3::ZERO, 0.1, 0.0, 10.0, 250.0).unwrap();
        for (sigma, rho) in [(0.0, 0.0), (1.0, 3.0), (5.0, 9.9)] {
            let d = s.crossing_density(sigma, rho, Vec3::Z).unwrap();
            assert!((d - 250.0).abs() < 1e-12);
            assert!((s.chart_weight(sigma, rho).unwrap() - 0.1).abs() < 1e-15);
        }
        assert!((s.axial_crossing_density() - 250.0).abs() < 1e-12);
    }

    #[test]
    fn pitched_winding_crossing_density() {
        let (a, p) = (0.2, 0.3_f64);
        let s = SurfaceSource::solenoid(Vec3::ZERO, a, p, 1.0, 10.0).unwrap();
        let big_p = s.wavenumber();
        let d = s.crossing_density(0.7, 0.5, Vec3::Z).unwrap();
        assert!((d - 10.0 * a * big_p).abs() < 1e-12);
        // crossing the azimuthal direction counts the axial current component
        let (sn, cs) = 0.7_f64.sin_cos();
        let e_phi = Vec3::new(-sn, cs, 0.0);
        let d_phi = s.crossing_density(0.7, 0.5, e_phi).unwrap();
        assert!((d_phi + 10.0 * p).abs() < 1e-12);
    }

    #[test]
    fn linear_in_kappa() {
        let s0 = SurfaceSource::solenoid(Vec3::ZERO, 0.2, 0.1, 1.0, 0.0).unwrap();
        assert_eq!(s0.crossing_density(1.0, 0.5, Vec3::Z).unwrap(), 0.0);
        let s1 = SurfaceSource::solenoid(Vec3::ZERO, 0.2, 0.1, 1.0, 3.0).unwrap();
        let s2 = SurfaceSource::solenoid(Vec3::ZERO, 0.2, 0.1, 1.0, 6.0).unwrap();
        let d1 = s1.crossing_density(1.0, 0.5, Vec3::Z).unwrap();
        let d2 = s2.crossing_density(1.0, 0.5, Vec3::Z).unwrap();
        assert!((d2 - 2.0 * d1).abs() < 1e-14);
    }

    #[test]
    fn gauge_representative_does_not_change_density() {
        let s = SurfaceSource::solenoid(Vec3::ZERO, 0.2, 0.3, 1.0, 4.0).unwrap();
        let (sigma, rho) = (2.1, 0.4);
        let base = s.leray(sigma, rho).unwrap();
        let (sn, cs) = sigma.sin_cos();
        let shifted = base.add_gauge(Vec3::new(cs, sn, 0.0), 1.5, Vec3::new(0.2, 0.7, -1.1));
        for u in [Vec3::Z, Vec3::new(-sn, cs, 0.0)] {
            let a = s.crossing_density(sigma, rho, u).unwrap();
            let b = s.crossing_density_with(sigma, rho, u, &shifted).unwrap();
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn out_of_chart() {
        let s = SurfaceSource::solenoid(Vec3::ZERO, 0.2, 0.0, 1.0, 1.0).unwrap();
        assert!(s.surface_current(0.5, 1.5).is_err());
        assert!(s.surface_current(-0.1, 0.5).is_err());
        assert!(SurfaceSource::solenoid(Vec3::ZERO, 0.2, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn distance() {
        let s = SurfaceSource::solenoid(Vec3::ZERO, 1.0, 0.0, 2.0, 1.0).unwrap();
        assert!((s.distance_to(Vec3::new(0.5, 0.0, 1.0)) - 0.5).abs() < 1e-15);
        assert!((s.distance_to(Vec3::new(1.0, 0.0, 2.5)) - 0.5).abs() < 1e-15);
    }
}
