use std::f64::consts::PI;

use super::bessel::{digamma, k0};
use crate::error::{Error, Result};
use crate::exterior3::Point3;

/// Dirichlet Green function of the slab between grounded plates `z = 0` and
/// `z = L`, summed as the transverse-eigenfunction series
///
/// `𝒢 = (1/πL) Σ_n sin(nπz/L) sin(nπz′/L) K₀(nπρ/L)`,
///
/// where `ρ` is the in-plane separation. Each mode's 2D transverse integral
/// `∫∫ e^{ik·ρ}/(k² + m²) d²k = 2πK₀(mρ)` has been done in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateGreen {
    /// Plate separation `L` in meters.
    pub separation: f64,
    /// Maximum number of modes summed before reporting non-convergence.
    pub n_max: usize,
    /// Relative truncation tolerance for the series tail.
    pub tol: f64,
}

impl PlateGreen {
    pub fn new(separation: f64) -> Result<Self> {
        let g = PlateGreen {
            separation,
            n_max: 100_000,
            tol: 1e-13,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_n_max(mut self, n_max: usize) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.separation > 0.0 && self.separation.is_finite()) {
            return Err(Error::invalid("separation", "plate separation must be positive"));
        }
        if !(self.tol > 0.0) || self.n_max == 0 {
            return Err(Error::invalid("tol", "series tolerance and n_max must be positive"));
        }
        Ok(())
    }

    /// Refuses heights outside the closed slab `[0, L]`.
    pub fn check_height(&self, z: f64) -> Result<()> {
        if (0.0..=self.separation).contains(&z) {
            Ok(())
        } else {
            Err(Error::OutOfSlab {
                z,
                thickness: self.separation,
            })
        }
    }

    pub fn eval(&self, x: Point3, y: Point3) -> Result<f64> {
        plate_green(x, y, self)
    }
}

/// Value of the slab Dirichlet Green function `𝒢(X, Y)`.
///
/// Off the common normal the mode series converges like `e^{−nπρ/L}`. On it
/// (`ρ = 0`) every mode diverges, and the image sum is used instead in its
/// digamma closed form. For very small but nonzero `ρ` the series needs
/// `O(L/ρ)` modes and reports [`Error::NonConvergence`] once `n_max` is spent.
pub fn plate_green(x: Point3, y: Point3, cfg: &PlateGreen) -> Result<f64> {
    cfg.validate()?;
    cfg.check_height(x.z)?;
    cfg.check_height(y.z)?;
    let l = cfg.separation;
    let rho = (x.x - y.x).hypot(x.y - y.y);
    if rho == 0.0 {
        return on_axis(x.z, y.z, l);
    }

    let m1 = PI * rho / l;
    let q = (-m1).exp();
    let tail_factor = q / (1.0 - q);
    let (kz, kz2) = (PI * x.z / l, PI * y.z / l);
    let mut sum = 0.0;
    let mut envelope_sum = 0.0;
    let mut tail = f64::INFINITY;
    for n in 1..=cfg.n_max {
        let nf = n as f64;
        let env = k0(nf * m1)?;
        sum += (nf * kz).sin() * (nf * kz2).sin() * env;
        envelope_sum += env;
        // K₀((n+1)m)/K₀(nm) < e^{−m}, so the geometric bound covers the tail
        tail = env * tail_factor;
        if tail <= cfg.tol * sum.abs() + f64::EPSILON * envelope_sum {
            return Ok(sum / (PI * l));
        }
    }
    Err(Error::NonConvergence {
        what: "plate Green mode series",
        iterations: cfg.n_max,
        estimate: tail / (PI * l),
    })
}

// Image sum on the common normal. With u = (z − z′)/2L and v = (z + z′)/2L,
// Σ_j [1/|u − j| − 1/|v − j|] = 1/|u| − 1/v + ψ(1+v) − ψ(1+u) + ψ(1−v) − ψ(1−u).
fn on_axis(z: f64, zp: f64, l: f64) -> Result<f64> {
    if z == zp {
        return Err(Error::CoincidentPoints {
            separation: 0.0,
            floor: super::COINCIDENCE_FLOOR * (1.0 + z.abs()),
        });
    }
    let u = (z - zp) / (2.0 * l);
    let v = (z + zp) / (2.0 * l);
    if v <= 0.0 || v >= 1.0 {
        // a point on a plate: every image pair cancels
        return Ok(0.0);
    }
    let s = 1.0 / u.abs() - 1.0 / v + digamma(1.0 + v)? - digamma(1.0 + u)? + digamma(1.0 - v)?
        - digamma(1.0 - u)?;
    Ok(s / (8.0 * PI * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior3::Vec3;
    use crate::kernels::free_kernel;

    // method of images: +1 at z′ + 2jL, −1 at −z′ + 2jL, summed symmetrically
    fn images(x: Point3, y: Point3, l: f64, j_max: i64) -> f64 {
        let f = |zs: f64| 1.0 / (4.0 * PI * Vec3::new(y.x, y.y, zs).distance(x));
        let mut s = f(y.z) - f(-y.z);
        for j in 1..=j_max {
            let o = 2.0 * l * j as f64;
            s += f(y.z + o) + f(y.z - o) - f(-y.z + o) - f(-y.z - o);
        }
        s
    }

    fn images_extrapolated(x: Point3, y: Point3, l: f64) -> f64 {
        // the paired image terms decay like j⁻³, so the truncation error is ∝ J⁻²
        let (a, b) = (images(x, y, l, 2000), images(x, y, l, 4000));
        b + (b - a) / 3.0
    }

    #[test]
    fn symmetric_under_exchange() {
        let g = PlateGreen::new(1.0).unwrap();
        let (x, y) = (Vec3::new(0.1, 0.2, 0.3), Vec3::new(-0.2, 0.5, 0.8));
        let a = g.eval(x, y).unwrap();
        let b = g.eval(y, x).unwrap();
        assert!((a - b).abs() <= 1e-15 * a.abs());
    }

    #[test]
    fn vanishes_on_the_plates() {
        let g = PlateGreen::new(2.0).unwrap();
        let x = Vec3::new(0.0, 0.0, 0.7);
        let interior = g.eval(x, Vec3::new(0.3, 0.0, 1.1)).unwrap();
        for zp in [0.0, 2.0, 1e-12] {
            let v = g.eval(x, Vec3::new(0.3, 0.0, zp)).unwrap();
            assert!(v.abs() < 1e-8 * interior.abs(), "z′ = {zp}: {v:e}");
        }
    }

    #[test]
    fn out_of_slab_is_an_error() {
        let g = PlateGreen::new(1.0).unwrap();
        let r = g.eval(Vec3::new(0.0, 0.0, 1.5), Vec3::new(0.1, 0.0, 0.5));
        assert!(matches!(r, Err(Error::OutOfSlab { .. })));
    }

    #[test]
    fn agrees_with_image_sum() {
        let l = 1.0;
        let g = PlateGreen::new(l).unwrap();
        for (x, y) in [
            (Vec3::new(0.0, 0.0, 0.5), Vec3::new(0.3, 0.0, 0.5)),
            (Vec3::new(0.1, 0.2, 0.2), Vec3::new(-0.3, 0.4, 0.9)),
            (Vec3::new(0.0, 0.0, 0.05), Vec3::new(1.5, 0.5, 0.6)),
        ] {
            let series = g.eval(x, y).unwrap();
            let oracle = images_extrapolated(x, y, l);
            assert!(
                ((series - oracle) / oracle).abs() < 1e-6,
                "{series:e} vs {oracle:e}"
            );
        }
    }

    #[test]
    fn on_axis_closed_form_matches_image_sum_and_nearby_series() {
        let l = 1.0;
        let g = PlateGreen::new(l).unwrap();
        let (x, y) = (Vec3::new(0.0, 0.0, 0.3), Vec3::new(0.0, 0.0, 0.75));
        let axis = g.eval(x, y).unwrap();
        let oracle = images_extrapolated(x, y, l);
        assert!(((axis - oracle) / oracle).abs() < 1e-7, "{axis:e} vs {oracle:e}");
        let near = g.eval(x, Vec3::new(1e-3, 0.0, 0.75)).unwrap();
        assert!(((axis - near) / axis).abs() < 1e-5);
    }

    #[test]
    fn decays_like_first_mode() {
        let l = 1.0;
        let g = PlateGreen::new(l).unwrap();
        let at = |rho: f64| g.eval(Vec3::new(0.0, 0.0, 0.4), Vec3::new(rho, 0.0, 0.5)).unwrap();
        for rho in [3.0, 5.0, 8.0] {
            let ratio = at(rho + l) / at(rho);
            let expected = k0(PI * (rho + l) / l).unwrap() / k0(PI * rho / l).unwrap();
            assert!(((ratio - expected) / expected).abs() < 1e-6);
            assert!((ratio / (-PI).exp() - 1.0).abs() < 0.2);
        }
    }

    #[test]
    fn thick_slab_approaches_free_space() {
        let l = 200.0;
        let g = PlateGreen::new(l).unwrap();
        let x = Vec3::new(0.0, 0.0, 100.0);
        let y = Vec3::new(0.6, 0.0, 100.8);
        let ratio = g.eval(x, y).unwrap() / free_kernel(x, y).unwrap();
        assert!((ratio - 1.0).abs() < 0.01, "{ratio}");
    }

    #[test]
    fn tiny_in_plane_separation_exhausts_modes() {
        let g = PlateGreen::new(1.0).unwrap().with_n_max(1000);
        let r = g.eval(Vec3::new(0.0, 0.0, 0.3), Vec3::new(1e-6, 0.0, 0.6));
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }
}
