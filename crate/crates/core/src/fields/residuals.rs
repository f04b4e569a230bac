//! Verification residuals: `b = #dA`, gauge and Lorenz conditions,
//! `δb = 0`, and Ampère's law in integral form.

use std::f64::consts::PI;

use super::{MediumConstants, SUPPORT_FLOOR};
use crate::error::{Error, Result};
use crate::exterior3::{codifferential, d_numeric, hodge, time_derivative, FormField, Point3, Step, Vec3};
use crate::quad::{try_integrate_adaptive, try_integrate_periodic_adaptive, QuadConfig};
use crate::sources::CurveSource;

/// `b = #dA`; for a 1-form `A` the coefficients of `b` are `curl A`.
pub fn derive_b(a: &FormField, step: Step) -> Result<FormField> {
    if a.degree() != 1 {
        return Err(Error::invalid("a", format!("expected a 1-form, got a {}-form", a.degree())));
    }
    Ok(hodge(&d_numeric(a, step)?))
}

/// A residual together with the derivative scale it is measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    pub value: f64,
    /// Size of the derivative terms the residual is built from.
    pub scale: f64,
    /// `|value|/scale`, or `|value|` when the scale vanishes.
    pub relative: f64,
}

impl Residual {
    fn new(value: f64, scale: f64) -> Self {
        let relative = if scale > 0.0 { value.abs() / scale } else { value.abs() };
        Residual {
            value,
            scale,
            relative,
        }
    }

    pub fn passes(&self, threshold: f64) -> bool {
        self.relative <= threshold
    }
}

/// `Σ_ij |∂_i v_j|` for a 1-form by central differences: the size of the
/// first derivatives a divergence is assembled from.
fn divergence_scale(v: &FormField, y: Point3, t: f64, h: f64) -> Result<f64> {
    let mut s = 0.0;
    for i in 0..3 {
        let mut e = [0.0; 3];
        e[i] = h;
        let e = Vec3::from_array(e);
        let (p, m) = (v.eval(y + e, t)?, v.eval(y - e, t)?);
        for j in 0..3 {
            s += ((p[j] - m[j]) / (2.0 * h)).abs();
        }
    }
    Ok(s)
}

fn expect_one_form(v: &FormField, name: &'static str) -> Result<()> {
    if v.degree() == 1 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("expected a 1-form, got a {}-form", v.degree())))
    }
}

/// Coulomb/magnetostatic gauge residual `δA` at `(y, t)`.
pub fn gauge_residual(a: &FormField, y: Point3, t: f64, step: Step) -> Result<Residual> {
    expect_one_form(a, "a")?;
    let value = codifferential(a, step)?.eval_scalar(y, t)?;
    Ok(Residual::new(value, divergence_scale(a, y, t, step.at(y))?))
}

/// `δb`, which vanishes for any `b = #dA`.
pub fn divergence_residual(b: &FormField, y: Point3, t: f64, step: Step) -> Result<Residual> {
    gauge_residual(b, y, t, step)
}

/// Lorenz residual `δA − εμ ∂φ/∂t` (that is, `−(∇·A + εμ ∂φ/∂t)`) at `(y, t)`.
/// The time step is the spatial step divided by the wave speed.
pub fn lorenz_residual(
    a: &FormField,
    phi: &FormField,
    y: Point3,
    t: f64,
    medium: &MediumConstants,
    step: Step,
) -> Result<Residual> {
    expect_one_form(a, "a")?;
    if phi.degree() != 0 {
        return Err(Error::invalid("phi", "expected a 0-form"));
    }
    medium.validate()?;
    let h = step.at(y);
    let em = medium.epsilon * medium.mu;
    let delta_a = codifferential(a, step)?.eval_scalar(y, t)?;
    let phi_dot = time_derivative(phi, h / medium.c())?.eval_scalar(y, t)?;
    let scale = divergence_scale(a, y, t, h)? + (em * phi_dot).abs();
    Ok(Residual::new(delta_a - em * phi_dot, scale))
}

/// A closed integration circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum Circuit {
    /// Circle traversed counter-clockwise about `normal`.
    Circle {
        center: Point3,
        normal: Vec3,
        radius: f64,
    },
    /// Closed polygon through the vertices in order.
    Polygon(Vec<Point3>),
}

impl Circuit {
    pub fn reversed(&self) -> Circuit {
        match self {
            Circuit::Circle {
                center,
                normal,
                radius,
            } => Circuit::Circle {
                center: *center,
                normal: -*normal,
                radius: *radius,
            },
            Circuit::Polygon(v) => Circuit::Polygon(v.iter().rev().copied().collect()),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Circuit::Circle { normal, radius, .. } => {
                if !(*radius > 0.0 && radius.is_finite()) || normal.normalized().is_none() {
                    return Err(Error::invalid("circuit", "circle needs a positive radius and a nonzero normal"));
                }
            }
            Circuit::Polygon(v) => {
                if v.len() < 3 {
                    return Err(Error::invalid("circuit", "polygon needs at least three vertices"));
                }
            }
        }
        Ok(())
    }

    fn samples(&self, n: usize) -> Vec<Point3> {
        match self {
            Circuit::Circle { .. } => (0..n)
                .map(|k| self.circle_point(2.0 * PI * k as f64 / n as f64).0)
                .collect(),
            Circuit::Polygon(v) => {
                let per = (n / v.len()).max(2);
                let mut out = vec![];
                for (i, &p) in v.iter().enumerate() {
                    let q = v[(i + 1) % v.len()];
                    out.extend((0..per).map(|k| p + (q - p) * (k as f64 / per as f64)));
                }
                out
            }
        }
    }

    fn circle_point(&self, theta: f64) -> (Point3, Vec3) {
        let Circuit::Circle {
            center,
            normal,
            radius,
        } = self
        else {
            unreachable!("only called on circles")
        };
        let n = normal.normalized().expect("validated");
        let helper = if n.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
        let u = (helper - n * helper.dot(n)).normalized().expect("helper is not parallel");
        let w = n.cross(u);
        let (s, c) = theta.sin_cos();
        (*center + (u * c + w * s) * *radius, (w * c - u * s) * *radius)
    }

    fn size(&self) -> f64 {
        match self {
            Circuit::Circle { radius, .. } => *radius,
            Circuit::Polygon(v) => v
                .iter()
                .zip(v.iter().cycle().skip(1))
                .map(|(a, b)| a.distance(*b))
                .fold(0.0, f64::max),
        }
    }
}

/// Outcome of an Ampère check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmpereResult {
    /// `∮ h · dl` in amps.
    pub circulation: f64,
    /// `linking × I`.
    pub enclosed: f64,
    /// `|∮ h · dl − I_enc| / max(|I_enc|, 1 A)`.
    pub residual: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

/// Integral form of `dh = J`: the circulation of `h_field` (A/m) around
/// `circuit` against the current the circuit links. The linking number is
/// taken from the configuration, not computed.
pub fn ampere_residual<H>(
    source: &CurveSource,
    linking: i32,
    circuit: &Circuit,
    h_field: H,
    cfg: &QuadConfig,
) -> Result<AmpereResult>
where
    H: Fn(Point3) -> Result<Vec3>,
{
    circuit.validate()?;
    let size = circuit.size();
    let clearance = circuit
        .samples(512)
        .into_iter()
        .map(|p| source.distance_to(p))
        .fold(f64::INFINITY, f64::min);
    if clearance <= SUPPORT_FLOOR * size {
        return Err(Error::OnSupport { distance: clearance });
    }
    let (lo, hi) = source.domain();
    let current = source.line_current(0.5 * (lo + hi))?;
    let enclosed = linking as f64 * current;
    // integrate in units of the source current so tolerances are dimensionless
    let unit = if current != 0.0 { current.abs() } else { 1.0 };
    let q = match circuit {
        Circuit::Circle { .. } => try_integrate_periodic_adaptive(
            |theta| {
                let (p, dp) = circuit.circle_point(theta);
                Ok(h_field(p)?.dot(dp) / unit)
            },
            2.0 * PI,
            cfg,
        )?,
        Circuit::Polygon(v) => {
            let mut total = None;
            for (i, &p) in v.iter().enumerate() {
                let q = v[(i + 1) % v.len()];
                let edge = try_integrate_adaptive(|s| Ok(h_field(p + (q - p) * s)?.dot(q - p) / unit), 0.0, 1.0, cfg)?;
                total = Some(match total {
                    None => edge,
                    Some(t) => edge.combine(t),
                });
            }
            total.expect("at least three edges")
        }
    };
    let circulation = q.value * unit;
    Ok(AmpereResult {
        circulation,
        enclosed,
        residual: (circulation - enclosed).abs() / enclosed.abs().max(1.0),
        error_estimate: q.error_estimate * unit,
        converged: q.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_field_potential() {
        let b0 = 0.7;
        let a = FormField::one_form(move |p| Ok(Vec3::new(-0.5 * b0 * p.y, 0.5 * b0 * p.x, 0.0)));
        let b = derive_b(&a, Step::Fixed(1e-3)).unwrap();
        let v = b.eval_vector(Vec3::new(0.3, -1.2, 2.0), 0.0).unwrap();
        assert!(v.distance(Vec3::new(0.0, 0.0, b0)) < 1e-12);
    }

    #[test]
    fn curl_has_no_divergence() {
        let a = FormField::one_form(|p| Ok(Vec3::new(p.y * p.z * p.z, (p.x * p.z).sin(), p.x * p.y * p.y)));
        let b = derive_b(&a, Step::Fixed(1e-3)).unwrap();
        let r = divergence_residual(&b, Vec3::new(0.4, 0.2, -0.3), 0.0, Step::Fixed(1e-3)).unwrap();
        assert!(r.relative < 1e-6, "{r:?}");
    }

    #[test]
    fn gauge_residual_detects_divergence() {
        let solenoidal = FormField::one_form(|p| Ok(Vec3::new(-p.y, p.x, 0.0)));
        let r = gauge_residual(&solenoidal, Vec3::new(0.5, 0.1, 0.0), 0.0, Step::Fixed(1e-4)).unwrap();
        assert!(r.value.abs() < 1e-12);
        let radial = FormField::one_form(Ok);
        let r = gauge_residual(&radial, Vec3::new(0.5, 0.1, 0.0), 0.0, Step::Fixed(1e-4)).unwrap();
        assert!((r.value + 3.0).abs() < 1e-9);
        assert!((r.relative - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lorenz_plane_wave() {
        // φ = cos(x − ct), A = (φ/c) x̂ satisfies ∇·A + εμ φ̇ = 0
        let med = MediumConstants::new(2.0, 0.5).unwrap();
        let c = med.c();
        let phi = FormField::scalar_t(move |p, t| Ok((p.x - c * t).cos()));
        let a = FormField::one_form_t(move |p, t| Ok(Vec3::new((p.x - c * t).cos() / c, 0.0, 0.0)));
        let r = lorenz_residual(&a, &phi, Vec3::new(0.3, 0.0, 0.0), 0.2, &med, Step::Fixed(1e-4)).unwrap();
        assert!(r.relative < 1e-7, "{r:?}");
        // a wrong relative sign is caught
        let bad = a.scale(-1.0);
        let r = lorenz_residual(&bad, &phi, Vec3::new(0.3, 0.0, 0.0), 0.2, &med, Step::Fixed(1e-4)).unwrap();
        assert!(r.relative > 0.9);
    }

    fn wire_field(i: f64) -> impl Fn(Point3) -> Result<Vec3> {
        // h of an infinite wire along z
        move |p: Point3| {
            let r2 = p.x * p.x + p.y * p.y;
            Ok(Vec3::new(-p.y, p.x, 0.0) * (i / (2.0 * PI * r2)))
        }
    }

    #[test]
    fn ampere_for_a_straight_wire() {
        let src = CurveSource::segment(Vec3::new(0.0, 0.0, -1e3), Vec3::new(0.0, 0.0, 1e3), 3.0).unwrap();
        let cfg = QuadConfig::default();
        let circle = Circuit::Circle {
            center: Vec3::ZERO,
            normal: Vec3::Z,
            radius: 0.2,
        };
        let r = ampere_residual(&src, 1, &circle, wire_field(3.0), &cfg).unwrap();
        assert!(r.residual < 1e-10, "{r:?}");
        let back = ampere_residual(&src, -1, &circle.reversed(), wire_field(3.0), &cfg).unwrap();
        assert!((back.circulation + r.circulation).abs() < 1e-10);
        let square = Circuit::Polygon(vec![
            Vec3::new(-1.0, -1.0, 0.0),
            Vec3::new(1.0, -1.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(-1.0, 1.0, 0.0),
        ]);
        let r = ampere_residual(&src, 1, &square, wire_field(3.0), &cfg).unwrap();
        assert!(r.residual < 1e-9, "{r:?}");
        let away = Circuit::Circle {
            center: Vec3::new(2.0, 0.0, 0.0),
            normal: Vec3::Z,
            radius: 0.5,
        };
        let r = ampere_residual(&src, 0, &away, wire_field(3.0), &cfg).unwrap();
        assert!(r.circulation.abs() < 1e-10);
    }

    #[test]
    fn circuit_touching_the_source_is_refused() {
        let src = CurveSource::segment(Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, 1.0), 1.0).unwrap();
        let through = Circuit::Circle {
            center: Vec3::new(0.5, 0.0, 0.0),
            normal: Vec3::Z,
            radius: 0.5,
        };
        let r = ampere_residual(&src, 1, &through, wire_field(1.0), &QuadConfig::default());
        assert!(matches!(r, Err(Error::OnSupport { .. })));
    }
}
