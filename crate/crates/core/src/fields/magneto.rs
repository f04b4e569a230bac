//! Magnetostatic vector potentials `A = μ Γ𝒥` of line and sheet currents.
//!
//! Every evaluator integrates a dimensionless geometric integral over the
//! source chart and applies the physical prefactor afterwards, so quadrature
//! tolerances are independent of units.

use std::f64::consts::PI;

use super::{Diagnostics, MediumConstants, PotentialResult, SUPPORT_FLOOR};
use crate::error::{Error, Result};
use crate::exterior3::{Point3, Vec3};
use crate::quad::{
    try_integrate_2d, try_integrate_adaptive, try_integrate_periodic_adaptive, QuadConfig,
    QuadResult, Rect,
};
use crate::sources::{CurveGeometry, CurveSource, PiecewiseCurve, SurfaceSource};

/// The loop constant `λ = 4πμĬa`.
pub fn loop_lambda(current: f64, radius: f64, medium: &MediumConstants) -> f64 {
    4.0 * PI * medium.mu * current * radius
}

/// Vector potential of a circular loop of radius `a` in the plane `z = 0`,
/// centred on the `z` axis, carrying `current` counter-clockwise about `+z`:
///
/// `A = r dφ · (λ/4π) ∫₀^{2π} f(R) cos Ψ dΨ`, with `f = 1/(4πR)`,
/// `R² = r² + a² + z² − 2ar cos Ψ` and `λ = 4πμĬa`.
///
/// Only the azimuthal component is nonzero and it does not depend on `φ`.
pub fn loop_potential(
    a: f64,
    current: f64,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    check_positive("radius", a)?;
    medium.validate()?;
    let (r, z) = (y.x.hypot(y.y), y.z);
    let distance = (r - a).hypot(z);
    if distance <= SUPPORT_FLOOR * a {
        return Err(Error::OnSupport { distance });
    }
    if r == 0.0 {
        return Ok(PotentialResult::magnetic(Vec3::ZERO, Diagnostics::exact()));
    }
    let base = r * r + a * a + z * z;
    let q = try_integrate_periodic_adaptive(
        |psi| Ok(a * psi.cos() / (base - 2.0 * a * r * psi.cos()).sqrt()),
        2.0 * PI,
        cfg,
    )?;
    // (λ/4π)·(1/4π)·∫cos/R = μĬa/(4π)·∫cos/R, and the integral carries a factor a
    let prefactor = loop_lambda(current, a, medium) / (4.0 * PI) / (4.0 * PI * a);
    let a_phi = prefactor * q.value;
    let phi = y.y.atan2(y.x);
    Ok(PotentialResult::magnetic(
        Vec3::from_cylindrical_components(Vec3::new(0.0, a_phi, 0.0), phi),
        Diagnostics::from_quad(&q, prefactor),
    ))
}

/// Vector potential of the helix `X(σ) = (a cos Pσ, a sin Pσ, pσ)`,
/// `σ ∈ [0, L]` (arc length, `a²P² + p² = 1`), carrying `current` towards
/// increasing `σ`. In cylindrical components about the helix axis
///
/// `A_r = −μĬaP ∫ f sin(Pσ − φ) dσ`, `A_φ = μĬaP ∫ f cos(Pσ − φ) dσ`,
/// `A_z = μĬp ∫ f dσ`, with `f = 1/(4πR)` and
/// `R² = r² + a² + z² + σ²p² − 2zpσ − 2ar cos(Pσ − φ)`.
pub fn helix_potential(
    a: f64,
    p: f64,
    length: f64,
    current: f64,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    let src = CurveSource::helix(Vec3::ZERO, a, p, length, current)?;
    helix_from_source(&src, Vec3::ZERO, a, p, length, current, y, medium, cfg)
}

#[allow(clippy::too_many_arguments)]
fn helix_from_source(
    src: &CurveSource,
    center: Point3,
    a: f64,
    p: f64,
    length: f64,
    current: f64,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    medium.validate()?;
    let q = y - center;
    let (r, phi, z) = (q.x.hypot(q.y), q.y.atan2(q.x), q.z);
    let floor = SUPPORT_FLOOR * a;
    let may_touch = (r - a).abs() <= floor && z >= -floor && z <= p * length + floor;
    if may_touch {
        let distance = src.distance_to(y);
        if distance <= floor {
            return Err(Error::OnSupport { distance });
        }
    }
    let big_p = (1.0 - p * p).sqrt() / a;
    let inv_r = |s: f64| {
        let dz = z - p * s;
        1.0 / (r * r + a * a + dz * dz - 2.0 * a * r * (big_p * s - phi).cos()).sqrt()
    };

    // half-turn pieces keep each panel's integrand at most one-peaked
    let pieces = ((length * big_p / PI).ceil() as usize).max(1);
    let step = length / pieces as f64;
    let mut totals = [None::<QuadResult>; 3];
    for k in 0..pieces {
        let (lo, hi) = (k as f64 * step, if k + 1 == pieces { length } else { (k + 1) as f64 * step });
        let parts = [
            try_integrate_adaptive(|s| Ok(-(big_p * s - phi).sin() * inv_r(s)), lo, hi, cfg)?,
            try_integrate_adaptive(|s| Ok((big_p * s - phi).cos() * inv_r(s)), lo, hi, cfg)?,
            try_integrate_adaptive(|s| Ok(inv_r(s)), lo, hi, cfg)?,
        ];
        for (t, part) in totals.iter_mut().zip(parts) {
            *t = Some(match t.take() {
                None => part,
                Some(prev) => prev.combine(part),
            });
        }
    }
    let [qr, qphi, qz] = totals.map(|t| t.expect("at least one piece"));
    let base = medium.mu * current / (4.0 * PI);
    let (kr, kz) = (base * a * big_p, base * p);
    let mut diag = Diagnostics::from_quad(&qr, kr)
        .merge(Diagnostics::from_quad(&qphi, kr))
        .merge(Diagnostics::from_quad(&qz, kz));
    diag.converged = [qr, qphi, qz]
        .iter()
        .all(|q| q.converged || q.error_estimate <= cfg.target(q.value));
    let cyl = Vec3::new(kr * qr.value, kr * qphi.value, kz * qz.value);
    Ok(PotentialResult::magnetic(
        Vec3::from_cylindrical_components(cyl, phi),
        diag,
    ))
}

/// How the inner height integral of the solenoid potential is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InnerMethod {
    /// `∫₀^{L₀} dρ/√(c₁ + (z − ρ)²) = asinh((L₀ − z)/√c₁) + asinh(z/√c₁)`.
    #[default]
    ClosedForm,
    /// Iterated adaptive quadrature of both chart integrals.
    Quadrature,
}

/// Vector potential of the helically wound sheet `r = a`, `0 ≤ z ≤ L₀`, with
/// sheet current `K = κ₀(aP e_φ + p e_z)`:
///
/// `A_z = μκ₀ap ∫∫ f`, `A_φ = μκ₀a²P ∫∫ f cos(σ − φ)`,
/// `A_r = −μκ₀a²P ∫∫ f sin(σ − φ)` over `σ ∈ [0, 2π]`, `ρ ∈ [0, L₀]`, with
/// `f = 1/(4πR)`, `R² = r² + a² − 2ar cos(σ − φ) + (z − ρ)²`.
pub fn solenoid_potential(
    a: f64,
    p: f64,
    l0: f64,
    kappa0: f64,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    let sheet = SurfaceSource::solenoid(Vec3::ZERO, a, p, l0, kappa0)?;
    solenoid_potential_with(&sheet, y, medium, cfg, InnerMethod::ClosedForm)
}

/// [`solenoid_potential`] for an arbitrary sheet and inner-integral method.
pub fn solenoid_potential_with(
    sheet: &SurfaceSource,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
    method: InnerMethod,
) -> Result<PotentialResult> {
    medium.validate()?;
    let a = sheet.radius;
    let distance = sheet.distance_to(y);
    if distance <= SUPPORT_FLOOR * a {
        return Err(Error::OnSupport { distance });
    }
    let q = y - sheet.base;
    let (r, phi, z) = (q.x.hypot(q.y), q.y.atan2(q.x), q.z);
    let l0 = sheet.length;
    let c1 = move |s: f64| r * r + a * a - 2.0 * a * r * (s - phi).cos();

    let weights: [fn(f64) -> f64; 3] = [|d| -d.sin(), |d| d.cos(), |_| 1.0];
    let mut results = [QuadResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    }; 3];
    for (k, w) in weights.iter().enumerate() {
        if k == 2 && sheet.pitch == 0.0 {
            continue;
        }
        results[k] = match method {
            InnerMethod::ClosedForm => try_integrate_periodic_adaptive(
                |s| Ok(w(s - phi) * inner_height_integral(c1(s), z, l0)),
                2.0 * PI,
                cfg,
            )?,
            InnerMethod::Quadrature => try_integrate_2d(
                |s, rho| {
                    let dz = z - rho;
                    Ok(w(s - phi) / (c1(s) + dz * dz).sqrt())
                },
                Rect::new(0.0, 2.0 * PI, 0.0, l0),
                cfg,
            )?,
        };
    }
    let base = medium.mu * sheet.kappa0 / (4.0 * PI);
    let k_perp = base * a * a * sheet.wavenumber();
    let k_axial = base * a * sheet.pitch;
    let [qr, qphi, qz] = results;
    let diag = Diagnostics::from_quad(&qr, k_perp)
        .merge(Diagnostics::from_quad(&qphi, k_perp))
        .merge(Diagnostics::from_quad(&qz, k_axial));
    let cyl = Vec3::new(k_perp * qr.value, k_perp * qphi.value, k_axial * qz.value);
    Ok(PotentialResult::magnetic(
        Vec3::from_cylindrical_components(cyl, phi),
        diag,
    ))
}

/// `∫₀^{L₀} dρ/√(c₁ + (z − ρ)²)`, avoiding cancellation when `z` lies beyond
/// either end of the sheet.
fn inner_height_integral(c1: f64, z: f64, l0: f64) -> f64 {
    let s = c1.sqrt();
    let (u, v) = ((l0 - z) / s, z / s);
    if u >= 0.0 && v >= 0.0 {
        u.asinh() + v.asinh()
    } else {
        // one argument negative: asinh(x) − asinh(y) for x > y ≥ 0
        let (x, y) = if u < 0.0 { (v, -u) } else { (u, -v) };
        let num = (x - y) * (x + y);
        let den = x * (1.0 + y * y).sqrt() + y * (1.0 + x * x).sqrt();
        (num / den).asinh()
    }
}

/// Vector potential of a curve source, dispatching to the specialised
/// integrands of loops and helices and to the closed form for segments.
/// Reparametrized curves fall back to [`curve_potential_quadrature`].
pub fn curve_potential(
    src: &CurveSource,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    let (lo, hi) = src.domain();
    let current = src.line_current(0.5 * (lo + hi))?;
    let native = src.domain() == native_domain(&src.geometry());
    if !native {
        return curve_potential_quadrature(src, y, medium, cfg);
    }
    match src.geometry() {
        CurveGeometry::Loop { center, radius } => {
            loop_potential(radius, current, y - center, medium, cfg)
        }
        CurveGeometry::Helix {
            center,
            radius,
            pitch,
            length,
        } => helix_from_source(src, center, radius, pitch, length, current, y, medium, cfg),
        CurveGeometry::Segment { start, end } => segment_potential(start, end, current, y, medium),
    }
}

fn native_domain(g: &CurveGeometry) -> (f64, f64) {
    match g {
        CurveGeometry::Loop { .. } => (0.0, 2.0 * PI),
        CurveGeometry::Helix { length, .. } => (0.0, *length),
        CurveGeometry::Segment { .. } => (0.0, 1.0),
    }
}

/// `μĬ ê/(4π) · ∫ ds/|X(s) − y|` for a straight segment, in closed form.
fn segment_potential(
    start: Point3,
    end: Point3,
    current: f64,
    y: Point3,
    medium: &MediumConstants,
) -> Result<PotentialResult> {
    let d = end - start;
    let len = d.norm();
    let e = d / len;
    let t = ((y - start).dot(d) / (len * len)).clamp(0.0, 1.0);
    let distance = (start + d * t).distance(y);
    if distance <= SUPPORT_FLOOR * len {
        return Err(Error::OnSupport { distance });
    }
    let (ra, rb) = (start.distance(y), end.distance(y));
    let (ua, ub) = ((start - y).dot(e), (end - y).dot(e));
    // ∫ ds/R = ln((R_b + u_b)/(R_a + u_a)), rewritten to avoid cancellation
    // when the segment lies behind the foot of the perpendicular
    let integral = if ua >= 0.0 || ub >= 0.0 && ua + ub >= 0.0 {
        ((rb + ub) / (ra + ua)).ln()
    } else {
        ((ra - ua) / (rb - ub)).ln()
    };
    let a = e * (medium.mu * current / (4.0 * PI) * integral);
    Ok(PotentialResult::magnetic(a, Diagnostics::exact()))
}

/// `μ ∫ (I₀ W ω⁺(∂σ)) f(X(σ), y) dσ` by adaptive quadrature of the current
/// element over the chart, for any curve source.
pub fn curve_potential_quadrature(
    src: &CurveSource,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    medium.validate()?;
    let (lo, hi) = src.domain();
    let scale = src.current_element(0.5 * (lo + hi))?.norm().max(f64::MIN_POSITIVE);
    let mut comps = [0.0; 3];
    let mut diag = Diagnostics::exact();
    let prefactor = medium.mu * scale;
    for (k, out) in comps.iter_mut().enumerate() {
        let q = try_integrate_adaptive(
            |s| {
                let x = src.position(s)?;
                let r = x.distance(y);
                if r <= f64::MIN_POSITIVE {
                    return Err(Error::OnSupport { distance: r });
                }
                Ok(src.current_element(s)?[k] / scale / (4.0 * PI * r))
            },
            lo,
            hi,
            cfg,
        )?;
        *out = prefactor * q.value;
        diag = diag.merge(Diagnostics::from_quad(&q, prefactor));
    }
    Ok(PotentialResult::magnetic(Vec3::from_array(comps), diag))
}

/// Superposition over the pieces of a piecewise curve.
pub fn piecewise_potential(
    curve: &PiecewiseCurve,
    y: Point3,
    medium: &MediumConstants,
    cfg: &QuadConfig,
) -> Result<PotentialResult> {
    let mut total = PotentialResult::zero();
    for piece in curve.pieces() {
        total = total.add(curve_potential(piece, y, medium, cfg)?);
    }
    Ok(total)
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be positive and finite")))
    }
}
