//! Retarded time and Liénard–Wiechert potentials of a moving point charge.

use std::f64::consts::PI;

use super::{Diagnostics, MediumConstants, PotentialResult};
use crate::error::{Error, Result};
use crate::exterior3::{Point3, Vec3};
use crate::kernels::COINCIDENCE_FLOOR;
use crate::sources::PointSource;

const MAX_ITERATIONS: usize = 100;

/// Solution of `t′ = t − |x(t′) − y|/c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedState {
    pub t_ret: f64,
    /// `t − t′ = R/c`.
    pub delay: f64,
    /// Retardation Jacobian `𝒬 = 1/(1 − n·v/c)`.
    pub q_factor: f64,
    /// Unit vector from the retarded source position to the field point.
    pub n: Vec3,
    pub position: Point3,
    pub velocity: Vec3,
    /// `R = |x(t′) − y|`.
    pub distance: f64,
}

/// Finds the retarded time for a field point `y` at time `t`.
///
/// The root is sought in the delay `τ = t − t′`, where
/// `h(τ) = τ − |x(t − τ) − y|/c` is strictly increasing with slope
/// `1 − n·v/c ≥ 1 − v_max/c` and changes sign on `[0, R(t)/(c − v_max)]`.
/// Newton steps are safeguarded by that bracket; iteration stops once
/// `|h| ≤ tol · τ` or the bracket collapses to rounding level.
pub fn solve_retarded_time(
    src: &PointSource,
    y: Point3,
    t: f64,
    c: f64,
    tol: f64,
) -> Result<RetardedState> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid("c", "wave speed must be positive and finite"));
    }
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::invalid("tol", format!("{tol} must lie in (0, 1)")));
    }
    if !(y.is_finite() && t.is_finite()) {
        return Err(Error::invalid("y", "field point and time must be finite"));
    }
    src.check_subluminal(c)?;
    let vmax = src.speed_bound();

    let eval = |tau: f64| -> Result<(f64, f64, Point3, Vec3)> {
        let (x, v) = src.state(t - tau);
        if !(x.is_finite() && v.is_finite()) {
            return Err(Error::NonFinite("trajectory"));
        }
        let d = y - x;
        let r = d.norm();
        let slope = if r > 0.0 { 1.0 - d.dot(v) / (r * c) } else { 1.0 };
        Ok((tau - r / c, slope, x, v))
    };

    let r_now = src.state(t).0.distance(y);
    let (mut lo, mut hi) = (0.0, r_now / (c - vmax));
    let mut tau = r_now / c;
    let mut last = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let (h, slope, x, v) = eval(tau)?;
        let settled = h.abs() <= tol * tau || hi - lo <= 4.0 * f64::EPSILON * hi.max(f64::MIN_POSITIVE);
        if settled || h == 0.0 {
            return finish(t, tau, x, v, y, c);
        }
        if h < 0.0 {
            lo = tau;
        } else {
            hi = tau;
        }
        let newton = tau - h / slope;
        tau = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        last = h.abs();
    }
    Err(Error::NonConvergence {
        what: "retarded-time solver",
        iterations: MAX_ITERATIONS,
        estimate: last,
    })
}

fn finish(t: f64, tau: f64, x: Point3, v: Vec3, y: Point3, c: f64) -> Result<RetardedState> {
    let speed = v.norm();
    if speed >= c {
        return Err(Error::Superluminal { speed, c });
    }
    let d = y - x;
    let r = d.norm();
    let floor = COINCIDENCE_FLOOR * (1.0 + x.norm() + y.norm());
    if r <= floor {
        return Err(Error::CoincidentPoints {
            separation: r,
            floor,
        });
    }
    let n = d / r;
    Ok(RetardedState {
        t_ret: t - tau,
        delay: tau,
        q_factor: 1.0 / (1.0 - n.dot(v) / c),
        n,
        position: x,
        velocity: v,
        distance: r,
    })
}

/// `φ = q𝒬/(4πεR)`, `A = μq𝒬v/(4πR)` at the retarded time.
pub fn lienard_wiechert(
    src: &PointSource,
    y: Point3,
    t: f64,
    medium: &MediumConstants,
    tol: f64,
) -> Result<PotentialResult> {
    medium.validate()?;
    let st = solve_retarded_time(src, y, t, medium.c(), tol)?;
    let g = src.charge * st.q_factor / (4.0 * PI * st.distance);
    Ok(PotentialResult {
        a: st.velocity * (medium.mu * g),
        phi: g / medium.epsilon,
        diagnostics: Diagnostics::exact(),
    })
}
