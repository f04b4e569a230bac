use std::fmt;
use std::sync::Arc;

use super::{leray_weight_orthogonal, LerayForm};
use crate::error::{Error, Result};
use crate::exterior3::{Point3, Vec3};

/// Chart geometry of a curve source. Loops and helices are coaxial with `z`
/// through `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveGeometry {
    /// Circle of radius `radius` in the plane `z = center.z`; chart `φ ∈ [0, 2π]`.
    Loop { center: Point3, radius: f64 },
    /// `X(σ) = center + (a cos Pσ, a sin Pσ, pσ)` with `a²P² + p² = 1`, so `σ`
    /// is arc length; chart `σ ∈ [0, length]`.
    Helix {
        center: Point3,
        radius: f64,
        pitch: f64,
        length: f64,
    },
    /// Straight segment; chart `σ ∈ [0, 1]`.
    Segment { start: Point3, end: Point3 },
}

/// A smooth monotone change of chart `τ ↦ σ(τ)`, returning `(σ, dσ/dτ)`.
#[derive(Clone)]
pub struct Reparametrization {
    pub domain: (f64, f64),
    map: Arc<dyn Fn(f64) -> (f64, f64) + Send + Sync>,
}

impl Reparametrization {
    pub fn new<F>(domain: (f64, f64), map: F) -> Self
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        Reparametrization {
            domain,
            map: Arc::new(map),
        }
    }
}

impl fmt::Debug for Reparametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Reparametrization")
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

/// A current-carrying curve: chart, foliation, Leray data, direction field `W`
/// and density `I₀`, with `Ĭ = I₀ · ω⁺(W)`.
#[derive(Debug, Clone)]
pub struct CurveSource {
    geometry: CurveGeometry,
    reparam: Option<Reparametrization>,
    i0: f64,
    w_scale: f64,
    orientation: f64,
    closed: bool,
}

impl CurveSource {
    /// Circular loop carrying total current `current` counter-clockwise about `+z`.
    pub fn circle(center: Point3, radius: f64, current: f64) -> Result<Self> {
        positive("radius", radius)?;
        finite("current", current)?;
        CurveSource::build(CurveGeometry::Loop { center, radius }, current, true)
    }

    /// Helix of radius `a` and pitch parameter `p ∈ (0, 1)` with arc length
    /// `length`, carrying total current `current` towards increasing `σ`.
    pub fn helix(center: Point3, radius: f64, pitch: f64, length: f64, current: f64) -> Result<Self> {
        positive("radius", radius)?;
        positive("length", length)?;
        check_pitch(pitch)?;
        finite("current", current)?;
        let geometry = CurveGeometry::Helix {
            center,
            radius,
            pitch,
            length,
        };
        CurveSource::build(geometry, current, false)
    }

    /// Straight segment from `start` to `end` carrying `current` from start to end.
    pub fn segment(start: Point3, end: Point3, current: f64) -> Result<Self> {
        finite("current", current)?;
        if !(start.is_finite() && end.is_finite()) || start.distance(end) == 0.0 {
            return Err(Error::invalid("segment", "endpoints must be finite and distinct"));
        }
        CurveSource::build(CurveGeometry::Segment { start, end }, current, false)
    }

    fn build(geometry: CurveGeometry, current: f64, closed: bool) -> Result<Self> {
        let mut src = CurveSource {
            geometry,
            reparam: None,
            i0: 1.0,
            w_scale: 1.0,
            orientation: 1.0,
            closed,
        };
        let (lo, hi) = src.native_domain();
        let mid = 0.5 * (lo + hi);
        let raw = src.leray(mid)?.on_curve(src.native_tangent(mid))?;
        src.orientation = raw.signum();
        // choose I₀ so that the induced current equals the requested total
        let per_unit = src.line_current(mid)?;
        src.i0 = current / per_unit;
        Ok(src)
    }

    /// Same curve in a new chart `τ`; all chart-level quantities pick up the
    /// Jacobian `dσ/dτ`, which must be positive.
    pub fn reparametrize(mut self, reparam: Reparametrization) -> Result<Self> {
        if self.reparam.is_some() {
            return Err(Error::invalid("reparam", "curve is already reparametrized"));
        }
        let (a, b) = reparam.domain;
        if !(a < b) {
            return Err(Error::invalid("reparam", "domain must be a nonempty interval"));
        }
        self.reparam = Some(reparam);
        Ok(self)
    }

    /// Scales `W` by `s` and `I₀` by `1/s`, which leaves `Ĭ` unchanged.
    pub fn rescale_direction(mut self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
        self.w_scale *= s;
        self.i0 /= s;
        Ok(self)
    }

    /// Replaces the density `I₀` (the direction field is kept).
    pub fn with_density(mut self, i0: f64) -> Result<Self> {
        finite("density", i0)?;
        self.i0 = i0;
        Ok(self)
    }

    pub fn geometry(&self) -> CurveGeometry {
        self.geometry
    }

    pub fn density(&self) -> f64 {
        self.i0
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Chart domain `[σ_min, σ_max]`.
    pub fn domain(&self) -> (f64, f64) {
        match &self.reparam {
            Some(r) => r.domain,
            None => self.native_domain(),
        }
    }

    fn native_domain(&self) -> (f64, f64) {
        match self.geometry {
            CurveGeometry::Loop { .. } => (0.0, 2.0 * std::f64::consts::PI),
            CurveGeometry::Helix { length, .. } => (0.0, length),
            CurveGeometry::Segment { .. } => (0.0, 1.0),
        }
    }

    fn native(&self, s: f64) -> Result<(f64, f64)> {
        let (lo, hi) = self.domain();
        if !(s >= lo && s <= hi) {
            return Err(Error::OutOfDomain {
                value: s,
                min: lo,
                max: hi,
            });
        }
        match &self.reparam {
            None => Ok((s, 1.0)),
            Some(r) => {
                let (sigma, jac) = (r.map)(s);
                if !(jac > 0.0) || !sigma.is_finite() {
                    return Err(Error::invalid("reparam", "map must be increasing and finite"));
                }
                Ok((sigma, jac))
            }
        }
    }

    fn native_position(&self, s: f64) -> Point3 {
        match self.geometry {
            CurveGeometry::Loop { center, radius } => center + Vec3::from_cylindrical(radius, s, 0.0),
            CurveGeometry::Helix {
                center,
                radius,
                pitch,
                ..
            } => {
                let big_p = helix_wavenumber(radius, pitch);
                center + Vec3::from_cylindrical(radius, big_p * s, pitch * s)
            }
            CurveGeometry::Segment { start, end } => start + (end - start) * s,
        }
    }

    fn native_tangent(&self, s: f64) -> Vec3 {
        match self.geometry {
            CurveGeometry::Loop { radius, .. } => {
                let (sn, cs) = s.sin_cos();
                Vec3::new(-radius * sn, radius * cs, 0.0)
            }
            CurveGeometry::Helix { radius, pitch, .. } => {
                let big_p = helix_wavenumber(radius, pitch);
                let (sn, cs) = (big_p * s).sin_cos();
                Vec3::new(-radius * big_p * sn, radius * big_p * cs, pitch)
            }
            CurveGeometry::Segment { start, end } => end - start,
        }
    }

    /// `X(σ)`.
    pub fn position(&self, s: f64) -> Result<Point3> {
        let (sigma, _) = self.native(s)?;
        Ok(self.native_position(sigma))
    }

    /// `dX/dσ`.
    pub fn tangent(&self, s: f64) -> Result<Vec3> {
        let (sigma, jac) = self.native(s)?;
        Ok(self.native_tangent(sigma) * jac)
    }

    /// Gradients of the foliation functions at the curve point of native chart
    /// value `sigma`.
    fn foliation_gradients(&self, sigma: f64) -> [Vec3; 2] {
        match self.geometry {
            CurveGeometry::Loop { .. } => {
                let (s, c) = sigma.sin_cos();
                [Vec3::new(c, s, 0.0), Vec3::Z]
            }
            CurveGeometry::Helix { radius, pitch, .. } => {
                // f = (r − a, z − (p/P)φ)
                let big_p = helix_wavenumber(radius, pitch);
                let (s, c) = (big_p * sigma).sin_cos();
                let e_phi = Vec3::new(-s, c, 0.0);
                [Vec3::new(c, s, 0.0), Vec3::Z - e_phi * (pitch / (big_p * radius))]
            }
            CurveGeometry::Segment { start, end } => {
                // two planes through the segment, ordered so n₁ × n₂ = ê
                let e = (end - start).normalized().expect("distinct endpoints");
                let helper = if e.x.abs() < 0.9 { Vec3::X } else { Vec3::Y };
                let n1 = helper.cross(e).normalized().expect("non-parallel helper");
                [n1, e.cross(n1)]
            }
        }
    }

    /// Raw Leray form `⋆(df₁ ∧ df₂)/(|df₁|²|df₂|²)` at chart value `s`.
    pub fn leray(&self, s: f64) -> Result<LerayForm> {
        let (sigma, _) = self.native(s)?;
        leray_weight_orthogonal(&self.foliation_gradients(sigma))
    }

    /// `±1`, chosen so that `ω⁺(∂σ) > 0`.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    /// Oriented chart measure `ω⁺(∂σ)`: the line measure is `ω⁺(∂σ) dσ`.
    pub fn chart_weight(&self, s: f64) -> Result<f64> {
        Ok(self.orientation * self.leray(s)?.on_curve(self.tangent(s)?)?)
    }

    /// Direction field `W(σ)`: the unit tangent times the direction scale.
    pub fn direction(&self, s: f64) -> Result<Vec3> {
        let t = self.tangent(s)?;
        Ok(t.normalized().ok_or(Error::DegenerateFoliation("zero tangent".into()))? * self.w_scale)
    }

    /// `Ĭ(σ) = I₀ · ω⁺(W)` in amps.
    pub fn line_current(&self, s: f64) -> Result<f64> {
        let form = self.leray(s)?;
        Ok(self.i0 * self.orientation * form.on_curve(self.direction(s)?)?)
    }

    /// `Ĭ` computed from an arbitrary representative of the Leray class.
    pub fn line_current_with(&self, s: f64, form: &LerayForm) -> Result<f64> {
        Ok(self.i0 * self.orientation * form.on_curve(self.direction(s)?)?)
    }

    /// Current element per unit chart parameter, `I₀ W ω⁺(∂σ)` (A·m); the
    /// integrand of every line-source potential.
    pub fn current_element(&self, s: f64) -> Result<Vec3> {
        Ok(self.direction(s)? * (self.i0 * self.chart_weight(s)?))
    }

    /// Distance from `y` to the nearest point of the curve, by sampling and
    /// golden-section refinement of the closest sample bracket.
    pub fn distance_to(&self, y: Point3) -> f64 {
        match self.geometry {
            CurveGeometry::Loop { center, radius } => {
                let q = y - center;
                (q.x.hypot(q.y) - radius).hypot(q.z)
            }
            CurveGeometry::Segment { start, end } => {
                let d = end - start;
                let t = ((y - start).dot(d) / d.norm_squared()).clamp(0.0, 1.0);
                (start + d * t).distance(y)
            }
            CurveGeometry::Helix { .. } => {
                let (lo, hi) = self.native_domain();
                let n = 512;
                let h = (hi - lo) / n as f64;
                let dist = |s: f64| self.native_position(s.clamp(lo, hi)).distance(y);
                let mut best = (lo, dist(lo));
                for i in 1..=n {
                    let s = lo + h * i as f64;
                    let d = dist(s);
                    if d < best.1 {
                        best = (s, d);
                    }
                }
                let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
                let g = 0.5 * (5f64.sqrt() - 1.0);
                for _ in 0..80 {
                    let c = b - g * (b - a);
                    let d = a + g * (b - a);
                    if dist(c) < dist(d) {
                        b = d;
                    } else {
                        a = c;
                    }
                }
                dist(0.5 * (a + b)).min(best.1)
            }
        }
    }

    /// Start and end points in chart order.
    pub fn endpoints(&self) -> Result<(Point3, Point3)> {
        let (lo, hi) = self.domain();
        Ok((self.position(lo)?, self.position(hi)?))
    }
}

/// An ordered chain of curve pieces sharing endpoints, e.g. a polyline or a
/// helix closed by a return lead.
#[derive(Debug, Clone)]
pub struct PiecewiseCurve {
    pieces: Vec<CurveSource>,
    closed: bool,
}

/// Tolerance for consecutive pieces to count as joined, relative to the scale
/// of the joint.
const JOIN_TOL: f64 = 1e-9;

impl PiecewiseCurve {
    /// Joins `pieces` end to start. The chain is closed when the last end
    /// meets the first start.
    pub fn from_pieces(pieces: Vec<CurveSource>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::invalid("pieces", "need at least one piece"));
        }
        for w in pieces.windows(2) {
            let (_, end) = w[0].endpoints()?;
            let (start, _) = w[1].endpoints()?;
            if end.distance(start) > JOIN_TOL * (1.0 + end.norm()) {
                return Err(Error::invalid(
                    "pieces",
                    format!("piece ends at {end} but the next starts at {start}"),
                ));
            }
        }
        let (first, _) = pieces[0].endpoints()?;
        let (_, last) = pieces[pieces.len() - 1].endpoints()?;
        let closed = pieces.len() == 1 && pieces[0].is_closed()
            || first.distance(last) <= JOIN_TOL * (1.0 + first.norm());
        Ok(PiecewiseCurve { pieces, closed })
    }

    /// Straight segments through `vertices` carrying `current`; `closed` adds
    /// the segment from the last vertex back to the first.
    pub fn polyline(vertices: &[Point3], current: f64, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::invalid("vertices", "a polyline needs at least two vertices"));
        }
        let mut pieces = Vec::with_capacity(vertices.len());
        for w in vertices.windows(2) {
            pieces.push(CurveSource::segment(w[0], w[1], current)?);
        }
        if closed {
            pieces.push(CurveSource::segment(vertices[vertices.len() - 1], vertices[0], current)?);
        }
        PiecewiseCurve::from_pieces(pieces)
    }

    pub fn pieces(&self) -> &[CurveSource] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn distance_to(&self, y: Point3) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.distance_to(y))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Helix angular wavenumber `P = √(1 − p²)/a`.
pub(crate) fn helix_wavenumber(radius: f64, pitch: f64) -> f64 {
    (1.0 - pitch * pitch).sqrt() / radius
}

pub(crate) fn check_pitch(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "pitch",
            format!("p = {p} must lie in (0, 1) so that a²P² + p² = 1 has a solution P > 0"),
        ))
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be positive and finite")))
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} must be finite")))
    }
}
