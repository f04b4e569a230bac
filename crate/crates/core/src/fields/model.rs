//! A superposition of sources in one medium, with potentials, fields and
//! residuals at arbitrary spacetime points.

use std::sync::{Arc, Mutex};

use super::{
    coulomb_potential, curve_potential, derive_b, dipole_potential, gauge_residual,
    lienard_wiechert, lorenz_residual, piecewise_potential, solenoid_potential_with, Diagnostics,
    InnerMethod, MediumConstants, PlateWire, PotentialResult, Residual,
};
use crate::error::{Error, Result};
use crate::exterior3::{d_numeric, time_derivative, FormField, Point3, Step, Vec3};
use crate::quad::QuadConfig;
use crate::sources::{CurveGeometry, CurveSource, DipoleSource, PiecewiseCurve, PointSource, SurfaceSource, Trajectory};

/// Default relative tolerance of the retarded-time solver.
pub const RETARDED_TOL: f64 = 1e-12;

/// Fields from surface sources are refused within this many finite-difference
/// steps of the sheet.
const SHEET_GUARD_STEPS: f64 = 3.0;

#[derive(Debug, Clone)]
pub enum FieldSource {
    /// Loop, helix or segment.
    Curve(CurveSource),
    /// Chain of curve pieces, e.g. a polyline or a helix with a return lead.
    Piecewise(PiecewiseCurve),
    Solenoid(SurfaceSource),
    PlateWire(PlateWire),
    PointCharge(PointSource),
    Dipole(DipoleSource),
}

impl FieldSource {
    fn potential(
        &self,
        y: Point3,
        t: f64,
        medium: &MediumConstants,
        cfg: &QuadConfig,
        retarded_tol: f64,
    ) -> Result<PotentialResult> {
        match self {
            FieldSource::Curve(c) => curve_potential(c, y, medium, cfg),
            FieldSource::Piecewise(c) => piecewise_potential(c, y, medium, cfg),
            FieldSource::Solenoid(s) => solenoid_potential_with(s, y, medium, cfg, InnerMethod::ClosedForm),
            FieldSource::PlateWire(w) => w.potential(y, medium, cfg),
            FieldSource::PointCharge(q) => match q.trajectory {
                Trajectory::Static(x) => Ok(PotentialResult::electric(
                    coulomb_potential(q.charge, x, y, medium)?,
                    Diagnostics::exact(),
                )),
                _ => lienard_wiechert(q, y, t, medium, retarded_tol),
            },
            FieldSource::Dipole(d) => Ok(PotentialResult::electric(
                dipole_potential(d, y, medium)?,
                Diagnostics::exact(),
            )),
        }
    }

    /// Length on which the potential varies near `y`: the smaller of the
    /// source's own size and the distance to its support.
    fn length_scale(&self, y: Point3, t: f64) -> f64 {
        let curve_size = |c: &CurveSource| match c.geometry() {
            CurveGeometry::Loop { radius, .. } | CurveGeometry::Helix { radius, .. } => radius,
            CurveGeometry::Segment { start, end } => start.distance(end),
        };
        match self {
            FieldSource::Curve(c) => curve_size(c).min(c.distance_to(y)),
            FieldSource::Piecewise(c) => c
                .pieces()
                .iter()
                .map(curve_size)
                .fold(f64::INFINITY, f64::min)
                .min(c.distance_to(y)),
            // sheets are guarded by distance instead, see `step_checked`
            FieldSource::Solenoid(s) => s.radius,
            FieldSource::PlateWire(w) => {
                let d = (y.x - w.x0).hypot(y.z - w.z0);
                let to_plate = y.z.min(w.separation - y.z).max(0.0);
                // the potential is smooth across the plates; only the wire and
                // the slab thickness set the scale, but stencils must stay inside
                w.separation.min(d).min(if to_plate > 0.0 { to_plate } else { w.separation })
            }
            FieldSource::PointCharge(q) => q.state(t).0.distance(y),
            FieldSource::Dipole(d) => d.location.distance(y),
        }
    }

    fn is_time_dependent(&self) -> bool {
        matches!(self, FieldSource::PointCharge(q) if !matches!(q.trajectory, Trajectory::Static(_)))
    }
}

/// Which derived quantities [`FieldModel::evaluate`] computes besides `A`, `φ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Quantities {
    pub b: bool,
    pub e: bool,
    pub residuals: bool,
}

/// Everything computed at one spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValues {
    pub a: Vec3,
    pub phi: f64,
    pub b: Option<Vec3>,
    pub e: Option<Vec3>,
    /// Error estimates of `b` and `e`, in their units.
    pub b_error: Option<f64>,
    pub e_error: Option<f64>,
    /// `δA` against the divergence scale.
    pub gauge: Option<Residual>,
    /// `δA − εμ ∂φ/∂t`; present when the scene has moving charges.
    pub lorenz: Option<Residual>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone)]
pub struct FieldModel {
    pub sources: Vec<FieldSource>,
    pub medium: MediumConstants,
    pub cfg: QuadConfig,
    pub retarded_tol: f64,
}

/// Collects diagnostics from every potential evaluation behind a stencil:
/// evaluations add up, convergence must hold everywhere, and the error is the
/// worst single-point estimate.
#[derive(Clone, Default)]
struct Tally(Arc<Mutex<Option<Diagnostics>>>);

impl Tally {
    fn record(&self, d: Diagnostics) {
        let mut g = self.0.lock().unwrap_or_else(|e| e.into_inner());
        *g = Some(match g.take() {
            None => d,
            Some(prev) => Diagnostics {
                error_estimate: prev.error_estimate.max(d.error_estimate),
                evaluations: prev.evaluations + d.evaluations,
                converged: prev.converged && d.converged,
            },
        });
    }

    fn take(&self) -> Diagnostics {
        self.0
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .take()
            .unwrap_or_default()
    }
}

/// Combines central differences at steps `h` and `2h` into a fourth-order
/// value. The error estimate is the step-doubling difference plus the
/// potential's quadrature error (recorded in `d`) amplified by the stencil.
fn richardson(fine: Vec3, coarse: Vec3, h: f64, mut d: Diagnostics) -> (Vec3, Diagnostics) {
    let value = (fine * 4.0 - coarse) * (1.0 / 3.0);
    d.error_estimate = (fine - coarse).norm() / 3.0 + 2.0 * d.error_estimate / h;
    (value, d)
}

impl FieldModel {
    pub fn new(sources: Vec<FieldSource>, medium: MediumConstants, cfg: QuadConfig) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::invalid("sources", "need at least one source"));
        }
        medium.validate()?;
        cfg.validate()?;
        Ok(FieldModel {
            sources,
            medium,
            cfg,
            retarded_tol: RETARDED_TOL,
        })
    }

    pub fn with_retarded_tol(mut self, tol: f64) -> Self {
        self.retarded_tol = tol;
        self
    }

    pub fn is_time_dependent(&self) -> bool {
        self.sources.iter().any(FieldSource::is_time_dependent)
    }

    /// Superposed `A` and `φ` at `(y, t)`.
    pub fn potential(&self, y: Point3, t: f64) -> Result<PotentialResult> {
        let mut total = PotentialResult::zero();
        for s in &self.sources {
            total = total.add(s.potential(y, t, &self.medium, &self.cfg, self.retarded_tol)?);
        }
        Ok(total)
    }

    /// Finite-difference step matched to the quadrature tolerance at `(y, t)`.
    pub fn step_at(&self, y: Point3, t: f64) -> f64 {
        let scale = self
            .sources
            .iter()
            .map(|s| s.length_scale(y, t))
            .fold(f64::INFINITY, f64::min);
        super::matched_step(&self.cfg, scale).at(y)
    }

    fn step_checked(&self, y: Point3, t: f64) -> Result<f64> {
        let h = self.step_at(y, t);
        for s in &self.sources {
            match s {
                FieldSource::Solenoid(sheet) => {
                    let distance = sheet.distance_to(y);
                    if distance < SHEET_GUARD_STEPS * h {
                        return Err(Error::OnSupport { distance });
                    }
                }
                FieldSource::PlateWire(w) if !(y.z > 0.0 && y.z < w.separation) => {
                    return Err(Error::invalid(
                        "y",
                        format!(
                            "z = {} is not strictly inside the slab 0 < z < {}; derived fields need \
                             a centred stencil",
                            y.z, w.separation
                        ),
                    ));
                }
                _ => {}
            }
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::OnSupport { distance: 0.0 });
        }
        Ok(h)
    }

    fn a_form(&self, tally: &Tally) -> FormField {
        let (model, tally) = (self.clone(), tally.clone());
        let f = FormField::one_form_t(move |p, t| {
            let r = model.potential(p, t)?;
            tally.record(r.diagnostics);
            Ok(r.a)
        });
        if self.is_time_dependent() { f } else { f.static_in_time() }
    }

    fn phi_form(&self, tally: &Tally) -> FormField {
        let (model, tally) = (self.clone(), tally.clone());
        let f = FormField::scalar_t(move |p, t| {
            let r = model.potential(p, t)?;
            tally.record(r.diagnostics);
            Ok(r.phi)
        });
        if self.is_time_dependent() { f } else { f.static_in_time() }
    }

    /// The 1-form `A` as a field, for use with the exterior-calculus operators.
    pub fn vector_potential_form(&self) -> FormField {
        self.a_form(&Tally::default())
    }

    /// The 0-form `φ` as a field.
    pub fn scalar_potential_form(&self) -> FormField {
        self.phi_form(&Tally::default())
    }

    /// Sums a derived field over the sources, each differentiated with its
    /// own matched step so that the result is linear in the sources.
    fn per_source(
        &self,
        y: Point3,
        t: f64,
        f: impl Fn(&FieldModel, Point3, f64) -> Result<(Vec3, Diagnostics)>,
    ) -> Result<(Vec3, Diagnostics)> {
        if self.sources.len() == 1 {
            return f(self, y, t);
        }
        let mut total = (Vec3::ZERO, Diagnostics::exact());
        for s in &self.sources {
            let single = FieldModel {
                sources: vec![s.clone()],
                medium: self.medium,
                cfg: self.cfg,
                retarded_tol: self.retarded_tol,
            };
            let (v, d) = f(&single, y, t)?;
            total = (total.0 + v, total.1.merge(d));
        }
        Ok(total)
    }

    /// `B = #dA` (tesla), summed over sources.
    pub fn magnetic_field(&self, y: Point3, t: f64) -> Result<(Vec3, Diagnostics)> {
        self.per_source(y, t, Self::magnetic_field_single)
    }

    /// `E = −dφ − ∂A/∂t` (V/m), summed over sources.
    pub fn electric_field(&self, y: Point3, t: f64) -> Result<(Vec3, Diagnostics)> {
        self.per_source(y, t, Self::electric_field_single)
    }

    /// `B = #dA` with the matched step.
    fn magnetic_field_single(&self, y: Point3, t: f64) -> Result<(Vec3, Diagnostics)> {
        let h = self.step_checked(y, t)?;
        let tally = Tally::default();
        let a = self.a_form(&tally);
        let fine = derive_b(&a, Step::Fixed(h))?.eval_vector(y, t)?;
        let coarse = derive_b(&a, Step::Fixed(2.0 * h))?.eval_vector(y, t)?;
        Ok(richardson(fine, coarse, h, tally.take()))
    }

    /// `E = −dφ − ∂A/∂t` with time step `h/c`.
    fn electric_field_single(&self, y: Point3, t: f64) -> Result<(Vec3, Diagnostics)> {
        let h = self.step_checked(y, t)?;
        let (phi_tally, a_tally) = (Tally::default(), Tally::default());
        let (phi, a) = (self.phi_form(&phi_tally), self.a_form(&a_tally));
        let c = self.medium.c();
        let e = |h: f64| -> Result<Vec3> {
            let grad = d_numeric(&phi, Step::Fixed(h))?.eval_vector(y, t)?;
            let a_dot = time_derivative(&a, h / c)?.eval_vector(y, t)?;
            Ok(-grad - a_dot)
        };
        let (fine, coarse) = (e(h)?, e(2.0 * h)?);
        let (dp, da) = (phi_tally.take(), a_tally.take());
        // the time step is h/c, so A's quadrature error enters with weight c
        let d = Diagnostics {
            error_estimate: dp.error_estimate + c * da.error_estimate,
            evaluations: dp.evaluations + da.evaluations,
            converged: dp.converged && da.converged,
        };
        Ok(richardson(fine, coarse, h, d))
    }

    pub fn gauge_residual(&self, y: Point3, t: f64) -> Result<Residual> {
        let h = self.step_checked(y, t)?;
        gauge_residual(&self.vector_potential_form(), y, t, Step::Fixed(h))
    }

    pub fn lorenz_residual(&self, y: Point3, t: f64) -> Result<Residual> {
        let h = self.step_checked(y, t)?;
        lorenz_residual(
            &self.vector_potential_form(),
            &self.scalar_potential_form(),
            y,
            t,
            &self.medium,
            Step::Fixed(h),
        )
    }

    /// Potentials plus the requested derived quantities at `(y, t)`.
    pub fn evaluate(&self, y: Point3, t: f64, want: Quantities) -> Result<FieldValues> {
        let pot = self.potential(y, t)?;
        let mut diag = pot.diagnostics;
        let mut out = FieldValues {
            a: pot.a,
            phi: pot.phi,
            b: None,
            e: None,
            b_error: None,
            e_error: None,
            gauge: None,
            lorenz: None,
            diagnostics: diag,
        };
        if want.b {
            let (b, d) = self.magnetic_field(y, t)?;
            out.b = Some(b);
            out.b_error = Some(d.error_estimate);
            diag.converged &= d.converged;
            diag.evaluations += d.evaluations;
        }
        if want.e {
            let (e, d) = self.electric_field(y, t)?;
            out.e = Some(e);
            out.e_error = Some(d.error_estimate);
            diag.converged &= d.converged;
            diag.evaluations += d.evaluations;
        }
        if want.residuals {
            out.gauge = Some(self.gauge_residual(y, t)?);
            if self.is_time_dependent() {
                out.lorenz = Some(self.lorenz_residual(y, t)?);
            }
        }
        out.diagnostics = diag;
        Ok(out)
    }
}
