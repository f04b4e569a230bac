use std::fmt;
use std::sync::Arc;

use super::point::{Point3, Vec3};
use crate::error::{Error, Result};

/// Coefficients of a form in the lexicographic basis of its degree.
///
/// Only the first `basis_len(degree)` slots are meaningful; the rest are zero.
pub type Coefficients = [f64; 3];

/// Lexicographically ordered basis multi-indices for each degree, with
/// `0, 1, 2` standing for `dx, dy, dz`.
pub const BASIS: [&[&[usize]]; 4] = [
    &[&[]],
    &[&[0], &[1], &[2]],
    &[&[0, 1], &[0, 2], &[1, 2]],
    &[&[0, 1, 2]],
];

/// Number of independent components of a p-form on R³, i.e. `binomial(3, p)`.
pub const fn basis_len(degree: usize) -> usize {
    match degree {
        0 | 3 => 1,
        1 | 2 => 3,
        _ => 0,
    }
}

type Evaluator = dyn Fn(Point3, f64) -> Result<Coefficients> + Send + Sync;

/// A single component callable, used by [`FormField::from_components`].
pub type Component = Box<dyn Fn(Point3, f64) -> Result<f64> + Send + Sync>;

/// A p-form on Euclidean R³ whose coefficients are callables of `(point, time)`.
///
/// The coefficients are evaluated together so that fields backed by a single
/// quadrature (e.g. a vector potential) are not recomputed per component.
#[derive(Clone)]
pub struct FormField {
    degree: usize,
    time_dependent: bool,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for FormField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormField")
            .field("degree", &self.degree)
            .field("time_dependent", &self.time_dependent)
            .finish_non_exhaustive()
    }
}

impl FormField {
    /// Builds a form from a callable returning all coefficients at once.
    pub fn new<F>(degree: usize, eval: F) -> Result<Self>
    where
        F: Fn(Point3, f64) -> Result<Coefficients> + Send + Sync + 'static,
    {
        if degree > 3 {
            return Err(Error::invalid("degree", format!("{degree} is not in 0..=3")));
        }
        Ok(FormField {
            degree,
            time_dependent: true,
            eval: Arc::new(eval),
        })
    }

    /// Builds a form from one callable per basis multi-index (see [`BASIS`]).
    pub fn from_components(degree: usize, components: Vec<Component>) -> Result<Self> {
        if degree > 3 {
            return Err(Error::invalid("degree", format!("{degree} is not in 0..=3")));
        }
        if components.len() != basis_len(degree) {
            return Err(Error::invalid(
                "components",
                format!(
                    "a {degree}-form on R³ has {} components, got {}",
                    basis_len(degree),
                    components.len()
                ),
            ));
        }
        FormField::new(degree, move |p, t| {
            let mut out = [0.0; 3];
            for (slot, c) in out.iter_mut().zip(&components) {
                *slot = c(p, t)?;
            }
            Ok(out)
        })
    }

    /// A time-independent 0-form.
    pub fn scalar<F>(f: F) -> Self
    where
        F: Fn(Point3) -> Result<f64> + Send + Sync + 'static,
    {
        FormField::new(0, move |p, _| Ok([f(p)?, 0.0, 0.0]))
            .expect("degree 0 is valid")
            .static_in_time()
    }

    /// A time-independent 1-form `v_x dx + v_y dy + v_z dz`.
    pub fn one_form<F>(v: F) -> Self
    where
        F: Fn(Point3) -> Result<Vec3> + Send + Sync + 'static,
    {
        FormField::new(1, move |p, _| Ok(v(p)?.to_array()))
            .expect("degree 1 is valid")
            .static_in_time()
    }

    /// A time-dependent 1-form.
    pub fn one_form_t<F>(v: F) -> Self
    where
        F: Fn(Point3, f64) -> Result<Vec3> + Send + Sync + 'static,
    {
        FormField::new(1, move |p, t| Ok(v(p, t)?.to_array())).expect("degree 1 is valid")
    }

    /// A time-dependent 0-form.
    pub fn scalar_t<F>(f: F) -> Self
    where
        F: Fn(Point3, f64) -> Result<f64> + Send + Sync + 'static,
    {
        FormField::new(0, move |p, t| Ok([f(p, t)?, 0.0, 0.0])).expect("degree 0 is valid")
    }

    pub fn zero(degree: usize) -> Self {
        FormField::new(degree.min(3), |_, _| Ok([0.0; 3]))
            .expect("clamped degree")
            .static_in_time()
    }

    /// Marks the form as independent of `t`.
    pub fn static_in_time(mut self) -> Self {
        self.time_dependent = false;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_time_dependent(&self) -> bool {
        self.time_dependent
    }

    pub fn len(&self) -> usize {
        basis_len(self.degree)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Evaluates all coefficients, rejecting non-finite values.
    pub fn eval(&self, p: Point3, t: f64) -> Result<Coefficients> {
        let c = (self.eval)(p, t)?;
        if c[..self.len()].iter().all(|v| v.is_finite()) {
            Ok(c)
        } else {
            Err(Error::NonFinite("form coefficient"))
        }
    }

    /// Coefficient of a 0-form or 3-form.
    pub fn eval_scalar(&self, p: Point3, t: f64) -> Result<f64> {
        Ok(self.eval(p, t)?[0])
    }

    /// Coefficients of a 1-form read as a Cartesian vector.
    pub fn eval_vector(&self, p: Point3, t: f64) -> Result<Vec3> {
        Ok(Vec3::from_array(self.eval(p, t)?))
    }

    pub(crate) fn map_coefficients<F>(&self, degree: usize, f: F) -> FormField
    where
        F: Fn(Coefficients) -> Coefficients + Send + Sync + 'static,
    {
        let inner = self.clone();
        FormField {
            degree,
            time_dependent: self.time_dependent,
            eval: Arc::new(move |p, t| Ok(f(inner.eval(p, t)?))),
        }
    }

    /// Pointwise `s · self`.
    pub fn scale(&self, s: f64) -> FormField {
        self.map_coefficients(self.degree, move |c| c.map(|v| s * v))
    }

    /// Pointwise `alpha · self + beta · other`; degrees must agree.
    pub fn linear_combination(&self, alpha: f64, other: &FormField, beta: f64) -> Result<FormField> {
        if self.degree != other.degree {
            return Err(Error::invalid(
                "other",
                format!("cannot add a {}-form to a {}-form", other.degree, self.degree),
            ));
        }
        let (a, b) = (self.clone(), other.clone());
        Ok(FormField {
            degree: self.degree,
            time_dependent: self.time_dependent || other.time_dependent,
            eval: Arc::new(move |p, t| {
                let (x, y) = (a.eval(p, t)?, b.eval(p, t)?);
                Ok([
                    alpha * x[0] + beta * y[0],
                    alpha * x[1] + beta * y[1],
                    alpha * x[2] + beta * y[2],
                ])
            }),
        })
    }

    /// The degree involution `η a = (-1)^p a`.
    pub fn eta(&self) -> FormField {
        if self.degree.is_multiple_of(2) {
            self.clone()
        } else {
            self.scale(-1.0)
        }
    }

    pub(crate) fn from_parts(degree: usize, time_dependent: bool, eval: Arc<Evaluator>) -> Self {
        FormField {
            degree,
            time_dependent,
            eval,
        }
    }
}
