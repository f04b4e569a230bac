use std::sync::Arc;

use super::form::{basis_len, Coefficients, FormField, BASIS};
use super::point::{Point3, Vec3};
use crate::error::{Error, Result};

/// Euclidean Hodge star on the lexicographic basis: `HODGE[p][i] = (j, s)`
/// means `#(e^p_i) = s · e^(3-p)_j`.
///
/// With `dx∧dy∧dz = #1` this gives `#dx = dy∧dz`, `#dy = -dx∧dz`,
/// `#dz = dx∧dy` and `## = 1` in every degree.
pub const HODGE: [[(usize, f64); 3]; 4] = [
    [(0, 1.0), (0, 0.0), (0, 0.0)],
    [(2, 1.0), (1, -1.0), (0, 1.0)],
    [(2, 1.0), (1, -1.0), (0, 1.0)],
    [(0, 1.0), (0, 0.0), (0, 0.0)],
];

/// Finite-difference step policy for [`d_numeric`] and friends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    /// The same absolute step everywhere.
    Fixed(f64),
    /// `h = rel · max(1, |x|)` at the evaluation point.
    Relative(f64),
}

impl Default for Step {
    fn default() -> Self {
        Step::Relative(1e-5)
    }
}

impl Step {
    pub fn at(self, p: Point3) -> f64 {
        match self {
            Step::Fixed(h) => h,
            Step::Relative(rel) => rel * p.norm().max(1.0),
        }
    }

    fn validate(self) -> Result<Self> {
        let h = match self {
            Step::Fixed(h) | Step::Relative(h) => h,
        };
        if h > 0.0 && h.is_finite() {
            Ok(self)
        } else {
            Err(Error::invalid("step", format!("{h} must be positive and finite")))
        }
    }
}

fn hodge_coefficients(degree: usize, c: Coefficients) -> Coefficients {
    let mut out = [0.0; 3];
    for (i, &(j, s)) in HODGE[degree].iter().take(basis_len(degree)).enumerate() {
        out[j] = s * c[i];
    }
    out
}

/// The Euclidean Hodge dual; the result has degree `3 - degree(a)`.
pub fn hodge(a: &FormField) -> FormField {
    let p = a.degree();
    a.map_coefficients(3 - p, move |c| hodge_coefficients(p, c))
}

fn basis_position(degree: usize, indices: &[usize]) -> usize {
    BASIS[degree]
        .iter()
        .position(|b| *b == indices)
        .expect("sorted multi-index is a basis element")
}

/// Sign of the permutation that sorts `seq`, or 0 when an index repeats.
pub(crate) fn permutation_sign(seq: &[usize]) -> f64 {
    let mut sign = 1.0;
    for i in 0..seq.len() {
        for j in (i + 1)..seq.len() {
            if seq[i] == seq[j] {
                return 0.0;
            }
            if seq[i] > seq[j] {
                sign = -sign;
            }
        }
    }
    sign
}

/// Pointwise wedge product.
pub fn wedge(a: &FormField, b: &FormField) -> Result<FormField> {
    let (p, q) = (a.degree(), b.degree());
    if p + q > 3 {
        return Ok(FormField::zero(3));
    }
    let (a, b) = (a.clone(), b.clone());
    let time_dependent = a.is_time_dependent() || b.is_time_dependent();
    Ok(FormField::from_parts(
        p + q,
        time_dependent,
        Arc::new(move |x, t| {
            let (ca, cb) = (a.eval(x, t)?, b.eval(x, t)?);
            let mut out = [0.0; 3];
            for (i, ia) in BASIS[p].iter().enumerate() {
                for (j, jb) in BASIS[q].iter().enumerate() {
                    let seq: Vec<usize> = ia.iter().chain(jb.iter()).copied().collect();
                    let s = permutation_sign(&seq);
                    if s != 0.0 {
                        let mut sorted = seq.clone();
                        sorted.sort_unstable();
                        out[basis_position(p + q, &sorted)] += s * ca[i] * cb[j];
                    }
                }
            }
            Ok(out)
        }),
    ))
}

/// Central-difference partials `∂_j c_i` for all coefficients and directions.
fn partials(a: &FormField, x: Point3, t: f64, h: f64) -> Result<[Coefficients; 3]> {
    let mut out = [[0.0; 3]; 3];
    for (j, e) in [Vec3::X, Vec3::Y, Vec3::Z].into_iter().enumerate() {
        let fwd = a.eval(x + e * h, t)?;
        let bwd = a.eval(x - e * h, t)?;
        for i in 0..3 {
            out[j][i] = (fwd[i] - bwd[i]) / (2.0 * h);
        }
    }
    Ok(out)
}

/// Exterior derivative with second-order central differences.
///
/// The derivative of a 3-form is identically zero on R³; it is returned as
/// the zero 3-form.
pub fn d_numeric(a: &FormField, step: Step) -> Result<FormField> {
    let step = step.validate()?;
    let p = a.degree();
    if p == 3 {
        return Ok(FormField::zero(3));
    }
    let a = a.clone();
    let time_dependent = a.is_time_dependent();
    Ok(FormField::from_parts(
        p + 1,
        time_dependent,
        Arc::new(move |x, t| {
            let d = partials(&a, x, t, step.at(x))?;
            let mut out = [0.0; 3];
            // d(a_I dx^I) = Σ_j ∂_j a_I dx^j ∧ dx^I, and dx^j ∧ dx^I = (-1)^k dx^J
            // where k is the position of j inside the sorted J = {j} ∪ I.
            for (jx, target) in BASIS[p + 1].iter().enumerate() {
                for (k, &j) in target.iter().enumerate() {
                    let rest: Vec<usize> = target.iter().copied().filter(|&i| i != j).collect();
                    let src = basis_position(p, &rest);
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    out[jx] += sign * d[j][src];
                }
            }
            Ok(out)
        }),
    ))
}

/// Codifferential `δ = # d # η`.
///
/// The codifferential of a 0-form is the zero 0-form.
pub fn codifferential(a: &FormField, step: Step) -> Result<FormField> {
    if a.degree() == 0 {
        step.validate()?;
        return Ok(FormField::zero(0));
    }
    Ok(hodge(&d_numeric(&hodge(&a.eta()), step)?))
}

/// Hodge–de Rham operator `Δ = dδ + δd`, equal to minus the componentwise
/// Laplacian in Cartesian coordinates.
pub fn hodge_laplacian(a: &FormField, step: Step) -> Result<FormField> {
    let d_delta = match a.degree() {
        0 => FormField::zero(0),
        _ => d_numeric(&codifferential(a, step)?, step)?,
    };
    let delta_d = match a.degree() {
        3 => FormField::zero(3),
        _ => codifferential(&d_numeric(a, step)?, step)?,
    };
    d_delta.linear_combination(1.0, &delta_d, 1.0)
}

/// Central difference in the time parameter.
pub fn time_derivative(a: &FormField, dt: f64) -> Result<FormField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::invalid("dt", format!("{dt} must be positive and finite")));
    }
    if !a.is_time_dependent() {
        return Ok(FormField::zero(a.degree()));
    }
    let a = a.clone();
    Ok(FormField::from_parts(
        a.degree(),
        true,
        Arc::new(move |x, t| {
            let (f, b) = (a.eval(x, t + dt)?, a.eval(x, t - dt)?);
            Ok([0, 1, 2].map(|i| (f[i] - b[i]) / (2.0 * dt)))
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const P: Vec3 = Vec3::new(0.3, -0.7, 1.1);

    fn poly_scalar() -> FormField {
        FormField::scalar(|p| Ok(p.x * p.x * p.y + p.y * p.z * p.z - 2.0 * p.x * p.z + p.z))
    }

    fn poly_one_form() -> FormField {
        FormField::one_form(|p| {
            Ok(Vec3::new(
                p.y * p.z + p.x * p.x,
                p.x * p.x * p.z - p.y,
                p.x * p.y * p.y + 3.0 * p.z * p.z,
            ))
        })
    }

    #[test]
    fn hodge_table_matches_permutation_parity() {
        for p in 0..=3 {
            for (i, idx) in BASIS[p].iter().enumerate() {
                let complement: Vec<usize> = (0..3).filter(|k| !idx.contains(k)).collect();
                let seq: Vec<usize> = idx.iter().chain(&complement).copied().collect();
                let (j, s) = HODGE[p][i];
                assert_eq!(BASIS[3 - p][j], complement.as_slice());
                assert_eq!(s, permutation_sign(&seq), "degree {p} element {idx:?}");
            }
        }
    }

    #[test]
    fn hodge_basis_cases() {
        let one = FormField::scalar(|_| Ok(1.0));
        let vol = hodge(&one);
        assert_eq!(vol.degree(), 3);
        assert_eq!(vol.eval_scalar(P, 0.0).unwrap(), 1.0);

        let dx = FormField::one_form(|_| Ok(Vec3::X));
        let star_dx = hodge(&dx);
        assert_eq!(star_dx.degree(), 2);
        // dy∧dz is the third basis element
        assert_eq!(star_dx.eval(P, 0.0).unwrap(), [0.0, 0.0, 1.0]);

        let dy = FormField::one_form(|_| Ok(Vec3::Y));
        assert_eq!(hodge(&dy).eval(P, 0.0).unwrap(), [0.0, -1.0, 0.0]);
    }

    #[test]
    fn double_hodge_is_identity_exactly() {
        let f_dxdy = FormField::new(2, |p, _| Ok([p.x * p.y + 1.0, 0.0, 0.0])).unwrap();
        for a in [poly_scalar(), poly_one_form(), f_dxdy, hodge(&poly_scalar())] {
            let back = hodge(&hodge(&a));
            assert_eq!(back.degree(), a.degree());
            assert_eq!(back.eval(P, 0.0).unwrap(), a.eval(P, 0.0).unwrap());
        }
    }

    #[test]
    fn d_of_linear_one_form_is_exact() {
        // d(x dy) = dx∧dy
        let a = FormField::one_form(|p| Ok(Vec3::new(0.0, p.x, 0.0)));
        let da = d_numeric(&a, Step::default()).unwrap();
        assert_eq!(da.degree(), 2);
        let c = da.eval(P, 0.0).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-10 && c[1].abs() < 1e-10 && c[2].abs() < 1e-10);
    }

    #[test]
    fn gradient_of_quadratic() {
        let f = FormField::scalar(|p| Ok(p.x * p.x + p.y * p.y));
        let df = d_numeric(&f, Step::default()).unwrap();
        let g = df.eval_vector(Vec3::new(1.0, 0.0, 0.0), 0.0).unwrap();
        assert!((g.x - 2.0).abs() < 1e-9);
        assert!(g.y.abs() < 1e-9 && g.z.abs() < 1e-9);
    }

    #[test]
    fn d_of_three_form_is_zero_three_form() {
        let vol = hodge(&poly_scalar());
        let d = d_numeric(&vol, Step::default()).unwrap();
        assert_eq!(d.degree(), 3);
        assert_eq!(d.eval_scalar(P, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn codifferential_of_radial_one_form() {
        // δ(x dx + y dy + z dz) = #d#η a = -div a = -3
        let a = FormField::one_form(Ok);
        let da = codifferential(&a, Step::default()).unwrap();
        assert_eq!(da.degree(), 0);
        assert!((da.eval_scalar(P, 0.0).unwrap() + 3.0).abs() < 1e-9);
    }

    #[test]
    fn codifferential_of_scalar_is_zero() {
        let d = codifferential(&poly_scalar(), Step::default()).unwrap();
        assert_eq!(d.degree(), 0);
        assert_eq!(d.eval_scalar(P, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn d_squared_and_delta_squared_vanish() {
        let h = 1e-3;
        let step = Step::Fixed(h);
        let tol = 10.0 * h * h;
        for a in [poly_scalar(), poly_one_form()] {
            let dd = d_numeric(&d_numeric(&a, step).unwrap(), step).unwrap();
            let scale = a.eval(P, 0.0).unwrap().iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for v in dd.eval(P, 0.0).unwrap() {
                assert!(v.abs() <= tol * scale, "dd = {v}");
            }
        }
        let two = d_numeric(&poly_one_form(), step).unwrap();
        for a in [poly_one_form(), two] {
            let dd = codifferential(&codifferential(&a, step).unwrap(), step).unwrap();
            for v in dd.eval(P, 0.0).unwrap() {
                assert!(v.abs() <= tol * 10.0, "δδ = {v}");
            }
        }
    }

    #[test]
    fn hodge_laplacian_is_minus_componentwise_laplacian() {
        // a = (x²y, yz², x³) ⇒ ∇²a = (2y, 2y, 6x)
        let a = FormField::one_form(|p| Ok(Vec3::new(p.x * p.x * p.y, p.y * p.z * p.z, p.x.powi(3))));
        let lap = hodge_laplacian(&a, Step::Fixed(1e-3)).unwrap();
        let got = lap.eval_vector(P, 0.0).unwrap();
        let want = -Vec3::new(2.0 * P.y, 2.0 * P.y, 6.0 * P.x);
        assert!(got.distance(want) < 1e-4, "{got} vs {want}");

        let f = FormField::scalar(|p| Ok(p.x * p.x * p.y + p.z.powi(3)));
        let lf = hodge_laplacian(&f, Step::Fixed(1e-3)).unwrap();
        let want = -(2.0 * P.y + 6.0 * P.z);
        assert!((lf.eval_scalar(P, 0.0).unwrap() - want).abs() < 1e-4);
    }

    #[test]
    fn wedge_of_basis_one_forms() {
        let dx = FormField::one_form(|_| Ok(Vec3::X));
        let dy = FormField::one_form(|_| Ok(Vec3::Y));
        let dz = FormField::one_form(|_| Ok(Vec3::Z));
        assert_eq!(wedge(&dx, &dy).unwrap().eval(P, 0.0).unwrap(), [1.0, 0.0, 0.0]);
        assert_eq!(wedge(&dy, &dx).unwrap().eval(P, 0.0).unwrap(), [-1.0, 0.0, 0.0]);
        let dxdydz = wedge(&wedge(&dx, &dy).unwrap(), &dz).unwrap();
        assert_eq!(dxdydz.degree(), 3);
        assert_eq!(dxdydz.eval_scalar(P, 0.0).unwrap(), 1.0);
        // a ∧ #a = |a|² #1
        let a = poly_one_form();
        let aa = wedge(&a, &hodge(&a)).unwrap().eval_scalar(P, 0.0).unwrap();
        let v = a.eval_vector(P, 0.0).unwrap();
        assert!((aa - v.norm_squared()).abs() < 1e-12);
    }

    #[test]
    fn singular_stencil_is_reported() {
        let f = FormField::scalar(|p| {
            if p.norm() < 1e-3 {
                Err(Error::OnSupport { distance: p.norm() })
            } else {
                Ok(1.0 / p.norm())
            }
        });
        let df = d_numeric(&f, Step::Fixed(1e-2)).unwrap();
        assert!(matches!(
            df.eval(Vec3::new(0.0, 0.0, 0.0105), 0.0),
            Err(Error::OnSupport { .. })
        ));
        assert!(d_numeric(&f, Step::Fixed(0.0)).is_err());
    }

    #[test]
    fn time_derivative_of_static_form_is_zero() {
        let d = time_derivative(&poly_scalar(), 1e-3).unwrap();
        assert_eq!(d.eval_scalar(P, 1.0).unwrap(), 0.0);
        let moving = FormField::scalar_t(|p, t| Ok(p.x * t * t));
        let d = time_derivative(&moving, 1e-3).unwrap();
        assert!((d.eval_scalar(P, 2.0).unwrap() - 4.0 * P.x).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn hodge_is_pointwise_linear(alpha in -3.0..3.0f64, beta in -3.0..3.0f64,
                                     x in -2.0..2.0f64, y in -2.0..2.0f64, z in -2.0..2.0f64) {
            let a = poly_one_form();
            let b = FormField::one_form(|p| Ok(Vec3::new(p.z, p.x * p.y, -p.x)));
            let lhs = hodge(&a.linear_combination(alpha, &b, beta).unwrap());
            let rhs = hodge(&a).linear_combination(alpha, &hodge(&b), beta).unwrap();
            let p = Vec3::new(x, y, z);
            let (l, r) = (lhs.eval(p, 0.0).unwrap(), rhs.eval(p, 0.0).unwrap());
            for i in 0..3 {
                prop_assert!((l[i] - r[i]).abs() <= 1e-12 * (1.0 + l[i].abs()));
            }
        }
    }
}
