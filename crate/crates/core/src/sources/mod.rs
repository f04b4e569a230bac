//! Singular sources described by a foliation, a Leray form and a direction
//! field.
//!
//! A submanifold `Σ = {f₁ = … = f_k = 0}` carries the Leray measure `Ω_f`
//! defined by `⋆1 = df₁ ∧ … ∧ df_k ∧ Ω_f`. For mutually orthogonal leaves
//! `Ω_f = ⋆(df₁ ∧ … ∧ df_k) / Π|df_j|²`, which is what
//! [`leray_weight_orthogonal`] evaluates. Line currents are
//! `Ĭ = I₀ · i_W ω_f` and sheet currents `κ̆ = κ₀ · i_W Ω_f`.
//!
//! `Ω_f` is only defined up to multiples of the `df_j`, and its overall sign
//! depends on the ordering of the `f_j`. Sources here fix the orientation so
//! that the chart measure `Ω⁺(∂σ)` (or `Ω⁺(∂σ, ∂ρ)`) is positive, which makes
//! a positive density a current flowing towards increasing chart parameter.

mod curve;
mod point;
mod surface;

pub use curve::{CurveGeometry, CurveSource, PiecewiseCurve, Reparametrization};
pub use point::{DipoleSource, PointSource, Trajectory};
pub use surface::SurfaceSource;

use crate::error::{Error, Result};
use crate::exterior3::Vec3;

/// Relative tolerance on `|∇f_i · ∇f_j| / (|∇f_i||∇f_j|)` for leaves to count
/// as orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;

/// A Leray form on R³ stored through its Euclidean dual vector: a 1-form
/// `v · dx`, a 2-form `⋆(v · dx)`, or a 0-form `v.x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LerayForm {
    /// Codimension of the leaf (number of foliation functions).
    pub codimension: usize,
    /// Dual vector (for codimension 3, the scalar lives in `x`).
    pub dual: Vec3,
}

impl LerayForm {
    /// `ω_f(t)` for a tangent `t` of a curve leaf.
    pub fn on_curve(&self, t: Vec3) -> Result<f64> {
        self.expect_codimension(2)?;
        Ok(self.dual.dot(t))
    }

    /// `Ω_f(t₁, t₂)` for tangents of a surface leaf.
    pub fn on_surface(&self, t1: Vec3, t2: Vec3) -> Result<f64> {
        self.expect_codimension(1)?;
        Ok(self.dual.dot(t1.cross(t2)))
    }

    /// Another representative of the same Leray class: `Ω + c·df` for a curve
    /// leaf, or `Ω + df ∧ β` for a surface leaf (with `β` the 1-form dual to
    /// `beta`). Both agree with `Ω` on the leaf.
    pub fn add_gauge(&self, df: Vec3, c: f64, beta: Vec3) -> LerayForm {
        let shift = match self.codimension {
            2 => df * c,
            1 => df.cross(beta) * c,
            _ => Vec3::ZERO,
        };
        LerayForm {
            codimension: self.codimension,
            dual: self.dual + shift,
        }
    }

    fn expect_codimension(&self, k: usize) -> Result<()> {
        if self.codimension == k {
            Ok(())
        } else {
            Err(Error::invalid(
                "leray",
                format!("form of codimension {} used on a leaf of codimension {k}", self.codimension),
            ))
        }
    }
}

/// Leray form `⋆(df₁ ∧ … ∧ df_k)/Π|df_j|²` of an orthogonal foliation at a
/// point, from the gradients `∇f_j` there (`k = 1, 2, 3`).
///
/// The sign is the one the formula gives, i.e. each normal points towards
/// increasing `f_j` in the listed order; sources choose their orientation on
/// top of this.
pub fn leray_weight_orthogonal(gradients: &[Vec3]) -> Result<LerayForm> {
    let k = gradients.len();
    if !(1..=3).contains(&k) {
        return Err(Error::DegenerateFoliation(format!(
            "need 1 to 3 foliation gradients, got {k}"
        )));
    }
    let mut norms = [0.0; 3];
    for (i, g) in gradients.iter().enumerate() {
        let n = g.norm();
        if !(n > 0.0) || !g.is_finite() {
            return Err(Error::DegenerateFoliation(format!("gradient {i} vanishes")));
        }
        norms[i] = n;
    }
    for i in 0..k {
        for j in i + 1..k {
            let c = gradients[i].dot(gradients[j]) / (norms[i] * norms[j]);
            if c.abs() > ORTHOGONALITY_TOL {
                return Err(Error::DegenerateFoliation(format!(
                    "gradients {i} and {j} are not orthogonal (cosine {c:e}); \
                     non-orthogonal leaves are unsupported"
                )));
            }
        }
    }
    let denom: f64 = norms[..k].iter().map(|n| n * n).product();
    let dual = match k {
        1 => gradients[0] / denom,
        2 => gradients[0].cross(gradients[1]) / denom,
        _ => Vec3::new(gradients[0].dot(gradients[1].cross(gradients[2])) / denom, 0.0, 0.0),
    };
    Ok(LerayForm {
        codimension: k,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cyl_basis(phi: f64) -> (Vec3, Vec3) {
        let (s, c) = phi.sin_cos();
        (Vec3::new(c, s, 0.0), Vec3::new(-s, c, 0.0))
    }

    #[test]
    fn loop_weight_is_a_per_unit_angle() {
        // f = (r − a, z); the right-handed formula gives Ω = −r dφ, so the
        // raw weight is −a per unit φ and the oriented measure is a dφ
        let a = 0.7;
        for phi in [0.0, 1.0, 2.5, -2.0] {
            let (er, ephi) = cyl_basis(phi);
            let form = leray_weight_orthogonal(&[er, Vec3::Z]).unwrap();
            let w = form.on_curve(ephi * a).unwrap();
            assert!((w + a).abs() < 1e-15);
            assert!((w.abs() - a).abs() < 1e-15);
        }
    }

    #[test]
    fn helix_weight_is_minus_a_per_unit_angle() {
        // f = (r − a, z − (p/P)φ); on the helix dφ/dσ = P
        let (a, p) = (0.5_f64, 0.3_f64);
        let big_p = (1.0 - p * p).sqrt() / a;
        let phi = 0.8;
        let (er, ephi) = cyl_basis(phi);
        let g2 = Vec3::Z - ephi * (p / (big_p * a));
        let form = leray_weight_orthogonal(&[er, g2]).unwrap();
        let tangent = ephi * (a * big_p) + Vec3::Z * p;
        let per_sigma = form.on_curve(tangent).unwrap();
        assert!((per_sigma / big_p + a).abs() < 1e-14);
    }

    #[test]
    fn cylinder_weight_is_a_per_unit_area_chart() {
        let a = 1.3;
        let phi = 2.0;
        let (er, ephi) = cyl_basis(phi);
        let form = leray_weight_orthogonal(&[er * 1.0]).unwrap();
        let w = form.on_surface(ephi * a, Vec3::Z).unwrap();
        assert!((w - a).abs() < 1e-15);
    }

    #[test]
    fn scaling_a_foliation_function_rescales_the_form() {
        // f → 2f halves Ω so that df ∧ Ω stays the volume form
        let base = leray_weight_orthogonal(&[Vec3::X, Vec3::Y]).unwrap();
        let scaled = leray_weight_orthogonal(&[Vec3::X * 2.0, Vec3::Y]).unwrap();
        assert!((scaled.dual * 2.0).distance(base.dual) < 1e-15);
        assert_eq!(base.dual, Vec3::Z);
    }

    #[test]
    fn degenerate_foliations() {
        assert!(matches!(
            leray_weight_orthogonal(&[Vec3::X, Vec3::ZERO]),
            Err(Error::DegenerateFoliation(_))
        ));
        assert!(matches!(
            leray_weight_orthogonal(&[Vec3::X, Vec3::new(1.0, 1.0, 0.0)]),
            Err(Error::DegenerateFoliation(_))
        ));
        assert!(leray_weight_orthogonal(&[]).is_err());
    }

    #[test]
    fn point_leaf_weight_is_inverse_gradient_volume() {
        let f = leray_weight_orthogonal(&[Vec3::X * 2.0, Vec3::Y, Vec3::Z * 0.5]).unwrap();
        assert!((f.dual.x - 1.0).abs() < 1e-15);
    }

    #[test]
    fn gauge_shift_is_invisible_on_the_leaf() {
        let phi = PI / 5.0;
        let (er, ephi) = cyl_basis(phi);
        let curve = leray_weight_orthogonal(&[er, Vec3::Z]).unwrap();
        for (df, c) in [(er, 3.0), (Vec3::Z, -1.7)] {
            let shifted = curve.add_gauge(df, c, Vec3::ZERO);
            assert!((shifted.on_curve(ephi).unwrap() - curve.on_curve(ephi).unwrap()).abs() < 1e-15);
        }
        let sheet = leray_weight_orthogonal(&[er]).unwrap();
        let shifted = sheet.add_gauge(er, 2.0, Vec3::new(0.3, -1.0, 0.4));
        let (t1, t2) = (ephi, Vec3::Z);
        assert!((shifted.on_surface(t1, t2).unwrap() - sheet.on_surface(t1, t2).unwrap()).abs() < 1e-15);
    }
}
