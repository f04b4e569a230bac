use std::fmt;
use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

/// A vector in Euclidean R³ with Cartesian components (meters for positions).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Positions share the vector representation.
pub type Point3 = Vec3;

/// Cylindrical polar view `(r, φ, z)` of a point, with `φ` in `(-π, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cylindrical {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_cylindrical(r: f64, phi: f64, z: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Vec3::new(r * c, r * s, z)
    }

    pub fn cylindrical(self) -> Cylindrical {
        Cylindrical {
            r: self.x.hypot(self.y),
            phi: self.y.atan2(self.x),
            z: self.z,
        }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y).hypot(self.z)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Components in the local cylindrical frame `(e_r, e_φ, e_z)` at azimuth `phi`.
    pub fn to_cylindrical_components(self, phi: f64) -> Vec3 {
        let (s, c) = phi.sin_cos();
        Vec3::new(c * self.x + s * self.y, -s * self.x + c * self.y, self.z)
    }

    /// Inverse of [`Vec3::to_cylindrical_components`].
    pub fn from_cylindrical_components(rphiz: Vec3, phi: f64) -> Vec3 {
        let (s, c) = phi.sin_cos();
        Vec3::new(
            c * rphiz.x - s * rphiz.y,
            s * rphiz.x + c * rphiz.y,
            rphiz.z,
        )
    }
}

impl Cylindrical {
    pub fn to_cartesian(self) -> Point3 {
        Vec3::from_cylindrical(self.r, self.phi, self.z)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn cylindrical_view_agrees_with_cartesian(x in -10.0..10.0f64, y in -10.0..10.0f64, z in -10.0..10.0f64) {
            let p = Vec3::new(x, y, z);
            let c = p.cylindrical();
            prop_assert!((c.r * c.phi.cos() - x).abs() < 1e-12);
            prop_assert!((c.r * c.phi.sin() - y).abs() < 1e-12);
            prop_assert!(c.to_cartesian().distance(p) < 1e-12);
        }

        #[test]
        fn cylindrical_components_round_trip(x in -5.0..5.0f64, y in -5.0..5.0f64, z in -5.0..5.0f64, phi in -4.0..4.0f64) {
            let v = Vec3::new(x, y, z);
            let back = Vec3::from_cylindrical_components(v.to_cylindrical_components(phi), phi);
            prop_assert!(back.distance(v) < 1e-12);
        }
    }

    #[test]
    fn cross_product_is_right_handed() {
        assert_eq!(Vec3::X.cross(Vec3::Y), Vec3::Z);
        assert_eq!(Vec3::Y.cross(Vec3::Z), Vec3::X);
        assert_eq!(Vec3::Z.cross(Vec3::X), Vec3::Y);
    }
}
