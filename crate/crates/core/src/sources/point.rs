use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior3::{Point3, Vec3};

/// Worldline of a point charge.
#[derive(Clone)]
pub enum Trajectory {
    Static(Point3),
    /// `x(t) = x0 + v t`.
    Uniform { x0: Point3, v: Vec3 },
    /// Arbitrary worldline returning `(x(t), v(t))`; `max_speed` bounds `|v|`
    /// over all times and is checked against the wave speed.
    Custom {
        eval: Arc<dyn Fn(f64) -> (Point3, Vec3) + Send + Sync>,
        max_speed: f64,
    },
}

impl fmt::Debug for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trajectory::Static(x) => f.debug_tuple("Static").field(x).finish(),
            Trajectory::Uniform { x0, v } => f.debug_struct("Uniform").field("x0", x0).field("v", v).finish(),
            Trajectory::Custom { max_speed, .. } => f
                .debug_struct("Custom")
                .field("max_speed", max_speed)
                .finish_non_exhaustive(),
        }
    }
}

/// A moving point charge `q` (coulombs).
#[derive(Debug, Clone)]
pub struct PointSource {
    pub charge: f64,
    pub trajectory: Trajectory,
}

impl PointSource {
    pub fn new(charge: f64, trajectory: Trajectory) -> Result<Self> {
        if !charge.is_finite() {
            return Err(Error::invalid("charge", "must be finite"));
        }
        match &trajectory {
            Trajectory::Static(x) if !x.is_finite() => {
                return Err(Error::invalid("position", "must be finite"))
            }
            Trajectory::Uniform { x0, v } if !(x0.is_finite() && v.is_finite()) => {
                return Err(Error::invalid("trajectory", "must be finite"))
            }
            Trajectory::Custom { max_speed, .. } if !(*max_speed >= 0.0) => {
                return Err(Error::invalid("max_speed", "must be non-negative"))
            }
            _ => {}
        }
        Ok(PointSource { charge, trajectory })
    }

    pub fn stationary(charge: f64, at: Point3) -> Result<Self> {
        PointSource::new(charge, Trajectory::Static(at))
    }

    pub fn uniform(charge: f64, x0: Point3, v: Vec3) -> Result<Self> {
        PointSource::new(charge, Trajectory::Uniform { x0, v })
    }

    /// `(x(t), v(t))`.
    pub fn state(&self, t: f64) -> (Point3, Vec3) {
        match &self.trajectory {
            Trajectory::Static(x) => (*x, Vec3::ZERO),
            Trajectory::Uniform { x0, v } => (*x0 + *v * t, *v),
            Trajectory::Custom { eval, .. } => eval(t),
        }
    }

    /// Upper bound on `|v|` along the whole worldline.
    pub fn speed_bound(&self) -> f64 {
        match &self.trajectory {
            Trajectory::Static(_) => 0.0,
            Trajectory::Uniform { v, .. } => v.norm(),
            Trajectory::Custom { max_speed, .. } => *max_speed,
        }
    }

    /// Refuses worldlines that are not strictly subluminal for wave speed `c`.
    pub fn check_subluminal(&self, c: f64) -> Result<()> {
        let speed = self.speed_bound();
        if speed < c {
            Ok(())
        } else {
            Err(Error::Superluminal { speed, c })
        }
    }
}

/// Point electric dipole of moment `p` (C·m) at `x₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleSource {
    pub location: Point3,
    pub moment: Vec3,
}

impl DipoleSource {
    pub fn new(location: Point3, moment: Vec3) -> Result<Self> {
        if !(location.is_finite() && moment.is_finite()) {
            return Err(Error::invalid("dipole", "location and moment must be finite"));
        }
        Ok(DipoleSource { location, moment })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_state() {
        let s = PointSource::uniform(1.0, Vec3::X, Vec3::new(0.0, 2.0, 0.0)).unwrap();
        let (x, v) = s.state(1.5);
        assert_eq!(x, Vec3::new(1.0, 3.0, 0.0));
        assert_eq!(v, Vec3::new(0.0, 2.0, 0.0));
    }

    #[test]
    fn superluminal_is_refused() {
        let s = PointSource::uniform(1.0, Vec3::ZERO, Vec3::new(3.0, 0.0, 0.0)).unwrap();
        assert!(s.check_subluminal(4.0).is_ok());
        assert!(matches!(s.check_subluminal(3.0), Err(Error::Superluminal { .. })));
    }

    #[test]
    fn non_finite_inputs() {
        assert!(PointSource::stationary(f64::NAN, Vec3::ZERO).is_err());
        assert!(DipoleSource::new(Vec3::ZERO, Vec3::new(f64::INFINITY, 0.0, 0.0)).is_err());
    }
}
