//! Electrostatic, magnetostatic and retarded potentials of singular sources
//! supported on points, curves and surfaces in R³.
//!
//! The crate is organised bottom-up:
//!
//! * [`exterior3`]: forms on R³, Hodge star, `d` and `δ` by finite differences.
//! * [`kernels`]: the free-space kernel `1/(4π|x-y|)`, its retarded and
//!   Helmholtz variants, and the Dirichlet Green function of a slab.
//! * [`quad`]: adaptive Gauss–Kronrod, periodic trapezoid, 2D product
//!   quadrature and series summation.
//! * [`sources`]: curve, surface, point and dipole sources described by a
//!   foliation, a Leray measure, a direction field and a density.
//! * [`fields`]: potential evaluators and verification residuals.
//! * [`selfcheck`]: the oracle suite run by `singem selfcheck`.

pub mod error;
pub mod exterior3;
pub mod fields;
pub mod kernels;
pub mod quad;
pub mod selfcheck;
pub mod sources;

pub use error::{Error, Result};
pub use exterior3::{FormField, Point3, Vec3};
