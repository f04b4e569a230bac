//! Exterior calculus on Euclidean R³.
//!
//! Forms are stored by their coefficients in the lexicographic basis
//! (`dx, dy, dz` and `dx∧dy, dx∧dz, dy∧dz`). Sign conventions follow
//! `η a = (-1)^p a`, `δ = # d # η` and `Δ = dδ + δd`, so that `Δ` is minus the
//! componentwise Laplacian. Derivatives are taken by central differences.

mod form;
mod ops;
mod point;

pub use form::{basis_len, Coefficients, Component, FormField, BASIS};
pub use ops::{
    codifferential, d_numeric, hodge, hodge_laplacian, time_derivative, wedge, Step, HODGE,
};
pub use point::{Cylindrical, Point3, Vec3};
