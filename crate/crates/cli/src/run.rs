//! Grid sweeps.

use rayon::prelude::*;

use singular_em::fields::{FieldModel, FieldValues, Quantities};
use singular_em::Vec3;

use crate::scene::Scene;

/// One grid point and what was computed there.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub point: [f64; 3],
    pub t: f64,
    /// The evaluator's error message when the point could not be evaluated,
    /// e.g. because it lies on a source.
    pub values: Result<FieldValues, String>,
}

impl Row {
    pub fn converged(&self) -> bool {
        matches!(&self.values, Ok(v) if v.diagnostics.converged)
    }

    pub fn status(&self) -> String {
        match &self.values {
            Ok(v) if v.diagnostics.converged => "ok".into(),
            Ok(_) => "unconverged".into(),
            Err(e) => format!("error: {e}"),
        }
    }
}

/// Grid points in output order: time slowest, then `x`, `y`, `z`.
pub fn grid_points(scene: &Scene) -> Vec<([f64; 3], f64)> {
    let g = &scene.grid;
    let (xs, ys, zs) = (g.x.values(), g.y.values(), g.z.values());
    let mut out = Vec::with_capacity(g.row_count());
    for t in g.times() {
        for &x in &xs {
            for &y in &ys {
                for &z in &zs {
                    out.push(([x, y, z], t));
                }
            }
        }
    }
    out
}

/// Evaluates every grid point, in parallel, returning rows in grid order.
pub fn sweep(model: &FieldModel, points: &[([f64; 3], f64)], want: Quantities) -> Vec<Row> {
    points
        .par_iter()
        .map(|&(p, t)| Row {
            point: p,
            t,
            values: model.evaluate(Vec3::from_array(p), t, want).map_err(|e| e.to_string()),
        })
        .collect()
}
