//! CSV and JSON writers for field maps. Both carry the same columns and rows.

use std::io::Write;

use serde::Serialize;

use crate::run::Row;
use crate::scene::{Quantity, Scene};

/// Version of `docs/SIGN_CONVENTIONS.md` the output follows.
pub const SIGN_CONVENTION_VERSION: u32 = 1;

pub const UNITS: &str = "SI: x, y, z in m; t in s; A in T·m (tesla·meter); phi in V (volt); \
B in T (tesla); E in V/m; sources in A (amp), A/m, C, C/m, C·m; residuals dimensionless; \
B_error and E_error in the units of B and E; error_estimate is the quadrature error of A and phi";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    /// A JSON document mirroring the CSV rows.
    Doc,
}

pub fn columns(scene: &Scene) -> Vec<&'static str> {
    let mut c = vec!["x", "y", "z", "t"];
    if scene.output.wants(Quantity::A) {
        c.extend(["A_x", "A_y", "A_z"]);
    }
    if scene.output.wants(Quantity::Phi) {
        c.push("phi");
    }
    if scene.output.wants(Quantity::B) {
        c.extend(["B_x", "B_y", "B_z", "B_error"]);
    }
    if scene.output.wants(Quantity::E) {
        c.extend(["E_x", "E_y", "E_z", "E_error"]);
    }
    if scene.output.wants(Quantity::Residuals) {
        c.extend(["gauge_residual", "lorenz_residual"]);
    }
    c.extend(["error_estimate", "evaluations", "status"]);
    c
}

/// Cells of one row; `None` for values that were not computed.
fn cells(scene: &Scene, row: &Row) -> Vec<Option<f64>> {
    let mut c: Vec<Option<f64>> = row.point.iter().copied().map(Some).collect();
    c.push(Some(row.t));
    let v = row.values.as_ref().ok();
    let vec3 = |x: Option<singular_em::Vec3>| -> [Option<f64>; 3] {
        match x {
            Some(x) => [Some(x.x), Some(x.y), Some(x.z)],
            None => [None; 3],
        }
    };
    if scene.output.wants(Quantity::A) {
        c.extend(vec3(v.map(|v| v.a)));
    }
    if scene.output.wants(Quantity::Phi) {
        c.push(v.map(|v| v.phi));
    }
    if scene.output.wants(Quantity::B) {
        c.extend(vec3(v.and_then(|v| v.b)));
        c.push(v.and_then(|v| v.b_error));
    }
    if scene.output.wants(Quantity::E) {
        c.extend(vec3(v.and_then(|v| v.e)));
        c.push(v.and_then(|v| v.e_error));
    }
    if scene.output.wants(Quantity::Residuals) {
        c.push(v.and_then(|v| v.gauge).map(|r| r.relative));
        c.push(v.and_then(|v| v.lorenz).map(|r| r.relative));
    }
    c.push(v.map(|v| v.diagnostics.error_estimate));
    c.push(v.map(|v| v.diagnostics.evaluations as f64));
    c
}

fn fmt_cell(v: Option<f64>) -> String {
    match v {
        Some(v) if v.fract() == 0.0 && v.abs() < 1e15 => format!("{v:.0}"),
        Some(v) => format!("{v:e}"),
        None => String::new(),
    }
}

pub fn write_csv<W: Write>(out: W, scene: &Scene, rows: &[Row]) -> std::io::Result<()> {
    let mut out = out;
    writeln!(out, "# singem field map")?;
    writeln!(out, "# scene-sha256: {}", scene.digest())?;
    writeln!(out, "# units: {UNITS}")?;
    writeln!(out, "# sign-conventions: v{SIGN_CONVENTION_VERSION} (docs/SIGN_CONVENTIONS.md)")?;
    writeln!(out, "# rows: {} in order t, x, y, z (z varies fastest)", rows.len())?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns(scene))?;
    for row in rows {
        let mut rec: Vec<String> = cells(scene, row).into_iter().map(fmt_cell).collect();
        rec.push(row.status());
        w.write_record(&rec)?;
    }
    w.flush()
}

#[derive(Serialize)]
struct Document {
    scene_sha256: String,
    units: &'static str,
    sign_conventions: u32,
    columns: Vec<&'static str>,
    rows: Vec<Vec<serde_json::Value>>,
}

pub fn write_doc<W: Write>(mut out: W, scene: &Scene, rows: &[Row]) -> std::io::Result<()> {
    let rows = rows
        .iter()
        .map(|row| {
            let mut rec: Vec<serde_json::Value> = cells(scene, row)
                .into_iter()
                .map(|c| c.map_or(serde_json::Value::Null, serde_json::Value::from))
                .collect();
            rec.push(row.status().into());
            rec
        })
        .collect();
    let doc = Document {
        scene_sha256: scene.digest(),
        units: UNITS,
        sign_conventions: SIGN_CONVENTION_VERSION,
        columns: columns(scene),
        rows,
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}
