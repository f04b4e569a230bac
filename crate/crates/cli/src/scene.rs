//! Scene files: a TOML document with `schema = 1`, a medium, quadrature
//! settings, sources, a grid and the requested outputs. Unknown keys are
//! errors, and every error names the key path it concerns.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use singular_em::fields::{FieldModel, FieldSource, MediumConstants, PlateWire, Quantities, EPS0, MU0, RETARDED_TOL};
use singular_em::quad::QuadConfig;
use singular_em::sources::{CurveSource, DipoleSource, PiecewiseCurve, PointSource, SurfaceSource};
use singular_em::Vec3;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub schema: u32,
    #[serde(default)]
    pub medium: Medium,
    #[serde(default)]
    pub quadrature: Quadrature,
    pub sources: Vec<SourceSpec>,
    pub grid: Grid,
    #[serde(default)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Medium {
    /// F/m.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// H/m.
    #[serde(default = "default_mu")]
    pub mu: f64,
}

fn default_epsilon() -> f64 {
    EPS0
}

fn default_mu() -> f64 {
    MU0
}

impl Default for Medium {
    fn default() -> Self {
        Medium {
            epsilon: EPS0,
            mu: MU0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Quadrature {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub max_terms: usize,
    pub singularity_exclusion: f64,
    pub retarded_tol: f64,
}

impl Default for Quadrature {
    fn default() -> Self {
        let q = QuadConfig::default();
        Quadrature {
            rel_tol: q.rel_tol,
            abs_tol: q.abs_tol,
            max_subdivisions: q.max_subdivisions,
            max_terms: q.max_terms,
            singularity_exclusion: q.singularity_exclusion,
            retarded_tol: RETARDED_TOL,
        }
    }
}

impl Quadrature {
    pub fn config(&self) -> QuadConfig {
        QuadConfig {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_subdivisions: self.max_subdivisions,
            singularity_exclusion: self.singularity_exclusion,
            max_terms: self.max_terms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceSpec {
    /// Circular loop in the plane `z = center.z`, current counter-clockwise about `+z`.
    Loop {
        radius: f64,
        current: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    /// Helix starting at `center + (radius, 0, 0)`; `length` is arc length.
    Helix {
        radius: f64,
        pitch: f64,
        length: f64,
        current: f64,
        #[serde(default)]
        center: [f64; 3],
    },
    /// Helically wound sheet `r = radius`, `base.z ≤ z ≤ base.z + length`.
    Solenoid {
        radius: f64,
        #[serde(default)]
        pitch: f64,
        length: f64,
        kappa0: f64,
        #[serde(default)]
        base: [f64; 3],
    },
    /// Line charge along `y` at `(x0, ·, z0)` between grounded plates
    /// `z = 0` and `z = separation`.
    PlateWire {
        separation: f64,
        z0: f64,
        line_charge: f64,
        #[serde(default)]
        x0: f64,
    },
    /// `x(t) = position + velocity·t`.
    PointCharge {
        charge: f64,
        position: [f64; 3],
        #[serde(default)]
        velocity: [f64; 3],
    },
    Dipole { position: [f64; 3], moment: [f64; 3] },
    Polyline {
        vertices: Vec<[f64; 3]>,
        current: f64,
        #[serde(default)]
        closed: bool,
    },
}

/// `count` equally spaced samples from `from` to `to` inclusive; a single
/// sample sits at `from`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub from: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<f64>,
    #[serde(default = "one")]
    pub count: usize,
}

fn one() -> usize {
    1
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let to = self.to.unwrap_or(self.from);
        if self.count <= 1 {
            return vec![self.from];
        }
        let n = self.count - 1;
        (0..self.count)
            .map(|i| if i == n { to } else { self.from + (to - self.from) * i as f64 / n as f64 })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub x: Axis,
    pub y: Axis,
    pub z: Axis,
    /// Time samples in seconds; a single `t = 0` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Axis>,
}

impl Grid {
    pub fn times(&self) -> Vec<f64> {
        self.t.map(|a| a.values()).unwrap_or_else(|| vec![0.0])
    }

    pub fn row_count(&self) -> usize {
        self.x.count * self.y.count * self.z.count * self.t.map_or(1, |t| t.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    A,
    #[serde(rename = "phi")]
    Phi,
    B,
    E,
    #[serde(rename = "residuals")]
    Residuals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    #[serde(default = "default_quantities")]
    pub quantities: Vec<Quantity>,
}

fn default_quantities() -> Vec<Quantity> {
    vec![Quantity::A, Quantity::Phi, Quantity::B]
}

impl Default for Output {
    fn default() -> Self {
        Output {
            quantities: default_quantities(),
        }
    }
}

impl Output {
    pub fn wants(&self, q: Quantity) -> bool {
        self.quantities.contains(&q)
    }

    pub fn derived(&self) -> Quantities {
        Quantities {
            b: self.wants(Quantity::B),
            e: self.wants(Quantity::E),
            residuals: self.wants(Quantity::Residuals),
        }
    }
}

/// Reads a scene from TOML text, applying `key=value` overrides and an
/// optional relative tolerance before validation.
pub fn load(text: &str, overrides: &[String], tol: Option<f64>) -> Result<Scene, CliError> {
    let mut doc: toml::Value = text
        .parse::<toml::Table>()
        .map(toml::Value::Table)
        .map_err(|e| CliError::Invalid(format!("scene is not valid TOML: {}", e.message())))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    if let Some(tol) = tol {
        apply_override(&mut doc, &format!("quadrature.rel_tol={tol:e}"))?;
    }
    let scene: Scene = serde_path_to_error::deserialize(doc).map_err(|e| {
        let path = e.path().to_string();
        CliError::Invalid(format!("{path}: {}", e.into_inner()))
    })?;
    scene.validate()?;
    Ok(scene)
}

/// Sets the value at a dotted path such as `sources.0.current=3`; numeric
/// components index arrays. The value is read as TOML, or as a bare string
/// when it is not valid TOML.
pub fn apply_override(doc: &mut toml::Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Invalid(format!("override `{assignment}` is not of the form key=value")))?;
    let path = path.trim();
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Invalid(format!("override path `{path}` has an empty component")));
    }
    let mut node = doc;
    for (i, key) in keys.iter().enumerate() {
        let last = i + 1 == keys.len();
        node = match node {
            toml::Value::Table(t) => {
                if last {
                    t.insert(key.to_string(), value);
                    return Ok(());
                }
                t.entry(key.to_string())
                    .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            }
            toml::Value::Array(a) => {
                let idx: usize = key.parse().map_err(|_| {
                    CliError::Invalid(format!("override path `{path}`: `{key}` must be an array index"))
                })?;
                let len = a.len();
                let slot = a.get_mut(idx).ok_or_else(|| {
                    CliError::Invalid(format!("override path `{path}`: index {idx} out of range (length {len})"))
                })?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => {
                return Err(CliError::Invalid(format!(
                    "override path `{path}`: `{}` is not a table or array",
                    keys[..i].join(".")
                )))
            }
        };
    }
    unreachable!("the loop returns on the last key")
}

fn vec3(a: [f64; 3]) -> Vec3 {
    Vec3::from_array(a)
}

impl Scene {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema != SCHEMA_VERSION {
            return Err(CliError::Invalid(format!(
                "schema: unsupported version {} (expected {SCHEMA_VERSION})",
                self.schema
            )));
        }
        if self.sources.is_empty() {
            return Err(CliError::Invalid("sources: at least one source is required".into()));
        }
        for (name, axis) in [("x", self.grid.x), ("y", self.grid.y), ("z", self.grid.z)]
            .into_iter()
            .chain(self.grid.t.map(|t| ("t", t)))
        {
            if axis.count == 0 {
                return Err(CliError::Invalid(format!("grid.{name}.count: must be at least 1")));
            }
            if !axis.from.is_finite() || !axis.to.unwrap_or(axis.from).is_finite() {
                return Err(CliError::Invalid(format!("grid.{name}: bounds must be finite")));
            }
        }
        let slabs: Vec<_> = self
            .sources
            .iter()
            .filter_map(|s| match s {
                SourceSpec::PlateWire { separation, .. } => Some(*separation),
                _ => None,
            })
            .collect();
        if !slabs.is_empty() {
            if slabs.len() != self.sources.len() {
                return Err(CliError::Invalid(
                    "sources: plate_wire sources live in a slab and cannot be mixed with free-space sources".into(),
                ));
            }
            if slabs.iter().any(|s| *s != slabs[0]) {
                return Err(CliError::Invalid(
                    "sources: all plate_wire sources must share the same separation".into(),
                ));
            }
        }
        if self.output.quantities.is_empty() {
            return Err(CliError::Invalid("output.quantities: request at least one quantity".into()));
        }
        self.model().map(|_| ())
    }

    pub fn medium(&self) -> Result<MediumConstants, CliError> {
        MediumConstants::new(self.medium.epsilon, self.medium.mu).map_err(|e| CliError::Invalid(format!("medium: {e}")))
    }

    pub fn build_source(spec: &SourceSpec) -> singular_em::Result<FieldSource> {
        Ok(match spec {
            SourceSpec::Loop { radius, current, center } => {
                FieldSource::Curve(CurveSource::circle(vec3(*center), *radius, *current)?)
            }
            SourceSpec::Helix {
                radius,
                pitch,
                length,
                current,
                center,
            } => FieldSource::Curve(CurveSource::helix(vec3(*center), *radius, *pitch, *length, *current)?),
            SourceSpec::Solenoid {
                radius,
                pitch,
                length,
                kappa0,
                base,
            } => FieldSource::Solenoid(SurfaceSource::solenoid(vec3(*base), *radius, *pitch, *length, *kappa0)?),
            SourceSpec::PlateWire {
                separation,
                z0,
                line_charge,
                x0,
            } => FieldSource::PlateWire(PlateWire::new(*x0, *z0, *line_charge, *separation)?),
            SourceSpec::PointCharge {
                charge,
                position,
                velocity,
            } => {
                let v = vec3(*velocity);
                FieldSource::PointCharge(if v == Vec3::ZERO {
                    PointSource::stationary(*charge, vec3(*position))?
                } else {
                    PointSource::uniform(*charge, vec3(*position), v)?
                })
            }
            SourceSpec::Dipole { position, moment } => {
                FieldSource::Dipole(DipoleSource::new(vec3(*position), vec3(*moment))?)
            }
            SourceSpec::Polyline {
                vertices,
                current,
                closed,
            } => {
                let v: Vec<Vec3> = vertices.iter().copied().map(vec3).collect();
                FieldSource::Piecewise(PiecewiseCurve::polyline(&v, *current, *closed)?)
            }
        })
    }

    /// The evaluator for this scene; errors name the offending source.
    pub fn model(&self) -> Result<FieldModel, CliError> {
        let medium = self.medium()?;
        let mut sources = Vec::with_capacity(self.sources.len());
        for (i, spec) in self.sources.iter().enumerate() {
            let src = Scene::build_source(spec).map_err(|e| CliError::Invalid(format!("sources[{i}]: {e}")))?;
            if let FieldSource::PointCharge(q) = &src {
                q.check_subluminal(medium.c())
                    .map_err(|e| CliError::Invalid(format!("sources[{i}]: {e}")))?;
            }
            sources.push(src);
        }
        let cfg = self.quadrature.config();
        cfg.validate().map_err(|e| CliError::Invalid(format!("quadrature: {e}")))?;
        let rt = self.quadrature.retarded_tol;
        if !(rt > 0.0 && rt < 1.0) {
            return Err(CliError::Invalid("quadrature.retarded_tol: must lie in (0, 1)".into()));
        }
        Ok(FieldModel::new(sources, medium, cfg)
            .map_err(|e| CliError::Invalid(e.to_string()))?
            .with_retarded_tol(rt))
    }

    /// The scene after defaults and overrides, as TOML.
    pub fn normalized(&self) -> String {
        toml::to_string(self).expect("scene types serialize to TOML")
    }

    /// SHA-256 of [`Scene::normalized`], in hex.
    pub fn digest(&self) -> String {
        Sha256::digest(self.normalized().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
