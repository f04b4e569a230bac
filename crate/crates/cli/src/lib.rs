//! Scene-driven grid sweeps of potentials and fields, scene validation, and
//! the embedded self-check suite behind the `singem` binary.

pub mod output;
pub mod run;
pub mod scene;

use std::io::Write;
use std::path::Path;

use singular_em::fields::loop_lambda;
use singular_em::selfcheck::{run_all, run_check, SelfCheckOptions, SelfCheckReport};

use output::Format;
use scene::{Scene, SourceSpec};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    InvalidInput = 1,
    PartialConvergence = 2,
    Internal = 3,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            CliError::Invalid(_) => Exit::InvalidInput,
            CliError::Internal(_) => Exit::Internal,
        }
    }
}

/// Scene source plus command-line adjustments.
#[derive(Debug, Clone, Default)]
pub struct SceneArgs {
    pub overrides: Vec<String>,
    pub tol: Option<f64>,
}

pub fn read_scene(path: &Path, args: &SceneArgs) -> Result<Scene, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read scene {}: {e}", path.display())))?;
    scene::load(&text, &args.overrides, args.tol)
}

/// Sweeps the grid and writes the field map. Returns partial convergence
/// when any row failed or did not converge; such rows are still written.
pub fn run<W: Write>(scene: &Scene, format: Format, out: W) -> Result<Exit, CliError> {
    let model = scene.model()?;
    let points = run::grid_points(scene);
    let rows = run::sweep(&model, &points, scene.output.derived());
    let io = |e: std::io::Error| CliError::Internal(format!("cannot write output: {e}"));
    match format {
        Format::Csv => output::write_csv(out, scene, &rows).map_err(io)?,
        Format::Doc => output::write_doc(out, scene, &rows).map_err(io)?,
    }
    Ok(if rows.iter().all(run::Row::converged) {
        Exit::Success
    } else {
        Exit::PartialConvergence
    })
}

/// Normalized scene followed by derived quantities, as TOML comments.
pub fn validation_report(scene: &Scene) -> Result<String, CliError> {
    let medium = scene.medium()?;
    let mut s = scene.normalized();
    s.push_str("\n# derived quantities\n");
    s.push_str(&format!("# c = {:e} m/s\n", medium.c()));
    for (i, src) in scene.sources.iter().enumerate() {
        let line = match src {
            SourceSpec::Loop { radius, current, .. } => format!(
                "loop: lambda = 4*pi*mu*I*a = {:e} (= 4*pi*mu*{:e})",
                loop_lambda(*current, *radius, &medium),
                current * radius
            ),
            SourceSpec::Helix {
                radius,
                pitch,
                length,
                current,
                ..
            } => {
                let big_p = (1.0 - pitch * pitch).sqrt() / radius;
                format!(
                    "helix: P = sqrt(1 - p^2)/a = {big_p:e} rad/m, turns = {:e}, lambda = 4*pi*mu*I*a = {:e}",
                    length * big_p / (2.0 * std::f64::consts::PI),
                    loop_lambda(*current, *radius, &medium)
                )
            }
            SourceSpec::Solenoid {
                radius, pitch, kappa0, ..
            } => {
                let big_p = (1.0 - pitch * pitch).sqrt() / radius;
                format!(
                    "solenoid: P = {big_p:e} rad/m, azimuthal sheet current K = kappa0*a*P = {:e} A/m, \
                     ideal interior B = {:e} T",
                    kappa0 * radius * big_p,
                    medium.mu * kappa0 * radius * big_p
                )
            }
            SourceSpec::PlateWire { separation, z0, .. } => {
                format!("plate_wire: z0/L = {:e}", z0 / separation)
            }
            SourceSpec::PointCharge { velocity, .. } => {
                let v = singular_em::Vec3::from_array(*velocity).norm();
                format!("point_charge: |v|/c = {:e}", v / medium.c())
            }
            SourceSpec::Dipole { moment, .. } => {
                format!("dipole: |p| = {:e} C·m", singular_em::Vec3::from_array(*moment).norm())
            }
            SourceSpec::Polyline { vertices, closed, .. } => {
                format!("polyline: {} vertices, closed = {closed}", vertices.len())
            }
        };
        s.push_str(&format!("# sources[{i}] {line}\n"));
    }
    s.push_str(&format!("# grid rows = {}\n", scene.grid.row_count()));
    Ok(s)
}

/// Runs the whole suite, or one check when `only` is given.
pub fn selfcheck(only: Option<usize>) -> Result<SelfCheckReport, CliError> {
    let opts = SelfCheckOptions::default();
    match only {
        None => Ok(run_all(&opts)),
        Some(id) => run_check(id, &opts)
            .map(|c| SelfCheckReport { checks: vec![c] })
            .ok_or_else(|| CliError::Invalid(format!("no self-check with id {id}"))),
    }
}
