use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use singular_em_cli::output::Format;
use singular_em_cli::{read_scene, run, selfcheck, validation_report, CliError, Exit, SceneArgs};

/// Potentials and fields of point, line and surface sources.
#[derive(Parser)]
#[command(name = "singem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a scene's grid and write the field map.
    Run {
        #[command(flatten)]
        scene: SceneOpts,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Check a scene and print it normalized, with derived quantities.
    Validate {
        #[command(flatten)]
        scene: SceneOpts,
    },
    /// Run the embedded oracle suite.
    Selfcheck {
        /// Run only the check with this id.
        #[arg(long)]
        check: Option<usize>,
    },
}

#[derive(Args)]
struct SceneOpts {
    #[arg(long)]
    scene: PathBuf,
    /// Override a scene key, e.g. `--set sources.0.current=3`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Relative quadrature tolerance (sets `quadrature.rel_tol`).
    #[arg(long)]
    tol: Option<f64>,
}

impl SceneOpts {
    fn args(&self) -> SceneArgs {
        SceneArgs {
            overrides: self.overrides.clone(),
            tol: self.tol,
        }
    }
}

fn execute(cli: Cli) -> Result<Exit, CliError> {
    match cli.command {
        Command::Run {
            scene,
            out,
            threads,
            format,
        } => {
            let parsed = read_scene(&scene.scene, &scene.args())?;
            if let Some(n) = threads {
                if n == 0 {
                    return Err(CliError::Invalid("--threads must be at least 1".into()));
                }
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .map_err(|e| CliError::Internal(format!("thread pool: {e}")))?;
            }
            let status = match out {
                Some(path) => {
                    let f = File::create(&path)
                        .map_err(|e| CliError::Internal(format!("cannot create {}: {e}", path.display())))?;
                    run(&parsed, format, BufWriter::new(f))?
                }
                None => run(&parsed, format, io::stdout().lock())?,
            };
            if status == Exit::PartialConvergence {
                eprintln!("warning: some grid points failed or did not converge; see the status column");
            }
            Ok(status)
        }
        Command::Validate { scene } => {
            let parsed = read_scene(&scene.scene, &scene.args())?;
            print!("{}", validation_report(&parsed)?);
            Ok(Exit::Success)
        }
        Command::Selfcheck { check } => {
            let report = selfcheck(check)?;
            println!("{report}");
            io::stdout().flush().ok();
            Ok(if report.all_passed() { Exit::Success } else { Exit::Internal })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
