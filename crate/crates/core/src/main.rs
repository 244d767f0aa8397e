use clap::{Parser, Subcommand};
use malfatti::driver::{run, RunOptions, EXIT_PARSE};
use malfatti::scene::parse_scene;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Malfatti cycles on the hyperbolic plane: solve a scene with both the
/// trigonometric and the inversive pipeline, certify every tangency, and
/// emit a deterministic report and figure.
#[derive(Parser)]
#[command(name = "malfatti", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a scene file.
    Solve {
        /// Scene file (see README for the format).
        scene: PathBuf,
        /// Write the figure as SVG.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        /// Acceptance tolerance for certified residuals (default 1e-8).
        #[arg(long, value_name = "EPS")]
        tol: Option<f64>,
        /// Write the report here instead of standard output.
        #[arg(long, value_name = "FILE")]
        report: Option<PathBuf>,
        /// Append the eight-fold Apollonius enumeration to the report.
        #[arg(long)]
        enumerate_apollonius: bool,
    },
}

fn solve_command(
    scene_path: &PathBuf,
    svg: Option<&PathBuf>,
    tol: Option<f64>,
    report: Option<&PathBuf>,
    enumerate_apollonius: bool,
) -> u8 {
    let text = match std::fs::read_to_string(scene_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", scene_path.display());
            return EXIT_PARSE as u8;
        }
    };
    let scene = match parse_scene(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_PARSE as u8;
        }
    };
    let started = Instant::now();
    let outcome = run(&scene, &RunOptions { tolerance: tol, enumerate_apollonius });
    // Timing stays on stderr so the report remains byte-deterministic.
    eprintln!("solved in {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
    let out = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code as u8;
        }
    };
    match report {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &out.report) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_PARSE as u8;
            }
        }
        None => print!("{}", out.report),
    }
    if let Some(path) = svg {
        if let Err(e) = std::fs::write(path, &out.svg) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_PARSE as u8;
        }
    }
    if out.passed {
        0
    } else {
        eprintln!("error: residuals exceed the acceptance tolerance (see report)");
        1
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { scene, svg, tol, report, enumerate_apollonius } => ExitCode::from(
            solve_command(&scene, svg.as_ref(), tol, report.as_ref(), enumerate_apollonius),
        ),
    }
}
