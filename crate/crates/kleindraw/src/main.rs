use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kleindraw::drawing::pipeline::{draw, TutteParams};
use kleindraw::enumeration::{enumerate_embeddings, generate_omega, generate_omega_kind, EmbeddingRecord};
use kleindraw::graph::{klein_grid, GraphKind};
use kleindraw::rotation::equivalent;
use kleindraw::{io as kio, omega, Error};

#[derive(Parser)]
#[command(name = "kleindraw", version, about = "Straight-line graph drawing on the flat Klein bottle")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the switch normal form of a rotation system
    Format { input: PathBuf },
    /// Print the Euler characteristic of a rotation system
    Euler { input: PathBuf },
    /// Enumerate distinct Klein-bottle embeddings; `k5`, `k33` or `all`
    /// regenerate base-database records, a .krs path enumerates that graph
    Enumerate {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a rotation system as a crossing-free straight-line drawing
    Draw {
        input: PathBuf,
        /// Base-embedding database; defaults to KLEINDRAW_OMEGA or the built-in copy
        #[arg(long)]
        omega: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1e-7)]
        eps: f64,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
    },
    /// Validate a drawing: crossings, and optionally the rotation system it realizes
    Check {
        input: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Render a drawing to SVG
    Render {
        input: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        #[arg(long, default_value_t = 1)]
        copies: usize,
    },
    /// Write the Klein-bottle grid template as a .krs file
    Grid {
        m: usize,
        n: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

enum AppError {
    Domain(Error),
    Usage(String),
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        if e.is_parse() {
            AppError::Usage(format!("{} ({})", e, e.reason_code()))
        } else {
            AppError::Domain(e)
        }
    }
}

fn read_file(path: &Path) -> Result<String, AppError> {
    std::fs::read_to_string(path)
        .map_err(|e| AppError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), AppError> {
    std::fs::write(path, text)
        .map_err(|e| AppError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn load_omega(explicit: Option<&Path>) -> Result<Vec<EmbeddingRecord>, AppError> {
    if let Some(path) = explicit {
        return Ok(kio::parse_omega(&read_file(path)?)?);
    }
    if let Ok(env_path) = std::env::var("KLEINDRAW_OMEGA") {
        return Ok(kio::parse_omega(&read_file(Path::new(&env_path))?)?);
    }
    Ok(omega::builtin()?)
}


fn run(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Format { input } => {
            let (name, rs) = kio::parse_krs(&read_file(&input)?)?;
            let (formatted, _) = rs.format()?;
            print!("{}", kio::write_krs(&name, &formatted));
        }
        Cmd::Euler { input } => {
            let (_, rs) = kio::parse_krs(&read_file(&input)?)?;
            println!("chi {}", rs.euler_characteristic());
        }
        Cmd::Enumerate { graph, out } => {
            let records = match graph.as_str() {
                "all" => generate_omega()?,
                "k5" => generate_omega_kind(GraphKind::K5)?,
                "k33" => generate_omega_kind(GraphKind::K33)?,
                path => {
                    let (name, rs) = kio::parse_krs(&read_file(Path::new(path))?)?;
                    let e = enumerate_embeddings(rs.graph())?;
                    let mut text = String::new();
                    for (i, sys) in e.records().iter().enumerate() {
                        text.push_str(&format!("embedding {i} {name}\n"));
                        text.push_str(&kio::write_krs(&name, sys));
                        text.push_str("end\n");
                    }
                    write_file(&out, &text)?;
                    println!(
                        "{} distinct embeddings, {} torus-only classes filtered",
                        e.records().len(),
                        e.false_positives.len()
                    );
                    return Ok(());
                }
            };
            let text = kio::write_omega(&records);
            write_file(&out, &text)?;
            let records = kio::parse_omega(&text)?;
            println!(
                "{} base embeddings written ({} k5, {} k33)",
                records.len(),
                records.iter().filter(|r| r.kind == GraphKind::K5).count(),
                records.iter().filter(|r| r.kind == GraphKind::K33).count()
            );
        }
        Cmd::Draw {
            input,
            omega,
            out,
            eps,
            max_iter,
        } => {
            let (_, rs) = kio::parse_krs(&read_file(&input)?)?;
            let records = load_omega(omega.as_deref())?;
            let params = TutteParams {
                eps,
                max_iter,
                ..TutteParams::default()
            };
            let drawing = draw(rs.graph(), &rs, &records, params)?;
            write_file(&out, &kio::write_kdr(&drawing))?;
            println!("drawing written to {}", out.display());
        }
        Cmd::Check { input, against } => {
            let drawing = kio::parse_kdr(&read_file(&input)?)?;
            let crossings = drawing.crossings(1e-9);
            println!("crossings {}", crossings.len());
            if !crossings.is_empty() {
                return Err(AppError::Domain(Error::InvalidRotationSystem(format!(
                    "{} crossing(s) present",
                    crossings.len()
                ))));
            }
            if let Some(path) = against {
                let (_, rs) = kio::parse_krs(&read_file(&path)?)?;
                let extracted = drawing.extract_rotation_system()?;
                if equivalent(&extracted, &rs, false).is_some() {
                    println!("rotation-system match");
                } else {
                    println!("rotation-system mismatch");
                    return Err(AppError::Domain(Error::InvalidRotationSystem(
                        "drawing does not realize the given system".into(),
                    )));
                }
            }
        }
        Cmd::Render { input, svg, copies } => {
            let drawing = kio::parse_kdr(&read_file(&input)?)?;
            write_file(&svg, &kio::render_svg(&drawing, copies))?;
            println!("svg written to {}", svg.display());
        }
        Cmd::Grid { m, n, out } => {
            let (_, rs) = klein_grid(m, n)?;
            let name = format!("klein-grid-{m}x{n}");
            write_file(&out, &kio::write_krs(&name, &rs))?;
            println!("grid template written to {}", out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Domain(e)) => {
            eprintln!("error: {}", e.reason_code());
            ExitCode::from(1)
        }
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
