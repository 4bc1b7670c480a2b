//! Command-line driver for the surface constructions and the exact
//! realization pipeline.
//!
//! Exit codes: 0 success, 2 parse error, 3 domain error, 4 certification
//! failure, 5 internal error.

use clap::{Parser, Subcommand, ValueEnum};
use highgenus::heffter::{check_self_dual_and_actions, heffter_surface, stellar_triangulation};
use highgenus::io::{
    mesh_from_file, mesh_to_file, obj_string, off_string, parse_off, to_json_string, IoError,
    MeshFile, MeshMeta,
};
use highgenus::mirror::{build_qm, orient_qm, triangulate_equivelar};
use highgenus::rational::{parse_rational, rat_to_string, Rat};
use highgenus::rotation::{
    check_delta_star, ringel_network, ringel_scheme, scheme_to_surface, trace_current_graph,
};
use highgenus::schlegel::{realize_surface, triangulate_mesh, EmbeddedMesh, SchlegelError};
use highgenus::surface::{CellSurface, SurfaceFile};
use highgenus::verify::certify;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "highgenus",
    about = "Combinatorial surfaces of high genus and their exact polyhedral realizations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Off,
    Obj,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Cyclic neighborly triangulation on n = 12s+7 vertices
    Ringel {
        #[arg(long)]
        s: usize,
        /// Write the rotation scheme JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the generating current-graph JSON here
        #[arg(long)]
        network_out: Option<PathBuf>,
        /// Write the traced surface JSON here
        #[arg(long)]
        surface_out: Option<PathBuf>,
    },
    /// Self-dual surface over F_q (q = 4g+1) and its stellar triangulation
    Heffter {
        #[arg(long)]
        q: usize,
        /// Stellar-triangulate the surface
        #[arg(long)]
        triangulate: bool,
        /// Also verify the group actions and dual completeness
        #[arg(long)]
        actions: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The quad surface Q_m in the m-cube
    Mirror {
        #[arg(long)]
        m: usize,
        /// Apply the equivelar diagonal triangulation
        #[arg(long)]
        triangulate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Realize Q_m in R^3 through the deformed cube and a Schlegel diagram
    Realize {
        #[arg(long)]
        m: usize,
        /// Exact rational epsilon, e.g. 1/4
        #[arg(long, default_value = "1/4")]
        eps: String,
        /// Base facet index for the Schlegel projection
        #[arg(long)]
        f0: Option<usize>,
        /// Triangulate the quad mesh by the parity diagonal rule
        #[arg(long)]
        triangulate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        /// off and obj also write an exact JSON sidecar `<out>.json`
        #[arg(long, value_enum, default_value = "off")]
        format: Format,
        /// Decimal places for lossy OFF/OBJ coordinates
        #[arg(long, default_value_t = 12)]
        places: usize,
        /// Write output even if certification fails
        #[arg(long)]
        force: bool,
    },
    /// Re-certify a mesh file (OFF, or exact JSON; sidecar preferred)
    Verify { mesh: PathBuf },
    /// Analyze a surface JSON file and print its report
    Report { surface: PathBuf },
}

enum CliError {
    Parse(String),
    Domain(String),
    Certification(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Certification(_) => 4,
            CliError::Internal(_) => 5,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m)
            | CliError::Domain(m)
            | CliError::Certification(m)
            | CliError::Internal(m) => m,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

fn io_err(e: IoError) -> CliError {
    match e {
        IoError::Parse(m) => CliError::Parse(m),
        IoError::Io(m) => CliError::Internal(m.to_string()),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Internal(e.to_string()))
}

fn print_report(surface: &CellSurface) {
    print!("{}", to_json_string(&surface.analyze()));
}

fn cmd_ringel(
    s: usize,
    out: Option<PathBuf>,
    network_out: Option<PathBuf>,
    surface_out: Option<PathBuf>,
) -> Result<(), CliError> {
    let scheme = ringel_scheme(s).map_err(domain)?;
    if let Some(w) = check_delta_star(&scheme) {
        return Err(CliError::Internal(format!(
            "triangulation rule fails at ({}, {}, {})",
            w.i, w.j, w.k
        )));
    }
    let surface = scheme_to_surface(&scheme).map_err(domain)?;
    if let Some(path) = out {
        write_file(&path, &to_json_string(&scheme.to_file()))?;
    }
    if let Some(path) = network_out {
        let net = ringel_network(s);
        trace_current_graph(&net).map_err(domain)?;
        write_file(&path, &to_json_string(&net))?;
    }
    if let Some(path) = surface_out {
        write_file(&path, &to_json_string(&surface.to_file()))?;
    }
    print_report(&surface);
    Ok(())
}

fn cmd_heffter(
    q: usize,
    triangulate: bool,
    actions: bool,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let mut surface = heffter_surface(q).map_err(domain)?;
    if actions {
        let rep = check_self_dual_and_actions(q).map_err(domain)?;
        if !(rep.additive_action && rep.multiplicative_action && rep.dual_complete) {
            return Err(CliError::Certification(format!(
                "symmetry checks failed: {rep:?}"
            )));
        }
        eprintln!("group actions and dual completeness verified");
    }
    if triangulate {
        surface = stellar_triangulation(&surface).map_err(domain)?;
    }
    if let Some(path) = out {
        write_file(&path, &to_json_string(&surface.to_file()))?;
    }
    print_report(&surface);
    Ok(())
}

fn cmd_mirror(m: usize, triangulate: bool, out: Option<PathBuf>) -> Result<(), CliError> {
    let q = build_qm(m).map_err(domain)?;
    let surface = if triangulate {
        triangulate_equivelar(&q).map_err(domain)?
    } else {
        orient_qm(&q).map_err(domain)?
    };
    if let Some(path) = out {
        write_file(&path, &to_json_string(&surface.to_file()))?;
    }
    print_report(&surface);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_realize(
    m: usize,
    eps: String,
    f0: Option<usize>,
    triangulate: bool,
    out: Option<PathBuf>,
    format: Format,
    places: usize,
    force: bool,
) -> Result<(), CliError> {
    let eps: Rat = parse_rational(&eps).map_err(|e| CliError::Parse(e.to_string()))?;
    let mut mesh = realize_surface(m, eps.clone(), f0).map_err(|e| match e {
        SchlegelError::Internal(m) => CliError::Internal(m),
        other => CliError::Domain(other.to_string()),
    })?;
    if triangulate {
        mesh = triangulate_mesh(&mesh).map_err(domain)?;
    }
    let cert = certify(&mesh);
    print!("{}", to_json_string(&cert));
    if !cert.ok() && !force {
        return Err(CliError::Certification(
            "mesh failed certification; not writing output (use --force to override)".into(),
        ));
    }
    if let Some(path) = out {
        let meta = MeshMeta { m, eps: rat_to_string(&eps), f0: f0.unwrap_or(0) };
        match format {
            Format::Json => write_file(&path, &to_json_string(&mesh_to_file(&mesh, Some(meta))))?,
            Format::Off => {
                write_file(&path, &off_string(&mesh, Some(&meta), places))?;
                let sidecar = sidecar_path(&path);
                write_file(&sidecar, &to_json_string(&mesh_to_file(&mesh, Some(meta))))?;
            }
            Format::Obj => {
                write_file(&path, &obj_string(&mesh, Some(&meta), places))?;
                let sidecar = sidecar_path(&path);
                write_file(&sidecar, &to_json_string(&mesh_to_file(&mesh, Some(meta))))?;
            }
        }
    }
    if !cert.ok() {
        return Err(CliError::Certification("mesh failed certification".into()));
    }
    Ok(())
}

fn sidecar_path(path: &Path) -> PathBuf {
    let mut os = path.as_os_str().to_owned();
    os.push(".json");
    PathBuf::from(os)
}

fn load_mesh(path: &Path) -> Result<EmbeddedMesh, CliError> {
    let is_json = path.extension().is_some_and(|e| e == "json");
    let read = |p: &Path| std::fs::read_to_string(p).map_err(|e| CliError::Parse(e.to_string()));
    if is_json {
        let text = read(path)?;
        let file: MeshFile =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
        return mesh_from_file(&file).map_err(io_err);
    }
    let sidecar = sidecar_path(path);
    if sidecar.exists() {
        let text = read(&sidecar)?;
        let file: MeshFile =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
        return mesh_from_file(&file).map_err(io_err);
    }
    parse_off(&read(path)?).map_err(io_err)
}

fn cmd_verify(path: &Path) -> Result<(), CliError> {
    let mesh = load_mesh(path)?;
    let cert = certify(&mesh);
    print!("{}", to_json_string(&cert));
    if cert.ok() {
        Ok(())
    } else {
        Err(CliError::Certification("mesh failed certification".into()))
    }
}

fn cmd_report(path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse(e.to_string()))?;
    let file: SurfaceFile =
        serde_json::from_str(&text).map_err(|e| CliError::Parse(e.to_string()))?;
    let surface = CellSurface::from_file(file).map_err(domain)?;
    print_report(&surface);
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Ringel { s, out, network_out, surface_out } => {
            cmd_ringel(s, out, network_out, surface_out)
        }
        Command::Heffter { q, triangulate, actions, out } => {
            cmd_heffter(q, triangulate, actions, out)
        }
        Command::Mirror { m, triangulate, out } => cmd_mirror(m, triangulate, out),
        Command::Realize { m, eps, f0, triangulate, out, format, places, force } => {
            cmd_realize(m, eps, f0, triangulate, out, format, places, force)
        }
        Command::Verify { mesh } => cmd_verify(&mesh),
        Command::Report { surface } => cmd_report(&surface),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
