//! The `normsurf` command line.
//!
//! Every command prints a `key=value` summary. Commands that produce an
//! artifact (a triangulation, instance, vector or ray list) write it to
//! `--output` and the summary to stdout; without `--output` the artifact goes
//! to stdout and the summary to stderr.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict, 2 for
//! errors, 64 for usage errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::abstract_problem::{check_compatible, decide_instance, reduce_sat, AbstractInstance, ClauseSet};
use crate::cone::{extreme_rays, filter_admissible, rays_to_text, ConeSystem, Ray};
use crate::detect::{
    enumerate_connected_spanning_central, find_connected_spanning_central_with, find_splitting_surface,
    verify_certificate, DEFAULT_BUDGET,
};
use crate::gadgets::{build_t_g, node_gadget, triangular_pillow, triangular_solid_torus, CubicGraph};
use crate::normal::{matching_system, surface_complex, EulerFunctional, NormalVector};
use crate::skeleton::{is_3manifold, vertex_links, LinkShape, Skeleton};
use crate::triangulation::Triangulation;

pub const EXIT_TRUE: i32 = 0;
pub const EXIT_FALSE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "normsurf", version, about = "Normal surface constructions, reductions and detectors")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Search budget in nodes for backtracking detectors.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Worker threads for ray enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Report every connected spanning central surface, not just the first.
    #[arg(long, global = true)]
    enumerate_all: bool,
    /// Where to write the artifact.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a fixed triangulation.
    Build { what: Builtin },
    /// Reduce a problem instance.
    #[command(subcommand)]
    Reduce(Reduce),
    /// Search for surfaces.
    #[command(subcommand)]
    Detect(Detect),
    /// Enumerate extreme rays.
    #[command(subcommand)]
    Enumerate(Enumerate),
    /// Solve an instance.
    #[command(subcommand)]
    Solve(Solve),
    /// Check a certificate.
    #[command(subcommand)]
    Verify(Verify),
    /// Report the skeleton and vertex links of a triangulation.
    Skeleton { tri: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Builtin {
    Torus,
    Pillow,
    NodeGadget,
}

#[derive(Subcommand, Debug)]
enum Reduce {
    /// Clause file to abstract instance.
    Sat { clauses: PathBuf },
    /// Cubic graph file (or k4, prism, k33, petersen) to triangulation.
    Ham { graph: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Detect {
    /// All-quadrilateral spanning central surface.
    Splitting { tri: PathBuf },
    /// Connected spanning central surface.
    Spanning { tri: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Enumerate {
    /// Extreme rays of a triangulation's standard cone or of an instance cone.
    Rays { input: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Solve {
    Abstract { instance: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Connected spanning central surface certificate.
    Cert { tri: PathBuf, vector: PathBuf },
}

struct Report {
    summary: String,
    artifact: Option<String>,
    code: i32,
}

impl Report {
    fn new(code: i32) -> Report {
        Report { summary: String::new(), artifact: None, code }
    }

    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> &mut Self {
        writeln!(self.summary, "{key}={value}").unwrap();
        self
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_tri(path: &Path) -> Result<Triangulation, String> {
    read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn verdict(b: bool) -> i32 {
    if b {
        EXIT_TRUE
    } else {
        EXIT_FALSE
    }
}

fn coords_line(x: &[i64]) -> String {
    x.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn build(what: Builtin) -> Report {
    let (name, tri) = match what {
        Builtin::Torus => ("torus", triangular_solid_torus()),
        Builtin::Pillow => ("pillow", triangular_pillow()),
        Builtin::NodeGadget => ("node-gadget", node_gadget().0),
    };
    let skel = Skeleton::compute(&tri);
    let mut r = Report::new(EXIT_TRUE);
    r.kv("built", name)
        .kv("tetrahedra", tri.size())
        .kv("gluings", tri.num_gluings())
        .kv("boundary_faces", skel.boundary_faces.len())
        .kv("vertices", skel.vertices.len())
        .kv("edges", skel.edges.len());
    r.artifact = Some(tri.to_text());
    r
}

fn load_graph(path: &Path) -> Result<CubicGraph, String> {
    if !path.exists() {
        match path.to_str() {
            Some("k4") => return Ok(CubicGraph::k4()),
            Some("prism") => return Ok(CubicGraph::prism()),
            Some("k33") => return Ok(CubicGraph::k33()),
            Some("petersen") => return Ok(CubicGraph::petersen()),
            _ => {}
        }
    }
    read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn reduce(cmd: Reduce, output: Option<&Path>) -> Result<Report, String> {
    let mut r = Report::new(EXIT_TRUE);
    match cmd {
        Reduce::Sat { clauses } => {
            let c: ClauseSet = read(&clauses)?.parse().map_err(|e| format!("{}: {e}", clauses.display()))?;
            let inst = reduce_sat(&c).map_err(|e| e.to_string())?;
            let compat = check_compatible(inst.p, &inst.equations).map_err(|e| e.to_string())?;
            r.kv("clauses", c.len())
                .kv("variables", c.variables())
                .kv("tetrahedra", inst.p)
                .kv("equations", inst.equations.len())
                .kv("compatible", compat.compatible);
            r.artifact = Some(inst.to_text());
        }
        Reduce::Ham { graph } => {
            let g = load_graph(&graph)?;
            let red = build_t_g(&g);
            r.kv("nodes", g.nodes())
                .kv("arcs", g.arcs().len())
                .kv("tetrahedra", red.tri.size())
                .kv("closed", red.tri.is_closed());
            if let Some(out) = output {
                let mut side = out.as_os_str().to_owned();
                side.push(".labels");
                let side = PathBuf::from(side);
                fs::write(&side, red.labels_text()).map_err(|e| format!("{}: {e}", side.display()))?;
                r.kv("labels", side.display());
            }
            r.artifact = Some(red.tri.to_text());
        }
    }
    Ok(r)
}

fn describe_surface(r: &mut Report, tri: &Triangulation, x: &NormalVector) {
    if let Ok(info) = surface_complex(tri, x) {
        r.kv("euler", info.euler)
            .kv("orientable", info.orientable)
            .kv("boundary_components", info.boundary_components)
            .kv("connected", info.connected);
    }
}

fn detect(cmd: Detect, g: &Global) -> Result<Report, String> {
    match cmd {
        Detect::Splitting { tri } => {
            let t = read_tri(&tri)?;
            let found = find_splitting_surface(&t).map_err(|e| e.to_string())?;
            let mut r = Report::new(verdict(found.is_some()));
            r.kv("splitting", found.is_some());
            if let Some(x) = found {
                describe_surface(&mut r, &t, &x);
                r.kv("witness", coords_line(x.coords()));
                r.artifact = Some(x.to_text());
            }
            Ok(r)
        }
        Detect::Spanning { tri } => {
            let t = read_tri(&tri)?;
            if g.enumerate_all {
                let (all, stats) = enumerate_connected_spanning_central(&t, g.budget).map_err(|e| e.to_string())?;
                let mut r = Report::new(verdict(!all.is_empty()));
                r.kv("spanning", !all.is_empty()).kv("count", all.len()).kv("nodes", stats.nodes);
                let texts: Vec<String> = all.iter().map(NormalVector::to_text).collect();
                r.artifact = Some(texts.join("\n"));
                return Ok(r);
            }
            let (found, stats) = find_connected_spanning_central_with(&t, g.budget).map_err(|e| e.to_string())?;
            let mut r = Report::new(verdict(found.is_some()));
            r.kv("spanning", found.is_some()).kv("nodes", stats.nodes);
            if let Some(x) = found {
                describe_surface(&mut r, &t, &x);
                r.kv("witness", coords_line(x.coords()));
                r.artifact = Some(x.to_text());
            }
            Ok(r)
        }
    }
}

type RayTest = Box<dyn Fn(&Ray) -> bool>;

fn enumerate(cmd: Enumerate) -> Result<Report, String> {
    let Enumerate::Rays { input } = cmd;
    let text = read(&input)?;
    let first = text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#')).unwrap_or("");
    let (sys, positive): (ConeSystem, RayTest) = if first.starts_with("triangulation") {
        let t: Triangulation = text.parse().map_err(|e| format!("{}: {e}", input.display()))?;
        let weights = EulerFunctional::new(&t).scaled_weights();
        let sys = ConeSystem::from_matching(&matching_system(&t));
        let chi = move |r: &Ray| r.coords().iter().zip(&weights).map(|(a, b)| a * b).sum::<num_bigint::BigInt>() > 0.into();
        (sys, Box::new(chi))
    } else {
        let inst: AbstractInstance = text.parse().map_err(|e| format!("{}: {e}", input.display()))?;
        let sys = inst.cone();
        (sys, Box::new(move |r: &Ray| inst.chi_value(r.coords()) > 0.into()))
    };
    let rays = extreme_rays(&sys);
    let admissible = filter_admissible(&rays, &sys.quad_blocks);
    let mut r = Report::new(EXIT_TRUE);
    r.kv("dim", sys.dim)
        .kv("equations", sys.rows.len())
        .kv("rays", rays.len())
        .kv("admissible", admissible.len())
        .kv("positive_admissible", admissible.iter().filter(|x| positive(x)).count())
        .kv("max_bits", rays.iter().map(Ray::max_bits).max().unwrap_or(0));
    r.artifact = Some(rays_to_text(&rays));
    Ok(r)
}

fn solve(cmd: Solve) -> Result<Report, String> {
    let Solve::Abstract { instance } = cmd;
    let inst: AbstractInstance = read(&instance)?.parse().map_err(|e| format!("{}: {e}", instance.display()))?;
    let d = decide_instance(&inst).map_err(|e| e.to_string())?;
    let mut r = Report::new(verdict(d.answer));
    r.kv("satisfiable", d.answer).kv("admissible_rays", d.admissible_rays);
    if let Some(w) = d.witness {
        let line = rays_to_text(std::slice::from_ref(&w));
        r.kv("chi", inst.chi_value(w.coords())).kv("witness", line.trim_end());
        r.artifact = Some(line);
    }
    Ok(r)
}

fn verify(cmd: Verify) -> Result<Report, String> {
    let Verify::Cert { tri, vector } = cmd;
    let t = read_tri(&tri)?;
    let x: NormalVector = read(&vector)?.parse().map_err(|e| format!("{}: {e}", vector.display()))?;
    let ok = verify_certificate(&t, &x);
    let mut r = Report::new(verdict(ok));
    r.kv("valid", ok);
    if ok {
        describe_surface(&mut r, &t, &x);
    }
    Ok(r)
}

fn skeleton(tri: &Path) -> Result<Report, String> {
    let t = read_tri(tri)?;
    let skel = Skeleton::compute(&t);
    let links = vertex_links(&t).map_err(|e| e.to_string())?;
    let shape = |s: LinkShape| match s {
        LinkShape::Sphere => "sphere",
        LinkShape::Disc => "disc",
        LinkShape::Other => "other",
    };
    let degrees: Vec<String> = skel.degree_multiset().iter().map(usize::to_string).collect();
    let mut r = Report::new(EXIT_TRUE);
    r.kv("tetrahedra", t.size())
        .kv("gluings", t.num_gluings())
        .kv("boundary_faces", skel.boundary_faces.len())
        .kv("vertices", skel.vertices.len())
        .kv("boundary_vertices", skel.vertices.iter().filter(|v| v.boundary).count())
        .kv("edges", skel.edges.len())
        .kv("boundary_edges", skel.edges.iter().filter(|e| e.boundary).count())
        .kv("edge_degrees", degrees.join(","))
        .kv("invalid_edges", skel.edges.iter().filter(|e| e.invalid).count())
        .kv("connected", t.is_connected())
        .kv("orientable", t.is_orientable().map_err(|e| e.to_string())?)
        .kv("links", links.iter().map(|l| shape(l.shape)).collect::<Vec<_>>().join(","))
        .kv("manifold", is_3manifold(&t));
    Ok(r)
}

fn execute(cli: Cli) -> Result<Report, String> {
    let g = &cli.global;
    match cli.command {
        Command::Build { what } => Ok(build(what)),
        Command::Reduce(c) => reduce(c, g.output.as_deref()),
        Command::Detect(c) => detect(c, g),
        Command::Enumerate(c) => enumerate(c),
        Command::Solve(c) => solve(c),
        Command::Verify(c) => verify(c),
        Command::Skeleton { tri } => skeleton(&tri),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_TRUE };
            let _ = e.print();
            return code;
        }
    };
    let output = cli.global.output.clone();
    let result = match cli.global.threads {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(cli)),
            Err(e) => Err(e.to_string()),
        },
        None => execute(cli),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    match (report.artifact, output) {
        (Some(a), Some(path)) => {
            if let Err(e) = fs::write(&path, a) {
                eprintln!("error: {}: {e}", path.display());
                return EXIT_ERROR;
            }
            print!("{}", report.summary);
        }
        (Some(a), None) => {
            print!("{a}");
            eprint!("{}", report.summary);
        }
        (None, _) => print!("{}", report.summary),
    }
    report.code
}
