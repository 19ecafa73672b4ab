use clap::{Parser, Subcommand};
use g1surf::basis::{self, BasisError, SplineBasis};
use g1surf::dimension::{self, SeparabilityMode};
use g1surf::gluing::{self, GluedSurface, Level};
use g1surf::io;
use g1surf::ratpoly::rational::{parse_rational, to_f64};
use g1surf::ratpoly::{FaceKind, Rational};
use g1surf::syzygy::MuBasisReport;
use g1surf::{fixtures, verify};
use num_traits::Zero;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_VALIDATION: u8 = 1;
const EXIT_CERTIFICATION: u8 = 2;
const EXIT_INPUT: u8 = 3;

/// Exact G1 spline spaces on quad/triangle surfaces.
#[derive(Parser)]
#[command(name = "g1surf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the surface structure, vertex compatibility and edge topology.
    Validate {
        /// surface file, or @name for a built-in fixture
        surface: String,
        /// treat warnings as failures
        #[arg(long)]
        strict: bool,
    },
    /// Dimension of the degree-k spline space with its vertex/edge/face breakdown.
    Dim {
        surface: String,
        #[arg(long)]
        degree: usize,
        /// compute edge separability exactly instead of using the syzygy-degree bound
        #[arg(long)]
        exact_separability: bool,
        /// print the per-edge μ-basis data
        #[arg(long)]
        explain: bool,
        /// also compute the dimension from the full constraint system and compare
        #[arg(long)]
        oracle: bool,
        /// print the report as JSON
        #[arg(long)]
        json: bool,
    },
    /// Build and certify a basis, writing it as a basis file.
    Basis {
        surface: String,
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-certify a basis file against a surface.
    Check { surface: String, basis: PathBuf },
    /// Evaluate a combination of basis functions on a per-face grid, as CSV.
    Sample {
        surface: String,
        basis: PathBuf,
        /// JSON array with one rational per basis function
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, default_value_t = 8)]
        grid: usize,
        /// output file; stdout if omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a built-in fixture as a surface file.
    Fixture {
        /// fixture name; lists the names if omitted
        name: Option<String>,
    },
}

/// Failure carrying its exit status.
struct Failure(u8, String);

type CmdResult = Result<(), Failure>;

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure(EXIT_INPUT, e.to_string())
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_surface(arg: &str) -> Result<GluedSurface, Failure> {
    if let Some(name) = arg.strip_prefix('@') {
        return fixtures::by_name(name).ok_or_else(|| {
            input(format!(
                "unknown fixture {name}; available: {}",
                fixtures::NAMES.join(", ")
            ))
        });
    }
    let text = read(Path::new(arg))?;
    io::parse_surface(&text).map_err(|e| input(format!("{arg}: {e}")))
}

/// Runs all validation checks, printing one line per finding; true if nothing failed.
fn validate(gs: &GluedSurface, strict: bool, quiet: bool) -> Result<bool, Failure> {
    let mut ok = true;
    for v in 0..gs.surface.vertices.len() {
        let label = gs.surface.vertices[v].label(&gs.surface);
        match gluing::check_vertex_compatibility(gs, v) {
            Ok(crossing) => {
                if !quiet {
                    let note = if crossing { " (crossing vertex)" } else { "" };
                    println!("pass  {label}: compatible{note}");
                }
            }
            Err(e) => {
                ok = false;
                println!("FAIL  {label}: {e}");
            }
        }
    }
    let findings =
        gluing::check_topology(gs, strict).map_err(|e| Failure(EXIT_VALIDATION, e.to_string()))?;
    for f in findings {
        let tag = match f.level {
            Level::Pass => "pass ",
            Level::Warn => "warn ",
            Level::Fail => "FAIL ",
        };
        if f.level == Level::Fail {
            ok = false;
        }
        if !quiet || f.level != Level::Pass {
            println!("{tag} {}: {}", f.subject, f.message);
        }
    }
    Ok(ok)
}

fn cmd_validate(surface: &str, strict: bool) -> CmdResult {
    let gs = load_surface(surface)?;
    let c = gs
        .surface
        .counts(&gs.crossing_vertices().unwrap_or_default());
    println!(
        "surface: {} quads, {} triangles, {} edges ({} boundary), {} vertices ({} boundary)",
        c.f_quad, c.f_tri, c.f_edges, c.f_boundary_edges, c.f_vertices, c.f_boundary_vertices
    );
    if validate(&gs, strict, false)? {
        println!("valid");
        Ok(())
    } else {
        Err(Failure(EXIT_VALIDATION, "validation failed".into()))
    }
}

fn require_valid(gs: &GluedSurface) -> CmdResult {
    if validate(gs, false, true)? {
        Ok(())
    } else {
        Err(Failure(EXIT_VALIDATION, "validation failed".into()))
    }
}

fn cmd_dim(
    surface: &str,
    k: usize,
    exact: bool,
    explain: bool,
    oracle: bool,
    json: bool,
) -> CmdResult {
    let gs = load_surface(surface)?;
    require_valid(&gs)?;
    let mode = if exact {
        SeparabilityMode::Exact
    } else {
        SeparabilityMode::Bound
    };
    let report = dimension::dim_spline_space(&gs, k, mode).map_err(input)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).map_err(input)?);
    } else {
        println!("dimension: {}", report.dimension);
        println!("degree: {k}");
        println!(
            "threshold s*: {} ({:?} separability)",
            report.s_star, report.separability_mode
        );
        if report.from_oracle {
            println!("below s*: dimension taken from the full constraint system");
        } else {
            let vsum: usize = report.vertices.iter().map(|v| v.dim_h).sum();
            let esum: i64 = report.edges.iter().map(|e| e.dim_e).sum();
            let fsum: usize = report.faces.iter().map(|f| f.interior).sum();
            println!(
                "breakdown: vertices {vsum} + edges {esum} + faces {fsum} = {}",
                report.breakdown_total
            );
        }
        println!("closed form: {}", report.closed_form);
        for v in &report.vertices {
            println!(
                "  vertex {}: faces {}, crossing edges {}, dim H {}",
                v.vertex, v.faces, v.sum_crossing, v.dim_h
            );
        }
        for e in &report.edges {
            println!(
                "  edge {}: separability {}, d_tau {}, dim E {}",
                e.edge, e.separability, e.d_tau, e.dim_e
            );
        }
    }
    if explain {
        for e in gs.surface.interior_edges() {
            let r = MuBasisReport::for_edge(&gs, e).map_err(input)?;
            println!("{}", serde_json::to_string(&r).map_err(input)?);
        }
    }
    if oracle {
        let o = verify::brute_force_dimension(&gs, k).map_err(input)?;
        if o == report.dimension {
            println!("oracle: {o} (agrees)");
        } else {
            return Err(Failure(
                EXIT_CERTIFICATION,
                format!("oracle: {o}, formula: {}", report.dimension),
            ));
        }
    }
    Ok(())
}

fn cmd_basis(surface: &str, k: usize, out: &Path) -> CmdResult {
    let gs = load_surface(surface)?;
    require_valid(&gs)?;
    let b = basis::full_basis(&gs, k).map_err(|e| match e {
        BasisError::BelowSeparability { .. } => input(e),
        other => Failure(EXIT_CERTIFICATION, other.to_string()),
    })?;
    std::fs::write(out, io::print_basis(&gs, &b))
        .map_err(|e| input(format!("{}: {e}", out.display())))?;
    println!(
        "wrote {} certified basis functions of degree {k} to {}",
        b.members.len(),
        out.display()
    );
    Ok(())
}

fn load_basis(gs: &GluedSurface, path: &Path) -> Result<SplineBasis, Failure> {
    let text = read(path)?;
    io::parse_basis(&text, gs).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn cmd_check(surface: &str, basis_path: &Path) -> CmdResult {
    let gs = load_surface(surface)?;
    let b = load_basis(&gs, basis_path)?;
    let mut failures = 0;
    let mut line = |ok: bool, msg: String| {
        println!("{} {msg}", if ok { "pass" } else { "FAIL" });
        if !ok {
            failures += 1;
        }
    };
    let mut bad = Vec::new();
    for (tag, s) in &b.members {
        let r = verify::g1_residual(s, &gs);
        if let Some(e) = r.edges.iter().find(|e| !(e.r0.is_zero() && e.r1.is_zero())) {
            bad.push(format!("{tag} on {}: r0 = {}, r1 = {}", e.edge, e.r0, e.r1));
        }
    }
    line(
        bad.is_empty(),
        format!(
            "residuals: {} of {} functions nonzero",
            bad.len(),
            b.members.len()
        ),
    );
    for w in &bad {
        println!("  {w}");
    }
    match dimension::dim_spline_space(&gs, b.degree, SeparabilityMode::Exact) {
        Ok(r) => line(
            r.dimension == b.members.len(),
            format!(
                "count: {} functions, dimension {}",
                b.members.len(),
                r.dimension
            ),
        ),
        Err(e) => line(false, format!("dimension: {e}")),
    }
    let rank = verify::check_independence(&b);
    line(
        rank.rank == rank.count,
        format!("rank: {} of {}", rank.rank, rank.count),
    );
    let d = verify::jet_duality_check(&gs, &b);
    line(
        d.ok(),
        format!("jet duality: {} problems", d.failures.len()),
    );
    for f in &d.failures {
        println!("  {f}");
    }
    let a = verify::ampleness_check(&gs, &b);
    line(
        a.failures.is_empty(),
        format!(
            "ampleness: {} points, {} deficient",
            a.points,
            a.failures.len()
        ),
    );
    for f in &a.failures {
        println!("  {f}");
    }
    if failures == 0 {
        println!("certified");
        Ok(())
    } else {
        Err(Failure(
            EXIT_CERTIFICATION,
            format!("{failures} checks failed"),
        ))
    }
}

fn parse_coeffs(text: &str) -> Result<Vec<Rational>, String> {
    let v: Vec<serde_json::Value> = serde_json::from_str(text).map_err(|e| e.to_string())?;
    v.iter()
        .map(|x| match x {
            serde_json::Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
            serde_json::Value::Number(n) => {
                parse_rational(&n.to_string()).map_err(|e| e.to_string())
            }
            other => Err(format!("not a rational: {other}")),
        })
        .collect()
}

fn cmd_sample(
    surface: &str,
    basis_path: &Path,
    coeffs: &Path,
    grid: usize,
    out: Option<&Path>,
) -> CmdResult {
    let gs = load_surface(surface)?;
    let b = load_basis(&gs, basis_path)?;
    let w =
        parse_coeffs(&read(coeffs)?).map_err(|e| input(format!("{}: {e}", coeffs.display())))?;
    if w.len() != b.members.len() {
        return Err(input(format!(
            "{} coefficients for {} basis functions",
            w.len(),
            b.members.len()
        )));
    }
    if grid == 0 {
        return Err(input("grid must be positive"));
    }
    let mut combo = basis::Spline::zero(&gs.surface, b.degree);
    for (x, (_, s)) in w.iter().zip(&b.members) {
        if !x.is_zero() {
            combo.add_scaled(s, x);
        }
    }
    let sink: Box<dyn std::io::Write> = match out {
        Some(p) => {
            Box::new(std::fs::File::create(p).map_err(|e| input(format!("{}: {e}", p.display())))?)
        }
        None => Box::new(std::io::stdout()),
    };
    let mut wtr = csv::Writer::from_writer(sink);
    wtr.write_record(["face", "u", "v", "value"])
        .map_err(input)?;
    let n = Rational::from_integer(grid.into());
    for (face, p) in gs.surface.faces.iter().zip(&combo.faces) {
        for j in 0..=grid {
            for i in 0..=grid {
                if face.kind == FaceKind::Triangle && i + j > grid {
                    continue;
                }
                let u = Rational::from_integer(i.into()) / &n;
                let v = Rational::from_integer(j.into()) / &n;
                let val = p.eval(&u, &v);
                wtr.write_record([
                    face.id.clone(),
                    format!("{:.6}", to_f64(&u)),
                    format!("{:.6}", to_f64(&v)),
                    format!("{:.12e}", to_f64(&val)),
                ])
                .map_err(input)?;
            }
        }
    }
    wtr.flush().map_err(input)?;
    Ok(())
}

fn cmd_fixture(name: Option<&str>) -> CmdResult {
    match name {
        None => {
            for n in fixtures::NAMES {
                println!("{n}");
            }
            Ok(())
        }
        Some(n) => {
            let gs = load_surface(&format!("@{n}"))?;
            println!("{}", io::print_surface(&gs));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate { surface, strict } => cmd_validate(surface, *strict),
        Command::Dim {
            surface,
            degree,
            exact_separability,
            explain,
            oracle,
            json,
        } => cmd_dim(
            surface,
            *degree,
            *exact_separability,
            *explain,
            *oracle,
            *json,
        ),
        Command::Basis {
            surface,
            degree,
            out,
        } => cmd_basis(surface, *degree, out),
        Command::Check { surface, basis } => cmd_check(surface, basis),
        Command::Sample {
            surface,
            basis,
            coeffs,
            grid,
            out,
        } => cmd_sample(surface, basis, coeffs, *grid, out.as_deref()),
        Command::Fixture { name } => cmd_fixture(name.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
