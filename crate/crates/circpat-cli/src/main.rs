//! `circpat`: scriptable front end over pattern files.
//!
//! Pattern files travel on stdin/stdout unless `--input`/`--output` name
//! files. Exit codes: 0 success, 1 usage or I/O error, 2 rejected input,
//! 3 solver failure.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use circpat::analysis::pairing::normalized_to_unit_disk;
use circpat::analysis::{
    beltrami_field, good_embedding_report, hilbert_transform_theta, verify_pairing_identity, wp_indicators,
    BoundarySample, HarmonicSpec,
};
use circpat::cell_complex::DiskComplex;
use circpat::cli_io::{gen_mesh, render_svg, MeshFamily, MeshSpec, PatternFileV1, Provenance, SvgOptions, ThetaPolicy};
use circpat::functionals::{FaceField, VertexField};
use circpat::pattern_engine::embed::EMBED_EPS;
use circpat::pattern_engine::{
    conjugate_u_to_v, deform_angles, deform_radii, embeddedness_check, layout, uniformize, Layout, PatternSolution,
    SolveOptions,
};
use circpat::Error;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "circpat", version, about = "Construct, deform and analyze circle patterns")]
struct Cli {
    /// Input pattern file (default: stdin).
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Newton stopping tolerance on the gradient sup-norm.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,
    /// Newton iteration limit.
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// Interior edge whose kite seeds the layout.
    #[arg(long, global = true)]
    seed_edge: Option<usize>,
    /// Face whose radius fixes the scale of angle-parametrised patterns.
    #[arg(long, global = true)]
    gauge: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lattice complex with constant intersection angles.
    Gen {
        /// square-medial, hex-medial, square-grid or imported:<path>
        #[arg(long, default_value = "square-medial")]
        family: MeshFamily,
        #[arg(long)]
        depth: usize,
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
        #[arg(long, default_value_t = circpat::cli_io::generators::DEFAULT_EPSILON0)]
        epsilon0: f64,
    },
    /// Solve for interior radii with prescribed boundary radii.
    Uniformize {
        /// A positive number, or `lattice` for the closed-form lattice radii
        /// (sqrt 3 on hexagons, 1 elsewhere).
        #[arg(long, default_value = "1.0")]
        boundary_radii: String,
    },
    /// Deform the current pattern by log-radius boundary data.
    DeformRadii {
        /// Harmonic boundary data: re:n, im:n, poly:c0,c1,... or const:c
        #[arg(long)]
        boundary: HarmonicSpec,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Deform the current pattern by central-angle boundary data.
    DeformAngles {
        #[arg(long)]
        boundary: HarmonicSpec,
        #[arg(long, default_value_t = 1.0)]
        amplitude: f64,
    },
    /// Integrate the central-angle field of a log-radius deformation.
    Conjugate {
        /// Vertex where the integrated field vanishes.
        #[arg(long)]
        root: Option<usize>,
    },
    /// Lay out the current pattern in the plane.
    Layout,
    /// Render the current pattern as SVG.
    Render {
        #[arg(long)]
        dual: bool,
        #[arg(long)]
        no_circles: bool,
        #[arg(long)]
        no_primal: bool,
        #[arg(long)]
        color_by: Option<ColorBy>,
    },
    /// Diagnostics of a pattern or a deformation.
    Analyze {
        #[command(subcommand)]
        what: Analyze,
    },
    /// Boundary log-radii to boundary central angles, as CSV.
    Hilbert {
        #[arg(long, default_value = "re:1")]
        boundary: HarmonicSpec,
        #[arg(long, default_value_t = 0.05)]
        amplitude: f64,
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum Analyze {
    /// Boundary pairing of two harmonic test functions, as CSV.
    Pairing {
        #[arg(long)]
        u: HarmonicSpec,
        #[arg(long)]
        v: HarmonicSpec,
        /// Generate uniform patterns at these depths instead of reading a file.
        #[arg(long, value_delimiter = ',')]
        depths: Option<Vec<usize>>,
        #[arg(long, default_value = "square-medial")]
        family: MeshFamily,
    },
    /// Beltrami coefficients of the deformation from the reference pattern.
    Beltrami,
    /// Angle and edge-ratio bounds and the overlap check of the layout.
    Embedding {
        /// Bound on the ratio of adjacent edge lengths.
        #[arg(long, default_value_t = 10.0)]
        d: f64,
        /// Bound below on the angles.
        #[arg(long, default_value_t = 0.1)]
        eta: f64,
    },
    /// Quasiconformality indicators of the log-radius deformation.
    Wp,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColorBy {
    /// The log-radius deformation.
    U,
    /// The log-radii.
    Radius,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Lib(Error::Io(e))
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Lib(e) if e.is_validation_failure() => 2,
            CliError::Lib(e) if e.is_solver_failure() => 3,
            CliError::Lib(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) => f.write_str(s),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Lib(Error::Io(e))) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("circpat: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn read_input(path: Option<&Path>) -> CliResult<PatternFileV1> {
    Ok(match path {
        Some(p) => PatternFileV1::load(p)?,
        None => PatternFileV1::from_reader(BufReader::new(io::stdin().lock()))?,
    })
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> CliResult<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn write_file(cli: &Cli, file: &PatternFileV1) -> CliResult<()> {
    with_output(cli.output.as_deref(), |w| Ok(file.to_writer(w)?))
}

fn write_json(cli: &Cli, v: &Value) -> CliResult<()> {
    with_output(cli.output.as_deref(), |w| {
        serde_json::to_writer_pretty(&mut *w, v).map_err(Error::from)?;
        writeln!(w)?;
        Ok(())
    })
}

fn params(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => Map::new(),
    }
}

fn missing(what: &str, hint: &str) -> CliError {
    CliError::Lib(Error::InvalidSpec(format!("input file has no {what}; {hint}")))
}

fn current_pattern(file: &PatternFileV1) -> CliResult<PatternSolution> {
    file.pattern().ok_or_else(|| missing("radii", "run `uniformize` first"))
}

fn solve_options(cli: &Cli) -> SolveOptions {
    let mut o = SolveOptions::with_tol(cli.tol);
    o.newton.max_iter = cli.max_iter;
    o.gauge_face = cli.gauge;
    o
}

/// The stored layout when it matches the complex, else a fresh one.
fn layout_of(cli: &Cli, file: &PatternFileV1, p: &PatternSolution) -> CliResult<Layout> {
    match &file.layout {
        Some(l) if cli.seed_edge.is_none() => Ok(l.clone()),
        _ => Ok(layout(&file.complex, p, cli.seed_edge)?),
    }
}

fn lattice_radius(c: &DiskComplex, f: usize) -> f64 {
    if c.face_vertices(f).len() == 6 {
        3f64.sqrt()
    } else {
        1.0
    }
}

fn boundary_log_radii(c: &DiskComplex, spec: &str) -> CliResult<FaceField> {
    let value: Box<dyn Fn(usize) -> f64> = if spec == "lattice" {
        Box::new(|f| lattice_radius(c, f).ln())
    } else {
        let r: f64 = spec.parse().map_err(|_| {
            CliError::Usage(format!(
                "--boundary-radii: expected a number or `lattice`, got `{spec}`"
            ))
        })?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::InvalidSpec(format!("boundary radius {r} must be positive")).into());
        }
        Box::new(move |_| r.ln())
    };
    let nf = c.num_faces();
    let mut values = vec![0.0; nf];
    let mut free = vec![true; nf];
    for f in c.boundary_faces() {
        values[f] = value(f);
        free[f] = false;
    }
    Ok(FaceField::new(values, free))
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Gen {
            family,
            depth,
            theta,
            epsilon0,
        } => {
            let spec = MeshSpec {
                family: family.clone(),
                depth: *depth,
                theta: ThetaPolicy::Constant(*theta),
                epsilon0: *epsilon0,
            };
            let (c, th) = gen_mesh(&spec)?;
            let mut file = PatternFileV1::new(c, th);
            file.provenance.push(Provenance::now(
                "gen",
                params(json!({ "family": family.to_string(), "depth": depth, "theta": theta, "epsilon0": epsilon0 })),
            ));
            write_file(cli, &file)
        }
        Command::Uniformize { boundary_radii } => {
            let mut file = read_input(cli.input.as_deref())?;
            let data = boundary_log_radii(&file.complex, boundary_radii)?;
            let (p, rep) = uniformize(&file.complex, &file.angles, &data, &solve_options(cli))?;
            eprintln!("uniformize: {} iterations, residual {:.3e}", rep.iterations, p.residual);
            file.radii = Some(p.radii);
            file.reference_radii = None;
            file.log_radii = None;
            file.vertex_field = None;
            file.layout = None;
            file.provenance.push(Provenance::now(
                "uniformize",
                params(json!({
                    "boundary_radii": boundary_radii, "tol": cli.tol,
                    "iterations": rep.iterations, "residual": p.residual,
                })),
            ));
            write_file(cli, &file)
        }
        Command::DeformRadii { boundary, amplitude } => {
            let mut file = read_input(cli.input.as_deref())?;
            let c = &file.complex;
            let reference = current_pattern(&file)?;
            let ln = normalized_to_unit_disk(c, &layout(c, &reference, cli.seed_edge)?);
            let nf = c.num_faces();
            let mut values = vec![0.0; nf];
            let mut free = vec![true; nf];
            for f in c.boundary_faces() {
                values[f] = amplitude * boundary.eval(ln.z_f[f]);
                free[f] = false;
            }
            let d = deform_radii(
                c,
                &file.angles,
                &reference,
                &FaceField::new(values, free),
                &solve_options(cli),
            )?;
            eprintln!(
                "deform-radii: {} iterations, residual {:.3e}, energy {:.6e}",
                d.report.iterations, d.pattern.residual, d.energy
            );
            let prov = params(json!({
                "boundary": boundary.to_string(), "amplitude": amplitude, "tol": cli.tol,
                "iterations": d.report.iterations, "residual": d.pattern.residual, "energy": d.energy,
            }));
            file.reference_radii = Some(reference.radii);
            file.radii = Some(d.pattern.radii);
            file.log_radii = Some(d.u);
            file.vertex_field = None;
            file.layout = None;
            file.provenance.push(Provenance::now("deform-radii", prov));
            write_file(cli, &file)
        }
        Command::DeformAngles { boundary, amplitude } => {
            let mut file = read_input(cli.input.as_deref())?;
            let c = &file.complex;
            let reference = current_pattern(&file)?;
            let ln = normalized_to_unit_disk(c, &layout(c, &reference, cli.seed_edge)?);
            let nv = c.num_vertices();
            let mut values = vec![0.0; nv];
            let mut free = vec![true; nv];
            for v in (0..nv).filter(|&v| c.is_boundary_vertex(v)) {
                values[v] = amplitude * boundary.eval(ln.z_v[v]);
                free[v] = false;
            }
            let d = deform_angles(
                c,
                &file.angles,
                &reference,
                &VertexField::new(values, free),
                &solve_options(cli),
            )?;
            eprintln!(
                "deform-angles: {} iterations, holonomy residual {:.3e}",
                d.report.iterations, d.holonomy_residual
            );
            let u: Vec<f64> = d
                .pattern
                .radii
                .iter()
                .zip(&reference.radii)
                .map(|(r, r0)| (r / r0).ln())
                .collect();
            let u_free = (0..c.num_faces()).map(|f| !c.is_boundary_face(f)).collect();
            let prov = params(json!({
                "boundary": boundary.to_string(), "amplitude": amplitude, "tol": cli.tol,
                "iterations": d.report.iterations, "holonomy_residual": d.holonomy_residual,
            }));
            file.log_radii = Some(FaceField::new(u, u_free));
            file.reference_radii = Some(reference.radii);
            file.radii = Some(d.pattern.radii);
            file.vertex_field = Some(d.v);
            file.layout = None;
            file.provenance.push(Provenance::now("deform-angles", prov));
            write_file(cli, &file)
        }
        Command::Conjugate { root } => {
            let mut file = read_input(cli.input.as_deref())?;
            let u = file
                .log_radii
                .clone()
                .ok_or_else(|| missing("log-radius deformation", "run `deform-radii` first"))?;
            let reference = file
                .reference_pattern()
                .ok_or_else(|| missing("radii", "run `uniformize` first"))?;
            let cj = conjugate_u_to_v(&file.complex, &file.angles, &reference, &u, *root)?;
            eprintln!("conjugate: closedness {:.3e}", cj.closedness);
            file.vertex_field = Some(cj.v);
            file.provenance.push(Provenance::now(
                "conjugate",
                params(json!({ "root": root, "closedness": cj.closedness })),
            ));
            write_file(cli, &file)
        }
        Command::Layout => {
            let mut file = read_input(cli.input.as_deref())?;
            let p = current_pattern(&file)?;
            let l = layout(&file.complex, &p, cli.seed_edge)?;
            eprintln!("layout: gluing residual {:.3e}", l.gluing_residual);
            file.provenance.push(Provenance::now(
                "layout",
                params(json!({ "seed_edge": cli.seed_edge, "gluing_residual": l.gluing_residual })),
            ));
            file.layout = Some(l);
            write_file(cli, &file)
        }
        Command::Render {
            dual,
            no_circles,
            no_primal,
            color_by,
        } => {
            let file = read_input(cli.input.as_deref())?;
            let p = current_pattern(&file)?;
            let l = layout_of(cli, &file, &p)?;
            let color = match color_by {
                None => None,
                Some(ColorBy::Radius) => Some(p.log_radii()),
                Some(ColorBy::U) => Some(
                    file.log_radii
                        .as_ref()
                        .ok_or_else(|| missing("log-radius deformation", "run `deform-radii` first"))?
                        .values
                        .clone(),
                ),
            };
            let opts = SvgOptions {
                circles: !no_circles,
                primal: !no_primal,
                dual: *dual,
                color_by: color,
            };
            let svg = render_svg(&file.complex, &l, &p, &opts);
            with_output(cli.output.as_deref(), |w| Ok(w.write_all(svg.as_bytes())?))
        }
        Command::Analyze { what } => analyze(cli, what),
        Command::Hilbert {
            boundary,
            amplitude,
            samples,
        } => {
            let file = read_input(cli.input.as_deref())?;
            let p = current_pattern(&file)?;
            let l = layout_of(cli, &file, &p)?;
            let input = BoundarySample::uniform(*samples, |t| amplitude * boundary.eval(Complex64::from_polar(1.0, t)));
            let h = hilbert_transform_theta(&file.complex, &file.angles, &p, &l, &input, &solve_options(cli))?;
            with_output(cli.output.as_deref(), |w| {
                writeln!(w, "theta,u,v")?;
                for (t, v) in h.output.angles.iter().zip(&h.output.values) {
                    writeln!(w, "{t:.12},{:.12e},{v:.12e}", input.interpolate(*t))?;
                }
                Ok(())
            })
        }
    }
}

fn analyze(cli: &Cli, what: &Analyze) -> CliResult<()> {
    match what {
        Analyze::Pairing { u, v, depths, family } => {
            let rows = match depths {
                Some(ds) => {
                    let mut rows = Vec::new();
                    for &d in ds {
                        let (c, th) = gen_mesh(&MeshSpec::new(family.clone(), d))?;
                        let data = boundary_log_radii(&c, "lattice")?;
                        let (p, _) = uniformize(&c, &th, &data, &solve_options(cli))?;
                        let l = layout(&c, &p, cli.seed_edge)?;
                        rows.push((d.to_string(), verify_pairing_identity(&c, &l, u, v)));
                    }
                    rows
                }
                None => {
                    let file = read_input(cli.input.as_deref())?;
                    let p = current_pattern(&file)?;
                    let l = layout_of(cli, &file, &p)?;
                    vec![(String::new(), verify_pairing_identity(&file.complex, &l, u, v))]
                }
            };
            with_output(cli.output.as_deref(), |w| {
                writeln!(w, "depth,b,two_pi_omega,rel_err")?;
                for (d, r) in &rows {
                    writeln!(w, "{d},{:.12e},{:.12e},{:.6e}", r.b, r.two_pi_omega, r.rel_error)?;
                }
                Ok(())
            })
        }
        Analyze::Beltrami => {
            let file = read_input(cli.input.as_deref())?;
            let (reference, deformed) = deformation(&file)?;
            let l = layout(&file.complex, &reference, cli.seed_edge)?;
            let field = beltrami_field(&file.complex, &file.angles, &reference.kites, &deformed.kites, &l)?;
            let mean = field.mu.iter().map(|m| m.norm()).sum::<f64>() / field.mu.len().max(1) as f64;
            write_json(
                cli,
                &json!({
                    "triangles": field.mu.len(),
                    "sup_abs_mu": field.sup_abs(),
                    "mean_abs_mu": mean,
                    "angle_floor": field.angle_floor,
                    "bound": field.bound(),
                    "within_bound": field.sup_abs() < field.bound(),
                }),
            )
        }
        Analyze::Embedding { d, eta } => {
            let file = read_input(cli.input.as_deref())?;
            let p = current_pattern(&file)?;
            let l = layout_of(cli, &file, &p)?;
            let good = good_embedding_report(&l, &file.complex, *d, *eta);
            let emb = embeddedness_check(&l, &file.complex, EMBED_EPS);
            write_json(
                cli,
                &json!({
                    "min_angle": good.min_angle,
                    "max_ratio": good.max_ratio,
                    "d": d,
                    "eta": eta,
                    "good": good.pass,
                    "embedded": emb.embedded,
                    "overlaps": emb.overlaps,
                    "gluing_residual": l.gluing_residual,
                }),
            )
        }
        Analyze::Wp => {
            let file = read_input(cli.input.as_deref())?;
            let (reference, deformed) = deformation(&file)?;
            let l = layout(&file.complex, &reference, cli.seed_edge)?;
            let field = beltrami_field(&file.complex, &file.angles, &reference.kites, &deformed.kites, &l)?;
            let u: Vec<f64> = deformed
                .radii
                .iter()
                .zip(&reference.radii)
                .map(|(r, r0)| (r / r0).ln())
                .collect();
            let ind = wp_indicators(&file.complex, &u, &field);
            write_json(
                cli,
                &json!({
                    "sup_gradient": ind.sup_gradient,
                    "energy": ind.energy,
                    "l2_hyperbolic": ind.l2_hyperbolic,
                    "c1": ind.c1,
                    "a0": ind.a0,
                    "chain_bound": ind.chain_bound(),
                }),
            )
        }
    }
}

/// Reference and deformed patterns of a file written by a deform command.
fn deformation(file: &PatternFileV1) -> CliResult<(PatternSolution, PatternSolution)> {
    let r = file
        .reference_radii
        .clone()
        .ok_or_else(|| missing("reference radii", "run `deform-radii` or `deform-angles` first"))?;
    let reference = PatternSolution::from_radii(&file.complex, &file.angles, r);
    Ok((reference, current_pattern(file)?))
}
