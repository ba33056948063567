//! Runs of the `circpat` binary: pipelines, file intermediates and exit codes.

use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use circpat::cli_io::PatternFileV1;

fn circpat(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_circpat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(bytes) = stdin {
            pipe.write_all(bytes).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: Option<&[u8]>) -> Vec<u8> {
    let out = circpat(args, stdin);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn parse(bytes: &[u8]) -> PatternFileV1 {
    PatternFileV1::from_reader(bytes).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_uniformize_pipeline() {
    let mesh = ok(&["gen", "--family", "square-medial", "--depth", "8"], None);
    let out = parse(&ok(&["uniformize", "--boundary-radii", "1.0"], Some(&mesh)));
    let p = out.pattern().unwrap();
    assert!(p.residual < 1e-10);
    assert_eq!(out.provenance.len(), 2);
    assert_eq!(out.provenance[1].command, "uniformize");
}

#[test]
fn pipes_match_file_intermediates() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        dir.path().join("a.json"),
        dir.path().join("b.json"),
        dir.path().join("c.json"),
    );
    ok(
        &["gen", "--family", "hex-medial", "--depth", "4", "-o", path_str(&a)],
        None,
    );
    ok(
        &[
            "uniformize",
            "--boundary-radii",
            "lattice",
            "-i",
            path_str(&a),
            "-o",
            path_str(&b),
        ],
        None,
    );
    ok(
        &[
            "deform-radii",
            "--boundary",
            "re:2",
            "--amplitude",
            "0.2",
            "-i",
            path_str(&b),
            "-o",
            path_str(&c),
        ],
        None,
    );
    let from_files = PatternFileV1::load(&c).unwrap();

    let s1 = ok(&["gen", "--family", "hex-medial", "--depth", "4"], None);
    let s2 = ok(&["uniformize", "--boundary-radii", "lattice"], Some(&s1));
    let piped = parse(&ok(
        &["deform-radii", "--boundary", "re:2", "--amplitude", "0.2"],
        Some(&s2),
    ));

    assert_eq!(piped.complex, from_files.complex);
    assert_eq!(piped.angles, from_files.angles);
    assert_eq!(piped.radii, from_files.radii);
    assert_eq!(piped.reference_radii, from_files.reference_radii);
    assert_eq!(piped.log_radii, from_files.log_radii);
}

#[test]
fn deformation_diagnostics() {
    let s = ok(&["gen", "--depth", "6"], None);
    let s = ok(&["uniformize"], Some(&s));
    let d = ok(&["deform-radii", "--boundary", "re:2", "--amplitude", "0.3"], Some(&s));
    let cj = parse(&ok(&["conjugate"], Some(&d)));
    assert!(cj.vertex_field.is_some());
    let closed = cj.provenance.last().unwrap().parameters["closedness"].as_f64().unwrap();
    assert!(closed < 1e-9);

    let bel: serde_json::Value = serde_json::from_slice(&ok(&["analyze", "beltrami"], Some(&d))).unwrap();
    assert_eq!(bel["within_bound"], true);
    assert!(bel["sup_abs_mu"].as_f64().unwrap() > 0.0);
    let wp: serde_json::Value = serde_json::from_slice(&ok(&["analyze", "wp"], Some(&d))).unwrap();
    assert!(wp["l2_hyperbolic"].as_f64().unwrap() <= wp["chain_bound"].as_f64().unwrap());

    let a = ok(
        &["deform-angles", "--boundary", "im:1", "--amplitude", "0.05"],
        Some(&s),
    );
    let a = parse(&a);
    let hol = a.provenance.last().unwrap().parameters["holonomy_residual"]
        .as_f64()
        .unwrap();
    assert!(hol < 1e-10);
    assert!(a.vertex_field.is_some() && a.log_radii.is_some());
}

#[test]
fn layout_and_embedding_report() {
    let s = ok(&["gen", "--depth", "5"], None);
    let s = ok(&["uniformize"], Some(&s));
    let (seed, _, _) = parse(&s).complex.dual_edges().nth(10).unwrap();
    let l = parse(&ok(&["layout", "--seed-edge", &seed.to_string()], Some(&s)));
    assert!(l.layout.as_ref().unwrap().gluing_residual < 1e-12);
    let rep: serde_json::Value = serde_json::from_slice(&ok(&["analyze", "embedding"], Some(&s))).unwrap();
    assert_eq!(rep["embedded"], true);
    assert!((rep["min_angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    assert!((rep["max_ratio"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn pairing_study_csv() {
    let out = ok(
        &["analyze", "pairing", "--u", "re:1", "--v", "im:1", "--depths", "4,8,16"],
        None,
    );
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("depth,b,two_pi_omega,rel_err"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.iter().map(|r| r[0]).collect::<Vec<_>>(), vec![4.0, 8.0, 16.0]);
    assert!(rows.iter().all(|r| (r[2] - std::f64::consts::PI).abs() < 1e-12));
    assert!(rows[1][3] < rows[0][3] && rows[2][3] < rows[1][3]);
}

#[test]
fn render_svg_document() {
    let s = ok(&["gen", "--family", "hex-medial", "--depth", "3"], None);
    let s = ok(&["uniformize", "--boundary-radii", "lattice"], Some(&s));
    let f = parse(&s);
    let svg = String::from_utf8(ok(&["render", "--dual"], Some(&s))).unwrap();
    assert!(svg.starts_with("<?xml"));
    assert_eq!(svg.matches("<circle ").count(), f.complex.num_faces());
    assert_eq!(
        svg.matches("<polyline ").count(),
        f.complex.num_edges() + f.complex.num_interior_edges()
    );
    assert_eq!(svg, String::from_utf8(ok(&["render", "--dual"], Some(&s))).unwrap());
}

#[test]
fn hilbert_csv_follows_the_conjugate() {
    let s = ok(&["gen", "--depth", "8"], None);
    let s = ok(&["uniformize"], Some(&s));
    let text = String::from_utf8(ok(&["hilbert", "--boundary", "re:1", "--amplitude", "0.05"], Some(&s))).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    let sines: Vec<f64> = rows.iter().map(|r| r[0].sin()).collect();
    let out: Vec<f64> = rows.iter().map(|r| r[2]).collect();
    assert!(circpat::analysis::correlation(&sines, &out) > 0.9);
}

#[test]
fn exit_codes() {
    assert_eq!(circpat(&["gen", "--depth", "0"], None).status.code(), Some(2));
    assert_eq!(
        circpat(&["gen", "--family", "pentagons", "--depth", "3"], None)
            .status
            .code(),
        Some(1)
    );
    assert_eq!(circpat(&["frobnicate"], None).status.code(), Some(1));
    assert_eq!(
        circpat(&["layout", "-i", "/nonexistent/file.json"], None).status.code(),
        Some(1)
    );
    assert_eq!(circpat(&["--help"], None).status.code(), Some(0));

    let s = ok(&["gen", "--depth", "4"], None);
    assert_eq!(circpat(&["layout"], Some(&s)).status.code(), Some(2));
    assert_eq!(
        circpat(&["uniformize", "--boundary-radii", "0"], Some(&s))
            .status
            .code(),
        Some(2)
    );
    let u = ok(&["uniformize"], Some(&s));
    let failed = circpat(
        &[
            "deform-radii",
            "--boundary",
            "re:2",
            "--amplitude",
            "2",
            "--max-iter",
            "1",
            "--tol",
            "1e-15",
        ],
        Some(&u),
    );
    assert_eq!(
        failed.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&failed.stderr)
    );
}

#[test]
fn published_schema_covers_written_files() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let s = ok(&["gen", "--depth", "3"], None);
    let s = ok(&["uniformize"], Some(&s));
    let s = ok(&["deform-radii", "--boundary", "re:1", "--amplitude", "0.1"], Some(&s));
    let s = ok(&["conjugate"], Some(&s));
    let s = ok(&["layout"], Some(&s));
    let file: serde_json::Value = serde_json::from_slice(&s).unwrap();

    let keys = |v: &serde_json::Value| -> Vec<String> {
        let mut k: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
        k.sort();
        k
    };
    let props = |def: &serde_json::Value| keys(&def["properties"]);
    assert_eq!(keys(&file), props(&schema));
    for (field, def) in [
        ("complex", "DiskComplex"),
        ("angles", "AngleData"),
        ("log_radii", "Field"),
        ("vertex_field", "Field"),
        ("layout", "Layout"),
    ] {
        assert_eq!(keys(&file[field]), props(&schema["$defs"][def]), "{field}");
    }
    assert_eq!(keys(&file["complex"]["edges"][0]), props(&schema["$defs"]["Edge"]));
    assert_eq!(keys(&file["provenance"][0]), props(&schema["$defs"]["Provenance"]));
}
