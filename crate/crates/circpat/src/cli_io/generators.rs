//! Deterministic generators of lattice complexes.
//!
//! The medial complexes keep the cells whose centres lie in a Euclidean
//! ball of radius `depth` (in lattice spacings), so truncations approximate
//! a round disk as the depth grows.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cell_complex::{validate_complex, validate_theta, AngleData, DiskComplex, DEFAULT_LOOP_CAP};
use crate::error::{Error, Result};

use super::pattern_file::PatternFileV1;

/// Default lower margin of the intersection angles.
pub const DEFAULT_EPSILON0: f64 = 0.1;

/// Lattice family of a generated complex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum MeshFamily {
    /// Medial complex of the square lattice: every vertex has degree 4.
    SquareMedial,
    /// Medial complex of the triangular lattice: hexagons and triangles.
    HexMedial,
    /// `depth x depth` block of unit squares.
    SquareGrid,
    /// Complex read from a pattern file.
    Imported(PathBuf),
}

impl FromStr for MeshFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square-medial" => Ok(MeshFamily::SquareMedial),
            "hex-medial" => Ok(MeshFamily::HexMedial),
            "square-grid" => Ok(MeshFamily::SquareGrid),
            _ => match s.strip_prefix("imported:") {
                Some(p) => Ok(MeshFamily::Imported(PathBuf::from(p))),
                None => Err(Error::UnsupportedFamily(s.to_string())),
            },
        }
    }
}

impl fmt::Display for MeshFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeshFamily::SquareMedial => f.write_str("square-medial"),
            MeshFamily::HexMedial => f.write_str("hex-medial"),
            MeshFamily::SquareGrid => f.write_str("square-grid"),
            MeshFamily::Imported(p) => write!(f, "imported:{}", p.display()),
        }
    }
}

/// How intersection angles are assigned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ThetaPolicy {
    Constant(f64),
    PerEdge(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub family: MeshFamily,
    pub depth: usize,
    pub theta: ThetaPolicy,
    pub epsilon0: f64,
}

impl MeshSpec {
    /// Spec with right intersection angles.
    pub fn new(family: MeshFamily, depth: usize) -> Self {
        MeshSpec {
            family,
            depth,
            theta: ThetaPolicy::Constant(PI / 2.0),
            epsilon0: DEFAULT_EPSILON0,
        }
    }
}

/// Build and validate the complex and angles described by `spec`.
pub fn gen_mesh(spec: &MeshSpec) -> Result<(DiskComplex, AngleData)> {
    let c = match &spec.family {
        MeshFamily::Imported(path) => PatternFileV1::load(path)?.complex,
        family => {
            if spec.depth == 0 {
                return Err(Error::InvalidSpec("depth must be at least 1".into()));
            }
            match family {
                MeshFamily::SquareMedial => square_medial(spec.depth),
                MeshFamily::HexMedial => hex_medial(spec.depth),
                MeshFamily::SquareGrid => square_grid(spec.depth),
                MeshFamily::Imported(_) => unreachable!(),
            }
        }
    };
    let rep = validate_complex(&c);
    if !rep.is_valid() {
        return Err(Error::InvalidComplex(rep.violations));
    }
    let th = match &spec.theta {
        ThetaPolicy::Constant(t) => AngleData::constant(&c, *t, spec.epsilon0),
        ThetaPolicy::PerEdge(v) => AngleData {
            theta: v.clone(),
            epsilon0: spec.epsilon0,
        },
    };
    let rep = validate_theta(&c, &th, DEFAULT_LOOP_CAP);
    if !rep.is_valid() {
        return Err(Error::InvalidAngles(rep.violations));
    }
    Ok((c, th))
}

/// Assemble a complex from faces given as cycles of integer points, sorting
/// faces by centre and vertices by position for a compact band structure.
fn assemble(mut faces: Vec<((i64, i64), Vec<(i64, i64)>)>) -> DiskComplex {
    faces.sort_by_key(|(ctr, _)| (ctr.1, ctr.0));
    let mut pts: Vec<(i64, i64)> = faces.iter().flat_map(|(_, p)| p.iter().copied()).collect();
    pts.sort_by_key(|p| (p.1, p.0));
    pts.dedup();
    let index: HashMap<(i64, i64), usize> = pts.iter().enumerate().map(|(k, p)| (*p, k)).collect();
    let cycles = faces
        .iter()
        .map(|(_, p)| p.iter().map(|q| index[q]).collect())
        .collect();
    DiskComplex::from_faces(pts.len(), cycles).expect("generated faces are consistently oriented")
}

/// Medial complex of the square lattice in doubled coordinates: vertex
/// faces sit at even points, face faces at odd points.
pub fn square_medial(depth: usize) -> DiskComplex {
    let d = depth as i64;
    let mut faces = Vec::new();
    for x in -2 * d..=2 * d {
        for y in -2 * d..=2 * d {
            if x * x + y * y > 4 * d * d || (x + y).rem_euclid(2) != 0 {
                continue;
            }
            let poly = if x.rem_euclid(2) == 0 {
                vec![(x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1)]
            } else {
                vec![(x, y - 1), (x + 1, y), (x, y + 1), (x - 1, y)]
            };
            faces.push(((x, y), poly));
        }
    }
    assemble(faces)
}

/// Medial complex of the triangular lattice. Points are `a + b w` with
/// `w = e^{i pi/3}`, vertices are doubled edge midpoints, and a cell is kept
/// when its centre has norm at most `depth`.
pub fn hex_medial(depth: usize) -> DiskComplex {
    let d = depth as i64;
    let norm2 = |a: i64, b: i64| a * a + a * b + b * b;
    // sort key: the centre in a scaled Cartesian frame, (6a + 3b, 3b) ~ (x, y)
    let key = |a3: i64, b3: i64| (2 * a3 + b3, b3);
    let mut faces = Vec::new();
    for a in -2 * d - 1..=2 * d + 1 {
        for b in -2 * d - 1..=2 * d + 1 {
            if norm2(a, b) <= d * d {
                let dirs = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];
                let poly = dirs.iter().map(|(da, db)| (2 * a + da, 2 * b + db)).collect();
                faces.push((key(3 * a, 3 * b), poly));
            }
            if norm2(3 * a + 1, 3 * b + 1) <= 9 * d * d {
                let poly = vec![(2 * a + 1, 2 * b), (2 * a + 1, 2 * b + 1), (2 * a, 2 * b + 1)];
                faces.push((key(3 * a + 1, 3 * b + 1), poly));
            }
            if norm2(3 * a + 2, 3 * b + 2) <= 9 * d * d {
                let poly = vec![(2 * a + 2, 2 * b + 1), (2 * a + 1, 2 * b + 2), (2 * a + 1, 2 * b + 1)];
                faces.push((key(3 * a + 2, 3 * b + 2), poly));
            }
        }
    }
    assemble(faces)
}

/// `n x n` block of unit squares.
pub fn square_grid(n: usize) -> DiskComplex {
    let n = n as i64;
    let mut faces = Vec::new();
    for y in 0..n {
        for x in 0..n {
            let poly = vec![(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)];
            faces.push(((x, y), poly));
        }
    }
    assemble(faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_names_round_trip() {
        for s in ["square-medial", "hex-medial", "square-grid", "imported:a/b.json"] {
            assert_eq!(s.parse::<MeshFamily>().unwrap().to_string(), s);
        }
        assert!(matches!(
            "pentagons".parse::<MeshFamily>(),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn square_medial_depth_one_counts() {
        let c = square_medial(1);
        assert_eq!((c.num_vertices(), c.num_edges(), c.num_faces()), (16, 24, 9));
        assert_eq!(c.interior_vertices().len(), 4);
        assert_eq!(c.num_interior_edges(), 12);
    }

    #[test]
    fn hex_medial_depth_one_counts() {
        let c = hex_medial(1);
        let hexes = c.faces().iter().filter(|f| f.len() == 6).count();
        let tris = c.faces().iter().filter(|f| f.len() == 3).count();
        assert_eq!((hexes, tris), (7, 6));
    }

    #[test]
    fn families_validate() {
        for d in 1..=6 {
            for family in [MeshFamily::SquareMedial, MeshFamily::HexMedial, MeshFamily::SquareGrid] {
                gen_mesh(&MeshSpec::new(family.clone(), d)).unwrap_or_else(|e| panic!("{family:?} {d}: {e}"));
            }
        }
    }

    #[test]
    fn depth_zero_and_unknown_family() {
        assert!(gen_mesh(&MeshSpec::new(MeshFamily::SquareMedial, 0)).is_err());
        assert!(matches!(
            "torus".parse::<MeshFamily>(),
            Err(Error::UnsupportedFamily(_))
        ));
    }

    #[test]
    fn deterministic() {
        assert_eq!(hex_medial(4), hex_medial(4));
        assert_eq!(square_medial(5), square_medial(5));
    }
}
