//! Versioned JSON container for complexes, angles, patterns and layouts.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::cell_complex::{AngleData, DiskComplex};
use crate::error::{Error, Result};
use crate::functionals::{FaceField, VertexField};
use crate::pattern_engine::{Layout, PatternSolution};

pub const SCHEMA_VERSION: u32 = 1;

/// One processing step that produced or modified a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub command: String,
    pub parameters: serde_json::Map<String, serde_json::Value>,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

impl Provenance {
    pub fn now(command: &str, parameters: serde_json::Map<String, serde_json::Value>) -> Self {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        Provenance {
            command: command.to_string(),
            parameters,
            timestamp,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternFileV1 {
    pub schema_version: u32,
    pub complex: DiskComplex,
    pub angles: AngleData,
    /// Radii of the current pattern.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    /// Radii of the reference pattern that `log_radii` and `vertex_field`
    /// deform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_radii: Option<Vec<f64>>,
    /// Log-radius deformation `u` relative to the reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_radii: Option<FaceField>,
    /// Central-angle deformation `v` relative to the reference.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_field: Option<VertexField>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<Layout>,
    #[serde(default)]
    pub provenance: Vec<Provenance>,
}

impl PatternFileV1 {
    pub fn new(complex: DiskComplex, angles: AngleData) -> Self {
        PatternFileV1 {
            schema_version: SCHEMA_VERSION,
            complex,
            angles,
            radii: None,
            reference_radii: None,
            log_radii: None,
            vertex_field: None,
            layout: None,
            provenance: Vec::new(),
        }
    }

    /// The current pattern, if radii are present.
    pub fn pattern(&self) -> Option<PatternSolution> {
        let r = self.radii.clone()?;
        Some(PatternSolution::from_radii(&self.complex, &self.angles, r))
    }

    /// The reference pattern, falling back to the current one.
    pub fn reference_pattern(&self) -> Option<PatternSolution> {
        let r = self.reference_radii.clone().or_else(|| self.radii.clone())?;
        Some(PatternSolution::from_radii(&self.complex, &self.angles, r))
    }

    fn check(self) -> Result<Self> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidSpec(format!(
                "unsupported schema version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let (nf, nv) = (self.complex.num_faces(), self.complex.num_vertices());
        let bad = |what: &str, have: usize, need: usize| {
            Err(Error::InvalidSpec(format!(
                "{what} has {have} entries, expected {need}"
            )))
        };
        if self.angles.theta.len() != self.complex.num_edges() {
            return bad("angles", self.angles.theta.len(), self.complex.num_edges());
        }
        for (what, r) in [("radii", &self.radii), ("reference_radii", &self.reference_radii)] {
            if let Some(r) = r {
                if r.len() != nf {
                    return bad(what, r.len(), nf);
                }
                if r.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
                    return Err(Error::InvalidSpec(format!("{what} must be positive and finite")));
                }
            }
        }
        if let Some(u) = &self.log_radii {
            if u.len() != nf || u.free.len() != nf {
                return bad("log_radii", u.len(), nf);
            }
        }
        if let Some(v) = &self.vertex_field {
            if v.len() != nv || v.free.len() != nv {
                return bad("vertex_field", v.len(), nv);
            }
        }
        if let Some(l) = &self.layout {
            if l.z_v.len() != nv || l.z_f.len() != nf {
                return Err(Error::InvalidSpec("layout size does not match the complex".into()));
            }
        }
        Ok(self)
    }

    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let f: PatternFileV1 = serde_json::from_reader(r)?;
        f.check()
    }

    pub fn to_writer<W: Write>(&self, mut w: W) -> Result<()> {
        serde_json::to_writer(&mut w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(BufReader::new(File::open(path)?))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.to_writer(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli_io::generators::square_medial;

    #[test]
    fn round_trip_is_exact() {
        let c = square_medial(2);
        let th = AngleData::constant(&c, 1.234_567_890_123_456_7, 0.1);
        let mut f = PatternFileV1::new(c.clone(), th);
        f.radii = Some((0..c.num_faces()).map(|k| 1.0 / (k as f64 + 3.0)).collect());
        f.provenance.push(Provenance::now("gen", serde_json::Map::new()));
        let mut buf = Vec::new();
        f.to_writer(&mut buf).unwrap();
        let g = PatternFileV1::from_reader(buf.as_slice()).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn rejects_other_versions() {
        let c = square_medial(1);
        let mut f = PatternFileV1::new(c.clone(), AngleData::constant(&c, 1.0, 0.1));
        f.schema_version = 2;
        let mut buf = Vec::new();
        f.to_writer(&mut buf).unwrap();
        assert!(PatternFileV1::from_reader(buf.as_slice()).is_err());
    }
}
