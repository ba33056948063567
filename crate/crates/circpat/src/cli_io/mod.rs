//! Mesh generators, pattern files and SVG rendering.

pub mod generators;
pub mod pattern_file;
pub mod svg;

pub use generators::{gen_mesh, hex_medial, square_grid, square_medial, MeshFamily, MeshSpec, ThetaPolicy};
pub use pattern_file::{PatternFileV1, Provenance, SCHEMA_VERSION};
pub use svg::{render_svg, SvgOptions};
