//! Diagnostics: energies, pairings, embedding quality and Beltrami fields.

pub mod beltrami;
pub mod embedding;
pub mod energy;
pub mod harmonic_spec;
pub mod hilbert;
pub mod pairing;

pub use beltrami::{beltrami_field, wp_indicators, BeltramiField, WpIndicators};
pub use embedding::{good_embedding_report, GoodEmbeddingReport};
pub use energy::{dirichlet_energy, harmonic_extension_faces, harmonic_extension_vertices, Field};
pub use harmonic_spec::HarmonicSpec;
pub use hilbert::{correlation, hilbert_transform_theta, HilbertResult};
pub use pairing::{
    boundary_sample_to_coeffs, fourier_symplectic, pairing_b, verify_pairing_identity, BoundarySample, CoeffEstimate,
    FourierCoeffs, PairingReport,
};
