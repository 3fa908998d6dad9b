//! Graded Betti numbers of toric rings, with a focus on Veronese embeddings
//! of projective space.
//!
//! The multigraded Betti number of the toric ring `k[NA]` in degree `b` is the
//! reduced homology of the squarefree divisor complex `Δ_b`, the simplicial
//! complex of point subsets `F ⊆ A` with `b − Σ_F ∈ NA`. This crate builds
//! slices of `Δ_b`, ranks their boundary maps, cross-checks them against the
//! Koszul complex, decomposes Tor modules into Schur functors, and decides
//! Property `N_p` up to a degree bound.

pub mod complex;
pub mod error;
pub mod homology;
pub mod koszul;
pub mod lattice;
pub mod npchecker;
pub mod reptheory;

pub use error::{Error, Result};
