//! Exact combinatorics of KM fans.
//!
//! A KM fan is a fan of sharp rational cones over a finitely generated
//! abelian group `N` (torsion allowed), decorated with a finite-index lattice
//! `F_σ ⊆ Span σ ∩ N` for every cone. This crate validates such fans, builds
//! the standard constructions (coarse fan, rigidification, roots, dilation,
//! inflation, contraction, canonical resolution, stars, products), classifies
//! morphisms (tame, proper, representable, equidimensional), computes the
//! derived invariants (isotropy, fundamental group, the torsor group `D(f)`),
//! and implements folding and unfolding of GS fans.
//!
//! All arithmetic is exact and arbitrary precision.

pub mod abelian;
pub mod cli;
pub mod cones;
pub mod error;
pub mod gsfan;
pub mod intlinalg;
pub mod kmfan;
pub mod monoids;

pub use error::{Error, Result};
