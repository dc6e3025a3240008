//! Mod-ℓ Galois images of elliptic curves over Q.
//!
//! The crate decides, for a curve E/Q and a small prime ℓ, the image of
//! Gal(Q̄/Q) acting on E[ℓ] up to conjugacy in GL₂(F_ℓ). Everything is exact:
//! big rationals, dense polynomials over Q, and explicit enumeration of
//! subgroups of GL₂(F_ℓ).

pub mod classifier;
pub mod cli;
pub mod ec;
pub mod exactmath;
pub mod gl2;
pub mod polyq;
pub mod tables;
