//! Exact-arithmetic machinery for the maximal families of mutually
//! orthogonal exponentials of planar self-affine measures with
//! three-element integer digit sets.
//!
//! The crate is layered bottom-up:
//!
//! * [`exact`] — big integers/rationals, 2x2 matrices, canonical torus
//!   reduction, elementary number theory;
//! * [`orders`] — matrix orders over residue rings and the lifting
//!   theorems behind them;
//! * [`mask`] — digit sets, mask polynomials and the lattice-coset form of
//!   their zero sets;
//! * [`orbit`] — frequency grids and the orbit/partition machinery on the
//!   torus;
//! * [`transform`] — the affine change-of-coordinates layer and case
//!   classification;
//! * [`spectral`] — orthogonality certificates, bound certificates and the
//!   end-to-end `n*` pipeline;
//! * [`suite`] — seeded randomized verification suites;
//! * [`report`] — JSON-facing serializable report records.

pub mod error;
pub mod exact;
pub mod mask;
pub mod orbit;
pub mod orders;
pub mod report;
pub mod spectral;
pub mod suite;
pub mod transform;

pub use error::{AffError, Result};
