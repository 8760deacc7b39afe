//! Numerical laboratory for the Riemann zeros: exact and semiclassical
//! decompositions of the zero-counting function, prime periodic-orbit sums
//! with the class-C sign structure, and random-matrix spectral statistics.

pub mod arith;
pub mod lfunc;
pub mod numeric;
pub mod orbits;
pub mod rmt;
pub mod spectra;
pub mod zeros;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use arith::{Character, PrimeTable};
pub use lfunc::{CriticalPoint, SmoothCount};
pub use orbits::{OrbitTerm, TruncationSpec};
pub use rmt::{EnsembleClass, EnsembleSpec, HermitianMatrix, SpectrumSample};
pub use spectra::{SpacingReference, UnfoldedSequence};
pub use zeros::{CountDecomposition, ZeroCache, ZeroList, ZeroSource};
