//! k-free and B-free lattice point sets.
//!
//! The crate generates visible, k-free and B-free subsets of `Zⁿ` and the
//! k-free integers of `Z[√2]`, evaluates their closed-form statistics
//! (density, autocorrelation coefficients, diffraction intensities, patch
//! frequencies, patch-counting entropy) and provides the brute-force
//! counterparts used to cross-check each formula.
//!
//! Module map:
//!
//! - [`arith`]: primes, Möbius, CRT, certified Euler products.
//! - [`pointsets`]: freeness specs, windows, membership, sieving, holes.
//! - [`correlation`]: autocorrelation coefficients, closed and empirical.
//! - [`diffraction`]: intensities, support enumeration, Fourier sums, figures.
//! - [`patches`]: patch extraction, frequencies, census, entropy.
//! - [`ergodics`]: residue-class combinatorics, Cesàro averages, torus maps.
//! - [`numfield`]: arithmetic of `Z[√2]`, its k-free integers and diffraction.
//! - [`io`]: CSV and run-length point set formats.

pub mod arith;
pub mod correlation;
pub mod diffraction;
pub mod ergodics;
pub mod error;
pub mod io;
pub mod numfield;
pub mod patches;
pub mod pointsets;

pub use error::{Error, Result};
pub use pointsets::{FreenessSpec, LatticeWindow, Point, PointSet};

/// Relative error used for Euler constants unless a caller asks otherwise.
pub const DEFAULT_REL_ERR: f64 = 1e-10;
