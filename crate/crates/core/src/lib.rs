//! Bound states of a quantum particle constrained to the surface of a torus.
//!
//! Squeezing a particle onto a curved surface leaves an attractive curvature
//! potential `V_C = −(H² − K)/2`. On a torus with aspect ratio `α = a/R` this
//! binds states with `β = 2Ea² < 0`. The crate provides:
//!
//! - [`geometry`]: curvatures of Monge surfaces of revolution and the torus,
//! - [`assembly`]: Fourier-Galerkin matrices of the poloidal eigenproblem,
//! - [`eigensolver`]: the generalized dense solve and state normalization,
//! - [`spectra`]: bound-state scans, cutoff and magic-radius checks, and
//!   comparison against reference tables,
//! - [`cli`]: the `toroid` command-line front end.

pub mod assembly;
pub mod cli;
pub mod eigensolver;
pub mod error;
pub mod geometry;
pub mod spectra;

pub use assembly::{ModeSpec, OperatorPair, Parity};
pub use eigensolver::{Eigenstate, Spectrum, Wavefunction};
pub use error::{Error, Result};
pub use geometry::{CurvatureBundle, MongeSurface, TorusGeometry};
