//! Diffraction of particle pairs by a standing light wave (the Kapitza-Dirac
//! effect) in the Raman-Nath regime.
//!
//! A standing light wave of strength `w` and wavenumber `k_L` imprints the
//! phase `exp(-i w (1 + cos 2 k_L x))` on each particle, so the outgoing
//! state is a comb of plane waves `Σ_n b_n exp(i (2 n k_L + k_0) x)`. From
//! this the crate computes joint detection densities in position and momentum
//! space, for distinguishable pairs as well as bosons and fermions, starting
//! from plane-wave or Gaussian states.

pub mod coefficients;
pub mod correlation;
pub mod error;
pub mod momentum;
pub mod multimode;
pub mod oracle;
pub mod quad;
pub mod spatial;
pub mod specfun;

mod types;

pub use coefficients::{DiffractionCoefficients, Truncation};
pub use error::{Error, Result};
pub use types::{GaussianMode, GratingParams, SingleMode, Statistics};
