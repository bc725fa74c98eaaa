//! Entangled light from pumped planar semiconductor microcavities.
//!
//! The crate covers the whole chain from microcavity parameters to a certified
//! Schmidt number:
//!
//! * [`cavity`]: photon and polariton dispersions, Hopfield coefficients,
//!   effective branch-dependent interaction and pair amplitudes.
//! * [`phase_matching`]: interbranch phase matching for a train of collinear
//!   pumps.
//! * [`state`]: the `2^N`-dimensional Schmidt representation of the emitted
//!   photon pairs and the arrival-time averaged (dephased) density matrix.
//! * [`witness`]: projector witnesses built from the state support and the
//!   principal-submatrix evaluation of `f_r`.
//! * [`sweep`]: JSON-configured scenario runner behind the `simulate` binary.
//!
//! Units: energies and wave numbers in eV (`hbar = c = 1`), times in 1/eV.

// `!(x > 0.0)` style guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cavity;
pub mod error;
pub mod linalg;
pub mod phase_matching;
pub mod state;
pub mod sweep;
pub mod witness;

pub use cavity::{Branch, CavityParams, HopfieldCoeffs, WaveVector};
pub use error::{Error, Result};
pub use phase_matching::{PairAmplitude, PumpSpec};
pub use state::{BipartiteState, DephasedState, MediumDispersion, Media};
pub use witness::{SearchMode, SnCertificate, WitnessOperator};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
